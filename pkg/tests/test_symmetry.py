import itertools

import numpy as np
import pytest

from palindromic.errors import EmptyDataError, InvalidArgumentError
from palindromic.params import (CountTable, ProbabilityTable, eta_from_pi, lambda_from_pi,
                                marginal_table, xi_from_pi)
from palindromic.symmetry import (is_palindromic, odd_order_max, reverse_complement,
                                  symmetrize, wilks_palindromic, wilks_pvalue)

from helpers import random_palindromic_table, random_table

GRADES_SYMMETRIZED = [22, 2, 2.5, 1.5, 1, 1, 1.5, 7.5, 7.5, 1.5, 1, 1, 1.5, 2.5, 2, 22]


def test_predicate_on_known_tables(three_way_table, ci_given_third, pair_block_table):
    assert is_palindromic(three_way_table)
    assert is_palindromic(ci_given_third)
    assert is_palindromic(pair_block_table)
    assert is_palindromic(ProbabilityTable.uniform(5))
    assert not is_palindromic(ProbabilityTable([0.3, 0.2, 0.1, 0.4]))


def test_predicate_routes_agree(rng):
    for d in range(1, 7):
        sym = random_palindromic_table(rng, d)
        skew = random_table(rng, d)
        assert is_palindromic(sym, route='cells')
        assert is_palindromic(sym, route='moments')
        assert not is_palindromic(skew, route='cells')
        assert not is_palindromic(skew, route='moments')


def test_predicate_tolerance():
    t = ProbabilityTable([0.25 + 1e-6, 0.25, 0.25, 0.25 - 1e-6])
    assert not is_palindromic(t)
    assert is_palindromic(t, tol=1e-5)
    with pytest.raises(InvalidArgumentError):
        is_palindromic(t, tol=-1.0)
    with pytest.raises(InvalidArgumentError):
        is_palindromic(t, route='hadamard')


def test_predicate_accepts_counts(grades_counts):
    assert not is_palindromic(CountTable(grades_counts))
    assert is_palindromic(CountTable(GRADES_SYMMETRIZED))


def test_reverse_complement_is_involution(rng, three_way_table):
    t = random_table(rng, 4)
    assert np.allclose(reverse_complement(reverse_complement(t)).pi, t.pi)
    assert np.allclose(reverse_complement(three_way_table).pi, three_way_table.pi)


def test_odd_orders_vanish_on_palindromic_tables(rng):
    for d in range(2, 7):
        t = random_palindromic_table(rng, d)
        assert odd_order_max(lambda_from_pi(t)) < 1e-12
        assert odd_order_max(xi_from_pi(t)) < 1e-12
        assert odd_order_max(eta_from_pi(t)) < 1e-12


def test_odd_orders_detect_asymmetry(rng):
    for d in range(2, 6):
        t = random_table(rng, d)
        assert odd_order_max(lambda_from_pi(t)) > 1e-6
        assert odd_order_max(xi_from_pi(t)) > 1e-6


def test_margins_of_palindromic_tables_are_palindromic(rng):
    for d in range(2, 7):
        for _ in range(3):
            t = random_palindromic_table(rng, d)
            for size in range(1, d + 1):
                for nodes in itertools.combinations(range(1, d + 1), size):
                    assert is_palindromic(marginal_table(t, nodes), tol=1e-12)


def test_symmetrize_small_table():
    fit = symmetrize(CountTable([3, 1, 2, 2]))
    assert np.allclose(fit.fitted.counts, [2.5, 1.5, 1.5, 2.5])
    assert fit.wilks == pytest.approx(0.541153, abs=1e-6)
    assert fit.df == 2
    assert np.allclose(fit.p_hat.pi, np.array([2.5, 1.5, 1.5, 2.5]) / 8.0)
    assert fit.xi_hat['1'] == 0.0 and fit.xi_hat['2'] == 0.0
    assert fit.xi_hat['12'] == pytest.approx(0.25)


def test_symmetrize_case_study_counts(grades_counts):
    fit = symmetrize(CountTable(grades_counts))
    assert np.allclose(fit.fitted.counts, GRADES_SYMMETRIZED)
    assert fit.fitted.n == pytest.approx(78.0)
    assert fit.wilks == pytest.approx(9.12319, abs=1e-4)
    assert fit.df == 8
    assert 0.3 < fit.pvalue < 0.4
    assert odd_order_max(fit.xi_hat) == 0.0
    assert odd_order_max(xi_from_pi(fit.p_hat)) < 1e-12


def test_symmetrize_is_idempotent(grades_counts):
    once = symmetrize(CountTable(grades_counts))
    twice = symmetrize(once.fitted)
    assert np.allclose(twice.fitted.counts, once.fitted.counts)
    assert twice.wilks == pytest.approx(0.0, abs=1e-12)


def test_symmetrized_counts_maximize_likelihood(rng, grades_counts):
    n = grades_counts
    best = symmetrize(CountTable(n)).p_hat.pi

    def loglik(p):
        return float(np.sum(n * np.log(p)))

    for _ in range(100):
        other = random_palindromic_table(rng, 4, low=0.01).pi
        mixed = ProbabilityTable(0.9 * best + 0.1 * other).pi
        assert loglik(mixed) <= loglik(best) + 1e-12


def test_wilks_statistic_matches_symmetrize(rng):
    for d in range(1, 6):
        counts = rng.integers(0, 20, size=1 << d).astype(float)
        counts[0] += 1
        w, df = wilks_palindromic(CountTable(counts))
        assert w >= 0.0
        assert df == 1 << (d - 1)
        assert w == pytest.approx(symmetrize(CountTable(counts)).wilks)


def test_wilks_zero_for_palindromic_counts():
    w, df = wilks_palindromic([5, 2, 2, 5])
    assert w == pytest.approx(0.0, abs=1e-14)
    assert wilks_pvalue(w, df) == pytest.approx(1.0)


def test_empty_pair_has_no_probability_estimate():
    fit = symmetrize(CountTable([4, 0, 0, 2, 2, 0, 0, 4]))
    assert fit.p_hat is None
    assert fit.wilks == pytest.approx(0.0, abs=1e-14)


def test_empty_counts_rejected():
    with pytest.raises(EmptyDataError):
        symmetrize(CountTable([0, 0, 0, 0]))
