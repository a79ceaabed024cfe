import json

import numpy as np
import pytest

from palindromic.casestudy import COUNTS_PATH, load_grade_counts
from palindromic.cli import main
from palindromic.errors import TableFileError

ORDER = 'lex-first-fastest'


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def table_file(tmp_path, three_way_table):
    return write_json(tmp_path, 'table.json',
                      {'d': 3, 'order': ORDER, 'probabilities': list(three_way_table.pi)})


@pytest.fixture
def counts_file(tmp_path, grades_counts):
    return write_json(tmp_path, 'counts.json',
                      {'d': 4, 'order': ORDER, 'counts': list(grades_counts)})


@pytest.fixture
def graph_file(tmp_path):
    return write_json(tmp_path, 'graph.json', {'d': 4, 'edges': [[1, 2], [1, 3], [2, 3], [3, 4]]})


# transform -------------------------------------------------------------------

def test_transform_to_log_linear(capsys, table_file):
    report = run_json(capsys, 'transform', '--input', table_file, '--to', 'lambda')
    assert report['kind'] == 'lambda'
    assert report['order'] == ORDER
    assert report['values']['12'] == pytest.approx(np.log(5.0) / 2)
    assert report['values']['13'] == pytest.approx(-np.log(3.0) / 2)


def test_transform_eta_round_trip(capsys, tmp_path, three_way_table, table_file):
    eta = run_json(capsys, 'transform', '--input', table_file, '--to', 'eta')
    assert eta['values']['23'] == pytest.approx(np.arctanh(0.2), abs=1e-9)
    eta_file = write_json(tmp_path, 'eta.json', eta)
    back = run_json(capsys, 'transform', '--input', eta_file, '--from', 'eta', '--to', 'pi')
    assert np.allclose(back['probabilities'], three_way_table.pi, atol=1e-8)


def test_transform_moments_to_table(capsys, tmp_path):
    xi_file = write_json(tmp_path, 'xi.json',
                         {'d': 2, 'kind': 'xi', 'values': {'{}': 1, '12': 0.3}})
    report = run_json(capsys, 'transform', '--input', xi_file, '--to', 'pi')
    assert np.allclose(report['probabilities'], [0.325, 0.175, 0.175, 0.325])


def test_transform_input_errors(capsys, tmp_path, table_file):
    code, _, err = run(capsys, 'transform', '--input', table_file, '--from', 'xi', '--to', 'pi')
    assert code == 2
    no_order = write_json(tmp_path, 'no_order.json', {'d': 1, 'probabilities': [0.5, 0.5]})
    code, _, err = run(capsys, 'transform', '--input', no_order, '--to', 'xi')
    assert code == 2
    assert 'order' in err
    short = write_json(tmp_path, 'short.json', {'d': 2, 'order': ORDER, 'probabilities': [1, 2]})
    assert run(capsys, 'transform', '--input', short, '--to', 'xi')[0] == 2
    broken = tmp_path / 'broken.json'
    broken.write_text('{\n  "d": 2,\n  "order": \n}\n')
    code, _, err = run(capsys, 'transform', '--input', str(broken), '--to', 'xi')
    assert code == 2
    assert 'line' in err
    assert run(capsys, 'transform', '--input', str(tmp_path / 'missing.json'), '--to', 'xi')[0] == 2


def test_transform_numerical_error(capsys, tmp_path):
    xi_file = write_json(tmp_path, 'xi.json', {'d': 2, 'kind': 'xi', 'values': {
        '{}': 1, '1': 0.9, '2': 0.9, '12': -0.9}})
    code, _, err = run(capsys, 'transform', '--input', xi_file, '--to', 'pi')
    assert code == 3
    assert err.startswith('error:')


# fit and test ----------------------------------------------------------------

def test_fit_casestudy_graph(capsys, counts_file, graph_file):
    report = run_json(capsys, 'fit', '--input', counts_file, '--graph', graph_file)
    assert report['method'] == 'decomposable'
    assert report['w_total'] == pytest.approx(10.3587, abs=1e-3)
    assert (report['df_symmetry'], report['df_independence'], report['df_total']) == (8, 3, 11)
    assert list(report['studentized']) == ['12', '13', '23', '34']
    assert report['fitted']['counts'][0] == pytest.approx(21.18, abs=0.006)


def test_fit_saturated_by_default(capsys, counts_file):
    report = run_json(capsys, 'fit', '--input', counts_file)
    assert report['df_independence'] == 0
    assert report['w_independence'] == pytest.approx(0.0, abs=1e-10)


def test_fit_methods_on_the_command_line(capsys, tmp_path, counts_file):
    cycle = write_json(tmp_path, 'cycle.json', {'d': 4, 'edges': [[1, 2], [2, 3], [3, 4], [1, 4]]})
    ipf = run_json(capsys, 'fit', '--input', counts_file, '--graph', cycle)
    newton = run_json(capsys, 'fit', '--input', counts_file, '--graph', cycle, '--method', 'newton')
    assert ipf['method'] == 'ipf' and newton['method'] == 'newton'
    assert np.allclose(ipf['fitted']['counts'], newton['fitted']['counts'], atol=1e-6)
    code, _, _ = run(capsys, 'fit', '--input', counts_file, '--graph', cycle,
                     '--method', 'decomposable')
    assert code == 3


def test_fit_rejects_probabilities_and_wrong_graph(capsys, tmp_path, table_file, counts_file):
    assert run(capsys, 'fit', '--input', table_file)[0] == 2
    small = write_json(tmp_path, 'small.json', {'d': 3, 'edges': [[1, 2]]})
    assert run(capsys, 'fit', '--input', counts_file, '--graph', small)[0] == 2


def test_test_command(capsys, counts_file, graph_file):
    report = run_json(capsys, 'test', '--input', counts_file)
    assert report['palindromic']['w'] == pytest.approx(9.12319, abs=1e-3)
    assert report['palindromic']['df'] == 8
    assert 'model' not in report
    report = run_json(capsys, 'test', '--input', counts_file, '--graph', graph_file)
    assert report['model']['df'] == 11
    assert report['independence']['w'] == pytest.approx(1.23549, abs=1e-3)


def test_text_and_output_file(capsys, tmp_path, counts_file):
    code, out, _ = run(capsys, 'test', '--input', counts_file, '--text')
    assert code == 0
    assert 'palindromic:' in out
    assert 'w: 9.123' in out
    target = tmp_path / 'report.json'
    code, out, _ = run(capsys, 'test', '--input', counts_file, '--output', str(target))
    assert code == 0 and out == ''
    assert json.loads(target.read_text())['palindromic']['df'] == 8


# dichotomize and generate ----------------------------------------------------

def test_dichotomize(capsys, tmp_path):
    path = tmp_path / 'data.csv'
    path.write_text('x,y\n1,10\n2,20\n3,40\n4,30\n')
    report = run_json(capsys, 'dichotomize', '--input', str(path), '--seed', '4')
    assert report['counts'] == [2.0, 0.0, 0.0, 2.0]
    assert report['variables'] == ['x', 'y']
    assert report['margins'] == [[2.0, 2.0], [2.0, 2.0]]
    assert report['xi_hat'] == [[1.0, 1.0], [1.0, 1.0]]


def test_dichotomize_parse_error(capsys, tmp_path):
    path = tmp_path / 'data.csv'
    path.write_text('x,y\n1,10\n2,?\n')
    code, _, err = run(capsys, 'dichotomize', '--input', str(path))
    assert code == 2
    assert 'line 3' in err


def test_dichotomize_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, 'dichotomize', '--input', str(tmp_path / 'nope.csv'))
    assert code == 2
    assert 'cannot read' in err


def test_generate(capsys, tmp_path):
    system = write_json(tmp_path, 'beta.json', {'d': 2, 'beta': [[0.5]]})
    exact = run_json(capsys, 'generate', '--system', system, '--exact')
    assert np.allclose(exact['probabilities'], [0.375, 0.125, 0.125, 0.375])
    first = run_json(capsys, 'generate', '--system', system, '--n', '1000', '--seed', '3')
    second = run_json(capsys, 'generate', '--input', system, '--n', '1000', '--seed', '3')
    assert first == second
    assert sum(first['counts']) == 1000
    assert run(capsys, 'generate', '--system', system)[0] == 2
    bad = write_json(tmp_path, 'bad.json', {'d': 3, 'beta': [[0.5], [0.7, 0.4]]})
    assert run(capsys, 'generate', '--system', bad, '--exact')[0] == 3


# casestudy -------------------------------------------------------------------

def test_casestudy(capsys):
    code, out, _ = run(capsys, 'casestudy')
    assert code == 0
    report = json.loads(out)
    gaussian, binary = report['gaussian'], report['binary']
    assert gaussian['n'] == 78
    assert gaussian['correlations']['12'] == pytest.approx(0.71721, abs=5e-5)
    assert gaussian['graph_fit']['df'] == 2
    assert gaussian['equicorrelation']['rho_hat'] == pytest.approx(0.759651, abs=1e-5)
    assert gaussian['sum_score_correlation'] == pytest.approx(0.706, abs=5e-4)
    assert binary['palindromic_test']['w'] == pytest.approx(9.12319, abs=1e-3)
    assert binary['model_fit']['df_total'] == 11
    assert binary['p_physics_low_given_geometry_low'] == pytest.approx(28 / 39.0)
    assert run(capsys, 'casestudy')[1] == out


def test_casestudy_with_bundled_counts(capsys, tmp_path):
    default = run_json(capsys, 'casestudy')
    explicit = run_json(capsys, 'casestudy', '--counts', COUNTS_PATH)
    assert explicit == default
    wrong = write_json(tmp_path, 'wrong.json', {'d': 3, 'order': ORDER, 'counts': [1] * 8})
    assert run(capsys, 'casestudy', '--counts', wrong)[0] == 2


def test_grade_counts_come_from_bundled_file(tmp_path, grades_counts):
    assert np.array_equal(load_grade_counts().counts, grades_counts)
    probabilities = write_json(tmp_path, 'p.json',
                               {'d': 4, 'order': ORDER, 'probabilities': [1 / 16.0] * 16})
    with pytest.raises(TableFileError):
        load_grade_counts(probabilities)
