'''
Command line front end.

    python -m palindromic transform --input table.json --to eta
    python -m palindromic fit --input counts.json --graph graph.json
    python -m palindromic test --input counts.json
    python -m palindromic dichotomize --input grades.csv --seed 1
    python -m palindromic generate --system beta.json --exact
    python -m palindromic casestudy

Tables are JSON objects {"d": 3, "order": "lex-first-fastest",
"counts": [...]} (or "probabilities"); parameter vectors carry "kind" and a
"values" object keyed by subset ("{}", "1", "12", ...); graphs are
{"d": 4, "edges": [[1, 2], ...]}.  Reports go to stdout as JSON unless
--text or --output is given.  Exit codes: 0 success, 2 bad input,
3 numerical failure.
'''
import argparse
import json
import logging
import sys
from collections import OrderedDict

import numpy as np
import pandas as pd

from . import parameters
from .casestudy import run_casestudy
from .errors import InvalidArgumentError, ParseError, PalindromicError, TableFileError
from .gaussian import DataMatrix, median_dichotomize
from .generate import TriangularSystem, exact_table, sample
from .graphs import Graph, fit_model
from .params import (KINDS, LOG_LINEAR, MOMENT, MVLOGISTIC, CountTable, ParamVector,
                     ProbabilityTable, eta_from_pi, lambda_from_pi, pi_from_eta,
                     pi_from_lambda, pi_from_xi, xi_from_pi)
from .symmetry import symmetrize, wilks_pvalue
from .tensor import check_dim, hadamard_apply, marginal_sum
from .util import mystr

logger = logging.getLogger(__name__)


# -----------------------------------------------------------------------------
# --- File formats ------------------------------------------------------------
# -----------------------------------------------------------------------------

def read_json(path):
    try:
        with open(path) as handle:
            return json.load(handle, object_pairs_hook=OrderedDict)
    except json.JSONDecodeError as exc:
        raise ParseError('{}: {}'.format(path, exc.msg), line=exc.lineno)
    except (IOError, OSError) as exc:
        raise TableFileError('cannot read {}: {}'.format(path, exc))


def table_from_json(data):
    '''
    CountTable or ProbabilityTable from a table file object.  The "order"
    field is mandatory.
    '''
    if not isinstance(data, dict):
        raise TableFileError('table file must hold a JSON object')
    if data.get('order') != parameters.cell_order:
        raise TableFileError('table file must declare "order": "{}", got {!r}'.format(
            parameters.cell_order, data.get('order')))
    if 'd' not in data:
        raise TableFileError('table file lacks "d"')
    d = check_dim(data['d'])
    if ('counts' in data) == ('probabilities' in data):
        raise TableFileError('table file needs exactly one of "counts" and "probabilities"')
    key = 'counts' if 'counts' in data else 'probabilities'
    values = data[key]
    if not isinstance(values, list) or len(values) != 1 << d:
        raise TableFileError('"{}" must list {} numbers for d={}'.format(key, 1 << d, d))
    try:
        values = [float(v) for v in values]
    except (TypeError, ValueError):
        raise TableFileError('"{}" must contain numbers only'.format(key))
    return CountTable(values) if key == 'counts' else ProbabilityTable(values)


def read_table_file(path):
    return table_from_json(read_json(path))


def table_to_json(t):
    if isinstance(t, CountTable):
        return OrderedDict([('d', t.d), ('order', parameters.cell_order),
                            ('counts', [float(c) for c in t.counts])])
    return OrderedDict([('d', t.d), ('order', parameters.cell_order),
                        ('probabilities', [float(p) for p in t.pi])])


def params_from_json(data):
    kind = data.get('kind')
    if kind not in KINDS:
        raise TableFileError('parameter file has unknown kind {!r}'.format(kind))
    if data.get('order', parameters.cell_order) != parameters.cell_order:
        raise TableFileError('parameter file declares order {!r}'.format(data.get('order')))
    try:
        d = check_dim(data['d'])
        return ParamVector.from_dict(kind, d, data['values'])
    except (KeyError, AttributeError) as exc:
        raise TableFileError('malformed parameter file: {}'.format(exc))


def params_to_json(p):
    return OrderedDict([('d', p.d), ('order', parameters.cell_order), ('kind', p.kind),
                        ('values', OrderedDict(zip(p.keys(), (float(v) for v in p.values))))])


def _plain(obj):
    if isinstance(obj, dict):
        return OrderedDict((str(k), _plain(v)) for k, v in obj.items())
    if isinstance(obj, pd.Series):
        return OrderedDict((str(k), _plain(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def render_text(obj, indent=0):
    pad = '  ' * indent
    lines = []
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append('{}{}:'.format(pad, key))
            lines.extend(render_text(value, indent + 1))
        elif isinstance(value, list):
            cells = [mystr(v) if isinstance(v, float) else str(v) for v in value]
            lines.append('{}{}: {}'.format(pad, key, ' '.join(cells)))
        elif isinstance(value, float):
            lines.append('{}{}: {}'.format(pad, key, mystr(value)))
        else:
            lines.append('{}{}: {}'.format(pad, key, value))
    return lines if indent else '\n'.join(lines) + '\n'


# -----------------------------------------------------------------------------
# --- Commands ----------------------------------------------------------------
# -----------------------------------------------------------------------------

_TO_TABLE = {LOG_LINEAR: pi_from_lambda, MOMENT: pi_from_xi}
_FROM_TABLE = {LOG_LINEAR: lambda_from_pi, MOMENT: xi_from_pi, MVLOGISTIC: eta_from_pi}


def cmd_transform(args):
    data = read_json(args.input)
    source = data.get('kind', 'pi') if isinstance(data, dict) else 'pi'
    if args.source not in (None, source):
        raise InvalidArgumentError('--from {} but {} holds {}'.format(args.source, args.input, source))
    if source == 'pi':
        t = table_from_json(data)
        t = t.to_table() if isinstance(t, CountTable) else t
    else:
        p = params_from_json(data)
        t = pi_from_eta(p, tol=args.tol) if source == MVLOGISTIC else _TO_TABLE[source](p)
    if args.to == 'pi':
        return table_to_json(t)
    return params_to_json(_FROM_TABLE[args.to](t))


def _read_counts(path):
    c = read_table_file(path)
    if not isinstance(c, CountTable):
        raise TableFileError('{} holds probabilities; counts are needed'.format(path))
    return c


def _read_graph(spec, d):
    if spec in (None, 'saturated'):
        return Graph.complete(d)
    g = Graph.from_json(read_json(spec))
    if g.d != d:
        raise InvalidArgumentError('graph has {} nodes but the table has d={}'.format(g.d, d))
    return g


def fit_report(fit):
    report = OrderedDict([
        ('method', fit.method),
        ('generators', [list(gen) for gen in fit.generators]),
        ('fitted', table_to_json(fit.fitted)),
        ('w_total', fit.wilks_total), ('df_total', fit.df_total),
        ('w_symmetry', fit.wilks_symmetry), ('df_symmetry', fit.df_symmetry),
        ('w_independence', fit.wilks_independence), ('df_independence', fit.df_independence),
        ('pvalue', wilks_pvalue(fit.wilks_total, fit.df_total)),
    ])
    if fit.studentized is not None:
        report['lambda_hat'] = OrderedDict(
            (k, fit.lambda_hat[k]) for k in fit.studentized.index)
        report['se_lambda'] = fit.se_lambda
        report['studentized'] = fit.studentized
    return report


def cmd_fit(args):
    c = _read_counts(args.input)
    g = _read_graph(args.graph, c.d)
    return fit_report(fit_model(c, g, method=args.method, tol=args.tol))


def cmd_test(args):
    c = _read_counts(args.input)
    sym = symmetrize(c)
    report = OrderedDict([
        ('palindromic', OrderedDict([('w', sym.wilks), ('df', sym.df), ('pvalue', sym.pvalue)])),
    ])
    if args.graph is not None:
        fit = fit_model(c, _read_graph(args.graph, c.d), method=args.method, tol=args.tol)
        report['model'] = OrderedDict([
            ('w', fit.wilks_total), ('df', fit.df_total),
            ('pvalue', wilks_pvalue(fit.wilks_total, fit.df_total))])
        report['independence'] = OrderedDict([
            ('w', fit.wilks_independence), ('df', fit.df_independence),
            ('pvalue', wilks_pvalue(fit.wilks_independence, fit.df_independence))])
    return report


def cmd_dichotomize(args):
    data = DataMatrix.from_csv(args.input)
    c = median_dichotomize(data, seed=args.seed)
    xi = hadamard_apply(c.counts) / c.n
    xi_hat = np.eye(c.d)
    for s in range(c.d):
        for u in range(s + 1, c.d):
            xi_hat[s, u] = xi_hat[u, s] = xi[(1 << s) | (1 << u)]
    report = table_to_json(c)
    report['variables'] = data.columns
    report['margins'] = [marginal_sum(c.counts, 1 << v, c.d) for v in range(c.d)]
    report['xi_hat'] = xi_hat
    return report


def cmd_generate(args):
    system = TriangularSystem.from_json(read_json(args.system))
    if args.exact:
        return table_to_json(exact_table(system))
    if args.n is None:
        raise InvalidArgumentError('--n is required unless --exact is given')
    return table_to_json(sample(system, args.n, seed=args.seed))


def cmd_casestudy(args):
    counts = None
    if args.counts is not None:
        counts = _read_counts(args.counts)
        if counts.d != 4:
            raise InvalidArgumentError('case-study counts need d=4, got d={}'.format(counts.d))
    return run_casestudy(counts)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='palindromic',
        description='Joint Bernoulli parameterizations and palindromic model fitting.')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log INFO (-v) or DEBUG (-vv) messages to stderr')
    common = argparse.ArgumentParser(add_help=False)
    style = common.add_mutually_exclusive_group()
    style.add_argument('--json', dest='text', action='store_false', default=False,
                       help='JSON report (default)')
    style.add_argument('--text', dest='text', action='store_true', default=False,
                       help='plain text report')
    common.add_argument('--output', '-o', help='write the report here instead of stdout')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('transform', parents=[common], help='convert between parameterizations')
    p.add_argument('--input', required=True, help='table or parameter JSON file')
    p.add_argument('--from', dest='source', choices=('pi',) + KINDS,
                   help='kind held by the input (checked against the file)')
    p.add_argument('--to', required=True, choices=('pi',) + KINDS)
    p.add_argument('--tol', type=float, help='tolerance of the eta solver')
    p.set_defaults(func=cmd_transform)

    for name, func, helptext in (('fit', cmd_fit, 'fit a palindromic graphical model'),
                                 ('test', cmd_test, 'Wilks tests of symmetry and of a graph')):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument('--input', required=True, help='count table JSON file')
        p.add_argument('--graph', default='saturated' if name == 'fit' else None,
                       help='graph JSON file or "saturated"')
        p.add_argument('--method', default='auto', choices=('auto', 'decomposable', 'ipf', 'newton'))
        p.add_argument('--tol', type=float, help='convergence tolerance of iterative fits')
        p.set_defaults(func=func)

    p = sub.add_parser('dichotomize', parents=[common], help='median-dichotomize a CSV file')
    p.add_argument('--input', required=True, help='CSV file, one observation per row')
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=cmd_dichotomize)

    p = sub.add_parser('generate', parents=[common], help='table of a linear triangular system')
    p.add_argument('--system', '--input', dest='system', required=True,
                   help='JSON file with "d" and the rows of beta')
    p.add_argument('--n', type=int, help='sample size')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--exact', action='store_true', help='exact probabilities instead of a sample')
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('casestudy', parents=[common], help='reproduce the grades case study')
    p.add_argument('--counts', help='replace the bundled dichotomized counts')
    p.set_defaults(func=cmd_casestudy)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    try:
        report = _plain(args.func(args))
    except PalindromicError as exc:
        sys.stderr.write('error: {}\n'.format(exc))
        return exc.exit_code
    text = render_text(report) if args.text else json.dumps(report, indent=2) + '\n'
    if args.output:
        with open(args.output, 'w') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0
