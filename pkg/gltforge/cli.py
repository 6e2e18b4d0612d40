'''
Created on 18 Oct 2026

@author: gltforge developers

The gltforge command: one JSON experiment config per run, dispatched on its
"kind".  Exit status 0 on success, 1 when a numerical module fails, 2 for a
bad config and 3 when the identity suite finds a failing identity.
'''
import argparse
import csv
import json
import logging
import sys

import numpy as np

from gltforge import (
    __version__, algebra, configuration, curves, flows, glt, hkverify, logger,
    serialize)
from gltforge.configuration import (
    AppConfig, ConfigPropertyInvalidValue, non_negative_int, positive_int)
from gltforge.errors import GltForgeError


_cfg = configuration.getConfig(
    __name__,
    threads=dict(value=1, validate=positive_int),
    seed=dict(value=0, validate=non_negative_int),
)

EXIT_OK = 0
EXIT_MODULE_ERROR = 1
EXIT_CONFIG_ERROR = 2
EXIT_IDENTITY_FAILURE = 3

THREADS_ENV = 'GLTFORGE_THREADS'

CONFIG_ERRORS = (
    serialize.ConfigSchemaError,
    configuration.ConfigError,
    logger.LoggerConfDoesNotExist,
)

DEFAULT_FORMAT = {
    'glt-solve': 'json',
    'hk-verify': 'csv',
    'flow-run': 'jsonl',
    'gz-analyze': 'json',
    'identity-suite': 'csv',
    'curve-periods': 'json',
}

# identity suite thresholds
IDENTITY_RTOL = 1e-8


class Result(object):
    '''
    What a runner hands back: the JSON document, the flat rows for CSV and
    JSON-lines output, the exit status and an optional text summary that
    replaces the output on stdout.
    '''

    def __init__(self, document, rows, status=EXIT_OK, summary=None):
        self.document = document
        self.rows = rows
        self.status = status
        self.summary = summary


def _intformat(name, value):
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigPropertyInvalidValue(name, value, 'an integer')


def _split(prefix, values):
    row = {}
    for k, v in enumerate(np.atleast_1d(values)):
        row['%s%d_re' % (prefix, k)] = float(np.real(v))
        row['%s%d_im' % (prefix, k)] = float(np.imag(v))
    return row


def _complex_list(obj):
    return np.array([serialize.complex_from_json(c) for c in obj])


def run_glt_solve(config, seed, threads):
    spec = serialize.spec_from_json(config['spec'])
    guess = _complex_list(config['guess']) if 'guess' in config else None

    def solve(point):
        u, z = _complex_list(point['u']), _complex_list(point['z'])
        solved = glt.solve_constraints(spec, z, u, guess)
        return dict(u=u, z=z, w=solved.w,
                    K=glt.kahler_potential(spec, solved),
                    iterations=solved.iterations, residual=solved.residual,
                    condition=solved.condition,
                    twistor=glt.twistor_first_order(spec, solved),
                    nondegeneracy=glt.nondegeneracy(spec, solved).verdict)

    records = hkverify.sweep(solve, config['points'], threads)
    rows = []
    for r in records:
        row = _split('u', r['u'])
        row.update(_split('z', r['z']))
        row.update(K=float(r['K']), iterations=r['iterations'],
                   residual=r['residual'], nondegeneracy=r['nondegeneracy'])
        rows.append(row)
    return Result(dict(spec=spec.name, points=records), rows)


def run_hk_verify(config, seed, threads):
    log = logging.getLogger(__name__)
    spec = serialize.spec_from_json(config['spec'])
    points = hkverify.grid(config['grid']['ranges'], config['grid']['shape'])
    records = hkverify.verify_grid(spec, points, threads,
                                   h=config['grid'].get('step'))
    report = hkverify.flatness(records)
    log.info("hk-verify(%s): %d points, metric spread %.3e, factor spread "
             "%.3e, worst sp residual %.3e", spec.name, len(records),
             report.spread, report.factor_spread, report.sp_residual)
    return Result(dict(spec=spec.name, points=records, flatness=report),
                  [hkverify.describe(r) for r in records])


def run_flow(config, seed, threads):
    log = logging.getLogger(__name__)
    rng = np.random.default_rng(seed)
    kind = config['flow']
    runs, rows = [], []
    for run in range(config.get('count', 1)):
        T0 = flows.random_skew_triple(rng, config['n'],
                                      config.get('scale', 1.0))
        traj = flows.run_flow(T0, kind, config['s_span'], config.get('tol'))
        log.info("flow-run: run %d %s after %d steps", run, traj.diagnosis,
                 len(traj.s) - 1)
        runs.append(dict(run=run, diagnosis=traj.diagnosis,
                         blowup=traj.blowup, steps=len(traj.s) - 1))
        for record in traj.records():
            record['run'] = run
            rows.append(record)
    return Result(dict(flow=kind, runs=runs, steps=rows), rows)


def run_gz_analyze(config, seed, threads):
    if 'matpoly' in config:
        A = serialize.matpoly_from_json(config['matpoly'])
    else:
        A = algebra.random_matpoly(np.random.default_rng(seed), config['n'],
                                   config.get('d', 2))
    samples = config.get('samples', 32)
    intersections = algebra.gz_intersections(A)
    document = dict(
        n=A.n, d=A.d,
        curves=algebra.gz_curves(A),
        intersections=intersections,
        regularity=algebra.regularity_scan(A, samples, seed),
        ms0=algebra.ms0_scan(A, samples, seed))
    rows = [dict(m=i.m, degree=i.degree, bound=i.bound,
                 shared_component=i.shared_component, roots=len(i.zetas))
            for i in intersections]
    return Result(document, rows)


def _triangular_residual(A, zeta, eta):
    '''
    Largest relative gap between the Gelfand-Zeitlin curves of the lower
    triangular part of A and the products of its diagonal entries.
    '''
    L = algebra.MatPoly(np.tril(A.mats))
    diag = L(zeta).diagonal()
    worst = 0.0
    for m, P in enumerate(algebra.gz_curves(L), start=1):
        expected = np.prod(eta - diag[:m])
        worst = max(worst, abs(P(zeta, eta) - expected)
                    / max(1.0, abs(expected)))
    return worst


def identity_checks(rng, instances, sizes):
    '''
    The algebra identity battery on seeded random matrix polynomials: one
    row per identity with the worst relative residual.
    '''
    worst = dict(weinstein_aronszajn=0.0, adjugate_column=0.0,
                 gz_triangular=0.0)
    bound_violations = 0
    for _ in range(instances):
        n = int(rng.integers(sizes[0], sizes[1] + 1))
        A = algebra.random_matpoly(rng, n, 2)
        zeta, eta = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        det = np.linalg.det(eta * np.eye(n) - A(zeta))
        worst['weinstein_aronszajn'] = max(
            worst['weinstein_aronszajn'],
            abs(algebra.wa_residual(A, zeta, eta)) / max(1.0, abs(det)))
        cols = algebra.adjugate_column_check(A, zeta, eta)
        worst['adjugate_column'] = max(worst['adjugate_column'],
                                       max(cols.s, cols.s_prime) / cols.scale)
        worst['gz_triangular'] = max(worst['gz_triangular'],
                                     _triangular_residual(A, zeta, eta))
        bound_violations += sum(1 for i in algebra.gz_intersections(A)
                                if not i.shared_component
                                and i.degree > i.bound)
    rows = [dict(identity=name, instances=instances, worst=value,
                 threshold=IDENTITY_RTOL, passed=value < IDENTITY_RTOL)
            for name, value in worst.items()]
    rows.append(dict(identity='resultant_degree_bound', instances=instances,
                     worst=float(bound_violations), threshold=0.0,
                     passed=bound_violations == 0))
    return rows


def run_identity_suite(config, seed, threads):
    rng = np.random.default_rng(seed)
    rows = identity_checks(rng, config.get('instances', 100),
                           config.get('sizes', [2, 5]))
    table = ''.join('%-24s %6d  worst=%.3e  %s\n' % (
        row['identity'], row['instances'], row['worst'],
        'PASS' if row['passed'] else 'FAIL') for row in rows)
    status = EXIT_OK if all(r['passed'] for r in rows) \
        else EXIT_IDENTITY_FAILURE
    return Result(dict(seed=seed, checks=rows), rows, status, table)


def run_curve_periods(config, seed, threads):
    curve = serialize.curve_from_json(config['curve'])
    cycle = serialize.cycle_from_json(config['cycle'], curve)
    transfers = curves.check_transfer_points(curve, cycle)
    rows = []
    for k, obj in enumerate(config['differentials']):
        diff = serialize.differential_from_json(obj)
        value = curves.integrate_cycle(curve, diff, cycle)
        row = dict(differential=k, r=obj.get('r'), s=obj.get('s'))
        row.update(_split('period', [value]))
        rows.append(row)
    return Result(dict(periods=rows, transfer_points=transfers), rows)


RUNNERS = {
    'glt-solve': run_glt_solve,
    'hk-verify': run_hk_verify,
    'flow-run': run_flow,
    'gz-analyze': run_gz_analyze,
    'identity-suite': run_identity_suite,
    'curve-periods': run_curve_periods,
}


def _fieldnames(rows):
    names = []
    for row in rows:
        names.extend(k for k in row if k not in names)
    return names


def write_result(result, path, fmt):
    '''
    Write the result as one JSON document, JSON lines or RFC-4180 CSV, to
    path or to stdout.
    '''
    out = sys.stdout if path in (None, '-') else open(path, 'w', newline='')
    try:
        if fmt == 'json':
            json.dump(serialize.to_jsonable(result.document), out, indent=2)
            out.write('\n')
        elif fmt == 'jsonl':
            for row in result.rows:
                out.write(json.dumps(serialize.to_jsonable(row)) + '\n')
        else:
            rows = [{k: v for k, v in row.items()
                     if np.ndim(v) == 0 and not isinstance(v, complex)}
                    for row in result.rows]
            writer = csv.DictWriter(out, fieldnames=_fieldnames(rows))
            writer.writeheader()
            writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()


def run(config, seed=None, threads=None, out=None):
    '''
    Validate and execute one experiment config.  seed, threads and out
    override the config; returns the exit status.  The config settings
    hold for this run only.
    '''
    serialize.validate(config)
    with configuration.preserved(sorted(config.get('settings') or {})):
        configuration.apply_settings(config.get('settings'))
        return _run(config, seed, threads, out)


def _run(config, seed, threads, out):
    log = logging.getLogger(__name__)
    seed_cfg = AppConfig(__name__ + '.seed', argalias=seed,
                         dictconfig=config, dictalias=['seed'],
                         default_value=0)
    threads_cfg = AppConfig(__name__ + '.threads', argalias=threads,
                            envalias=[THREADS_ENV], envformat=_intformat,
                            dictconfig=config, dictalias=['threads'],
                            default_value=1)
    seed, threads = seed_cfg.resolve(), threads_cfg.resolve()
    kind = config['kind']
    log.info("run(%s): seed=%r threads=%r", kind, seed, threads)
    result = RUNNERS[kind](config, seed, threads)
    output = config.get('output', {})
    path = out or output.get('path')
    if result.summary is not None:
        sys.stdout.write(result.summary)
    if path is not None or result.summary is None:
        write_result(result, path, output.get('format', DEFAULT_FORMAT[kind]))
    return result.status


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        prog='gltforge',
        description='Run a generalised Legendre transform experiment.')
    parser.add_argument('config', help='experiment config (JSON)')
    parser.add_argument('--seed', type=int, default=None,
                        help='random seed, overrides the config')
    parser.add_argument('--threads', type=int, default=None,
                        help='worker threads for sweeps (default: %s or 1)'
                        % (THREADS_ENV,))
    parser.add_argument('--out', default=None,
                        help='output path, overrides the config ("-" for '
                        'stdout)')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('-q', '--quiet', action='count', default=0)
    parser.add_argument('--log-config', default=None,
                        help='JSON logging dictConfig file')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    log = logging.getLogger(__name__)
    try:
        logger.configure(args.log_config, args.verbose, args.quiet)
    except logger.LoggerConfDoesNotExist as e:
        sys.stderr.write('%s\n' % (e.msg,))
        return EXIT_CONFIG_ERROR
    try:
        config = serialize.load_config(args.config)
        return run(config, args.seed, args.threads, args.out)
    except CONFIG_ERRORS as e:
        log.error("configuration error: %s", getattr(e, 'msg', e))
        return EXIT_CONFIG_ERROR
    except GltForgeError as e:
        log.error("%s failed: %s", args.config, e.msg)
        return EXIT_MODULE_ERROR


if __name__ == '__main__':
    sys.exit(main())
