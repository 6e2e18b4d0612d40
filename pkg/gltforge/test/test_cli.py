'''
Created on 18 Oct 2026

@author: gltforge developers
'''
import contextlib
import csv
import io
import json
import logging
import os
import tempfile
import unittest
from unittest import mock

import numpy as np

from gltforge import cli, configuration, flows, logger, serialize


logger.init(logger.TEST_LOGGING_CONFIG)

CONFIGS = os.path.join(os.path.dirname(__file__), 'configs')

QUARTIC = {'components': [{'alphas': [
    [[0, 0], [0, 0], [0, 0]],
    [[1, 0], [0, 0], [0, 0], [0, 0], [-1, 0]]]}]}


class _CliTestCase(unittest.TestCase):
    '''
    A scratch directory per test; logging and the application records are
    put back afterwards.
    '''

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.saved = {name: configuration.getConfigRecord(name).value
                      for name in ('gltforge.cli.threads', 'gltforge.cli.seed',
                                   'gltforge.flows.tol')}

    def tearDown(self):
        for name, value in self.saved.items():
            configuration.getConfigRecord(name).value = value
        os.environ.pop(cli.THREADS_ENV, None)
        self.tmp.cleanup()
        logger.init(logger.TEST_LOGGING_CONFIG)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write_config(self, config, name='config.json'):
        path = self.path(name)
        with open(path, 'w') as f:
            json.dump(config, f)
        return path

    def main(self, config, *args):
        '''
        Run the command on a config dict; returns (status, stdout).
        '''
        argv = ['-q', '-q'] + list(args) + [self.write_config(config)]
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            status = cli.main(argv)
        return status, out.getvalue()


class TestExitCodes(_CliTestCase):

    def test_exit01(self):
        '''
        Invalid and unreadable configs exit with 2.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        self.assertEqual(cli.EXIT_CONFIG_ERROR, self.main({})[0])
        self.assertEqual(cli.EXIT_CONFIG_ERROR, self.main(
            {'kind': 'flow-run', 'flow': 'eta2', 'n': 0, 's_span': [0, 1]})[0])
        self.assertEqual(cli.EXIT_CONFIG_ERROR,
                         cli.main(['-q', '-q', self.path('missing.json')]))
        self.assertEqual(cli.EXIT_CONFIG_ERROR, cli.main(
            ['-q', '--log-config', self.path('nolog.json'),
             self.write_config({'kind': 'identity-suite'})]))

    def test_exit02(self):
        '''
        A numerical failure exits with 1.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        status, _ = self.main({'kind': 'glt-solve', 'spec': 'cubic-harmonic',
                               'points': [{'u': [[-1, 0]], 'z': [[0, 0]]}],
                               'output': {'path': self.path('out.json')}})
        self.assertEqual(cli.EXIT_MODULE_ERROR, status)

    def test_settings01(self):
        '''
        settings reach the module records for the run and are put back
        afterwards; unknown or invalid ones are config errors.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        base = {'kind': 'flow-run', 'flow': 'eta2', 'n': 2, 's_span': [0, 0.01],
                'output': {'path': self.path('flow.jsonl')}}
        before = flows._cfg.tol.value
        seen = []
        runner = cli.RUNNERS['flow-run']

        def capture(config, seed, threads):
            seen.append(flows._cfg.tol.value)
            return runner(config, seed, threads)

        with mock.patch.dict(cli.RUNNERS, {'flow-run': capture}):
            status, _ = self.main(
                dict(base, settings={'gltforge.flows.tol': 1e-9}))
        self.assertEqual(cli.EXIT_OK, status)
        self.assertEqual([1e-9], seen)
        self.assertEqual(before, flows._cfg.tol.value)
        self.assertEqual(cli.EXIT_CONFIG_ERROR, self.main(
            dict(base, settings={'gltforge.flows.no_such_tol': 1.0}))[0])
        self.assertEqual(cli.EXIT_CONFIG_ERROR, self.main(
            dict(base, settings={'gltforge.flows.blowup_factor': 1e3,
                                 'gltforge.flows.tol': -1.0}))[0])
        self.assertEqual(before, flows._cfg.tol.value)
        self.assertEqual(1e8, flows._cfg.blowup_factor.value)


class TestRunners(_CliTestCase):

    def test_flow01(self):
        '''
        flow-run writes one JSON line per accepted step with small
        invariant drift.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        out = self.path('flow.jsonl')
        status, _ = self.main({'kind': 'flow-run', 'flow': 'eta2', 'n': 2,
                               'seed': 7, 's_span': [0, 0.2], 'tol': 1e-11,
                               'count': 2, 'output': {'path': out}})
        self.assertEqual(cli.EXIT_OK, status)
        with open(out) as f:
            rows = [json.loads(line) for line in f]
        self.assertEqual({0, 1}, {r['run'] for r in rows})
        self.assertEqual(0.0, rows[0]['s'])
        self.assertEqual((2, 2, 2), np.shape(rows[0]['T1']))
        self.assertLess(max(r['invariant_drift'] for r in rows), 1e-8)
        self.assertEqual(7, cli._cfg.seed.value)

    def test_flow02(self):
        '''
        The seed determines the run; --seed overrides the config.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        config = {'kind': 'flow-run', 'flow': 'nahm', 'n': 2, 'seed': 3,
                  's_span': [0, 0.05], 'output': {'format': 'jsonl'}}
        first = self.main(config)[1]
        self.assertEqual(first, self.main(config)[1])
        self.assertNotEqual(first, self.main(config, '--seed', '4')[1])
        self.assertEqual(4, cli._cfg.seed.value)

    def test_hkverify01(self):
        '''
        hk-verify writes a CSV row per grid point; GLTFORGE_THREADS is used
        unless --threads is given.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        out = self.path('cubic.csv')
        config = {'kind': 'hk-verify', 'spec': 'cubic-harmonic',
                  'grid': {'ranges': [[1, 2], [0, 0], [0.1, 0.3], [0, 0]],
                           'shape': [2, 1, 2, 1]},
                  'output': {'path': out}}
        os.environ[cli.THREADS_ENV] = '2'
        self.assertEqual(cli.EXIT_OK, self.main(config)[0])
        self.assertEqual(2, cli._cfg.threads.value)
        with open(out, newline='') as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(4, len(rows))
        self.assertIn('J2_residual', rows[0])
        self.assertEqual('0,4', rows[0]['signature'])
        self.assertLess(max(float(r['J2_residual']) for r in rows), 1e-6)
        self.assertEqual(cli.EXIT_OK,
                         self.main(config, '--threads', '3')[0])
        self.assertEqual(3, cli._cfg.threads.value)
        os.environ[cli.THREADS_ENV] = 'many'
        self.assertEqual(cli.EXIT_CONFIG_ERROR, self.main(config)[0])

    def test_identity01(self):
        '''
        The identity suite prints its table and passes.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        status, text = self.main({'kind': 'identity-suite', 'seed': 5,
                                  'instances': 4, 'sizes': [2, 3]})
        self.assertEqual(cli.EXIT_OK, status)
        lines = text.splitlines()
        self.assertEqual(4, len(lines))
        self.assertTrue(all(line.endswith('PASS') for line in lines))
        rows = cli.identity_checks(np.random.default_rng(5), 4, [2, 3])
        self.assertEqual(['weinstein_aronszajn', 'adjugate_column',
                          'gz_triangular', 'resultant_degree_bound'],
                         [r['identity'] for r in rows])

    def test_glt01(self):
        '''
        glt-solve reports K at each point.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        out = self.path('cubic.json')
        status, _ = self.main({'kind': 'glt-solve', 'spec': 'cubic-harmonic',
                               'points': [{'u': [[1.5, 0]], 'z': [[0.2, 0]]},
                                          {'u': [[2.5, 0]], 'z': [[0, 0]]}],
                               'output': {'path': out}})
        self.assertEqual(cli.EXIT_OK, status)
        with open(out) as f:
            document = json.load(f)
        self.assertEqual('cubic-harmonic', document['spec'])
        K = [p['K'] for p in document['points']]
        self.assertAlmostEqual(K[0], -4.0 * 0.52 ** 1.5, places=9)
        self.assertAlmostEqual(K[1], -4.0 * (5.0 / 6.0) ** 1.5, places=9)
        self.assertEqual('not applicable',
                         document['points'][0]['nondegeneracy'])

    def test_periods01(self):
        '''
        curve-periods integrates each differential over the cycle.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        out = self.path('periods.json')
        status, _ = self.main({
            'kind': 'curve-periods', 'curve': QUARTIC,
            'cycle': {'loops': [{'rectangle': [-1.5, 1.5, -0.5, 0.5]}]},
            'differentials': [{'r': 0, 's': 0}],
            'output': {'path': out}})
        self.assertEqual(cli.EXIT_OK, status)
        with open(out) as f:
            document = json.load(f)
        row = document['periods'][0]
        self.assertAlmostEqual(abs(complex(row['period0_re'],
                                           row['period0_im'])),
                               2.6220575543, places=8)
        self.assertEqual([], document['transfer_points'])

    def test_gz01(self):
        '''
        gz-analyze on a random matrix polynomial.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        out = self.path('gz.json')
        status, _ = self.main({'kind': 'gz-analyze', 'n': 3, 'seed': 2,
                               'samples': 8, 'output': {'path': out}})
        self.assertEqual(cli.EXIT_OK, status)
        with open(out) as f:
            document = json.load(f)
        self.assertEqual((3, 2), (document['n'], document['d']))
        self.assertEqual(3, len(document['curves']))
        self.assertEqual(2, len(document['intersections']))

class TestExamples(_CliTestCase):
    '''
    The shipped example configs under test/configs, loaded from disk and
    passed to cli.run.
    '''

    def example(self, name, out=None):
        '''
        Load and run one example; returns (status, stdout, output path).
        '''
        config = serialize.load_config(os.path.join(CONFIGS, name + '.json'))
        path = self.path(out or name)
        text = io.StringIO()
        with contextlib.redirect_stdout(text):
            status = cli.run(config, out=path)
        return status, text.getvalue(), path

    def test_example01(self):
        '''
        Every example config validates; the empty one does not.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        names = sorted(f for f in os.listdir(CONFIGS) if f.endswith('.json'))
        self.assertEqual(8, len(names))
        for name in names:
            path = os.path.join(CONFIGS, name)
            if name == 'empty.json':
                with self.assertRaises(serialize.ConfigSchemaError):
                    serialize.load_config(path)
                self.assertEqual(cli.EXIT_CONFIG_ERROR,
                                 cli.main(['-q', '-q', path]))
            else:
                self.assertIn('kind', serialize.load_config(path))

    def test_example02(self):
        '''
        glt-solve on the flat and cubic closed specs.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        status, _, path = self.example('glt-solve-flat')
        self.assertEqual(cli.EXIT_OK, status)
        with open(path) as f:
            document = json.load(f)
        self.assertAlmostEqual(document['points'][0]['K'], -1.175, places=9)
        status, _, path = self.example('glt-solve-cubic')
        self.assertEqual(cli.EXIT_OK, status)
        with open(path) as f:
            document = json.load(f)
        self.assertAlmostEqual(document['points'][0]['K'],
                               -4.0 * 0.52 ** 1.5, places=9)

    def test_example03(self):
        '''
        hk-verify on a 3 x 3 cubic grid writes nine CSV rows.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        status, _, path = self.example('hk-verify-cubic')
        self.assertEqual(cli.EXIT_OK, status)
        with open(path, newline='') as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(9, len(rows))
        self.assertIn('factor_re', rows[0])
        self.assertLess(max(float(r['sp_residual']) for r in rows), 1e-6)
        self.assertLess(max(float(r['J2_residual']) for r in rows), 1e-6)

    def test_example04(self):
        '''
        flow-run writes a trajectory with small invariant drift.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        status, _, path = self.example('flow-run-eta2')
        self.assertEqual(cli.EXIT_OK, status)
        with open(path) as f:
            rows = [json.loads(line) for line in f]
        self.assertAlmostEqual(0.2, rows[-1]['s'])
        self.assertLess(max(r['invariant_drift'] for r in rows), 1e-8)

    def test_example05(self):
        '''
        gz-analyze, the identity suite and curve-periods.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        status, _, path = self.example('gz-analyze')
        self.assertEqual(cli.EXIT_OK, status)
        with open(path) as f:
            self.assertEqual(3, len(json.load(f)['curves']))
        status, text, _ = self.example('identity-suite')
        self.assertEqual(cli.EXIT_OK, status)
        self.assertTrue(all(line.endswith('PASS')
                            for line in text.splitlines()))
        status, _, path = self.example('curve-periods-quartic')
        self.assertEqual(cli.EXIT_OK, status)
        with open(path) as f:
            row = json.load(f)['periods'][0]
        self.assertAlmostEqual(abs(complex(row['period0_re'],
                                           row['period0_im'])),
                               2.6220575543, places=8)


if __name__ == '__main__':
    logger.init()
    unittest.main()
