'''
Created on 18 Oct 2026

@author: gltforge developers
'''
import json
import logging
import os
import tempfile
import unittest

import numpy as np

from gltforge import glt, hkverify, logger, serialize
from gltforge.algebra import PolyZ
from gltforge.curves import Differential, ReducibleCurve
from gltforge.serialize import ConfigSchemaError


logger.init(logger.TEST_LOGGING_CONFIG)

QUARTIC = {'components': [{'alphas': [
    [[0, 0], [0, 0], [0, 0]],
    [[1, 0], [0, 0], [0, 0], [0, 0], [1, 0]]]}]}

CUBIC_GRID = {'ranges': [[1, 2], [0, 0], [0.1, 0.3], [0, 0]],
              'shape': [3, 1, 3, 1]}


class TestValidation(unittest.TestCase):

    def _pointer(self, obj):
        with self.assertRaises(ConfigSchemaError) as ctx:
            serialize.validate(obj)
        return ctx.exception.pointer

    def test_validate01(self):
        '''
        Valid configs pass through unchanged.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        configs = [
            {'kind': 'hk-verify', 'spec': 'cubic-harmonic',
             'grid': CUBIC_GRID, 'output': {'path': 'x.csv',
                                            'format': 'csv'}},
            {'kind': 'flow-run', 'flow': 'eta2', 'n': 2, 'seed': 7,
             's_span': [0, 0.2]},
            {'kind': 'identity-suite', 'instances': 3, 'sizes': [2, 4]},
            {'kind': 'curve-periods', 'curve': QUARTIC,
             'cycle': {'loops': [{'rectangle': [-1.1, 1.1, 0.35, 1.1]}]},
             'differentials': [{'r': 0, 's': 0}, {'G': [[1, 0, [1, 0]]]}]},
            {'kind': 'glt-solve',
             'spec': {'r': [1], 'closed': ['2*x**2 - z*zbar']},
             'points': [{'u': [[1.5, 0]], 'z': [[0.2, 0]]}],
             'settings': {'gltforge.glt.newton_rtol': 1e-12}},
        ]
        for config in configs:
            self.assertIs(config, serialize.validate(config))

    def test_validate02(self):
        '''
        Errors are reported at the JSON pointer of the offending element.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        self.assertEqual('/', self._pointer({}))
        self.assertEqual('/', self._pointer({'kind': 'flow-run'}))
        self.assertEqual('/', self._pointer({'kind': 'gz-analyze',
                                             'colour': 'blue'}))
        self.assertEqual('/n', self._pointer(
            {'kind': 'flow-run', 'flow': 'eta2', 'n': 0, 's_span': [0, 1]}))
        self.assertEqual('/output/format', self._pointer(
            {'kind': 'hk-verify', 'spec': 'cubic-harmonic',
             'grid': CUBIC_GRID, 'output': {'format': 'xml'}}))
        self.assertEqual('/grid/ranges', self._pointer(
            {'kind': 'hk-verify', 'spec': 'cubic-harmonic',
             'grid': {'ranges': [[0, 1]], 'shape': 2}}))
        self.assertEqual('/settings', self._pointer(
            {'kind': 'identity-suite', 'settings': {'tol': 1e-3}}))

    def test_load01(self):
        '''
        Unreadable files and malformed JSON are config errors.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(ConfigSchemaError) as ctx:
                serialize.load_config(os.path.join(tmp, 'missing.json'))
            self.assertEqual('', ctx.exception.pointer)
            bad = os.path.join(tmp, 'bad.json')
            with open(bad, 'w') as f:
                f.write('{"kind": ')
            with self.assertRaises(ConfigSchemaError):
                serialize.load_config(bad)
            good = os.path.join(tmp, 'good.json')
            with open(good, 'w') as f:
                json.dump({'kind': 'identity-suite'}, f)
            self.assertEqual('identity-suite',
                             serialize.load_config(good)['kind'])


class TestCodecs(unittest.TestCase):

    def test_curve01(self):
        '''
        Curves decode component by component.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        curve = serialize.curve_from_json(QUARTIC)
        self.assertIsInstance(curve, ReducibleCurve)
        self.assertEqual((2,), curve.degrees)
        np.testing.assert_array_equal(curve.coefficient_vector(),
                                      [0, 0, 0, 1, 0, 0, 0, 1])
        P = serialize.curve_from_json(QUARTIC['components'][0])
        self.assertEqual(2, P.m)
        poly = serialize.poly_from_json({'coeffs': [[1, 2], [3, -4]],
                                         'deg_bound': 1})
        np.testing.assert_array_equal(poly.coeffs, [1 + 2j, 3 - 4j])

    def test_paths01(self):
        '''
        Paths, rectangles and loop hints.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        arc = serialize.path_from_json({'kind': 'arc', 'center': [1, 0],
                                        'radius': 2, 'theta0': 0,
                                        'theta1': 3.0})
        self.assertEqual(('arc', 1 + 0j, 2.0), (arc.kind, arc.center,
                                                arc.radius))
        paths = serialize.rectangle_paths(-1.0, 2.0, 0.5, 1.5)
        self.assertEqual(4, len(paths))
        for a, b in zip(paths, paths[1:] + paths[:1]):
            self.assertEqual(a.end, b.start)
        area = sum((p.start.conjugate() * p.end).imag for p in paths) / 2
        self.assertAlmostEqual(area, 3.0)
        loop = serialize._loop_from_json({'rectangle': [0, 1, 0, 1],
                                          'sheet': 1, 'sign': -1})
        self.assertEqual(-1, loop.sign)
        self.assertEqual([1, None, None, None],
                         [s.sheet for s in loop.segments])
        loop = serialize._loop_from_json({'segments': [
            {'path': {'kind': 'segment', 'start': [0, 0], 'end': [1, 0]},
             'eta': [0, 1], 'component': 1}]})
        self.assertEqual((1, 1j), (loop.segments[0].component,
                                   loop.segments[0].eta))

    def test_cycle01(self):
        '''
        Antisymmetrized cycles double their loops and need a curve.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        obj = {'loops': [{'rectangle': [-1.1, 1.1, 0.35, 1.1]}],
               'antisymmetrize': True}
        with self.assertRaises(ConfigSchemaError) as ctx:
            serialize.cycle_from_json(obj)
        self.assertEqual('/antisymmetrize', ctx.exception.pointer)
        c = serialize.cycle_from_json(obj, serialize.curve_from_json(QUARTIC))
        self.assertEqual(2, len(c.loops))
        self.assertEqual([1, -1], [lp.sign for lp in c.loops])
        c = serialize.cycle_from_json(dict(obj, curve=QUARTIC))
        self.assertEqual(2, len(c.loops))
        self.assertFalse(serialize.cycle_from_json(
            {'loops': obj['loops'], 'closed': False}).closed)

    def test_differential01(self):
        '''
        Differentials and residue functions.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        self.assertEqual(glt.MONOPOLE_H,
                         serialize.monomials_from_json([[2, 1, [1, 0]]]))
        self.assertEqual(Differential.holomorphic(1, 0),
                         serialize.differential_from_json({'r': 1, 's': 0}))
        self.assertEqual(glt.CYCLE_DIFFERENTIAL,
                         serialize.differential_from_json(
                             {'G': [[1, 0, [1, 0]]]}))

    def test_spec01(self):
        '''
        Named, parametrised and explicit specs.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        flat = serialize.spec_from_json('flat-quartic')
        self.assertEqual('flat-quartic', flat.name)
        explicit = serialize.spec_from_json(
            {'r': [1], 'closed': ['2*x**2 - z*zbar'], 'name': 'flat'})
        self.assertEqual('flat', explicit.name)
        w = flat.rs.random_real(np.random.default_rng(31))
        self.assertAlmostEqual(glt.eval_F(flat, w), glt.eval_F(explicit, w))
        monopole = serialize.spec_from_json({
            'builtin': 'monopole',
            'params': {'m': 2, 'cycle': {
                'loops': [{'rectangle': [-1.1, 1.1, 0.35, 1.1]}],
                'antisymmetrize': True, 'curve': QUARTIC}}})
        self.assertEqual((2,), monopole.degrees)
        self.assertEqual(1, len(monopole.residue_terms))
        explicit = serialize.spec_from_json({
            'degrees': [2],
            'residues': [{'component': 0, 'H': [[2, 1, [1, 0]]],
                          'weight': 0.5}]})
        self.assertEqual((1, 2), explicit.rs.r_list)
        self.assertEqual(0.5, explicit.residue_terms[0].weight)
        with self.assertRaises(ConfigSchemaError) as ctx:
            serialize.spec_from_json({'builtin': 'su-n',
                                      'params': {'degrees': [1]}})
        self.assertEqual('/spec', ctx.exception.pointer)
        with self.assertRaises(glt.SpecError):
            serialize.spec_from_json({'builtin': 'monopole',
                                      'params': {'m': 2}})

    def test_matpoly01(self):
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        A = serialize.matpoly_from_json([[[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                                         [[[0, 1], [0, 0]], [[0, 0], [0, 0]]]])
        self.assertEqual((2, 1), (A.n, A.d))
        np.testing.assert_array_equal(A(1.0), [[1 + 1j, 0], [0, 1]])


class TestJsonable(unittest.TestCase):

    def test_jsonable01(self):
        '''
        Result values become plain JSON.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        value = dict(c=1 - 2j, nan=float('nan'), flag=np.bool_(True),
                     n=np.int64(3), arr=np.array([1.0, 2.0]),
                     poly=PolyZ([1, 1j], 1), keys={(1, 2): 0.5},
                     fit=hkverify.CubicComparison(-0.25, 1e-9))
        out = serialize.to_jsonable(value)
        self.assertEqual({'c': [1.0, -2.0], 'nan': None, 'flag': True,
                          'n': 3, 'arr': [1.0, 2.0],
                          'poly': {'coeffs': [[1.0, 0.0], [0.0, 1.0]],
                                   'deg_bound': 1},
                          'keys': {'1_2': 0.5},
                          'fit': {'mu': -0.25, 'deviation': 1e-9}}, out)
        json.dumps(out)
        with self.assertRaises(TypeError):
            serialize.to_jsonable(object())


if __name__ == '__main__':
    logger.init()
    unittest.main()
