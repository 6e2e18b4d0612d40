'''
Created on 18 Oct 2026

@author: gltforge developers
'''
import logging
import time
import unittest

import numpy as np

from gltforge import glt, hkverify, logger


logger.init(logger.TEST_LOGGING_CONFIG)

CUBIC_RANGES = [(1.0, 2.0), (0.0, 0.0), (0.1, 0.3), (0.0, 0.0)]
# wall clock for the serial 5^4 flat sweep
FLAT_GRID_SECONDS = 10.0


class TestFlat(unittest.TestCase):

    def test_flat01(self):
        '''
        K = -Re(u)^2/2 - |z|^2: M = diag(-1/4, -1), conformal factor 1/4
        and J^2 = -1.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        spec = glt.builtin_spec('flat-quartic')
        record = hkverify.verify_point(spec, 1.5 + 0.2j, 0.2 - 0.3j)
        np.testing.assert_allclose(record['metric'], np.diag([-0.25, -1.0]),
                                   atol=1e-7)
        self.assertAlmostEqual(abs(record['factor'] - 0.25), 0.0, places=7)
        self.assertLess(record['sp_residual'], 1e-7)
        self.assertLess(record['J2_residual'], 1e-6)
        self.assertEqual((0, 4), record['signature'])
        self.assertFalse(record['positive_K'])

    def test_flat02(self):
        '''
        The metric does not change over a grid; threads keep the order.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        spec = glt.builtin_spec('flat-quartic')
        points = hkverify.grid([(0.5, 1.5), (-0.2, 0.2), (0.0, 0.4),
                                (-0.1, 0.1)], 2)
        self.assertEqual(16, len(points))
        serial = hkverify.verify_grid(spec, points)
        threaded = hkverify.verify_grid(spec, points, threads=3)
        self.assertEqual([r['K'] for r in serial], [r['K'] for r in threaded])
        report = hkverify.flatness(serial)
        self.assertLess(report.spread, 1e-6)
        self.assertLess(report.factor_spread, 1e-6)

    def test_flat03(self):
        '''
        A 5^4 grid: metric constant to 1e-7, sp residual below 1e-9, one
        conformal factor, and the sweep stays inside its time budget.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        spec = glt.builtin_spec('flat-quartic')
        points = hkverify.grid([(0.5, 1.5), (-0.2, 0.2), (0.0, 0.4),
                                (-0.1, 0.1)], 5)
        self.assertEqual(625, len(points))
        start = time.perf_counter()
        records = hkverify.verify_grid(spec, points, extrapolate=False)
        elapsed = time.perf_counter() - start
        log.info("test_flat03: %d points in %.2f s", len(points), elapsed)
        report = hkverify.flatness(records)
        self.assertLess(report.spread, 1e-7)
        self.assertLess(report.sp_residual, 1e-9)
        self.assertLess(report.factor_spread, 1e-7)
        self.assertAlmostEqual(abs(records[0]['factor'] - 0.25), 0.0, places=7)
        self.assertLess(elapsed, FLAT_GRID_SECONDS)


class TestCubic(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        spec = glt.builtin_spec('cubic-harmonic')
        cls.spec = spec
        cls.records = [(u[0], z[0], hkverify.second_derivs(spec, u, z))
                       for u, z in hkverify.grid(CUBIC_RANGES, (3, 1, 3, 1))]

    def test_cubic01(self):
        '''
        The mixed derivatives are -1/12 times the closed form.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        fit = hkverify.metric_compare_cubic(self.records)
        self.assertAlmostEqual(fit.mu, -1.0 / 12.0, places=6)
        self.assertLess(fit.deviation, 1e-5)
        printed = hkverify.metric_compare_cubic(self.records, 'printed')
        self.assertGreater(printed.deviation, 1e-2)

    def test_cubic02(self):
        '''
        The conformal factor is det M and J squares to -1.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        for _, _, sd in self.records:
            sp = hkverify.sp_check(sd)
            self.assertLess(abs(sp.factor - np.linalg.det(sd.matrix)), 1e-8)
            self.assertLess(sp.residual, 1e-8)
            self.assertLess(hkverify.j_structure(sd, sp.factor).residual,
                            1e-6)
            self.assertEqual((0, 4),
                             hkverify.metric_from_second_derivs(sd).signature)

    def test_cubic03(self):
        '''
        At z = 0, K_uubar sqrt(u + ubar) is constant.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        records = [(u, 0.0, hkverify.second_derivs(self.spec, u, 0.0))
                   for u in (0.5, 1.0, 2.5)]
        self.assertLess(hkverify.cubic_restriction_z0(records), 1e-6)

    def test_cubic04(self):
        '''
        The order of the nested differences does not matter.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        a = hkverify.second_derivs(self.spec, 1.5, 0.2)
        b = hkverify.second_derivs(self.spec, 1.5, 0.2, reverse=True)
        np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-8)
        self.assertAlmostEqual(a.K, -4.0 * 0.52 ** 1.5, places=10)


class TestFailures(unittest.TestCase):

    def test_stencil01(self):
        '''
        A stencil leaving the domain, or a base point outside it, raises
        StencilSolveError; a zero factor has no J.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        spec = glt.builtin_spec('cubic-harmonic')
        with self.assertRaises(hkverify.StencilSolveError) as ctx:
            hkverify.second_derivs(spec, 0.001, 0.0)
        self.assertIsInstance(ctx.exception.error, glt.DomainError)
        with self.assertRaises(hkverify.StencilSolveError):
            hkverify.verify_point(spec, -1.0, 0.0)
        sd = hkverify.second_derivs(glt.builtin_spec('flat-quartic'), 1.0,
                                    0.0)
        with self.assertRaises(hkverify.SingularBlock):
            hkverify.j_structure(sd, 0)


class TestOutput(unittest.TestCase):

    def test_grid01(self):
        '''
        Grid points come in C order over (Re u, Im u, Re z, Im z).
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        points = hkverify.grid(CUBIC_RANGES, (3, 1, 3, 1))
        self.assertEqual(9, len(points))
        u, z = points[1]
        self.assertAlmostEqual(complex(u[0]), 1.0)
        self.assertAlmostEqual(complex(z[0]), 0.2)
        u, z = points[-1]
        self.assertAlmostEqual(complex(u[0]), 2.0)
        self.assertAlmostEqual(complex(z[0]), 0.3)

    def test_describe01(self):
        '''
        describe flattens a record into real columns.
        '''
        log = logging.getLogger(__name__)
        log.debug("BEGIN: unittest.TestCase.id=%r", unittest.TestCase.id(self))
        spec = glt.builtin_spec('flat-quartic')
        row = hkverify.describe(hkverify.verify_point(spec, 1.0 + 0.5j, 0.1))
        self.assertEqual(1.0, row['u0_re'])
        self.assertEqual(0.5, row['u0_im'])
        self.assertAlmostEqual(row['g00_re'], -0.25, places=7)
        self.assertAlmostEqual(row['g11_re'], -1.0, places=7)
        self.assertEqual('0,4', row['signature'])
        for key, value in row.items():
            self.assertIsInstance(value, (float, str), key)


if __name__ == '__main__':
    logger.init()
    unittest.main()
