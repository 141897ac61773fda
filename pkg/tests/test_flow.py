import math
import unittest

import numpy as np
from sympy.polys.domains import QQ

import equinorm.flow
from equinorm.equivariant import QuasilinearField
from equinorm.errors import DimensionError
from equinorm.flow import CoordinateChange, fitted_order, flow_check
from equinorm.liealg import builtin_rep, compute_centralizer
from equinorm.normalform import normalize
from equinorm.polyvf import PolyVectorField, near_identity_map


def centralizer(name):
    return compute_centralizer(builtin_rep(name))


class TestFlowCheck(unittest.TestCase):

    def test_case_a(self):
        q = QuasilinearField(centralizer('so3'), {(0, 0): 1, (0, 1): 1})
        report = flow_check(q.expand(), normalize(q, 4))
        self.assertEqual(report.blowups, [])
        self.assertTrue(all(e is not None for e in report.errors))
        self.assertGreaterEqual(report.fitted_order, 4.5)

    def test_case_b2(self):
        q = QuasilinearField(centralizer('so2'), {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})
        result = normalize(q, 4)
        self.assertEqual(result.nf, q.linear_part())
        report = flow_check(q.expand(), result)
        self.assertGreaterEqual(report.fitted_order, 4.5)
        # errors shrink with the radius
        self.assertTrue(all(b < a for a, b in zip(report.errors, report.errors[1:])))

    def test_identity_change(self):
        q = QuasilinearField(centralizer('so2'), {(1, 0): 1, (0, 1): 1})
        result = normalize(q, 4)
        self.assertEqual(result.generators, [])
        report = flow_check(q.expand(), result)
        self.assertEqual(len(CoordinateChange.from_result(result)), 0)
        self.assertTrue(all(e < 1e-14 for e in report.errors))

    def test_bad_radii(self):
        q = QuasilinearField(centralizer('so3'), {(0, 0): 1, (0, 1): 1})
        result = normalize(q, 2)
        with self.assertRaises(ValueError):
            flow_check(q.expand(), result, radii=[0.1, 0.2])
        with self.assertRaises(ValueError):
            flow_check(q.expand(), result, radii=[0.1, -0.05])


class TestFittedOrder(unittest.TestCase):

    def test_slope(self):
        self.assertAlmostEqual(fitted_order([1.0, 0.5, 0.25], [1.0, 0.125, 0.015625]), 3.0)

    def test_report_dict(self):
        report = equinorm.flow.FlowCheckReport([0.1, 0.05], [0.0, 0.0], math.inf, 1.0, 8)
        self.assertEqual(report.to_dict()['fitted_order'], 'inf')
        report = equinorm.flow.FlowCheckReport([0.1, 0.05], [None, None], math.nan, 1.0, 8, [0.1, 0.05])
        self.assertIsNone(report.to_dict()['fitted_order'])

    def test_degenerate(self):
        self.assertEqual(fitted_order([0.1, 0.05], [0.0, 0.0]), math.inf)
        self.assertEqual(fitted_order([0.1, 0.05], [0.0, None]), math.inf)
        self.assertTrue(math.isnan(fitted_order([0.1, 0.05], [None, None])))
        self.assertTrue(math.isnan(fitted_order([0.1, 0.05], [1e-3, None])))


class TestIntegration(unittest.TestCase):

    def test_rk4_exponential(self):
        trajectory = equinorm.flow.rk4(PolyVectorField.identity(1), [1.0], 1.0, 100)
        self.assertEqual(trajectory.shape, (101, 1))
        self.assertAlmostEqual(trajectory[-1, 0], math.e, delta=1e-8)

    def test_directions(self):
        d = equinorm.flow.initial_directions(3)
        self.assertEqual(d.shape, (3, 4))
        np.testing.assert_allclose(np.linalg.norm(d, axis=0), np.ones(4))
        np.testing.assert_allclose(d[:, 0], np.ones(3)/math.sqrt(3))
        np.testing.assert_array_equal(d, equinorm.flow.initial_directions(3))


class TestCoordinateChange(unittest.TestCase):

    def test_order(self):
        h1 = PolyVectorField.from_terms(1, {(0, (2,)): QQ(1, 2)})
        h2 = PolyVectorField.from_terms(1, {(0, (3,)): QQ(-1, 3)})
        change = CoordinateChange(1, 6).generator(h1).generator(h2)
        self.assertEqual(len(change), 2)
        m1, m2 = near_identity_map(h1, 6), near_identity_map(h2, 6)
        x = np.array([0.2])
        np.testing.assert_allclose(change(x), m1.evaluate(m2.evaluate(x)))

    def test_empty(self):
        change = CoordinateChange(2, 4)
        self.assertEqual(str(change), 'identity')
        np.testing.assert_array_equal(change([0.1, 0.2]), [0.1, 0.2])

    def test_dimension(self):
        with self.assertRaises(DimensionError):
            CoordinateChange(2, 4).generator(PolyVectorField.from_terms(3, {(0, (2, 0, 0)): 1}))


if __name__ == '__main__':
    unittest.main()
