import random
import unittest

import numpy as np
import sympy
from sympy.polys.domains import QQ

import equinorm.polyvf
from equinorm.errors import DimensionError
from equinorm.polyvf import PolyVectorField, bracket, lie_derivative


def random_field(rng, dim, max_degree, terms=4):
    """Sparse random field with small rational coefficients and no constant terms"""
    out = {}
    for _ in range(terms):
        degree = rng.randint(1, max_degree)
        exponents = [0]*dim
        for _ in range(degree):
            exponents[rng.randrange(dim)] += 1
        out[(rng.randrange(dim), tuple(exponents))] = QQ(rng.randint(-5, 5), rng.randint(1, 3))
    return PolyVectorField.from_terms(dim, out)


class TestBracket(unittest.TestCase):

    def test_one_dimensional_example(self):
        f = PolyVectorField.from_terms(1, {(0, (1,)): 1})
        g = PolyVectorField.from_terms(1, {(0, (2,)): 1})
        self.assertEqual(bracket(f, g), g)
        self.assertEqual(bracket(g, f), -g)

    def test_linear_fields(self):
        # {Ax, Bx} = (BA - AB) x
        a = sympy.Matrix([[0, -1], [1, 0]])
        b = sympy.Matrix([[1, 2], [0, 3]])
        expected = PolyVectorField.linear(b*a - a*b)
        self.assertEqual(bracket(PolyVectorField.linear(a), PolyVectorField.linear(b)), expected)

    def test_axioms(self):
        rng = random.Random(1)
        for trial in range(50):
            dim = rng.randint(1, 4)
            f, g, h = (random_field(rng, dim, 3) for _ in range(3))
            c = QQ(rng.randint(-4, 4), rng.randint(1, 3))
            self.assertEqual(bracket(f, g), -bracket(g, f))
            self.assertEqual(bracket(f*c + g, h), bracket(f, h)*c + bracket(g, h))
            jacobi = bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g))
            self.assertTrue(jacobi.is_zero, 'Jacobi identity failed in trial {}'.format(trial))

    def test_grades_add(self):
        rng = random.Random(2)
        for _ in range(10):
            f = random_field(rng, 3, 3, terms=1)
            g = random_field(rng, 3, 3, terms=1)
            b = bracket(f, g)
            if not b.is_zero:
                self.assertEqual(b.grades(), [f.grades()[0] + g.grades()[0]])

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            bracket(PolyVectorField.identity(2), PolyVectorField.identity(3))

    def test_lie_derivative(self):
        # (x^2 d/dx) applied to x^3 gives 3 x^4
        h = PolyVectorField.from_terms(1, {(0, (2,)): 1})
        f = PolyVectorField.from_terms(1, {(0, (3,)): 1})
        self.assertEqual(lie_derivative(h, f), PolyVectorField.from_terms(1, {(0, (4,)): 3}))


class TestPolyVectorField(unittest.TestCase):

    def test_from_terms_drops_zeros(self):
        f = PolyVectorField.from_terms(2, {(0, (1, 0)): 0, (1, (0, 1)): 2})
        self.assertEqual(len(f), 1)
        self.assertTrue(PolyVectorField.zero(3).is_zero)
        self.assertFalse(PolyVectorField.zero(3))

    def test_bad_terms(self):
        with self.assertRaises(DimensionError):
            PolyVectorField.from_terms(2, {(2, (1, 0)): 1})
        with self.assertRaises(DimensionError):
            PolyVectorField.from_terms(2, {(0, (1, 0, 0)): 1})
        with self.assertRaises(ValueError):
            PolyVectorField.from_terms(2, {(0, (1, 0)): 0.5})
        with self.assertRaises(ValueError):
            PolyVectorField.from_terms(2, {(0, (1.5, 0)): 1})
        with self.assertRaises(ValueError):
            PolyVectorField.from_terms(2, {(0, (True, 0)): 1})
        with self.assertRaises(ValueError):
            PolyVectorField.from_dict({'dim': 2, 'terms': [{'component': 1, 'exponents': [1.0, 0], 'value': '1'}]})

    def test_truncate_and_grades(self):
        f = PolyVectorField.from_terms(2, {(0, (1, 0)): 1, (0, (2, 1)): 1, (1, (0, 5)): 1})
        self.assertEqual(f.grades(), [0, 2, 4])
        self.assertEqual(f.truncate(2).grades(), [0, 2])
        self.assertEqual(f.truncate(-1), PolyVectorField.zero(2))

    def test_grade_decompose(self):
        rng = random.Random(3)
        f = random_field(rng, 3, 3, terms=8)
        pieces = equinorm.polyvf.grade_decompose(f)
        total = PolyVectorField.zero(3)
        for grade, piece in pieces.items():
            self.assertEqual(piece.grades(), [grade])
            total = total + piece
        self.assertEqual(total, f)

        with self.assertRaises(ValueError):
            equinorm.polyvf.grade_decompose(PolyVectorField.from_terms(1, {(0, (0,)): 1}))

    def test_evaluate(self):
        # f = (x1 x2, 2 x1^2 - x2)
        f = PolyVectorField.from_terms(2, {(0, (1, 1)): 1, (1, (2, 0)): 2, (1, (0, 1)): -1})
        np.testing.assert_allclose(f.evaluate([2.0, 3.0]), [6.0, 5.0])
        batch = np.array([[2.0, 1.0, 0.0], [3.0, -1.0, 4.0]])
        np.testing.assert_allclose(f(batch), [[6.0, -1.0, 0.0], [5.0, 3.0, -4.0]])
        np.testing.assert_allclose(PolyVectorField.zero(2).evaluate(batch), np.zeros((2, 3)))
        with self.assertRaises(DimensionError):
            f.evaluate([1.0, 2.0, 3.0])

    def test_linear_combinations(self):
        f = PolyVectorField.from_terms(2, {(0, (1, 0)): 1, (1, (0, 3)): 2})
        g = PolyVectorField.from_terms(2, {(0, (1, 0)): -1, (1, (1, 0)): 1})
        self.assertEqual(equinorm.polyvf.add(f, g), PolyVectorField.from_terms(2, {(1, (0, 3)): 2, (1, (1, 0)): 1}))
        self.assertEqual(equinorm.polyvf.scale(QQ(1, 2), f), f*QQ(1, 2))
        np.testing.assert_allclose(equinorm.polyvf.evaluate(f, [1.0, 1.0]), [1.0, 2.0])
        with self.assertRaises(DimensionError):
            equinorm.polyvf.add(f, PolyVectorField.identity(3))

    def test_json(self):
        f = PolyVectorField.from_terms(2, {(0, (1, 0)): QQ(-3, 7), (1, (2, 1)): 5})
        data = f.to_dict()
        self.assertEqual(data['terms'][0], {'component': 1, 'exponents': [1, 0], 'num': '-3', 'den': '7'})
        self.assertEqual(PolyVectorField.from_dict(data), f)
        g = PolyVectorField.from_dict({'dim': 2, 'terms': [{'component': 1, 'exponents': [1, 0], 'value': '-3/7'},
                                                           {'component': 2, 'exponents': [2, 1], 'value': '5'}]})
        self.assertEqual(g, f)


class TestLieTransform(unittest.TestCase):

    def test_one_dimensional(self):
        # h = a x^2 has time-one flow x/(1 - a x), which pushes x d/dx to (x - a x^2) d/dx
        a = QQ(1, 3)
        h = PolyVectorField.from_terms(1, {(0, (2,)): a})
        f = PolyVectorField.identity(1)
        g = equinorm.polyvf.lie_transform(h, f, 6)
        self.assertEqual(g, PolyVectorField.from_terms(1, {(0, (1,)): 1, (0, (2,)): -a}))

        m = equinorm.polyvf.near_identity_map(h, 4)
        expected = PolyVectorField.from_terms(1, {(0, (j + 1,)): a**j for j in range(5)})
        self.assertEqual(m, expected)

    def test_truncation(self):
        rng = random.Random(4)
        h = PolyVectorField.from_terms(2, {key: c for key, c in random_field(rng, 2, 3, terms=6).terms()
                                           if sum(key[1]) >= 2})
        f = PolyVectorField.identity(2) + random_field(rng, 2, 3)
        g = equinorm.polyvf.lie_transform(h, f, 4)
        self.assertLessEqual(max(g.grades()), 4)
        self.assertEqual(g.truncate(0), f.truncate(0))

    def test_rejects_linear_generator(self):
        with self.assertRaises(ValueError):
            equinorm.polyvf.lie_transform(PolyVectorField.identity(2), PolyVectorField.identity(2), 4)
        with self.assertRaises(ValueError):
            equinorm.polyvf.near_identity_map(PolyVectorField.identity(2), 4)

    def test_conjugacy(self):
        # map(x) carries x' = g(x) to y' = f(y): Dmap(x) g(x) = f(map(x)) up to the truncation
        h = PolyVectorField.from_terms(2, {(0, (1, 2)): 1, (1, (2, 1)): QQ(-1, 2)})
        f = PolyVectorField.linear(sympy.Matrix([[1, -2], [2, 1]]))
        g = equinorm.polyvf.lie_transform(h, f, 6)
        m = equinorm.polyvf.near_identity_map(h, 6)
        x = np.array([0.01, -0.02])
        step = 1e-7
        jac = np.column_stack([(m.evaluate(x + step*e) - m.evaluate(x - step*e))/(2*step) for e in np.identity(2)])
        lhs = jac @ g.evaluate(x)
        rhs = f.evaluate(m.evaluate(x))
        self.assertLess(np.max(np.abs(lhs - rhs)), 1e-9)


if __name__ == '__main__':
    unittest.main()
