import random
import unittest

import sympy
from sympy.polys.domains import QQ

import equinorm.equivariant
import equinorm.polyvf
import equinorm.rationals
from equinorm.analysis import oracle_check
from equinorm.equivariant import QuasilinearField, decompose, phi, psi, structure_bracket
from equinorm.errors import DimensionError, NotQuasilinearError
from equinorm.liealg import builtin_rep, compute_centralizer
from equinorm.polyvf import PolyVectorField


def centralizer(name):
    return compute_centralizer(builtin_rep(name))


def random_quasilinear(rng, basis, max_order, min_order=0):
    coeffs = {}
    for p in range(len(basis)):
        for k in range(min_order, max_order + 1):
            if rng.random() < 0.6:
                coeffs[(p, k)] = QQ(rng.randint(-6, 6), rng.randint(1, 4))
    return QuasilinearField(basis, coeffs)


class TestStructureConstants(unittest.TestCase):

    def test_psi_psi(self):
        basis = centralizer('so3')
        self.assertEqual(structure_bracket(psi(1), psi(3), basis), [(4, psi(4))])
        self.assertEqual(structure_bracket(psi(2), psi(2), basis), [])

    def test_psi_phi(self):
        basis = centralizer('so2')
        self.assertEqual(structure_bracket(psi(1), phi(1, 2), basis), [(4, phi(1, 3))])
        self.assertEqual(structure_bracket(phi(1, 2), psi(1), basis), [(-4, phi(1, 3))])
        self.assertEqual(structure_bracket(phi(1, 1), phi(1, 2), basis), [])

    def test_su2_phi_phi(self):
        basis = centralizer('su2')
        self.assertEqual(structure_bracket(phi(1, 1), phi(2, 2), basis), [(-2, phi(3, 3))])
        self.assertEqual(structure_bracket(phi(2, 0), phi(3, 1), basis), [(-2, phi(1, 1))])
        self.assertEqual(structure_bracket(phi(3, 2), phi(1, 0), basis), [(-2, phi(2, 2))])
        self.assertEqual(structure_bracket(phi(2, 1), phi(1, 1), basis), [(2, phi(3, 2))])
        self.assertEqual(structure_bracket(phi(2, 1), phi(2, 3), basis), [])

    def test_radial_weights(self):
        self.assertEqual(equinorm.equivariant.structure_table(centralizer('su2')).radial, [1, 0, 0, 0])

    def test_bad_element(self):
        with self.assertRaises(ValueError):
            structure_bracket(phi(2, 0), psi(0), centralizer('so2'))
        with self.assertRaises(ValueError):
            phi(0, 1)

    def test_oracle(self):
        for group in ['so2', 'so3', 'su2']:
            for row in oracle_check(group, 4):
                self.assertTrue(row.passed, '{}: {}'.format(group, row.check))
                self.assertGreater(row.cases, 0)


class TestQuasilinearField(unittest.TestCase):

    def test_expand_decompose(self):
        rng = random.Random(11)
        for group in ['so2', 'so3', 'su2']:
            basis = centralizer(group)
            for _ in range(5):
                q = random_quasilinear(rng, basis, 3)
                self.assertEqual(decompose(q.expand(), basis), q)

    def test_expand_example(self):
        # r^2 J x on R^2: (-(x1^2 + x2^2) x2, (x1^2 + x2^2) x1)
        basis = centralizer('so2')
        f = QuasilinearField(basis, {(1, 1): 1}).expand()
        expected = PolyVectorField.from_terms(2, {(0, (2, 1)): -1, (0, (0, 3)): -1, (1, (3, 0)): 1, (1, (1, 2)): 1})
        self.assertEqual(f, expected)
        self.assertEqual(equinorm.equivariant.expand(QuasilinearField(basis, {(1, 1): 1})), expected)

    def test_not_quasilinear(self):
        basis = centralizer('so3')
        f = QuasilinearField(basis, {(0, 1): 1}).expand() + PolyVectorField.from_terms(3, {(0, (2, 0, 0)): 1})
        with self.assertRaises(NotQuasilinearError) as ctx:
            decompose(f, basis)
        self.assertEqual(ctx.exception.residual, PolyVectorField.from_terms(3, {(0, (2, 0, 0)): 1}))

        with self.assertRaises(NotQuasilinearError):
            decompose(PolyVectorField.from_terms(3, {(1, (0, 0, 0)): 1}), basis)
        with self.assertRaises(DimensionError):
            decompose(PolyVectorField.identity(2), basis)

    def test_arithmetic(self):
        basis = centralizer('so2')
        a = QuasilinearField(basis, {(0, 0): 1, (1, 2): QQ(1, 2)})
        b = QuasilinearField(basis, {(1, 2): QQ(-1, 2), (0, 1): 3})
        self.assertEqual(a + b, QuasilinearField(basis, {(0, 0): 1, (0, 1): 3}))
        self.assertEqual(a - a, QuasilinearField(basis))
        self.assertEqual((a*2)[(1, 2)], 1)
        self.assertEqual(a.orders(), [0, 2])
        self.assertEqual(a.linear_part(), QuasilinearField(basis, {(0, 0): 1}))
        self.assertEqual(a.truncate(2), a.linear_part())
        with self.assertRaises(DimensionError):
            a + QuasilinearField(centralizer('so3'), {(0, 0): 1})

    def test_bracket_matches_oracle(self):
        rng = random.Random(12)
        for group in ['so2', 'su2']:
            basis = centralizer(group)
            for _ in range(3):
                a = random_quasilinear(rng, basis, 2)
                b = random_quasilinear(rng, basis, 2)
                self.assertEqual(a.bracket(b).expand(), equinorm.polyvf.bracket(a.expand(), b.expand()))

    def test_lie_transform_matches_oracle(self):
        rng = random.Random(13)
        for group in ['so3', 'so2', 'su2']:
            basis = centralizer(group)
            h = random_quasilinear(rng, basis, 2, min_order=1)
            q = random_quasilinear(rng, basis, 2)
            structured = equinorm.equivariant.lie_transform(h, q, 6)
            self.assertEqual(structured.expand(), equinorm.polyvf.lie_transform(h.expand(), q.expand(), 6))

    def test_json(self):
        basis = centralizer('su2')
        q = QuasilinearField(basis, {(0, 1): QQ(2, 3), (3, 0): -1})
        data = q.to_dict()
        self.assertEqual(data['group'], 'su2')
        self.assertEqual(QuasilinearField.from_dict(data, basis), q)
        with self.assertRaises(ValueError):
            QuasilinearField.from_dict(data, centralizer('so2'))


class TestPotentials(unittest.TestCase):

    def test_gradient(self):
        basis = centralizer('so2')
        q = QuasilinearField(basis, {(0, 0): 2, (0, 1): QQ(-1, 3), (1, 2): 5})
        x1, x2 = sympy.symbols('x1 x2')
        r2 = x1**2 + x2**2
        potentials = equinorm.equivariant.potentials(q)
        self.assertEqual(len(potentials), 2)
        for p, h in enumerate(potentials):
            value = h.as_expr().subs(equinorm.equivariant.rho, r2)
            alpha = sum(equinorm.rationals.to_sympy(c)*r2**k for (pp, k), c in q.items() if pp == p)
            for x in (x1, x2):
                self.assertEqual(sympy.expand(sympy.diff(value, x) - alpha*x), 0)

    def test_example(self):
        basis = centralizer('so3')
        q = QuasilinearField(basis, {(0, 1): 1})
        self.assertEqual(equinorm.equivariant.potentials(q)[0].as_expr(), equinorm.equivariant.rho**2/4)


if __name__ == '__main__':
    unittest.main()
