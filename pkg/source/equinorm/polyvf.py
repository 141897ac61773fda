"""Exact polynomial vector fields on R^n

A :class:`PolyVectorField` stores one sparse polynomial per component with
coefficients in the rational field.  Grades follow the convention that grade
``k`` is the homogeneous piece of polynomial degree ``k+1``, so linear fields
have grade 0 and the bracket maps grades ``(k, m)`` to ``k+m``.

The functions here make no use of any symmetry and serve as the brute-force
oracle for the structured computations in :mod:`equinorm.equivariant`.
"""
from typing import Dict, List, Mapping, Sequence, Tuple
import functools
import logging
import numbers

import numpy as np
import sympy
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import DimensionError
from .rationals import rational, numerator, denominator, to_float

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
TermKey = Tuple[int, Monomial]


@functools.lru_cache(maxsize=None)
def polynomial_ring(dim: int) -> PolyRing:
    """The polynomial ring QQ[x1..xn] shared by all fields of dimension ``dim``"""
    if dim < 1:
        raise DimensionError('dimension must be positive, got {}'.format(dim))
    return PolyRing(sympy.symbols('x1:{}'.format(dim+1)), QQ, lex)


class PolyVectorField:
    """Polynomial vector field f^i(x) d/dx^i with exact rational coefficients.

    Instances are treated as immutable values.

    Parameters
    ----------
    dim : int
        Ambient dimension n.
    components : sequence of PolyElement, optional
        The n component polynomials, elements of :func:`polynomial_ring`.  The
        zero field is built when omitted.
    """
    def __init__(self, dim: int, components: Sequence=None):
        ring = polynomial_ring(dim)
        if components is None:
            components = [ring.zero]*dim
        if len(components) != dim:
            raise DimensionError('expected {} components, got {}'.format(dim, len(components)))
        self._dim = dim
        self._components = tuple(c if isinstance(c, PolyElement) and c.ring == ring else ring(c)
                                 for c in components)
        self._compiled = None

    @classmethod
    def zero(cls, dim: int) -> 'PolyVectorField':
        return cls(dim)

    @classmethod
    def from_terms(cls, dim: int, terms: Mapping[TermKey, object]) -> 'PolyVectorField':
        """Build a field from a map (component, exponents) -> coefficient.

        Component indices are zero-based here; zero coefficients are dropped.
        """
        ring = polynomial_ring(dim)
        parts = [dict() for _ in range(dim)]
        for (i, exponents), c in terms.items():
            if any(isinstance(e, bool) or not isinstance(e, numbers.Integral) for e in exponents):
                raise ValueError('exponents {} are not all integers'.format(tuple(exponents)))
            exponents = tuple(int(e) for e in exponents)
            if not 0 <= i < dim:
                raise DimensionError('component {} outside 0..{}'.format(i, dim-1))
            if len(exponents) != dim or min(exponents) < 0:
                raise DimensionError('monomial {} does not fit dimension {}'.format(exponents, dim))
            c = rational(c)
            if c:
                parts[i][exponents] = parts[i].get(exponents, QQ(0)) + c
        return cls(dim, [ring.from_dict({m: c for m, c in p.items() if c}) for p in parts])

    @classmethod
    def linear(cls, m) -> 'PolyVectorField':
        """The linear field (M x)^i d/dx^i of a square exact matrix"""
        if m.rows != m.cols:
            raise DimensionError('linear fields need a square matrix')
        dim = m.rows
        ring = polynomial_ring(dim)
        comps = []
        for i in range(dim):
            comps.append(ring.from_dict({_unit(dim, j): QQ.from_sympy(sympy.Rational(m[i, j]))
                                         for j in range(dim) if m[i, j] != 0}))
        return cls(dim, comps)

    @classmethod
    def identity(cls, dim: int) -> 'PolyVectorField':
        return cls(dim, list(polynomial_ring(dim).gens))

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def ring(self) -> PolyRing:
        return polynomial_ring(self._dim)

    @property
    def components(self) -> Tuple[PolyElement, ...]:
        return self._components

    def __getitem__(self, i: int) -> PolyElement:
        return self._components[i]

    def terms(self) -> List[Tuple[TermKey, object]]:
        """Terms in canonical order, lexicographic on (component, exponents)"""
        return sorted(((i, m), c) for i, p in enumerate(self._components) for m, c in p.items())

    def __len__(self):
        return sum(len(p) for p in self._components)

    @property
    def is_zero(self) -> bool:
        return not any(self._components)

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self._dim == other._dim and self._components == other._components

    __hash__ = None

    def __repr__(self):
        return 'PolyVectorField(dim={}, terms={})'.format(self._dim, len(self))

    def _check(self, other: 'PolyVectorField'):
        if self._dim != other._dim:
            raise DimensionError('dimension mismatch: {} and {}'.format(self._dim, other._dim))

    def __add__(self, other: 'PolyVectorField') -> 'PolyVectorField':
        self._check(other)
        return PolyVectorField(self._dim, [a + b for a, b in zip(self._components, other._components)])

    def __sub__(self, other: 'PolyVectorField') -> 'PolyVectorField':
        self._check(other)
        return PolyVectorField(self._dim, [a - b for a, b in zip(self._components, other._components)])

    def __neg__(self) -> 'PolyVectorField':
        return PolyVectorField(self._dim, [-a for a in self._components])

    def __mul__(self, c) -> 'PolyVectorField':
        c = rational(c)
        return PolyVectorField(self._dim, [a.mul_ground(c) if c else self.ring.zero for a in self._components])

    __rmul__ = __mul__

    def grades(self) -> List[int]:
        """Sorted list of grades present (polynomial degree minus one)"""
        return sorted({sum(m) - 1 for p in self._components for m in p.keys()})

    def truncate(self, max_grade: int) -> 'PolyVectorField':
        """Drop every term of grade above ``max_grade``"""
        limit = max_grade + 1
        ring = self.ring
        return PolyVectorField(self._dim, [ring.from_dict({m: c for m, c in p.items() if sum(m) <= limit})
                                           for p in self._components])

    def evaluate(self, x) -> np.ndarray:
        """Numeric value of the field.

        Parameters
        ----------
        x : array_like
            Point of shape ``(n,)`` or a batch of points of shape ``(n, P)``.

        Returns
        -------
        numpy.ndarray
            Array of the same shape as ``x``.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 or x.shape[0] != self._dim:
            raise DimensionError('point of shape {} for a field of dimension {}'.format(x.shape, self._dim))
        if self._compiled is None:
            self._compiled = [(np.array(list(p.keys()), dtype=int), np.array([to_float(c) for c in p.values()]))
                              if p else None for p in self._components]
        out = np.zeros(x.shape)
        for i, compiled in enumerate(self._compiled):
            if compiled is None:
                continue
            exponents, coefs = compiled
            powers = x[np.newaxis, ...]**exponents.reshape(exponents.shape + (1,)*(x.ndim - 1))
            out[i] = np.tensordot(coefs, np.prod(powers, axis=1), axes=1)
        return out

    def __call__(self, x) -> np.ndarray:
        return self.evaluate(x)

    def to_dict(self) -> dict:
        """JSON form; component indices are one-based"""
        return {'dim': self._dim,
                'terms': [{'component': i + 1, 'exponents': list(m),
                           'num': str(numerator(c)), 'den': str(denominator(c))}
                          for (i, m), c in self.terms()]}

    @classmethod
    def from_dict(cls, data: Mapping) -> 'PolyVectorField':
        dim = int(data['dim'])
        terms: Dict[TermKey, object] = {}
        for term in data.get('terms', []):
            if 'value' in term:
                c = rational(term['value'])
            else:
                c = rational('{}/{}'.format(term['num'], term.get('den', '1')))
            key = (int(term['component']) - 1, tuple(term['exponents']))
            terms[key] = rational(terms.get(key, 0)) + c
        return cls.from_terms(dim, terms)


def _unit(dim: int, j: int) -> Monomial:
    return tuple(1 if i == j else 0 for i in range(dim))


def _check_dims(*fields: PolyVectorField):
    dims = {f.dim for f in fields}
    if len(dims) != 1:
        raise DimensionError('dimension mismatch: {}'.format(sorted(dims)))


def lie_derivative(h: PolyVectorField, f: PolyVectorField) -> PolyVectorField:
    """Componentwise directional derivative (h^k d_k) f^i"""
    _check_dims(h, f)
    gens = h.ring.gens
    comps = []
    for fi in f.components:
        c = h.ring.zero
        if fi:
            for hk, xk in zip(h.components, gens):
                if hk:
                    c += hk*fi.diff(xk)
        comps.append(c)
    return PolyVectorField(h.dim, comps)


def bracket(f: PolyVectorField, g: PolyVectorField) -> PolyVectorField:
    """Lie-Poisson bracket {f,g}^i = (f^k d_k) g^i - (g^k d_k) f^i

    Raises
    ------
    DimensionError
        If the fields live in different dimensions.
    """
    _check_dims(f, g)
    return lie_derivative(f, g) - lie_derivative(g, f)


def add(f: PolyVectorField, g: PolyVectorField) -> PolyVectorField:
    return f + g


def scale(c, f: PolyVectorField) -> PolyVectorField:
    return f*c


def evaluate(f: PolyVectorField, x) -> np.ndarray:
    return f.evaluate(x)


def grade_decompose(f: PolyVectorField) -> Dict[int, PolyVectorField]:
    """Split a field into homogeneous pieces keyed by grade.

    Raises
    ------
    ValueError
        If the field has constant terms, which carry no grade.
    """
    pieces: Dict[int, List[dict]] = {}
    for i, p in enumerate(f.components):
        for m, c in p.items():
            k = sum(m) - 1
            if k < 0:
                raise ValueError('constant term in component {} has no grade'.format(i))
            pieces.setdefault(k, [dict() for _ in range(f.dim)])[i][m] = c
    ring = f.ring
    return {k: PolyVectorField(f.dim, [ring.from_dict(d) for d in parts]) for k, parts in sorted(pieces.items())}


def _series(step, start: PolyVectorField, max_grade: int) -> PolyVectorField:
    result = start
    term = start
    j = 1
    while not term.is_zero:
        term = step(term).truncate(max_grade)*QQ(1, j)
        result = result + term
        j += 1
    return result


def _check_generator(h: PolyVectorField):
    if not h.is_zero and h.grades()[0] < 1:
        raise ValueError('generator must start at grade 1 or above')


def lie_transform(h: PolyVectorField, f: PolyVectorField, max_grade: int) -> PolyVectorField:
    """Push-forward exp(ad_h) f truncated at ``max_grade``.

    The result is the field in the coordinates x with y = map_h(x), where
    map_h is the time-one flow of ``h`` (see :func:`near_identity_map`).
    """
    _check_dims(h, f)
    _check_generator(h)
    return _series(lambda t: bracket(h, t), f.truncate(max_grade), max_grade)


def near_identity_map(h: PolyVectorField, max_grade: int) -> PolyVectorField:
    """Time-one flow of ``h`` as the polynomial map exp(L_h) id, truncated.

    The map components are stored as a :class:`PolyVectorField` whose terms
    have grade at most ``max_grade`` (degree at most ``max_grade + 1``).
    """
    _check_generator(h)
    return _series(lambda t: lie_derivative(h, t), PolyVectorField.identity(h.dim), max_grade)
