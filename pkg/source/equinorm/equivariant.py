"""Quasilinear equivariant vector fields

Every field equivariant under one of the supported representations has the
form x' = sum_p alpha_p(r^2) K_p x.  A :class:`QuasilinearField` stores the
coefficients a_{p,k} of alpha_p(r^2) = sum_k a_{p,k} r^{2k}; the basis
elements are Psi_k = r^{2k} x and Phi^(p)_k = r^{2k} K_p x.

Brackets of basis elements follow the closed form::

    {E^p_k, E^q_m} = 2 m s_p E^q_{k+m} - 2 k s_q E^p_{k+m} + sum_r C[p][q][r] E^r_{k+m}

where x.K_p x = s_p r^2 (so s_0 = 1 and s_p = 0 for the imaginary units) and
C is the commutator table {K_p x, K_q x} = sum_r C[p][q][r] K_r x.  The table
is read off once per basis with the :mod:`equinorm.polyvf` oracle.  For the
quaternionic su(2) basis this gives::

    {Phi^(p)_k, Phi^(q)_m} = -2 eps_pqs Phi^(s)_{k+m}

with no Psi contribution.
"""
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple
import collections
import functools
import logging

import sympy
from sympy.polys.domains import QQ

from . import rationals
from .errors import DimensionError, NotIrreducibleError, NotQuasilinearError
from .liealg import CentralizerBasis
from .polyvf import PolyVectorField, bracket as poly_bracket, grade_decompose, polynomial_ring

logger = logging.getLogger(__name__)

CoefficientKey = Tuple[int, int]

rho = sympy.Symbol('rho', nonnegative=True)


class BasisElement(NamedTuple):
    """Psi_k (p = 0) or Phi^(p)_k (p >= 1)"""
    p: int
    k: int

    @property
    def grade(self) -> int:
        return 2*self.k

    def __str__(self):
        if self.p == 0:
            return 'Psi_{}'.format(self.k)
        return 'Phi^({})_{}'.format(self.p, self.k)


def psi(k: int) -> BasisElement:
    return BasisElement(0, k)


def phi(p: int, k: int) -> BasisElement:
    if p < 1:
        raise ValueError('Phi elements need p >= 1')
    return BasisElement(p, k)


@functools.lru_cache(maxsize=None)
def _rho_power(dim: int, k: int):
    ring = polynomial_ring(dim)
    return sum((g*g for g in ring.gens), ring.zero)**k


@functools.lru_cache(maxsize=None)
def _linear_components(basis: CentralizerBasis):
    return tuple(PolyVectorField.linear(k).components for k in basis)


def expand_element(e: BasisElement, basis: CentralizerBasis) -> PolyVectorField:
    return QuasilinearField(basis, {(e.p, e.k): 1}).expand()


class StructureTable:
    """Bracket table of the Psi/Phi basis of one centralizer

    Parameters
    ----------
    basis : CentralizerBasis
    """
    def __init__(self, basis: CentralizerBasis):
        n = basis.dim
        self._basis = basis
        self._radial = []
        for p, k in enumerate(basis):
            s = k.trace()/n
            if (k + k.T)/2 != s*sympy.eye(n):
                raise NotIrreducibleError('K_{} has a non-scalar symmetric part'.format(p))
            self._radial.append(rationals.from_sympy(s))

        size = len(basis)
        self._commutators = [[None]*size for _ in range(size)]
        for p in range(size):
            for q in range(size):
                field = poly_bracket(expand_element(BasisElement(p, 0), basis),
                                     expand_element(BasisElement(q, 0), basis))
                self._commutators[p][q] = decompose(field, basis).order_vector(0)
        logger.debug('structure table for %s: %s', basis.name,
                     [[[rationals.format_rational(c) for c in v] for v in row] for row in self._commutators])

    @property
    def radial(self) -> List:
        """s_p with x.K_p x = s_p r^2"""
        return list(self._radial)

    def commutator(self, p: int, q: int) -> List:
        """C[p][q], coefficients of {K_p x, K_q x} on K_0 x .. K_s x"""
        return list(self._commutators[p][q])

    def bracket(self, e1: BasisElement, e2: BasisElement) -> List[Tuple[object, BasisElement]]:
        p, k = e1
        q, m = e2
        terms = collections.defaultdict(lambda: QQ(0))
        if m and self._radial[p]:
            terms[q] += 2*m*self._radial[p]
        if k and self._radial[q]:
            terms[p] -= 2*k*self._radial[q]
        for r, c in enumerate(self._commutators[p][q]):
            if c:
                terms[r] += c
        return [(c, BasisElement(r, k + m)) for r, c in sorted(terms.items()) if c]


@functools.lru_cache(maxsize=None)
def structure_table(basis: CentralizerBasis) -> StructureTable:
    """Cached :class:`StructureTable` of a basis"""
    return StructureTable(basis)


def structure_bracket(e1: BasisElement, e2: BasisElement, basis: CentralizerBasis) -> List[Tuple[object, BasisElement]]:
    """Bracket of two basis elements as a list of (coefficient, element)"""
    for e in (e1, e2):
        if not 0 <= e.p < len(basis) or e.k < 0:
            raise ValueError('{} is not an element of a {} basis'.format(e, basis.schur_type.name))
    return structure_table(basis).bracket(e1, e2)


class QuasilinearField:
    """Field sum_p alpha_p(r^2) K_p x given by its coefficients a_{p,k}.

    Parameters
    ----------
    basis : CentralizerBasis
    coeffs : mapping (p, k) -> rational
        Zero coefficients are dropped.
    """
    def __init__(self, basis: CentralizerBasis, coeffs: Optional[Mapping[CoefficientKey, object]]=None):
        self._basis = basis
        self._coeffs: Dict[CoefficientKey, object] = {}
        for (p, k), c in (coeffs or {}).items():
            p, k = int(p), int(k)
            if not 0 <= p < len(basis):
                raise DimensionError('index p={} outside the {} basis'.format(p, basis.schur_type.name))
            if k < 0:
                raise ValueError('negative power k={}'.format(k))
            c = rationals.rational(c)
            if c:
                self._coeffs[(p, k)] = c

    @classmethod
    def from_vectors(cls, basis: CentralizerBasis, vectors: Mapping[int, Iterable]) -> 'QuasilinearField':
        """Build from per-order coefficient vectors {k: [a_0k, .., a_sk]}"""
        return cls(basis, {(p, k): c for k, v in vectors.items() for p, c in enumerate(v)})

    @property
    def basis(self) -> CentralizerBasis:
        return self._basis

    @property
    def dim(self) -> int:
        return self._basis.dim

    @property
    def coeffs(self) -> Dict[CoefficientKey, object]:
        return dict(self._coeffs)

    def items(self) -> List[Tuple[CoefficientKey, object]]:
        return sorted(self._coeffs.items())

    def __getitem__(self, key: CoefficientKey):
        return self._coeffs.get(key, QQ(0))

    def __len__(self):
        return len(self._coeffs)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, QuasilinearField):
            return NotImplemented
        return self._basis == other._basis and self._coeffs == other._coeffs

    __hash__ = None

    def __repr__(self):
        terms = ['{}*{}'.format(rationals.format_rational(c), BasisElement(p, k)) for (p, k), c in self.items()]
        return 'QuasilinearField({}: {})'.format(self._basis.name, ' + '.join(terms) or '0')

    def orders(self) -> List[int]:
        return sorted({k for _, k in self._coeffs})

    def order_vector(self, k: int) -> List:
        return [self[(p, k)] for p in range(len(self._basis))]

    def linear_coefficients(self) -> List:
        """beta_p, the coefficients of the linear part"""
        return self.order_vector(0)

    def linear_part(self) -> 'QuasilinearField':
        return self.truncate(0)

    def truncate(self, max_grade: int) -> 'QuasilinearField':
        """Keep the terms r^{2k} K_p x with 2k <= max_grade"""
        return QuasilinearField(self._basis, {key: c for key, c in self._coeffs.items() if 2*key[1] <= max_grade})

    def _check(self, other: 'QuasilinearField'):
        if self._basis != other._basis:
            raise DimensionError('fields live over different centralizer bases')

    def __add__(self, other: 'QuasilinearField') -> 'QuasilinearField':
        self._check(other)
        out = dict(self._coeffs)
        for key, c in other._coeffs.items():
            out[key] = out.get(key, QQ(0)) + c
        return QuasilinearField(self._basis, out)

    def __neg__(self) -> 'QuasilinearField':
        return QuasilinearField(self._basis, {key: -c for key, c in self._coeffs.items()})

    def __sub__(self, other: 'QuasilinearField') -> 'QuasilinearField':
        return self + (-other)

    def __mul__(self, c) -> 'QuasilinearField':
        c = rationals.rational(c)
        return QuasilinearField(self._basis, {key: v*c for key, v in self._coeffs.items()})

    __rmul__ = __mul__

    def bracket(self, other: 'QuasilinearField', max_grade: Optional[int]=None) -> 'QuasilinearField':
        """{self, other} from the structure table, optionally truncated"""
        self._check(other)
        table = structure_table(self._basis)
        out = collections.defaultdict(lambda: QQ(0))
        for (p, k), a in self._coeffs.items():
            for (q, m), b in other._coeffs.items():
                if max_grade is not None and 2*(k + m) > max_grade:
                    continue
                for c, e in table.bracket(BasisElement(p, k), BasisElement(q, m)):
                    out[(e.p, e.k)] += a*b*c
        return QuasilinearField(self._basis, out)

    def expand(self) -> PolyVectorField:
        """Polynomial expansion sum a_{p,k} r^{2k} K_p x"""
        dim = self.dim
        ring = polynomial_ring(dim)
        linear = _linear_components(self._basis)
        comps = [ring.zero]*dim
        for (p, k), c in self._coeffs.items():
            radial = _rho_power(dim, k).mul_ground(c)
            for i in range(dim):
                if linear[p][i]:
                    comps[i] = comps[i] + radial*linear[p][i]
        return PolyVectorField(dim, comps)

    def to_dict(self) -> dict:
        return {'group': self._basis.name,
                'coeffs': [{'p': p, 'k': k, 'num': str(rationals.numerator(c)), 'den': str(rationals.denominator(c))}
                           for (p, k), c in self.items()]}

    @classmethod
    def from_dict(cls, data: Mapping, basis: CentralizerBasis) -> 'QuasilinearField':
        group = data.get('group')
        if group is not None and group != basis.name:
            raise ValueError('coefficients are for group {!r}, basis is {!r}'.format(group, basis.name))
        coeffs = {}
        for entry in data.get('coeffs', []):
            if 'value' in entry:
                c = rationals.rational(entry['value'])
            else:
                c = rationals.rational('{}/{}'.format(entry['num'], entry.get('den', '1')))
            key = (int(entry['p']), int(entry['k']))
            coeffs[key] = rationals.rational(coeffs.get(key, 0)) + c
        return cls(basis, coeffs)


def expand(q: QuasilinearField) -> PolyVectorField:
    return q.expand()


def decompose(f: PolyVectorField, basis: CentralizerBasis) -> QuasilinearField:
    """Write a polynomial field in the quasilinear basis.

    Each even grade 2k is compared with rho^k L x, where L is read from the
    coefficients of x_1^{2k} x_j, and projected onto the K_p; odd grades and
    constant terms cannot occur in the module.

    Raises
    ------
    DimensionError
        If the dimensions differ.
    NotQuasilinearError
        If the field is not in the module; the exception carries the residual.
    """
    if f.dim != basis.dim:
        raise DimensionError('field of dimension {} against basis of dimension {}'.format(f.dim, basis.dim))
    n = f.dim
    constant = f.truncate(-1)
    residual = constant
    coeffs = {}
    norms = [(k.T*k).trace() for k in basis]
    for grade, piece in grade_decompose(f - constant).items():
        if grade % 2:
            residual = residual + piece
            continue
        k = grade//2
        lead = [2*k] + [0]*(n - 1)
        entries = []
        for i in range(n):
            row = []
            for j in range(n):
                monomial = list(lead)
                monomial[j] += 1
                row.append(rationals.to_sympy(piece[i].get(tuple(monomial), QQ(0))))
            entries.append(row)
        linear = sympy.Matrix(entries)
        here = {}
        for p, kp in enumerate(basis):
            c = rationals.from_sympy((kp.T*linear).trace()/norms[p])
            if c:
                here[(p, k)] = c
        rebuilt = QuasilinearField(basis, here).expand()
        residual = residual + (piece - rebuilt)
        coeffs.update(here)
    if not residual.is_zero:
        raise NotQuasilinearError('field is not quasilinear over the {} centralizer ({} residual terms)'.format(basis.name, len(residual)), residual)
    return QuasilinearField(basis, coeffs)


def potentials(q: QuasilinearField) -> List[sympy.Poly]:
    """Potentials H_p(rho) = sum_k a_{p,k} rho^{k+1}/(2k+2), one per basis matrix

    With these, grad H_p(|x|^2) = alpha_p(|x|^2) x.
    """
    out = []
    for p in range(len(q.basis)):
        terms = {(k + 1,): c/(2*k + 2) for (pp, k), c in q.items() if pp == p}
        out.append(sympy.Poly.from_dict(terms, rho, domain=QQ) if terms else sympy.Poly(0, rho, domain=QQ))
    return out


def lie_transform(h: QuasilinearField, f: QuasilinearField, max_grade: int) -> QuasilinearField:
    """exp(ad_h) f truncated at ``max_grade``, computed with structure constants.

    ``h`` must have no r^0 terms.
    """
    if h and min(h.orders()) < 1:
        raise ValueError('generator must have no linear part')
    result = f.truncate(max_grade)
    term = result
    j = 1
    while term:
        term = h.bracket(term, max_grade)*QQ(1, j)
        result = result + term
        j += 1
    return result
