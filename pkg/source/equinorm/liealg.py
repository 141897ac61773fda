"""Matrix Lie algebra representations and their centralizers

A :class:`MatrixRep` holds the generator matrices H_(a) of a real orthogonal
representation.  :func:`compute_centralizer` solves the commutant system
[M, H_a] = 0 exactly and normalises the solution into a
:class:`CentralizerBasis` K_0 = I, K_1, ..., K_s of Schur type real, complex or
quaternionic.
"""
from typing import List, NamedTuple, Optional, Sequence, Tuple
import enum
import logging
import re

import sympy

from . import rationals
from .errors import (DimensionError, NotIrreducibleError, RepresentationError, TypeMismatchError,
                     UnknownRepError)
from .polyvf import PolyVectorField, bracket

logger = logging.getLogger(__name__)


class SchurType(enum.Enum):
    """Type of the centralizer algebra; the value is its dimension"""
    REAL = 1
    COMPLEX = 2
    QUATERNIONIC = 4


def _as_matrix(m) -> sympy.ImmutableMatrix:
    if isinstance(m, sympy.MatrixBase):
        return sympy.ImmutableMatrix(m)
    return rationals.matrix(m)


def _commutator(a, b):
    return a*b - b*a


def _vec(m) -> sympy.Matrix:
    return sympy.Matrix(list(m))


class LinearVF:
    """Linear vector field (M x)^i d/dx^i

    Parameters
    ----------
    matrix : square exact matrix or nested rows of rationals
    """
    def __init__(self, matrix):
        self._matrix = _as_matrix(matrix)
        if self._matrix.rows != self._matrix.cols:
            raise DimensionError('linear field needs a square matrix')

    @property
    def matrix(self) -> sympy.ImmutableMatrix:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.rows

    def field(self) -> PolyVectorField:
        return PolyVectorField.linear(self._matrix)


class MatrixRep:
    """Real matrix representation given by its generators.

    Parameters
    ----------
    generators : sequence of matrices
        Exact n x n generator matrices H_(a).
    name : str, optional
        Label such as ``"so3"``.
    reference_centralizer : sequence of matrices, optional
        Preferred normalised K_1..K_s (builtins only).
    validate : bool
        Check antisymmetry and closure, raising :class:`RepresentationError`.
    """
    def __init__(self, generators: Sequence, name: Optional[str]=None,
                 reference_centralizer: Optional[Sequence]=None, validate: bool=True):
        self._generators = tuple(_as_matrix(h) for h in generators)
        if len(self._generators) == 0:
            raise RepresentationError('a representation needs at least one generator')
        self._dim = self._generators[0].rows
        self._name = name
        self._reference = None
        if reference_centralizer is not None:
            self._reference = tuple(_as_matrix(k) for k in reference_centralizer)
        self._builtin = False
        if validate:
            self.validate()

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def generators(self) -> Tuple[sympy.ImmutableMatrix, ...]:
        return self._generators

    @property
    def name(self) -> Optional[str]:
        return self._name

    @property
    def builtin(self) -> bool:
        """True for representations made by :func:`builtin_rep`"""
        return self._builtin

    @property
    def reference_centralizer(self):
        return self._reference

    def __len__(self):
        return len(self._generators)

    def __repr__(self):
        return 'MatrixRep(name={!r}, dim={}, generators={})'.format(self._name, self._dim, len(self))

    def validate(self):
        """Check shapes, antisymmetry and closure under the commutator."""
        for a, h in enumerate(self._generators):
            if h.shape != (self._dim, self._dim):
                raise RepresentationError('generator {} has shape {}, expected {}x{}'.format(a, h.shape, self._dim, self._dim))
            if h.T != -h:
                raise RepresentationError('generator {} is not antisymmetric'.format(a))
        self.commutator_table()

    def commutator_table(self) -> List[List[List]]:
        """Structure constants c[a][b][g] with [H_a, H_b] = sum_g c[a][b][g] H_g.

        Raises
        ------
        RepresentationError
            If some commutator leaves the span of the generators.
        """
        span = sympy.Matrix.hstack(*[_vec(h) for h in self._generators])
        table = []
        for a, ha in enumerate(self._generators):
            row = []
            for b, hb in enumerate(self._generators):
                try:
                    c = rationals.solve_particular(span, _vec(_commutator(ha, hb)))
                except ValueError:
                    raise RepresentationError('[H_{}, H_{}] is not in the span of the generators'.format(a, b))
                row.append([rationals.from_sympy(v) for v in c])
            table.append(row)
        return table

    def vector_fields(self) -> List[LinearVF]:
        return [LinearVF(h) for h in self._generators]

    def to_dict(self) -> dict:
        return {'dim': self._dim, 'name': self._name,
                'generators': [rationals.format_matrix(h) for h in self._generators]}

    @classmethod
    def from_dict(cls, data) -> 'MatrixRep':
        try:
            generators = [rationals.matrix(h) for h in data['generators']]
        except (TypeError, ValueError) as err:
            raise RepresentationError('cannot read generators: {}'.format(err))
        rep = cls(generators, name=data.get('name'))
        if 'dim' in data and int(data['dim']) != rep.dim:
            raise RepresentationError('declared dim {} but generators are {}x{}'.format(data['dim'], rep.dim, rep.dim))
        return rep


_SU2_H = (
    [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])

_SU2_K = (
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]])

_SO2_J = [[0, -1], [1, 0]]


def _so3_generators():
    # (H_a)_ij = -eps_aij, so that [H_1, H_2] = H_3
    return [[[-sympy.LeviCivita(a, i, j) for j in range(3)] for i in range(3)] for a in range(3)]


def _so_generators(n: int):
    gens = []
    for a in range(n):
        for b in range(a + 1, n):
            h = [[0]*n for _ in range(n)]
            h[a][b] = -1
            h[b][a] = 1
            gens.append(h)
    return gens


def builtin_rep(name: str) -> MatrixRep:
    """Builtin fundamental representations.

    Parameters
    ----------
    name : str
        ``"so2"``, ``"so3"``, ``"su2"`` or ``"so<n>"`` for n >= 3.

    Returns
    -------
    MatrixRep

    Raises
    ------
    UnknownRepError
        If the name is not recognised.
    """
    if name == 'so2':
        rep = MatrixRep([_SO2_J], name=name, reference_centralizer=[_SO2_J])
    elif name == 'so3':
        rep = MatrixRep(_so3_generators(), name=name)
    elif name == 'su2':
        rep = MatrixRep(_SU2_H, name=name, reference_centralizer=_SU2_K)
    else:
        match = re.fullmatch(r'so(\d+)', name or '')
        if match is None or int(match.group(1)) < 3:
            raise UnknownRepError(name)
        rep = MatrixRep(_so_generators(int(match.group(1))), name=name)
    rep._builtin = True
    return rep


class EquivarianceResult(NamedTuple):
    """Outcome of :func:`check_equivariance`; violations pair a generator index with its residual"""
    equivariant: bool
    violations: List[Tuple[int, PolyVectorField]]


def check_equivariance(f: PolyVectorField, rep: MatrixRep) -> EquivarianceResult:
    """Check {f, Y_a} = 0 for every generator field Y_a = H_a x.

    Raises
    ------
    DimensionError
        If the field and the representation have different dimensions.
    """
    if f.dim != rep.dim:
        raise DimensionError('field of dimension {} against representation of dimension {}'.format(f.dim, rep.dim))
    violations = []
    for a, y in enumerate(rep.vector_fields()):
        residual = bracket(f, y.field())
        if not residual.is_zero:
            violations.append((a, residual))
    if violations:
        logger.debug('field fails equivariance for generators %s', [a for a, _ in violations])
    return EquivarianceResult(not violations, violations)


class CentralizerBasis:
    """Basis K_0 = I, K_1..K_s of the matrices commuting with a representation.

    The constructor only checks shapes; :func:`compute_centralizer` produces
    normalised bases and :func:`verify_quaternion_relations` checks them.

    Parameters
    ----------
    matrices : sequence of matrices
        K_0..K_s, with K_0 the identity.
    schur_type : SchurType
    rep : MatrixRep, optional
        Source representation.
    """
    def __init__(self, matrices: Sequence, schur_type: SchurType, rep: Optional[MatrixRep]=None):
        self._matrices = tuple(_as_matrix(k) for k in matrices)
        self._type = schur_type
        self._rep = rep
        self._dim = self._matrices[0].rows
        if len(self._matrices) != schur_type.value:
            raise DimensionError('{} needs {} matrices, got {}'.format(schur_type.name, schur_type.value, len(self._matrices)))
        for k in self._matrices:
            if k.shape != (self._dim, self._dim):
                raise DimensionError('centralizer matrices must all be {}x{}'.format(self._dim, self._dim))
        if self._matrices[0] != sympy.eye(self._dim):
            raise ValueError('K_0 must be the identity')

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def matrices(self) -> Tuple[sympy.ImmutableMatrix, ...]:
        return self._matrices

    @property
    def schur_type(self) -> SchurType:
        return self._type

    @property
    def rep(self) -> Optional[MatrixRep]:
        return self._rep

    @property
    def name(self) -> str:
        if self._rep is not None and self._rep.name:
            return self._rep.name
        return 'custom'

    def __len__(self):
        return len(self._matrices)

    def __getitem__(self, p: int) -> sympy.ImmutableMatrix:
        return self._matrices[p]

    def __iter__(self):
        return iter(self._matrices)

    def __eq__(self, other):
        if not isinstance(other, CentralizerBasis):
            return NotImplemented
        return self._type == other._type and self._matrices == other._matrices

    def __hash__(self):
        return hash((self._type, self._matrices))

    def __repr__(self):
        return 'CentralizerBasis({}, {}, dim={})'.format(self.name, self._type.name, self._dim)

    def commutes_with(self, rep: MatrixRep) -> bool:
        return all(_commutator(k, h) == sympy.zeros(self._dim) for k in self._matrices for h in rep.generators)


def _commutant(rep: MatrixRep) -> List[sympy.Matrix]:
    """Exact basis of {M : [M, H_a] = 0 for all a}, as n x n matrices"""
    n = rep.dim
    system = sympy.zeros(n*n*len(rep), n*n)
    for a, h in enumerate(rep.generators):
        for i in range(n):
            for j in range(n):
                row = a*n*n + i*n + j
                for c in range(n):
                    # (H M)_ij - (M H)_ij
                    system[row, c*n + j] += h[i, c]
                    system[row, i*n + c] -= h[c, j]
    return [sympy.Matrix(n, n, list(v)) for v in system.nullspace()]


def _inner(x, y, n):
    return -(x*y).trace()/n


def _first_entry_sign(m):
    for v in m:
        if v != 0:
            return 1 if v > 0 else -1
    return 1


def _unit_imaginary(x, n):
    """Rescale x so that x^2 = -I, with first nonzero entry positive."""
    c = rationals.from_sympy(_inner(x, x, n))
    root = rationals.rational_sqrt(c)
    if root is None or root == 0:
        raise NotIrreducibleError('cannot normalise centralizer element over the rationals (norm {})'.format(rationals.format_rational(c)))
    k = x/rationals.to_sympy(root)
    return k*_first_entry_sign(k)


def _in_span(m, basis) -> bool:
    if not basis:
        return m == sympy.zeros(*m.shape)
    span = sympy.Matrix.hstack(*[_vec(b) for b in basis])
    return span.rank() == sympy.Matrix.hstack(span, _vec(m)).rank()


def _normalise(elements, n, schur_type) -> List[sympy.Matrix]:
    imaginary = []
    for x in elements:
        x = x - (x.trace()/n)*sympy.eye(n)
        for y in imaginary:
            x = x - (_inner(x, y, n)/_inner(y, y, n))*y
        if x != sympy.zeros(n):
            imaginary.append(x)
    logger.debug('commutant has %d imaginary directions', len(imaginary))
    if len(imaginary) != schur_type.value - 1:
        raise NotIrreducibleError('commutant does not split into identity plus {} imaginary units'.format(schur_type.value - 1))
    if schur_type is SchurType.REAL:
        return []
    k1 = _unit_imaginary(imaginary[0], n)
    if schur_type is SchurType.COMPLEX:
        return [k1]
    k2 = _unit_imaginary(imaginary[1], n)
    return [k1, k2, k1*k2]


def compute_centralizer(rep: MatrixRep) -> CentralizerBasis:
    """Centralizer basis of a representation.

    Parameters
    ----------
    rep : MatrixRep

    Returns
    -------
    CentralizerBasis
        K_0 = I followed by imaginary units satisfying the type relations.

    Raises
    ------
    NotIrreducibleError
        If the commutant dimension is not 1, 2 or 4, or cannot be normalised.
    """
    n = rep.dim
    elements = _commutant(rep)
    try:
        schur_type = SchurType(len(elements))
    except ValueError:
        raise NotIrreducibleError('centralizer of {} has dimension {}'.format(rep.name or 'representation', len(elements)))

    imaginary = None
    if rep.reference_centralizer is not None:
        reference = list(rep.reference_centralizer)
        if (len(reference) == schur_type.value - 1
                and all(_commutator(k, h) == sympy.zeros(n) for k in reference for h in rep.generators)
                and all(_in_span(k, elements) for k in reference)):
            imaginary = reference
        else:
            logger.warning('reference centralizer of %s rejected, normalising the commutant instead', rep.name)
    if imaginary is None:
        imaginary = _normalise(elements, n, schur_type)

    basis = CentralizerBasis([sympy.eye(n)] + [sympy.ImmutableMatrix(k) for k in imaginary], schur_type, rep)
    if schur_type is SchurType.COMPLEX and basis[1]*basis[1] != -sympy.eye(n):
        raise NotIrreducibleError('complex unit does not square to -I')
    if schur_type is SchurType.QUATERNIONIC and not verify_quaternion_relations(basis):
        raise NotIrreducibleError('quaternionic units fail the quaternion relations')
    logger.debug('centralizer of %s: %s', rep.name, schur_type.name)
    return basis


def verify_quaternion_relations(basis: CentralizerBasis) -> bool:
    """Check K_a K_b = eps_abc K_c - delta_ab I for a, b in 1..3.

    Raises
    ------
    TypeMismatchError
        If the basis is not quaternionic.
    """
    if basis.schur_type is not SchurType.QUATERNIONIC:
        raise TypeMismatchError('quaternion relations need a quaternionic basis, got {}'.format(basis.schur_type.name))
    n = basis.dim
    for a in range(1, 4):
        for b in range(1, 4):
            expected = -sympy.eye(n) if a == b else sympy.zeros(n)
            for c in range(1, 4):
                expected = expected + sympy.LeviCivita(a, b, c)*basis[c]
            if basis[a]*basis[b] != expected:
                return False
    return True
