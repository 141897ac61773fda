"""Case classification and Poincare-Dulac normal forms in the equivariant module

The linear part A = sum_p beta_p K_p of a quasilinear field decides the case.
Normalisation works order by order in r^2: at order k the homological operator
ad(A) acts on the slice span{Psi_k, Phi^(p)_k} through the matrix of
:func:`homological_matrix`; the part of the field in its range is removed by a
generator h_k and the kernel part is kept.
"""
from typing import List, NamedTuple, Optional, Tuple
import dataclasses
import enum
import fractions
import logging
import math

import numpy as np
import sympy
from sympy.polys.domains import QQ

from . import defaults, rationals
from .equivariant import QuasilinearField, lie_transform, structure_table
from .errors import TypeMismatchError, WrongCaseError
from .liealg import CentralizerBasis, SchurType

logger = logging.getLogger(__name__)


class CaseTag(enum.Enum):
    A = 'A'
    B1 = 'B1'
    B2 = 'B2'
    B3 = 'B3'
    C1 = 'C1'
    C2 = 'C2'
    C3 = 'C3'
    ZERO_LINEAR = 'ZERO_LINEAR'


class Verdict(enum.Enum):
    CONVERGENT = 'CONVERGENT'
    SMOOTH_CONJUGACY = 'SMOOTH_CONJUGACY'
    FORMAL_ONLY = 'FORMAL_ONLY'
    EXPECT_DIVERGENT = 'EXPECT_DIVERGENT'


@dataclasses.dataclass(frozen=True)
class SpectrumInfo:
    """Spectrum of the linear part: beta0 +/- i omega, or beta0 alone"""
    beta0: object
    omega_sq: object
    dim: int

    @property
    def omega(self) -> float:
        return math.sqrt(rationals.to_float(self.omega_sq))

    @property
    def exact_omega(self):
        """omega as a rational, or None when it is irrational"""
        return rationals.rational_sqrt(self.omega_sq)

    def multiplicities(self) -> List[Tuple[complex, int]]:
        """Distinct eigenvalues with their multiplicities"""
        b0 = rationals.to_float(self.beta0)
        if self.omega_sq == 0:
            return [(complex(b0, 0.0), self.dim)]
        return [(complex(b0, self.omega), self.dim//2), (complex(b0, -self.omega), self.dim//2)]

    def eigenvalues(self) -> List[complex]:
        return [lam for lam, mult in self.multiplicities() for _ in range(mult)]


class ResonanceWitness(NamedTuple):
    """sum_i counts[i] lambda_i = lambda_target over the distinct eigenvalues"""
    order: int
    counts: Tuple[int, ...]
    target: int


@dataclasses.dataclass(frozen=True)
class ConvergenceVerdict:
    poincare_domain: bool
    hyperbolic: bool
    condition_A: bool
    verdict: Verdict
    assumptions: Tuple[str, ...] = ()


class Generator(NamedTuple):
    """Generator h of one near-identity change of coordinates, of order k in r^2"""
    order: int
    field: QuasilinearField

    @property
    def grade(self) -> int:
        return 2*self.order


@dataclasses.dataclass
class NormalFormResult:
    case: CaseTag
    spectrum: SpectrumInfo
    source: QuasilinearField
    nf: QuasilinearField
    generators: List[Generator]
    truncation_order: int
    diagnostics: Optional[ConvergenceVerdict] = None


class RotationResult(NamedTuple):
    field: QuasilinearField
    rotation: np.ndarray
    exact: bool


def classify_case(q: QuasilinearField) -> Tuple[CaseTag, SpectrumInfo]:
    """Case tag and spectrum from the linear coefficients beta_p"""
    beta = q.linear_coefficients()
    schur_type = q.basis.schur_type
    beta0 = beta[0]
    omega_sq = sum((b*b for b in beta[1:]), QQ(0))
    spectrum = SpectrumInfo(beta0, omega_sq, q.dim)
    if beta0 == 0 and omega_sq == 0:
        case = CaseTag.ZERO_LINEAR
    elif schur_type is SchurType.REAL:
        case = CaseTag.A
    else:
        letter = 'B' if schur_type is SchurType.COMPLEX else 'C'
        if omega_sq == 0:
            case = CaseTag[letter + '1']
        elif beta0 != 0:
            case = CaseTag[letter + '2']
        else:
            case = CaseTag[letter + '3']
    logger.info('case %s over %s (beta0=%s, omega^2=%s)', case.value, q.basis.name,
                rationals.format_rational(beta0), rationals.format_rational(omega_sq))
    return case, spectrum


def resonance_check(spectrum: SpectrumInfo, max_order: int) -> List[ResonanceWitness]:
    """Resonances sum m_i lambda_i = lambda_j with 2 <= sum m_i <= max_order + 1.

    On the structured spectrum the condition reduces to (m - 1) beta0 = 0 and
    (m_plus - m_minus - sigma_j) omega = 0.
    """
    if max_order < 2:
        raise ValueError('resonance check needs max_order >= 2, got {}'.format(max_order))
    witnesses = []
    if spectrum.beta0 != 0:
        return witnesses
    for m in range(2, max_order + 2):
        if spectrum.omega_sq == 0:
            witnesses.append(ResonanceWitness(m, (m,), 0))
        elif m % 2:
            witnesses.append(ResonanceWitness(m, ((m + 1)//2, (m - 1)//2), 0))
            witnesses.append(ResonanceWitness(m, ((m - 1)//2, (m + 1)//2), 1))
    return witnesses


def homological_matrix(beta, k: int, basis: CentralizerBasis) -> sympy.Matrix:
    """Matrix of h -> {A, h} on the order-k slice, columns indexed by h's basis index"""
    table = structure_table(basis)
    size = len(basis)
    radial = table.radial
    m = sympy.zeros(size, size)
    for p, b in enumerate(beta):
        if not b:
            continue
        b = rationals.to_sympy(rationals.rational(b))
        for q in range(size):
            m[q, q] += b*2*k*rationals.to_sympy(radial[p])
            for r, c in enumerate(table.commutator(p, q)):
                m[r, q] += b*rationals.to_sympy(c)
    return m


def split_range_kernel(m: sympy.Matrix, v) -> Tuple[sympy.Matrix, sympy.Matrix]:
    """Split v = range part + kernel part for a semisimple matrix m"""
    v = sympy.Matrix([rationals.to_sympy(c) for c in v])
    columns = m.columnspace()
    kernel = m.nullspace()
    frame = sympy.Matrix.hstack(*(columns + kernel))
    if frame.cols != m.rows or frame.det() == 0:
        raise ValueError('homological operator is not semisimple')
    y = frame.LUsolve(v)
    removable = sympy.zeros(m.rows, 1)
    for i, c in enumerate(columns):
        removable += y[i]*c
    return removable, v - removable


def removable_part(q: QuasilinearField) -> QuasilinearField:
    """Part of q (orders k >= 1) lying in the range of ad(A)"""
    beta = q.linear_coefficients()
    vectors = {}
    for k in q.orders():
        if k == 0:
            continue
        removable, _ = split_range_kernel(homological_matrix(beta, k, q.basis), q.order_vector(k))
        vectors[k] = [rationals.from_sympy(c) for c in removable]
    return QuasilinearField.from_vectors(q.basis, vectors)


def replay(q: QuasilinearField, generators, max_grade: int) -> QuasilinearField:
    """Apply recorded generators in order by truncated Lie series"""
    current = q.truncate(max_grade)
    for g in generators:
        current = lie_transform(g.field, current, max_grade)
    return current


def normalize(q: QuasilinearField, N: int) -> NormalFormResult:
    """Poincare-Dulac normal form up to grade N.

    Parameters
    ----------
    q : QuasilinearField
        Field with nonzero linear part.
    N : int
        Truncation order (polynomial grade); orders k <= N//2 in r^2 are kept.

    Returns
    -------
    NormalFormResult

    Raises
    ------
    WrongCaseError
        If the linear part vanishes.
    """
    if N < 1:
        raise ValueError('truncation order must be at least 1, got {}'.format(N))
    case, spectrum = classify_case(q)
    if case is CaseTag.ZERO_LINEAR:
        raise WrongCaseError('zero linear part: use renormalize_zero_linear')
    basis = q.basis
    beta = q.linear_coefficients()
    current = q.truncate(N)
    generators = []
    for k in range(1, N//2 + 1):
        m = homological_matrix(beta, k, basis)
        removable, _ = split_range_kernel(m, current.order_vector(k))
        if all(c == 0 for c in removable):
            continue
        solution = rationals.solve_particular(m, removable)
        h = QuasilinearField.from_vectors(basis, {k: [rationals.from_sympy(c) for c in solution]})
        logger.debug('order %d generator %s', k, h)
        current = lie_transform(h, current, N)
        generators.append(Generator(k, h))
    result = NormalFormResult(case, spectrum, q.truncate(N), current, generators, N)
    result.diagnostics = convergence_diagnostics(result)
    logger.info('normal form of case %s: %d generators, verdict %s', case.value, len(generators),
                result.diagnostics.verdict.value)
    return result


def _proportional(v, beta) -> bool:
    pivot = next((p for p, b in enumerate(beta) if b), None)
    if pivot is None:
        return False
    t = v[pivot]/beta[pivot]
    return all(c == t*b for c, b in zip(v, beta))


def convergence_diagnostics(res: NormalFormResult) -> ConvergenceVerdict:
    """Checkable convergence criteria for a normal form.

    For these spectra the convex hull of the eigenvalues excludes the origin
    exactly when beta0 is nonzero, which is also the hyperbolic case.
    """
    beta0 = res.spectrum.beta0
    poincare = hyperbolic = beta0 != 0
    beta = res.nf.linear_coefficients()
    condition_a = any(beta) and all(_proportional(res.nf.order_vector(k), beta) for k in res.nf.orders() if k > 0)
    assumptions = []
    if poincare:
        verdict = Verdict.CONVERGENT
    elif condition_a:
        verdict = Verdict.CONVERGENT
        assumptions.append('normal form is (1 + a(r^2)) A x; the arithmetic condition on the spectrum is assumed')
    elif res.case is CaseTag.C3:
        verdict = Verdict.EXPECT_DIVERGENT
        assumptions.append('normalising transformation is generically divergent')
    else:
        verdict = Verdict.FORMAL_ONLY
    return ConvergenceVerdict(poincare, hyperbolic, bool(condition_a), verdict, tuple(assumptions))


def _qmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (a0*b0 - a1*b1 - a2*b2 - a3*b3,
            a0*b1 + a1*b0 + a2*b3 - a3*b2,
            a0*b2 - a1*b3 + a2*b0 + a3*b1,
            a0*b3 + a1*b2 - a2*b1 + a3*b0)


def _conjugation(u, zero, one):
    """o[q][p] with conj(u) e_p u = |u|^2 sum_q o[q][p] e_q, for p, q in 1..3"""
    norm2 = sum(c*c for c in u)
    ubar = (u[0], -u[1], -u[2], -u[3])
    o = [[zero]*3 for _ in range(3)]
    for p in range(3):
        e = [zero]*4
        e[p + 1] = one
        image = _qmul(_qmul(ubar, e), u)
        for q in range(3):
            o[q][p] = image[q + 1]/norm2
    return o


def _rotate_coefficients(q: QuasilinearField, o, value, convert) -> dict:
    coeffs = {}
    for k in q.orders():
        v = [value(c) for c in q.order_vector(k)]
        coeffs[(0, k)] = q[(0, k)]
        for r in range(3):
            coeffs[(r + 1, k)] = convert(sum(o[r][p]*v[p + 1] for p in range(3)))
    return coeffs


def rotate_to_standard(q: QuasilinearField) -> RotationResult:
    """Rotate a quaternionic field so its linear part is beta0 K_0 + omega K_1.

    The rotation x = U w uses U = sum_p u_p K_p/|u|, which commutes with the
    representation, so the rotated field is again quasilinear.  It is exact
    when omega is rational; otherwise it is computed in floating point and the
    coefficients are rationalised.

    Returns
    -------
    RotationResult
        Rotated field, the float matrix U and the exactness flag.

    Raises
    ------
    TypeMismatchError
        If the basis is not quaternionic.
    """
    basis = q.basis
    if basis.schur_type is not SchurType.QUATERNIONIC:
        raise TypeMismatchError('rotation to standard form needs a quaternionic basis')
    _, b1, b2, b3 = q.linear_coefficients()
    omega_sq = b1*b1 + b2*b2 + b3*b3
    identity = np.identity(basis.dim)
    if omega_sq == 0 or (b2 == 0 and b3 == 0 and b1 > 0):
        return RotationResult(q, identity, True)

    omega = rationals.rational_sqrt(omega_sq)
    exact = omega is not None
    if exact:
        if b1 == -omega:
            u = (QQ(0), QQ(0), QQ(1), QQ(0))
        else:
            u = (omega + b1, QQ(0), -b3, b2)
        o = _conjugation(u, QQ(0), QQ(1))
        field = QuasilinearField(basis, _rotate_coefficients(q, o, lambda c: c, lambda c: c))
        scale = math.sqrt(rationals.to_float(sum(c*c for c in u)))
        uf = [rationals.to_float(c) for c in u]
    else:
        w = math.sqrt(rationals.to_float(omega_sq))
        f1, f2, f3 = (rationals.to_float(c) for c in (b1, b2, b3))
        uf = [w + f1, 0.0, -f3, f2]
        o = _conjugation(uf, 0.0, 1.0)

        def approximate(c):
            if abs(c) < defaults.approximate_tolerance:
                return 0
            return fractions.Fraction(c).limit_denominator(defaults.max_denominator)
        field = QuasilinearField(basis, _rotate_coefficients(q, o, rationals.to_float, approximate))
        scale = math.sqrt(sum(c*c for c in uf))
        logger.warning('omega^2 = %s is not a rational square; rotation computed in floating point',
                       rationals.format_rational(omega_sq))
    rotation = sum(c*np.array(basis[p].tolist(), dtype=float) for p, c in enumerate(uf))/scale
    return RotationResult(field, rotation, exact)
