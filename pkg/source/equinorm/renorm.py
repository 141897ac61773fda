"""Renormalized forms beyond the Poincare-Dulac normal form

Two situations are handled by one elimination engine:

* fields with vanishing linear part (:func:`renormalize_zero_linear`);
* B3/C3 normal forms, whose linear part is a pure rotation
  (:func:`renormalize_lemma2`).

The engine works in a *frame*: a list of orthogonal directions in centralizer
coordinates that the field never leaves, grouped into two phases.  The first
phase holds the identity direction (Psi terms), the second the imaginary
directions (Phi terms).  Phases are processed in turn; within a phase, the
target order m runs upward.  At each m the generator may combine all phase
directions at orders 1..m-1, restricted so that its first-order effect on
phase slots below m vanishes.  The slots at order m that this restricted
operator can reach (chosen in direction order, so Psi before Phi and lower p
first) are eliminated; the rest survive.

Phi generators only ever produce Phi terms, so the second phase leaves the
Psi slots alone.
"""
from typing import Dict, List, NamedTuple, Sequence, Tuple
import dataclasses
import enum
import logging
import math

import sympy
from sympy.polys.domains import QQ

from . import rationals
from .equivariant import QuasilinearField, lie_transform
from .errors import IneffectiveError, RenormalizationError, WrongCaseError, ZeroFieldError
from .liealg import SchurType
from .normalform import CaseTag, Generator, NormalFormResult

logger = logging.getLogger(__name__)

INFINITY = math.inf


class RenormCase(enum.Enum):
    A0 = 'A0'
    B0_MU_LT_NU = 'B0_MU_LT_NU'
    B0_NU_LT_MU = 'B0_NU_LT_MU'
    B0_MU_EQ_NU = 'B0_MU_EQ_NU'
    C0_MU_MIN = 'C0_MU_MIN'
    C0_NU_MIN = 'C0_NU_MIN'
    B3_LEMMA2 = 'B3_LEMMA2'
    C3_LEMMA2 = 'C3_LEMMA2'


class Slot(NamedTuple):
    """Term r^{2 order} D x along the frame direction labelled ``direction``"""
    direction: str
    order: int

    def __str__(self):
        return 'r^{} {}'.format(2*self.order, self.direction)


class Certificate(NamedTuple):
    """Eliminated slots at one step and the exact residual of their equation"""
    slots: Tuple[Slot, ...]
    residual: Tuple[object, ...]


class Frame:
    """Orthogonal directions in centralizer coordinates, grouped into phases

    Parameters
    ----------
    labels : sequence of str
    directions : sequence of rational vectors of length s+1
    phases : sequence of lists of direction indices
    """
    def __init__(self, labels: Sequence[str], directions: Sequence[Sequence], phases: Sequence[Sequence[int]]):
        self.labels = tuple(labels)
        self.directions = tuple(tuple(rationals.rational(c) for c in d) for d in directions)
        self.phases = tuple(tuple(p) for p in phases)
        self._norms = [sum((c*c for c in d), QQ(0)) for d in self.directions]

    def coordinates(self, vector) -> List:
        """Coordinates of a coefficient vector along the directions.

        Raises
        ------
        RenormalizationError
            If the vector leaves the span of the frame.
        """
        coords = [sum((a*b for a, b in zip(vector, d)), QQ(0))/norm for d, norm in zip(self.directions, self._norms)]
        rebuilt = [sum((c*d[i] for c, d in zip(coords, self.directions)), QQ(0)) for i in range(len(vector))]
        if list(vector) != rebuilt:
            raise RenormalizationError('field leaves the span of the frame {}'.format(self.labels))
        return coords

    def field(self, basis, order: int, direction: int, coefficient=1) -> QuasilinearField:
        c = rationals.rational(coefficient)
        return QuasilinearField.from_vectors(basis, {order: [c*x for x in self.directions[direction]]})


@dataclasses.dataclass
class RenormalizedForm:
    case: RenormCase
    mu: int
    nu: Tuple
    source: QuasilinearField
    form: QuasilinearField
    generators: List[Generator]
    survivors: List[Slot]
    eliminated: List[Slot]
    truncation_order: int
    frame: Frame
    certificates: List[Certificate] = dataclasses.field(default_factory=list)

    def coefficient(self, slot: Slot):
        d = self.frame.labels.index(slot.direction)
        return self.frame.coordinates(self.form.order_vector(slot.order))[d]

    @property
    def coeffs(self) -> Dict[Slot, object]:
        """Surviving coefficients"""
        return {s: self.coefficient(s) for s in self.survivors}

    @property
    def c1(self):
        return self.coefficient(Slot('I', self.mu))

    @property
    def c2(self):
        return self.coefficient(Slot('I', 2*self.mu))


def leading_orders(q: QuasilinearField) -> Tuple[float, Tuple]:
    """Lowest order mu of alpha_0 and nu_p of each alpha_p, p >= 1.

    Absent series are reported as ``math.inf``.

    Raises
    ------
    ZeroFieldError
        If the field is identically zero.
    """
    if q.is_zero:
        raise ZeroFieldError('cannot renormalize the zero field')
    orders = [INFINITY]*len(q.basis)
    for (p, k), _ in q.items():
        orders[p] = min(orders[p], k)
    return orders[0], tuple(orders[1:])


def _standard_frame(schur_type: SchurType) -> Frame:
    if schur_type is SchurType.REAL:
        return Frame(['I'], [[1]], [[0]])
    if schur_type is SchurType.COMPLEX:
        return Frame(['I', 'J'], [[1, 0], [0, 1]], [[0], [1]])
    return Frame(['I', 'K1', 'K2', 'K3'], [[1 if i == j else 0 for j in range(4)] for i in range(4)], [[0], [1, 2, 3]])


def _phase_slots(frame: Frame, field: QuasilinearField, phase, order: int) -> List:
    coords = frame.coordinates(field.order_vector(order))
    return [coords[d] for d in phase]


def _effects(frame, phase, unknowns, field, top_order):
    """Rows: phase slots at orders 1..top_order; columns: unknown generators"""
    basis = field.basis
    columns = []
    for j, d in unknowns:
        effect = frame.field(basis, j, d).bracket(field, 2*top_order)
        column = []
        for o in range(1, top_order + 1):
            column.extend(_phase_slots(frame, effect, phase, o))
        columns.append(column)
    rows = len(phase)*top_order
    return sympy.Matrix(rows, len(unknowns), lambda r, c: rationals.to_sympy(columns[c][r]))


def _eliminate(q: QuasilinearField, frame: Frame, N: int):
    basis = q.basis
    top = N//2
    field = q.truncate(N)
    generators = []
    eliminated = []
    certificates = []
    for phase in frame.phases:
        for m in range(2, top + 1):
            unknowns = [(j, d) for j in range(1, m) for d in phase]
            effects = _effects(frame, phase, unknowns, field, m)
            split = len(phase)*(m - 1)
            kernel = effects[:split, :].nullspace()
            if not kernel:
                continue
            z = sympy.Matrix.hstack(*kernel)
            here = effects[split:, :]
            reach = here*z
            _, pivots = reach.T.rref()
            if not pivots:
                continue
            slots = tuple(Slot(frame.labels[phase[i]], m) for i in pivots)
            target = _phase_slots(frame, field, phase, m)
            if all(target[i] == 0 for i in pivots):
                eliminated.extend(slots)
                continue
            rows = reach.extract(list(pivots), list(range(reach.cols)))
            rhs = sympy.Matrix([-rationals.to_sympy(target[i]) for i in pivots])
            y = rationals.solve_particular(rows, rhs)
            residual = tuple(rationals.from_sympy(c) for c in rows*y - rhs)
            coefficients = z*y
            h = QuasilinearField(basis, {})
            for (j, d), c in zip(unknowns, coefficients):
                if c != 0:
                    h = h + frame.field(basis, j, d, rationals.from_sympy(c))
            field = lie_transform(h, field, N)
            after = _phase_slots(frame, field, phase, m)
            if any(after[i] != 0 for i in pivots) or any(residual):
                raise RenormalizationError('slots {} not eliminated at order {}'.format([str(s) for s in slots], m))
            logger.debug('order %d: eliminated %s with %s', m, [str(s) for s in slots], h)
            generators.append(Generator(max(j for (j, _), c in zip(unknowns, coefficients) if c != 0), h))
            eliminated.extend(slots)
            certificates.append(Certificate(slots, residual))
    for slot in eliminated:
        d = frame.labels.index(slot.direction)
        if frame.coordinates(field.order_vector(slot.order))[d] != 0:
            raise RenormalizationError('slot {} reappeared'.format(slot))
    return field, generators, eliminated, certificates


def _leading_per_direction(frame: Frame, q: QuasilinearField) -> List:
    """Lowest order with a nonzero coordinate along each frame direction"""
    leading = [INFINITY]*len(frame.directions)
    for k in q.orders():
        for d, c in enumerate(frame.coordinates(q.order_vector(k))):
            if c != 0:
                leading[d] = min(leading[d], k)
    return leading


def _survivors(frame: Frame, form: QuasilinearField, leading: Sequence, eliminated: Sequence[Slot],
               N: int) -> List[Slot]:
    """Non-eliminated slots up to N//2.

    A slot counts from its direction's own leading order in the source; below
    that order it survives only if the form carries a nonzero coefficient there.
    """
    gone = set(eliminated)
    out = []
    for k in range(N//2 + 1):
        coords = frame.coordinates(form.order_vector(k))
        for d, start in enumerate(leading):
            slot = Slot(frame.labels[d], k)
            if slot not in gone and (k >= start or coords[d] != 0):
                out.append(slot)
    return sorted(out, key=lambda s: (s.order, frame.labels.index(s.direction)))


def _run(case, q, frame, mu, nu, N) -> RenormalizedForm:
    form, generators, eliminated, certificates = _eliminate(q, frame, N)
    survivors = _survivors(frame, form, _leading_per_direction(frame, q), eliminated, N)
    logger.info('renormalized form %s: mu=%s nu=%s, %d survivors, %d generators', case.value, mu, nu,
                len(survivors), len(generators))
    return RenormalizedForm(case, mu, nu, q.truncate(N), form, generators, survivors,
                            sorted(eliminated, key=lambda s: (s.order, frame.labels.index(s.direction))),
                            N, frame, certificates)


def renormalize_zero_linear(q: QuasilinearField, N: int) -> RenormalizedForm:
    """Renormalized form of a field with vanishing linear part, up to grade N.

    Raises
    ------
    WrongCaseError
        If the linear part is nonzero.
    ZeroFieldError
        If the field vanishes.
    IneffectiveError
        If alpha_0 vanishes identically.
    """
    if any(q.linear_coefficients()):
        raise WrongCaseError('renormalize_zero_linear needs a vanishing linear part')
    mu, nu = leading_orders(q)
    if mu == INFINITY:
        raise IneffectiveError('alpha_0 vanishes identically; the renormalization scheme is ineffective')
    schur_type = q.basis.schur_type
    if schur_type is SchurType.REAL:
        case = RenormCase.A0
    elif schur_type is SchurType.COMPLEX:
        if mu < nu[0]:
            case = RenormCase.B0_MU_LT_NU
        elif nu[0] < mu:
            case = RenormCase.B0_NU_LT_MU
        else:
            case = RenormCase.B0_MU_EQ_NU
    else:
        case = RenormCase.C0_MU_MIN if mu <= min(nu) else RenormCase.C0_NU_MIN
    return _run(case, q, _standard_frame(schur_type), mu, nu, N)


def renormalize_lemma2(nfr: NormalFormResult, N: int) -> RenormalizedForm:
    """Further reduction of a B3 or C3 normal form.

    Survivors are c1 r^{2mu} I, c2 r^{4mu} I and d_k r^{2k} J for k <= mu,
    where J is the direction of the linear part.

    Raises
    ------
    WrongCaseError
        If the normal form is not of case B3 or C3.
    IneffectiveError
        If alpha_0 vanishes up to the truncation order.
    """
    if nfr.case not in (CaseTag.B3, CaseTag.C3):
        raise WrongCaseError('further reduction applies to B3 and C3, not {}'.format(nfr.case.value))
    if N > nfr.truncation_order:
        raise ValueError('normal form is only known up to grade {}'.format(nfr.truncation_order))
    q = nfr.nf.truncate(N)
    mu, nu = leading_orders(q)
    if mu == INFINITY:
        raise IneffectiveError('alpha_0 vanishes up to grade {}; Hamiltonian-like systems need a different scheme'.format(N))
    if nfr.case is CaseTag.B3:
        return _run(RenormCase.B3_LEMMA2, q, _standard_frame(SchurType.COMPLEX), mu, nu, N)
    beta = q.linear_coefficients()
    frame = Frame(['I', 'J'], [[1, 0, 0, 0], [0] + list(beta[1:])], [[0], [1]])
    return _run(RenormCase.C3_LEMMA2, q, frame, mu, nu, N)
