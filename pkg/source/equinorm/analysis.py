"""System specifications and the analysis pipeline

A specification is a JSON document::

    {
      "group": "su2",
      "field": {"quasilinear": [{"p": 1, "k": 0, "value": "1"},
                                {"p": 0, "k": 1, "value": "1"}]},
      "options": {"order": 6, "renormalize": true}
    }

``group`` is a builtin name or a MatrixRep object; ``field`` holds exactly one
of ``quasilinear`` (coefficient list) or ``raw`` (PolyVectorField object).
:func:`run` turns a specification into a :class:`~equinorm.report.Report` and
an exit code.
"""
from typing import Any, List, Mapping, NamedTuple, Optional, Tuple, Union
import dataclasses
import json
import logging

from . import defaults, rationals
from .equivariant import BasisElement, QuasilinearField, decompose, expand_element, structure_bracket
from .errors import (IneffectiveError, NotIrreducibleError, NotQuasilinearError,
                     RepresentationError, SpecError, UnknownRepError, ZeroFieldError)
from .flow import flow_check
from .liealg import (MatrixRep, SchurType, builtin_rep, check_equivariance, compute_centralizer,
                     verify_quaternion_relations)
from .normalform import (CaseTag, NormalFormResult, SpectrumInfo, classify_case, normalize,
                         resonance_check, rotate_to_standard)
from .polyvf import PolyVectorField
from .polyvf import bracket as poly_bracket
from .renorm import RenormalizedForm, renormalize_lemma2, renormalize_zero_linear
from .report import Report, number

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_INAPPLICABLE = 3

DISCRETE_SYMMETRY_NOTE = ('equivariance is checked for the Lie algebra only; a group with several connected '
                          'components may impose further conditions on the field')


@dataclasses.dataclass
class SystemSpec:
    """Parsed system specification.

    Attributes
    ----------
    group : str or MatrixRep
        Builtin representation name or a custom representation.
    field : dict
        ``{"quasilinear": [...]}`` or ``{"raw": {...}}``.
    order : int
        Truncation order N (polynomial grade), at least 1.
    renormalize, flow_check : bool
        Requested stages.
    out : str, optional
        Report path.
    radii : list of float, optional
        Flow-check radii.
    horizon : float
        Flow-check time horizon.
    """
    group: Union[str, MatrixRep]
    field: dict
    order: int = defaults.truncation_order
    renormalize: bool = False
    flow_check: bool = False
    out: Optional[str] = None
    radii: Optional[List[float]] = None
    horizon: float = defaults.horizon

    @classmethod
    def from_dict(cls, data: Mapping) -> 'SystemSpec':
        if not isinstance(data, Mapping):
            raise SpecError('<root>', 'specification must be a JSON object')
        if 'group' not in data:
            raise SpecError('group', 'missing')
        group = data['group']
        if isinstance(group, Mapping):
            try:
                group = MatrixRep.from_dict(group)
            except (RepresentationError, KeyError, ValueError) as err:
                raise SpecError('group', 'invalid representation: {}'.format(err))
        elif not isinstance(group, str):
            raise SpecError('group', 'expected a builtin name or a representation object')

        field = data.get('field')
        if not isinstance(field, Mapping):
            raise SpecError('field', 'missing or not an object')
        forms = [k for k in ('quasilinear', 'raw') if k in field]
        if len(forms) != 1:
            raise SpecError('field', 'exactly one of "quasilinear" or "raw" is required')
        if forms[0] == 'quasilinear' and not isinstance(field['quasilinear'], list):
            raise SpecError('field.quasilinear', 'expected a list of coefficients')
        if forms[0] == 'raw' and not isinstance(field['raw'], Mapping):
            raise SpecError('field.raw', 'expected a vector field object')

        options = data.get('options', {})
        if not isinstance(options, Mapping):
            raise SpecError('options', 'expected an object')
        unknown = sorted(set(options) - {'order', 'renormalize', 'flow_check', 'out', 'radii', 'horizon'})
        if unknown:
            raise SpecError('options.{}'.format(unknown[0]), 'unknown option')
        order = options.get('order', defaults.truncation_order)
        if isinstance(order, bool) or not isinstance(order, int) or order < 1:
            raise SpecError('options.order', 'truncation order must be an integer >= 1')
        for flag in ('renormalize', 'flow_check'):
            if not isinstance(options.get(flag, False), bool):
                raise SpecError('options.{}'.format(flag), 'expected true or false')
        radii = options.get('radii')
        if radii is not None:
            if (not isinstance(radii, list) or not radii
                    or any(isinstance(r, bool) or not isinstance(r, (int, float)) or r <= 0 for r in radii)
                    or any(b >= a for a, b in zip(radii, radii[1:]))):
                raise SpecError('options.radii', 'expected positive, strictly decreasing numbers')
            radii = [float(r) for r in radii]
        horizon = options.get('horizon', defaults.horizon)
        if isinstance(horizon, bool) or not isinstance(horizon, (int, float)) or horizon <= 0:
            raise SpecError('options.horizon', 'expected a positive number')
        out = options.get('out')
        if out is not None and not isinstance(out, str):
            raise SpecError('options.out', 'expected a path')
        return cls(group, dict(field), order, options.get('renormalize', False), options.get('flow_check', False),
                   out, radii, float(horizon))

    @classmethod
    def load(cls, filename: str) -> 'SystemSpec':
        """Read a specification file.

        Raises
        ------
        SpecError
            If the file is not valid JSON or does not validate.
        """
        try:
            with open(filename, encoding='utf-8') as fh:
                data = json.load(fh)
        except json.JSONDecodeError as err:
            raise SpecError('<root>', 'not valid JSON: {}'.format(err))
        return cls.from_dict(data)


def _representation(spec: SystemSpec, report: Report) -> MatrixRep:
    if isinstance(spec.group, MatrixRep):
        rep = spec.group
        logger.warning('custom representation %s: results rely on its validation only', rep.name or '<unnamed>')
        report['representation'] = dict(rep.to_dict(), custom=True)
        return rep
    try:
        rep = builtin_rep(spec.group)
    except UnknownRepError:
        raise SpecError('group', 'unknown builtin representation {!r}'.format(spec.group))
    report['representation'] = dict(rep.to_dict(), custom=False)
    return rep


def _quasilinear_from_spec(entries: List[Any], basis) -> QuasilinearField:
    coeffs = {}
    for i, entry in enumerate(entries):
        where = 'field.quasilinear[{}]'.format(i)
        if not isinstance(entry, Mapping) or 'p' not in entry or 'k' not in entry:
            raise SpecError(where, 'expected an object with "p", "k" and "value"')
        p, k = entry['p'], entry['k']
        if isinstance(p, bool) or not isinstance(p, int) or not 0 <= p < len(basis):
            raise SpecError(where + '.p', 'index must lie in 0..{}'.format(len(basis) - 1))
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise SpecError(where + '.k', 'order must be a non-negative integer')
        try:
            if 'value' in entry:
                c = rationals.rational(entry['value'])
            else:
                c = rationals.rational('{}/{}'.format(entry['num'], entry.get('den', '1')))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
            raise SpecError(where + '.value', 'not a rational: {}'.format(err))
        coeffs[(p, k)] = rationals.rational(coeffs.get((p, k), 0)) + c
    return QuasilinearField(basis, coeffs)


def _spectrum_dict(spectrum: SpectrumInfo) -> dict:
    return {'beta0': number(spectrum.beta0), 'omega_sq': number(spectrum.omega_sq),
            'eigenvalues': [[lam.real, lam.imag] for lam in spectrum.eigenvalues()]}


def _normal_form_dict(res: NormalFormResult) -> dict:
    return {'truncation_order': res.truncation_order, 'source': res.source.to_dict(), 'nf': res.nf.to_dict(),
            'generators': [{'order': g.order, 'field': g.field.to_dict()} for g in res.generators]}


def _renormalized_dict(rf: RenormalizedForm) -> dict:
    return {'applicable': True, 'case': rf.case.value, 'mu': number(rf.mu), 'nu': [number(v) for v in rf.nu],
            'truncation_order': rf.truncation_order, 'form': rf.form.to_dict(),
            'frame': {'labels': list(rf.frame.labels),
                      'directions': [[number(c) for c in d] for d in rf.frame.directions]},
            'generators': [{'order': g.order, 'field': g.field.to_dict()} for g in rf.generators],
            'survivors': [{'slot': str(s), 'direction': s.direction, 'order': s.order,
                           'value': number(rf.coefficient(s))} for s in rf.survivors],
            'eliminated': [str(s) for s in rf.eliminated]}


def _note(report: Report, text: str):
    notes = report['notes'] if 'notes' in report else []
    notes.append(text)
    report['notes'] = notes


def _finish(report: Report, code: int) -> Tuple[int, Report]:
    report.exit_code = code
    return code, report


def run(spec: SystemSpec) -> Tuple[int, Report]:
    """Run classification, normalisation, renormalisation and checks on a specification.

    Validation failures and inapplicable cases are reported in the returned
    report with exit code 2 or 3.  An unexpected error gives exit code 1 and a
    report holding the sections computed before it.

    Returns
    -------
    tuple of (int, Report)
    """
    report = Report()
    try:
        return _run(spec, report)
    except Exception as err:
        logger.exception('internal error')
        report['error'] = {'field': None, 'message': 'internal error: {}'.format(err)}
        return _finish(report, EXIT_INTERNAL)


def _run(spec: SystemSpec, report: Report) -> Tuple[int, Report]:
    N = spec.order
    report['options'] = {'order': N, 'renormalize': spec.renormalize, 'flow_check': spec.flow_check}
    _note(report, DISCRETE_SYMMETRY_NOTE)

    try:
        rep = _representation(spec, report)
        basis = compute_centralizer(rep)
    except (SpecError, NotIrreducibleError) as err:
        report['error'] = {'field': getattr(err, 'field', 'group'), 'message': str(err)}
        return _finish(report, EXIT_INVALID)
    report['centralizer'] = {'group': basis.name, 'schur_type': basis.schur_type.name, 'dimension': len(basis),
                             'matrices': [rationals.format_matrix(m) for m in basis]}

    try:
        if 'quasilinear' in spec.field:
            q = _quasilinear_from_spec(spec.field['quasilinear'], basis)
            original = q.expand()
        else:
            try:
                original = PolyVectorField.from_dict(spec.field['raw'])
            except (KeyError, TypeError, ValueError) as err:
                raise SpecError('field.raw', 'cannot read vector field: {}'.format(err))
            if original.dim != rep.dim:
                raise SpecError('field.raw.dim', 'field of dimension {} for a representation of dimension {}'
                                .format(original.dim, rep.dim))
            q = None
    except SpecError as err:
        report['error'] = {'field': err.field, 'message': str(err)}
        return _finish(report, EXIT_INVALID)

    equivariance = check_equivariance(original, rep)
    report['equivariance'] = {'equivariant': equivariance.equivariant,
                              'violations': [{'generator': a, 'residual': r.to_dict()}
                                             for a, r in equivariance.violations]}
    if not equivariance.equivariant:
        logger.error('field is not equivariant under generators %s', [a for a, _ in equivariance.violations])
        return _finish(report, EXIT_INVALID)
    if q is None:
        try:
            q = decompose(original, basis)
        except NotQuasilinearError as err:
            logger.error('%s', err)
            report['not_quasilinear'] = {'message': str(err), 'residual': err.residual.to_dict()}
            return _finish(report, EXIT_INVALID)
    report['field'] = q.to_dict()

    case, spectrum = classify_case(q)
    report['case'] = case.value
    report['spectrum'] = _spectrum_dict(spectrum)

    if case is CaseTag.ZERO_LINEAR:
        if not spec.renormalize:
            _note(report, 'linear part vanishes; Poincare-Dulac normalisation does not apply, use --renormalize')
            return _finish(report, EXIT_INAPPLICABLE)
        try:
            rf = renormalize_zero_linear(q, N)
        except (IneffectiveError, ZeroFieldError) as err:
            _note(report, str(err))
            return _finish(report, EXIT_INAPPLICABLE)
        report['renormalized_form'] = _renormalized_dict(rf)
        return _finish(report, EXIT_OK)

    if N >= 2:
        report['resonances'] = [{'order': w.order, 'counts': list(w.counts), 'target': w.target}
                                for w in resonance_check(spectrum, N)]
    if basis.schur_type is SchurType.QUATERNIONIC and spectrum.omega_sq != 0:
        rotation = rotate_to_standard(q)
        report['rotation'] = {'exact': rotation.exact, 'matrix': rotation.rotation.tolist(),
                              'field': rotation.field.to_dict()}
    res = normalize(q, N)
    report['normal_form'] = _normal_form_dict(res)
    report['diagnostics'] = {'poincare_domain': res.diagnostics.poincare_domain,
                             'hyperbolic': res.diagnostics.hyperbolic,
                             'condition_A': res.diagnostics.condition_A,
                             'verdict': res.diagnostics.verdict.value,
                             'assumptions': list(res.diagnostics.assumptions)}

    code = EXIT_OK
    if spec.renormalize:
        if case in (CaseTag.B3, CaseTag.C3):
            try:
                report['renormalized_form'] = _renormalized_dict(renormalize_lemma2(res, N))
            except IneffectiveError as err:
                _note(report, str(err))
                code = EXIT_INAPPLICABLE
        else:
            report['renormalized_form'] = {'applicable': False,
                                           'reason': 'case {} has a linear normal form'.format(case.value)}

    if spec.flow_check:
        report['flow_check'] = flow_check(original, res, spec.radii, spec.horizon).to_dict()
    return _finish(report, code)


class OracleRow(NamedTuple):
    """One line of the oracle-check table"""
    group: str
    check: str
    cases: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def oracle_check(group: str, max_order: int=None) -> List[OracleRow]:
    """Compare the structured computations of a builtin group against the polynomial oracle.

    Checks the closed-form bracket of every unordered pair of basis elements
    with orders up to ``max_order`` against the bracket of their expansions,
    that the centralizer commutes with the representation and, for
    quaternionic groups, the quaternion relations.
    """
    max_order = defaults.oracle_max_order if max_order is None else max_order
    rep = builtin_rep(group)
    basis = compute_centralizer(rep)
    rows = [OracleRow(group, 'centralizer commutes', len(basis), 0 if basis.commutes_with(rep) else 1)]

    elements = [BasisElement(p, k) for k in range(max_order + 1) for p in range(len(basis))]
    expansions = {e: expand_element(e, basis) for e in elements}
    failures = cases = 0
    for i, e1 in enumerate(elements):
        for e2 in elements[i:]:
            cases += 1
            structured = PolyVectorField.zero(basis.dim)
            for c, e in structure_bracket(e1, e2, basis):
                structured = structured + expand_element(e, basis)*c
            if structured != poly_bracket(expansions[e1], expansions[e2]):
                logger.error('bracket of %s and %s disagrees with the oracle', e1, e2)
                failures += 1
    rows.append(OracleRow(group, 'structure constants, orders <= {}'.format(max_order), cases, failures))

    if basis.schur_type is SchurType.QUATERNIONIC:
        rows.append(OracleRow(group, 'quaternion relations', 1, 0 if verify_quaternion_relations(basis) else 1))
    return rows
