"""Analysis reports
"""
from typing import Any
import datetime
import enum
import gzip
import json

from . import rationals


class Schema(enum.Enum):
    """Report schema versions.

    Attributes
    ----------
    V1
        First schema version.
    """
    V1 = "1"


def number(value):
    """JSON-friendly form of a rational, float or infinity"""
    if isinstance(value, float):
        if value != value:
            return None
        if value in (float('inf'), float('-inf')):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, int):
        return value
    return rationals.format_rational(rationals.rational(value))


class Report:
    """Ordered collection of report sections

    Sections are plain JSON-compatible values.  The report always carries the
    schema version and a timestamp; everything else is deterministic.
    """
    def __init__(self, schema: Schema=Schema.V1):
        self._schema = schema
        self._sections = {}
        self._timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec='seconds')
        self.exit_code = 0

    def __setitem__(self, key: str, value: Any):
        self._sections[key] = value

    def __getitem__(self, key: str):
        return self._sections[key]

    def __contains__(self, key: str):
        return key in self._sections

    def to_dict(self) -> dict:
        out = {'schema': self._schema.value, 'timestamp': self._timestamp, 'exit_code': self.exit_code}
        out.update(self._sections)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def save(self, filename: str, compressed: bool=False):
        """Write the JSON report.

        Parameters
        ----------
        filename : str
            Output path; ``.gz`` is appended when compressing unless present.
        compressed : bool
            Write gzip-compressed JSON.
        """
        text = self.dumps() + '\n'
        if compressed:
            if not filename.endswith('.gz'):
                filename = filename + '.gz'
            with gzip.open(filename, mode='wt', encoding='utf-8') as fh:
                fh.write(text)
        else:
            with open(filename, 'w', encoding='utf-8') as fh:
                fh.write(text)
        return filename

    def summary(self) -> str:
        """Human-readable summary for standard output"""
        lines = []
        if 'centralizer' in self:
            lines.append('group {}: centralizer {} (dimension {})'.format(
                self['centralizer']['group'], self['centralizer']['schur_type'], self['centralizer']['dimension']))
        if 'equivariance' in self:
            eq = self['equivariance']
            lines.append('equivariant: {}'.format('yes' if eq['equivariant'] else 'no'))
            for v in eq['violations']:
                lines.append('  residual against generator {}: {}'.format(v['generator'], json.dumps(v['residual']['terms'])))
        if 'not_quasilinear' in self:
            lines.append('not quasilinear, residual: {}'.format(json.dumps(self['not_quasilinear']['residual']['terms'])))
        if 'case' in self:
            spectrum = self['spectrum']
            lines.append('case {}: beta0 = {}, omega^2 = {}'.format(self['case'], spectrum['beta0'], spectrum['omega_sq']))
        if 'normal_form' in self:
            nf = self['normal_form']
            lines.append('normal form up to grade {}: {} terms, {} generators'.format(
                nf['truncation_order'], len(nf['nf']['coeffs']), len(nf['generators'])))
        if 'diagnostics' in self:
            d = self['diagnostics']
            lines.append('verdict: {}'.format(d['verdict']))
            lines.extend('  assumes: {}'.format(a) for a in d['assumptions'])
        if 'renormalized_form' in self:
            rf = self['renormalized_form']
            if rf.get('applicable', True):
                lines.append('renormalized form {} (mu = {}): survivors {}'.format(
                    rf['case'], rf['mu'], ', '.join(s['slot'] for s in rf['survivors'])))
            else:
                lines.append('renormalization not applicable: {}'.format(rf['reason']))
        if 'flow_check' in self:
            lines.append('flow check: fitted order {}'.format(self['flow_check']['fitted_order']))
        for note in self._sections.get('notes', []):
            lines.append('note: {}'.format(note))
        return '\n'.join(lines)
