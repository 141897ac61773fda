"""Command-line front end

::

    equinorm analyze SPEC.json [--order N] [--renormalize] [--flow-check] [--out PATH] [--compress]
    equinorm oracle-check [--group G] [--max-grade K]

Exit codes: 0 success, 1 internal error, 2 validation failure, 3 case not
handled (the partial report is still written).
"""
from typing import List, Optional
import argparse
import logging
import sys

from . import analysis
from .errors import SpecError, UnknownRepError

logger = logging.getLogger(__name__)

BUILTIN_GROUPS = ('so2', 'so3', 'su2')


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='equinorm',
                                     description='Normal and renormalized forms of equivariant vector fields.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more logging (repeatable)')
    parser.add_argument('-q', '--quiet', action='store_true', help='only log errors')
    commands = parser.add_subparsers(dest='command', required=True)

    analyze = commands.add_parser('analyze', help='classify and normalise a system specification')
    analyze.add_argument('spec', help='JSON system specification')
    analyze.add_argument('--order', type=int, default=None, help='truncation order N (polynomial grade)')
    analyze.add_argument('--renormalize', action='store_true', default=None, help='compute the renormalized form')
    analyze.add_argument('--flow-check', action='store_true', default=None, help='run the numeric flow check')
    analyze.add_argument('--out', default=None, help='report path')
    analyze.add_argument('--compress', action='store_true', help='gzip the report')

    oracle = commands.add_parser('oracle-check', help='check structure constants against the polynomial oracle')
    oracle.add_argument('--group', action='append', default=None,
                        help='builtin group (repeatable; default {})'.format(', '.join(BUILTIN_GROUPS)))
    oracle.add_argument('--max-grade', type=int, default=None, help='largest order r^(2k) checked')
    return parser


def _configure_logging(args: argparse.Namespace):
    if args.quiet:
        level = logging.ERROR
    else:
        level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')


def _analyze(args: argparse.Namespace) -> int:
    try:
        spec = analysis.SystemSpec.load(args.spec)
    except OSError as err:
        print('error: cannot read {}: {}'.format(args.spec, err), file=sys.stderr)
        return analysis.EXIT_INVALID
    except SpecError as err:
        print('error: {}'.format(err), file=sys.stderr)
        return analysis.EXIT_INVALID
    if args.order is not None:
        if args.order < 1:
            print('error: --order: truncation order must be >= 1', file=sys.stderr)
            return analysis.EXIT_INVALID
        spec.order = args.order
    if args.renormalize is not None:
        spec.renormalize = args.renormalize
    if args.flow_check is not None:
        spec.flow_check = args.flow_check
    if args.out is not None:
        spec.out = args.out

    code, report = analysis.run(spec)
    print(report.summary())
    if 'error' in report:
        print('error: {}'.format(report['error']['message']), file=sys.stderr)
    if spec.out:
        written = report.save(spec.out, compressed=args.compress)
        logger.info('report written to %s', written)
    else:
        print(report.dumps())
    return code


def _oracle_check(args: argparse.Namespace) -> int:
    rows = []
    try:
        for group in args.group or BUILTIN_GROUPS:
            rows.extend(analysis.oracle_check(group, args.max_grade))
    except UnknownRepError as err:
        print('error: --group: unknown builtin representation {}'.format(err), file=sys.stderr)
        return analysis.EXIT_INVALID
    print('{:<6} {:<36} {:>6} {:>8}  {}'.format('group', 'check', 'cases', 'failures', 'status'))
    for row in rows:
        print('{:<6} {:<36} {:>6} {:>8}  {}'.format(row.group, row.check, row.cases, row.failures,
                                                   'ok' if row.passed else 'FAIL'))
    return analysis.EXIT_OK if all(row.passed for row in rows) else analysis.EXIT_INTERNAL


def main(argv: Optional[List[str]]=None) -> int:
    args = _parser().parse_args(argv)
    _configure_logging(args)
    try:
        if args.command == 'analyze':
            return _analyze(args)
        return _oracle_check(args)
    except Exception:
        logger.exception('internal error')
        return analysis.EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
