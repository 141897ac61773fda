## ==========================================================================
##
## Module metadata.
##
## ==========================================================================
__author__ = "The equinorm developers"
__copyright__ = "Copyright 2023 The equinorm developers"
__email__ = ""
__status__ = "development"
__docformat__ = "reStructuredText"
try:
    from ._version import __version__, __version_tuple__
except ImportError:
    __version__ = "0.1.0"
    __version_tuple__ = (0, 1, 0)

import logging
logging.getLogger(__name__).addHandler(logging.NullHandler())

from .errors import (EquinormError, DimensionError, UnknownRepError, RepresentationError, NotIrreducibleError,
                     TypeMismatchError, NotQuasilinearError, WrongCaseError, ZeroFieldError, IneffectiveError,
                     RenormalizationError, SpecError)
from .polyvf import PolyVectorField, bracket, lie_derivative, lie_transform, near_identity_map, grade_decompose
from .liealg import (SchurType, LinearVF, MatrixRep, CentralizerBasis, builtin_rep, check_equivariance,
                     compute_centralizer, verify_quaternion_relations)
from .equivariant import BasisElement, QuasilinearField, psi, phi, structure_bracket, structure_table, decompose, expand, potentials
from .normalform import (CaseTag, Verdict, SpectrumInfo, NormalFormResult, ConvergenceVerdict, classify_case,
                         resonance_check, normalize, convergence_diagnostics, rotate_to_standard)
from .renorm import RenormCase, Slot, RenormalizedForm, leading_orders, renormalize_zero_linear, renormalize_lemma2
from .flow import CoordinateChange, FlowCheckReport, flow_check
from .analysis import SystemSpec, run, oracle_check
from .report import Report, Schema
