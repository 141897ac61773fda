"""Exceptions raised by equinorm.

Library code raises these; only the command-line front end maps them to exit
codes.
"""


class EquinormError(Exception):
    """Base class for all equinorm errors"""


class DimensionError(EquinormError, ValueError):
    """Ambient dimensions of two operands do not agree"""


class UnknownRepError(EquinormError, KeyError):
    """Requested builtin representation does not exist"""


class RepresentationError(EquinormError, ValueError):
    """A user-supplied representation is not antisymmetric or does not close"""


class NotIrreducibleError(EquinormError):
    """Centralizer dimension is not 1, 2 or 4"""


class TypeMismatchError(EquinormError, TypeError):
    """Operation called on a centralizer basis of the wrong Schur type"""


class NotQuasilinearError(EquinormError):
    """Field does not lie in the module of quasilinear equivariant fields

    Parameters
    ----------
    message : str
        Description of the failure.
    residual : PolyVectorField
        Part of the field that could not be expressed in the module.
    """
    def __init__(self, message, residual):
        super(NotQuasilinearError, self).__init__(message)
        self.residual = residual


class WrongCaseError(EquinormError):
    """Operation does not apply to the case of the given field"""


class ZeroFieldError(EquinormError):
    """Field is identically zero"""


class IneffectiveError(EquinormError):
    """Renormalization has no leading radial term to work with

    Raised when the scalar series multiplying the identity vanishes up to the
    truncation order; such systems need a different (Hamiltonian) scheme.
    """


class RenormalizationError(EquinormError):
    """An elimination certificate failed"""


class SpecError(EquinormError, ValueError):
    """A system specification failed to parse or validate

    Parameters
    ----------
    field : str
        Dotted name of the offending key in the specification.
    message : str
        Description of the failure.
    """
    def __init__(self, field, message):
        super(SpecError, self).__init__('{}: {}'.format(field, message))
        self.field = field
