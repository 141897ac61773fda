"""Exact rational helpers shared by the symbolic modules

Coefficients everywhere are elements of sympy's rational field ``QQ``; matrices
are sympy matrices with rational entries.
"""
from fractions import Fraction
import math

import sympy
from sympy.polys.domains import QQ


def rational(value) -> "QQ.dtype":
    """Convert a value into an element of QQ.

    Parameters
    ----------
    value : int, str, Fraction, sympy.Rational or QQ element
        Strings are of the form ``"num"`` or ``"num/den"``.

    Returns
    -------
    QQ element

    Raises
    ------
    ValueError
        If the value is not an exact rational (floats are refused).
    """
    if isinstance(value, QQ.dtype):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError('inexact value {!r}; give a rational as "num/den"'.format(value))
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            f = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError('cannot parse {!r} as a rational'.format(value))
        if '.' in value or 'e' in value.lower():
            raise ValueError('inexact value {!r}; give a rational as "num/den"'.format(value))
        return QQ(f.numerator, f.denominator)
    expr = sympy.sympify(value)
    if not expr.is_Rational:
        raise ValueError('{!r} is not rational'.format(value))
    return QQ.from_sympy(expr)


def numerator(a) -> int:
    return int(QQ.numer(a))


def denominator(a) -> int:
    return int(QQ.denom(a))


def format_rational(a) -> str:
    """Format as ``"num"`` or ``"num/den"``"""
    if denominator(a) == 1:
        return str(numerator(a))
    return '{}/{}'.format(numerator(a), denominator(a))


def to_float(a) -> float:
    return numerator(a)/denominator(a)


def to_sympy(a) -> sympy.Rational:
    return QQ.to_sympy(a)


def from_sympy(expr) -> "QQ.dtype":
    return QQ.from_sympy(sympy.Rational(expr))


def rational_sqrt(a):
    """Exact square root of a non-negative rational, or None if irrational"""
    if a < 0:
        return None
    num, den = numerator(a), denominator(a)
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn*rn != num or rd*rd != den:
        return None
    return QQ(rn, rd)


def matrix(rows) -> sympy.ImmutableMatrix:
    """Build an exact immutable matrix from nested rows of rational-like values"""
    return sympy.ImmutableMatrix([[to_sympy(rational(v)) for v in row] for row in rows])


def matrix_entry(m, i, j):
    """Matrix entry as a QQ element"""
    return QQ.from_sympy(sympy.Rational(m[i, j]))


def format_matrix(m) -> list:
    return [[format_rational(matrix_entry(m, i, j)) for j in range(m.cols)] for i in range(m.rows)]


def solve_particular(a, b):
    """A particular solution of the exact linear system a y = b

    Free parameters of the general solution are set to zero so the answer is
    deterministic.

    Raises
    ------
    ValueError
        If the system is inconsistent.
    """
    sol, params = a.gauss_jordan_solve(b)
    if params.shape[0] > 0:
        sol = sol.xreplace({t: 0 for t in params})
    return sol
