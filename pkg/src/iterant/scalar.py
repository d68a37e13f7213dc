"""Scalar coefficients: exact rationals or binary64 floats, never mixed.

Python ints are treated as backend-neutral literals and adopt the backend
of whatever they are combined with; ``Fraction`` and ``float`` operands
may not meet in one operation.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

EXACT = "exact"
FLOAT = "float"

Scalar = Union[Fraction, float]


class BackendMismatchError(TypeError):
    """Raised when exact and float values meet in a single operation."""


def backend_of(value) -> str | None:
    """Return ``"exact"``, ``"float"`` or ``None`` for a neutral int literal.

    Anything carrying a ``backend`` attribute (iterant elements, views)
    reports that attribute.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return EXACT
    if isinstance(value, float):
        return FLOAT
    if isinstance(value, int):
        return None
    backend = getattr(value, "backend", None)
    if backend is None:
        raise TypeError(f"unsupported scalar type {type(value).__name__}")
    return backend


def common_backend(*values, default: str = EXACT) -> str:
    found = None
    for v in values:
        b = backend_of(v)
        if b is None:
            continue
        if found is None:
            found = b
        elif b != found:
            raise BackendMismatchError(f"cannot combine {found} and {b} values")
    return found if found is not None else default


def coerce(value, backend: str) -> Scalar:
    """Convert ``value`` to ``backend``; only int literals may change type."""
    b = backend_of(value)
    if b is None:
        return Fraction(value) if backend == EXACT else float(value)
    if b != backend:
        raise BackendMismatchError(f"expected a {backend} value, got {b}")
    return value


def zero(backend: str) -> Scalar:
    return Fraction(0) if backend == EXACT else 0.0


def one(backend: str) -> Scalar:
    return Fraction(1) if backend == EXACT else 1.0


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"``, ``"p"`` (exact) or a float literal such as ``"0.5"``.

    Exact values never contain a decimal point or exponent, so any text
    that does is read as a float.
    """
    text = text.strip()
    lowered = text.lower()
    if any(ch in lowered for ch in ".e") or lowered.lstrip("+-") in ("inf", "nan", "infinity"):
        return float(text)
    return Fraction(text)


def parse_rational(text: str) -> Fraction:
    """Parse a decimal or ``p/q`` string as an exact rational."""
    return Fraction(text.strip())


def format_scalar(value: Scalar) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


def format_decimal(value: Scalar) -> str:
    """Decimal text for CSV output.

    Exact values with a terminating decimal expansion are written exactly;
    the rest fall back to the shortest round-tripping float repr.
    """
    if isinstance(value, Fraction):
        den = value.denominator
        twos = fives = 0
        while den % 2 == 0:
            den //= 2
            twos += 1
        while den % 5 == 0:
            den //= 5
            fives += 1
        if den != 1:
            return repr(float(value))
        digits = max(twos, fives)
        scaled = value * 10**digits
        sign = "-" if scaled < 0 else ""
        n = abs(scaled.numerator)
        if digits == 0:
            return f"{sign}{n}"
        whole, frac = divmod(n, 10**digits)
        return f"{sign}{whole}.{frac:0{digits}d}"
    return format_scalar(value)


def is_close(a: Scalar, b: Scalar, tol) -> bool:
    """Absolute-tolerance comparison; exact values with ``tol == 0`` compare exactly."""
    if tol is None:
        raise ValueError("a tolerance must be supplied")
    return abs(a - b) <= tol


def sqrt(value: Scalar) -> float:
    if isinstance(value, Fraction):
        raise BackendMismatchError("square roots require the float backend")
    return math.sqrt(value)
