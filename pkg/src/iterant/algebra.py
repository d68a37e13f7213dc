"""Iterant views, the temporal shift eta, and the algebra they generate.

An :class:`IterantView` ``[a, b]`` is one period of a two-phase oscillation
read from a chosen starting phase.  Views multiply componentwise.  The
shift ``eta`` satisfies ``[a, b] eta = eta [b, a]`` and ``eta eta = 1``;
every element of the resulting algebra is written ``A + B eta`` with
``A`` and ``B`` views, and the algebra is isomorphic to 2x2 matrices via
``even -> diagonal``, ``odd -> antidiagonal``.

The complex numbers sit inside as ``a + b i = [a, a] + [b, -b] eta`` where
``i = [1, -1] eta``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import scalar as sc
from .scalar import BackendMismatchError, Scalar

__all__ = [
    "IterantView",
    "IterantElement",
    "Matrix2",
    "NotInvertibleError",
    "view_product",
    "view_swap",
    "mul",
    "identity",
    "zero_element",
    "eta",
    "iterant_i",
    "real",
    "from_complex",
    "to_matrix",
    "from_matrix",
    "to_text",
    "from_text",
    "to_json",
    "from_json",
]


class NotInvertibleError(ZeroDivisionError):
    pass


def _same_backend(a, b) -> str:
    if a.backend != b.backend:
        raise BackendMismatchError(f"cannot combine {a.backend} and {b.backend} values")
    return a.backend


@dataclass(frozen=True, eq=False)
class IterantView:
    first: Scalar
    second: Scalar
    backend: str = field(init=False, repr=False)

    def __post_init__(self):
        t = type(self.first)
        if t is type(self.second) and (t is Fraction or t is float):
            object.__setattr__(self, "backend", sc.EXACT if t is Fraction else sc.FLOAT)
            return
        backend = sc.common_backend(self.first, self.second)
        object.__setattr__(self, "first", sc.coerce(self.first, backend))
        object.__setattr__(self, "second", sc.coerce(self.second, backend))
        object.__setattr__(self, "backend", backend)

    def __iter__(self):
        yield self.first
        yield self.second

    def __eq__(self, other):
        if not isinstance(other, IterantView):
            return NotImplemented
        return (
            self.backend == other.backend
            and self.first == other.first
            and self.second == other.second
        )

    def __hash__(self):
        return hash((self.backend, self.first, self.second))

    def __repr__(self):
        return f"[{sc.format_scalar(self.first)},{sc.format_scalar(self.second)}]"

    def __add__(self, other: IterantView) -> IterantView:
        _same_backend(self, other)
        return IterantView(self.first + other.first, self.second + other.second)

    def __sub__(self, other: IterantView) -> IterantView:
        _same_backend(self, other)
        return IterantView(self.first - other.first, self.second - other.second)

    def __neg__(self) -> IterantView:
        return IterantView(-self.first, -self.second)

    def __mul__(self, other: IterantView) -> IterantView:
        return view_product(self, other)

    def scale(self, s) -> IterantView:
        s = sc.coerce(s, self.backend)
        return IterantView(s * self.first, s * self.second)

    def swap(self) -> IterantView:
        return view_swap(self)

    def is_zero(self) -> bool:
        return self.first == 0 and self.second == 0


def view_product(u: IterantView, v: IterantView) -> IterantView:
    """``[a, b][c, d] = [ac, bd]``."""
    _same_backend(u, v)
    return IterantView(u.first * v.first, u.second * v.second)


def view_swap(u: IterantView) -> IterantView:
    """The same oscillation seen one time step later: ``[a, b] -> [b, a]``."""
    return IterantView(u.second, u.first)


@dataclass(frozen=True, eq=False)
class Matrix2:
    m11: Scalar
    m12: Scalar
    m21: Scalar
    m22: Scalar

    def __post_init__(self):
        t = type(self.m11)
        if (t is Fraction or t is float) and t is type(self.m12) is type(self.m21) is type(self.m22):
            return
        backend = sc.common_backend(self.m11, self.m12, self.m21, self.m22)
        for name in ("m11", "m12", "m21", "m22"):
            object.__setattr__(self, name, sc.coerce(getattr(self, name), backend))

    @classmethod
    def identity(cls, backend: str = sc.EXACT) -> Matrix2:
        o, z = sc.one(backend), sc.zero(backend)
        return cls(o, z, z, o)

    @classmethod
    def from_rows(cls, rows) -> Matrix2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def backend(self) -> str:
        return sc.backend_of(self.m11)

    def rows(self) -> tuple[tuple[Scalar, Scalar], tuple[Scalar, Scalar]]:
        return ((self.m11, self.m12), (self.m21, self.m22))

    def __eq__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return self.backend == other.backend and self.rows() == other.rows()

    def __hash__(self):
        return hash((self.backend, self.rows()))

    def __repr__(self):
        return f"Matrix2({self.rows()!r})"

    def __add__(self, other: Matrix2) -> Matrix2:
        _same_backend(self, other)
        return Matrix2(
            self.m11 + other.m11, self.m12 + other.m12,
            self.m21 + other.m21, self.m22 + other.m22,
        )

    def __sub__(self, other: Matrix2) -> Matrix2:
        _same_backend(self, other)
        return Matrix2(
            self.m11 - other.m11, self.m12 - other.m12,
            self.m21 - other.m21, self.m22 - other.m22,
        )

    def __mul__(self, other: Matrix2) -> Matrix2:
        _same_backend(self, other)
        a, b, c, d = self.m11, self.m12, self.m21, self.m22
        e, f, g, h = other.m11, other.m12, other.m21, other.m22
        return Matrix2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def det(self) -> Scalar:
        return self.m11 * self.m22 - self.m12 * self.m21


@dataclass(frozen=True, eq=False)
class IterantElement:
    """``even + odd * eta``; immutable, hashable on the exact backend."""

    even: IterantView
    odd: IterantView
    backend: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "backend", _same_backend(self.even, self.odd))

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, IterantElement):
            return NotImplemented
        return self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.even, self.odd))

    def isclose(self, other: IterantElement, tol) -> bool:
        """Componentwise comparison within an absolute tolerance ``tol``."""
        _same_backend(self, other)
        pairs = zip(self.components(), other.components())
        return all(sc.is_close(a, b, tol) for a, b in pairs)

    def components(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.even.first, self.even.second, self.odd.first, self.odd.second)

    def __repr__(self):
        return f"IterantElement({to_text(self)})"

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other) -> IterantElement:
        if isinstance(other, IterantElement):
            _same_backend(self, other)
            return other
        return real(sc.coerce(other, self.backend))

    def __add__(self, other) -> IterantElement:
        other = self._lift(other)
        return IterantElement(self.even + other.even, self.odd + other.odd)

    __radd__ = __add__

    def __sub__(self, other) -> IterantElement:
        other = self._lift(other)
        return IterantElement(self.even - other.even, self.odd - other.odd)

    def __rsub__(self, other) -> IterantElement:
        return self._lift(other) - self

    def __neg__(self) -> IterantElement:
        return IterantElement(-self.even, -self.odd)

    def __mul__(self, other) -> IterantElement:
        if isinstance(other, IterantElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> IterantElement:
        # scalars are central, so left and right scaling agree
        return self.scale(other)

    def __truediv__(self, other) -> IterantElement:
        if isinstance(other, IterantElement):
            return self * other.inverse()
        other = sc.coerce(other, self.backend)
        if other == 0:
            raise ZeroDivisionError("division by a zero scalar")
        return self.scale(1 / other)

    def __rtruediv__(self, other) -> IterantElement:
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int) -> IterantElement:
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = identity(self.backend)
        for _ in range(abs(n)):
            result = result * base
        return result

    def scale(self, s) -> IterantElement:
        return IterantElement(self.even.scale(s), self.odd.scale(s))

    # -- structure ------------------------------------------------------
    def det(self) -> Scalar:
        return to_matrix(self).det()

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> IterantElement:
        d = self.det()
        if d == 0:
            raise NotInvertibleError(f"{to_text(self)} has zero determinant")
        a, b = self.even
        c, e = self.odd
        return IterantElement(IterantView(b / d, a / d), IterantView(-c / d, -e / d))

    def conjugate(self) -> IterantElement:
        """Negate the eta part; on embedded complex numbers this is ``a - b i``."""
        return IterantElement(self.even, -self.odd)

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def is_real(self) -> bool:
        return self.odd.is_zero() and self.even.first == self.even.second

    def is_complex(self) -> bool:
        """True when the element lies in the embedded copy of C."""
        return self.even.first == self.even.second and self.odd.first == -self.odd.second

    def as_complex(self) -> tuple[Scalar, Scalar]:
        if not self.is_complex():
            raise ValueError(f"{to_text(self)} is not in the complex subring")
        return self.even.first, self.odd.first

    def magnitude(self) -> float:
        """Frobenius norm of the matrix image over sqrt(2); the modulus on C."""
        total = sum(c * c for c in self.components())
        return math.sqrt(total / 2)


def mul(x: IterantElement, y: IterantElement) -> IterantElement:
    """``(A + B eta)(C + D eta) = (AC + B swap(D)) + (AD + B swap(C)) eta``."""
    _same_backend(x, y)
    a1, a2 = x.even.first, x.even.second
    b1, b2 = x.odd.first, x.odd.second
    c1, c2 = y.even.first, y.even.second
    d1, d2 = y.odd.first, y.odd.second
    # swap(D) = [d2, d1], swap(C) = [c2, c1]
    return IterantElement(
        IterantView(a1 * c1 + b1 * d2, a2 * c2 + b2 * d1),
        IterantView(a1 * d1 + b1 * c2, a2 * d2 + b2 * c1),
    )


def identity(backend: str = sc.EXACT) -> IterantElement:
    o, z = sc.one(backend), sc.zero(backend)
    return IterantElement(IterantView(o, o), IterantView(z, z))


def zero_element(backend: str = sc.EXACT) -> IterantElement:
    z = sc.zero(backend)
    return IterantElement(IterantView(z, z), IterantView(z, z))


def real(value) -> IterantElement:
    backend = sc.common_backend(value)
    v = sc.coerce(value, backend)
    z = sc.zero(backend)
    return IterantElement(IterantView(v, v), IterantView(z, z))


def eta(backend: str = sc.EXACT) -> IterantElement:
    o, z = sc.one(backend), sc.zero(backend)
    return IterantElement(IterantView(z, z), IterantView(o, o))


def iterant_i(backend: str = sc.EXACT) -> IterantElement:
    """``i = [1, -1] eta``."""
    o, z = sc.one(backend), sc.zero(backend)
    return IterantElement(IterantView(z, z), IterantView(o, -o))


def from_complex(re, im) -> IterantElement:
    """Embed ``re + im i`` as ``[re, re] + [im, -im] eta``."""
    backend = sc.common_backend(re, im)
    re, im = sc.coerce(re, backend), sc.coerce(im, backend)
    return IterantElement(IterantView(re, re), IterantView(im, -im))


def to_matrix(x: IterantElement) -> Matrix2:
    return Matrix2(x.even.first, x.odd.first, x.odd.second, x.even.second)


def from_matrix(m: Matrix2) -> IterantElement:
    return IterantElement(IterantView(m.m11, m.m22), IterantView(m.m12, m.m21))


# -- serialization ------------------------------------------------------

def to_text(x: IterantElement) -> str:
    """Canonical ``[[a,b],[c,d]]`` form: even view then odd view."""
    parts = [sc.format_scalar(c) for c in x.components()]
    return f"[[{parts[0]},{parts[1]}],[{parts[2]},{parts[3]}]]"


def from_text(text: str) -> IterantElement:
    body = "".join(text.split())
    if not (body.startswith("[[") and body.endswith("]]")) or "],[" not in body:
        raise ValueError(f"not an iterant literal: {text!r}")
    left, right = body[2:-2].split("],[", 1)
    try:
        a, b = (sc.parse_scalar(t) for t in left.split(","))
        c, d = (sc.parse_scalar(t) for t in right.split(","))
    except ValueError as exc:
        raise ValueError(f"not an iterant literal: {text!r}") from exc
    return IterantElement(IterantView(a, b), IterantView(c, d))


def _json_scalar(v: Scalar):
    return str(v) if isinstance(v, Fraction) else v


def _from_json_scalar(v) -> Scalar:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return v
    raise ValueError(f"expected a 'p/q' string or a float, got {v!r}")


def to_dict(x: IterantElement) -> dict:
    return {
        "even": [_json_scalar(v) for v in x.even],
        "odd": [_json_scalar(v) for v in x.odd],
    }


def from_dict(data: dict) -> IterantElement:
    (a, b), (c, d) = data["even"], data["odd"]
    conv = _from_json_scalar
    return IterantElement(IterantView(conv(a), conv(b)), IterantView(conv(c), conv(d)))


def to_json(x: IterantElement) -> str:
    """``{"even":[a,b],"odd":[c,d]}``; rationals as ``"p/q"`` strings."""
    return json.dumps(to_dict(x), separators=(",", ":"))


def from_json(text: str) -> IterantElement:
    return from_dict(json.loads(text))
