"""Box recursion, reentry and orbit detection for iterated maps.

Forms are chains: ``Empty`` (the void), ``Box(child)`` (one enclosure) and
``Reentry`` (a leaf standing for the whole form).  Text rendering uses
``[...]`` for a box and ``*`` for the reentry marker, so the infinite nest
of boxes is written ``[*]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Union

__all__ = [
    "Empty",
    "Box",
    "Reentry",
    "FormExpr",
    "EMPTY",
    "REENTRY",
    "box",
    "depth",
    "iterate_boxes",
    "reentry_eigenform",
    "has_reentry",
    "substitute",
    "unfold",
    "render",
    "parse_form",
    "FixedPoint",
    "Cycle",
    "Exhausted",
    "Orbit",
    "StepError",
    "detect_orbit",
]


@dataclass(frozen=True)
class Empty:
    def __repr__(self):
        return "Empty"


@dataclass(frozen=True)
class Reentry:
    def __repr__(self):
        return "Reentry"


@dataclass(frozen=True)
class Box:
    child: "FormExpr"

    def __repr__(self):
        # iterative: deep nests must not hit the recursion limit
        n, leaf = _peel(self)
        return "Box(" * n + repr(leaf) + ")" * n


FormExpr = Union[Empty, Box, Reentry]

EMPTY = Empty()
REENTRY = Reentry()


def _peel(e: FormExpr) -> tuple[int, FormExpr]:
    """Return (number of boxes, innermost leaf)."""
    n = 0
    while isinstance(e, Box):
        e = e.child
        n += 1
    if not isinstance(e, (Empty, Reentry)):
        raise TypeError(f"not a form: {e!r}")
    return n, e


def _wrap(n: int, leaf: FormExpr) -> FormExpr:
    for _ in range(n):
        leaf = Box(leaf)
    return leaf


def box(e: FormExpr) -> FormExpr:
    return Box(e)


def depth(e: FormExpr) -> int:
    return _peel(e)[0]


def iterate_boxes(n: int) -> FormExpr:
    """Apply the enclosure ``n`` times to the empty form."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _wrap(n, EMPTY)


def reentry_eigenform() -> FormExpr:
    """``Box(Reentry)``: the finite token for the infinite nest."""
    return Box(REENTRY)


def has_reentry(e: FormExpr) -> bool:
    return isinstance(_peel(e)[1], Reentry)


def substitute(e: FormExpr, replacement: FormExpr) -> FormExpr:
    """Replace the reentry leaf of ``e`` by ``replacement``."""
    n, leaf = _peel(e)
    if not isinstance(leaf, Reentry):
        raise ValueError("form has no reentry marker")
    return _wrap(n, replacement)


def unfold(e: FormExpr, k: int) -> FormExpr:
    """Expand the reentry marker ``k`` times.

    The marker stands for the eigenform ``X = box(X)``, so each expansion
    rewrites it once by the defining equation, ``* -> [*]``.  The result
    keeps exactly one marker and ``unfold(unfold(e, a), b) == unfold(e, a + b)``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if not has_reentry(e):
        raise ValueError("form has no reentry marker; nothing to unfold")
    for _ in range(k):
        e = substitute(e, reentry_eigenform())
    return e


def render(e: FormExpr) -> str:
    n, leaf = _peel(e)
    inner = "*" if isinstance(leaf, Reentry) else ""
    return "[" * n + inner + "]" * n


def parse_form(text: str) -> FormExpr:
    """Inverse of :func:`render`: ``"[[*]]"`` -> ``Box(Box(Reentry))``."""
    s = text.strip()
    n = len(s) - len(s.lstrip("["))
    core = s[n:]
    closing = len(core) - len(core.rstrip("]"))
    middle = core[: len(core) - closing]
    if closing != n or middle not in ("", "*"):
        raise ValueError(f"malformed form: {text!r}")
    return _wrap(n, REENTRY if middle == "*" else EMPTY)


# -- orbits -------------------------------------------------------------

@dataclass(frozen=True)
class FixedPoint:
    index: int


@dataclass(frozen=True)
class Cycle:
    start_index: int
    period: int


@dataclass(frozen=True)
class Exhausted:
    bound: int


@dataclass(frozen=True)
class Orbit:
    trajectory: tuple
    status: Union[FixedPoint, Cycle, Exhausted]

    @property
    def period(self) -> int | None:
        if isinstance(self.status, FixedPoint):
            return 1
        if isinstance(self.status, Cycle):
            return self.status.period
        return None


class StepError(ArithmeticError):
    """The step map failed; ``index`` is the trajectory index of its input."""

    def __init__(self, index: int, state: Any, cause: BaseException):
        super().__init__(f"step failed at index {index} on state {state!r}: {cause}")
        self.index = index
        self.state = state


def _default_eq(a, b) -> bool:
    return a == b


def detect_orbit(
    step: Callable[[Any], Any],
    start: Any,
    bound: int,
    eq: Callable[[Any, Any], bool] = _default_eq,
) -> Orbit:
    """Iterate ``step`` from ``start`` for at most ``bound`` steps.

    Each new state is compared against every recorded state, so the first
    repeat gives the minimal period directly.  The trajectory ends with the
    repeated state when a cycle is found.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    states = [start]
    for i in range(bound):
        try:
            new = step(states[i])
        except Exception as exc:
            raise StepError(i, states[i], exc) from exc
        for j, old in enumerate(states):
            if eq(new, old):
                states.append(new)
                period = len(states) - 1 - j
                status = FixedPoint(j) if period == 1 else Cycle(j, period)
                return Orbit(tuple(states), status)
        states.append(new)
    return Orbit(tuple(states), Exhausted(bound))
