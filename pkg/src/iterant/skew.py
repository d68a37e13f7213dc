"""Discrete calculus with a time-shift operator ``J``.

Functions of time live on a uniform grid ``t = 0, dt, ..., n dt``.  The
shift obeys ``x(t) J = J x(t + dt)``, so an element of the operator
algebra is a finite sum ``sum_k J^k f_k(t)`` and products follow

    (J^a f)(J^b g) = J^(a+b) (sigma^b f) g

with ``sigma`` the one-sample forward shift.  The derivative carries one
factor of ``J``: ``D x = J (x(t + dt) - x(t)) / dt``.

Grids are finite, so shifting past the last sample yields an invalid
sample (``None``).  Invalid samples propagate through arithmetic and are
never read as data.

Brownian sign streams come from numpy's ``PCG64`` bit generator (the
PCG XSL-RR 128/64 algorithm, seeded through ``SeedSequence``): one 64-bit
draw per step, the step is positive when the top bit is set.  The stream
for a given seed is fixed by numpy's bit-generator stability guarantee and
does not depend on platform.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import scalar as sc
from .scalar import BackendMismatchError, Scalar

__all__ = [
    "TimeGrid",
    "TemporalFunction",
    "SkewElement",
    "GridError",
    "shift",
    "multiplication_operator",
    "shift_operator",
    "discrete_derivative",
    "skew_mul",
    "commutator",
    "CommutatorReport",
    "verify_commutator_identity",
    "brownian_path",
    "brownian_endpoints",
    "sign_bits",
    "function_to_csv",
    "report_to_csv",
    "skew_to_json",
    "skew_from_json",
]


class GridError(ValueError):
    pass


def _is_number(v) -> bool:
    return isinstance(v, (int, float, Fraction)) and not isinstance(v, bool)


@dataclass(frozen=True)
class TimeGrid:
    dt: Scalar
    n_steps: int

    def __post_init__(self):
        dt = sc.coerce(self.dt, sc.common_backend(self.dt))
        if not dt > 0:
            raise GridError(f"dt must be positive, got {dt}")
        if self.n_steps < 1:
            raise GridError(f"n_steps must be at least 1, got {self.n_steps}")
        object.__setattr__(self, "dt", dt)

    @property
    def backend(self) -> str:
        return sc.backend_of(self.dt)

    @property
    def n_points(self) -> int:
        return self.n_steps + 1

    def times(self) -> tuple[Scalar, ...]:
        return tuple(i * self.dt for i in range(self.n_points))


@dataclass(frozen=True)
class TemporalFunction:
    """Samples ``x(0), x(dt), ...``; ``None`` marks a sample past the data."""

    samples: tuple
    grid: TimeGrid

    def __post_init__(self):
        samples = tuple(self.samples)
        if len(samples) != self.grid.n_points:
            raise GridError(
                f"expected {self.grid.n_points} samples, got {len(samples)}"
            )
        backend = self.grid.backend
        valid = [s for s in samples if s is not None]
        if any(not _is_number(s) for s in valid):
            # ring-valued samples (iterant elements) keep their own type
            if sc.common_backend(*valid, default=backend) != backend:
                raise BackendMismatchError("samples and grid use different backends")
        elif not all(type(s) is float for s in valid) or backend != sc.FLOAT:
            samples = tuple(None if s is None else sc.coerce(s, backend) for s in samples)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def _trusted(cls, samples: tuple, grid: TimeGrid) -> TemporalFunction:
        # internal: samples already checked against the grid's backend
        f = object.__new__(cls)
        object.__setattr__(f, "samples", samples)
        object.__setattr__(f, "grid", grid)
        return f

    @classmethod
    def constant(cls, c, grid: TimeGrid) -> TemporalFunction:
        return cls((c,) * grid.n_points, grid)

    @classmethod
    def from_callable(cls, fn, grid: TimeGrid) -> TemporalFunction:
        return cls(tuple(fn(t) for t in grid.times()), grid)

    @property
    def valid(self) -> tuple[bool, ...]:
        return tuple(s is not None for s in self.samples)

    @property
    def n_valid(self) -> int:
        return sum(self.valid)

    def __len__(self):
        return len(self.samples)

    def _check(self, other: TemporalFunction):
        if self.grid != other.grid:
            raise GridError("functions live on different grids")

    def _zip(self, other, op) -> TemporalFunction:
        if not isinstance(other, TemporalFunction):
            other = TemporalFunction.constant(other, self.grid)
        self._check(other)
        out = tuple(
            None if a is None or b is None else op(a, b)
            for a, b in zip(self.samples, other.samples)
        )
        return TemporalFunction(out, self.grid)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._zip(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._zip(other, lambda a, b: a / b)

    def __neg__(self):
        return TemporalFunction(tuple(None if a is None else -a for a in self.samples), self.grid)

    def is_zero(self) -> bool:
        return all(s == 0 for s in self.samples if s is not None)


def shift(f: TemporalFunction, k: int = 1) -> TemporalFunction:
    """``g(t) = f(t + k dt)``; the last ``k`` samples become invalid."""
    if k < 0:
        raise ValueError("only forward shifts exist")
    s = f.samples
    out = s[k:] + (None,) * min(k, len(s))
    return TemporalFunction._trusted(out, f.grid)


@dataclass(frozen=True, eq=False)
class SkewElement:
    """Finite sum of ``J^k f_k``; ``terms`` maps k >= 0 to coefficients."""

    terms: Mapping[int, TemporalFunction]
    grid: TimeGrid

    def __post_init__(self):
        terms = {}
        for k, f in sorted(dict(self.terms).items()):
            if not isinstance(k, int) or k < 0:
                raise ValueError(f"J powers must be non-negative ints, got {k!r}")
            if f.grid != self.grid:
                raise GridError("all coefficients must share the element's grid")
            terms[k] = f
        object.__setattr__(self, "terms", MappingProxyType(terms))

    def __eq__(self, other):
        if not isinstance(other, SkewElement):
            return NotImplemented
        return self.grid == other.grid and dict(self.terms) == dict(other.terms)

    __hash__ = None

    def _check(self, other: SkewElement):
        if self.grid != other.grid:
            raise GridError("elements live on different grids")

    def __add__(self, other: SkewElement) -> SkewElement:
        self._check(other)
        terms = dict(self.terms)
        for k, g in other.terms.items():
            terms[k] = terms[k] + g if k in terms else g
        return SkewElement(terms, self.grid)

    def __neg__(self) -> SkewElement:
        return SkewElement({k: -f for k, f in self.terms.items()}, self.grid)

    def __sub__(self, other: SkewElement) -> SkewElement:
        return self + (-other)

    def __mul__(self, other: SkewElement) -> SkewElement:
        return skew_mul(self, other)

    def coefficient(self, k: int) -> TemporalFunction | None:
        return self.terms.get(k)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.terms.values())

    def nonzero_powers(self) -> tuple[int, ...]:
        return tuple(k for k, f in self.terms.items() if not f.is_zero())


def multiplication_operator(x: TemporalFunction) -> SkewElement:
    """``x`` read as the operator ``J^0 x``."""
    return SkewElement({0: x}, x.grid)


def shift_operator(grid: TimeGrid) -> SkewElement:
    return SkewElement({1: TemporalFunction.constant(1, grid)}, grid)


def discrete_derivative(x: TemporalFunction) -> SkewElement:
    """``D x = J (x(t + dt) - x(t)) / dt``."""
    if x.grid.n_points < 2:
        raise GridError("the derivative needs at least two grid points")
    return SkewElement({1: (shift(x) - x) / x.grid.dt}, x.grid)


def skew_mul(a: SkewElement, b: SkewElement) -> SkewElement:
    a._check(b)
    out: dict[int, TemporalFunction] = {}
    for pa, f in a.terms.items():
        for pb, g in b.terms.items():
            term = shift(f, pb) * g
            k = pa + pb
            out[k] = out[k] + term if k in out else term
    return SkewElement(out, a.grid)


def commutator(a: SkewElement, b: SkewElement) -> SkewElement:
    return skew_mul(a, b) - skew_mul(b, a)


@dataclass(frozen=True)
class CommutatorReport:
    """Per-sample comparison of ``[x, Dx]`` against ``J (dx)^2 / dt``."""

    backend: str
    t: tuple
    lhs: tuple
    rhs: tuple
    abs_dev: tuple
    stray_powers: tuple[int, ...]

    @property
    def max_deviation(self) -> Scalar:
        return max(self.abs_dev, default=sc.zero(self.backend))

    @property
    def exact_match(self) -> bool:
        return not self.stray_powers and all(d == 0 for d in self.abs_dev)

    def passed(self, tol=None) -> bool:
        if self.stray_powers:
            return False
        if self.backend == sc.EXACT and tol is None:
            return self.exact_match
        if tol is None:
            raise ValueError("float reports need an explicit tolerance")
        return self.max_deviation <= tol


def verify_commutator_identity(x: TemporalFunction) -> CommutatorReport:
    """Compute ``[x, Dx]`` through the skew product and compare it with the
    directly evaluated ``J (x(t + dt) - x(t))^2 / dt`` on every sample valid
    on both sides."""
    if x.grid.n_points < 3:
        raise GridError("verification needs at least three grid points")
    lhs = commutator(multiplication_operator(x), discrete_derivative(x))
    dx = shift(x) - x
    rhs = dx * dx / x.grid.dt
    stray = tuple(k for k in lhs.nonzero_powers() if k != 1)
    left = lhs.coefficient(1)
    rows = []
    for t, a, b in zip(x.grid.times(), left.samples, rhs.samples):
        if a is None or b is None:
            continue
        rows.append((t, a, b, abs(a - b)))
    cols = tuple(zip(*rows)) if rows else ((), (), (), ())
    return CommutatorReport(x.grid.backend, *cols, stray_powers=stray)


def sign_bits(seed: int, n: int) -> np.ndarray:
    """Top bit of each of the first ``n`` PCG64 outputs for ``seed``."""
    if seed < 0 or seed >= 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    raw = np.random.PCG64(seed).random_raw(n)
    return (raw >> np.uint64(63)).astype(np.int8)


def brownian_path(K, grid: TimeGrid, seed: int) -> TemporalFunction:
    """Walk from 0 with steps of ``+-sqrt(K dt)``, signs drawn from ``seed``."""
    K = sc.coerce(K, sc.FLOAT)
    if not K > 0:
        raise ValueError(f"diffusion constant must be positive, got {K}")
    if grid.backend != sc.FLOAT:
        raise BackendMismatchError("Brownian paths need a float grid")
    step = math.sqrt(K * grid.dt)
    x = 0.0
    samples = [x]
    for bit in sign_bits(seed, grid.n_steps).tolist():
        x = x + step if bit else x - step
        samples.append(x)
    return TemporalFunction._trusted(tuple(samples), grid)


def brownian_endpoints(K, grid: TimeGrid, seeds: Iterable[int]) -> list[float]:
    """Final positions of independent paths, in seed order."""
    return [brownian_path(K, grid, s).samples[-1] for s in seeds]


# -- export -------------------------------------------------------------

def function_to_csv(f: TemporalFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x", "valid"])
    for t, s in zip(f.grid.times(), f.samples):
        if s is None:
            w.writerow([sc.format_decimal(t), "", 0])
        else:
            w.writerow([sc.format_decimal(t), sc.format_decimal(s), 1])
    return buf.getvalue()


def report_to_csv(report: CommutatorReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "lhs", "rhs", "abs_dev"])
    for row in zip(report.t, report.lhs, report.rhs, report.abs_dev):
        w.writerow([sc.format_decimal(v) for v in row])
    return buf.getvalue()


def _json_value(v):
    if v is None:
        return None
    if isinstance(v, Fraction):
        return str(v)
    return v


def _from_json_value(v):
    if v is None:
        return None
    if isinstance(v, str):
        return Fraction(v)
    return float(v)


def skew_to_json(a: SkewElement) -> str:
    """``{"dt": ..., "n_steps": ..., "terms": {"<k>": [samples]}}``."""
    payload = {
        "dt": _json_value(a.grid.dt),
        "n_steps": a.grid.n_steps,
        "terms": {str(k): [_json_value(s) for s in f.samples] for k, f in a.terms.items()},
    }
    return json.dumps(payload, separators=(",", ":"))


def skew_from_json(text: str) -> SkewElement:
    data = json.loads(text)
    dt = _from_json_value(data["dt"])
    terms: dict[str, Sequence] = data["terms"]
    n_steps = data.get("n_steps")
    if n_steps is None:
        n_steps = len(next(iter(terms.values()))) - 1
    grid = TimeGrid(dt, n_steps)
    return SkewElement(
        {int(k): TemporalFunction(tuple(_from_json_value(s) for s in v), grid)
         for k, v in terms.items()},
        grid,
    )
