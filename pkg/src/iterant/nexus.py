"""Physics on top of the iterant algebra.

* replacing ``t`` by ``i t`` turns the Euclidean form into the Minkowski one;
* eigenpair checks ``H v = lambda v`` over iterant-complex entries;
* plane waves ``exp(i (k x - omega t))`` and their forward differences;
* the substitution chain that turns the discrete commutator into
  ``[p, q] = i hbar``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import scalar as sc
from .algebra import (
    IterantElement,
    from_complex,
    identity,
    iterant_i,
    real,
    to_text,
)
from .scalar import Scalar
from .skew import GridError, TemporalFunction, TimeGrid, discrete_derivative

__all__ = [
    "FourPoint",
    "PlaneWaveParams",
    "PhysicalConstants",
    "euclidean_q",
    "minkowski_q",
    "nexus_substitute",
    "verify_eigenpair",
    "plane_wave",
    "WaveReport",
    "check_wave_derivative",
    "convergence_order",
    "DerivationStep",
    "Derivation",
    "DerivationError",
    "derive_heisenberg",
    "heisenberg_trace",
]


@dataclass(frozen=True)
class FourPoint:
    x: Scalar
    y: Scalar
    z: Scalar
    t: Scalar

    def __post_init__(self):
        backend = sc.common_backend(self.x, self.y, self.z, self.t)
        for name in ("x", "y", "z", "t"):
            object.__setattr__(self, name, sc.coerce(getattr(self, name), backend))

    @property
    def backend(self) -> str:
        return sc.backend_of(self.x)


@dataclass(frozen=True)
class PlaneWaveParams:
    k: float
    omega: float = 0.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: Fraction
    mass: Fraction

    def __post_init__(self):
        backend = sc.common_backend(self.hbar, self.mass)
        object.__setattr__(self, "hbar", sc.coerce(self.hbar, backend))
        object.__setattr__(self, "mass", sc.coerce(self.mass, backend))
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")


def euclidean_q(p: FourPoint) -> Scalar:
    return p.x * p.x + p.y * p.y + p.z * p.z + p.t * p.t


def minkowski_q(p: FourPoint) -> Scalar:
    """``x^2 + y^2 + z^2 - t^2`` in plain scalar arithmetic."""
    return p.x * p.x + p.y * p.y + p.z * p.z - p.t * p.t


def nexus_substitute(p: FourPoint) -> IterantElement:
    """Evaluate ``x^2 + y^2 + z^2 + (i t)^2`` in the iterant algebra."""
    i = iterant_i(p.backend)
    it = i * p.t
    spatial = real(p.x * p.x + p.y * p.y + p.z * p.z)
    return spatial + it * it


def _vector_is_zero(v: Sequence[IterantElement]) -> bool:
    return all(c.is_zero() for c in v)


def verify_eigenpair(H, v, lam: IterantElement, tol=None) -> bool:
    """Check ``H v == lam v`` for a 2x2 matrix of iterant elements.

    Exact entries compare exactly (``tol`` may be omitted or 0).  Float
    entries need an explicit ``tol``; each component of the residual must
    have magnitude at most ``tol``.
    """
    (h11, h12), (h21, h22) = H
    v1, v2 = v
    if _vector_is_zero(v):
        raise ValueError("the zero vector is not an eigenvector")
    backend = lam.backend
    if backend == sc.FLOAT and tol is None:
        raise ValueError("float eigenpair checks need an explicit tolerance")
    hv = (h11 * v1 + h12 * v2, h21 * v1 + h22 * v2)
    lv = (lam * v1, lam * v2)
    if backend == sc.EXACT and not tol:
        return hv == lv
    return all((a - b).magnitude() <= tol for a, b in zip(hv, lv))


def plane_wave(params: PlaneWaveParams, x: float, t: float = 0.0) -> IterantElement:
    """``cos(phase) + i sin(phase)`` with ``phase = k x - omega t``."""
    phase = float(params.k) * float(x) - float(params.omega) * float(t)
    return from_complex(math.cos(phase), math.sin(phase))


@dataclass(frozen=True)
class WaveReport:
    dx: float
    n_valid: int
    max_abs_deviation: float
    max_rel_deviation: float


def check_wave_derivative(params: PlaneWaveParams, grid: TimeGrid) -> WaveReport:
    """Compare the forward difference of ``psi(x, 0)`` with ``i k psi``.

    ``grid`` is read as a spatial grid: its step is ``dx``.  The difference
    is taken with :func:`iterant.skew.discrete_derivative`, whose ``J``
    coefficient is the forward quotient.
    """
    if grid.backend != sc.FLOAT:
        raise sc.BackendMismatchError("wave checks run on the float backend")
    if grid.n_points < 2:
        raise GridError("degenerate grid")
    psi = TemporalFunction.from_callable(lambda x: plane_wave(params, x), grid)
    coeff = discrete_derivative(psi).coefficient(1)
    ik = iterant_i(sc.FLOAT) * float(params.k)
    worst_abs = worst_rel = 0.0
    n = 0
    for d, p in zip(coeff.samples, psi.samples):
        if d is None:
            continue
        n += 1
        exact = ik * p
        dev = (d - exact).magnitude()
        scale = exact.magnitude()
        worst_abs = max(worst_abs, dev)
        worst_rel = max(worst_rel, dev / scale if scale else dev)
    return WaveReport(float(grid.dt), n, worst_abs, worst_rel)


def convergence_order(steps: Sequence[float], deviations: Sequence[float]) -> float:
    """Least-squares slope of ``log(deviation)`` against ``log(step)``."""
    xs = [math.log(s) for s in steps]
    ys = [math.log(d) for d in deviations]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    num = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    den = sum((a - mx) ** 2 for a in xs)
    return num / den


# -- the commutator-to-Heisenberg chain ----------------------------------

class DerivationError(AssertionError):
    pass


@dataclass(frozen=True)
class DerivationStep:
    lhs: str
    rhs: str
    rule: str
    value: IterantElement

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "rule": self.rule}


@dataclass(frozen=True)
class Derivation:
    result: IterantElement
    steps: tuple[DerivationStep, ...]

    def to_json(self) -> str:
        return json.dumps(
            {"result": to_text(self.result), "steps": [s.to_dict() for s in self.steps]},
            ensure_ascii=False,
            separators=(",", ":"),
        )


RULES = ("impose_planck_postulate", "substitute_it", "iterant_identity", "rescale")


def heisenberg_trace(c: PhysicalConstants) -> Derivation:
    """Carry out the substitution chain, asserting each step as an identity.

    1. the commutator coefficient ``(dx)^2/dt`` is bound to ``hbar/m``;
    2. ``dt -> i dt`` makes it ``(hbar/m) (1/i)``;
    3. ``1/i = -i``, checked by inverting ``i`` in the algebra;
    4. so ``[q, p/m] = -i hbar/m``;
    5. ``[p, q] = -m [q, p/m] = i hbar``.
    """
    if not c.mass > 0:
        raise ValueError("mass must be positive")
    backend = sc.common_backend(c.hbar, c.mass)
    i = iterant_i(backend)
    one = identity(backend)
    steps = []

    def record(lhs, value, rule, symbol):
        steps.append(DerivationStep(lhs, f"{symbol} = {to_text(value)}", rule, value))
        return value

    ratio = record("(Δx)^2/Δt", real(c.hbar / c.mass), "impose_planck_postulate", "ħ/m")
    if not ratio.is_real():
        raise DerivationError("the postulated coefficient must be real")

    substituted = record("(Δx)^2/(iΔt)", ratio * i.inverse(), "substitute_it", "(ħ/m)(1/i)")

    inv_i = record("1/i", i.inverse(), "iterant_identity", "-i")
    if inv_i != -i or i * inv_i != one or inv_i * i != one:
        raise DerivationError("1/i = -i failed in the iterant algebra")
    if -1 / i != i:
        raise DerivationError("i = -1/i failed in the iterant algebra")

    qp = record("[q,p/m]", ratio * (-i), "iterant_identity", "-iħ/m")
    if qp != substituted:
        raise DerivationError("(ħ/m)(1/i) != -iħ/m")

    pq = record("[p,q]", qp * (-c.mass), "rescale", "iħ")
    expected = i * c.hbar
    if pq != expected:
        raise DerivationError(f"[p,q] = {to_text(pq)}, expected {to_text(expected)}")
    return Derivation(pq, tuple(steps))


def derive_heisenberg(c: PhysicalConstants) -> IterantElement:
    """Return ``[p, q]``, which the chain proves equal to ``i hbar``."""
    return heisenberg_trace(c).result
