"""Desk-scale invariant suite behind ``iterant selftest``.

Checks are grouped by topic; a topic passes when all of its checks pass.
Every check is deterministic for a given seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import algebra as alg
from . import forms, nexus, skew
from .algebra import IterantElement, IterantView

SECTIONS = (
    ("eigenform", "box recursion and orbit of R(x) = -1/x"),
    ("iterant", "iterant construction of i, ring laws, Minkowski substitution"),
    ("eigenvector", "eigenpairs over iterant-complex scalars"),
    ("wave", "plane wave forward-difference convergence"),
    ("calculus", "commutator identity and Brownian constancy"),
    ("heisenberg", "substitution chain to [p,q] = i hbar"),
)


@dataclass(frozen=True)
class CheckResult:
    section: str
    name: str
    passed: bool
    detail: str = ""


def rand_fraction(rng: random.Random, span: int = 9, den: int = 7) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_nonzero_fraction(rng: random.Random, span: int = 9, den: int = 7) -> Fraction:
    while True:
        f = rand_fraction(rng, span, den)
        if f:
            return f


def rand_view(rng: random.Random) -> IterantView:
    return IterantView(rand_fraction(rng), rand_fraction(rng))


def rand_element(rng: random.Random) -> IterantElement:
    return IterantElement(rand_view(rng), rand_view(rng))


# -- individual checks ---------------------------------------------------

def check_i_squared(rng) -> tuple[bool, str]:
    i = alg.iterant_i()
    u = IterantView(1, -1)
    chain = alg.view_product(u, alg.view_swap(u))
    ok = (
        chain == IterantView(-1, -1)
        and i * i == alg.real(-1)
        and i**4 == alg.identity()
        and alg.eta() * alg.eta() == alg.identity()
    )
    return ok, f"ii = {alg.to_text(i * i)}"


def check_eta_commutation(rng, n: int = 200) -> tuple[bool, str]:
    e = alg.eta()
    zero = IterantView(0, 0)
    for _ in range(n):
        v = rand_view(rng)
        lhs = e * IterantElement(v, zero)
        rhs = IterantElement(v.swap(), zero) * e
        if lhs != rhs:
            return False, f"eta V != swap(V) eta for V = {v!r}"
    return True, f"{n} views"


def check_ring_axioms(rng, n: int = 1000) -> tuple[bool, str]:
    one = alg.identity()
    for _ in range(n):
        a, b, c = rand_element(rng), rand_element(rng), rand_element(rng)
        if (a * b) * c != a * (b * c):
            return False, "associativity"
        if a * (b + c) != a * b + a * c or (a + b) * c != a * c + b * c:
            return False, "distributivity"
        if one * a != a or a * one != a:
            return False, "unit"
    return True, f"{n} triples"


def check_matrix_isomorphism(rng, n: int = 1000) -> tuple[bool, str]:
    for _ in range(n):
        a, b = rand_element(rng), rand_element(rng)
        ma, mb = alg.to_matrix(a), alg.to_matrix(b)
        if alg.to_matrix(a * b) != ma * mb or alg.to_matrix(a + b) != ma + mb:
            return False, "homomorphism"
        if alg.from_matrix(ma) != a:
            return False, "round trip"
    return alg.to_matrix(alg.identity()) == alg.Matrix2.identity(), f"{n} pairs"


def check_minkowski(rng, n: int = 1000) -> tuple[bool, str]:
    for _ in range(n):
        p = nexus.FourPoint(*(rand_fraction(rng) for _ in range(4)))
        got = nexus.nexus_substitute(p)
        if not got.is_real() or got != alg.real(nexus.minkowski_q(p)):
            return False, f"mismatch at {p}"
    return True, f"{n} points"


def _negative_reciprocal(x):
    return -1 / x


def check_r_orbits(rng, n: int = 100) -> tuple[bool, str]:
    for _ in range(n):
        start = rand_nonzero_fraction(rng)
        orbit = forms.detect_orbit(_negative_reciprocal, start, 50)
        if orbit.status != forms.Cycle(0, 2):
            return False, f"orbit from {start}: {orbit.status}"
    i = alg.iterant_i()
    fixed = forms.detect_orbit(_negative_reciprocal, i, 10).status == forms.FixedPoint(0)
    return fixed, f"{n} rational starts; R(i) = i: {fixed}"


def check_box_eigenform(rng, kmax: int = 32) -> tuple[bool, str]:
    e = forms.reentry_eigenform()
    for k in range(kmax + 1):
        if forms.box(forms.unfold(e, k)) != forms.unfold(e, k + 1):
            return False, f"unfold invariance at k = {k}"
    for n in range(13):
        f = forms.iterate_boxes(n)
        if forms.box(f) == f:
            return False, "finite fixed point"
    return True, f"k <= {kmax}"


def check_eigenpairs(rng) -> tuple[bool, str]:
    i = alg.iterant_i()
    one, zero = alg.identity(), alg.zero_element()
    pauli_y = ((zero, -i), (i, zero))
    swap = ((zero, one), (one, zero))
    ok = nexus.verify_eigenpair(pauli_y, (one, i), one)
    ok &= nexus.verify_eigenpair(swap, (one, one), one)
    ok &= nexus.verify_eigenpair(((one, zero), (zero, one)), (one, i), one)
    for _ in range(10):
        c = alg.from_complex(rand_nonzero_fraction(rng), rand_fraction(rng))
        ok &= nexus.verify_eigenpair(pauli_y, (one * c, i * c), one)
    return bool(ok), "Pauli-y, swap, identity, 10 scalings"


WAVE_STEPS = (1e-1, 1e-2, 1e-3)


def check_wave(rng) -> tuple[bool, str]:
    params = nexus.PlaneWaveParams(k=1.0)
    devs = [
        nexus.check_wave_derivative(params, skew.TimeGrid(dx, 100)).max_rel_deviation
        for dx in WAVE_STEPS
    ]
    order = nexus.convergence_order(WAVE_STEPS, devs)
    return 0.8 <= order <= 1.2, f"order {order:.4f}"


def random_series(rng: random.Random, n_points: int, dt=Fraction(1)) -> skew.TemporalFunction:
    grid = skew.TimeGrid(dt, n_points - 1)
    return skew.TemporalFunction(tuple(rand_fraction(rng) for _ in range(n_points)), grid)


def check_commutator(rng, n: int = 200) -> tuple[bool, str]:
    for _ in range(n):
        dt = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        x = random_series(rng, rng.randint(8, 64), dt)
        report = skew.verify_commutator_identity(x)
        if not report.exact_match or len(report.t) != x.grid.n_points - 1:
            return False, "deviation on exact backend"
    return True, f"{n} series, max deviation 0"


BROWNIAN_K = (0.25, 1.0, 4.0)
BROWNIAN_REL_TOL = 2.0**-45
VARIANCE_REL_TOL = 0.05


def brownian_statistics(K: float, dt: float = 0.01, n_steps: int = 100, n_paths: int = 10_000):
    """Return (worst relative deviation of (dx)^2/dt from K, endpoint variance)."""
    grid = skew.TimeGrid(dt, n_steps)
    paths = np.array([brownian_path_samples(K, grid, s) for s in range(n_paths)])
    ratio = np.diff(paths, axis=1) ** 2 / dt
    worst = float(np.max(np.abs(ratio - K)) / K)
    variance = float(np.var(paths[:, -1], ddof=1))
    return worst, variance


def brownian_path_samples(K, grid, seed):
    return skew.brownian_path(K, grid, seed).samples


def check_brownian(rng) -> tuple[bool, str]:
    dt, n_steps = 0.01, 100
    details = []
    ok = True
    for K in BROWNIAN_K:
        worst, variance = brownian_statistics(K, dt, n_steps)
        target = n_steps * K * dt
        rel_var = abs(variance - target) / target
        ok &= worst <= BROWNIAN_REL_TOL and rel_var <= VARIANCE_REL_TOL
        details.append(f"K={K}: step dev {worst:.2e}, var dev {rel_var:.3f}")
    # the commutator coefficient itself is K along a path
    grid = skew.TimeGrid(dt, n_steps)
    for seed in range(3):
        x = skew.brownian_path(1.0, grid, seed)
        coeff = skew.commutator(
            skew.multiplication_operator(x), skew.discrete_derivative(x)
        ).coefficient(1)
        ok &= all(abs(c - 1.0) <= BROWNIAN_REL_TOL for c in coeff.samples if c is not None)
    return bool(ok), "; ".join(details)


def check_heisenberg(rng) -> tuple[bool, str]:
    i = alg.iterant_i()
    for a in range(1, 11):
        for b in range(1, 11):
            hbar, mass = Fraction(a, b), Fraction(b, a) * Fraction(a + b, 3)
            trace = nexus.heisenberg_trace(nexus.PhysicalConstants(hbar, mass))
            rules = {s.rule for s in trace.steps}
            if trace.result != i * hbar or "impose_planck_postulate" not in rules:
                return False, f"hbar={hbar}, m={mass}"
            if not any(s.lhs == "1/i" and s.value == -i for s in trace.steps):
                return False, "missing 1/i = -i step"
    return True, "10x10 (hbar, m) grid"


CHECKS: tuple[tuple[str, str, Callable], ...] = (
    ("eigenform", "R(x) = -1/x orbits", check_r_orbits),
    ("eigenform", "box unfold invariance", check_box_eigenform),
    ("iterant", "i^2 = -1", check_i_squared),
    ("iterant", "eta commutation", check_eta_commutation),
    ("iterant", "ring axioms", check_ring_axioms),
    ("iterant", "matrix isomorphism", check_matrix_isomorphism),
    ("iterant", "Minkowski substitution", check_minkowski),
    ("eigenvector", "eigenpairs", check_eigenpairs),
    ("wave", "forward-difference order", check_wave),
    ("calculus", "[x,Dx] = J(dx)^2/dt", check_commutator),
    ("calculus", "Brownian constancy", check_brownian),
    ("heisenberg", "[p,q] = i hbar", check_heisenberg),
)


def run_selftest(seed: int = 0) -> list[CheckResult]:
    results = []
    for section, name, fn in CHECKS:
        rng = random.Random(f"{seed}:{name}")
        try:
            passed, detail = fn(rng)
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(section, name, bool(passed), detail))
    return results


def section_table(results: list[CheckResult]) -> list[tuple[str, bool]]:
    return [
        (key, all(r.passed for r in results if r.section == key))
        for key, _ in SECTIONS
    ]
