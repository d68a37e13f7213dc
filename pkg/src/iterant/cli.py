"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import algebra as alg
from . import forms, nexus, selftest, skew
from .scalar import format_scalar
from .skew import TimeGrid

COMMANDS = (
    "iterant-demo",
    "eigenform",
    "brownian",
    "commutator-verify",
    "minkowski",
    "heisenberg",
    "wave-check",
    "selftest",
)

# csv output is only meaningful for the commands producing tables
CSV_COMMANDS = {"brownian", "commutator-verify"}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _decimal(text: str) -> str:
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}")
    return text


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--dt", type=_decimal, default=None)
    common.add_argument("--steps", type=_count, default=None)
    common.add_argument("--k", type=_decimal, default=None)
    common.add_argument("--hbar", type=_rational, default=Fraction(1))
    common.add_argument("--mass", type=_rational, default=Fraction(1))
    common.add_argument("--out", default=None, metavar="PATH")

    parser = argparse.ArgumentParser(
        prog="iterant",
        description="Iterant algebra, eigenforms and the discrete commutator.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "iterant-demo": "trace i = [1,-1]eta and ii = -1",
        "eigenform": "box recursion, reentry, and the orbit of R(x) = -1/x",
        "brownian": "seeded +-sqrt(K dt) walk (--k, --dt, --steps, --seed)",
        "commutator-verify": "check [x,Dx] = J(dx)^2/dt on a random rational series",
        "minkowski": "t -> it on random rational four-points",
        "heisenberg": "substitution chain to [p,q] = i hbar (--hbar, --mass)",
        "wave-check": "forward-difference convergence for exp(ikx) (--k wave number)",
        "selftest": "run the invariant suite",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _positive_float(args, name: str, default: float) -> float:
    raw = getattr(args, name)
    value = default if raw is None else float(raw)
    if not value > 0:
        raise UsageError(f"--{name} must be positive")
    return value


def _positive_rational(args, name: str, default) -> Fraction:
    raw = getattr(args, name)
    value = Fraction(default) if raw is None else Fraction(raw)
    if not value > 0:
        raise UsageError(f"--{name} must be positive")
    return value


def _dumps(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# -- commands ------------------------------------------------------------
# each returns (output text, passed)

def cmd_iterant_demo(args):
    i = alg.iterant_i()
    u = alg.IterantView(1, -1)
    swapped = alg.view_swap(u)
    product = alg.view_product(u, swapped)
    square = i * i
    passed = square == alg.real(-1) and product == alg.IterantView(-1, -1)
    steps = [
        "i = [1,-1]η",
        "ii = [1,-1]η[1,-1]η",
        f"   = [1,-1]{swapped!r}ηη",
        f"   = {product!r}ηη",
        f"   = {product!r}",
        f"{product!r} = {format_scalar(square.even.first)}",
    ]
    if args.output_format == "json":
        return _dumps({"trace": steps, "result": alg.to_dict(square), "passed": passed}), passed
    return "\n".join(steps) + "\n", passed


def cmd_eigenform(args):
    n = args.steps if args.steps is not None else 3
    nest = [forms.render(forms.iterate_boxes(k)) for k in range(n + 1)]
    token = forms.reentry_eigenform()
    unfolded = [forms.render(forms.unfold(token, k)) for k in range(n + 1)]
    invariant = all(
        forms.box(forms.unfold(token, k)) == forms.unfold(token, k + 1) for k in range(n + 1)
    )
    rational = forms.detect_orbit(lambda x: -1 / x, Fraction(1), 10)
    iterant = forms.detect_orbit(lambda x: -1 / x, alg.iterant_i(), 10)
    passed = (
        invariant
        and rational.status == forms.Cycle(0, 2)
        and iterant.status == forms.FixedPoint(0)
    )
    if args.output_format == "json":
        payload = {
            "boxes": nest,
            "eigenform": forms.render(token),
            "unfoldings": unfolded,
            "unfold_invariant": invariant,
            "orbit_rational": {
                "trajectory": [format_scalar(s) for s in rational.trajectory],
                "status": "cycle",
                "start_index": rational.status.start_index,
                "period": rational.status.period,
            },
            "orbit_iterant": {
                "trajectory": [alg.to_text(s) for s in iterant.trajectory],
                "status": "fixed_point",
                "index": iterant.status.index,
            },
            "passed": passed,
        }
        return _dumps(payload), passed
    lines = ["box recursion from the empty form:"]
    lines += [f"  F^{k}() = {s or '(empty)'}" for k, s in enumerate(nest)]
    lines.append(f"eigenform X = F(X): {forms.render(token)}")
    lines += [f"  unfold {k}: {s}" for k, s in enumerate(unfolded)]
    lines.append(
        "R(x) = -1/x from 1: "
        + ", ".join(format_scalar(s) for s in rational.trajectory)
        + f"  (period {rational.period})"
    )
    lines.append(
        "R(x) = -1/x from i: "
        + ", ".join(alg.to_text(s) for s in iterant.trajectory)
        + "  (fixed point)"
    )
    return "\n".join(lines) + "\n", passed


def cmd_brownian(args):
    K = _positive_float(args, "k", 1.0)
    dt = _positive_float(args, "dt", 0.01)
    n = args.steps if args.steps is not None else 1000
    grid = TimeGrid(dt, n)
    path = skew.brownian_path(K, grid, args.seed)
    ratios = [
        (b - a) ** 2 / dt for a, b in zip(path.samples, path.samples[1:])
    ]
    worst = max(abs(r - K) / K for r in ratios)
    passed = worst <= selftest.BROWNIAN_REL_TOL
    if args.output_format == "csv":
        return skew.function_to_csv(path), passed
    if args.output_format == "json":
        payload = {
            "k": K, "dt": dt, "steps": n, "seed": args.seed,
            "samples": list(path.samples),
            "max_rel_dev": worst, "passed": passed,
        }
        return _dumps(payload), passed
    text = (
        f"Brownian walk: K={K!r} dt={dt!r} steps={n} seed={args.seed}\n"
        f"step size sqrt(K dt) = {abs(path.samples[1])!r}\n"
        f"x(final) = {path.samples[-1]!r}\n"
        f"max |(dx)^2/dt - K|/K = {worst!r}\n"
    )
    return text, passed


def cmd_commutator_verify(args):
    dt = _positive_rational(args, "dt", 1)
    n = args.steps if args.steps is not None else 64
    if n < 2:
        raise UsageError("--steps must be at least 2 for the commutator check")
    rng = random.Random(args.seed)
    x = selftest.random_series(rng, n + 1, dt)
    report = skew.verify_commutator_identity(x)
    passed = report.passed()
    if args.output_format == "csv":
        return skew.report_to_csv(report), passed
    if args.output_format == "json":
        payload = {
            "backend": report.backend,
            "dt": str(dt),
            "steps": n,
            "seed": args.seed,
            "valid_samples": len(report.t),
            "max_deviation": format_scalar(report.max_deviation),
            "passed": passed,
        }
        return _dumps(payload), passed
    text = (
        f"[x, Dx] vs J(dx)^2/dt on {len(report.t)} valid samples "
        f"(dt={dt}, seed={args.seed}, exact backend)\n"
        f"max deviation = {format_scalar(report.max_deviation)}\n"
        f"{'PASS' if passed else 'FAIL'}\n"
    )
    return text, passed


def cmd_minkowski(args):
    n = args.steps if args.steps is not None else 5
    rng = random.Random(args.seed)
    rows = []
    passed = True
    for _ in range(n):
        p = nexus.FourPoint(*(selftest.rand_fraction(rng) for _ in range(4)))
        got = nexus.nexus_substitute(p)
        ok = got.is_real() and got == alg.real(nexus.minkowski_q(p))
        passed &= ok
        rows.append((p, got, ok))
    if args.output_format == "json":
        payload = {
            "points": [
                {
                    "x": str(p.x), "y": str(p.y), "z": str(p.z), "t": str(p.t),
                    "substituted": alg.to_text(g),
                    "minkowski": str(nexus.minkowski_q(p)),
                    "ok": ok,
                }
                for p, g, ok in rows
            ],
            "passed": passed,
        }
        return _dumps(payload), passed
    lines = []
    for p, g, ok in rows:
        lines.append(
            f"(x,y,z,t)=({p.x},{p.y},{p.z},{p.t}): x²+y²+z²+(it)² = {alg.to_text(g)}"
            f" = {nexus.minkowski_q(p)} {'ok' if ok else 'MISMATCH'}"
        )
    return "\n".join(lines) + "\n", passed


def cmd_heisenberg(args):
    if args.mass <= 0:
        raise UsageError("--mass must be positive")
    trace = nexus.heisenberg_trace(nexus.PhysicalConstants(args.hbar, args.mass))
    passed = trace.result == alg.iterant_i() * args.hbar
    if args.output_format == "json":
        payload = {
            "hbar": str(args.hbar),
            "mass": str(args.mass),
            "result": alg.to_text(trace.result),
            "steps": [s.to_dict() for s in trace.steps],
            "passed": passed,
        }
        return _dumps(payload), passed
    lines = [f"ħ = {args.hbar}, m = {args.mass}"]
    lines += [f"  {s.lhs} = {s.rhs}    [{s.rule}]" for s in trace.steps]
    return "\n".join(lines) + "\n", passed


def cmd_wave_check(args):
    k = _positive_float(args, "k", 1.0)
    n = args.steps if args.steps is not None else 100
    params = nexus.PlaneWaveParams(k=k)
    steps = [float(args.dt)] if args.dt is not None else list(selftest.WAVE_STEPS)
    reports = [nexus.check_wave_derivative(params, TimeGrid(dx, n)) for dx in steps]
    order = None
    passed = True
    if len(reports) > 1:
        order = nexus.convergence_order(steps, [r.max_rel_deviation for r in reports])
        passed = 0.8 <= order <= 1.2
    if args.output_format == "json":
        payload = {
            "k": k,
            "reports": [
                {"dx": r.dx, "max_abs_deviation": r.max_abs_deviation,
                 "max_rel_deviation": r.max_rel_deviation}
                for r in reports
            ],
            "order": order,
            "passed": passed,
        }
        return _dumps(payload), passed
    lines = [f"forward difference of exp(ikx) vs ik exp(ikx), k={k!r}"]
    lines += [f"  dx={r.dx!r}: max relative deviation {r.max_rel_deviation:.6e}" for r in reports]
    if order is not None:
        lines.append(f"measured order {order:.4f}")
    return "\n".join(lines) + "\n", passed


def cmd_selftest(args):
    results = selftest.run_selftest(args.seed)
    table = selftest.section_table(results)
    passed = all(ok for _, ok in table)
    if args.output_format == "json":
        payload = {
            "sections": {key: ok for key, ok in table},
            "checks": [
                {"section": r.section, "name": r.name, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
            "passed": passed,
        }
        return _dumps(payload), passed
    descriptions = dict(selftest.SECTIONS)
    lines = [f"{'section':<12} {'result':<6} topic"]
    for key, ok in table:
        lines.append(f"{key:<12} {'PASS' if ok else 'FAIL':<6} {descriptions[key]}")
    failed = [r for r in results if not r.passed]
    for r in failed:
        lines.append(f"FAILED {r.section}: {r.name} ({r.detail})")
    return "\n".join(lines) + "\n", passed


HANDLERS = {
    "iterant-demo": cmd_iterant_demo,
    "eigenform": cmd_eigenform,
    "brownian": cmd_brownian,
    "commutator-verify": cmd_commutator_verify,
    "minkowski": cmd_minkowski,
    "heisenberg": cmd_heisenberg,
    "wave-check": cmd_wave_check,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.output_format == "csv" and args.command not in CSV_COMMANDS:
        parser.print_usage(sys.stderr)
        print(f"iterant: error: {args.command} has no csv output", file=sys.stderr)
        return EXIT_USAGE
    try:
        text, passed = HANDLERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"iterant: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
