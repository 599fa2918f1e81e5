"""Command-line front end: every computation as a CSV or text report.

Exit codes: 0 success, 2 usage or validation error, 3 output could not be written.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
import warnings
from typing import Callable, Sequence

import numpy as np

from . import analysis
from .oracle import TruncationError, overlap_fock_oracle, recommended_n_max
from .overlap import (
    SumMask,
    overlap_asymptotic,
    overlap_band,
    overlap_diagonal,
    overlap_exact,
    overlap_exact_polar,
)
from .specfun import j0_first_root, sensitivity_delta
from .states import CatStateSpec, ComplexAmplitude, Convention, Displacement
from .wigner import GridGeometry, InsufficientResolution, central_tile_spacing, quadrature_norm, wigner_cat

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

TIERS = ("exact", "polar", "band", "diagonal", "asymptotic")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=["csv"], default="csv")


def _add_sweep(p: argparse.ArgumentParser, delta_max: float = 0.4, steps: int = 401) -> None:
    p.add_argument("--delta-min", type=float, default=0.0)
    p.add_argument("--delta-max", type=float, default=delta_max)
    p.add_argument("--delta-steps", type=int, default=steps)
    p.add_argument(
        "--theta",
        type=float,
        default=math.pi / 2,
        help="angle of delta relative to alpha (default pi/2, perpendicular)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subplanck",
        description="Cat-state overlap functions, their Bessel limit, and Wigner tile spacings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("overlap", help="sweep <cat|D(delta)|cat> over |delta|")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha-mag", type=float, required=True)
    p.add_argument("--alpha-phase", type=float, default=0.0)
    p.add_argument("--delta-mag", type=float, help="evaluate a single displacement instead of a sweep")
    p.add_argument("--delta-phase", type=float, help="absolute phase of delta (overrides --theta)")
    _add_sweep(p)
    p.add_argument("--tier", choices=TIERS, default="exact")
    p.add_argument("--mask", default="all", help="all, diagonal, offdiagonal or band:<width> (exact tiers)")
    p.add_argument("--convention", choices=["paper", "true"], default="paper")
    p.add_argument("--part", choices=["real", "abs"], default="real")
    p.add_argument("--envelope", action="store_true", help="keep exp(-|delta|^2/2) in the diagonal tier")
    p.add_argument("--oracle", action="store_true", help="add a number-basis oracle column (exact tiers)")
    _add_output(p)

    p = sub.add_parser("fig1", help="off-diagonal contribution against n")
    p.add_argument("--alphas", type=_float_list, default=[4.0, 10.0, 20.0])
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--n-max", type=int, help="largest n (default 3 * max alpha)")
    p.add_argument("--theta", type=float, default=math.pi / 2)
    p.add_argument("--threshold", type=float, default=1e-3)
    _add_output(p)

    p = sub.add_parser("fig3", help="exact overlap against J0 for several n")
    p.add_argument("--alpha-mag", type=float, default=10.0)
    p.add_argument("--ns", type=_int_list, default=[4, 6, 8, 16])
    p.add_argument("--part", choices=["real", "abs"], default="real")
    _add_sweep(p)
    _add_output(p)

    p = sub.add_parser("wigner", help="Wigner grid and central tile spacing")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha-mag", type=float, required=True)
    p.add_argument("--alpha-phase", type=float, default=0.0)
    p.add_argument("--convention", choices=["paper", "true"], default="true")
    p.add_argument("--range", type=float, help="half-width of the square window (default |alpha| + 4)")
    p.add_argument("--points", type=int, default=321)
    p.add_argument("--axis", choices=["x", "p"], default="x")
    p.add_argument("--tile-range", type=float, default=1.2, help="half-width of the fine central grid")
    p.add_argument("--tile-points", type=int, default=321)
    p.add_argument("--matrix", action="store_true", help="write a plain matrix instead of x,p,W rows")
    _add_output(p)

    p = sub.add_parser("sensitivity", help="first J0 root C and C / (2|alpha|)")
    p.add_argument("--alpha-mag", type=float, required=True)
    _add_output(p)

    p = sub.add_parser("vcz", help="large-n overlap next to ring-source coherence")
    p.add_argument("--alpha-mag", type=float, default=10.0)
    p.add_argument("--lambda", dest="wavelength", type=float, default=math.pi)
    p.add_argument("--sep-max", type=float, default=0.4)
    p.add_argument("--steps", type=int, default=401)
    _add_output(p)
    return parser


def _convention(name: str) -> Convention:
    return Convention.TRUE_NORMALIZED if name == "true" else Convention.PAPER_PREFACTOR


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _sweep_grid(args) -> np.ndarray:
    _require(args.delta_steps >= 2, "--delta-steps must be at least 2")
    _require(0 <= args.delta_min < args.delta_max, "need 0 <= --delta-min < --delta-max")
    return np.linspace(args.delta_min, args.delta_max, args.delta_steps)


def _fmt(v: float) -> str:
    return repr(float(v))


def cmd_overlap(args, report: Callable[[str], None]) -> str:
    _require(args.n >= 1, f"--n must be a positive integer, got {args.n}")
    _require(args.alpha_mag > 0, "--alpha-mag must be positive")
    mask = SumMask.parse(args.mask)
    mask.check(args.n)
    alpha = ComplexAmplitude.from_polar(args.alpha_mag, args.alpha_phase)
    spec = CatStateSpec(args.n, alpha, convention=_convention(args.convention))
    if args.tier in ("polar", "band", "diagonal"):
        _require(spec.is_uniform, f"tier {args.tier} needs the uniform cat")
    _require(not args.oracle or args.tier in ("exact", "polar"), "--oracle applies to the exact tiers only")
    phase = args.delta_phase if args.delta_phase is not None else args.alpha_phase + args.theta
    if args.delta_mag is not None:
        _require(args.delta_mag >= 0, "--delta-mag must be non-negative")
        grid = np.array([args.delta_mag])
    else:
        grid = _sweep_grid(args)

    def evaluate(d: float) -> complex:
        delta = Displacement.from_polar(d, phase)
        if args.tier == "exact":
            return overlap_exact(spec, delta, mask).value
        if args.tier == "polar":
            return overlap_exact_polar(spec, delta, mask).value
        if args.tier == "band":
            return overlap_band(spec, delta).value
        if args.tier == "diagonal":
            return overlap_diagonal(spec, delta, envelope=args.envelope).value
        return overlap_asymptotic(alpha, delta).value

    pick = (lambda z: z.real) if args.part == "real" else abs
    values = [pick(complex(evaluate(d))) for d in grid.tolist()]
    meta = {
        "n": args.n,
        "alpha": args.alpha_mag,
        "alpha_phase": args.alpha_phase,
        "delta_phase": phase,
        "tier": args.tier,
        "mask": str(mask),
        "convention": args.convention,
        "part": args.part,
    }
    series = analysis.CurveSeries("overlap", grid, values, meta)
    buf = io.StringIO()
    buf.write(series.header() + "\n")
    columns = ["delta", "overlap"]
    oracle_values = None
    if args.oracle:
        n_max = recommended_n_max(args.alpha_mag + float(np.max(grid)))
        oracle_values = []
        for d in grid.tolist():
            try:
                z = overlap_fock_oracle(spec, Displacement.from_polar(d, phase), n_max)
            except TruncationError as exc:
                raise UsageError(f"oracle: {exc}") from None
            oracle_values.append(pick(z))
        columns.append("oracle")
    buf.write(",".join(columns) + "\n")
    for i, (d, v) in enumerate(zip(grid.tolist(), values)):
        row = [_fmt(d), _fmt(v)]
        if oracle_values is not None:
            row.append(_fmt(oracle_values[i]))
        buf.write(",".join(row) + "\n")

    zero = analysis.first_zero(series) if len(grid) > 1 else None
    report(f"first zero: {zero!r}" if zero is not None else "first zero: not found")
    target = sensitivity_delta(args.alpha_mag)
    report(f"value at C/(2|alpha|) = {target!r}: {pick(complex(evaluate(target)))!r}")
    if oracle_values is not None:
        gap = max(abs(a - b) for a, b in zip(values, oracle_values))
        report(f"max |closed form - oracle|: {gap:.3e}")
    return buf.getvalue()


def cmd_fig1(args, report: Callable[[str], None]) -> str:
    _require(len(args.alphas) > 0 and all(a > 0 for a in args.alphas), "--alphas must be positive")
    _require(args.delta > 0, "--delta must be positive")
    n_max = args.n_max if args.n_max is not None else int(math.ceil(3 * max(args.alphas)))
    _require(n_max >= 1, "--n-max must be at least 1")
    buf = io.StringIO()
    buf.write(f"# offdiag delta={args.delta} theta={args.theta} mask=offdiagonal tier=exact x=n\n")
    buf.write("alpha,n,offdiag\n")
    for a in args.alphas:
        series = analysis.offdiag_curve(a, args.delta, range(1, n_max + 1), theta=args.theta)
        for n, y in zip(series.x.tolist(), series.y.tolist()):
            buf.write(f"{_fmt(a)},{int(n)},{_fmt(y)}\n")
        n_star = analysis.threshold_crossing(series, args.threshold)
        if n_star is None:
            report(f"alpha={a:g}: no crossing of {args.threshold:g} up to n={n_max}")
        else:
            report(f"alpha={a:g}: first n above {args.threshold:g} is {int(n_star)} (n/alpha = {n_star / a:.3f})")
    return buf.getvalue()


def cmd_fig3(args, report: Callable[[str], None]) -> str:
    _require(args.alpha_mag > 0, "--alpha-mag must be positive")
    _require(len(args.ns) > 0 and all(n >= 1 for n in args.ns), "--ns must be positive integers")
    grid = _sweep_grid(args)
    curves = []
    reference = None
    for n in args.ns:
        exact, reference = analysis.convergence_curve(args.alpha_mag, n, grid, part=args.part, theta=args.theta)
        curves.append(exact)
        zero = analysis.first_zero(exact)
        report(
            f"n={n}: sup|OF - J0| = {analysis.sup_deviation(exact, reference):.6g}, "
            f"rms = {analysis.l2_deviation(exact, reference):.6g}, "
            f"first zero = {zero!r}"
        )
    report(f"J0 first zero C/(2|alpha|) = {sensitivity_delta(args.alpha_mag)!r}")
    buf = io.StringIO()
    buf.write(f"# fig3 alpha={args.alpha_mag} theta={args.theta} tier=exact part={args.part}\n")
    buf.write(",".join(["delta"] + [f"n{n}" for n in args.ns] + ["j0"]) + "\n")
    for i, d in enumerate(grid.tolist()):
        row = [_fmt(d)] + [_fmt(c.y[i]) for c in curves] + [_fmt(reference.y[i])]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def cmd_wigner(args, report: Callable[[str], None]) -> str:
    _require(args.n >= 1, f"--n must be a positive integer, got {args.n}")
    _require(args.alpha_mag >= 0, "--alpha-mag must be non-negative")
    _require(args.points >= 2 and args.tile_points >= 2, "grids need at least 2 points per side")
    half = args.range if args.range is not None else args.alpha_mag + 4.0
    _require(half > 0 and args.tile_range > 0, "window half-widths must be positive")
    spec = CatStateSpec(
        args.n, ComplexAmplitude.from_polar(args.alpha_mag, args.alpha_phase), convention=_convention(args.convention)
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        grid = wigner_cat(spec, GridGeometry.square(half, args.points))
    for w in caught:
        report(f"warning: {w.message}")
    report(f"quadrature norm: {quadrature_norm(grid)!r} (expected {grid.expected_norm!r})")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fine = wigner_cat(spec, GridGeometry.square(args.tile_range, args.tile_points))
    try:
        spacing = central_tile_spacing(fine, args.axis)
        report(f"central tile spacing along {args.axis}: {spacing!r}")
    except InsufficientResolution as exc:
        report(f"central tile spacing along {args.axis}: unavailable ({exc})")
    return grid.to_matrix_text() if args.matrix else grid.to_csv()


def cmd_sensitivity(args, report: Callable[[str], None]) -> str:
    _require(args.alpha_mag > 0, "--alpha-mag must be positive")
    c = j0_first_root()
    return f"alpha_mag,C,delta\n{_fmt(args.alpha_mag)},{_fmt(c)},{_fmt(sensitivity_delta(args.alpha_mag))}\n"


def cmd_vcz(args, report: Callable[[str], None]) -> str:
    _require(args.alpha_mag > 0, "--alpha-mag must be positive")
    _require(args.wavelength > 0, "--lambda must be positive")
    _require(args.sep_max > 0 and args.steps >= 2, "need --sep-max > 0 and --steps >= 2")
    grid = np.linspace(0.0, args.sep_max, args.steps)
    quantum, optical = analysis.vcz_correspondence_report(args.alpha_mag, args.wavelength, grid)
    report(f"max |overlap - coherence|: {float(np.max(np.abs(quantum.y - optical.y))):.3e}")
    buf = io.StringIO()
    buf.write(f"# vcz alpha={args.alpha_mag} lambda={args.wavelength} R=1\n")
    buf.write("separation,overlap,coherence\n")
    for s, q, o in zip(grid.tolist(), quantum.y.tolist(), optical.y.tolist()):
        buf.write(f"{_fmt(s)},{_fmt(q)},{_fmt(o)}\n")
    return buf.getvalue()


COMMANDS = {
    "overlap": cmd_overlap,
    "fig1": cmd_fig1,
    "fig3": cmd_fig3,
    "wigner": cmd_wigner,
    "sensitivity": cmd_sensitivity,
    "vcz": cmd_vcz,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    def report(line: str) -> None:
        print(line, file=sys.stderr)

    try:
        analysis.thread_count()
        text = COMMANDS[args.command](args, report)
    except (UsageError, ValueError) as exc:
        print(f"subplanck {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"subplanck {args.command}: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
