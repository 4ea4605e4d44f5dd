"""Command-line front end: density dumps, radius sampling, sweeps, reports.

Subcommands:
    pdf         dump a component density on a grid as CSV (columns x,f)
    unmac-dist  Monte Carlo samples of the separation radius per format/dt
    simulate    density sweep of conflict and collision rates
    compare     rank formats from a stats CSV and check rate ordering

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import distributions as dist
from .config import RunConfig, dump_config, load_config
from .flightsim import ConflictStats, ConflictStatsRow, run
from .geometry import EpsMode, MessageFormat, sample_pair_radii
from .remoteid import BROADCAST_PROFILES

#: Severity order used for ranking checks: tightest volume first.
FORMAT_ORDER = (
    MessageFormat.PERFECT_KNOWLEDGE,
    MessageFormat.CANDIDATE_3,
    MessageFormat.CANDIDATE_2,
    MessageFormat.CANDIDATE_1,
    MessageFormat.STANDARD_REMOTE_ID,
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="master RNG seed")
    parser.add_argument("--config", help="INI config file ([run] section)")
    parser.add_argument(
        "--lambda",
        dest="lambdas",
        help="comma-separated densities, aircraft per km^2",
    )
    parser.add_argument("--budget", type=int, help="trajectory budget per density")
    parser.add_argument(
        "--formats",
        help="comma-separated formats: "
        + ", ".join(f.value for f in MessageFormat),
    )
    parser.add_argument("--dt", help="comma-separated broadcast intervals, s")
    parser.add_argument(
        "--tech",
        choices=sorted(BROADCAST_PROFILES),
        help="resolve dt from a technology profile (ignored when --dt is given)",
    )
    parser.add_argument(
        "--gps-standard",
        help="GPS accuracy class name or explicit sigma in meters",
    )
    parser.add_argument(
        "--eps-mode",
        choices=[m.value for m in EpsMode],
        help="how candidates report localization error",
    )
    parser.add_argument("--workers", type=int, help="parallel worker processes")
    parser.add_argument("--out", help="output directory")


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    dt_list = None
    if args.dt:
        dt_list = tuple(float(v) for v in args.dt.split(",") if v.strip())
    elif args.tech:
        dt_list = (BROADCAST_PROFILES[args.tech].dt_com,)
    formats = None
    if args.formats:
        formats = tuple(
            MessageFormat(v.strip()) for v in args.formats.split(",") if v.strip()
        )
    lambdas = None
    if args.lambdas:
        lambdas = tuple(float(v) for v in args.lambdas.split(",") if v.strip())
    return config.replace(
        seed=args.seed,
        lambdas=lambdas,
        trajectory_budget=args.budget,
        formats=formats,
        dt_list=dt_list,
        gps_standard=args.gps_standard,
        eps_mode=EpsMode(args.eps_mode) if args.eps_mode else None,
        workers=args.workers,
        out_dir=args.out,
    )


def _prepare_out(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.ini").write_text(dump_config(config))
    return out


def _write_grid_csv(path: Path, xs: np.ndarray, fs: np.ndarray) -> None:
    lines = ["x,f"]
    lines.extend(f"{x!r},{f!r}" for x, f in zip(xs, fs))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# pdf
# ---------------------------------------------------------------------------

PDF_COMPONENTS = ("airframe", "localization", "mobility", "direction")


def cmd_pdf(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    out = _prepare_out(config)
    sigma_i = args.sigma_i if args.sigma_i is not None else config.gps_sigma
    sigma_j = args.sigma_j if args.sigma_j is not None else config.gps_sigma
    dt = config.dt_list[0]
    points = args.points

    if args.component == "airframe":
        af_max = args.af_max
        x_min = args.x_min if args.x_min is not None else 0.0
        x_max = args.x_max if args.x_max is not None else af_max
        xs = np.linspace(x_min, x_max, points)
        fs = np.asarray(dist.triangle_af_pdf(xs, af_max))
    elif args.component == "localization":
        mean = dist.sum_half_normal_mean(sigma_i, sigma_j)
        x_min = args.x_min if args.x_min is not None else 0.0
        default_max = mean + 12.0 * math.hypot(sigma_i, sigma_j)
        x_max = args.x_max if args.x_max is not None else default_max
        xs = np.linspace(x_min, x_max, points)
        fs = np.asarray(dist.sum_half_normal_pdf(xs, sigma_i, sigma_j))
    elif args.component == "mobility":
        model_i = dist.SpeedModel.from_category(dist.UAV_CATEGORIES[args.category_i])
        model_j = dist.SpeedModel.from_category(dist.UAV_CATEGORIES[args.category_j])
        mean, std = dist.mobility_expansion_params(dt, model_i, model_j)
        if args.direction_known:
            x_max = args.x_max if args.x_max is not None else mean + 8.0 * std
            x_min = args.x_min if args.x_min is not None else x_max / points
        else:
            x_min = args.x_min if args.x_min is not None else max(0.0, mean - 8.0 * std)
            x_max = args.x_max if args.x_max is not None else mean + 8.0 * std
        xs = np.linspace(x_min, x_max, points)
        fs = np.array(
            [
                dist.mobility_expansion_pdf(
                    x, dt, model_i, model_j, direction_known=args.direction_known
                )
                for x in xs
            ]
        )
    else:  # direction
        x_min = args.x_min if args.x_min is not None else -0.99
        x_max = args.x_max if args.x_max is not None else 0.99
        xs = np.linspace(x_min, x_max, points)
        fs = np.asarray(dist.direction_factor_pdf(xs))

    path = out / f"pdf_{args.component}.csv"
    _write_grid_csv(path, xs, fs)
    print(path)
    return 0


# ---------------------------------------------------------------------------
# unmac-dist
# ---------------------------------------------------------------------------


def cmd_unmac_dist(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    out = _prepare_out(config)
    rng = np.random.default_rng(config.seed)
    radii = sample_pair_radii(
        rng,
        args.samples,
        config.formats,
        config.dt_list,
        config.gps_sigma,
        eps_mode=config.eps_mode,
    )
    path = out / "unmac_dist.csv"
    with open(path, "w") as fh:
        fh.write("format,dt,sample\n")
        for (fmt, dt), values in radii.items():
            for v in values:
                fh.write(f"{fmt.value},{dt!r},{v!r}\n")
    print(path)
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _summary_lines(stats: ConflictStats) -> list[str]:
    lines = ["lambda format dt conflicts macs flight_hours rate"]
    for r in stats.rows:
        lines.append(
            f"{r.lam:g} {r.fmt.value} {r.dt:g} {r.conflicts} {r.macs} "
            f"{r.flight_hours:.3f} {r.rate:.4f}"
        )
    for r in stats.rows:
        if r.fmt is MessageFormat.STANDARD_REMOTE_ID and r.macs > 0:
            ratio = r.conflicts / r.macs
            lines.append(
                f"standard-remote-id conflicts per MAC at lambda={r.lam:g} "
                f"dt={r.dt:g}: {ratio:.2f}"
            )
    return lines


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    out = _prepare_out(config)
    rows: list[ConflictStatsRow] = []
    interrupted = False
    try:
        for lam in config.lambdas:
            stats = run(
                [lam],
                seed=config.seed,
                area_km2=config.area_km2,
                trajectory_budget=config.trajectory_budget,
                formats=config.formats,
                dt_list=config.dt_list,
                eps_mode=config.eps_mode,
                gps_sigma=config.gps_sigma,
                workers=config.workers,
            )
            rows.extend(stats.rows)
    except KeyboardInterrupt:
        interrupted = True
    stats = ConflictStats(rows=tuple(rows))
    (out / "stats.csv").write_text(stats.to_csv())
    summary = _summary_lines(stats)
    if interrupted:
        summary.append("interrupted: partial results flushed")
    (out / "summary.txt").write_text("\n".join(summary) + "\n")
    print("\n".join(summary))
    print(out / "stats.csv")
    return 2 if interrupted else 0


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def _rate_noise(row: ConflictStatsRow) -> float:
    # Poisson standard error on the count, scaled to a rate.
    return math.sqrt(max(row.conflicts, 1)) / row.flight_hours if row.flight_hours else 0.0


def cmd_compare(args: argparse.Namespace) -> int:
    text = Path(args.stats_csv).read_text()
    stats = ConflictStats.from_csv(text)
    lines: list[str] = []
    violations = 0
    cells = sorted({(r.lam, r.dt) for r in stats.rows})
    for lam, dt in cells:
        rows = {r.fmt: r for r in stats.rows if r.lam == lam and r.dt == dt}
        ranked = sorted(rows.values(), key=lambda r: r.rate)
        lines.append(f"lambda={lam:g} dt={dt:g}")
        for rank, r in enumerate(ranked, start=1):
            lines.append(
                f"  {rank}. {r.fmt.value}: {r.rate:.4f} conflicts/h "
                f"({r.conflicts} events)"
            )
        ordered = [rows[f] for f in FORMAT_ORDER if f in rows]
        for a, b in zip(ordered, ordered[1:]):
            band = 2.0 * (_rate_noise(a) + _rate_noise(b))
            if a.rate > b.rate + band:
                violations += 1
                lines.append(
                    f"  ERROR: ordering violation: {a.fmt.value} rate {a.rate:.4f} "
                    f"exceeds {b.fmt.value} rate {b.rate:.4f} beyond noise"
                )
            elif abs(a.rate - b.rate) <= band:
                lines.append(
                    f"  note: {a.fmt.value} and {b.fmt.value} tied within noise"
                )
    report = "\n".join(lines) + "\n"
    print(report, end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "compare.txt").write_text(report)
    return 2 if violations else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unmac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_pdf = sub.add_parser("pdf", help="dump a component density as CSV")
    p_pdf.add_argument("--component", required=True, choices=PDF_COMPONENTS)
    p_pdf.add_argument("--af-max", type=float, default=7.5)
    p_pdf.add_argument("--sigma-i", type=float, help="override sigma for aircraft i")
    p_pdf.add_argument("--sigma-j", type=float, help="override sigma for aircraft j")
    p_pdf.add_argument("--category-i", type=int, default=1, choices=(1, 2, 3, 4))
    p_pdf.add_argument("--category-j", type=int, default=1, choices=(1, 2, 3, 4))
    p_pdf.add_argument("--direction-known", action="store_true")
    p_pdf.add_argument("--x-min", type=float)
    p_pdf.add_argument("--x-max", type=float)
    p_pdf.add_argument("--points", type=int, default=2001)
    _add_common(p_pdf)
    p_pdf.set_defaults(func=cmd_pdf)

    p_dist = sub.add_parser("unmac-dist", help="sample separation radii")
    p_dist.add_argument("--samples", type=int, default=100_000)
    _add_common(p_dist)
    p_dist.set_defaults(func=cmd_unmac_dist)

    p_sim = sub.add_parser("simulate", help="run a density sweep")
    _add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="rank formats from a stats CSV")
    p_cmp.add_argument("stats_csv", help="stats CSV from the simulate command")
    p_cmp.add_argument("--out", help="directory for the report copy")
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"unmac: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
