"""Command-line front-end.

Subcommands: generate, extract, ci-grid, sensitivity, tables. Machine
output (CSV/JSON) goes to the chosen output path; diagnostics go to
stderr so piped output stays clean. Exit codes: 0 ok, 2 configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import ci_sim, extraction, shadowing
from .correlation import (
    build_matrix,
    builtin_table,
    cholesky,
    ensure_psd,
    load_table,
    table_to_dict,
)
from .errors import NotPositiveSemiDefinite, ShadowSimError
from .geometry import Position
from .propagation import PathLossParams

#: Fixed default seed so repeated invocations are reproducible by default.
DEFAULT_SEED = 1998

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _err(msg: str) -> None:
    print(f"shadowsim: {msg}", file=sys.stderr)


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _parse_table(value):
    """Scenario 'table' entry: 'predicted', 'measured', 'none', or inline dict."""
    if value is None or value == "none":
        return None
    if isinstance(value, str):
        return builtin_table(value)
    return load_table(value)


def _parse_station(doc: dict) -> ci_sim.BaseStation:
    return ci_sim.BaseStation(
        position=Position(float(doc["x"]), float(doc["y"])),
        tx_dbm=float(doc.get("tx_dbm", 45.0)),
        pathloss=PathLossParams(a=float(doc.get("a", 16.0)), b=float(doc.get("b", 36.0))),
    )


def _parse_scenario(doc: dict, seed: int) -> ci_sim.Scenario:
    # A 'beta' key is accepted and ignored: per-point statistics are static
    # draws, so the autocorrelation coefficient cannot affect them.
    return ci_sim.Scenario(
        source=_parse_station(doc["source"]),
        interferers=tuple(_parse_station(s) for s in doc["interferers"]),
        sigma=float(doc["sigma_db"]),
        table=_parse_table(doc.get("table", "none")),
        grid=tuple(Position(float(p["x"]), float(p["y"])) for p in doc["grid"]),
        replicas=int(doc.get("replicas", 100_000)),
        seed=int(doc.get("seed", seed)),
    )


def _scenario_from_args(args) -> ci_sim.Scenario:
    if args.scenario:
        doc = _load_json(args.scenario)
        scn = _parse_scenario(doc, args.seed)
    elif args.preset:
        if args.preset != "figure2":
            raise ShadowSimError(
                f"unknown preset {args.preset!r}; valid presets: figure2"
            )
        scn = ci_sim.figure2_preset(seed=args.seed, correlated=True)
    else:
        raise ShadowSimError("provide --scenario FILE or --preset NAME")
    if args.sigma is not None:
        scn = ci_sim._with_sigma(scn, args.sigma)
    if args.replicas is not None:
        scn = ci_sim.Scenario(
            source=scn.source, interferers=scn.interferers, sigma=scn.sigma,
            grid=scn.grid, table=scn.table, replicas=args.replicas, seed=scn.seed,
        )
    return scn


def _write_grid(path, grid, fmt: str) -> None:
    if fmt == "json":
        ci_sim.write_grid_json(path, grid)
    else:
        ci_sim.write_grid_csv(path, grid)
    for cell in grid:
        if cell.error is not None:
            _diag(f"cell ({cell.x:g}, {cell.y:g}): {cell.error}")


def cmd_generate(args) -> int:
    if args.matrix:
        m = np.asarray(_load_json(args.matrix), dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShadowSimError(f"matrix file {args.matrix} is not square")
        n_links = m.shape[0]
    elif args.geometry:
        doc = _load_json(args.geometry)
        mobile = Position(float(doc["mobile"]["x"]), float(doc["mobile"]["y"]))
        stations = [Position(float(s["x"]), float(s["y"])) for s in doc["stations"]]
        m = build_matrix(mobile, stations, _parse_table(doc.get("table", "predicted")))
        n_links = len(stations)
    else:
        n_links = args.n_links if args.n_links is not None else 1
        m = np.eye(n_links)
    if (args.matrix or args.geometry) and args.n_links not in (None, n_links):
        raise ShadowSimError(
            f"--n-links {args.n_links} conflicts with the {n_links}-link matrix"
        )

    repaired = ensure_psd(m)
    if not np.array_equal(repaired, m):
        _diag("correlation matrix was not positive semidefinite; repaired")
    try:
        L = cholesky(repaired)
    except NotPositiveSemiDefinite as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERICAL

    params = shadowing.ShadowParams(sigma=args.sigma, beta=args.beta, n_links=n_links)
    samples = shadowing.generate(params, L, args.seed, args.steps)
    shadowing.write_trace_csv(args.output, samples)
    with open(args.output + ".meta.json", "w") as fh:
        json.dump(
            {
                "n_links": n_links,
                "sigma_db": args.sigma,
                "beta": args.beta,
                "steps": args.steps,
                "seed": args.seed,
                "correlation_matrix": repaired.tolist(),
                "cholesky_factor": L.tolist(),
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    _diag(f"wrote {args.steps} steps x {n_links} links to {args.output}")
    return 0


def cmd_extract(args) -> int:
    trace = extraction.read_trace_csv(args.input, spacing=args.spacing)
    if args.smooth_fast:
        trace = extraction.remove_fast_fading(trace, args.fast_window, args.fast_domain)
    if args.method == "sliding":
        result = extraction.extract_sliding(trace, args.window)
    else:
        if args.zones:
            zone_doc = _load_json(args.zones)
            zones = [
                list(range(z[0], z[1])) if len(z) == 2 and isinstance(z[0], int) else z
                for z in zone_doc
            ]
        else:
            zones = [list(range(len(trace)))]
        result = extraction.extract_regression(trace, zones)
        for i, p in enumerate(result.fitted_params):
            print(f"zone {i}: (a, b) = ({p.a:.2f}, {p.b:.2f})")
    if args.output:
        extraction.write_shadowing_csv(args.output, result.shadowing)
    print(f"shadowing std: {result.std:.1f} dB")
    return 0


def cmd_ci_grid(args) -> int:
    scn = _scenario_from_args(args)
    grid = ci_sim.run_grid(scn, threads=args.threads)
    _write_grid(args.output, grid, args.format)
    if args.compare_uncorrelated:
        base = ci_sim.run_grid(ci_sim._with_table(scn, None), threads=args.threads)
        suffix = ".json" if args.format == "json" else ".csv"
        _write_grid(args.output + ".uncorrelated" + suffix, base, args.format)
        delta_path = args.output + ".delta" + suffix
        rows = [
            {
                "x": c.x, "y": c.y,
                "delta_mean_db": c.mean_db - b.mean_db,
                "delta_std_db": c.std_db - b.std_db,
            }
            for b, c in zip(base, grid)
        ]
        if args.format == "json":
            with open(delta_path, "w") as fh:
                json.dump(rows, fh, indent=2)
                fh.write("\n")
        else:
            with open(delta_path, "w", newline="") as fh:
                fh.write("x,y,delta_mean_db,delta_std_db\n")
                for r in rows:
                    fh.write(
                        f"{r['x']:.12g},{r['y']:.12g},"
                        f"{r['delta_mean_db']:.12g},{r['delta_std_db']:.12g}\n"
                    )
    _diag(f"wrote {len(grid)} cells to {args.output}")
    return 0


def cmd_sensitivity(args) -> int:
    scn = _scenario_from_args(args)
    sigmas = [float(s) for s in args.sigmas.split(",")]
    grids, deltas = ci_sim.sensitivity_sigma(scn, sigmas, threads=args.threads)
    with open(args.output, "w", newline="") as fh:
        fh.write("sigma_db,x,y,mean_db,std_db,delta_mean_db,delta_std_db\n")
        for s in sigmas:
            for i, c in enumerate(grids[s]):
                dm, ds = (0.0, 0.0) if s == sigmas[0] else deltas[s][i]
                fh.write(
                    f"{s:.12g},{c.x:.12g},{c.y:.12g},{c.mean_db:.12g},"
                    f"{c.std_db:.12g},{dm:.12g},{ds:.12g}\n"
                )
    _diag(f"wrote sensitivity report for sigmas {sigmas} to {args.output}")
    return 0


def cmd_tables(args) -> int:
    table = builtin_table(args.kind)
    theta = table.theta_edges
    rdb = table.rdb_edges
    headers = [
        f"[{theta[i]:g},{theta[i + 1]:g})" for i in range(len(theta) - 1)
    ]
    print(f"{args.kind} cross-correlation table (rows: R_dB bins, cols: theta bins)")
    print("R_dB \\ theta  " + "  ".join(f"{h:>10}" for h in headers))
    for ri in range(table.alphas.shape[0]):
        hi = f"{rdb[ri + 1]:g}" if ri + 1 < len(rdb) else "inf"
        label = f"[{rdb[ri]:g},{hi})"
        row = "  ".join(f"{a:>10.2f}" for a in table.alphas[ri])
        print(f"{label:<13} {row}")
    if args.json:
        print(json.dumps(table_to_dict(table)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowsim",
        description="Correlated shadowing generation, extraction, and Monte Carlo C/I grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_required=True):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="RNG seed (default %(default)s)")
        p.add_argument("--output", required=output_required, help="output file path")
        p.add_argument("--format", choices=["csv", "json"], default="csv",
                       help="output format (default %(default)s)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads; never affects output bits")

    g = sub.add_parser("generate", help="generate correlated shadowing traces")
    common(g)
    g.add_argument("--n-links", type=int, default=None, help="number of links")
    g.add_argument("--sigma", type=float, default=7.0,
                   help="shadowing standard deviation in dB (default %(default)s)")
    g.add_argument("--beta", type=float, default=0.5,
                   help="lag-1 autocorrelation coefficient in [0,1] (default %(default)s)")
    g.add_argument("--steps", type=int, default=100, help="number of samples per link")
    g.add_argument("--matrix", help="JSON file holding an NxN correlation matrix")
    g.add_argument("--geometry",
                   help='JSON file {"mobile":{x,y},"stations":[{x,y},...],"table":...}')
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("extract", help="extract shadowing from a trace CSV")
    e.add_argument("--input", required=True, help="trace CSV (x,y,distance_m,level_db)")
    e.add_argument("--method", choices=["regression", "sliding"], required=True)
    e.add_argument("--window", type=float, default=extraction.DEFAULT_SLOW_WINDOW_M,
                   help="sliding-mean window in meters (default %(default)s)")
    e.add_argument("--zones", help="JSON file of zone index ranges for regression")
    e.add_argument("--spacing", type=float, default=extraction.DEFAULT_SPACING_M,
                   help="sample spacing in meters (default %(default)s)")
    e.add_argument("--smooth-fast", action="store_true",
                   help="apply the short local mean before extraction")
    e.add_argument("--fast-window", type=float, default=extraction.DEFAULT_FAST_WINDOW_M,
                   help="fast-fading window in meters (default %(default)s)")
    e.add_argument("--fast-domain", choices=["power", "db", "amplitude"], default="power",
                   help="averaging domain for the fast-fading mean")
    e.add_argument("--output", help="shadowing CSV output path")
    e.add_argument("--seed", type=int, default=DEFAULT_SEED, help="unused; accepted for symmetry")
    e.set_defaults(func=cmd_extract)

    def scenario_flags(p):
        p.add_argument("--scenario", help="scenario JSON file")
        p.add_argument("--preset", help="built-in scenario preset (figure2)")
        p.add_argument("--sigma", type=float, default=None,
                       help="override shadowing std in dB")
        p.add_argument("--replicas", type=int, default=None,
                       help="override Monte Carlo replicas per grid point")
        p.add_argument("--beta", type=float, default=None,
                       help="autocorrelation coefficient; ignored by per-point statistics")

    c = sub.add_parser("ci-grid", help="Monte Carlo C/I mean/std over a grid")
    common(c)
    scenario_flags(c)
    c.add_argument("--compare-uncorrelated", action="store_true",
                   help="also run with uncorrelated shadowing and emit per-cell deltas")
    c.set_defaults(func=cmd_ci_grid)

    s = sub.add_parser("sensitivity", help="compare C/I grids across sigma values")
    common(s)
    scenario_flags(s)
    s.add_argument("--sigmas", default="7,10",
                   help="comma-separated sigma values in dB (default %(default)s)")
    s.set_defaults(func=cmd_sensitivity)

    t = sub.add_parser("tables", help="print a built-in cross-correlation table")
    t.add_argument("--kind", choices=["predicted", "measured"], default="predicted")
    t.add_argument("--json", action="store_true", help="also print the table as JSON")
    t.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotPositiveSemiDefinite as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERICAL
    except (ShadowSimError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        _err(str(exc))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
