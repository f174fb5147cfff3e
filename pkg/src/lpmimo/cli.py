"""Command-line surface tying the design pipeline together.

One binary, six subcommands::

    lpmimo synthesize  --band 700:900 --ratio 0.885 ...
    lpmimo evaluate    --fixture LB --sweep 700:900:5 ...
    lpmimo optimize    --config run.toml ...
    lpmimo placement   --width 176 --min-height 48.7 --min-spread 97.5
    lpmimo omni        --fixture LB --freq 800 ...
    lpmimo export      --fixture HB ...

Exit codes are a stable contract: 0 success, 2 usage/config problems,
3 validation failures, 4 numerical (solver) failures.  All output files
are written atomically with floats at 9 significant digits, so identical
inputs give byte-identical artifacts.  The default output directory
comes from $LPMIMO_OUTPUT_DIR (falling back to the working directory).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import em, io, metrics, omni as omni_mod, optimizer, placement as placement_mod
from .errors import ConfigError, GeometryError, SingularSystemError, SynthesisOverflowError
from .geometry import (
    BandSpec,
    LpdaGeometry,
    boom_length,
    default_substrate,
    synthesize,
    reference_fixture,
    validate,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4


def _fmt(value: float) -> str:
    return io.format_value(float(value))


def _band_arg(text: str) -> BandSpec:
    try:
        lo, hi = text.split(":")
        return BandSpec(f_low_mhz=float(lo), f_high_mhz=float(hi))
    except (ValueError, GeometryError) as exc:
        raise argparse.ArgumentTypeError(f"band must be LOW:HIGH in MHz ({exc})") from exc


def _sweep_arg(text: str) -> em.FrequencySweep:
    try:
        lo, hi, step = text.split(":")
        return em.FrequencySweep.from_range(float(lo), float(hi), float(step))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"sweep must be LOW:HIGH:STEP in MHz ({exc})") from exc


def _angle_range_arg(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"range must be START:STOP:STEP degrees ({exc})") from exc
    return start, stop, step


def _load_geometry_arg(args) -> LpdaGeometry:
    if getattr(args, "fixture", None):
        return reference_fixture(args.fixture)
    return io.load_geometry(args.geometry)


def _out_dir(args) -> Path:
    out = Path(args.output_dir) if args.output_dir else io.default_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_synthesize(args) -> int:
    if args.fixture:
        geometry = reference_fixture(args.fixture)
    else:
        if args.band is None or args.ratio is None:
            print("error: synthesize needs --band and --ratio (or --fixture)", file=sys.stderr)
            return EXIT_USAGE
        geometry = synthesize(
            band=args.band,
            ratio=args.ratio,
            first_spacing_mm=args.first_spacing,
            bandwidth_margin=args.margin,
            width_factor=args.width_factor,
            band_label=args.label or "",
        )
    report = validate(geometry)
    out = _out_dir(args)
    path = io.save_geometry(out / args.name, geometry)
    print(f"wrote {path}")
    print(
        f"{geometry.band_label or 'array'}: {geometry.n_elements} elements, "
        f"largest arm {_fmt(geometry.arm_lengths_mm[0])} mm, "
        f"boom {_fmt(boom_length(geometry))} mm"
    )
    for line in report.summary_lines():
        print(line)
    if not report.passed:
        print("validation FAILED", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_evaluate(args) -> int:
    geometry = _load_geometry_arg(args)
    sweep = args.sweep or em.FrequencySweep((args.freq,))
    s11_rows = []
    metric_rows = []
    singular: list[float] = []
    for f in sweep:
        try:
            sol = em.solve_drive(
                geometry, f, feeder_z0_ohm=args.feeder_z0, termination=args.termination
            )
            gamma = em.s11(sol.input_impedance, args.ref_z0)
            s11_rows.append((f, gamma, em.s11_db(gamma)))
            pat = em.far_field(sol, geometry, grid_step_deg=args.grid_step)
            metric_rows.append((f, metrics.pattern_metrics(pat, gamma, args.efficiency)))
        except SingularSystemError:
            singular.append(f)
    if singular:
        listing = ", ".join(_fmt(f) for f in singular)
        print(f"numerical failure: singular drive system at {listing} MHz", file=sys.stderr)
        return EXIT_NUMERICAL
    out = _out_dir(args)
    s11_path = io.write_s11_csv(out / "s11.csv", s11_rows)
    metrics_path = io.write_metrics_csv(out / "metrics.csv", metric_rows)
    if args.pattern_at is not None:
        sol = em.solve_drive(
            geometry, args.pattern_at, feeder_z0_ohm=args.feeder_z0, termination=args.termination
        )
        pat = em.far_field(sol, geometry, grid_step_deg=args.grid_step)
        io.write_pattern_csv(out / "pattern.csv", pat)
    best = min(s11_rows, key=lambda r: r[2])
    peak = max(m.realized_gain_dbi for _, m in metric_rows)
    print(
        f"{geometry.band_label or 'array'}: {len(s11_rows)} points, "
        f"best |S11| {_fmt(best[2])} dB at {_fmt(best[0])} MHz, "
        f"peak gain {_fmt(peak)} dBi"
    )
    print(f"wrote {s11_path} and {metrics_path}")
    return EXIT_OK


def _goals_from_config(config: dict) -> optimizer.DesignGoals:
    section = io.require_section(config, "goals")
    band = BandSpec(
        f_low_mhz=io.get_value(section, "goals", "band_low_mhz", float),
        f_high_mhz=io.get_value(section, "goals", "band_high_mhz", float),
    )
    return optimizer.DesignGoals(
        band=band,
        min_gain_dbi=io.get_value(section, "goals", "min_gain_dbi", float, 6.0),
        target_hpbw_h_deg=io.get_value(section, "goals", "target_hpbw_h_deg", float, 90.0),
        min_cross_pol_db=io.get_value(section, "goals", "min_cross_pol_db", float, 10.0),
        max_footprint_mm=(
            io.get_value(section, "goals", "max_footprint_length_mm", float, 190.0),
            io.get_value(section, "goals", "max_footprint_width_mm", float, 176.0),
        ),
        s11_threshold_db=io.get_value(section, "goals", "s11_threshold_db", float, -10.0),
    )


def _weights_from_config(config: dict) -> optimizer.ErrorWeights:
    if "weights" not in config:
        return optimizer.ErrorWeights()
    section = io.require_section(config, "weights")
    return optimizer.ErrorWeights(
        w_f=io.get_value(section, "weights", "w_f", float, 1.0),
        w_g=io.get_value(section, "weights", "w_g", float, 1.0),
        w_p=io.get_value(section, "weights", "w_p", float, 1.0),
        w_d=io.get_value(section, "weights", "w_d", float, 1.0),
        w_h=io.get_value(section, "weights", "w_h", float, 1.0),
    )


def _ga_from_config(config: dict, seed_override: int | None) -> tuple[optimizer.GaConfig, str, float]:
    section = io.require_section(config, "ga")
    seed = io.get_value(section, "ga", "seed", int, 0)
    if seed_override is not None:
        seed = seed_override
    term = io.get_value(section, "ga", "termination_error", float, 0.05)
    ga = optimizer.GaConfig(
        population=io.get_value(section, "ga", "population", int, 48),
        generations=io.get_value(section, "ga", "generations", int, 120),
        crossover_rate=io.get_value(section, "ga", "crossover_rate", float, 0.9),
        mutation_rate=io.get_value(section, "ga", "mutation_rate", float, 0.15),
        tournament_size=io.get_value(section, "ga", "tournament_size", int, 3),
        elite_count=io.get_value(section, "ga", "elite_count", int, 2),
        seed=seed,
        termination_error=term,
    )
    fitness_kind = io.get_value(section, "ga", "fitness", str, "surrogate")
    sweep_step = io.get_value(section, "ga", "sweep_step_mhz", float, 0.0)
    if fitness_kind not in ("surrogate", "sphere"):
        raise ConfigError("[ga].fitness", f"must be 'surrogate' or 'sphere', got {fitness_kind!r}")
    return ga, fitness_kind, sweep_step


def _sphere(x) -> float:
    """Benchmark fitness: squared distance to the unit-cube center."""
    import numpy as np

    return float(np.sum((np.asarray(x) - 0.5) ** 2))


def cmd_optimize(args) -> int:
    config = io.load_config(args.config)
    ga, fitness_kind, sweep_step = _ga_from_config(config, args.seed)
    out = _out_dir(args)
    if fitness_kind == "sphere":
        result = optimizer.run_ga(ga, fitness=_sphere)
    else:
        goals = _goals_from_config(config)
        weights = _weights_from_config(config)
        step = sweep_step or (goals.band.f_high_mhz - goals.band.f_low_mhz) / 4.0
        sweep = em.FrequencySweep.from_range(
            goals.band.f_low_mhz, goals.band.f_high_mhz, step
        )
        result = optimizer.run_ga(ga, goals=goals, weights=weights, sweep=sweep)
    history_path = io.write_history_csv(out / "history.csv", result.history)
    geometry = optimizer.geometry_from_genome(result.best_genome, band_label="optimized")
    geometry_path = io.save_geometry(out / "best_geometry.json", geometry)
    if fitness_kind == "surrogate":
        optimizer.design_report(result.best_genome, goals, weights, sweep, out)
    print(f"wrote {history_path} and {geometry_path}")
    print(
        f"best e_t {_fmt(result.best_fitness)} after "
        f"{result.history[-1].generation} generations ({result.termination_reason})"
    )
    return EXIT_OK


def cmd_placement(args) -> int:
    rows = placement_mod.tradeoff_sweep(
        args.width, args.sweep[0], args.sweep[1], args.sweep[2], args.convention
    )
    out = _out_dir(args)
    path = io.write_placement_csv(out / "placement.csv", rows)
    print(f"wrote {path}")
    if args.alpha is not None:
        dims = placement_mod.placement_dims(args.width, args.alpha, args.convention)
        print(
            f"alpha {_fmt(dims.incline_angle_deg)} deg: H = {_fmt(dims.height_mm)} mm, "
            f"S = {_fmt(dims.spread_mm)} mm, PLF = {_fmt(dims.plf_linear)} "
            f"({_fmt(dims.plf_db)} dB)"
        )
    if args.min_height is not None or args.min_spread is not None:
        constraints = placement_mod.PlacementConstraints(
            min_height_mm=args.min_height or 0.0,
            min_spread_mm=args.min_spread or 0.0,
        )
        interval = placement_mod.feasible_angles(args.width, constraints)
        if interval is None:
            print("feasible interval: EMPTY")
        else:
            print(
                f"feasible interval: [{_fmt(interval[0])}, {_fmt(interval[1])}] deg"
            )
    return EXIT_OK


def cmd_omni(args) -> int:
    if args.fixture:
        geometries = [reference_fixture(args.fixture)] * 4
    else:
        if len(args.inputs) != 4:
            print(
                f"error: omni needs exactly 4 geometry inputs, got {len(args.inputs)}",
                file=sys.stderr,
            )
            return EXIT_USAGE
        geometries = [io.load_geometry(p) for p in args.inputs]
    patterns = []
    for g in geometries:
        sol = em.solve_drive(g, args.freq, feeder_z0_ohm=args.feeder_z0)
        patterns.append(em.far_field(sol, g, grid_step_deg=args.grid_step))
    omni_set = omni_mod.OmniSet.from_patterns(patterns, band=args.band)
    out = _out_dir(args)
    summary = omni_mod.coverage_report(
        omni_set, out, bands=(args.band,), elevation_deg=args.elevation
    )
    info = summary[args.band]
    print(f"wrote {info['coverage_csv']} and {info['pole_map_csv']}")
    print(
        f"{args.band} coverage at {_fmt(args.elevation)} deg elevation: "
        f"ripple {_fmt(info['ripple_db'])} dB, "
        f"crossover depth {_fmt(info['crossover_depth_db'])} dB, "
        f"min best gain {_fmt(info['min_best_gain_dbi'])} dBi"
    )
    return EXIT_OK


def cmd_export(args) -> int:
    geometry = reference_fixture(args.fixture)
    out = _out_dir(args)
    tag = args.fixture.lower()
    geometry_path = io.save_geometry(out / f"geometry_{tag}.json", geometry)
    rows = []
    for i, e in enumerate(geometry.elements):
        spacing = "" if e.spacing_to_next_mm is None else e.spacing_to_next_mm
        rows.append((i, e.arm_length_mm, e.strip_width_mm, spacing))
    table_path = io.write_csv(
        out / f"dimensions_{tag}.csv",
        "element,arm_length_mm,strip_width_mm,spacing_to_next_mm",
        rows,
    )
    print(f"wrote {geometry_path} and {table_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpmimo",
        description="Dual-band log-periodic MIMO antenna design toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument(
            "--output-dir",
            "-o",
            default=None,
            help="output directory (default: $LPMIMO_OUTPUT_DIR or the working directory)",
        )

    p = sub.add_parser("synthesize", help="build a ratio-law array for a band")
    p.add_argument("--band", type=_band_arg, help="band edges LOW:HIGH in MHz")
    p.add_argument("--ratio", type=float, help="geometric ratio in (0.78, 0.98)")
    p.add_argument("--first-spacing", type=float, default=28.0, help="largest spacing in mm")
    p.add_argument("--margin", type=float, default=1.4, help="bandwidth margin for element count")
    p.add_argument("--width-factor", type=float, default=0.184, help="strip width / arm length")
    p.add_argument("--fixture", choices=("LB", "HB"), help="emit a bundled reference array instead")
    p.add_argument("--label", help="band label stored in the geometry")
    p.add_argument("--name", default="geometry.json", help="output file name")
    add_output(p)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("evaluate", help="sweep S11 and pattern metrics for a geometry")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--geometry", help="geometry JSON file")
    src.add_argument("--fixture", choices=("LB", "HB"), help="bundled reference array")
    freq = p.add_mutually_exclusive_group(required=True)
    freq.add_argument("--sweep", type=_sweep_arg, help="LOW:HIGH:STEP in MHz")
    freq.add_argument("--freq", type=float, help="single frequency in MHz")
    p.add_argument("--ref-z0", type=float, default=50.0, help="S11 reference impedance (ohm)")
    p.add_argument("--feeder-z0", type=float, default=100.0, help="feeder characteristic impedance")
    p.add_argument("--termination", choices=("open", "short"), default="open")
    p.add_argument("--efficiency", type=float, default=metrics.DEFAULT_EFFICIENCY)
    p.add_argument("--grid-step", type=float, default=1.0, help="pattern grid step in degrees")
    p.add_argument("--pattern-at", type=float, help="also export the pattern at this frequency")
    add_output(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("optimize", help="run the GA design loop from a TOML config")
    p.add_argument("--config", required=True, help="TOML file with [goals], [weights], [ga]")
    p.add_argument("--seed", type=int, help="override the [ga].seed value")
    add_output(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("placement", help="slant-pair placement geometry and feasibility")
    p.add_argument("--width", type=float, required=True, help="assembly width W in mm")
    p.add_argument("--alpha", type=float, help="print dims at this incline angle (deg)")
    p.add_argument("--min-height", type=float, help="required assembly height in mm")
    p.add_argument("--min-spread", type=float, help="required spread in mm")
    p.add_argument(
        "--sweep",
        type=_angle_range_arg,
        default=(0.0, 90.0, 1.0),
        help="sweep START:STOP:STEP in degrees (default 0:90:1)",
    )
    p.add_argument("--convention", choices=placement_mod.PLF_CONVENTIONS, default="printed")
    add_output(p)
    p.set_defaults(func=cmd_placement)

    p = sub.add_parser("omni", help="compose four poles into omni coverage")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--inputs", nargs="+", help="exactly four geometry JSON files")
    src.add_argument("--fixture", choices=("LB", "HB"), help="use four copies of a reference array")
    p.add_argument("--freq", type=float, required=True, help="evaluation frequency in MHz")
    p.add_argument("--band", choices=("LB", "HB"), default="LB", help="band slot for the patterns")
    p.add_argument("--elevation", type=float, default=90.0, help="coverage elevation cut (deg)")
    p.add_argument("--feeder-z0", type=float, default=100.0)
    p.add_argument("--grid-step", type=float, default=1.0)
    add_output(p)
    p.set_defaults(func=cmd_omni)

    p = sub.add_parser("export", help="write a bundled reference array and its dimension table")
    p.add_argument("--fixture", choices=("LB", "HB"), required=True)
    add_output(p)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SynthesisOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
