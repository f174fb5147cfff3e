"""Genetic-algorithm design loop over ratio-law LPDA genomes.

A genome is the six-parameter ratio-law description of one array; its
fitness is a weighted sum of five normalized error components measured
through the EM surrogate:

* e_f -- fraction of in-band sweep points whose |S11| misses the
  return-loss threshold,
* e_g -- mean realized-gain shortfall against the gain floor,
* e_p -- cross-polarization shortfall in the slant basis at band center,
* e_d -- footprint overflow beyond the allowed outline,
* e_h -- H-plane beamwidth deviation from the target at band center.

Each component is clamped to [0, 1]; a surrogate singularity at a sweep
point contributes the worst per-point penalty (1.0) instead of aborting
the evaluation.

The GA itself is a plain generational scheme: tournament selection,
uniform crossover, per-gene Gaussian mutation (sigma = 5% of the gene
range) and elitism.  Every random draw comes from a stream spawned as
(seed, generation, individual), so runs are bit-reproducible for a given
seed no matter how fitness evaluations are interleaved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import em, metrics
from .constants import RATIO_MAX, RATIO_MIN
from .em import FrequencySweep
from .errors import GeometryError, SingularSystemError
from .geometry import BandSpec, LpdaGeometry, SubstrateSpec, build_geometry

MUTATION_SIGMA = 0.05  # gaussian step as a fraction of the unit gene range


@dataclass(frozen=True)
class DesignGoals:
    """Targets the error components are measured against."""

    band: BandSpec
    min_gain_dbi: float = 6.0
    target_hpbw_h_deg: float = 90.0
    min_cross_pol_db: float = 10.0
    max_footprint_mm: tuple[float, float] = (190.0, 176.0)
    s11_threshold_db: float = -10.0

    def __post_init__(self):
        values = (
            self.min_gain_dbi,
            self.target_hpbw_h_deg,
            self.min_cross_pol_db,
            *self.max_footprint_mm,
            self.s11_threshold_db,
        )
        if not all(math.isfinite(v) for v in values):
            raise ValueError("all design goals must be finite")
        if self.target_hpbw_h_deg <= 0 or self.min_cross_pol_db <= 0:
            raise ValueError("hpbw target and cross-pol floor must be positive")
        if self.min_gain_dbi <= 0:
            raise ValueError("gain floor must be positive (it normalizes e_g)")
        if any(v <= 0 for v in self.max_footprint_mm):
            raise ValueError("footprint limits must be positive")


@dataclass(frozen=True)
class ErrorWeights:
    w_f: float = 1.0
    w_g: float = 1.0
    w_p: float = 1.0
    w_d: float = 1.0
    w_h: float = 1.0

    def __post_init__(self):
        vals = (self.w_f, self.w_g, self.w_p, self.w_d, self.w_h)
        if any(w < 0 for w in vals):
            raise ValueError("weights must be non-negative")
        if not any(w > 0 for w in vals):
            raise ValueError("at least one weight must be positive")


def combine(weights: ErrorWeights, e_f: float, e_g: float, e_p: float, e_d: float, e_h: float) -> float:
    """The weighted total error; the single definition everything reuses."""
    return (
        weights.w_f * e_f
        + weights.w_g * e_g
        + weights.w_p * e_p
        + weights.w_d * e_d
        + weights.w_h * e_h
    )


@dataclass(frozen=True)
class DesignError:
    """Component errors plus their weighted total."""

    e_f: float
    e_g: float
    e_p: float
    e_d: float
    e_h: float
    e_t: float

    @classmethod
    def from_components(
        cls, weights: ErrorWeights, e_f: float, e_g: float, e_p: float, e_d: float, e_h: float
    ) -> "DesignError":
        return cls(e_f, e_g, e_p, e_d, e_h, combine(weights, e_f, e_g, e_p, e_d, e_h))

    def recombine(self, weights: ErrorWeights) -> float:
        """Recompute the total from the stored components."""
        return combine(weights, self.e_f, self.e_g, self.e_p, self.e_d, self.e_h)


@dataclass(frozen=True)
class Genome:
    """Ratio-law array description the GA searches over."""

    ratio: float
    first_spacing_mm: float
    element_count: int
    largest_arm_mm: float
    width_factor: float
    feeder_z0_ohm: float

    def __post_init__(self):
        if not (RATIO_MIN < self.ratio < RATIO_MAX):
            raise GeometryError(f"genome ratio {self.ratio} outside ({RATIO_MIN}, {RATIO_MAX})")
        if not 4 <= self.element_count <= 64:
            raise GeometryError(f"element_count {self.element_count} outside [4, 64]")
        for name in ("first_spacing_mm", "largest_arm_mm", "width_factor", "feeder_z0_ohm"):
            if getattr(self, name) <= 0:
                raise GeometryError(f"genome field {name} must be positive")


@dataclass(frozen=True)
class GenomeBounds:
    """Per-gene (low, high) boxes mapping the unit cube onto genomes."""

    ratio: tuple[float, float] = (0.785, 0.975)
    first_spacing_mm: tuple[float, float] = (5.0, 60.0)
    element_count: tuple[int, int] = (4, 24)
    largest_arm_mm: tuple[float, float] = (20.0, 140.0)
    width_factor: tuple[float, float] = (0.05, 0.3)
    feeder_z0_ohm: tuple[float, float] = (50.0, 200.0)

    def __post_init__(self):
        for f in fields(self):
            lo, hi = getattr(self, f.name)
            if not lo < hi:
                raise ValueError(f"bounds for {f.name} must satisfy low < high")

    @property
    def n_genes(self) -> int:
        return len(fields(self))

    def decode(self, x: np.ndarray) -> Genome:
        """Map a unit-cube vector to a genome (element count rounds)."""
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        if x.shape != (self.n_genes,):
            raise ValueError(f"genome vector must have {self.n_genes} genes, got {x.shape}")
        vals = {}
        for gene, f in zip(x, fields(self)):
            lo, hi = getattr(self, f.name)
            vals[f.name] = lo + gene * (hi - lo)
        vals["element_count"] = int(round(vals["element_count"]))
        return Genome(**vals)

    def encode(self, genome: Genome) -> np.ndarray:
        x = np.empty(self.n_genes)
        for i, f in enumerate(fields(self)):
            lo, hi = getattr(self, f.name)
            x[i] = (getattr(genome, f.name) - lo) / (hi - lo)
        return np.clip(x, 0.0, 1.0)


@dataclass(frozen=True)
class GaConfig:
    population: int = 48
    generations: int = 120
    crossover_rate: float = 0.9
    mutation_rate: float = 0.15
    tournament_size: int = 3
    elite_count: int = 2
    seed: int = 0
    termination_error: float = 0.05

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if self.generations < 1:
            raise ValueError("need at least one generation")
        if not 0 <= self.crossover_rate <= 1 or not 0 <= self.mutation_rate <= 1:
            raise ValueError("rates must lie in [0, 1]")
        if self.tournament_size < 1:
            raise ValueError("tournament size must be at least 1")
        if not 0 <= self.elite_count < self.population:
            raise ValueError("elite_count must be smaller than the population")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_et: float
    mean_et: float
    best_ratio: float
    best_n: int


@dataclass(frozen=True)
class GaResult:
    best_genome: Genome
    best_vector: np.ndarray
    best_fitness: float
    best_error: DesignError | None
    history: tuple[GenerationRecord, ...]
    terminated_early: bool
    termination_reason: str


def geometry_from_genome(
    genome: Genome, substrate: SubstrateSpec | None = None, band_label: str = "candidate"
) -> LpdaGeometry:
    return build_geometry(
        largest_arm_mm=genome.largest_arm_mm,
        ratio=genome.ratio,
        n_elements=genome.element_count,
        first_spacing_mm=genome.first_spacing_mm,
        width_factor=genome.width_factor,
        substrate=substrate,
        band_label=band_label,
    )


def _clamp01(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def evaluate_error(
    genome: Genome,
    goals: DesignGoals,
    weights: ErrorWeights,
    sweep: FrequencySweep,
    substrate: SubstrateSpec | None = None,
    grid_step_deg: float = 2.0,
    efficiency: float = metrics.DEFAULT_EFFICIENCY,
) -> DesignError:
    """Score one genome against the goals over a frequency sweep.

    The sweep must cover the goal band.  Band-center quantities (e_p,
    e_h) are evaluated at the exact center frequency, not a sweep point.
    """
    band = goals.band
    pts = list(sweep)
    if pts[0] > band.f_low_mhz or pts[-1] < band.f_high_mhz:
        raise ValueError(
            f"sweep {pts[0]:g}..{pts[-1]:g} MHz does not cover the goal band "
            f"{band.f_low_mhz:g}..{band.f_high_mhz:g} MHz"
        )
    in_band = [p for p in pts if band.f_low_mhz <= p <= band.f_high_mhz]

    geometry = geometry_from_genome(genome, substrate)

    missed = 0
    gain_terms = []
    for f in in_band:
        try:
            sol = em.solve_drive(geometry, f, feeder_z0_ohm=genome.feeder_z0_ohm)
            gamma = em.s11(sol.input_impedance)
            if em.s11_db(gamma) > goals.s11_threshold_db:
                missed += 1
            pat = em.far_field(sol, geometry, grid_step_deg=grid_step_deg)
            gain = metrics.realized_gain(metrics.directivity(pat), gamma, efficiency)
            gain_terms.append(_clamp01((goals.min_gain_dbi - gain) / goals.min_gain_dbi))
        except SingularSystemError:
            missed += 1
            gain_terms.append(1.0)
    e_f = missed / len(in_band)
    e_g = _clamp01(sum(gain_terms) / len(gain_terms))

    try:
        center_sol = em.solve_drive(geometry, band.center_mhz, feeder_z0_ohm=genome.feeder_z0_ohm)
        # The assembly mounts each panel at 45 deg, so the slant basis is
        # evaluated on the tilted pattern.
        tilted = em.far_field(center_sol, geometry, grid_step_deg=grid_step_deg, axis_tilt_deg=45.0)
        xpol = metrics.slant_components(tilted).cross_pol_ratio_db
        e_p = _clamp01((goals.min_cross_pol_db - xpol) / goals.min_cross_pol_db)
        upright = em.far_field(center_sol, geometry, grid_step_deg=grid_step_deg)
        width = metrics.hpbw(upright, "H")
        if math.isnan(width):
            e_h = 1.0  # beam too broad to even measure
        else:
            e_h = _clamp01(abs(width - goals.target_hpbw_h_deg) / goals.target_hpbw_h_deg)
    except SingularSystemError:
        e_p = 1.0
        e_h = 1.0

    max_len, max_wid = goals.max_footprint_mm
    e_d = _clamp01(
        max(0.0, geometry.footprint_length_mm / max_len - 1.0)
        + max(0.0, geometry.footprint_width_mm / max_wid - 1.0)
    )

    return DesignError.from_components(weights, e_f, e_g, e_p, e_d, e_h)


def _spawned_rng(seed: int, generation: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(generation, index)))


def run_ga(
    config: GaConfig,
    goals: DesignGoals | None = None,
    weights: ErrorWeights | None = None,
    sweep: FrequencySweep | None = None,
    fitness=None,
    bounds: GenomeBounds | None = None,
    substrate: SubstrateSpec | None = None,
) -> GaResult:
    """Run the GA; returns the best genome and per-generation history.

    ``fitness`` maps a unit-cube gene vector to a scalar to minimize.
    When omitted, it is evaluate_error over the decoded genome (goals,
    weights and sweep are then required).  History entry 0 records the
    seeded initial population; later entries one evolved generation each.
    """
    bounds = bounds or GenomeBounds()
    dim = bounds.n_genes
    surrogate_mode = fitness is None
    if surrogate_mode:
        if goals is None or weights is None or sweep is None:
            raise ValueError("default fitness needs goals, weights and a sweep")

        def fitness(x: np.ndarray) -> float:
            return evaluate_error(bounds.decode(x), goals, weights, sweep, substrate).e_t

    population = [
        _spawned_rng(config.seed, 0, idx).random(dim) for idx in range(config.population)
    ]
    scores = [float(fitness(x)) for x in population]

    history: list[GenerationRecord] = []
    terminated_early = False
    reason = "generation budget exhausted"

    def record(generation: int) -> int:
        best_idx = int(np.argmin(scores))
        best = bounds.decode(population[best_idx])
        history.append(
            GenerationRecord(
                generation=generation,
                best_et=scores[best_idx],
                mean_et=float(np.mean(scores)),
                best_ratio=best.ratio,
                best_n=best.element_count,
            )
        )
        return best_idx

    best_idx = record(0)
    if scores[best_idx] <= config.termination_error:
        terminated_early = True
        reason = "termination_error reached in the initial population"

    generation = 0
    while not terminated_early and generation < config.generations:
        generation += 1
        order = sorted(range(config.population), key=lambda i: scores[i])
        elites = [(population[i].copy(), scores[i]) for i in order[: config.elite_count]]

        children = []
        for idx in range(config.population - config.elite_count):
            rng = _spawned_rng(config.seed, generation, idx)

            def tournament() -> np.ndarray:
                picks = rng.integers(0, config.population, size=config.tournament_size)
                winner = min(picks, key=lambda i: scores[i])
                return population[winner]

            parent_a = tournament()
            parent_b = tournament()
            if rng.random() < config.crossover_rate:
                mask = rng.random(dim) < 0.5
                child = np.where(mask, parent_a, parent_b)
            else:
                child = parent_a.copy()
            mutate = rng.random(dim) < config.mutation_rate
            steps = rng.normal(0.0, MUTATION_SIGMA, size=dim)
            child = np.clip(child + np.where(mutate, steps, 0.0), 0.0, 1.0)
            children.append(child)

        population = [e[0] for e in elites] + children
        scores = [e[1] for e in elites] + [float(fitness(x)) for x in children]
        best_idx = record(generation)
        if scores[best_idx] <= config.termination_error:
            terminated_early = True
            reason = f"termination_error reached at generation {generation}"

    best_vector = population[best_idx]
    best_genome = bounds.decode(best_vector)
    best_error = None
    if surrogate_mode:
        best_error = evaluate_error(best_genome, goals, weights, sweep, substrate)
    return GaResult(
        best_genome=best_genome,
        best_vector=best_vector.copy(),
        best_fitness=scores[best_idx],
        best_error=best_error,
        history=tuple(history),
        terminated_early=terminated_early,
        termination_reason=reason,
    )


def design_report(
    best: Genome,
    goals: DesignGoals,
    weights: ErrorWeights,
    sweep: FrequencySweep,
    out_dir,
    substrate: SubstrateSpec | None = None,
    grid_step_deg: float = 2.0,
    efficiency: float = metrics.DEFAULT_EFFICIENCY,
) -> dict:
    """Re-evaluate a genome and write the full artifact bundle.

    Writes the geometry JSON, the S11 sweep CSV, the per-frequency
    metrics CSV and an error-breakdown JSON whose components recombine
    exactly to e_t.  Returns the summary with all file paths.
    """
    import json

    from . import io

    geometry = geometry_from_genome(best, substrate, band_label="optimized")
    error = evaluate_error(best, goals, weights, sweep, substrate, grid_step_deg, efficiency)

    s11_rows = []
    metric_rows = []
    for f in sweep:
        sol = em.solve_drive(geometry, f, feeder_z0_ohm=best.feeder_z0_ohm)
        gamma = em.s11(sol.input_impedance)
        s11_rows.append((f, gamma, em.s11_db(gamma)))
        pat = em.far_field(sol, geometry, grid_step_deg=grid_step_deg)
        metric_rows.append((f, metrics.pattern_metrics(pat, gamma, efficiency)))

    geometry_path = io.save_geometry(io.join_out(out_dir, "best_geometry.json"), geometry)
    s11_path = io.write_s11_csv(io.join_out(out_dir, "s11.csv"), s11_rows)
    metrics_path = io.write_metrics_csv(io.join_out(out_dir, "metrics.csv"), metric_rows)

    breakdown = {
        "e_f": error.e_f,
        "e_g": error.e_g,
        "e_p": error.e_p,
        "e_d": error.e_d,
        "e_h": error.e_h,
        "e_t": error.e_t,
        "weights": {
            "w_f": weights.w_f,
            "w_g": weights.w_g,
            "w_p": weights.w_p,
            "w_d": weights.w_d,
            "w_h": weights.w_h,
        },
    }
    breakdown_path = io.atomic_write_text(
        io.join_out(out_dir, "error_breakdown.json"),
        json.dumps(breakdown, indent=2, sort_keys=True) + "\n",
    )
    return {
        "error": error,
        "geometry_json": str(geometry_path),
        "s11_csv": str(s11_path),
        "metrics_csv": str(metrics_path),
        "breakdown_json": str(breakdown_path),
    }
