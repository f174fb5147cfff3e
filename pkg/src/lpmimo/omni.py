"""Four-pole omni composition with best-pole selection.

Four identical slant-MIMO assemblies face the compass poles N/E/S/W
(azimuths 0/90/180/270 degrees).  Coverage at a given elevation is the
pointwise maximum of the four rotated patterns expressed in dBi; the
selector simply switches to whichever pole is strongest toward a target
azimuth, ties going to the lowest pole index.

Each pole's pattern is the isolated assembly pattern; coupling between
poles is not modelled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .em import FarFieldPattern
from .metrics import radiated_power
from .placement import SlantPlacement

POLES = ("N", "E", "S", "W")
POLE_AZIMUTHS_DEG = (0.0, 90.0, 180.0, 270.0)


@dataclass(frozen=True)
class PoleAssembly:
    """One pole's dual-band assembly.

    Either band's pattern may be None when only the other band is under
    study; asking for coverage on a missing band raises.
    """

    pole: str
    lb_pattern: FarFieldPattern | None = None
    hb_pattern: FarFieldPattern | None = None
    placement: SlantPlacement | None = None

    def __post_init__(self):
        if self.pole not in POLES:
            raise ValueError(f"pole must be one of {POLES}, got {self.pole!r}")
        if self.lb_pattern is None and self.hb_pattern is None:
            raise ValueError("assembly carries no pattern for either band")

    @property
    def azimuth_deg(self) -> float:
        return POLE_AZIMUTHS_DEG[POLES.index(self.pole)]

    def pattern(self, band: str) -> FarFieldPattern:
        if band == "LB":
            pat = self.lb_pattern
        elif band == "HB":
            pat = self.hb_pattern
        else:
            raise ValueError(f"band must be 'LB' or 'HB', got {band!r}")
        if pat is None:
            raise ValueError(f"pole {self.pole} has no {band} pattern")
        return pat


@dataclass(frozen=True)
class OmniSet:
    """Exactly four assemblies, one per compass pole, in N/E/S/W order."""

    assemblies: tuple[PoleAssembly, PoleAssembly, PoleAssembly, PoleAssembly]

    def __post_init__(self):
        if len(self.assemblies) != 4:
            raise ValueError(f"an omni set needs exactly 4 assemblies, got {len(self.assemblies)}")
        poles = tuple(a.pole for a in self.assemblies)
        if poles != POLES:
            raise ValueError(f"assemblies must cover poles {POLES} in order, got {poles}")

    @classmethod
    def from_patterns(
        cls,
        patterns: "tuple[FarFieldPattern, ...] | list[FarFieldPattern]",
        band: str = "LB",
        placements: "tuple[SlantPlacement | None, ...] | None" = None,
    ) -> "OmniSet":
        if len(patterns) != 4:
            raise ValueError(f"need exactly 4 patterns, got {len(patterns)}")
        placements = placements or (None,) * 4
        key = "lb_pattern" if band == "LB" else "hb_pattern"
        assemblies = tuple(
            PoleAssembly(pole=p, placement=pl, **{key: pat})
            for p, pat, pl in zip(POLES, patterns, placements)
        )
        return cls(assemblies=assemblies)  # type: ignore[arg-type]


@dataclass(frozen=True)
class CoverageProfile:
    """Composite azimuth coverage at one elevation for one band."""

    band: str
    elevation_deg: float
    azimuth_deg: np.ndarray
    best_gain_dbi: np.ndarray
    best_pole: np.ndarray
    ripple_db: float
    crossover_depth_db: float

    def __post_init__(self):
        if self.ripple_db < 0:
            raise ValueError("ripple cannot be negative")

    def pole_arcs(self) -> list[tuple[float, float, int]]:
        """Half-open [start, end) azimuth arcs of constant best pole.

        Arcs wrap: when the profile starts and ends on the same pole the
        two pieces merge into one arc whose start exceeds its end.
        """
        az = self.azimuth_deg
        pole = self.best_pole
        step = float(az[1] - az[0])
        arcs: list[tuple[float, float, int]] = []
        start = 0
        for i in range(1, len(pole)):
            if pole[i] != pole[start]:
                arcs.append((float(az[start]), float(az[i]), int(pole[start])))
                start = i
        arcs.append((float(az[start]), float(az[-1]) + step, int(pole[start])))
        if len(arcs) > 1 and arcs[0][2] == arcs[-1][2]:
            first, last = arcs[0], arcs.pop()
            arcs[0] = (last[0], first[1], first[2])
        return arcs


def rotate_pattern(pattern: FarFieldPattern, azimuth_deg: float) -> FarFieldPattern:
    """Rotate a pattern about the vertical axis by an azimuth offset.

    Grid-aligned rotations are exact index rolls; anything else falls
    back to linear interpolation in phi on the complex fields (the
    spherical basis vectors co-rotate, so components copy straight over).
    """
    step = float(pattern.phi_deg[1] - pattern.phi_deg[0])
    n = len(pattern.phi_deg)
    shift = (azimuth_deg % 360.0) / step
    if abs(shift - round(shift)) < 1e-9:
        s = int(round(shift)) % n
        e_theta = np.roll(pattern.e_theta, s, axis=1)
        e_phi = np.roll(pattern.e_phi, s, axis=1)
    else:
        src = (pattern.phi_deg - azimuth_deg) % 360.0
        j0 = np.floor(src / step).astype(int) % n
        j1 = (j0 + 1) % n
        w = ((src / step) - np.floor(src / step))[None, :]
        e_theta = (1.0 - w) * pattern.e_theta[:, j0] + w * pattern.e_theta[:, j1]
        e_phi = (1.0 - w) * pattern.e_phi[:, j0] + w * pattern.e_phi[:, j1]
    return FarFieldPattern(
        frequency_mhz=pattern.frequency_mhz,
        theta_deg=pattern.theta_deg,
        phi_deg=pattern.phi_deg,
        e_theta=e_theta,
        e_phi=e_phi,
    )


def _gain_cut(pattern: FarFieldPattern, elevation_deg: float) -> np.ndarray:
    """Azimuth gain cut in dBi at the grid row nearest the elevation."""
    step = pattern.grid_step_deg
    row = int(round(elevation_deg / step))
    row = min(max(row, 0), len(pattern.theta_deg) - 1)
    u = pattern.power()[row, :]
    total = radiated_power(pattern)
    if total <= 0.0:
        raise ValueError("pattern radiates no power")
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(4.0 * np.pi * u / total)


def _pole_gain_matrix(
    omni_set: OmniSet, band: str, elevation_deg: float
) -> tuple[np.ndarray, np.ndarray]:
    """(azimuths, 4 x n gain matrix) of the rotated assemblies."""
    reference = omni_set.assemblies[0].pattern(band)
    cuts = []
    for assembly in omni_set.assemblies:
        pat = assembly.pattern(band)
        if (
            pat.power().shape != reference.power().shape
            or abs(pat.grid_step_deg - reference.grid_step_deg) > 1e-12
        ):
            raise ValueError("all four patterns must share one grid geometry")
        cuts.append(_gain_cut(rotate_pattern(pat, assembly.azimuth_deg), elevation_deg))
    return np.asarray(reference.phi_deg, dtype=float), np.vstack(cuts)


def composite_coverage(
    omni_set: OmniSet, band: str = "LB", elevation_deg: float = 90.0
) -> CoverageProfile:
    """Max-over-poles composite coverage on an elevation cut.

    Crossover depth is measured at pole hand-offs: the worst drop from
    the composite peak to the weaker of the two samples flanking a
    best-pole transition.  A profile with a single pole everywhere has
    zero crossover depth.
    """
    azimuths, gains = _pole_gain_matrix(omni_set, band, elevation_deg)
    best_pole = np.argmax(gains, axis=0)
    best_gain = gains[best_pole, np.arange(gains.shape[1])]
    peak = float(best_gain.max())
    ripple = peak - float(best_gain.min())
    depth = 0.0
    n = len(best_gain)
    for i in range(n):
        j = (i + 1) % n
        if best_pole[i] != best_pole[j]:
            depth = max(depth, peak - min(float(best_gain[i]), float(best_gain[j])))
    return CoverageProfile(
        band=band,
        elevation_deg=elevation_deg,
        azimuth_deg=azimuths,
        best_gain_dbi=best_gain,
        best_pole=best_pole,
        ripple_db=ripple,
        crossover_depth_db=depth,
    )


def select_pole(
    omni_set: OmniSet,
    target_azimuth_deg: float,
    band: str = "LB",
    elevation_deg: float = 90.0,
) -> tuple[int, float]:
    """(pole index, gain dBi) of the strongest pole toward a target.

    Uses the same sampled cut as composite_coverage, so the two always
    agree at grid azimuths; ties go to the lowest pole index.
    """
    azimuths, gains = _pole_gain_matrix(omni_set, band, elevation_deg)
    step = float(azimuths[1] - azimuths[0])
    col = int(round((target_azimuth_deg % 360.0) / step)) % gains.shape[1]
    idx = int(np.argmax(gains[:, col]))
    return idx, float(gains[idx, col])


def coverage_report(
    omni_set: OmniSet,
    out_dir,
    bands: tuple[str, ...] = ("LB",),
    elevation_deg: float = 90.0,
) -> dict:
    """Write coverage and pole-map CSVs per band; return the summary.

    The summary restates ripple, crossover depth, and the minimum of the
    composite best gain for every band written.
    """
    from . import io  # local import keeps module load cheap for pure users

    summary: dict = {}
    for band in bands:
        profile = composite_coverage(omni_set, band, elevation_deg)
        tag = band.lower()
        coverage_path = io.join_out(out_dir, f"coverage_{tag}.csv")
        pole_map_path = io.join_out(out_dir, f"pole_map_{tag}.csv")
        io.write_coverage_csv(coverage_path, profile)
        io.write_pole_map_csv(pole_map_path, profile.pole_arcs())
        summary[band] = {
            "ripple_db": profile.ripple_db,
            "crossover_depth_db": profile.crossover_depth_db,
            "min_best_gain_dbi": float(profile.best_gain_dbi.min()),
            "coverage_csv": str(coverage_path),
            "pole_map_csv": str(pole_map_path),
        }
    return summary
