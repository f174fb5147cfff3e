"""Slant-polarized MIMO pair geometry.

Two identical panels of width W mounted nose-to-nose at an incline angle
alpha form one dual-polarized assembly.  The assembly height is
H = W*cos(alpha), the horizontal spread S = 2*W*sin(alpha), and the
polarization match to an ideal +/-45 deg slant pair is the PLF.

Two PLF conventions are offered because the source material is
ambiguous about whether alpha means the full inter-panel angle or the
per-panel tilt from vertical:

* ``printed``    -- plf = cos(alpha/2 - 45 deg)   (default)
* ``recentered`` -- plf = cos(alpha - 90 deg), which peaks at alpha = 90
  and makes a 45 deg per-panel tilt read as a perfect match.

Angles are degrees at every interface; radians stay internal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

PLF_CONVENTIONS = ("printed", "recentered")


@dataclass(frozen=True)
class SlantPlacement:
    """One assembly's placement geometry at a given incline angle."""

    incline_angle_deg: float
    assembly_width_mm: float
    height_mm: float
    spread_mm: float
    plf_linear: float
    plf_db: float


@dataclass(frozen=True)
class PlacementConstraints:
    """Minimum assembly height and spread the mount must preserve."""

    min_height_mm: float = 0.0
    min_spread_mm: float = 0.0

    def __post_init__(self):
        if self.min_height_mm < 0 or self.min_spread_mm < 0:
            raise ValueError("placement constraints must be non-negative")


def _check_angle(incline_angle_deg: float) -> None:
    if not 0.0 < incline_angle_deg < 180.0:
        raise ValueError(
            f"incline angle must lie in (0, 180) degrees, got {incline_angle_deg}"
        )


def plf(incline_angle_deg: float, convention: str = "printed") -> float:
    """Polarization loss factor of the slant pair at an incline angle."""
    _check_angle(incline_angle_deg)
    if convention not in PLF_CONVENTIONS:
        raise ValueError(f"unknown plf convention {convention!r}")
    if convention == "printed":
        return math.cos(math.radians(incline_angle_deg / 2.0 - 45.0))
    return math.cos(math.radians(incline_angle_deg - 90.0))


def plf_db(plf_linear: float) -> float:
    if plf_linear == 0.0:
        return -math.inf
    return 20.0 * math.log10(abs(plf_linear))


def placement_dims(
    assembly_width_mm: float,
    incline_angle_deg: float,
    convention: str = "printed",
) -> SlantPlacement:
    """Height/spread/PLF of one assembly; H^2 + (S/2)^2 = W^2 by construction."""
    if assembly_width_mm <= 0:
        raise ValueError(f"assembly width must be positive, got {assembly_width_mm}")
    _check_angle(incline_angle_deg)
    alpha = math.radians(incline_angle_deg)
    p = plf(incline_angle_deg, convention)
    return SlantPlacement(
        incline_angle_deg=incline_angle_deg,
        assembly_width_mm=assembly_width_mm,
        height_mm=assembly_width_mm * math.cos(alpha),
        spread_mm=2.0 * assembly_width_mm * math.sin(alpha),
        plf_linear=p,
        plf_db=plf_db(p),
    )


def feasible_angles(
    assembly_width_mm: float, constraints: PlacementConstraints
) -> tuple[float, float] | None:
    """Closed interval of incline angles satisfying both constraints.

    H(alpha) >= min_height bounds the angle from above (arccos), the
    spread requirement from below (arcsin); None means no angle works.
    """
    if assembly_width_mm <= 0:
        raise ValueError(f"assembly width must be positive, got {assembly_width_mm}")
    w = assembly_width_mm
    cos_bound = constraints.min_height_mm / w
    sin_bound = constraints.min_spread_mm / (2.0 * w)
    if cos_bound > 1.0 or sin_bound > 1.0:
        return None
    upper = math.degrees(math.acos(cos_bound))
    lower = math.degrees(math.asin(sin_bound))
    if lower > upper:
        return None
    return lower, upper


def tradeoff_sweep(
    assembly_width_mm: float,
    start_deg: float = 0.0,
    stop_deg: float = 90.0,
    step_deg: float = 1.0,
    convention: str = "printed",
) -> list[SlantPlacement]:
    """Dense placement table over an angle range.

    Samples falling on 0 or 180 degrees are skipped (the formulas live on
    the open interval); everything else is passed through placement_dims.
    """
    if step_deg <= 0:
        raise ValueError(f"sweep step must be positive, got {step_deg}")
    rows = []
    n = int(math.floor((stop_deg - start_deg) / step_deg + 1e-9))
    for i in range(n + 1):
        alpha = start_deg + i * step_deg
        if alpha <= 0.0 or alpha >= 180.0:
            continue
        rows.append(placement_dims(assembly_width_mm, alpha, convention))
    return rows
