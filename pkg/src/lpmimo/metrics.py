"""Scalar radiation metrics computed from sampled far-field patterns.

All metrics work on the raw complex samples of a FarFieldPattern; nothing
here re-runs the solver.  Boresight is the grid argmax of total radiated
power, with ties broken toward the smallest theta and then the smallest
phi (the C-order argmax does exactly that).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .em import FarFieldPattern

DEFAULT_EFFICIENCY = 0.85  # FR-4 loss proxy for realized-gain reporting

_HALF_POWER = 0.5


@dataclass(frozen=True)
class SlantDecomposition:
    """Fields re-expressed in the +45/-45 deg linear polarization basis.

    co_pol is the +45 deg component (E_theta + E_phi)/sqrt(2), cross_pol
    the -45 deg component (E_phi - E_theta)/sqrt(2); the rotation is
    unitary, so co and cross powers sum to the total at every sample.
    """

    co_pol: np.ndarray
    cross_pol: np.ndarray
    cross_pol_ratio_db: float


@dataclass(frozen=True)
class PatternMetrics:
    directivity_dbi: float
    realized_gain_dbi: float
    hpbw_e_deg: float
    hpbw_h_deg: float
    front_to_back_db: float
    cross_pol_db: float
    boresight_theta_deg: float
    boresight_phi_deg: float


def boresight_indices(pattern: FarFieldPattern) -> tuple[int, int]:
    """(theta, phi) grid indices of the strongest sample."""
    power = pattern.power()
    if not np.any(power > 0.0):
        raise ValueError("all-zero pattern has no boresight")
    it, ip = np.unravel_index(int(np.argmax(power)), power.shape)
    return int(it), int(ip)


def radiated_power(pattern: FarFieldPattern) -> float:
    """Total radiated power integral with sin(theta) weighting.

    Trapezoidal in theta; phi is periodic, so the [0, 360) samples are
    closed with the wrap column before the trapezoid.
    """
    u = pattern.power()
    theta = np.radians(pattern.theta_deg)
    phi = np.radians(np.append(pattern.phi_deg, 360.0))
    u_closed = np.concatenate([u, u[:, :1]], axis=1)
    per_phi = np.trapezoid(u_closed * np.sin(theta)[:, None], x=theta, axis=0)
    return float(np.trapezoid(per_phi, x=phi))


def directivity(pattern: FarFieldPattern) -> float:
    """Boresight directivity in dBi: 4 pi U_max over the radiated power."""
    it, ip = boresight_indices(pattern)
    u_max = float(pattern.power()[it, ip])
    total = radiated_power(pattern)
    if total <= 0.0:
        raise ValueError("pattern radiates no power")
    return 10.0 * math.log10(4.0 * math.pi * u_max / total)


def realized_gain(
    directivity_dbi: float, s11: complex = 0j, efficiency: float = DEFAULT_EFFICIENCY
) -> float:
    """Directivity reduced by radiation efficiency and mismatch loss."""
    if not 0.0 < efficiency <= 1.0:
        raise ValueError(f"efficiency must be in (0, 1], got {efficiency}")
    mag2 = abs(s11) ** 2
    if mag2 >= 1.0:
        raise ValueError(f"|s11| = {abs(s11):.3f} >= 1 reflects all power")
    return directivity_dbi + 10.0 * math.log10(efficiency) + 10.0 * math.log10(1.0 - mag2)


def _crossing(prev_power: float, power: float, step_deg: float) -> float:
    """Angular offset past the previous sample where power crosses half,
    interpolated linearly in dB."""
    lo = max(power, 1e-300)
    hi = max(prev_power, 1e-300)
    frac = (math.log10(hi) - math.log10(_HALF_POWER)) / (math.log10(hi) - math.log10(lo))
    return frac * step_deg


def _walk_phi(row: np.ndarray, start: int, direction: int, step_deg: float) -> float:
    """First half-power crossing along a periodic phi cut, in degrees from
    the start sample; NaN when the cut never drops below half."""
    n = len(row)
    for s in range(1, n):
        v = row[(start + direction * s) % n]
        if v < _HALF_POWER:
            prev = row[(start + direction * (s - 1)) % n]
            return (s - 1) * step_deg + _crossing(prev, v, step_deg)
    return math.nan


def _walk_theta(
    forward: np.ndarray, backward: np.ndarray, start: int, direction: int, step_deg: float
) -> float:
    """First half-power crossing along a great-circle theta cut.

    The cut continues across the poles onto the antipodal phi column
    (``backward``); the walk spans a full half-turn at most.
    """
    n = len(forward)

    def sample(offset: int) -> float:
        t = start + direction * offset
        if t >= n:
            t = 2 * (n - 1) - t
            col = backward
        elif t < 0:
            t = -t
            col = backward
        else:
            col = forward
        return float(col[t])

    limit = int(round(180.0 / step_deg))
    for s in range(1, limit + 1):
        v = sample(s)
        if v < _HALF_POWER:
            return (s - 1) * step_deg + _crossing(sample(s - 1), v, step_deg)
    return math.nan


def hpbw(pattern: FarFieldPattern, plane: str) -> float:
    """Half-power beamwidth in the E or H principal cut, in degrees.

    Walks outward from boresight and takes the first -3 dB crossing on
    each side (robust to sidelobes re-crossing the level), interpolating
    linearly in dB between grid samples.  A cut that never drops below
    half power yields NaN rather than an error.
    """
    if plane not in ("E", "H"):
        raise ValueError(f"plane must be 'E' or 'H', got {plane!r}")
    it, ip = boresight_indices(pattern)
    power = pattern.power()
    peak = float(power[it, ip])
    step = pattern.grid_step_deg

    if plane == "H":
        row = power[it, :] / peak
        up = _walk_phi(row, ip, +1, step)
        down = _walk_phi(row, ip, -1, step)
    else:
        n_phi = power.shape[1]
        if n_phi % 2:
            raise ValueError("E-plane cut needs an even number of phi samples")
        ip_back = (ip + n_phi // 2) % n_phi
        forward = power[:, ip] / peak
        backward = power[:, ip_back] / peak
        up = _walk_theta(forward, backward, it, +1, step)
        down = _walk_theta(forward, backward, it, -1, step)
    return up + down


def front_to_back(pattern: FarFieldPattern) -> float:
    """Boresight power over the antipodal-direction power, in dB."""
    it, ip = boresight_indices(pattern)
    power = pattern.power()
    n_theta, n_phi = power.shape
    if n_phi % 2:
        raise ValueError("front/back lookup needs an even number of phi samples")
    back = power[(n_theta - 1) - it, (ip + n_phi // 2) % n_phi]
    if back == 0.0:
        return math.inf
    return 10.0 * math.log10(power[it, ip] / back)


def slant_components(pattern: FarFieldPattern) -> SlantDecomposition:
    """Decompose the field into the +/-45 deg linear basis.

    The ratio is boresight co-pol power over cross-pol power in dB;
    a field already aligned with +45 deg gives +inf (no cross-pol).
    """
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    co = (pattern.e_theta + pattern.e_phi) * inv_sqrt2
    cross = (pattern.e_phi - pattern.e_theta) * inv_sqrt2
    it, ip = boresight_indices(pattern)
    co_p = abs(co[it, ip]) ** 2
    cross_p = abs(cross[it, ip]) ** 2
    if cross_p == 0.0:
        ratio = math.inf if co_p > 0.0 else 0.0
    elif co_p == 0.0:
        ratio = -math.inf
    else:
        ratio = 10.0 * math.log10(co_p / cross_p)
    return SlantDecomposition(co_pol=co, cross_pol=cross, cross_pol_ratio_db=ratio)


def pattern_metrics(
    pattern: FarFieldPattern,
    s11: complex = 0j,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> PatternMetrics:
    """Bundle of all scalar metrics for one pattern.

    ``s11`` feeds only the realized-gain mismatch term; pass the actual
    reflection coefficient when the drive solution is available.
    """
    it, ip = boresight_indices(pattern)
    d = directivity(pattern)
    return PatternMetrics(
        directivity_dbi=d,
        realized_gain_dbi=realized_gain(d, s11, efficiency),
        hpbw_e_deg=hpbw(pattern, "E"),
        hpbw_h_deg=hpbw(pattern, "H"),
        front_to_back_db=front_to_back(pattern),
        cross_pol_db=slant_components(pattern).cross_pol_ratio_db,
        boresight_theta_deg=float(pattern.theta_deg[it]),
        boresight_phi_deg=float(pattern.phi_deg[ip]),
    )
