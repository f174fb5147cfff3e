"""Desk-scale electromagnetic surrogate for printed LPDAs.

The model follows the classic network treatment of log-periodic dipole
arrays: every element carries a sinusoidal current distribution, the
element-to-element coupling is the induced-EMF impedance matrix, and the
transposed two-wire feeder is a chain of ideal transmission-line
two-ports with a polarity flip per section.  Solving the combined nodal
system for a unit feed current yields base currents, input impedance,
and, by superposition of element patterns, the far field.

Coordinate conventions for far fields: the boom lies along +x with the
largest element at the origin, so the beam of a healthy LPDA points
toward +x (theta = 90 deg, phi = 0).  Element arms run along z unless an
axis tilt about the boom is requested (tilt is positive toward -y, which
makes a +45 deg tilt align with the +45 deg slant polarization basis).

Substrate loading is modelled solely by stretching the electrical arm
length by the substrate's effective length scale; feeder sections and
free-space propagation use physical dimensions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .constants import C_MM_MHZ, ETA_0, wavenumber_per_mm
from .errors import GeometryError, SingularSystemError
from .geometry import LpdaGeometry

_QUAD_EPSABS = 1e-9
_QUAD_EPSREL = 1e-8
_QUAD_LIMIT = 200
_SIN_KH_FLOOR = 1e-9  # full-wave element resonance guard


@dataclass(frozen=True)
class FrequencySweep:
    """Strictly increasing list of sweep frequencies in MHz."""

    points_mhz: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points_mhz)
        if not pts:
            raise ValueError("sweep must contain at least one frequency")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("sweep frequencies must be strictly increasing")
        if pts[0] <= 0:
            raise ValueError("sweep frequencies must be positive")
        object.__setattr__(self, "points_mhz", pts)

    @classmethod
    def from_range(cls, start_mhz: float, stop_mhz: float, step_mhz: float) -> "FrequencySweep":
        if step_mhz <= 0:
            raise ValueError("sweep step must be positive")
        n = int(round((stop_mhz - start_mhz) / step_mhz))
        pts = [start_mhz + i * step_mhz for i in range(n + 1)]
        return cls(tuple(p for p in pts if p <= stop_mhz + 1e-9))

    def __len__(self) -> int:
        return len(self.points_mhz)

    def __iter__(self):
        return iter(self.points_mhz)


@dataclass(frozen=True)
class ImpedanceMatrix:
    """Dense element impedance matrix (ohms); reciprocity makes it
    symmetric up to quadrature noise."""

    order: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (self.order, self.order):
            raise ValueError("entries must be a dense square matrix of the given order")

    def max_asymmetry(self) -> float:
        """Largest relative deviation from Z_ij = Z_ji."""
        z = self.entries
        denom = max(np.abs(z).max(), 1e-30)
        return float(np.abs(z - z.T).max() / denom)


@dataclass(frozen=True)
class DriveSolution:
    """Element base currents and feed-point impedance at one frequency."""

    base_currents: np.ndarray
    input_impedance: complex
    frequency_mhz: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.base_currents)):
            raise SingularSystemError(self.frequency_mhz, "non-finite base currents")
        if not np.any(self.base_currents != 0):
            raise SingularSystemError(self.frequency_mhz, "all base currents vanished")


@dataclass(frozen=True)
class FarFieldPattern:
    """Complex E_theta/E_phi samples on a regular spherical grid at one
    frequency.  theta spans [0, 180] inclusive; phi spans [0, 360)."""

    frequency_mhz: float
    theta_deg: np.ndarray
    phi_deg: np.ndarray
    e_theta: np.ndarray
    e_phi: np.ndarray

    def __post_init__(self):
        nt, np_ = len(self.theta_deg), len(self.phi_deg)
        if self.e_theta.shape != (nt, np_) or self.e_phi.shape != (nt, np_):
            raise ValueError("field sample shapes must match the grid")
        if abs(self.theta_deg[0]) > 1e-9 or abs(self.theta_deg[-1] - 180.0) > 1e-9:
            raise ValueError("theta grid must cover [0, 180]")
        if self.phi_deg[0] < 0 or self.phi_deg[-1] >= 360.0:
            raise ValueError("phi grid must cover [0, 360)")

    def power(self) -> np.ndarray:
        """Radiation intensity up to a constant: |E_theta|^2 + |E_phi|^2."""
        return np.abs(self.e_theta) ** 2 + np.abs(self.e_phi) ** 2

    @property
    def grid_step_deg(self) -> float:
        return float(self.theta_deg[1] - self.theta_deg[0])


def pattern_grid(grid_step_deg: float) -> tuple[np.ndarray, np.ndarray]:
    """Regular (theta, phi) grid; the step must divide 180 evenly."""
    n = 180.0 / grid_step_deg
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"grid step {grid_step_deg} must divide 180 evenly")
    theta = np.linspace(0.0, 180.0, int(round(n)) + 1)
    phi = np.arange(0.0, 360.0, grid_step_deg)
    return theta, phi


def equivalent_radius(strip_width_mm: float) -> float:
    """Equivalent round-wire radius of a flat strip: width / 4."""
    if strip_width_mm <= 0:
        raise GeometryError(f"strip width must be positive, got {strip_width_mm}")
    return strip_width_mm / 4.0


def _emf_kernel(z, k, h_src, d):
    """Axial near-field factor of a sinusoidal-current dipole.

    Parallel-in-z field at lateral distance d from a source dipole of
    half-length h_src, as used by the induced-EMF coupling integral.
    """
    r0 = np.hypot(d, z)
    r1 = np.hypot(d, z - h_src)
    r2 = np.hypot(d, z + h_src)
    return (
        np.exp(-1j * k * r1) / r1
        + np.exp(-1j * k * r2) / r2
        - 2.0 * math.cos(k * h_src) * np.exp(-1j * k * r0) / r0
    )


def _emf_coupling(h_obs_mm: float, h_src_mm: float, d_mm: float, k: float) -> complex:
    """Induced-EMF impedance between parallel co-centred sinusoidal
    dipoles (half-lengths h_obs/h_src, lateral separation d), by adaptive
    quadrature of the coupling integral."""
    sin_obs = math.sin(k * h_obs_mm)
    sin_src = math.sin(k * h_src_mm)
    if min(abs(sin_obs), abs(sin_src)) < _SIN_KH_FLOOR:
        raise SingularSystemError(
            k * C_MM_MHZ / (2.0 * math.pi),
            "element at full-wave resonance (sin(kh) ~ 0)",
        )

    def integrand(z):
        return math.sin(k * (h_obs_mm - z)) * _emf_kernel(z, k, h_src_mm, d_mm)

    # The integrand is even in z; integrate the positive half and double.
    # Break near z = 0 where the r0 term peaks for small separations.
    breaks = sorted({min(10.0 * d_mm, 0.5 * h_obs_mm), min(h_src_mm, h_obs_mm)})
    points = [b for b in breaks if 0 < b < h_obs_mm]
    re, _ = integrate.quad(
        lambda z: integrand(z).real, 0.0, h_obs_mm,
        points=points, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=_QUAD_LIMIT,
    )
    im, _ = integrate.quad(
        lambda z: integrand(z).imag, 0.0, h_obs_mm,
        points=points, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=_QUAD_LIMIT,
    )
    prefactor = 1j * ETA_0 / (4.0 * math.pi * sin_src * sin_obs)
    return prefactor * 2.0 * (re + 1j * im)


def self_impedance(arm_length_mm: float, radius_mm: float, frequency_mhz: float) -> complex:
    """Self-impedance of a centre-fed sinusoidal-current dipole.

    The current filament sits on the axis and the field is evaluated on
    the wire surface, so the wire radius sets the reactance offset.
    """
    if frequency_mhz <= 0:
        raise GeometryError(f"frequency must be positive, got {frequency_mhz}")
    if arm_length_mm <= 0 or radius_mm <= 0:
        raise GeometryError("arm length and radius must be positive")
    if arm_length_mm / radius_mm < 10.0:
        warnings.warn(
            f"arm/radius = {arm_length_mm / radius_mm:.1f} < 10; "
            "thin-wire model accuracy degrades",
            stacklevel=2,
        )
    k = wavenumber_per_mm(frequency_mhz)
    return _emf_coupling(arm_length_mm, arm_length_mm, radius_mm, k)


def mutual_impedance(
    arm_a_mm: float, arm_b_mm: float, separation_mm: float, frequency_mhz: float
) -> complex:
    """Mutual impedance of two parallel side-by-side sinusoidal dipoles
    with co-centred arms (the LPDA layout)."""
    if frequency_mhz <= 0:
        raise GeometryError(f"frequency must be positive, got {frequency_mhz}")
    if separation_mm <= 0:
        raise GeometryError(f"separation must be positive, got {separation_mm}")
    if arm_a_mm <= 0 or arm_b_mm <= 0:
        raise GeometryError("arm lengths must be positive")
    k = wavenumber_per_mm(frequency_mhz)
    return _emf_coupling(arm_a_mm, arm_b_mm, separation_mm, k)


@dataclass(frozen=True)
class FeederSection:
    """One transposed two-wire line section between adjacent element
    bases: an ideal lossless line of the section length with a polarity
    flip folded in."""

    length_mm: float
    char_impedance_ohm: float
    frequency_mhz: float

    @property
    def electrical_length_rad(self) -> float:
        return wavenumber_per_mm(self.frequency_mhz) * self.length_mm

    def abcd(self) -> np.ndarray:
        """Chain matrix; a zero-length section degenerates to an identity
        two-port with the polarity flip."""
        bl = self.electrical_length_rad
        z0 = self.char_impedance_ohm
        line = np.array(
            [
                [math.cos(bl), 1j * z0 * math.sin(bl)],
                [1j * math.sin(bl) / z0, math.cos(bl)],
            ],
            dtype=complex,
        )
        return -line  # transposition: both port-2 quantities reverse sign

    def y_parameters(self) -> tuple[complex, complex]:
        """(diagonal, off-diagonal) nodal admittance contributions."""
        bl = self.electrical_length_rad
        s = math.sin(bl)
        if abs(s) < 1e-12:
            raise SingularSystemError(
                self.frequency_mhz, f"feeder section of {self.length_mm:g} mm is resonant"
            )
        y0 = 1.0 / self.char_impedance_ohm
        y_diag = -1j * y0 * math.cos(bl) / s
        y_off = -1j * y0 / s  # sign already includes the transposition
        return y_diag, y_off


@dataclass(frozen=True)
class FeederNetwork:
    """The transposed feeder as nodal admittance between element bases.

    Node order matches the element order (largest element first); the
    feed sits at the last node.  The large-element end is left open by
    default; a short there is approximated by a large shunt admittance.
    """

    sections: tuple[FeederSection, ...]
    termination: str = "open"

    def __post_init__(self):
        if self.termination not in ("open", "short"):
            raise ValueError(f"unknown termination {self.termination!r}")

    def admittance_matrix(self) -> np.ndarray:
        n = len(self.sections) + 1
        y = np.zeros((n, n), dtype=complex)
        for i, sec in enumerate(self.sections):
            y_diag, y_off = sec.y_parameters()
            y[i, i] += y_diag
            y[i + 1, i + 1] += y_diag
            y[i, i + 1] += y_off
            y[i + 1, i] += y_off
        if self.termination == "short":
            y[0, 0] += 1e9
        return y


def feeder_network(
    geometry: LpdaGeometry,
    feeder_z0_ohm: float,
    frequency_mhz: float,
    termination: str = "open",
) -> FeederNetwork:
    """Build the transposed feeder chain for an array geometry."""
    if feeder_z0_ohm <= 0:
        raise GeometryError(f"feeder impedance must be positive, got {feeder_z0_ohm}")
    sections = tuple(
        FeederSection(length_mm=d, char_impedance_ohm=feeder_z0_ohm, frequency_mhz=frequency_mhz)
        for d in geometry.spacings_mm
    )
    return FeederNetwork(sections=sections, termination=termination)


def _element_arrays(geometry: LpdaGeometry) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(effective arm lengths, radii, boom positions) in mm."""
    scale = geometry.substrate.effective_length_scale
    h_eff = np.array([e.arm_length_mm * scale for e in geometry.elements])
    radii = np.array([equivalent_radius(e.strip_width_mm) for e in geometry.elements])
    positions = np.array(geometry.element_positions_mm)
    return h_eff, radii, positions


def impedance_matrix_elements(
    h_eff_mm: np.ndarray, radii_mm: np.ndarray, positions_mm: np.ndarray, frequency_mhz: float
) -> ImpedanceMatrix:
    """Dense induced-EMF impedance matrix for arbitrary element arrays.

    Every entry is evaluated by its own quadrature (both triangles), so
    reciprocity holds only up to integration error.
    """
    k = wavenumber_per_mm(frequency_mhz)
    n = len(h_eff_mm)
    z = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if i == j:
                z[i, j] = _emf_coupling(h_eff_mm[i], h_eff_mm[i], radii_mm[i], k)
            else:
                d = abs(positions_mm[i] - positions_mm[j])
                z[i, j] = _emf_coupling(h_eff_mm[i], h_eff_mm[j], d, k)
    return ImpedanceMatrix(order=n, entries=z)


def impedance_matrix(geometry: LpdaGeometry, frequency_mhz: float) -> ImpedanceMatrix:
    """Element impedance matrix of an LPDA with substrate length scaling."""
    h_eff, radii, positions = _element_arrays(geometry)
    return impedance_matrix_elements(h_eff, radii, positions, frequency_mhz)


def solve_drive_elements(
    h_eff_mm: np.ndarray,
    radii_mm: np.ndarray,
    positions_mm: np.ndarray,
    frequency_mhz: float,
    feeder_z0_ohm: float = 100.0,
    termination: str = "open",
) -> DriveSolution:
    """Solve the coupled element/feeder system for a unit feed current.

    The feed is at the last element (the small end).  With a single
    element and no feeder sections the input impedance degenerates to
    that element's self-impedance.
    """
    if frequency_mhz <= 0:
        raise GeometryError(f"frequency must be positive, got {frequency_mhz}")
    if feeder_z0_ohm <= 0:
        raise GeometryError(f"feeder impedance must be positive, got {feeder_z0_ohm}")
    n = len(h_eff_mm)
    z = impedance_matrix_elements(h_eff_mm, radii_mm, positions_mm, frequency_mhz).entries
    try:
        y_total = np.linalg.inv(z)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(frequency_mhz, f"impedance matrix: {exc}") from exc
    y_antenna = y_total.copy()
    if termination not in ("open", "short"):
        raise ValueError(f"unknown termination {termination!r}")
    if n > 1:
        for i in range(n - 1):
            d = positions_mm[i + 1] - positions_mm[i]
            sec = FeederSection(d, feeder_z0_ohm, frequency_mhz)
            y_diag, y_off = sec.y_parameters()
            y_total[i, i] += y_diag
            y_total[i + 1, i + 1] += y_diag
            y_total[i, i + 1] += y_off
            y_total[i + 1, i] += y_off
        if termination == "short":
            y_total[0, 0] += 1e9
    rhs = np.zeros(n, dtype=complex)
    rhs[-1] = 1.0
    try:
        v = np.linalg.solve(y_total, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(frequency_mhz, str(exc)) from exc
    residual = np.linalg.norm(y_total @ v - rhs) / np.linalg.norm(rhs)
    if not residual < 1e-10:
        raise SingularSystemError(frequency_mhz, f"solve residual {residual:.2e}")
    currents = y_antenna @ v
    return DriveSolution(
        base_currents=currents,
        input_impedance=complex(v[-1]),
        frequency_mhz=frequency_mhz,
    )


def solve_drive(
    geometry: LpdaGeometry,
    frequency_mhz: float,
    feeder_z0_ohm: float = 100.0,
    termination: str = "open",
) -> DriveSolution:
    """Drive an LPDA geometry at one frequency; see solve_drive_elements."""
    h_eff, radii, positions = _element_arrays(geometry)
    return solve_drive_elements(
        h_eff, radii, positions, frequency_mhz, feeder_z0_ohm, termination
    )


def s11(input_impedance: complex, reference_ohm: float = 50.0) -> complex:
    """Reflection coefficient (Z - Z0) / (Z + Z0)."""
    if reference_ohm <= 0:
        raise ValueError(f"reference impedance must be positive, got {reference_ohm}")
    denom = input_impedance + reference_ohm
    if denom == 0:
        raise ZeroDivisionError("reflection coefficient pole: Z = -Z0 exactly")
    return (input_impedance - reference_ohm) / denom


def s11_db(gamma: complex) -> float:
    """Reflection magnitude in dB, floored at -200 dB for perfect matches."""
    mag = abs(gamma)
    if mag < 1e-10:
        return -200.0
    return 20.0 * math.log10(mag)


def far_field_elements(
    base_currents: np.ndarray,
    h_eff_mm: np.ndarray,
    positions_mm: np.ndarray,
    frequency_mhz: float,
    grid_step_deg: float = 1.0,
    axis_tilt_deg: float = 0.0,
) -> FarFieldPattern:
    """Superpose sinusoidal-dipole element patterns on a spherical grid.

    Arms run along z tilted by ``axis_tilt_deg`` about the boom (+x)
    toward -y; element phase centres sit at ``positions_mm`` along x.
    Fields are unnormalized but on one consistent linear scale.
    """
    theta_deg, phi_deg = pattern_grid(grid_step_deg)
    k = wavenumber_per_mm(frequency_mhz)
    theta = np.radians(theta_deg)[:, None]
    phi = np.radians(phi_deg)[None, :]
    tau = math.radians(axis_tilt_deg)

    sin_t, cos_t = np.sin(theta), np.cos(theta)
    sin_p, cos_p = np.sin(phi), np.cos(phi)
    # Element axis u = (0, -sin tau, cos tau); direction cosines on the grid.
    cos_psi = cos_t * math.cos(tau) - sin_t * sin_p * math.sin(tau)
    sin2_psi = np.maximum(1.0 - cos_psi**2, 0.0)
    u_dot_theta = -math.sin(tau) * cos_t * sin_p - math.cos(tau) * sin_t
    u_dot_phi = -math.sin(tau) * cos_p * np.ones_like(sin_t)

    e_theta = np.zeros(cos_psi.shape, dtype=complex)
    e_phi = np.zeros(cos_psi.shape, dtype=complex)
    singular = sin2_psi < 1e-12
    safe_sin2 = np.where(singular, 1.0, sin2_psi)

    for amp, h, x in zip(base_currents, h_eff_mm, positions_mm):
        kh = k * h
        sin_kh = math.sin(kh)
        if abs(sin_kh) < _SIN_KH_FLOOR:
            raise SingularSystemError(frequency_mhz, "element at full-wave resonance")
        shape = (np.cos(kh * cos_psi) - math.cos(kh)) / safe_sin2
        shape = np.where(singular, 0.0, shape)
        phase = np.exp(1j * k * x * sin_t * cos_p)
        weight = amp / sin_kh
        e_theta += weight * shape * u_dot_theta * phase
        e_phi += weight * shape * u_dot_phi * phase

    return FarFieldPattern(
        frequency_mhz=frequency_mhz,
        theta_deg=theta_deg,
        phi_deg=phi_deg,
        e_theta=e_theta,
        e_phi=e_phi,
    )


def far_field(
    solution: DriveSolution,
    geometry: LpdaGeometry,
    grid_step_deg: float = 1.0,
    axis_tilt_deg: float = 0.0,
) -> FarFieldPattern:
    """Far field of a driven LPDA; beam points toward the small end (+x)."""
    h_eff, _, positions = _element_arrays(geometry)
    return far_field_elements(
        solution.base_currents,
        h_eff,
        positions,
        solution.frequency_mhz,
        grid_step_deg=grid_step_deg,
        axis_tilt_deg=axis_tilt_deg,
    )
