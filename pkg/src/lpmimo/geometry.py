"""Printed log-periodic dipole array (LPDA) geometry: types, synthesis,
validation, and the bundled reference dimensions.

Element lengths are single-arm lengths (a printed dipole spans twice the
arm length).  Adjacent elements obey a constant geometric ratio: each
length and spacing is the ratio times its larger neighbour, with the
ratio confined to (0.78, 0.98).  The substrate is modelled only through
an effective length scale that stretches the electrical length of the
arms; the default 1.23 is calibrated so a 87 mm arm resonates at 700 MHz.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from .constants import C_MM_MHZ, RATIO_MAX, RATIO_MIN
from .errors import GeometryError, SynthesisOverflowError

#: Substrate of the reference prototypes: FR-4, 1.6 mm, tan(d) = 0.03.
#: The effective length scale 1.23 makes the 87 mm reference arm a
#: quarter wave at 700 MHz: (c / (2*700 MHz)) / (2*87 mm) = 1.2307.
DEFAULT_SUBSTRATE_KWARGS = dict(
    relative_permittivity=4.3,
    thickness_mm=1.6,
    loss_tangent=0.03,
    effective_length_scale=1.23,
)

DEFAULT_WIDTH_FACTOR = 0.184  # mean strip-width / arm-length of the LB reference
DEFAULT_ELEMENT_CAP = 64
DEFAULT_WIDTH_MARGIN_MM = 2.0  # footprint width beyond the largest dipole span
DEFAULT_LENGTH_MARGIN_MM = 10.0  # footprint length beyond the boom


@dataclass(frozen=True)
class SubstrateSpec:
    """Dielectric carrier of the printed array."""

    relative_permittivity: float
    thickness_mm: float
    loss_tangent: float
    effective_length_scale: float

    def __post_init__(self):
        if self.relative_permittivity < 1.0:
            raise GeometryError("relative_permittivity must be >= 1")
        if self.thickness_mm <= 0:
            raise GeometryError("substrate thickness must be positive")
        if self.loss_tangent < 0:
            raise GeometryError("loss_tangent must be >= 0")
        if self.effective_length_scale < 1.0:
            raise GeometryError("effective_length_scale must be >= 1")


def default_substrate() -> SubstrateSpec:
    return SubstrateSpec(**DEFAULT_SUBSTRATE_KWARGS)


@dataclass(frozen=True)
class DipoleElement:
    """One printed dipole: arm length, strip width, spacing to the next
    (smaller) element.  The last element of an array has no spacing."""

    arm_length_mm: float
    strip_width_mm: float
    spacing_to_next_mm: float | None = None

    def __post_init__(self):
        if self.arm_length_mm <= 0:
            raise GeometryError(f"arm_length must be positive, got {self.arm_length_mm}")
        if self.strip_width_mm <= 0:
            raise GeometryError(f"strip_width must be positive, got {self.strip_width_mm}")
        if self.strip_width_mm >= self.arm_length_mm:
            raise GeometryError(
                f"strip_width {self.strip_width_mm} must be smaller than "
                f"arm_length {self.arm_length_mm}"
            )
        if self.spacing_to_next_mm is not None and self.spacing_to_next_mm <= 0:
            raise GeometryError(f"spacing must be positive, got {self.spacing_to_next_mm}")


@dataclass(frozen=True)
class BandSpec:
    """Operating band edges in MHz."""

    f_low_mhz: float
    f_high_mhz: float

    def __post_init__(self):
        if not (0 < self.f_low_mhz < self.f_high_mhz):
            raise GeometryError(
                f"band requires 0 < f_low < f_high, got {self.f_low_mhz}..{self.f_high_mhz}"
            )

    @property
    def center_mhz(self) -> float:
        return 0.5 * (self.f_low_mhz + self.f_high_mhz)


@dataclass(frozen=True)
class LpdaGeometry:
    """Ordered dipole elements (largest first) on a substrate.

    ``termination_offset_mm`` holds a trailing boom length past the last
    element (feed/termination region); it contributes to the boom length
    but is excluded from the adjacent-ratio law.
    """

    elements: tuple[DipoleElement, ...]
    substrate: SubstrateSpec
    footprint_length_mm: float
    footprint_width_mm: float
    band_label: str = ""
    termination_offset_mm: float | None = None

    def __post_init__(self):
        if len(self.elements) < 2:
            raise GeometryError(f"need at least 2 elements, got {len(self.elements)}")
        object.__setattr__(self, "elements", tuple(self.elements))
        arms = [e.arm_length_mm for e in self.elements]
        for a, b in zip(arms, arms[1:]):
            if b >= a:
                raise GeometryError("arm lengths must be strictly decreasing")
        for e in self.elements[:-1]:
            if e.spacing_to_next_mm is None:
                raise GeometryError("every element but the last needs spacing_to_next")
        if self.elements[-1].spacing_to_next_mm is not None:
            raise GeometryError("last element must not carry spacing_to_next")
        if self.footprint_length_mm <= 0 or self.footprint_width_mm <= 0:
            raise GeometryError("footprint dimensions must be positive")
        if self.termination_offset_mm is not None and self.termination_offset_mm <= 0:
            raise GeometryError("termination offset must be positive when present")

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def arm_lengths_mm(self) -> list[float]:
        return [e.arm_length_mm for e in self.elements]

    @property
    def strip_widths_mm(self) -> list[float]:
        return [e.strip_width_mm for e in self.elements]

    @property
    def spacings_mm(self) -> list[float]:
        """The n-1 inter-element spacings, largest end first."""
        return [e.spacing_to_next_mm for e in self.elements[:-1]]

    @property
    def element_positions_mm(self) -> list[float]:
        """Boom coordinate of each element, largest element at 0."""
        pos = [0.0]
        for d in self.spacings_mm:
            pos.append(pos[-1] + d)
        return pos

    def to_dict(self) -> dict:
        """JSON-ready representation with explicit unit suffixes."""
        return {
            "band_label": self.band_label,
            "substrate": {
                "relative_permittivity": self.substrate.relative_permittivity,
                "thickness_mm": self.substrate.thickness_mm,
                "loss_tangent": self.substrate.loss_tangent,
                "effective_length_scale": self.substrate.effective_length_scale,
            },
            "elements": [
                {
                    "arm_length_mm": e.arm_length_mm,
                    "strip_width_mm": e.strip_width_mm,
                    **(
                        {"spacing_to_next_mm": e.spacing_to_next_mm}
                        if e.spacing_to_next_mm is not None
                        else {}
                    ),
                }
                for e in self.elements
            ],
            "termination_offset_mm": self.termination_offset_mm,
            "footprint_length_mm": self.footprint_length_mm,
            "footprint_width_mm": self.footprint_width_mm,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LpdaGeometry":
        try:
            sub = data["substrate"]
            elements = tuple(
                DipoleElement(
                    arm_length_mm=e["arm_length_mm"],
                    strip_width_mm=e["strip_width_mm"],
                    spacing_to_next_mm=e.get("spacing_to_next_mm"),
                )
                for e in data["elements"]
            )
            return cls(
                elements=elements,
                substrate=SubstrateSpec(
                    relative_permittivity=sub["relative_permittivity"],
                    thickness_mm=sub["thickness_mm"],
                    loss_tangent=sub["loss_tangent"],
                    effective_length_scale=sub["effective_length_scale"],
                ),
                footprint_length_mm=data["footprint_length_mm"],
                footprint_width_mm=data["footprint_width_mm"],
                band_label=data.get("band_label", ""),
                termination_offset_mm=data.get("termination_offset_mm"),
            )
        except KeyError as exc:
            raise GeometryError(f"geometry document missing key {exc}") from exc


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    measured: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Per-check outcome of :func:`validate` plus ratio statistics."""

    checks: tuple[ValidationCheck, ...]
    length_ratio_min: float
    length_ratio_max: float
    length_ratio_mean: float
    spacing_ratio_min: float | None
    spacing_ratio_max: float | None
    spacing_ratio_mean: float | None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def findings(self) -> tuple[ValidationCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def summary_lines(self) -> list[str]:
        lines = [
            f"length ratio: min {self.length_ratio_min:.4f} "
            f"max {self.length_ratio_max:.4f} mean {self.length_ratio_mean:.4f}"
        ]
        if self.spacing_ratio_mean is not None:
            lines.append(
                f"spacing ratio: min {self.spacing_ratio_min:.4f} "
                f"max {self.spacing_ratio_max:.4f} mean {self.spacing_ratio_mean:.4f}"
            )
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"[{status}] {c.name}" + (f" ({c.detail})" if c.detail else ""))
        return lines


def resonant_frequency_mhz(arm_length_mm: float, effective_length_scale: float) -> float:
    """Frequency at which an arm is an effective quarter wavelength."""
    if arm_length_mm <= 0:
        raise GeometryError("arm length must be positive")
    return C_MM_MHZ / (4.0 * arm_length_mm * effective_length_scale)


def build_geometry(
    largest_arm_mm: float,
    ratio: float,
    n_elements: int,
    first_spacing_mm: float,
    width_factor: float = DEFAULT_WIDTH_FACTOR,
    substrate: SubstrateSpec | None = None,
    band_label: str = "",
    width_margin_mm: float = DEFAULT_WIDTH_MARGIN_MM,
    length_margin_mm: float = DEFAULT_LENGTH_MARGIN_MM,
) -> LpdaGeometry:
    """Construct a ratio-law LPDA directly from its leading dimensions.

    Shared by band synthesis and the optimizer's genome decoding.  The
    footprint is the boom plus a feed margin by the largest dipole span
    plus a lateral margin.
    """
    if not (RATIO_MIN < ratio < RATIO_MAX):
        raise GeometryError(
            f"ratio {ratio} outside ({RATIO_MIN}, {RATIO_MAX})"
        )
    if largest_arm_mm <= 0 or first_spacing_mm <= 0:
        raise GeometryError("largest_arm and first_spacing must be positive")
    if not (0 < width_factor < 1):
        raise GeometryError(f"width_factor {width_factor} must lie in (0, 1)")
    if n_elements < 2:
        raise GeometryError(f"need at least 2 elements, got {n_elements}")
    substrate = substrate or default_substrate()

    arms = [largest_arm_mm * ratio**i for i in range(n_elements)]
    spacings = [first_spacing_mm * ratio**i for i in range(n_elements - 1)]
    elements = tuple(
        DipoleElement(
            arm_length_mm=arm,
            strip_width_mm=width_factor * arm,
            spacing_to_next_mm=spacings[i] if i < n_elements - 1 else None,
        )
        for i, arm in enumerate(arms)
    )
    boom = sum(spacings)
    return LpdaGeometry(
        elements=elements,
        substrate=substrate,
        footprint_length_mm=boom + length_margin_mm,
        footprint_width_mm=2.0 * largest_arm_mm + width_margin_mm,
        band_label=band_label,
    )


def synthesize(
    band: BandSpec,
    ratio: float,
    first_spacing_mm: float,
    substrate: SubstrateSpec | None = None,
    bandwidth_margin: float = 1.4,
    width_factor: float = DEFAULT_WIDTH_FACTOR,
    element_cap: int = DEFAULT_ELEMENT_CAP,
    band_label: str = "",
) -> LpdaGeometry:
    """Synthesize a ratio-law LPDA covering the band.

    The largest arm is sized to an effective quarter wave at the low band
    edge; elements are added until the shortest one resonates at or above
    the high edge times ``bandwidth_margin`` (margin 1.4 reproduces the
    6-element reference layout for 700-900 MHz at ratio 0.885).
    """
    if not (RATIO_MIN < ratio < RATIO_MAX):
        raise GeometryError(f"ratio {ratio} outside ({RATIO_MIN}, {RATIO_MAX})")
    if first_spacing_mm <= 0:
        raise GeometryError("first_spacing must be positive")
    if bandwidth_margin < 1.0:
        raise GeometryError(f"bandwidth_margin {bandwidth_margin} must be >= 1")
    substrate = substrate or default_substrate()

    scale = substrate.effective_length_scale
    largest_arm = (C_MM_MHZ / (2.0 * band.f_low_mhz)) / (2.0 * scale)
    f_top = band.f_high_mhz * bandwidth_margin
    # Element i resonates at f_low / ratio**i; find the smallest count
    # whose last element reaches f_top.
    steps = math.log(f_top / band.f_low_mhz) / -math.log(ratio)
    n = 1 + max(1, math.ceil(steps - 1e-9))
    if n > element_cap:
        raise SynthesisOverflowError(
            f"synthesis needs {n} elements, exceeding the cap of {element_cap}"
        )
    return build_geometry(
        largest_arm_mm=largest_arm,
        ratio=ratio,
        n_elements=n,
        first_spacing_mm=first_spacing_mm,
        width_factor=width_factor,
        substrate=substrate,
        band_label=band_label or f"{band.f_low_mhz:g}-{band.f_high_mhz:g}MHz",
    )


def _ratio_stats(values: list[float]) -> tuple[list[float], float, float, float]:
    ratios = [b / a for a, b in zip(values, values[1:])]
    return ratios, min(ratios), max(ratios), sum(ratios) / len(ratios)


def validate(geometry: LpdaGeometry, ratio_tolerance: float = 0.02) -> ValidationReport:
    """Check the ratio law and footprint invariants; report, never raise.

    A ratio passes when it lies in [0.78 - tol, 0.98 + tol] (bounds
    inclusive: the reference dimensions are quantized to whole
    millimetres, which puts some spacing ratios exactly on the widened
    bound).  The termination offset is excluded from ratio checks.
    """
    lo = RATIO_MIN - ratio_tolerance
    hi = RATIO_MAX + ratio_tolerance
    checks: list[ValidationCheck] = []

    length_ratios, lmin, lmax, lmean = _ratio_stats(geometry.arm_lengths_mm)
    for i, r in enumerate(length_ratios):
        checks.append(
            ValidationCheck(
                name=f"length_ratio[{i}]",
                passed=lo <= r <= hi,
                measured=r,
                detail=f"L{i + 1}/L{i} = {r:.4f}",
            )
        )

    spacings = geometry.spacings_mm
    if len(spacings) >= 2:
        spacing_ratios, smin, smax, smean = _ratio_stats(spacings)
        for i, r in enumerate(spacing_ratios):
            checks.append(
                ValidationCheck(
                    name=f"spacing_ratio[{i}]",
                    passed=lo <= r <= hi,
                    measured=r,
                    detail=f"d{i + 1}/d{i} = {r:.4f}",
                )
            )
    else:
        smin = smax = smean = None

    span = 2.0 * max(geometry.arm_lengths_mm)
    checks.append(
        ValidationCheck(
            name="footprint_width_covers_largest_dipole",
            passed=geometry.footprint_width_mm >= span - 1e-6,
            measured=geometry.footprint_width_mm,
            detail=f"W = {geometry.footprint_width_mm:g} mm vs span {span:g} mm",
        )
    )
    boom = boom_length(geometry)
    checks.append(
        ValidationCheck(
            name="footprint_length_covers_boom",
            passed=geometry.footprint_length_mm >= boom - 1e-6,
            measured=geometry.footprint_length_mm,
            detail=f"L = {geometry.footprint_length_mm:g} mm vs boom {boom:g} mm",
        )
    )

    return ValidationReport(
        checks=tuple(checks),
        length_ratio_min=lmin,
        length_ratio_max=lmax,
        length_ratio_mean=lmean,
        spacing_ratio_min=smin,
        spacing_ratio_max=smax,
        spacing_ratio_mean=smean,
    )


def boom_length(geometry: LpdaGeometry) -> float:
    """Total boom length: all spacings plus the termination offset."""
    total = sum(geometry.spacings_mm)
    if geometry.termination_offset_mm is not None:
        total += geometry.termination_offset_mm
    return total


def reference_fixture(band_label: str) -> LpdaGeometry:
    """Bundled reference dimensions of the fabricated LB/HB prototypes."""
    label = band_label.upper()
    if label not in ("LB", "HB"):
        raise GeometryError(f"unknown fixture label {band_label!r}; expected 'LB' or 'HB'")
    path = resources.files("lpmimo.fixtures").joinpath(f"reference_{label.lower()}.json")
    with path.open("r", encoding="utf-8") as fh:
        return LpdaGeometry.from_dict(json.load(fh))
