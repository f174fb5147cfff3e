"""Shared physical constants and unit conventions.

Units are fixed across the package: lengths in millimeters, frequencies
in megahertz, angles in degrees at every public interface (radians only
inside formulas).
"""

import math

# Speed of light in mm*MHz (= 2.99792458e8 m/s expressed in mm and MHz).
C_MM_MHZ = 299_792.458

# Free-space wave impedance in ohms.
ETA_0 = 119.9169832 * math.pi

# Allowed range for the log-periodic geometric ratio between adjacent
# element lengths and spacings (open interval).
RATIO_MIN = 0.78
RATIO_MAX = 0.98


def wavelength_mm(frequency_mhz: float) -> float:
    """Free-space wavelength in mm for a frequency in MHz."""
    if frequency_mhz <= 0:
        raise ValueError(f"frequency must be positive, got {frequency_mhz}")
    return C_MM_MHZ / frequency_mhz


def wavenumber_per_mm(frequency_mhz: float) -> float:
    """Free-space wavenumber k = 2*pi/lambda in rad/mm."""
    return 2.0 * math.pi / wavelength_mm(frequency_mhz)
