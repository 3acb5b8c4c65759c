"""Frequency-unit conventions.

All internal computation uses angular frequency in rad/ms, with time in
ms.  Experimental cavity parameters are conventionally quoted in units
of 2pi x kHz; since 1 kHz = 1/ms, one unit of 2pi x kHz is exactly
2pi rad/ms.  Rates of a few 2pi x kHz then give O(10-100) rad/ms drift
coefficients and O(1-10) ms dynamics, which keeps all numbers
well-conditioned.
"""

import enum
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


class FrequencyUnit(enum.Enum):
    TWO_PI_KHZ = "two-pi-kilohertz"
    RAD_PER_MS = "rad-per-ms"


def twopi_khz_to_rad_per_ms(value):
    """Convert a frequency quoted as 2pi x kHz to rad/ms."""
    return value * TWO_PI


def rad_per_ms_to_twopi_khz(value):
    """Convert an angular frequency in rad/ms to units of 2pi x kHz."""
    return value / TWO_PI


@dataclass(frozen=True)
class UnitConvention:
    """Declares the unit a frequency value is expressed in."""

    frequency_unit: FrequencyUnit = FrequencyUnit.TWO_PI_KHZ

    def to_internal(self, value):
        """Convert ``value`` from this convention to rad/ms."""
        if self.frequency_unit is FrequencyUnit.TWO_PI_KHZ:
            return twopi_khz_to_rad_per_ms(value)
        return value

    def from_internal(self, value):
        """Convert ``value`` from rad/ms back to this convention."""
        if self.frequency_unit is FrequencyUnit.TWO_PI_KHZ:
            return rad_per_ms_to_twopi_khz(value)
        return value
