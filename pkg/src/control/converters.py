from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AdcQuantizer:
    """
    Mid-tread quantizer for the PSD ratio over the full scale [-1, 1].
    The quantum is 2 / 2^bits ratio units.
    """
    bits: int = 12

    @property
    def quantum(self) -> float:
        return 2.0 / 2 ** self.bits

    @property
    def code_range(self):
        return -(2 ** (self.bits - 1)), 2 ** (self.bits - 1) - 1

    def code(self, r: float) -> int:
        lo, hi = self.code_range
        return int(np.clip(np.floor(r / self.quantum + 0.5), lo, hi))

    def ratio(self, code: int) -> float:
        return code * self.quantum


@dataclass(frozen=True)
class DacConverter:
    """Affine drive map from DAC level to commanded lens power over [power_min, power_max]."""
    bits: int
    power_min_diopter: float
    power_max_diopter: float

    @property
    def max_level(self) -> int:
        return 2 ** self.bits - 1

    @property
    def diopter_per_level(self) -> float:
        return (self.power_max_diopter - self.power_min_diopter) / self.max_level

    def to_power(self, level: float) -> float:
        return self.power_min_diopter + self.diopter_per_level * level

    def level_for_power(self, power_diopter: float) -> float:
        return (power_diopter - self.power_min_diopter) / self.diopter_per_level
