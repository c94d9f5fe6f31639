"""Physical constants record.

Natural units hbar = m = c = 1 are the library default; every formula keeps
the symbols so that a non-trivial record can be threaded through unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    m: float = 1.0
    c: float = 1.0

    def __post_init__(self) -> None:
        if not (self.hbar > 0 and self.m > 0 and self.c > 0):
            raise ValueError("hbar, m, c must all be strictly positive")

    @property
    def beta(self) -> float:
        """Dispersion coefficient hbar / (2 m c^3) of the x-evolution."""
        return self.hbar / (2.0 * self.m * self.c**3)

    @property
    def mc3(self) -> float:
        return self.m * self.c**3


NATURAL = PhysicalConstants()
