"""Small value types shared across modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class ComplexPoint:
    """``s = sigma + i t``."""

    sigma: float
    t: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise ValueError("complex point components must be finite")

    def __complex__(self) -> complex:
        return complex(self.sigma, self.t)


SLike = Union[ComplexPoint, complex, float, int]


def as_complex(s: SLike) -> complex:
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex point {z!r}")
    return z


@dataclass(frozen=True)
class EvalResult:
    """A computed value with an error estimate.

    ``error_estimate`` is a rigorous bound unless ``tail_model_used`` is set,
    in which case part of it comes from the fitted growth model of the
    truncated tail. ``truncation_N`` is 0 when no truncation applies.
    """

    value: complex
    error_estimate: float
    tail_model_used: bool = False
    truncation_N: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "error_estimate", float(self.error_estimate))
        if not self.error_estimate >= 0:
            raise ValueError(f"error estimate must be >= 0, got {self.error_estimate}")

    @property
    def real(self) -> float:
        return complex(self.value).real

    def __complex__(self) -> complex:
        return complex(self.value)
