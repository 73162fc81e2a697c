"""Left-continuous step functions, their damped versions and total variation.

The damped function is ``rho(x) = f(e^x) * exp(-alpha x)`` where ``f`` is the
partial-sum step function of an :class:`ArithmeticFunction`. It is stored
symbolically: jump points ``lambda_k = log a_k`` and plateau constants
``c_k = f(a_k+)``. Nothing is sampled on a grid.

On this class ``rho`` only rises at jumps and only falls between them, so the
total variation on ``[0, x]`` splits into total rise ``R(x)`` (sum of jump
sizes before ``x``) plus total fall ``R(x) - rho(x)``, giving
``T(x) = 2 R(x) - rho(x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from ._summation import compensated_cumsum
from .arithfun import ArithmeticFunction
from .errors import DomainError

MAX_SUBDIVISION_POINTS = 2048
_EPS_SCALE = 2.0**-40


@dataclass(frozen=True, eq=False)
class StepFunction:
    """``f(x) = sum_{1 <= n < x} chi(n)`` on ``[1, N + 1]``.

    ``jumps[k]`` is the k-th jump location ``a_k`` and ``values[k]`` the
    plateau ``f(a_k+)`` right after it. Only positive ``chi`` values create
    jumps, so both arrays are strictly increasing.
    """

    chi: ArithmeticFunction

    @property
    def jumps(self) -> np.ndarray:
        return self.chi.support

    @property
    def values(self) -> np.ndarray:
        return self.chi.cumulative[1:]

    @property
    def N(self) -> int:
        return self.chi.N

    @property
    def upper(self) -> float:
        return self.chi.upper

    def eval_left(self, x):
        return self.chi.partial_sum(x)

    def eval_right(self, x):
        """Right limit ``f(x+)``."""
        xa = np.asarray(x, dtype=np.float64)
        if np.any(xa < 1) or np.any(xa >= self.upper) or np.any(np.isnan(xa)):
            raise DomainError(f"x must lie in [1, {self.upper})")
        k = np.searchsorted(self.jumps, xa, side="right")
        out = self.chi.cumulative[k]
        return float(out) if np.ndim(out) == 0 else out

    def total_variation(self, x) -> float:
        """``T_f(x) = f(x) - f(1)``; ``f`` is nondecreasing and ``f(1) = 0``."""
        return self.eval_left(x)


def eval_left(f: StepFunction, x):
    """Left-continuous value of ``f`` at ``x``; at a jump, the pre-jump plateau.

    Raises:
        DomainError: outside ``[1, N + 1]``.
    """
    return f.eval_left(x)


@dataclass(frozen=True, eq=False)
class ExpDecayStepFunction:
    """``rho(x) = f(e^x) exp(-alpha x)`` for ``x >= 0``.

    Attributes:
        base: The undamped step function ``f``.
        alpha: Damping exponent, ``> 0``.
        lambdas: Jump points ``log a_k`` as stored floats. Evaluating exactly
            at a stored ``lambda_k`` returns the left limit.
        jump_sizes: ``chi(a_k) a_k^-alpha``, the upward jump at ``lambda_k``.
        rise: ``rise[k]`` is the sum of the first ``k`` jump sizes.
    """

    base: StepFunction
    alpha: float
    lambdas: np.ndarray = field(init=False, repr=False)
    jump_sizes: np.ndarray = field(init=False, repr=False)
    rise: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be a finite positive real, got {self.alpha}")
        lam = np.log(self.base.jumps.astype(np.float64))
        js = self.base.chi.weights * np.exp(-self.alpha * lam)
        rise = np.concatenate(([0.0], compensated_cumsum(js)))
        for arr in (lam, js, rise):
            arr.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "jump_sizes", js)
        object.__setattr__(self, "rise", rise)

    @classmethod
    def from_chi(cls, chi: ArithmeticFunction, alpha: float) -> "ExpDecayStepFunction":
        return cls(StepFunction(chi), float(alpha))

    @property
    def chi(self) -> ArithmeticFunction:
        return self.base.chi

    @property
    def plateaus(self) -> np.ndarray:
        """``c_k = f(a_k+)``, the constant value of ``f`` on ``(a_k, a_{k+1}]``."""
        return self.base.values

    @property
    def upper(self) -> float:
        """Right end of the domain: ``log(N + 1)``, or infinity for finite fixtures."""
        u = self.base.upper
        return math.inf if math.isinf(u) else math.log(u)

    def _check(self, x: np.ndarray):
        if np.any(np.isnan(x)) or np.any(x < 0) or np.any(x > self.upper):
            raise DomainError(f"x must lie in [0, {self.upper}]")

    def _count_before(self, x):
        """Number of jump points strictly below ``x``."""
        return np.searchsorted(self.lambdas, x, side="left")

    def __call__(self, x):
        xa = np.asarray(x, dtype=np.float64)
        self._check(xa)
        k = self._count_before(xa)
        out = self.chi.cumulative[k] * np.exp(-self.alpha * xa)
        return float(out) if np.ndim(out) == 0 else out

    def right_limit(self, x):
        xa = np.asarray(x, dtype=np.float64)
        self._check(xa)
        k = np.searchsorted(self.lambdas, xa, side="right")
        out = self.chi.cumulative[k] * np.exp(-self.alpha * xa)
        return float(out) if np.ndim(out) == 0 else out

    def total_rise(self, x):
        """``R(x)``: sum of jump sizes at points ``lambda_k < x``."""
        xa = np.asarray(x, dtype=np.float64)
        self._check(xa)
        out = self.rise[self._count_before(xa)]
        return float(out) if np.ndim(out) == 0 else out

    def sup(self) -> float:
        """Supremum of ``rho`` over its domain (attained as a right limit at a jump)."""
        if not self.lambdas.size:
            return 0.0
        return float(np.max(self.plateaus * np.exp(-self.alpha * self.lambdas)))


def rho_eval(rho: ExpDecayStepFunction, x):
    """``f(e^x) exp(-alpha x)``, left-continuous.

    Raises:
        DomainError: outside ``[0, log(N + 1)]``.
    """
    return rho(x)


def total_variation_exact(rho: ExpDecayStepFunction, x):
    """Exact total variation of ``rho`` on ``[0, x]``: ``2 R(x) - rho(x)``."""
    return 2.0 * rho.total_rise(x) - rho(x)


@dataclass(frozen=True)
class Subdivision:
    """Points ``0 = x_0 < x_1 < ... < x_n = x`` of ``[0, x]``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a subdivision needs at least two points")
        if pts[0] != 0.0:
            raise ValueError("a subdivision starts at 0")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("subdivision points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def end(self) -> float:
        return float(self.points[-1])


VariationTarget = Union[ExpDecayStepFunction, Callable[[np.ndarray], np.ndarray]]


def subdivision_sum(func: VariationTarget, sub: Subdivision) -> float:
    """``sum |func(x_i) - func(x_{i-1})|`` over a subdivision."""
    vals = np.asarray(func(sub.points), dtype=np.float64)
    return math.fsum(np.abs(np.diff(vals)))


def _mix64(x: int) -> int:
    # splitmix64 finalizer
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial, derived from ``(seed, trial)``."""
    return np.random.default_rng(_mix64(_mix64(seed & 0xFFFFFFFFFFFFFFFF) ^ trial))


def jump_anchor_points(rho: ExpDecayStepFunction, x: float) -> np.ndarray:
    """Jump points ``lambda_k <= x`` together with ``lambda_k +- eps``."""
    lam = rho.lambdas[rho.lambdas <= x]
    eps = _EPS_SCALE * np.maximum(1.0, lam)
    return np.concatenate((lam, lam - eps, lam + eps))


def random_subdivision(rng: np.random.Generator, x: float, anchors: Sequence[float] = ()) -> Subdivision:
    """Sorted uniform draws on ``(0, x)`` plus the anchors, with endpoints ``0`` and ``x``.

    The number of random points is ``floor(2**u)`` with ``u`` uniform on
    ``[1, 11]``, i.e. geometrically spread between 2 and 2048.
    """
    count = int(2.0 ** rng.uniform(1.0, math.log2(MAX_SUBDIVISION_POINTS)))
    draws = rng.uniform(0.0, x, size=count)
    pts = np.concatenate(([0.0, x], draws, np.asarray(anchors, dtype=np.float64)))
    pts = np.unique(pts[(pts >= 0.0) & (pts <= x)])
    return Subdivision(pts)


def total_variation_oracle(rho: VariationTarget, x: float, trials: int, seed: int, include_jumps: bool = True) -> float:
    """Lower bound on the total variation on ``[0, x]`` from random subdivisions.

    Returns the largest subdivision sum over ``trials`` seeded subdivisions.
    For an :class:`ExpDecayStepFunction` each subdivision also contains every
    jump point ``lambda_k <= x`` and its ``+- eps`` neighbours unless
    ``include_jumps`` is false. Plain callables get random points only.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if x <= 0:
        return 0.0
    anchors: np.ndarray = np.zeros(0)
    if isinstance(rho, ExpDecayStepFunction):
        rho._check(np.asarray(x))
        if include_jumps:
            anchors = jump_anchor_points(rho, x)
    best = 0.0
    for trial in range(trials):
        sub = random_subdivision(trial_rng(seed, trial), x, anchors)
        best = max(best, subdivision_sum(rho, sub))
    return best


class LemmaCheck(NamedTuple):
    """Both sides of the claimed bound ``T(x) <= -rho(x) + sum_{l < e^x} chi(l) l^-alpha``."""

    lhs: float
    rhs: float
    holds: bool
    corrected_bound: float


def lemma_bound_check(rho: ExpDecayStepFunction, x: float) -> LemmaCheck:
    """Compare the exact total variation with the falls-only bound.

    The right side is recomputed from ``chi`` directly (not from the stored
    rise prefix). ``corrected_bound`` is ``2 sum_{l < e^x} chi(l) l^-alpha``,
    which always dominates the exact variation.
    """
    lhs = total_variation_exact(rho, x)
    chi = rho.chi
    below = np.log(chi.support.astype(np.float64)) < x
    terms = chi.weights[below] * chi.support[below].astype(np.float64) ** (-rho.alpha)
    series = math.fsum(terms)
    rhs = -rho(x) + series
    return LemmaCheck(lhs, rhs, bool(lhs <= rhs), 2.0 * series)
