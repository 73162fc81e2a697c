"""Nonnegative arithmetic functions, the von Mangoldt sieve and Chebyshev psi.

Partial sums follow the strict convention ``f(x) = sum_{1 <= n < x} chi(n)``,
so ``f`` is left-continuous and ``f(1) = 0``. A value ``chi(n)`` for ``n`` in
``1..N`` is stored only when it is positive; those indices are exactly the
jump points of ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from ._summation import compensated_cumsum
from .errors import DomainError, SieveSizeError

MAX_SIEVE = 10**8

#: Known pointwise majorant of chi, used for rigorous Dirichlet tail bounds.
Majorant = Literal["log", "unit"]


@dataclass(frozen=True, eq=False)
class ArithmeticFunction:
    """Nonnegative arithmetic function stored on ``1..N``.

    Attributes:
        name: Label used in tables and reprs.
        N: Truncation bound. ``chi(n)`` is known for ``1 <= n <= N``.
        support: Sorted indices ``n`` with ``chi(n) > 0``.
        weights: ``chi(n)`` at each support index.
        support_complete: True when ``chi(n) = 0`` is known for every
            ``n > N`` (finite fixtures). Then partial sums are known on all
            of ``[1, inf)``.
        majorant: Optional known bound ``chi(n) <= log n`` or ``chi(n) <= 1``.
        cumulative: ``cumulative[k]`` is the sum of the first ``k`` weights,
            so ``cumulative[0] = 0``.
    """

    name: str
    N: int
    support: np.ndarray
    weights: np.ndarray
    support_complete: bool = False
    majorant: Optional[Majorant] = None
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.N < 1:
            raise SieveSizeError(f"truncation bound must be >= 1, got {self.N}")
        support = np.asarray(self.support, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if support.shape != weights.shape:
            raise ValueError("support and weights must have equal length")
        if support.size:
            if support[0] < 1 or support[-1] > self.N:
                raise DomainError("support indices must lie in 1..N")
            if np.any(np.diff(support) <= 0):
                raise ValueError("support indices must be strictly increasing")
        if np.any(~np.isfinite(weights)) or np.any(weights < 0):
            raise ValueError("arithmetic function values must be finite and >= 0")
        keep = weights > 0
        support, weights = support[keep], weights[keep]
        support.setflags(write=False)
        weights.setflags(write=False)
        cum = np.concatenate(([0.0], compensated_cumsum(weights)))
        cum.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "cumulative", cum)

    @classmethod
    def from_values(cls, name: str, values, **kwargs) -> "ArithmeticFunction":
        """Build from a dense sequence where ``values[i]`` is ``chi(i + 1)``."""
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise SieveSizeError("need at least one value")
        if np.any(values < 0):
            raise ValueError("arithmetic function values must be >= 0")
        idx = np.flatnonzero(values)
        return cls(name, int(values.size), idx + 1, values[idx], **kwargs)

    def __call__(self, n: int) -> float:
        n = int(n)
        if n < 1:
            raise DomainError(f"chi is defined on n >= 1, got {n}")
        if n > self.N:
            if self.support_complete:
                return 0.0
            raise DomainError(f"chi({n}) requested beyond truncation N={self.N}")
        i = np.searchsorted(self.support, n)
        if i < self.support.size and self.support[i] == n:
            return float(self.weights[i])
        return 0.0

    def dense(self) -> np.ndarray:
        """Values ``chi(1..N)`` as a dense array (index 0 is ``chi(1)``)."""
        out = np.zeros(self.N)
        out[self.support - 1] = self.weights
        return out

    @property
    def upper(self) -> float:
        """Largest ``x`` at which the partial sum is determined."""
        return math.inf if self.support_complete else float(self.N + 1)

    def partial_sum(self, x) -> np.ndarray | float:
        """``sum_{1 <= n < x} chi(n)``; accepts scalars or arrays."""
        xa = np.asarray(x, dtype=np.float64)
        if np.any(xa < 1) or np.any(xa > self.upper) or np.any(np.isnan(xa)):
            raise DomainError(f"x must lie in [1, {self.upper}]")
        k = np.searchsorted(self.support, xa, side="left")
        out = self.cumulative[k]
        return float(out) if np.ndim(out) == 0 else out


def _check_size(N: int) -> int:
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool):
        raise SieveSizeError(f"sieve bound must be an integer, got {N!r}")
    N = int(N)
    if N < 1:
        raise SieveSizeError(f"sieve bound must be >= 1, got {N}")
    if N > MAX_SIEVE:
        raise SieveSizeError(f"sieve bound {N} exceeds supported maximum {MAX_SIEVE}")
    return N


def prime_sieve(N: int) -> np.ndarray:
    """Primes ``p <= N`` by the sieve of Eratosthenes."""
    N = _check_size(N)
    is_prime = np.ones(N + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(N) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.flatnonzero(is_prime)


def sieve_von_mangoldt(N: int) -> ArithmeticFunction:
    """Von Mangoldt function on ``1..N``: ``log p`` at ``n = p**k``, else 0.

    ``log p`` is computed once per prime and reused for all its powers.
    """
    N = _check_size(N)
    primes = prime_sieve(N)
    logs = np.log(primes.astype(np.float64))
    idx = [primes]
    val = [logs]
    for p, lp in zip(primes[primes <= math.isqrt(N)].tolist(), logs.tolist()):
        powers = []
        q = p * p
        while q <= N:
            powers.append(q)
            q *= p
        idx.append(np.asarray(powers, dtype=np.int64))
        val.append(np.full(len(powers), lp))
    support = np.concatenate(idx)
    weights = np.concatenate(val)
    order = np.argsort(support, kind="stable")
    return ArithmeticFunction("von_mangoldt", N, support[order], weights[order], majorant="log")


def constant_one(N: int) -> ArithmeticFunction:
    """``chi(n) = 1`` on ``1..N``; its partial sum counts integers below ``x``."""
    N = _check_size(N)
    return ArithmeticFunction(
        "one", N, np.arange(1, N + 1, dtype=np.int64), np.ones(N), majorant="unit"
    )


def chebyshev_psi(chi: ArithmeticFunction, x: float) -> float:
    """``sum_{n < x} chi(n)`` (strict inequality); ``psi(1) = 0``.

    Raises:
        DomainError: if ``x`` is outside ``[1, N + 1]``.
    """
    return chi.partial_sum(float(x))
