"""Riemann zeta, its derivative and logarithmic derivative on ``sigma > 0``.

Evaluation uses Euler-Maclaurin summation with cutoff ``N`` and ``m``
Bernoulli corrections::

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{k=1}^{m} B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1) + R

with ``|R|`` bounded by the first omitted correction times
``|s+2m+1| / (sigma+2m+1)``. The derivative differentiates every term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, NearZeroError, PoleProximityError, UnreliableProbe
from .results import EvalResult, SLike, as_complex

POLE_GUARD = 1e-8
ZERO_GUARD = 1e-12
EULER_GAMMA = 0.57721566490153286061

# B_2 .. B_18; B_18 is only used for the error term when m = 8.
BERNOULLI = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
)
# B_2k / (2k)!
_BCOEF = tuple(float(b / math.factorial(2 * (k + 1))) for k, b in enumerate(BERNOULLI))


@dataclass(frozen=True)
class ZetaEvaluator:
    """Euler-Maclaurin evaluator with cutoff ``N_em`` and ``m_em`` corrections."""

    N_em: int = 100
    m_em: int = 4
    _logs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.N_em < 10:
            raise ValueError("N_em must be >= 10")
        if not 1 <= self.m_em <= 8:
            raise ValueError("m_em must be in 1..8")
        logs = np.log(np.arange(1, self.N_em, dtype=np.float64))
        logs.setflags(write=False)
        object.__setattr__(self, "_logs", logs)

    @property
    def bernoulli(self) -> tuple:
        return BERNOULLI[: self.m_em]

    def _guard(self, s: np.ndarray):
        if np.any(s.real <= 0):
            raise DomainError("zeta evaluation requires sigma > 0")
        if np.any(np.abs(s - 1) <= POLE_GUARD):
            raise PoleProximityError(f"|s - 1| <= {POLE_GUARD}; use residue_probe or the Laurent expansion")

    def _terms(self, s: np.ndarray, derivative: bool):
        """Value and error bound arrays for zeta (or zeta') at an array of points."""
        self._guard(s)
        N = float(self.N_em)
        logN = math.log(N)
        powers = np.exp(-np.multiply.outer(s, self._logs))
        if derivative:
            head = -(powers * self._logs).sum(axis=-1)
        else:
            head = powers.sum(axis=-1)
        Ns = np.exp(-s * logN)  # N^-s
        if derivative:
            head += -N * Ns * logN / (s - 1) - N * Ns / (s - 1) ** 2 - 0.5 * logN * Ns
        else:
            head += N * Ns / (s - 1) + 0.5 * Ns

        # rising product P_k(s) = s(s+1)...(s+2k-2) and its log-derivative
        poly = np.ones_like(s)
        dlog = np.zeros_like(s)
        shift = 0
        err = None
        for k in range(self.m_em + 1):
            while shift < 2 * k + 1:
                poly = poly * (s + shift)
                dlog = dlog + 1.0 / (s + shift)
                shift += 1
            term = _BCOEF[k] * poly * Ns * N ** (-2 * k - 1)
            if derivative:
                term = term * (dlog - logN)
            if k < self.m_em:
                head = head + term
            else:
                err = np.abs(term) * np.abs(s + 2 * k + 1) / (s.real + 2 * k + 1)
                if derivative:
                    # the differentiated remainder has no clean closed bound
                    err = 2.0 * err
        return head, err

    def _eval(self, s: SLike, derivative: bool) -> EvalResult:
        z = as_complex(s)
        val, err = self._terms(np.asarray([z]), derivative)
        v = complex(val[0])
        rounding = 64 * np.finfo(float).eps * max(1.0, abs(v))
        return EvalResult(v, float(err[0]) + rounding)

    def zeta(self, s: SLike) -> EvalResult:
        return self._eval(s, False)

    def zeta_prime(self, s: SLike) -> EvalResult:
        return self._eval(s, True)

    def zeta_array(self, s) -> np.ndarray:
        """Vectorized zeta values (no error estimates)."""
        val, _ = self._terms(np.asarray(s, dtype=np.complex128), False)
        return val

    def log_deriv(self, s: SLike) -> EvalResult:
        """``-zeta'(s) / zeta(s)`` with first-order error propagation.

        Raises:
            NearZeroError: if ``|zeta(s)| <= 1e-12``.
        """
        z = self.zeta(s)
        zp = self.zeta_prime(s)
        mag = abs(z.value)
        if mag <= ZERO_GUARD:
            raise NearZeroError(f"|zeta(s)| = {mag:.3e} is too close to zero", mag)
        v = -zp.value / z.value
        err = zp.error_estimate / mag + abs(v) * z.error_estimate / mag
        return EvalResult(v, err + 4 * np.finfo(float).eps * abs(v))


DEFAULT = ZetaEvaluator()


def zeta(s: SLike) -> EvalResult:
    return DEFAULT.zeta(s)


def zeta_prime(s: SLike) -> EvalResult:
    return DEFAULT.zeta_prime(s)


def log_deriv(s: SLike) -> EvalResult:
    return DEFAULT.log_deriv(s)


def zeta_prime_richardson(s: SLike, h: float = 1e-3, levels: int = 3, evaluator: ZetaEvaluator = DEFAULT) -> complex:
    """Central differences of ``zeta`` extrapolated over ``h, h/2, h/4, ...``.

    Kept as an independent check on :func:`zeta_prime`.
    """
    z = as_complex(s)
    table = []
    for i in range(levels):
        hi = h / 2**i
        d = (evaluator.zeta(z + hi).value - evaluator.zeta(z - hi).value) / (2 * hi)
        row = [d]
        for j in range(1, i + 1):
            f = 4.0**j
            row.append((f * row[j - 1] - table[i - 1][j - 1]) / (f - 1))
        table.append(row)
    return table[-1][-1]


def _trapezoid_moments(fn: Callable[[complex], complex], s0: complex, radius: float, nodes: int):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    offs = radius * np.exp(1j * theta)
    vals = np.array([complex(fn(s0 + o)) for o in offs])
    m0 = np.mean(vals * offs)
    m1 = np.mean(vals * offs * (s0 + offs))
    return complex(m0), complex(m1)


def residue_probe(
    fn: Callable[[complex], complex],
    s0: SLike,
    radius: float,
    nodes: int = 64,
    tol: float = 1e-8,
) -> complex:
    """``(1 / 2 pi i) * contour integral of fn`` over ``|s - s0| = radius``.

    Trapezoid rule on the circle at ``nodes`` and ``2 * nodes`` points; the
    finer value is returned.

    Raises:
        UnreliableProbe: if the two values differ by more than
            ``tol * max(1, |value|)``.
    """
    if nodes < 16:
        raise ValueError("nodes must be >= 16")
    if radius <= 0:
        raise ValueError("radius must be positive")
    c = as_complex(s0)
    coarse, _ = _trapezoid_moments(fn, c, radius, nodes)
    fine, _ = _trapezoid_moments(fn, c, radius, 2 * nodes)
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise UnreliableProbe(
            f"residue probe unstable: {coarse} at {nodes} nodes vs {fine} at {2 * nodes}",
            (coarse, fine),
        )
    return fine


def pole_location_probe(
    fn: Callable[[complex], complex],
    center: SLike,
    radius: float,
    nodes: int = 64,
    tol: float = 1e-8,
) -> complex:
    """Location of a single simple pole inside ``|s - center| < radius``.

    Ratio of the first contour moment to the zeroth: for a lone simple pole
    at ``p`` with residue ``r`` these are ``r p`` and ``r``.
    """
    c = as_complex(center)
    r0, m0 = _trapezoid_moments(fn, c, radius, nodes)
    r1, m1 = _trapezoid_moments(fn, c, radius, 2 * nodes)
    if abs(r1) == 0:
        raise UnreliableProbe("no residue inside the contour", (r0, r1))
    p0, p1 = m0 / r0, m1 / r1
    if abs(p1 - p0) > tol * max(1.0, abs(p1)):
        raise UnreliableProbe(f"pole location unstable: {p0} vs {p1}", (p0, p1))
    return p1


class ScanResult(NamedTuple):
    min_abs: float
    argmin_t: float


def nonvanishing_scan(t_min: float, t_max: float, step: float, evaluator: ZetaEvaluator = DEFAULT) -> ScanResult:
    """Grid minimum of ``|zeta(1 + i t)|`` for ``t`` in ``[t_min, t_max]``.

    A finite spot-check of nonvanishing on the line ``sigma = 1``, not a proof.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if t_max < t_min:
        raise ValueError("t_max must be >= t_min")
    n = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
    ts = t_min + step * np.arange(n)
    if abs(ts[-1] - t_max) > 1e-12 * max(1.0, abs(t_max)) and ts[-1] < t_max:
        ts = np.append(ts, t_max)
    mags = np.abs(evaluator.zeta_array(1.0 + 1j * ts))
    i = int(np.argmin(mags))
    return ScanResult(float(mags[i]), float(ts[i]))
