"""Dirichlet series, Laplace and Laplace-Stieltjes transforms of damped step functions.

For ``rho(x) = f(e^x) exp(-alpha x)`` with plateaus ``c_k`` on
``(lambda_k, lambda_{k+1}]`` and ``w = s + alpha``::

    L_rho(s)  = sum_k c_k (exp(-w lambda_k) - exp(-w lambda_{k+1})) / w
    L*_rho(s) = sum_k j_k exp(-s lambda_k) - alpha * L_rho(s)

Both telescope to ``D_chi(w) / w`` and ``s D_chi(w) / w`` respectively when the
support of ``chi`` is finite, so ``L* = s L`` holds term by term.

Truncated inputs (``chi`` known only up to ``N``) get a tail beyond
``L = log(N + 1)`` from a fitted growth model ``f(y) ~ K y^theta``; results
that use it carry ``tail_model_used=True`` and an error estimate equal to the
modelled tail magnitude.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np

from ._summation import complex_fsum
from .arithfun import ArithmeticFunction
from .errors import AbscissaError, ConsistencyError, DomainError, PoleProximityError
from .quadrature import adaptive_simpson
from .results import ComplexPoint, EvalResult, SLike, as_complex
from .stepbv import ExpDecayStepFunction

__all__ = [
    "ComplexPoint",
    "EvalResult",
    "TailModel",
    "fit_tail_model",
    "dirichlet_eval",
    "laplace",
    "laplace_stieltjes",
    "laplace_quadrature_oracle",
    "shifted_laplace",
    "boundary_limit_probe",
    "sector_probe",
    "s_grid",
]

NEAR_POLE = 1e-12
_EPS = np.finfo(float).eps
_FIT_SAMPLES = 512


@dataclass(frozen=True)
class TailModel:
    """Growth model ``f(y) ~ K y^theta`` beyond ``y = N + 1`` (``L = log(N + 1)``)."""

    K: float
    theta: float
    L: float

    def laplace_tail(self, w: complex) -> Optional[complex]:
        """``K * int_L^inf exp((theta - w) x) dx``, or None if divergent."""
        if w.real <= self.theta:
            return None
        return self.K * cmath.exp((self.theta - w) * self.L) / (w - self.theta)


def fit_tail_model(chi: ArithmeticFunction) -> TailModel:
    """Least-squares fit of ``log f`` against ``log y`` over ``[N/2, N]``."""
    N = chi.N
    lo = max(1.0, N / 2)
    ys = np.unique(np.round(np.geomspace(lo, N, _FIT_SAMPLES)))
    fs = np.asarray(chi.partial_sum(ys), dtype=np.float64)
    pos = fs > 0
    L = math.log(N + 1)
    if pos.sum() == 0:
        return TailModel(0.0, 0.0, L)
    if pos.sum() == 1 or np.ptp(ys[pos]) == 0:
        return TailModel(float(fs[pos][-1]), 0.0, L)
    theta, logK = np.polyfit(np.log(ys[pos]), np.log(fs[pos]), 1)
    return TailModel(float(math.exp(logK)), float(theta), L)


def s_grid(sigma_range=(0.25, 4.0), t_range=(-20.0, 20.0), n_sigma=9, n_t=9) -> List[complex]:
    """Rectangular grid of points ``sigma + i t``."""
    return [complex(sg, t) for sg in np.linspace(*sigma_range, n_sigma) for t in np.linspace(*t_range, n_t)]


def _tail_majorant(chi: ArithmeticFunction, sigma: float) -> Optional[float]:
    """Rigorous bound on ``sum_{n>N} |chi(n) n^-s|`` from a known majorant of chi."""
    N = chi.N
    if chi.majorant == "unit":
        return N ** (1 - sigma) / (sigma - 1)
    if chi.majorant == "log":
        # log(u) u^-sigma is decreasing for u > e^(1/sigma); start the
        # integral comparison at a point where that holds.
        start = N if N >= math.e ** (1 / sigma) else math.ceil(math.e ** (1 / sigma))
        head = sum(math.log(n) * n ** -sigma for n in range(N + 1, start + 1))
        d = sigma - 1
        return head + start ** (1 - sigma) * (math.log(start) / d + 1 / d**2)
    return None


def dirichlet_eval(chi: ArithmeticFunction, s: SLike) -> EvalResult:
    """Partial sum ``sum_{n<=N} chi(n) n^-s`` with a bound on the omitted tail.

    ``value`` is the partial sum; ``error_estimate`` bounds the tail plus
    rounding. The bound is rigorous for ``chi`` with a known majorant
    (``log n`` for von Mangoldt, ``1`` for the constant function) and zero for
    finitely supported fixtures. Otherwise the fitted tail model is used.

    Raises:
        AbscissaError: ``sigma <= 1`` for an infinite-support ``chi``.
    """
    z = as_complex(s)
    if not chi.support_complete and z.real <= 1:
        raise AbscissaError(f"Dirichlet series needs sigma > 1, got {z.real}")
    logs = np.log(chi.support.astype(np.float64))
    terms = chi.weights * np.exp(-z * logs)
    value = complex_fsum(terms)
    rounding = 8 * _EPS * float(np.sum(np.abs(terms)))
    if chi.support_complete:
        return EvalResult(value, rounding, False, chi.N)
    bound = _tail_majorant(chi, z.real)
    if bound is not None:
        return EvalResult(value, bound + rounding, False, chi.N)
    model = fit_tail_model(chi)
    f_end = chi.partial_sum(float(chi.N + 1))
    tail = model.laplace_tail(z)
    if tail is None:
        return EvalResult(value, math.inf, True, chi.N)
    # int_L^inf e^{-zx} d(model) plus the mismatch jump at L
    est = model.theta * tail + (model.K * math.exp(model.theta * model.L) - f_end) * cmath.exp(-z * model.L)
    return EvalResult(value, abs(est) + rounding, True, chi.N)


def _check_s(rho: ExpDecayStepFunction, z: complex, require_positive: bool = True) -> complex:
    if require_positive and z.real <= 0:
        raise DomainError(f"transform requires sigma > 0, got {z.real}")
    w = z + rho.alpha
    if abs(w) < NEAR_POLE:
        raise PoleProximityError(f"s + alpha = {w} is within {NEAR_POLE} of the pole")
    return w


def _pieces(rho: ExpDecayStepFunction, w: complex):
    """Per-plateau Laplace terms ``c_k (e^{-w l_k} - e^{-w r_k}) / w`` and ``e^{-w L}``."""
    lam = rho.lambdas
    if not lam.size:
        return np.zeros(0, dtype=np.complex128), 0.0
    L = rho.upper
    e_left = np.exp(-w * lam)
    e_end = 0.0 if math.isinf(L) else cmath.exp(-w * L)
    e_right = np.append(e_left[1:], e_end)
    return rho.plateaus * (e_left - e_right) / w, e_end


def _tail_parts(rho: ExpDecayStepFunction, z: complex):
    """Modelled tails ``(L_tail, L*_tail, model)``; ``None`` tails when divergent."""
    model = fit_tail_model(rho.chi)
    alpha = rho.alpha
    t = model.laplace_tail(z + alpha)
    if t is None:
        return None, None, model
    L = model.L
    rho_L = rho.chi.cumulative[-1] * math.exp(-alpha * L)
    rho_model_L = model.K * math.exp((model.theta - alpha) * L)
    # by parts on [L, inf): jump from actual to model at L, then the model's density
    star = (rho_model_L - rho_L) * cmath.exp(-z * L) + (model.theta - alpha) * t
    return t, star, model


def laplace(rho: ExpDecayStepFunction, s: SLike) -> EvalResult:
    """``int_0^inf rho(x) e^{-sx} dx`` by exact per-plateau summation.

    Raises:
        DomainError: ``sigma <= 0``.
        PoleProximityError: ``|s + alpha| < 1e-12``.
    """
    z = as_complex(s)
    w = _check_s(rho, z)
    terms, _ = _pieces(rho, w)
    value = complex_fsum(terms)
    err = 16 * _EPS * float(np.sum(np.abs(terms)))
    if rho.chi.support_complete:
        return EvalResult(value, err, False, rho.chi.N)
    tail, _, _ = _tail_parts(rho, z)
    if tail is None:
        return EvalResult(value, math.inf, True, rho.chi.N)
    return EvalResult(value + tail, err + abs(tail), True, rho.chi.N)


def laplace_stieltjes(rho: ExpDecayStepFunction, s: SLike) -> EvalResult:
    """``int_0^inf e^{-sx} d rho(x)``: atoms at jumps plus the decaying density."""
    z = as_complex(s)
    w = _check_s(rho, z)
    atoms = rho.jump_sizes * np.exp(-z * rho.lambdas)
    dens, _ = _pieces(rho, w)
    terms = np.concatenate((atoms, -rho.alpha * dens))
    value = complex_fsum(terms)
    err = 16 * _EPS * float(np.sum(np.abs(terms)))
    if rho.chi.support_complete:
        return EvalResult(value, err, False, rho.chi.N)
    tail, star, _ = _tail_parts(rho, z)
    if tail is None:
        return EvalResult(value, math.inf, True, rho.chi.N)
    return EvalResult(value + star, err + abs(z) * abs(tail), True, rho.chi.N)


def laplace_quadrature_oracle(rho: ExpDecayStepFunction, s: SLike, X_max: float, tol: float = 1e-10) -> EvalResult:
    """``int_0^X_max rho(x) e^{-sx} dx`` by adaptive Simpson on ``rho`` itself.

    No closed forms: the integrand is evaluated pointwise, with the jump
    points used only as breakpoints so each panel sees a smooth function.

    Raises:
        ToleranceNotMet: quadrature failed to converge.
    """
    z = as_complex(s)
    if z.real + rho.alpha <= 0:
        raise DomainError("oracle requires sigma + alpha > 0")
    if X_max < 0 or X_max > rho.upper:
        raise DomainError(f"X_max must lie in [0, {rho.upper}]")
    lam = rho.lambdas[rho.lambdas < X_max]
    pts = np.concatenate(([0.0], lam, [X_max]))

    def piece(lo: float, hi: float):
        # on (lo, hi] rho is one smooth plateau; at lo use its right limit
        at_lo = rho.right_limit(lo) * cmath.exp(-z * lo)

        def g(x: float) -> complex:
            return at_lo if x == lo else rho(x) * cmath.exp(-z * x)

        return adaptive_simpson(g, lo, hi, tol * (hi - lo) / max(X_max, 1e-300))

    vals, err = [], 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi > lo:
            v, e = piece(float(lo), float(hi))
            vals.append(v)
            err += e
    value = complex_fsum(np.asarray(vals, dtype=np.complex128)) if vals else 0j
    return EvalResult(value, err + 16 * _EPS * sum(abs(v) for v in vals), False, rho.chi.N)


def shifted_laplace(rho: ExpDecayStepFunction, s: SLike, shift: float) -> EvalResult:
    """``L_varrho(s - shift)`` for ``varrho(x) = rho(x) e^{-shift x}``.

    The shifted function is ``rho`` with damping ``alpha + shift``. The
    result is checked against ``laplace(rho, s)``.

    Raises:
        DomainError: ``sigma - shift <= 0``.
        ConsistencyError: the two routes disagree beyond their error bars.
    """
    z = as_complex(s)
    if z.real - shift <= 0:
        raise DomainError(f"shifted evaluation needs sigma - shift > 0, got {z.real - shift}")
    if shift == 0:
        return laplace(rho, z)
    varrho = ExpDecayStepFunction(rho.base, rho.alpha + shift)
    shifted = laplace(varrho, z - shift)
    direct = laplace(rho, z)
    bound = shifted.error_estimate + direct.error_estimate + 1e-12 * max(1.0, abs(direct.value))
    if not abs(shifted.value - direct.value) <= bound:
        raise ConsistencyError(f"shifted {shifted.value} vs direct {direct.value} (bound {bound})")
    return shifted


def boundary_limit_probe(rho: ExpDecayStepFunction, exponents: Iterable[int] = range(1, 7)) -> List[tuple]:
    """``(s, L*_rho(s))`` along the real axis at ``s = 10^-k``."""
    out = []
    for k in exponents:
        s = 10.0 ** (-k)
        out.append((s, laplace_stieltjes(rho, s).value))
    return out


def sector_probe(rho: ExpDecayStepFunction, radii: Iterable[float], angles: Iterable[float]) -> List[tuple]:
    """``(s, L*_rho(s))`` at ``s = r e^{i phi}``; reported, not asserted."""
    out = []
    for r in radii:
        for phi in angles:
            s = r * cmath.exp(1j * phi)
            out.append((s, laplace_stieltjes(rho, s).value))
    return out
