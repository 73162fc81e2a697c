"""Lebesgue-Stieltjes measure of a damped step function and integration against it.

The measure ``mu`` of ``rho`` satisfies ``mu([0, x)) = rho(x)``. For
``rho(x) = f(e^x) exp(-alpha x)`` it is a sum of positive atoms (the jumps)
and a negative density ``-alpha c_k exp(-alpha x)`` on each plateau, so the
variation measure ``|mu|`` just flips the sign of the density part.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from ._summation import complex_fsum
from .errors import DomainError
from .quadrature import adaptive_simpson
from .results import EvalResult, SLike, as_complex
from .stepbv import ExpDecayStepFunction
from .transforms import _tail_parts

DEFAULT_TOL = 1e-10
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ExpKernel:
    """``g(x) = exp(-s x)``; integrals against the density use closed forms."""

    s: complex

    def __call__(self, x):
        return np.exp(-self.s * np.asarray(x)) if np.ndim(x) else cmath.exp(-self.s * x)

    def derivative(self, x):
        return -self.s * self(x)


@dataclass(frozen=True, eq=False)
class StieltjesMeasure:
    """Atoms ``(location, mass)`` plus a piecewise exponential density.

    Density piece ``i`` lives on ``(left[i], right[i])`` with value
    ``coeff[i] * (-alpha) * exp(-alpha x)``. ``right[-1]`` is the domain
    bound (possibly infinite).
    """

    atom_locations: np.ndarray
    atom_masses: np.ndarray
    left: np.ndarray
    right: np.ndarray
    coeff: np.ndarray
    alpha: float
    source: Optional[ExpDecayStepFunction] = field(default=None, repr=False)
    total_variation_mass: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total_variation_mass", self.variation(self.upper))

    @property
    def upper(self) -> float:
        return float(self.right[-1]) if self.right.size else math.inf

    def _density_integrals(self, x: float) -> np.ndarray:
        """``int_{left_i}^{min(x, right_i)}`` of each density piece (nonpositive)."""
        active = self.left < x
        lo = self.left[active]
        hi = np.minimum(self.right[active], x)
        a = self.alpha
        return self.coeff[active] * (np.exp(-a * hi) - np.exp(-a * lo))

    def mass(self, x: float) -> float:
        """``mu([0, x))``."""
        if x < 0 or x > self.upper:
            raise DomainError(f"x must lie in [0, {self.upper}]")
        atoms = self.atom_masses[self.atom_locations < x]
        return math.fsum(np.concatenate((atoms, self._density_integrals(x))))

    def variation(self, x: float) -> float:
        """``|mu|([0, x))``."""
        if x < 0 or x > self.upper:
            raise DomainError(f"x must lie in [0, {self.upper}]")
        atoms = self.atom_masses[self.atom_locations < x]
        return math.fsum(np.concatenate((atoms, -self._density_integrals(x))))

    def atom_at(self, x: float) -> float:
        """``mu({x})``; zero away from jump points."""
        hit = self.atom_locations == x
        return float(self.atom_masses[hit].sum())


def measure_of(rho: ExpDecayStepFunction) -> StieltjesMeasure:
    """Measure with atoms ``(lambda_k, j_k)`` and density ``-alpha c_k e^{-alpha x}``."""
    lam = rho.lambdas
    right = np.append(lam[1:], rho.upper) if lam.size else np.zeros(0)
    return StieltjesMeasure(
        atom_locations=lam,
        atom_masses=rho.jump_sizes,
        left=lam,
        right=right,
        coeff=rho.plateaus,
        alpha=rho.alpha,
        source=rho,
    )


GFunction = Union[ExpKernel, Callable[[float], complex]]


def integrate(g: GFunction, mu: StieltjesMeasure, X: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """``int_{[0, X)} g d mu``.

    Atom contributions are exact. Density pieces use closed forms when ``g``
    is an :class:`ExpKernel` and adaptive Simpson otherwise. ``X = inf`` is
    allowed for exponential kernels; if the measure is truncated at
    ``log(N + 1)`` the remainder comes from the fitted tail model and the
    result is flagged.

    Raises:
        DomainError: ``X`` beyond the measure's domain, or an infinite range
            with a non-exponential ``g``.
        ToleranceNotMet: a density piece did not converge.
    """
    infinite = math.isinf(X)
    if X < 0:
        raise DomainError("X must be >= 0")
    if infinite and not isinstance(g, ExpKernel):
        raise DomainError("infinite-range integration needs an exponential kernel")
    truncated_inf = infinite and not math.isinf(mu.upper)
    Xd = mu.upper if truncated_inf else X
    if not infinite and X > mu.upper:
        raise DomainError(f"X must lie in [0, {mu.upper}]")

    take = mu.atom_locations < Xd
    locs, masses = mu.atom_locations[take], mu.atom_masses[take]
    active = mu.left < Xd
    lo = mu.left[active]
    hi = np.minimum(mu.right[active], Xd)
    c = mu.coeff[active]
    a = mu.alpha

    if isinstance(g, ExpKernel):
        s = complex(g.s)
        atom_terms = masses * np.exp(-s * locs)
        w = s + a
        e_hi = np.where(np.isinf(hi), 0.0, np.exp(-w * np.where(np.isinf(hi), 0.0, hi)))
        dens_terms = -a * c * (np.exp(-w * lo) - e_hi) / w
        terms = np.concatenate((atom_terms, dens_terms))
        value = complex_fsum(terms)
        err = 16 * _EPS * float(np.sum(np.abs(terms)))
    else:
        atom_terms = np.array([complex(g(float(x))) for x in locs]) * masses
        vals = []
        err = 0.0
        width = max(Xd, 1e-300)
        for l, h, ck in zip(lo, hi, c):
            def integrand(x, ck=ck):
                return complex(g(x)) * (-a * ck * math.exp(-a * x))

            v, e = adaptive_simpson(integrand, float(l), float(h), tol * (h - l) / width)
            vals.append(v)
            err += e
        terms = np.concatenate((atom_terms, np.asarray(vals, dtype=np.complex128)))
        value = complex_fsum(terms)
        err += 16 * _EPS * float(np.sum(np.abs(terms)))

    if not truncated_inf:
        return EvalResult(value, err, False, 0)
    rho = mu.source
    if rho is None:
        raise DomainError("tail model needs the generating function")
    tail, star, _ = _tail_parts(rho, complex(g.s))
    if tail is None:
        return EvalResult(value, math.inf, True, rho.chi.N)
    return EvalResult(value + star, err + abs(g.s) * abs(tail), True, rho.chi.N)


def by_parts_residual(
    rho: ExpDecayStepFunction,
    g: GFunction,
    X: float,
    g_prime: Optional[Callable[[float], complex]] = None,
    tol: float = DEFAULT_TOL,
) -> float:
    """``|int_0^X g d rho - rho(X) g(X) + int_0^X rho g' dt|``.

    The Stieltjes side goes through :func:`integrate`; the Lebesgue side is
    always adaptive Simpson over the plateaus, so the two routes share no
    closed form. ``rho(0) g(0)`` vanishes because ``rho(0) = 0``.
    """
    if g_prime is None:
        if not isinstance(g, ExpKernel):
            raise ValueError("g_prime is required for a general g")
        g_prime = g.derivative
    lhs = integrate(g, measure_of(rho), X, tol).value
    lam = rho.lambdas[rho.lambdas < X]
    pts = np.concatenate(([0.0], lam, [X]))
    vals = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi <= lo:
            continue
        at_lo = rho.right_limit(float(lo)) * complex(g_prime(float(lo)))

        def integrand(x, lo=float(lo), at_lo=at_lo):
            return at_lo if x == lo else rho(x) * complex(g_prime(x))

        v, _ = adaptive_simpson(integrand, float(lo), float(hi), tol * (hi - lo) / max(X, 1e-300))
        vals.append(v)
    lebesgue = complex_fsum(np.asarray(vals, dtype=np.complex128)) if vals else 0j
    boundary = rho(X) * complex(g(X))
    return abs(lhs - boundary + lebesgue)
