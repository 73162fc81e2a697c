"""Adaptive Simpson quadrature for real or complex integrands."""

from __future__ import annotations

from typing import Callable, Tuple

import numpy as np

from .errors import ToleranceNotMet

MAX_DEPTH = 40
_REL_FLOOR = 4 * np.finfo(float).eps


def adaptive_simpson(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = MAX_DEPTH,
) -> Tuple[complex, float]:
    """Integrate ``f`` over ``[a, b]``; returns ``(value, error_estimate)``.

    Intervals are bisected until the two-panel and one-panel Simpson values
    agree to ``15 * tol_local`` (local tolerance halves with each bisection),
    or to a few ulps of the local value.

    Raises:
        ToleranceNotMet: a panel reached ``max_depth`` without converging.
    """
    if b < a:
        v, e = adaptive_simpson(f, b, a, tol, max_depth)
        return -v, e
    if b == a:
        return 0.0, 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    total = 0.0
    err = 0.0
    failed = False
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) / 6.0 * (flo + 4 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4 * frm + fhi)
        delta = left + right - s
        if abs(delta) <= 15 * eps or abs(delta) <= _REL_FLOOR * abs(left + right):
            total += left + right + delta / 15.0
            err += abs(delta) / 15.0
        elif depth >= max_depth or mid in (lo, hi):
            total += left + right
            err += abs(delta)
            failed = True
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
    if failed:
        raise ToleranceNotMet(f"adaptive Simpson did not reach tol={tol} on [{a}, {b}]", total, err)
    return total, err

