"""Compensated summation helpers."""

from __future__ import annotations

import math

import numpy as np

_BLOCK = 256


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Inclusive prefix sums with error independent of the array length.

    Each block of ``_BLOCK`` terms is summed exactly (``math.fsum``) and the
    block totals are carried with Neumaier compensation. Within a block a
    plain cumulative sum is added to the carried offset, so the absolute
    error of every prefix is a few ulps of the largest prefix in its block.
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    if n == 0:
        return np.zeros(0)
    nb = -(-n // _BLOCK)
    padded = np.zeros(nb * _BLOCK)
    padded[:n] = x
    blocks = padded.reshape(nb, _BLOCK)

    offsets = np.empty(nb)
    total = 0.0
    comp = 0.0
    for i, row in enumerate(blocks):
        offsets[i] = total + comp
        b = math.fsum(row)
        t = total + b
        if abs(total) >= abs(b):
            comp += (total - t) + b
        else:
            comp += (b - t) + total
        total = t

    out = np.cumsum(blocks, axis=1) + offsets[:, None]
    return out.reshape(-1)[:n]


def complex_fsum(terms: np.ndarray) -> complex:
    terms = np.asarray(terms, dtype=np.complex128)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))
