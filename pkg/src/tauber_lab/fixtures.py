"""Standard test inputs used by the CLI and the test-suite."""

from __future__ import annotations

import numpy as np

from .arithfun import ArithmeticFunction, constant_one, sieve_von_mangoldt
from .stepbv import ExpDecayStepFunction


def single_jump_chi() -> ArithmeticFunction:
    """``chi(2) = 1`` and zero elsewhere (known for every n)."""
    return ArithmeticFunction("single_jump", 2, np.array([2]), np.array([1.0]), support_complete=True)


def empty_chi(N: int = 10) -> ArithmeticFunction:
    """``chi = 0`` everywhere."""
    return ArithmeticFunction("empty", N, np.zeros(0, dtype=np.int64), np.zeros(0), support_complete=True)


def single_jump(alpha: float = 1.0) -> ExpDecayStepFunction:
    return ExpDecayStepFunction.from_chi(single_jump_chi(), alpha)


def von_mangoldt_rho(N: int = 10**4, alpha: float = 2.0) -> ExpDecayStepFunction:
    return ExpDecayStepFunction.from_chi(sieve_von_mangoldt(N), alpha)


def constant_one_rho(N: int = 10**4, alpha: float = 2.0) -> ExpDecayStepFunction:
    return ExpDecayStepFunction.from_chi(constant_one(N), alpha)


def empty(alpha: float = 2.0) -> ExpDecayStepFunction:
    return ExpDecayStepFunction.from_chi(empty_chi(), alpha)


FIXTURES = {
    "single_jump": lambda N, alpha: single_jump(alpha),
    "lambda": von_mangoldt_rho,
    "one": constant_one_rho,
    "empty": lambda N, alpha: empty(alpha),
}
