import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import mp_log_deriv, naive_rho, naive_von_mangoldt
from tauber_lab.arithfun import constant_one
from tauber_lab.errors import DomainError
from tauber_lab.fixtures import empty, single_jump
from tauber_lab.stepbv import (
    ExpDecayStepFunction,
    StepFunction,
    Subdivision,
    eval_left,
    lemma_bound_check,
    rho_eval,
    subdivision_sum,
    total_variation_exact,
    total_variation_oracle,
)

LAM_DICT = {n: naive_von_mangoldt(n) for n in range(1, 10**4 + 1)}


def test_eval_left_examples(lam_small):
    f = StepFunction(lam_small)
    assert eval_left(f, 2) == 0.0
    assert eval_left(f, 2.5) == pytest.approx(math.log(2), abs=1e-15)
    assert eval_left(f, 1) == 0.0
    with pytest.raises(DomainError):
        eval_left(f, 0.99)
    with pytest.raises(DomainError):
        eval_left(f, 10**4 + 2)


def test_step_function_invariants(lam_small):
    f = StepFunction(lam_small)
    assert np.all(np.diff(f.jumps) > 0)
    assert np.all(np.diff(f.values) > 0)
    # constant on (a_{k-1}, a_k]
    for a_prev, a in zip(f.jumps[:50], f.jumps[1:51]):
        xs = np.linspace(a_prev, a, 7)[1:]
        vals = f.eval_left(xs)
        assert np.all(vals == vals[0])


def test_monotone_step_variation(lam_small):
    f = StepFunction(lam_small)
    assert f.total_variation(100.5) == f.eval_left(100.5)


def test_rho_examples(lam_small):
    rho = single_jump(1.0)
    assert rho_eval(rho, math.log(2)) == 0.0
    assert rho_eval(rho, 1.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert rho_eval(rho, 0.0) == 0.0
    rho_l = ExpDecayStepFunction.from_chi(lam_small, 2.0)
    assert rho_eval(rho_l, math.log(3)) == pytest.approx(math.log(2) / 9, abs=1e-15)
    assert rho_eval(rho_l, math.log(3)) == pytest.approx(0.077016, abs=1e-6)


def test_rho_matches_naive(rho_lam):
    rng = np.random.default_rng(5)
    for x in rng.uniform(0, math.log(10**4), 200):
        assert rho_lam(x) == pytest.approx(naive_rho(LAM_DICT, 2.0, x), rel=1e-13, abs=1e-300)


def test_rho_domain(rho_lam):
    with pytest.raises(DomainError):
        rho_lam(-0.1)
    with pytest.raises(DomainError):
        rho_lam(math.log(10**4 + 1) + 1e-9)
    single_jump()(1e6)


def test_rho_plateau_decreasing_and_jumps_up(rho_lam):
    lam = rho_lam.lambdas
    for k in range(1, 40):
        xs = np.linspace(lam[k - 1], lam[k], 9)[1:]
        assert np.all(np.diff(rho_lam(xs)) < 0)
        assert rho_lam.right_limit(lam[k]) - rho_lam(lam[k]) == pytest.approx(rho_lam.jump_sizes[k], rel=1e-12)
        assert rho_lam.jump_sizes[k] > 0


def test_tv_single_jump():
    rho = single_jump(1.0)
    assert total_variation_exact(rho, 2.0) == pytest.approx(1 - math.exp(-2), abs=1e-15)
    assert total_variation_exact(rho, 2.0) == pytest.approx(0.864665, abs=1e-6)
    assert total_variation_exact(rho, 0.5) == 0.0


def test_tv_before_first_jump(rho_lam):
    assert total_variation_exact(rho_lam, 0.5) == 0.0


def test_tv_lambda_limit(lam_1e6):
    rho = ExpDecayStepFunction.from_chi(lam_1e6, 2.0)
    T = total_variation_exact(rho, rho.upper)
    assert T == pytest.approx(2 * mp_log_deriv(2).real, abs=1e-5)
    assert T == pytest.approx(1.139922, abs=1e-5)


def test_tv_against_naive_rise_fall(rho_lam):
    # rise = sum of jumps before x; exact TV = 2 * rise - rho(x)
    for x in (0.3, 1.0, 2.5, 5.0, 9.0):
        rise = math.fsum(v * n**-2.0 for n, v in LAM_DICT.items() if math.log(n) < x and v)
        assert total_variation_exact(rho_lam, x) == pytest.approx(2 * rise - naive_rho(LAM_DICT, 2.0, x), rel=1e-13)


def test_oracle_single_jump():
    rho = single_jump(1.0)
    est = total_variation_oracle(rho, 2.0, trials=1000, seed=7)
    assert abs(est - 0.8646647167633873) < 1e-3
    assert est <= total_variation_exact(rho, 2.0) + 1e-10


def test_oracle_coarsest_subdivision(rho_lam):
    X = 3.0
    assert subdivision_sum(rho_lam, Subdivision([0.0, X])) == pytest.approx(rho_lam(X))


def test_oracle_lambda_tight(rho_lam):
    X = math.log(100)
    exact = total_variation_exact(rho_lam, X)
    est = total_variation_oracle(rho_lam, X, trials=10**4, seed=3)
    assert est <= exact + 1e-10
    assert exact - est < 1e-4


def test_oracle_without_jump_anchors_is_a_lower_bound(rho_lam):
    X = math.log(50)
    est = total_variation_oracle(rho_lam, X, trials=200, seed=1, include_jumps=False)
    assert est <= total_variation_exact(rho_lam, X) + 1e-10


def test_oracle_deterministic(rho_lam):
    a = total_variation_oracle(rho_lam, 4.0, trials=20, seed=11)
    b = total_variation_oracle(rho_lam, 4.0, trials=20, seed=11)
    assert a == b


@settings(max_examples=40, deadline=None)
@given(x=st.floats(0.0, math.log(10**4)), seed=st.integers(0, 2**63))
def test_oracle_never_exceeds_exact(rho_lam, x, seed):
    assert total_variation_oracle(rho_lam, x, trials=3, seed=seed) <= total_variation_exact(rho_lam, x) + 1e-10


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, math.log(10**4)), st.floats(0.0, math.log(10**4)))
def test_tv_nondecreasing(rho_lam, x, y):
    lo, hi = sorted((x, y))
    assert total_variation_exact(rho_lam, lo) <= total_variation_exact(rho_lam, hi) + 1e-15


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
def test_bounded_variation_for_alpha_above_one(lam_1e6, alpha):
    rho = ExpDecayStepFunction.from_chi(lam_1e6, alpha)
    bound = 2 * mp_log_deriv(alpha).real
    xs = np.linspace(0, rho.upper, 400)
    assert np.all(total_variation_exact(rho, xs) <= bound)


def test_unbounded_variation_at_alpha_one(lam_1e6):
    rho = ExpDecayStepFunction.from_chi(lam_1e6, 1.0)
    values = [total_variation_exact(rho, math.log(10.0**k)) for k in range(2, 7)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 20


@pytest.mark.parametrize("alpha", [1.5, 2.0])
def test_bv_implies_bounded(rho_lam, alpha):
    rho = ExpDecayStepFunction(rho_lam.base, alpha)
    assert rho.sup() <= total_variation_exact(rho, rho.upper) + rho(0.0)
    xs = np.linspace(0, rho.upper, 2000)
    assert np.all(rho(xs) <= rho.sup() + 1e-15)


def test_smooth_function_variation():
    X = 3.0
    g = lambda x: np.exp(-np.asarray(x))  # noqa: E731
    est = total_variation_oracle(g, X, trials=50, seed=0)
    assert est == pytest.approx(1 - math.exp(-X), abs=1e-12)


def test_empty_function_has_no_variation():
    rho = empty()
    assert total_variation_exact(rho, 5.0) == 0.0
    assert total_variation_oracle(rho, 5.0, trials=5, seed=0) == 0.0


def test_lemma_check_single_jump():
    rho = single_jump(1.5)
    chk = lemma_bound_check(rho, 2.0)
    assert chk.lhs == pytest.approx(2 * 2**-1.5 - math.exp(-3))
    assert chk.rhs == pytest.approx(-math.exp(-3) + 2**-1.5)
    assert chk.corrected_bound == pytest.approx(2 * 2**-1.5)
    assert chk.holds is False
    assert chk.lhs <= chk.corrected_bound


def test_lemma_check_before_first_jump():
    chk = lemma_bound_check(single_jump(1.5), 0.3)
    assert (chk.lhs, chk.rhs, chk.holds) == (0.0, 0.0, True)


def test_lemma_check_lambda(rho_lam):
    chk = lemma_bound_check(rho_lam, math.log(10**4))
    assert chk.lhs <= chk.corrected_bound
    assert chk.lhs > chk.rhs  # the falls-only bound misses the rises


def test_subdivision_validation():
    with pytest.raises(ValueError):
        Subdivision([0.0])
    with pytest.raises(ValueError):
        Subdivision([0.1, 1.0])
    with pytest.raises(ValueError):
        Subdivision([0.0, 1.0, 1.0])


def test_constant_one_rho_jump_at_origin():
    rho = ExpDecayStepFunction.from_chi(constant_one(100), 2.0)
    assert rho(0.0) == 0.0
    assert rho.right_limit(0.0) == 1.0
    assert total_variation_exact(rho, 1e-9) == pytest.approx(2 - math.exp(-2e-9))


def test_variation_gap_decays_like_inverse_sqrt():
    # at alpha = 1.5 the gap to 2(-zeta'/zeta)(1.5) is about 5 N^(-1/2)
    from tauber_lab.arithfun import sieve_von_mangoldt
    from tauber_lab.zeta import log_deriv

    target = 2 * log_deriv(1.5).real
    for N in (10**6, 10**7):
        rho = ExpDecayStepFunction.from_chi(sieve_von_mangoldt(N), 1.5)
        gap = abs(total_variation_exact(rho, math.log(N)) - target)
        assert abs(gap * math.sqrt(N) - 5) < 0.05
    assert gap < 5e-3
