import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import eta_zeta, mp_log_deriv, mp_zeta, zeta_partial_plus_tail
from tauber_lab.errors import DomainError, NearZeroError, PoleProximityError, UnreliableProbe
from tauber_lab.transforms import dirichlet_eval
from tauber_lab.zeta import (
    ZetaEvaluator,
    log_deriv,
    nonvanishing_scan,
    pole_location_probe,
    residue_probe,
    zeta,
    zeta_prime,
    zeta_prime_richardson,
)


def test_zeta_two():
    res = zeta(2)
    assert abs(res.value - math.pi**2 / 6) < 1e-13
    assert res.error_estimate < 1e-12


def test_zeta_near_pole_residue():
    s = 1 + 1e-4
    res = zeta(s)
    assert abs((s - 1) * res.value - 1) < 1e-4
    assert abs(res.value - (1e4 + 0.5772156649015329)) < 1e-3


def test_zeta_half_against_eta():
    assert abs(zeta(0.5).value - eta_zeta(0.5)) < 1e-10
    assert abs(zeta(0.5).value - (-1.4603545088095868)) < 1e-12


def test_zeta_against_independent_tail():
    for s in (1.5, 3.0):
        assert abs(zeta(s).value - zeta_partial_plus_tail(s)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 8), st.floats(-60, 60))
def test_zeta_against_mpmath(sigma, t):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-3:
        return
    res = zeta(s)
    truth = mp_zeta(s)
    assert abs(res.value - truth) <= res.error_estimate + 1e-12 * abs(truth)


def test_zeta_prime_two():
    assert abs(zeta_prime(2).value - (-0.9375482543158437)) < 1e-12
    assert abs(zeta_prime_richardson(2) - (-0.9375482543158437)) < 1e-9


def test_zeta_prime_three():
    assert zeta_prime(3).value.real == pytest.approx(-0.19812624288, abs=1e-10)
    assert abs(zeta_prime(3).value - zeta_prime_richardson(3)) < 1e-9


@pytest.mark.parametrize("s", [0.5 + 3j, 2 - 7j, 1.2 + 20j])
def test_zeta_prime_vs_richardson(s):
    assert abs(zeta_prime(s).value - zeta_prime_richardson(s)) < 1e-8


def test_log_deriv_matches_mpmath():
    for s in (2, 3, 1.5, 1 + 14j, 4 - 2j):
        res = log_deriv(s)
        assert abs(res.value - mp_log_deriv(s)) <= res.error_estimate + 1e-13


def test_log_deriv_three_value():
    # the value feeding the damped-Lambda transform at alpha = 2, s = 1
    assert log_deriv(3).value.real == pytest.approx(0.16482268215, abs=1e-10)


@pytest.mark.parametrize("s", [2.0, 4.0])
def test_log_deriv_vs_sieve(lam_1e6, s):
    d = dirichlet_eval(lam_1e6, s)
    lz = log_deriv(s)
    assert abs(d.value - lz.value) <= d.error_estimate + lz.error_estimate


def test_conjugate_symmetry():
    for s in (0.3 + 5j, 2 + 1j, 1 + 30j):
        assert abs(zeta(s.conjugate()).value - zeta(s).value.conjugate()) < 1e-14
        assert abs(zeta_prime(s.conjugate()).value - zeta_prime(s).value.conjugate()) < 1e-13


def test_cutoff_doubling_consistent():
    a, b = ZetaEvaluator(100, 4), ZetaEvaluator(200, 4)
    for s in (0.5, 2 + 10j, 1.1):
        ra, rb = a.zeta(s), b.zeta(s)
        assert abs(ra.value - rb.value) <= ra.error_estimate + rb.error_estimate


def test_error_estimate_shrinks_with_m():
    errs = [ZetaEvaluator(50, m).zeta(2 + 5j).error_estimate for m in (1, 2, 4, 8)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_zeta_array_matches_scalar():
    pts = np.array([0.5, 2 + 1j, 3 - 4j])
    arr = ZetaEvaluator().zeta_array(pts)
    for p, v in zip(pts, arr):
        assert abs(v - zeta(p).value) < 1e-15 * max(1, abs(v))


def test_domain_errors():
    with pytest.raises(DomainError):
        zeta(0.0)
    with pytest.raises(DomainError):
        zeta(-1 + 2j)
    with pytest.raises(PoleProximityError):
        zeta(1 + 1e-9)
    with pytest.raises(PoleProximityError):
        log_deriv(1.0)
    with pytest.raises(ValueError):
        ZetaEvaluator(5, 4)
    with pytest.raises(ValueError):
        ZetaEvaluator(100, 9)


def test_near_zero_guard():
    # first nontrivial zero
    with pytest.raises(NearZeroError) as info:
        ZetaEvaluator(400, 8).log_deriv(0.5 + 14.134725141734693j)
    assert info.value.magnitude <= 1e-12


def test_residue_of_zeta_at_one():
    r = residue_probe(lambda s: zeta(s).value, 1.0, 0.25)
    assert abs(r - 1) < 1e-10


def test_residue_of_log_deriv_at_one():
    r = residue_probe(lambda s: log_deriv(s).value, 1.0, 0.25)
    assert abs(r - 1) < 1e-10


def test_residue_node_stability():
    fn = lambda s: log_deriv(s).value
    vals = [residue_probe(fn, 1.0, 0.25, nodes=n) for n in (64, 128, 256)]
    assert max(abs(v - vals[-1]) for v in vals) < 1e-10


def test_residue_probe_no_pole():
    assert abs(residue_probe(lambda s: zeta(s).value, 2.0, 0.5)) < 1e-12


def test_residue_probe_unreliable():
    # the contour passes a hair away from the pole, so 32 and 64 nodes disagree
    with pytest.raises(UnreliableProbe):
        residue_probe(lambda s: 1 / (s - 1.0999), 1.0, 0.1, nodes=32, tol=1e-12)
    with pytest.raises(ValueError):
        residue_probe(lambda s: s, 1.0, 0.1, nodes=8)
    with pytest.raises(ValueError):
        residue_probe(lambda s: s, 1.0, -0.1)


def test_pole_location():
    p = pole_location_probe(lambda s: log_deriv(s).value, 1.1, 0.4)
    assert abs(p - 1) < 1e-9


def test_nonvanishing_scan():
    res = nonvanishing_scan(0.5, 30, 0.01)
    assert res.min_abs > 0.3
    assert 13.5 < res.argmin_t < 14.5
    with pytest.raises(ValueError):
        nonvanishing_scan(0, 1, 0)
