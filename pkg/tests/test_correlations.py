import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermion_ness import Basis, ReservoirSpec, SystemParams, XState, canonicalize_phase, diagonalize, to_local
from fermion_ness.correlations import (
    _reduced_a_entropy,
    _z_conditional_entropy,
    binary_entropy_f,
    classical_correlation_analytic,
    classical_correlation_bruteforce,
    concurrence,
    discord,
    measurement_conditional_entropy,
    qmi,
)
from fermion_ness.redfield import steady_state
from fermion_ness.states import bloch_decompose

BELL = XState(0, 0.5, 0.5, 0, 0.5, Basis.LOCAL)
MIXED = XState(0.25, 0.25, 0.25, 0.25, 0, Basis.LOCAL)


def local(*p, rho23=0j):
    return XState(*p, rho23, Basis.LOCAL)


def test_concurrence_examples():
    assert concurrence(BELL) == 1
    assert concurrence(MIXED) == 0
    assert concurrence(local(0.1, 0.4, 0.4, 0.1, rho23=0.3)) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        concurrence(XState(0, 0.5, 0.5, 0, 0.5, Basis.ENERGY))


def test_binary_entropy_f():
    assert binary_entropy_f(0) == 0
    assert binary_entropy_f(1) == -1
    assert binary_entropy_f(-1) == -1
    assert binary_entropy_f(0.5) == pytest.approx(-0.188721875540867136, abs=1e-15)
    with pytest.raises(ValueError):
        binary_entropy_f(1.01)


def test_qmi_examples():
    p, q = 0.3, 0.8
    product = local(p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q))
    assert qmi(product) == pytest.approx(0, abs=1e-12)
    assert qmi(BELL) == pytest.approx(2, abs=1e-12)
    assert qmi(MIXED) == pytest.approx(0, abs=1e-12)


def test_analytic_cc_examples():
    assert classical_correlation_analytic(MIXED).cc == pytest.approx(0, abs=1e-12)
    cc = classical_correlation_analytic(BELL)
    assert cc.cc == pytest.approx(1, abs=1e-12)
    # equal candidates go to the z measurement
    assert classical_correlation_analytic(MIXED).branch == "s1"


def test_bruteforce_examples():
    assert classical_correlation_bruteforce(MIXED) == pytest.approx(0, abs=1e-9)
    assert classical_correlation_bruteforce(local(0.5, 0, 0, 0.5)) == pytest.approx(1, abs=1e-9)
    assert classical_correlation_bruteforce(BELL) == pytest.approx(1, abs=1e-9)
    with pytest.raises(ValueError):
        classical_correlation_bruteforce(BELL, grid=(16, 16))


def test_discord_examples():
    r = discord(BELL)
    assert (r.qd, r.cc, r.qmi, r.concurrence) == pytest.approx((1, 1, 2, 1), abs=1e-12)
    r = discord(MIXED, oracle=True)
    assert (r.qd, r.cc) == pytest.approx((0, 0), abs=1e-12)
    assert r.oracle_gap <= 1e-9


def test_equilibrium_fermionic_cc_near_oracle():
    p = SystemParams.symmetric()
    r = ReservoirSpec.fermionic(0.3, 1.0)
    s, _ = steady_state(p, r, r)
    rep = discord(to_local(s, diagonalize(p)), oracle=True)
    assert rep.oracle_gap <= 1e-3


def test_fermionic_low_temperature_plateau():
    p = SystemParams.symmetric()
    r = ReservoirSpec.fermionic(1e-3, 1.0)
    s, _ = steady_state(p, r, r)
    rep = discord(to_local(s, diagonalize(p)))
    assert rep.qd == pytest.approx(1, abs=1e-6)
    assert rep.concurrence == pytest.approx(1, abs=1e-6)


@st.composite
def x_states(draw):
    w = [draw(st.floats(0.0, 1.0)) for _ in range(4)]
    total = sum(w)
    if total < 1e-3:
        w, total = [1, 1, 1, 1], 4
    p = [x / total for x in w]
    mag = draw(st.floats(0, 1)) * math.sqrt(p[1] * p[2])
    phase = draw(st.floats(0, 2 * math.pi))
    return XState(*p, mag * complex(math.cos(phase), math.sin(phase)), Basis.LOCAL)


@given(x_states())
def test_report_invariants(s):
    r = discord(s)
    assert r.qd + r.cc == pytest.approx(r.qmi, abs=1e-12)
    assert 0 <= r.concurrence <= 1
    assert -1e-12 <= r.qmi <= 2 + 1e-12
    k = bloch_decompose(canonicalize_phase(s))
    s_a, s_b = 1 + binary_entropy_f(k.r), 1 + binary_entropy_f(k.s)
    assert r.cc == pytest.approx(s_a - min(r.s1, r.s2), abs=1e-12)
    assert r.cc <= min(s_a, s_b) + 1e-9


@given(x_states())
def test_phase_invariance_of_closed_forms(s):
    a, b = discord(s), discord(canonicalize_phase(s))
    assert (a.concurrence, a.qmi, a.cc) == (b.concurrence, b.qmi, b.cc)


@given(x_states())
def test_s1_is_the_z_measurement(s):
    k = bloch_decompose(canonicalize_phase(s))
    assert _z_conditional_entropy(k) == pytest.approx(
        float(measurement_conditional_entropy(s, 0.0, 0.0)), abs=1e-12)


@given(x_states())
def test_s2_is_an_equatorial_measurement(s):
    canon = canonicalize_phase(s)
    s2 = classical_correlation_analytic(canon).s2
    assert s2 == pytest.approx(float(measurement_conditional_entropy(canon, math.pi / 2, 0.0)), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(x_states())
def test_bruteforce_bounds(s):
    brute = classical_correlation_bruteforce(s)
    cc, s1, s2, _ = classical_correlation_analytic(canonicalize_phase(s))
    s_a = _reduced_a_entropy(s)
    assert brute >= s_a - s1 - 1e-9
    assert brute >= s_a - s2 - 1e-9
    assert abs(brute - cc) <= 1e-3
    assert classical_correlation_bruteforce(canonicalize_phase(s)) == pytest.approx(brute, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0, 2 * math.pi))
def test_pure_states_split_evenly(w, phase):
    a, b = math.sqrt(w), math.sqrt(1 - w)
    s = XState(0, w, 1 - w, 0, a * b * complex(math.cos(phase), math.sin(phase)), Basis.LOCAL)
    r = discord(s, oracle=True)
    assert r.cc == pytest.approx(r.qmi / 2, abs=1e-9)
    assert r.qd == pytest.approx(r.qmi / 2, abs=1e-9)
    assert r.cc_oracle == pytest.approx(r.qmi / 2, abs=1e-9)
