import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermion_ness import Kind, ReservoirSpec, SystemParams, diagonalize, occupation


def test_fermi_at_chemical_potential_is_half():
    assert occupation(Kind.FERMIONIC, 1.0, 0.2, 1.0) == pytest.approx(0.5, abs=1e-15)


def test_zero_temperature_limits():
    assert occupation(Kind.BOSONIC, 1.3, 0.0) == 0.0
    assert occupation(Kind.BOSONIC, 1.3, 1e-6) == 0.0
    assert occupation(Kind.FERMIONIC, 0.7, 0.0, 1.0) == 1.0
    assert occupation(Kind.FERMIONIC, 1.3, 0.0, 1.0) == 0.0
    assert occupation(Kind.FERMIONIC, 1.0, 0.0, 1.0) == 0.5


def test_occupation_values():
    assert occupation("bosonic", 1.0, 0.5) == pytest.approx(1 / (math.e**2 - 1), rel=1e-14)
    assert occupation("fermionic", 1.3, 0.2, 0.5) == pytest.approx(1 / (math.e**4 + 1), rel=1e-14)


def test_vacancy_keeps_relative_accuracy():
    # 1 - n for a deeply filled level, where 1 - occupation would cancel to 0
    r = ReservoirSpec.fermionic(0.01, 2.0)
    assert r.vacancy(0.7) == pytest.approx(math.exp(-130.0), rel=1e-12)
    assert r.occupation(0.7) + r.vacancy(0.7) == pytest.approx(1.0, abs=1e-15)


def test_occupation_arrays():
    out = occupation("fermionic", np.array([0.5, 1.0, 1.5]), 0.1, 1.0)
    assert out.shape == (3,)
    assert out[1] == 0.5


@pytest.mark.parametrize("args", [
    ("bosonic", 0.0, 0.1, 0.0),
    ("fermionic", -1.0, 0.1, 0.0),
    ("bosonic", 1.0, 0.1, 0.2),
    ("bosonic", 1.0, -0.1, 0.0),
])
def test_occupation_errors(args):
    with pytest.raises(ValueError):
        occupation(*args)


def test_params_validation():
    with pytest.raises(ValueError):
        SystemParams(1, 1, 0.0, 0.05, 0.05)
    with pytest.raises(ValueError):
        SystemParams(0, 1, 0.3, 0.05, 0.05)
    with pytest.raises(ValueError):
        SystemParams(1, 1, 0.3, 0, 0)
    with pytest.raises(ValueError):
        SystemParams(1, 1, 0.3, -0.1, 0.05)
    with pytest.raises(ValueError):
        SystemParams(1, float("nan"), 0.3, 0.05, 0.05)
    assert SystemParams(1, 1, 0.3, 0.0, 0.05).gamma1 == 0.0


def test_reservoir_validation():
    with pytest.raises(ValueError):
        ReservoirSpec("bosonic", 0.2, 0.1)
    with pytest.raises(ValueError):
        ReservoirSpec("fermionic", -0.2, 0.1)
    assert ReservoirSpec("fermionic", 0.2, 0.1).kind is Kind.FERMIONIC


def test_symmetric_eigenmodes():
    e = diagonalize(SystemParams.symmetric(delta=0.3))
    assert (e.omega1p, e.omega2p) == pytest.approx((0.7, 1.3), abs=1e-15)
    assert e.c == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert e.s == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    e = diagonalize(SystemParams.symmetric(delta=0.05))
    assert (e.omega1p, e.omega2p) == pytest.approx((0.95, 1.05), abs=1e-15)


def test_asymmetric_gap():
    e = diagonalize(SystemParams(0.8, 1.2, 0.3, 0.05, 0.05))
    assert e.gap == pytest.approx(0.721110255092797858, abs=1e-14)


def test_lower_mode_leans_on_lower_site():
    # site 1 lower: the lower mode (c*eta2 - s*eta1) must carry weight s**2 > 1/2 on site 1
    e = diagonalize(SystemParams(0.8, 1.2, 0.3, 0.05, 0.05))
    assert e.s**2 > 0.5 > e.c**2


params_st = st.builds(
    SystemParams,
    st.floats(0.1, 3.0), st.floats(0.1, 3.0),
    st.floats(0.01, 1.0) | st.floats(-1.0, -0.01),
    st.floats(0.001, 0.2), st.floats(0.001, 0.2),
)


@given(params_st)
def test_diagonalize_invariants(p):
    e = diagonalize(p)
    assert e.c**2 + e.s**2 == pytest.approx(1.0, abs=1e-12)
    assert e.omega1p <= e.omega2p
    assert e.gap == pytest.approx(math.hypot(p.omega1 - p.omega2, 2 * p.delta), abs=1e-12)
    # the rotation really diagonalizes the single-particle matrix
    h = np.array([[p.omega1, p.delta], [p.delta, p.omega2]])
    lower = np.array([-e.s, e.c])
    upper = -np.array([e.c, e.s])
    assert h @ lower == pytest.approx(e.omega1p * lower, abs=1e-12)
    assert h @ upper == pytest.approx(e.omega2p * upper, abs=1e-12)


@settings(max_examples=50)
@given(st.floats(0.05, 5.0), st.floats(0.01, 2.0), st.floats(1.0, 3.0))
def test_bose_monotone_in_temperature(w, t, factor):
    assert occupation("bosonic", w, t * factor) >= occupation("bosonic", w, t)


@settings(max_examples=50)
@given(st.floats(0.05, 5.0), st.floats(-3.0, 3.0))
def test_fermi_high_temperature_limit(w, mu):
    assert occupation("fermionic", w, 1e6, mu) == pytest.approx(0.5, abs=1e-5)
