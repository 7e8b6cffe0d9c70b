import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermion_ness import (
    Basis, SystemParams, XState, bloch_decompose, canonicalize_phase, diagonalize,
    eigenvalues, to_local,
)

SYM = diagonalize(SystemParams.symmetric())


def local(*p, rho23=0j):
    return XState(*p, rho23, Basis.LOCAL)


def energy(*p, rho23=0j):
    return XState(*p, rho23, Basis.ENERGY)


def test_trace_checked():
    with pytest.raises(ValueError):
        XState(0.5, 0.5, 0.5, 0, 0, Basis.LOCAL)
    with pytest.raises(ValueError):
        XState(1, 0, 0, 0, complex("nan"), Basis.LOCAL)


def test_vector_round_trip():
    s = energy(0.4, 0.3, 0.2, 0.1, rho23=0.05 - 0.02j)
    assert XState.from_vector(s.vector(), Basis.ENERGY) == s
    assert XState.from_matrix(s.matrix(), Basis.ENERGY) == s
    assert s.vector()[5] == s.rho23.conjugate()


def test_min_eigenvalue_matches_matrix():
    s = energy(0.4, 0.3, 0.2, 0.1, rho23=0.3j)
    assert s.min_eigenvalue() == pytest.approx(np.linalg.eigvalsh(s.matrix()).min(), abs=1e-15)
    assert not s.is_positive()


def test_to_local_bell_state():
    # an upper-mode pure state is a local superposition of |01> and |10>
    out = to_local(energy(0, 0, 1, 0), SYM)
    assert out.basis is Basis.LOCAL
    assert (out.p22, out.p33) == pytest.approx((0.5, 0.5), abs=1e-15)
    assert abs(out.rho23) == pytest.approx(0.5, abs=1e-15)


def test_to_local_symmetric_form():
    s = energy(0.1, 0.35, 0.25, 0.3, rho23=0.04 + 0.03j)
    out = to_local(s, SYM)
    mean = 0.5 * (s.p22 + s.p33)
    assert out.p22 == pytest.approx(mean - s.rho23.real, abs=1e-15)
    assert out.p33 == pytest.approx(mean + s.rho23.real, abs=1e-15)
    assert out.rho23 == pytest.approx(complex(-0.5 * (s.p22 - s.p33), s.rho23.imag), abs=1e-15)


def test_to_local_equal_populations_real_coherence():
    out = to_local(energy(0.2, 0.3, 0.3, 0.2, rho23=0.1), SYM)
    assert (out.p22, out.p33) == pytest.approx((0.2, 0.4), abs=1e-15)
    assert out.rho23 == pytest.approx(0, abs=1e-15)


def test_to_local_requires_energy_basis():
    with pytest.raises(ValueError):
        to_local(local(1, 0, 0, 0), SYM)


def test_canonicalize_phase():
    assert canonicalize_phase(local(0.4, 0.3, 0.2, 0.1, rho23=0.1j)).rho23 == pytest.approx(0.1)
    assert canonicalize_phase(local(0.4, 0.3, 0.2, 0.1, rho23=0.03 - 0.04j)).rho23 == pytest.approx(0.05)
    s = local(0.4, 0.3, 0.2, 0.1)
    assert canonicalize_phase(s) is s


def test_bloch_examples():
    k = bloch_decompose(local(0.25, 0.25, 0.25, 0.25))
    assert (k.r, k.s, k.c1, k.c2, k.c3) == (0, 0, 0, 0, 0)
    k = bloch_decompose(local(1, 0, 0, 0))
    assert (k.r, k.s, k.c1, k.c2, k.c3) == (1, 1, 0, 0, 1)
    k = bloch_decompose(local(0, 0.5, 0.5, 0, rho23=0.5))
    assert (k.r, k.s, k.c1, k.c2, k.c3) == (0, 0, 1, 1, -1)
    with pytest.raises(ValueError):
        bloch_decompose(local(0, 0.5, 0.5, 0, rho23=-0.5))


def test_bloch_reconstructs_matrix():
    s = canonicalize_phase(local(0.4, 0.3, 0.2, 0.1, rho23=0.05j))
    k = bloch_decompose(s)
    z = np.diag([1, -1])
    x = np.array([[0, 1], [1, 0]])
    y = np.array([[0, -1j], [1j, 0]])
    i2 = np.eye(2)
    rho = (np.eye(4) + k.r * np.kron(z, i2) + k.s * np.kron(i2, z)
           + k.c1 * np.kron(x, x) + k.c2 * np.kron(y, y) + k.c3 * np.kron(z, z)) / 4
    assert rho == pytest.approx(s.matrix(), abs=1e-15)


def test_eigenvalue_examples():
    from fermion_ness.states import BlochCoefficients
    assert eigenvalues(BlochCoefficients(0, 0, 0, 0, 0)) == pytest.approx([0.25] * 4)
    assert sorted(eigenvalues(BlochCoefficients(0, 0, 1, 1, -1))) == pytest.approx([0, 0, 0, 1])


@st.composite
def x_states(draw, basis=Basis.LOCAL):
    w = [draw(st.floats(0.0, 1.0)) for _ in range(4)]
    total = sum(w)
    if total < 1e-3:
        w, total = [1, 1, 1, 1], 4
    p = [x / total for x in w]
    mag = draw(st.floats(0, 1)) * math.sqrt(p[1] * p[2])
    phase = draw(st.floats(0, 2 * math.pi))
    return XState(*p, mag * complex(math.cos(phase), math.sin(phase)), basis)


@given(x_states(Basis.ENERGY), st.floats(0.5, 1.5), st.floats(0.5, 1.5), st.floats(-0.5, 0.5).filter(lambda d: abs(d) > 1e-3))
def test_to_local_is_unitary(s, w1, w2, d):
    eig = diagonalize(SystemParams(w1, w2, d, 0.05, 0.05))
    out = to_local(s, eig)
    assert out.trace == pytest.approx(1, abs=1e-12)
    a = np.linalg.eigvalsh(s.matrix())
    b = np.linalg.eigvalsh(out.matrix())
    assert b == pytest.approx(a, abs=1e-12)


@given(x_states())
def test_closed_form_eigenvalues(s):
    lam = eigenvalues(bloch_decompose(canonicalize_phase(s)))
    assert lam.sum() == pytest.approx(1, abs=1e-12)
    assert sorted(lam) == pytest.approx(np.linalg.eigvalsh(s.matrix()), abs=1e-12)
    assert lam.min() >= -1e-10


@given(x_states())
def test_canonicalize_keeps_populations_and_modulus(s):
    c = canonicalize_phase(s)
    assert c.populations == pytest.approx(s.populations)
    assert c.rho23.imag == 0 and c.rho23.real == pytest.approx(abs(s.rho23), abs=1e-15)
