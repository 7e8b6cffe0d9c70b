"""Entanglement and correlation measures of local-basis X states.

Entropies are in bits. Subsystem A is site 1, subsystem B is site 2, and
classical correlation is defined through projective measurements on B.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import xlogy

from .states import Basis, bloch_decompose, canonicalize_phase, eigenvalues

LN2 = math.log(2)
DEFAULT_GRID = (129, 257)


class ClassicalCorrelation(NamedTuple):
    cc: float
    s1: float
    s2: float
    branch: str


@dataclass(frozen=True)
class CorrelationReport:
    concurrence: float
    qmi: float
    cc: float
    qd: float
    s1: float
    s2: float
    branch: str
    cc_oracle: Optional[float] = None
    oracle_gap: Optional[float] = None


def _require_local(state):
    if state.basis is not Basis.LOCAL:
        raise ValueError("correlation measures need a local-basis state")


def binary_entropy_f(t):
    """f(t) such that the entropy of the distribution ((1-t)/2, (1+t)/2) is 1 + f(t)."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1):
        raise ValueError("f(t) needs |t| <= 1")
    out = -(xlogy(1 - t, 1 - t) + xlogy(1 + t, 1 + t)) / (2 * LN2)
    return float(out) if out.ndim == 0 else out


def shannon_bits(p):
    """Entropy in bits along the last axis. Tiny negative weights count as zero."""
    p = np.clip(np.asarray(p, dtype=float), 0, None)
    return -xlogy(p, p).sum(axis=-1) / LN2


def _f_clipped(t):
    # marginally non-positive Redfield states can push |t| a hair above 1
    return binary_entropy_f(min(1.0, max(-1.0, t)))


def concurrence(state):
    _require_local(state)
    corner = math.sqrt(max(state.p11 * state.p44, 0.0))
    return 2 * max(0.0, abs(state.rho23) - corner)


def qmi(state):
    _require_local(state)
    k = bloch_decompose(canonicalize_phase(state))
    s_a = 1 + _f_clipped(k.r)
    s_b = 1 + _f_clipped(k.s)
    return s_a + s_b - shannon_bits(eigenvalues(k))


def _z_conditional_entropy(k):
    """Conditional entropy of A after measuring B along z, from Bloch coefficients."""
    total = 0.0
    for a, b in ((1 + k.r + k.s + k.c3, 1 + k.s), (1 - k.r + k.s - k.c3, 1 + k.s),
                 (1 + k.r - k.s - k.c3, 1 - k.s), (1 - k.r - k.s + k.c3, 1 - k.s)):
        if a > 0 and b > 0:
            total -= a / 4 * math.log2(a / (2 * b))
    return total


def classical_correlation_analytic(state):
    """Best of a z measurement (s1) and an equatorial measurement (s2) on B."""
    _require_local(state)
    k = bloch_decompose(canonicalize_phase(state))
    s_a = 1 + _f_clipped(k.r)
    s1 = _z_conditional_entropy(k)
    s2 = 1 + _f_clipped(math.hypot(k.r, k.c1))
    if s1 <= s2:
        return ClassicalCorrelation(s_a - s1, s1, s2, "s1")
    return ClassicalCorrelation(s_a - s2, s1, s2, "s2")


# -- brute-force measurement search ------------------------------------------

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]])
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _matrix_entropy_bits(rho):
    return shannon_bits(np.linalg.eigvalsh(rho))


def _entropy_2x2_bits(m):
    """Entropy of unit-trace 2x2 Hermitian matrices stacked on the leading axes."""
    a, d = m[..., 0, 0].real, m[..., 1, 1].real
    half = np.sqrt(0.25 * (a - d) ** 2 + np.abs(m[..., 0, 1]) ** 2)
    mid = 0.5 * (a + d)
    return shannon_bits(np.stack([mid + half, mid - half], axis=-1))


def measurement_conditional_entropy(state, theta, phi):
    """sum_k p_k S(rho_k) for a projective measurement of B along (theta, phi).

    After outcome k the two sites are in the product of the conditional state
    of A with the projector on B, so S(rho_k) is the entropy of that
    conditional 2x2 state. ``theta`` and ``phi`` broadcast against each other.
    """
    rho = state.matrix().reshape(2, 2, 2, 2)  # (a, j, b, l): site 1 row, site 2 row, ...
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], -1)
    ndotsigma = np.einsum("...i,ijk->...jk", n, np.stack([_SX, _SY, _SZ]))
    total = np.zeros(theta.shape)
    for sign in (1, -1):
        proj = 0.5 * (np.eye(2) + sign * ndotsigma)
        cond = np.einsum("...lj,ajbl->...ab", proj, rho)
        p = np.trace(cond, axis1=-2, axis2=-1).real
        ok = p > 1e-300
        safe = np.where(ok, p, 1.0)[..., None, None]
        total += np.where(ok, p * _entropy_2x2_bits(cond / safe), 0.0)
    return total


def _reduced_a_entropy(state):
    rho = state.matrix().reshape(2, 2, 2, 2)
    return float(_matrix_entropy_bits(np.einsum("ajbj->ab", rho)))


def _golden_min(f, a, b, tol):
    inv = (math.sqrt(5) - 1) / 2
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def classical_correlation_bruteforce(state, grid=DEFAULT_GRID, tol=1e-8, full_output=False):
    """Maximize S(A) - S(A|measurement on B) over measurement directions.

    A polar x azimuthal grid is followed by alternating golden-section
    refinement of the two angles. With ``full_output`` the optimal
    ``(theta, phi)`` is returned as well.
    """
    _require_local(state)
    n_theta, n_phi = grid
    if min(n_theta, n_phi) < 64:
        raise ValueError("grid needs at least 64 points per angle")
    thetas = np.linspace(0, math.pi, n_theta)
    phis = np.linspace(0, 2 * math.pi, n_phi)
    values = measurement_conditional_entropy(state, thetas[:, None], phis[None, :])
    i, j = np.unravel_index(np.argmin(values), values.shape)
    theta, phi, best = thetas[i], phis[j], values[i, j]
    h_theta, h_phi = thetas[1] - thetas[0], phis[1] - phis[0]

    def cond(t, p):
        return float(measurement_conditional_entropy(state, t, p))

    for _ in range(20):
        prev, prev_best = (theta, phi), best
        theta, best_t = _golden_min(lambda t: cond(t, phi), theta - h_theta, theta + h_theta, tol)
        phi, best_p = _golden_min(lambda p: cond(theta, p), phi - h_phi, phi + h_phi, tol)
        best = min(best, best_t, best_p)
        moved = max(abs(theta - prev[0]), abs(phi - prev[1]))
        # flat directions (e.g. phi at the poles) stop through the objective
        if moved < tol or prev_best - best < 1e-15:
            break
        h_theta = max(abs(theta - prev[0]) * 4, 10 * tol)
        h_phi = max(abs(phi - prev[1]) * 4, 10 * tol)
    cc = _reduced_a_entropy(state) - best
    if full_output:
        return cc, (theta, phi)
    return cc


def discord(state, oracle=False, grid=DEFAULT_GRID):
    _require_local(state)
    canon = canonicalize_phase(state)
    mutual = qmi(canon)
    cc, s1, s2, branch = classical_correlation_analytic(canon)
    cc_oracle = gap = None
    if oracle:
        cc_oracle = classical_correlation_bruteforce(state, grid)
        gap = abs(cc - cc_oracle)
    return CorrelationReport(concurrence(canon), mutual, cc, mutual - cc, s1, s2, branch,
                             cc_oracle, gap)
