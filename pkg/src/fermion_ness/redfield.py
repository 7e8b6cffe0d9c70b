"""Redfield generator on the X block and the routes to its steady state.

The X block is the component vector (p11, p22, p33, p44, rho23, rho32) in the
energy basis. ``Generator.m[i, j]`` is the coefficient of component ``j`` in
the time derivative of component ``i``.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import Kind, diagonalize
from .states import Basis, XState

P11, P22, P33, P44, R23, R32 = range(6)
VARIANTS = ("corrected", "printed")


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Generator:
    m: np.ndarray
    kind: Kind


@dataclass(frozen=True)
class SolveInfo:
    residual: float
    condition: float


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    vectors: np.ndarray  # shape (len(times), 6)
    converged: bool
    residual: float
    dt: float

    def state(self, i):
        return XState.from_vector(self.vectors[i], Basis.ENERGY)

    @property
    def final(self):
        return self.state(-1)


def _check_kinds(r1, r2):
    if r1.kind is not r2.kind:
        raise ValueError("both reservoirs must be of the same kind")
    return r1.kind


def mode_occupations(eig, r1, r2):
    """(n11, n12, n21, n22): n_ik is mode i seen by reservoir k."""
    return (r1.occupation(eig.omega1p), r2.occupation(eig.omega1p),
            r1.occupation(eig.omega2p), r2.occupation(eig.omega2p))


def mode_vacancies(eig, r1, r2):
    """Same layout as ``mode_occupations`` for 1 - n."""
    return (r1.vacancy(eig.omega1p), r2.vacancy(eig.omega1p),
            r1.vacancy(eig.omega2p), r2.vacancy(eig.omega2p))


def build_generator(params, r1, r2, eig=None, variant="corrected"):
    """Assemble the 6x6 generator.

    ``variant`` only matters for bosonic reservoirs. ``"printed"`` omits the
    s*c factor on the bias part of the p22 <- coherence coupling; ``"corrected"``
    (default) includes it and agrees with the dissipator-level construction.
    """
    kind = _check_kinds(r1, r2)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    eig = eig or diagonalize(params)
    c, s = eig.c, eig.s
    sc = s * c
    g1, g2 = params.gamma1, params.gamma2
    n11, n12, n21, n22 = mode_occupations(eig, r1, r2)
    a1 = s * s * n11 + c * c * n12
    a2 = c * c * n21 + s * s * n22
    bias = g1 * (n11 - n12) + g2 * (n21 - n22)

    m = np.zeros((6, 6), dtype=complex)
    m[P11, P11] = -2 * (g1 * a1 + g2 * a2)
    if kind is Kind.BOSONIC:
        m[P11, P22] = 2 * g1 * a1 + 2 * g1
        m[P11, P33] = 2 * g2 * a2 + 2 * g2
        m[P11, R23] = sc * bias
        m[P22, P11] = m[P11, P22] - 2 * g1
        m[P22, P22] = m[P11, P11] - 2 * g1
        m[P22, P44] = m[P11, P33]
        factor = sc if variant == "corrected" else 1.0
        x = -m[P11, R23] + 2 * g1 * (n11 - n12) * factor
        m[P22, R23] = x
        m[P33, P11] = 2 * g2 * a2
        m[P33, P33] = m[P11, P11] - 2 * g2
        m[P33, P44] = m[P11, P22]
        m[P33, R23] = -x
        m[P44, P44] = -m[P11, P22] - m[P11, P33]
        m[P44, R23] = -m[P11, R23]
        m[R23, P11] = m[P11, R23]
        m[R23, P22] = -x
        m[R23, P33] = x
        m[R23, P44] = -m[P11, R23]
        m[R23, R23] = m[P11, P11] - g1 - g2
    else:
        # 1 - a_i from vacancies directly, so nearly filled modes keep their small rates
        h11, h12, h21, h22 = mode_vacancies(eig, r1, r2)
        b1 = s * s * h11 + c * c * h12
        b2 = c * c * h21 + s * s * h22
        m[P11, P22] = 2 * g1 * b1
        m[P11, P33] = 2 * g2 * b2
        m[P11, R23] = -sc * bias
        m[P22, P11] = 2 * g1 * a1
        m[P22, P22] = -2 * g1 * b1 - 2 * g2 * a2
        m[P22, P44] = m[P11, P33]
        m[P22, R23] = -m[P11, R23]
        m[P33, P11] = 2 * g2 * a2
        m[P33, P33] = -2 * g1 * a1 - 2 * g2 * b2
        m[P33, P44] = m[P11, P22]
        m[P33, R23] = -m[P11, R23]
        m[P44, P44] = -m[P11, P22] - m[P11, P33]
        m[P44, R23] = m[P11, R23]
        m[R23, :4] = -m[P11, R23]
        m[R23, R23] = -g1 - g2
    m[P44, P22] = m[P33, P11]
    m[P44, P33] = m[P22, P11]
    m[R23, R23] += 1j * (eig.omega2p - eig.omega1p)
    # populations couple to rho23 and rho32 with the same real weight
    m[:4, R32] = m[:4, R23]
    m[R32, :4] = m[R23, :4].conj()
    m[R32, R32] = m[R23, R23].conjugate()
    return Generator(m, kind)


# -- dissipator-level construction, used as an independent oracle ----------

def mode_operators():
    """Annihilators of the lower and upper modes in the 4x4 energy basis."""
    z1d = np.zeros((4, 4))
    z1d[1, 0] = 1
    z1d[3, 2] = -1
    z2d = np.zeros((4, 4))
    z2d[2, 0] = 1
    z2d[3, 1] = 1
    return z1d.T, z2d.T


def reservoir_dissipator(params, r1, r2, which, eig=None):
    """Return ``f(rho) -> d rho/dt`` due to reservoir ``which`` (1 or 2) alone.

    Built directly from products of mode operators, without any of the
    matrix-element bookkeeping of ``build_generator``.
    """
    kind = _check_kinds(r1, r2)
    eig = eig or diagonalize(params)
    c, s = eig.c, eig.s
    sign = 1 if kind is Kind.BOSONIC else -1
    z1, z2 = mode_operators()
    z1d, z2d = z1.T, z2.T
    res = r1 if which == 1 else r2
    n1 = res.occupation(eig.omega1p)
    n2 = res.occupation(eig.omega2p)
    w1, w2 = (s * s, c * c) if which == 1 else (c * c, s * s)
    sc = s * c if which == 1 else -s * c
    g1, g2 = params.gamma1, params.gamma2

    def diss(r, ad, a, n):
        return ((1 + sign * n) * (ad @ a @ r + r @ ad @ a - 2 * a @ r @ ad)
                + n * (a @ ad @ r + r @ a @ ad - 2 * ad @ r @ a))

    def cross(r, ad, a, bd, b, n):
        # mixed term: absorb into mode a, emit from mode b
        return ((1 + sign * n) * (bd @ a @ r + r @ ad @ b - b @ r @ ad - a @ r @ bd)
                + n * (b @ ad @ r + r @ a @ bd - bd @ r @ a - ad @ r @ b))

    def f(r):
        out = g1 * w1 * diss(r, z1d, z1, n1) + g2 * w2 * diss(r, z2d, z2, n2)
        out = out + g1 * sc * cross(r, z1d, z1, z2d, z2, n1)
        out = out + g2 * sc * cross(r, z2d, z2, z1d, z1, n2)
        return -out

    return f


def liouvillian_from_dissipators(params, r1, r2, eig=None):
    """Full 16x16 superoperator acting on row-major flattened 4x4 matrices."""
    eig = eig or diagonalize(params)
    h = np.diag([0, eig.omega1p, eig.omega2p, eig.omega1p + eig.omega2p])
    d1 = reservoir_dissipator(params, r1, r2, 1, eig)
    d2 = reservoir_dissipator(params, r1, r2, 2, eig)
    L = np.zeros((16, 16), dtype=complex)
    for k in range(16):
        e = np.zeros(16, dtype=complex)
        e[k] = 1
        rho = e.reshape(4, 4)
        L[:, k] = (1j * (rho @ h - h @ rho) + d1(rho) + d2(rho)).ravel()
    return L


X_INDICES = (0, 5, 10, 15, 6, 9)  # flattened positions of the X components


def x_block(L):
    idx = np.array(X_INDICES)
    return L[np.ix_(idx, idx)]


# -- steady-state routes ----------------------------------------------------

def _real_system(m):
    """Map real unknowns (p11..p44, Re rho23, Im rho23) to the 6 real equations."""
    b = np.zeros((6, 6), dtype=complex)
    b[:4, :4] = np.eye(4)
    b[R23, 4], b[R23, 5] = 1, 1j
    b[R32, 4], b[R32, 5] = 1, -1j
    mb = m @ b
    return np.vstack([mb[:4].real, mb[R23].real, mb[R23].imag])


def _solve_with_trace_row(a, row):
    a = a.copy()
    a[row] = [1, 1, 1, 1, 0, 0]
    rhs = np.zeros(6)
    rhs[row] = 1
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > 1e13:
        raise np.linalg.LinAlgError(
            f"steady state is not unique (condition number {cond:.3g})")
    return np.linalg.solve(a, rhs), cond


def _polish_small_populations(m, v):
    """Recompute the small populations from their own balance rows.

    A dense solve only fixes each component to about eps * max|x|, which is
    coarse for populations near 1e-16 (their square roots enter the
    concurrence). Solving row i for p_i, smallest first, restores relative
    accuracy whenever the row's inflow terms are themselves accurate.
    """
    out = v.copy()
    small = np.argsort(v[:4].real)[:3]
    for _ in range(100):
        prev = out.copy()
        for i in small:
            d = m[i, i].real
            if d < 0:
                out[i] = -(m[i] @ out - m[i, i] * out[i]).real / d
        if np.all(np.abs(out - prev) <= 1e-15 * np.abs(out)):
            break
    if np.abs(m @ out).max() > max(np.abs(m @ v).max(), 1e-14):
        return v
    return out / out[:4].real.sum()


def steady_state_nullspace(g, full_output=False):
    """Solve m x = 0 with unit trace and rho32 = conj(rho23).

    The trace condition replaces the balance equation of the largest
    population, so small populations come from their own balance equations
    rather than from 1 minus the others.
    """
    a = _real_system(g.m)
    u, cond = _solve_with_trace_row(a, 0)
    largest = int(np.argmax(u[:4]))
    if largest != 0:
        u, cond = _solve_with_trace_row(a, largest)
    v = _polish_small_populations(g.m, np.array([*u[:4], u[4] + 1j * u[5], u[4] - 1j * u[5]]))
    state = XState.from_vector(v, Basis.ENERGY)
    if full_output:
        return state, SolveInfo(residual(g, state), float(cond))
    return state


def residual(g, state):
    return float(np.abs(g.m @ state.vector()).max())


def _require_symmetric(params, r1, r2):
    _check_kinds(r1, r2)
    if params.omega1 != params.omega2 or params.gamma1 != params.gamma2:
        raise ValueError("closed-form routes need omega1 == omega2 and gamma1 == gamma2")


def _sums_and_differences(params, r1, r2, eig):
    n11, n12, n21, n22 = mode_occupations(eig, r1, r2)
    return n11 + n12, n21 + n22, n11 - n12, n21 - n22


def steady_state_closed_form(params, r1, r2):
    """Exact steady state for equal site energies and equal decay rates."""
    _require_symmetric(params, r1, r2)
    eig = diagonalize(params)
    G = params.gamma1
    G2 = G * G
    w = eig.omega1p - eig.omega2p
    w2 = w * w
    n1p, n2p, n1m, n2m = _sums_and_differences(params, r1, r2, eig)
    if r1.kind is Kind.FERMIONIC:
        h11, h12, h21, h22 = mode_vacancies(eig, r1, r2)
        v1, v2 = h11 + h12, h21 + h22  # 2 - n1p, 2 - n2p
        m = n1m + n2m
        norm = 4 * (4 * G2 + w2)
        p = [
            G2 * (4 * v1 * v2 - m * m) + v1 * v2 * w2,
            G2 * (m * m + 4 * n1p * v2) + n1p * v2 * w2,
            G2 * (m * m + 4 * v1 * n2p) + v1 * n2p * w2,
            G2 * (4 * n1p * n2p - m * m) + n1p * n2p * w2,
        ]
        rho23 = 4 * G2 * m - 2j * G * m * w
    else:
        sp = n1p + n2p
        mixed = n1m * n2m
        norm = (4 * G2 * (2 + sp) ** 2 * (1 + sp + n1p * n2p - mixed)
                + 4 * (1 + n1p) * (1 + n2p) * w2)
        p = [
            G2 * (16 + 3 * n2m**2 + 24 * n2p + n1p**3 * (2 + n2p)
                  + 2 * n1p**2 * (2 + n2p) * (3 + n2p) + n1m**2 * (3 + sp)
                  - mixed * (10 + n1p**2 + 2 * n1p * (3 + n2p) + n2p * (6 + n2p))
                  + n2p * (n2m**2 + 2 * n2p * (6 + n2p))
                  + n1p * (n2m**2 + (2 + n2p) ** 2 * (6 + n2p)))
            + (2 + n1p) * (2 + n2p) * w2,
            G2 * (n1p**3 * (2 + n2p) + 2 * n1p**2 * (2 + n2p) ** 2 - n2m**2 * (3 + n2p)
                  + n1m**2 * (1 + sp) + n1p * (-n2m**2 + (2 + n2p) ** 3)
                  - mixed * (2 + n1p**2 + 2 * n1p * (2 + n2p) + n2p * (4 + n2p)))
            + n1p * (2 + n2p) * w2,
            G2 * (-n1m**2 * (3 + sp)
                  - mixed * (2 + n1p**2 + 2 * n1p * n2p + 4 * n1p + n2p**2 + 4 * n2p)
                  + (2 + n1p) * n2p * (2 + sp) ** 2 + n2m**2 * (1 + sp))
            + (2 + n1p) * n2p * w2,
            G2 * (n1p * n2p * (2 + sp) ** 2 - (n1m**2 + n2m**2) * (1 + sp)
                  - mixed * (2 + n1p**2 + 2 * n1p * (1 + n2p) + n2p * (2 + n2p)))
            + n1p * n2p * w2,
        ]
        q = n1m + n2m + n1p * n2m + n1m * n2p
        rho23 = 2 * G2 * (2 + sp) * q - 2j * G * q * w
    # the formulas assume s*c > 0; a negative hopping flips the coherence
    sign = math.copysign(1.0, eig.s * eig.c)
    return XState(*(x / norm for x in p), sign * rho23 / norm, Basis.ENERGY)


def expansion_parameter(params):
    eig = diagonalize(params)
    return params.gamma1 / (eig.omega1p - eig.omega2p)


def steady_state_leading_order(params, r1, r2):
    """First order in g = Gamma/(omega1p - omega2p); equal decay rates and site energies."""
    _require_symmetric(params, r1, r2)
    eig = diagonalize(params)
    g = params.gamma1 / (eig.omega1p - eig.omega2p)
    if abs(g) >= 1:
        raise ValueError(f"|g| = {abs(g):.3g} is not small")
    if abs(g) > 0.25:
        warnings.warn(f"|g| = {abs(g):.3g} > 1/4, leading-order result is unreliable",
                      stacklevel=2)
    n1p, n2p, n1m, n2m = _sums_and_differences(params, r1, r2, eig)
    if r1.kind is Kind.FERMIONIC:
        h11, h12, h21, h22 = mode_vacancies(eig, r1, r2)
        f1, f2 = n1p / 2, n2p / 2
        e1, e2 = (h11 + h12) / 2, (h21 + h22) / 2
        p = [e1 * e2, f1 * e2, e1 * f2, f1 * f2]
        rho23 = -0.5j * g * (n1m + n2m)
    else:
        norm = 4 * (1 + n1p) * (1 + n2p)
        p = [(2 + n1p) * (2 + n2p) / norm, n1p * (2 + n2p) / norm,
             (2 + n1p) * n2p / norm, n1p * n2p / norm]
        q = n1m * (1 + n2p) + n2m * (1 + n1p)
        rho23 = -0.5j * g * q / ((1 + n1p) * (1 + n2p))
    sign = math.copysign(1.0, eig.s * eig.c)
    return XState(*p, sign * rho23, Basis.ENERGY)


def default_step(params, eig=None):
    eig = eig or diagonalize(params)
    return 0.01 / max(params.gamma1, params.gamma2, eig.gap)


def default_horizon(params):
    rates = [x for x in (params.gamma1, params.gamma2) if x > 0]
    return 50 / min(rates)


def time_evolve(g, initial, dt, t_end, record_every=None):
    """Fourth-order Runge-Kutta on the X block.

    For this linear, time-independent system one RK4 step equals multiplying
    by the degree-4 Taylor polynomial of ``dt*m``, which is what is applied.
    """
    if initial.basis is not Basis.ENERGY:
        raise ValueError("initial state must be in the energy basis")
    norm = np.abs(g.m).sum(axis=1).max()
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    if dt * norm >= 0.1:
        raise ValueError(f"dt={dt:.3g} too large for stability (dt*|m| = {dt * norm:.3g} >= 0.1)")
    steps = int(math.ceil(t_end / dt - 1e-9))
    if record_every is None:
        record_every = max(1, steps // 1000)
    hm = dt * g.m
    prop = np.eye(6, dtype=complex)
    term = np.eye(6, dtype=complex)
    for k in range(1, 5):
        term = term @ hm / k
        prop = prop + term
    x = initial.vector()
    times, out = [0.0], [x]
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(1, steps + 1):
            x = prop @ x
            if i % record_every == 0 or i == steps:
                if not np.all(np.isfinite(x)):
                    raise IntegrationError(f"non-finite state at t={i * dt:.6g} with dt={dt:.3g}")
                times.append(i * dt)
                out.append(x)
    vectors = np.array(out)
    res = float(np.abs(g.m @ x).max())
    return Trajectory(np.array(times), vectors, res < 1e-12, res, dt)


ROUTES = ("nullspace", "closed", "leading", "evolve")


def steady_state(params, r1, r2, route="nullspace", variant="corrected"):
    """Energy-basis steady state by the named route, with its generator residual."""
    eig = diagonalize(params)
    g = build_generator(params, r1, r2, eig, variant)
    if route == "nullspace":
        state = steady_state_nullspace(g)
    elif route == "closed":
        state = steady_state_closed_form(params, r1, r2)
    elif route == "leading":
        state = steady_state_leading_order(params, r1, r2)
    elif route == "evolve":
        norm = np.abs(g.m).sum(axis=1).max()
        dt = min(default_step(params, eig), 0.05 / norm)
        ground = XState(1, 0, 0, 0, 0, Basis.ENERGY)
        state = time_evolve(g, ground, dt, default_horizon(params)).final
    else:
        raise ValueError(f"unknown route {route!r}")
    return state, residual(g, state)
