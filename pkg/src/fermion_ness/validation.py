"""Randomized cross-checks between independent routes and oracles.

Every suite draws from its own child of ``numpy.random.SeedSequence(seed)``,
so a report depends only on ``(seed, samples)``.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .correlations import (
    classical_correlation_analytic,
    classical_correlation_bruteforce,
    _reduced_a_entropy,
)
from .model import Kind, ReservoirSpec, SystemParams, diagonalize
from .observables import energy_current_from_dissipator, energy_currents
from .redfield import (
    P11, P44, R23, R32,
    build_generator,
    default_horizon,
    default_step,
    steady_state_closed_form,
    steady_state_leading_order,
    steady_state_nullspace,
    time_evolve,
)
from .states import Basis, XState, to_local

ROUTE_TOL = 1e-9
TRACE_TOL = 1e-14
STEP_TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-8
BALANCE_TOL = 1e-10
CC_TOL = 1e-3
CC_BOUND_TOL = 1e-9
VARIANT_TOL = 1e-10
EXPONENT_TOL = 0.2


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checked: int
    worst: float
    limit: float
    note: str = ""

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        text = f"{self.name:<20} {flag}  checked={self.checked}  worst={self.worst:.6g}  limit={self.limit:.6g}"
        return text + (f"  {self.note}" if self.note else "")


def random_point(rng, kind=None, symmetric=True):
    """Parameters drawn from the ranges of the randomized sweeps.

    Delta in [0.05, 0.5], Gamma in [0.01, 0.1], T in [0.05, 1], mu in [0, 1.5];
    asymmetric draws also vary the site energies in [0.8, 1.2].
    """
    if kind is None:
        kind = Kind.BOSONIC if rng.random() < 0.5 else Kind.FERMIONIC
    kind = Kind(kind)
    delta = rng.uniform(0.05, 0.5)
    if symmetric:
        g = rng.uniform(0.01, 0.1)
        params = SystemParams(1.0, 1.0, delta, g, g)
    else:
        w1, w2 = rng.uniform(0.8, 1.2, 2)
        g1, g2 = rng.uniform(0.01, 0.1, 2)
        params = SystemParams(w1, w2, delta, g1, g2)
    t1, t2 = rng.uniform(0.05, 1.0, 2)
    if kind is Kind.FERMIONIC:
        mu1, mu2 = rng.uniform(0.0, 1.5, 2)
        return params, ReservoirSpec.fermionic(t1, mu1), ReservoirSpec.fermionic(t2, mu2)
    return params, ReservoirSpec.bosonic(t1), ReservoirSpec.bosonic(t2)


def random_x_state(rng):
    """A physical local-basis X state with a random coherence phase."""
    p = rng.dirichlet(np.ones(4))
    mag = rng.uniform(0, 1) * math.sqrt(p[1] * p[2])
    phase = rng.uniform(0, 2 * math.pi)
    return XState(*p, mag * complex(math.cos(phase), math.sin(phase)), Basis.LOCAL)


def _evolve_to_steady(params, g):
    eig = diagonalize(params)
    norm = np.abs(g.m).sum(axis=1).max()
    dt = min(default_step(params, eig), 0.05 / norm)
    ground = XState(1, 0, 0, 0, 0, Basis.ENERGY)
    return time_evolve(g, ground, dt, default_horizon(params))


def suite_three_route(rng, samples):
    worst = 0.0
    for i in range(samples):
        params, r1, r2 = random_point(rng, Kind.BOSONIC if i % 2 else Kind.FERMIONIC)
        g = build_generator(params, r1, r2)
        a = steady_state_nullspace(g).vector()
        b = steady_state_closed_form(params, r1, r2).vector()
        c = _evolve_to_steady(params, g).final.vector()
        worst = max(worst, np.abs(a - b).max(), np.abs(a - c).max(), np.abs(b - c).max())
    return SuiteResult("three-route", worst <= ROUTE_TOL, samples, worst, ROUTE_TOL)


def suite_conservation(rng, samples):
    """Trace preservation and Hermiticity of the generator, positivity of the steady state."""
    trace_err = herm_err = 0.0
    min_eig = math.inf
    for i in range(samples):
        params, r1, r2 = random_point(rng, Kind.BOSONIC if i % 2 else Kind.FERMIONIC,
                                      symmetric=bool(i % 3))
        g = build_generator(params, r1, r2)
        column_sums = np.abs(g.m[P11:P44 + 1].sum(axis=0)).max()
        if column_sums > TRACE_TOL:
            trace_err = math.inf
        state = steady_state_nullspace(g)
        min_eig = min(min_eig, state.min_eigenvalue())
        # a short trajectory from a state with a coherence
        start = XState(0.4, 0.3, 0.2, 0.1, 0.1 + 0.05j, Basis.ENERGY)
        traj = time_evolve(g, start, default_step(params), 2 / max(params.gamma1, params.gamma2),
                           record_every=1)
        v = traj.vectors
        step_trace = np.abs(np.diff(v[:, :4].sum(axis=1))).max()
        herm_err = max(herm_err, np.abs(v[:, R32] - v[:, R23].conj()).max(),
                       np.abs(v[:, :4].imag).max())
        trace_err = max(trace_err, step_trace)
    positivity_ok = min_eig >= -POSITIVITY_TOL
    passed = trace_err <= STEP_TRACE_TOL and herm_err <= 1e-12 and positivity_ok
    note = f"trace={trace_err:.3g} hermiticity={herm_err:.3g} min_eig={min_eig:.6g}"
    return SuiteResult("conservation", passed, samples, max(trace_err, herm_err, -min_eig),
                       POSITIVITY_TOL, note)


def suite_current_balance(rng, samples):
    worst = oracle = 0.0
    for i in range(samples):
        params, r1, r2 = random_point(rng, Kind.BOSONIC if i % 2 else Kind.FERMIONIC,
                                      symmetric=bool(i % 2))
        eig = diagonalize(params)
        state = steady_state_nullspace(build_generator(params, r1, r2, eig))
        cur = energy_currents(params, r1, r2, state, eig)
        worst = max(worst, abs(cur.balance))
        for which, j in ((1, cur.j1), (2, cur.j2)):
            ref = energy_current_from_dissipator(params, r1, r2, state, which, eig)
            oracle = max(oracle, abs(j - ref))
    passed = worst <= BALANCE_TOL and oracle <= BALANCE_TOL
    return SuiteResult("current-balance", passed, samples, max(worst, oracle), BALANCE_TOL,
                       f"balance={worst:.3g} vs_dissipator={oracle:.3g}")


def suite_cc_oracle(rng, samples, steady_samples=None):
    """Analytic classical correlation against the brute-force measurement search."""
    states = [random_x_state(rng) for _ in range(samples)]
    for i in range(samples if steady_samples is None else steady_samples):
        params, r1, r2 = random_point(rng, Kind.BOSONIC if i % 2 else Kind.FERMIONIC)
        energy = steady_state_nullspace(build_generator(params, r1, r2))
        states.append(to_local(energy, diagonalize(params)))
    gap = bound = 0.0
    for st in states:
        cc, s1, s2, _ = classical_correlation_analytic(st)
        brute = classical_correlation_bruteforce(st)
        s_a = _reduced_a_entropy(st)
        gap = max(gap, abs(cc - brute))
        bound = max(bound, (s_a - s1) - brute, (s_a - s2) - brute)
    passed = gap <= CC_TOL and bound <= CC_BOUND_TOL
    return SuiteResult("cc-oracle", passed, len(states), gap, CC_TOL,
                       f"candidate_excess={bound:.3g}")


def leading_order_exponent(params, r1, r2, halvings=5):
    """Log-log slope of the leading-order population error against g, halving Gamma."""
    gs, errs = [], []
    for k in range(halvings):
        gamma = params.gamma1 / 2 ** k
        p = SystemParams(params.omega1, params.omega2, params.delta, gamma, gamma)
        approx = steady_state_leading_order(p, r1, r2).populations
        exact = steady_state_closed_form(p, r1, r2).populations
        gs.append(gamma / (2 * abs(p.delta)))
        errs.append(np.abs(approx - exact).max())
    return float(np.polyfit(np.log(gs), np.log(errs), 1)[0])


def suite_leading_order(rng, samples):
    worst = 0.0
    checked = 0
    for i in range(samples):
        params, r1, r2 = random_point(rng, Kind.BOSONIC if i % 2 else Kind.FERMIONIC)
        # start the halving sequence at g <= 0.1, inside the small-g regime
        gamma = min(params.gamma1, 0.2 * params.delta)
        params = SystemParams(1.0, 1.0, params.delta, gamma, gamma)
        if r1 == r2 or abs(r1.temperature - r2.temperature) < 0.05:
            r2 = ReservoirSpec(r2.kind, min(1.0, r1.temperature + 0.3), r2.mu)
        worst = max(worst, abs(leading_order_exponent(params, r1, r2) - 2.0))
        checked += 1
    return SuiteResult("leading-order", worst <= EXPONENT_TOL, checked, worst, EXPONENT_TOL,
                       "worst |exponent - 2|")


def suite_variant(rng, samples):
    """Which bosonic generator variant reproduces the closed-form steady state."""
    err = {"corrected": 0.0, "printed": 0.0}
    for _ in range(samples):
        params, r1, r2 = random_point(rng, Kind.BOSONIC)
        if abs(r1.temperature - r2.temperature) < 0.05:
            r2 = ReservoirSpec.bosonic(r1.temperature + 0.3)
        ref = steady_state_closed_form(params, r1, r2).vector()
        for variant in err:
            got = steady_state_nullspace(build_generator(params, r1, r2, variant=variant)).vector()
            err[variant] = max(err[variant], np.abs(got - ref).max())
    matches = [v for v, e in err.items() if e <= VARIANT_TOL]
    chosen = matches[0] if len(matches) == 1 else "none"
    passed = chosen == "corrected"
    note = f"corrected={err['corrected']:.3g} printed={err['printed']:.3g} chosen={chosen}"
    return SuiteResult("variant", passed, samples, err["corrected"], VARIANT_TOL, note)


SUITES = (
    suite_three_route,
    suite_conservation,
    suite_current_balance,
    suite_cc_oracle,
    suite_leading_order,
    suite_variant,
)


def run_all(seed=0, samples=200, workers=None):
    if samples < 1:
        raise ValueError("samples must be at least 1")
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    rngs = [np.random.default_rng(c) for c in children]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(s, r, samples) for s, r in zip(SUITES, rngs)]
        return [f.result() for f in futures]
