"""Energy currents from each reservoir and site occupations."""

import numpy as np
from dataclasses import dataclass

from .model import Kind, diagonalize
from .redfield import mode_occupations, reservoir_dissipator
from .states import Basis


@dataclass(frozen=True)
class CurrentReport:
    j1: float
    j2: float

    @property
    def balance(self):
        return self.j1 + self.j2


def energy_current(params, r1, r2, eig, state, which):
    """Energy per unit time flowing from reservoir ``which`` into the two sites."""
    if state.basis is not Basis.ENERGY:
        raise ValueError("energy currents need an energy-basis state")
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if r1.kind is not r2.kind:
        raise ValueError("both reservoirs must be of the same kind")
    eig = eig or diagonalize(params)
    c, s = eig.c, eig.s
    n11, n12, n21, n22 = mode_occupations(eig, r1, r2)
    if which == 1:
        n1, n2, w1, w2, sc = n11, n21, s * s, c * c, s * c
    else:
        n1, n2, w1, w2, sc = n12, n22, c * c, s * s, -s * c
    sign = 1 if r1.kind is Kind.BOSONIC else -1
    p11, p22, p33, p44 = state.populations
    g1, g2 = params.gamma1, params.gamma2
    e1, e2 = eig.omega1p, eig.omega2p
    # emission minus absorption for each mode, plus the mode-mixing part
    mode1 = (1 + sign * n1) * (p22 + p44) - n1 * (p11 + p33)
    mode2 = (1 + sign * n2) * (p33 + p44) - n2 * (p11 + p22)
    k1 = 1 + (1 + sign) * n1
    k2 = 1 + (1 + sign) * n2
    mixing = sc * (e2 * g1 * k1 + e1 * g2 * k2) * 2 * state.rho23.real
    return float(-2 * e1 * g1 * w1 * mode1 - 2 * e2 * g2 * w2 * mode2 - mixing)


def energy_currents(params, r1, r2, state, eig=None):
    eig = eig or diagonalize(params)
    return CurrentReport(energy_current(params, r1, r2, eig, state, 1),
                         energy_current(params, r1, r2, eig, state, 2))


def energy_current_from_dissipator(params, r1, r2, state, which, eig=None):
    """Tr(D_which[rho] H) evaluated with full 4x4 matrices."""
    eig = eig or diagonalize(params)
    h = np.diag([0, eig.omega1p, eig.omega2p, eig.omega1p + eig.omega2p])
    d = reservoir_dissipator(params, r1, r2, which, eig)
    return float(np.trace(d(state.matrix()) @ h).real)


def site_populations(state):
    """Mean occupations (site 1, site 2) of a local-basis state."""
    if state.basis is not Basis.LOCAL:
        raise ValueError("site populations need a local-basis state")
    return state.p33 + state.p44, state.p22 + state.p44
