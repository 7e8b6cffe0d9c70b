"""One-call evaluation of a parameter point: steady state, correlations, currents."""

from dataclasses import dataclass

from .correlations import CorrelationReport, concurrence, discord
from .model import ReservoirSpec, SystemParams, diagonalize
from .observables import CurrentReport, energy_currents, site_populations
from .redfield import steady_state
from .states import XState, to_local


@dataclass(frozen=True)
class PointResult:
    params: SystemParams
    r1: ReservoirSpec
    r2: ReservoirSpec
    route: str
    energy: XState
    local: XState
    correlations: CorrelationReport
    currents: CurrentReport
    site_populations: tuple
    residual: float
    min_eigenvalue: float

    @property
    def positive(self):
        return self.energy.is_positive()


def evaluate(params, r1, r2, route="nullspace", oracle=False, variant="corrected"):
    eig = diagonalize(params)
    state, res = steady_state(params, r1, r2, route, variant)
    local = to_local(state, eig)
    return PointResult(
        params, r1, r2, route, state, local,
        discord(local, oracle=oracle),
        energy_currents(params, r1, r2, state, eig),
        site_populations(local),
        res,
        state.min_eigenvalue(),
    )


def steady_concurrence(params, r1, r2):
    """Concurrence of the exact steady state."""
    state, _ = steady_state(params, r1, r2)
    return concurrence(to_local(state, diagonalize(params)))
