"""Critical parameters, effective temperatures and entanglement death/revival scans."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import Kind, diagonalize, occupation

ALIVE_THRESHOLD = 1e-9
_ASINH1 = math.asinh(1.0)  # ln(1 + sqrt 2)


@dataclass(frozen=True)
class CriticalValues:
    t_critical: float
    mu_star: Optional[float]
    mu_star_min: float
    delta_star: float


@dataclass(frozen=True)
class Crossing:
    lo: float
    hi: float
    direction: str  # "death" (alive -> dead along the grid) or "birth"

    @property
    def x(self):
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class ZeroCrossingScan:
    name: str
    grid: np.ndarray
    values: np.ndarray
    crossings: tuple
    classification: str  # "no-death", "single-death" or "death-and-resurrection"


def critical_temperature(delta):
    """Temperature above which the equilibrium state is separable."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return delta / _ASINH1


def critical_mu(t1, omega, delta):
    """Lowest mu1 keeping entanglement when mu2 is pushed to infinity.

    Only defined for ``0 < t1 < critical_temperature(delta)``.
    """
    t_c = critical_temperature(delta)
    if not 0 < t1 < t_c:
        raise ValueError(f"no real solution: need 0 < t1 < {t_c:.12g}, got t1={t1!r}")
    # (sqrt 2 - 1) e^{2D/T} - (sqrt 2 + 1), factored to avoid overflow at small T
    tail = math.log1p(-((1 + math.sqrt(2)) ** 2) * math.exp(-2 * delta / t1))
    return omega - delta - t1 * math.log(math.sqrt(2) - 1) - t1 * tail


def critical_tunneling(gamma):
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return 2 * gamma


def critical_values(delta, gamma, omega, t1):
    t_c = critical_temperature(delta)
    mu = critical_mu(t1, omega, delta) if 0 < t1 < t_c else None
    return CriticalValues(t_c, mu, omega - delta, critical_tunneling(gamma))


def effective_temperature(omega_i, t_avg, delta_t):
    """Temperature whose Bose occupation equals the mean over T_avg +- delta_T."""
    if not 0 <= delta_t < t_avg:
        raise ValueError("need 0 <= delta_t < t_avg")
    mean = 0.5 * (occupation(Kind.BOSONIC, omega_i, t_avg + delta_t)
                  + occupation(Kind.BOSONIC, omega_i, t_avg - delta_t))
    return omega_i / math.log1p(1 / mean)


def _log_cosh(x):
    x = abs(x)
    return x + math.log1p(math.exp(-2 * x)) - math.log(2)


def equilibrium_concurrence_closed_form(kind, params, T, mu=0.0):
    """Concurrence of the equilibrium state at a single (T, mu), equal site energies."""
    kind = Kind(kind)
    if params.omega1 != params.omega2:
        raise ValueError("closed form needs omega1 == omega2")
    if T <= 0:
        raise ValueError("temperature must be positive")
    if kind is Kind.BOSONIC and mu != 0:
        raise ValueError("bosonic reservoirs have zero chemical potential")
    eig = diagonalize(params)
    x = eig.gap / (2 * T)
    if x <= _ASINH1:
        return 0.0
    log_num = x + math.log1p(-math.exp(-2 * x) - 2 * math.exp(-x))
    log_den = (math.log(4) + _log_cosh((eig.omega1p - mu) / (2 * T))
               + _log_cosh((eig.omega2p - mu) / (2 * T)))
    return math.exp(log_num - log_den)


def zero_crossing_scan(grid, measure, name="x", xtol=1e-6, threshold=ALIVE_THRESHOLD):
    """Locate where ``measure`` switches between zero and positive along ``grid``.

    Each switch between neighbouring grid points is bisected until the
    bracket is narrower than ``xtol``. A point is alive when the measure
    exceeds ``threshold``.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("scan needs at least 2 grid points")
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid must be finite")
    steps = np.diff(grid)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ValueError("grid must be strictly monotone")
    values = np.array([measure(x) for x in grid])
    alive = values > threshold
    crossings = []
    for i in np.flatnonzero(alive[1:] != alive[:-1]):
        lo, hi = grid[i], grid[i + 1]
        lo_alive = alive[i]
        while abs(hi - lo) > xtol:
            mid = 0.5 * (lo + hi)
            if (measure(mid) > threshold) == lo_alive:
                lo = mid
            else:
                hi = mid
        crossings.append(Crossing(float(lo), float(hi), "death" if lo_alive else "birth"))
    return ZeroCrossingScan(name, grid, values, tuple(crossings), _classify(crossings))


def _classify(crossings):
    died = False
    for c in crossings:
        if c.direction == "death":
            died = True
        elif died:
            return "death-and-resurrection"
    return "single-death" if died else "no-death"


def monotonicity(values):
    """'increasing', 'decreasing' or 'non-monotone' for a sequence of samples."""
    d = np.diff(np.asarray(values, dtype=float))
    if np.all(d > 0):
        return "increasing"
    if np.all(d < 0):
        return "decreasing"
    return "non-monotone"
