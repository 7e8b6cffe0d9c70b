"""System parameters, reservoir specifications and the single-particle eigenmodes."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit


class Kind(str, Enum):
    BOSONIC = "bosonic"
    FERMIONIC = "fermionic"


@dataclass(frozen=True)
class SystemParams:
    """Two sites with energies omega1, omega2, hopping delta and reservoir decay rates."""

    omega1: float
    omega2: float
    delta: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "delta", "gamma1", "gamma2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ValueError("site energies omega1, omega2 must be positive")
        if self.delta == 0:
            raise ValueError("delta must be nonzero (decoupled sites are not supported)")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("decay rates gamma1, gamma2 must be non-negative")
        if self.gamma1 == 0 and self.gamma2 == 0:
            raise ValueError("at least one of gamma1, gamma2 must be positive")

    @classmethod
    def symmetric(cls, omega=1.0, delta=0.3, gamma=0.05):
        return cls(omega, omega, delta, gamma, gamma)

    @property
    def is_symmetric(self):
        return self.omega1 == self.omega2 and self.gamma1 == self.gamma2


@dataclass(frozen=True)
class ReservoirSpec:
    kind: Kind
    temperature: float
    mu: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not (math.isfinite(self.temperature) and math.isfinite(self.mu)):
            raise ValueError("temperature and mu must be finite")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if self.kind is Kind.BOSONIC and self.mu != 0:
            raise ValueError("bosonic reservoirs have zero chemical potential")

    @classmethod
    def bosonic(cls, temperature):
        return cls(Kind.BOSONIC, temperature)

    @classmethod
    def fermionic(cls, temperature, mu=0.0):
        return cls(Kind.FERMIONIC, temperature, mu)

    def occupation(self, omega):
        return occupation(self.kind, omega, self.temperature, self.mu)

    def vacancy(self, omega):
        return occupation(self.kind, omega, self.temperature, self.mu, complement=True)


@dataclass(frozen=True)
class EigenData:
    """Eigenmode energies (omega1p lower, omega2p upper) and mixing amplitudes.

    In terms of the site operators the lower mode is ``c*eta2 - s*eta1`` and the
    upper mode is ``-(c*eta1 + s*eta2)``, so reservoir k, which couples to site k,
    sees mode weights (s**2, c**2) for k=1 and (c**2, s**2) for k=2.
    For equal site energies ``c = |s| = 1/sqrt(2)``.
    """

    omega1p: float
    omega2p: float
    c: float
    s: float

    @property
    def gap(self):
        return self.omega2p - self.omega1p


def occupation(kind, omega, T, mu=0.0, complement=False):
    """Mean occupation of a reservoir mode at energy ``omega``.

    Works elementwise on arrays. ``T = 0`` gives the exact limit, with the
    fermionic value at ``omega == mu`` set to 1/2. ``complement=True`` returns
    1 - n, evaluated without cancellation for fermions.
    """
    kind = Kind(kind)
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    if T < 0:
        raise ValueError("temperature must be non-negative")
    if kind is Kind.BOSONIC:
        if mu != 0:
            raise ValueError("bosonic occupation requires mu = 0")
        if T == 0:
            out = np.zeros_like(omega)
        else:
            x = omega / T
            # exp(-x)/(1-exp(-x)) stays finite for large x
            out = np.exp(-x) / -np.expm1(-x)
        if complement:
            out = 1 - out
    else:
        x = mu - omega if complement else omega - mu
        if T == 0:
            out = np.where(x < 0, 1.0, np.where(x > 0, 0.0, 0.5))
        else:
            out = expit(-x / T)
    return out[()] if out.ndim == 0 else out


def diagonalize(params):
    p = params
    mean = 0.5 * (p.omega1 + p.omega2)
    gap = math.hypot(p.omega1 - p.omega2, 2 * p.delta)
    # sign chosen so that reservoir k sees the mode weights listed on EigenData
    cos_theta = (p.omega1 - p.omega2) / gap
    c = math.sqrt(0.5 * (1 + cos_theta))
    s = math.copysign(math.sqrt(0.5 * (1 - cos_theta)), p.delta)
    return EigenData(mean - 0.5 * gap, mean + 0.5 * gap, c, s)
