"""X-shaped two-site density matrices and their basis changes.

Energy basis ordering: vacuum, lower mode occupied, upper mode occupied, both.
Local basis ordering: |00>, |01>, |10>, |11> with site 1 as the first factor,
so index 3 is "site 1 occupied, site 2 empty".
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


class Basis(str, Enum):
    ENERGY = "energy"
    LOCAL = "local"


@dataclass(frozen=True)
class XState:
    """Density matrix with populations p11..p44 and the single coherence rho23.

    The trace is checked on construction. Positivity is not enforced; use
    ``is_positive`` or ``min_eigenvalue`` to flag Redfield states that leave
    the physical set.
    """

    p11: float
    p22: float
    p33: float
    p44: float
    rho23: complex
    basis: Basis

    def __post_init__(self):
        object.__setattr__(self, "basis", Basis(self.basis))
        for name in ("p11", "p22", "p33", "p44"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "rho23", complex(self.rho23))
        values = (self.p11, self.p22, self.p33, self.p44, self.rho23.real, self.rho23.imag)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("state contains non-finite entries")
        if abs(self.trace - 1) > TRACE_TOL:
            raise ValueError(f"trace is {self.trace!r}, expected 1")

    @property
    def trace(self):
        return self.p11 + self.p22 + self.p33 + self.p44

    @property
    def populations(self):
        return np.array([self.p11, self.p22, self.p33, self.p44])

    def matrix(self):
        rho = np.diag(self.populations).astype(complex)
        rho[1, 2] = self.rho23
        rho[2, 1] = self.rho23.conjugate()
        return rho

    def vector(self):
        """Components (p11, p22, p33, p44, rho23, rho32)."""
        return np.array([self.p11, self.p22, self.p33, self.p44,
                         self.rho23, self.rho23.conjugate()], dtype=complex)

    @classmethod
    def from_vector(cls, v, basis):
        v = np.asarray(v)
        return cls(*(v[:4].real), complex(v[4]), basis)

    @classmethod
    def from_matrix(cls, rho, basis):
        rho = np.asarray(rho)
        return cls(*np.diag(rho).real, complex(rho[1, 2]), basis)

    def min_eigenvalue(self):
        mean = 0.5 * (self.p22 + self.p33)
        radius = math.hypot(0.5 * (self.p22 - self.p33), abs(self.rho23))
        return min(self.p11, self.p44, mean - radius)

    def is_positive(self, tol=POSITIVITY_TOL):
        return self.min_eigenvalue() >= -tol


@dataclass(frozen=True)
class BlochCoefficients:
    """Coefficients of rho = [I + r sz.I + s I.sz + sum_i c_i si.si] / 4.

    ``r`` belongs to site 1 (subsystem A) and ``s`` to site 2 (subsystem B).
    """

    r: float
    s: float
    c1: float
    c2: float
    c3: float


def _require(state, basis):
    if state.basis is not basis:
        raise ValueError(f"expected a {basis.value}-basis state, got {state.basis.value}")


def to_local(state, eig):
    _require(state, Basis.ENERGY)
    c, s = eig.c, eig.s
    p22, p33, r23 = state.p22, state.p33, state.rho23
    r32 = r23.conjugate()
    two_re = 2 * r23.real
    l22 = c * c * p22 - c * s * two_re + s * s * p33
    l33 = s * s * p22 + c * s * two_re + c * c * p33
    l23 = -c * s * p22 + s * s * r23 - c * c * r32 + c * s * p33
    return XState(state.p11, l22, l33, state.p44, l23, Basis.LOCAL)


def canonicalize_phase(state):
    _require(state, Basis.LOCAL)
    if state.rho23 == 0:
        return state
    return replace(state, rho23=complex(abs(state.rho23)))


def bloch_decompose(state):
    _require(state, Basis.LOCAL)
    if state.rho23.imag != 0 or state.rho23.real < 0:
        raise ValueError("bloch_decompose needs a canonicalized state (real, non-negative rho23)")
    p11, p22, p33, p44 = state.populations
    c = 2 * state.rho23.real
    return BlochCoefficients(
        r=(p11 + p22) - (p33 + p44),
        s=(p11 - p22) + (p33 - p44),
        c1=c,
        c2=c,
        c3=(p11 - p22) - (p33 - p44),
    )


def eigenvalues(coeffs):
    k = coeffs
    a = math.hypot(k.r - k.s, k.c1 + k.c2)
    b = math.hypot(k.r + k.s, k.c1 - k.c2)
    return np.array([
        (1 - k.c3 + a) / 4,
        (1 - k.c3 - a) / 4,
        (1 + k.c3 + b) / 4,
        (1 + k.c3 - b) / 4,
    ])
