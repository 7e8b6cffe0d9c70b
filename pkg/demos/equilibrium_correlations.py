"""Correlations of the two sites when both reservoirs are identical.

Prints concurrence and discord against temperature, the temperature where
entanglement vanishes, and how the low-temperature slope changes sign as the
chemical potential crosses the lower eigenmode energy.
"""

import numpy as np

from fermion_ness import ReservoirSpec, SystemParams
from fermion_ness.analysis import critical_temperature, equilibrium_concurrence_closed_form
from fermion_ness.pipeline import evaluate

params = SystemParams.symmetric(omega=1.0, delta=0.3, gamma=0.05)
temps = np.linspace(0.02, 0.6, 30)

print(f"entanglement vanishes above T = {critical_temperature(params.delta):.6f}\n")
print("    T   bosonic C   bosonic QD | fermionic mu=0.5: C   QD   | mu=1.0: C   QD")
for t in temps:
    b = ReservoirSpec.bosonic(t)
    cols = [evaluate(params, b, b).correlations]
    for mu in (0.5, 1.0):
        f = ReservoirSpec.fermionic(t, mu)
        cols.append(evaluate(params, f, f).correlations)
    print(f"{t:5.3f}  " + "  ".join(f"{c.concurrence:9.5f} {c.qd:9.5f}" for c in cols))


def slope(measure, mu, t=0.02, h=1e-5):
    def at(tt):
        r = ReservoirSpec.fermionic(tt, mu)
        return measure(evaluate(params, r, r).correlations)
    return (at(t + h) - at(t - h)) / (2 * h)


print("\nsign of d/dT at T = 0.02 on either side of mu = omega - delta = 0.7")
for name, measure in (("concurrence", lambda c: c.concurrence), ("discord", lambda c: c.qd),
                      ("mutual information", lambda c: c.qmi), ("classical", lambda c: c.cc)):
    lo, hi = slope(measure, 0.69), slope(measure, 0.71)
    print(f"  {name:<20} mu=0.69: {np.sign(lo):+.0f}   mu=0.71: {np.sign(hi):+.0f}")

t = 0.25
print(f"\nclosed form vs full solve at T={t}, mu=0.5:",
      equilibrium_concurrence_closed_form("fermionic", params, t, 0.5),
      evaluate(params, ReservoirSpec.fermionic(t, 0.5), ReservoirSpec.fermionic(t, 0.5)).correlations.concurrence)
