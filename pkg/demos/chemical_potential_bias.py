"""Fermionic reservoirs held at different chemical potentials.

Shows the concurrence against the bias for several mu1, the critical mu1 for
a very large mu2, the critical hopping 2*Gamma, and a bias scan where
entanglement dies and comes back.
"""

import numpy as np

from fermion_ness import ReservoirSpec, SystemParams
from fermion_ness.analysis import critical_mu, critical_tunneling, zero_crossing_scan
from fermion_ness.pipeline import steady_concurrence

params = SystemParams.symmetric(omega=1.0, delta=0.3, gamma=0.05)
biases = np.linspace(0, 3, 13)

print("concurrence vs mu2 - mu1 at T=0.2")
print("bias  " + "  ".join(f"mu1={m:<4}" for m in (0.3, 0.5, 0.7, 1.0)))
for b in biases:
    row = [steady_concurrence(params, ReservoirSpec.fermionic(0.2, m), ReservoirSpec.fermionic(0.2, m + b))
           for m in (0.3, 0.5, 0.7, 1.0)]
    print(f"{b:4.2f}  " + "  ".join(f"{c:8.5f}" for c in row))

print("\ncritical mu1 with mu2 = 1000")
for t1 in (0.05, 0.1, 0.15, 0.2):
    m = critical_mu(t1, 1.0, 0.3)
    inside = [steady_concurrence(params, ReservoirSpec.fermionic(t1, m + s), ReservoirSpec.fermionic(t1, 1e3))
              for s in (-0.02, 0.02)]
    print(f"  T1={t1:.2f}  mu*={m:.6f}  C(mu*-0.02)={inside[0]:.3g}  C(mu*+0.02)={inside[1]:.3g}")

print(f"\ncritical hopping for Gamma=0.05: {critical_tunneling(0.05)}")
for delta in (0.06, 0.08, 0.1, 0.12, 0.14):
    p = SystemParams.symmetric(delta=delta, gamma=0.05)
    c = steady_concurrence(p, ReservoirSpec.fermionic(1e-3, 0.05), ReservoirSpec.fermionic(0.2, 1e3))
    print(f"  delta={delta:.2f}  C={c:.3g}")

weak = SystemParams.symmetric(delta=0.08, gamma=0.05)
scan = zero_crossing_scan(
    np.linspace(0.5, 4.0, 351),
    lambda mu2: steady_concurrence(weak, ReservoirSpec.fermionic(0.1, 0.5), ReservoirSpec.fermionic(0.1, mu2)),
    "mu2")
print(f"\ndelta=0.08, mu1=0.5: {scan.classification}")
for c in scan.crossings:
    print(f"  {c.direction} at mu2 = {c.x:.6f}")
