"""Bosonic reservoirs at T_avg -+ dT.

For each average temperature the discord is swept over the bias dT. At low
T_avg it grows with the bias, at high T_avg it shrinks; the change sits just
below T_avg = 0.3. The effective temperature of each eigenmode (the one whose
Bose occupation equals the average of the two reservoirs) is printed too.
"""

import numpy as np

from fermion_ness import ReservoirSpec, SystemParams, diagonalize
from fermion_ness.analysis import effective_temperature, monotonicity
from fermion_ness.pipeline import evaluate

params = SystemParams.symmetric(omega=1.0, delta=0.3, gamma=0.05)
eig = diagonalize(params)

for t_avg in (0.2, 0.23, 0.27, 0.3, 0.35):
    biases = np.linspace(0, t_avg, 101)[:-1]
    qd = [evaluate(params, ReservoirSpec.bosonic(t_avg - d), ReservoirSpec.bosonic(t_avg + d)).correlations.qd
          for d in biases]
    print(f"T_avg={t_avg:.2f}: discord {qd[0]:.5f} -> {qd[-1]:.5f} ({monotonicity(qd)})")

print("\neffective temperatures at T_avg=0.3")
for d in (0.0, 0.1, 0.2, 0.29):
    print(f"  dT={d:.2f}  lower mode {effective_temperature(eig.omega1p, 0.3, d):.5f}"
          f"  upper mode {effective_temperature(eig.omega2p, 0.3, d):.5f}")
