"""Where the steady state stops being a valid density matrix.

The non-secular generator does not guarantee positivity. This prints the
smallest eigenvalue of the fermionic steady state over temperature and bias,
for weak and moderate hopping.
"""

import numpy as np

from fermion_ness import ReservoirSpec, SystemParams
from fermion_ness.redfield import steady_state

for delta in (0.05, 0.3):
    params = SystemParams.symmetric(delta=delta, gamma=0.05)
    print(f"delta={delta}: min eigenvalue, rows T, columns mu2 (mu1 = 0.5)")
    mu2s = np.linspace(0.5, 2.0, 7)
    print("   T   " + " ".join(f"{m:9.2f}" for m in mu2s))
    for t in (0.02, 0.03, 0.05, 0.1, 0.2):
        row = [steady_state(params, ReservoirSpec.fermionic(t, 0.5), ReservoirSpec.fermionic(t, m))[0].min_eigenvalue()
               for m in mu2s]
        print(f"{t:5.2f}  " + " ".join(f"{v:9.2e}" for v in row))
    print()
