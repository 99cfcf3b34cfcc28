"""Closed-form levels against the finite-difference oracle for the five demo potentials.

Each family is run at m = 0, 1, 2. The table shows the factorization energy
(lowest level at zero), the displayed formula and the Richardson-extrapolated
eigenvalue of H1. The last column is the constant offset between the displayed
formula and the numeric spectrum.

    python3 demos/spectrum_and_offsets.py
"""

import numpy as np

from direop.cli import numeric_levels
from direop.spectra import energy, energy_paper, max_level
from direop.verify import ci_specs

for spec in ci_specs():
    top = max_level(spec)
    k = 4 if top is None else min(4, top + 1)
    numeric = numeric_levels(spec, k)
    analytic = np.array([energy(spec, n) for n in range(k)])
    displayed = np.array([energy_paper(spec, n) for n in range(k)])
    offset = np.mean(displayed - numeric)
    print(spec.label)
    for n in range(k):
        print(f"  n={n}  E={analytic[n]:8.4f}  displayed={displayed[n]:8.4f}  numeric={numeric[n]:14.10f}")
    print(f"  offset {offset:.6f}  max error {np.max(np.abs(numeric - analytic)):.1e}")
