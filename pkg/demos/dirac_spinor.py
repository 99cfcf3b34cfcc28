"""Build a Dirac spinor from the two partner Schrodinger states and check it.

The upper component is a level of H1, the lower one its image under A, and
epsilon = +-sqrt(E). Both coupled first-order equations should vanish to
round-off on the sampling grid.

    python3 demos/dirac_spinor.py
"""

import numpy as np

from direop.potentials import PotentialSpec
from direop.spectra import classify_susy, default_grid, energy
from direop.verify import dirac_residual, intertwining_check, spinor_samples, zero_mode_annihilation

spec = PotentialSpec.scarf(3.0, 1.0, m=2)
grid = default_grid(spec)

print(spec.label, classify_susy(spec, grid))
print(f"zero mode annihilated to {zero_mode_annihilation(spec, grid):.1e}")

for n in range(4):
    print(f"n={n}  E={energy(spec, n):5.1f}  "
          f"intertwining {intertwining_check(spec, n, grid):.1e}  "
          f"Dirac residual (+) {dirac_residual(spec, n, grid, branch=1):.1e}  "
          f"(-) {dirac_residual(spec, n, grid, branch=-1):.1e}")

# a few spinor samples for the second excited state
samples = spinor_samples(spec, 2, grid)
for s in samples[:: len(samples) // 6]:
    print(f"x={s.x:+.4f}  psi1={s.psi1:+.6f}  psi2={s.psi2:+.6f}  eps={s.epsilon:.6f}")
# each component is normalized on its own, so the spinor carries norm 2
print("norm of the spinor:", np.sum([s.psi1**2 + s.psi2**2 for s in samples]) * grid.h)
