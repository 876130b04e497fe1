"""Born sum against the exact sheet stack.

The relative deviation |r_matrix - r_born| / |r_born| tracks the summed
coupling N|zeta|, so the thin-grating reading only holds for dilute stacks.
"""

from dataclasses import replace

import numpy as np

from braggphase import LatticeConfig, LayerStack, born_equivalence_report, stack_reflection
from braggphase.constants import GAMMA_BRG

grid = np.linspace(-20, 20, 801) * GAMMA_BRG
base = LayerStack.from_lattice(LatticeConfig())
print(f"{'density scale':>14s} {'N|zeta|':>10s} {'rel. deviation':>14s} {'|r| at 0':>10s}")
for scale in (1.0, 0.3, 0.1, 1e-2, 1e-3, 1e-4):
    stack = replace(base, areal_density=base.areal_density * scale)
    r = stack_reflection(stack, grid)
    nz = stack.n_layers * abs(stack.coupling(0.0))
    dev = born_equivalence_report(stack, r)
    print(f"{scale:14.0e} {nz:10.3g} {dev:14.3g} {abs(r(0.0)):10.3g}")
