"""Physical constants and the experimental defaults used across the package.

Fundamental constants come from :mod:`scipy.constants` (CODATA 2018).
"""

import numpy as np
from scipy import constants as _c

hbar = _c.hbar            # 1.05457e-34 J s
k_B = _c.k                # 1.38065e-23 J/K
epsilon_0 = _c.epsilon_0  # 8.85419e-12 F/m
c = _c.c
atomic_mass_unit = _c.atomic_mass  # 1.66054e-27 kg

# 85Rb
M_RB85 = 84.911789738 * atomic_mass_unit  # 1.40999e-25 kg

TWO_PI = 2.0 * np.pi

# 5S1/2 F=3 -> 6P3/2 blue line
LAMBDA_BRG = 420.2e-9
GAMMA_BRG = TWO_PI * 1.3e6
HYPERFINE_SPLITTING = TWO_PI * 40e6  # F'=3 to F'=4

BETA_I = np.deg2rad(58.0)
ACCEPTANCE_ANGLE = np.deg2rad(0.1)

# Differential light shift of the blue line per unit trap depth. Calibrated
# with broadening.calibrate_light_shift_ratio() on the default lattice so a
# single line broadens to a 10 Gamma power FWHM.
LIGHT_SHIFT_RATIO = 1.8327
