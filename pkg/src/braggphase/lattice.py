"""Trap, geometry and localization arithmetic for the 1D standing-wave lattice."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import constants as const
from .scattering import debye_waller


def _default_lambda_dip():
    # Bragg-matched: lambda_dip cos(beta_i) = lambda_brg
    return const.LAMBDA_BRG / np.cos(const.BETA_I)


def recoil_frequency(wavelength=const.LAMBDA_BRG, mass=const.M_RB85):
    """``hbar k^2 / 2m`` in rad/s."""
    k = 2 * np.pi / wavelength
    return const.hbar * k**2 / (2 * mass)


def _default_axial_frequency():
    # inverts (2 n_z + 1) eps / Omega_z = 0.01 at n_z = 0
    return recoil_frequency() / 0.01


@dataclass(frozen=True)
class LatticeConfig:
    """Standing-wave lattice and Bragg-probe geometry.

    Lengths in m, ``trap_depth`` in J, ``temperature`` in K,
    ``axial_frequency`` in rad/s, ``density`` in m^-3, ``beta_i`` in rad.
    ``light_shift_ratio`` maps the local trap depth onto a shift of the
    probed line, ``delta_LS = ratio * U(x) / hbar``.
    """

    lambda_dip: float = field(default_factory=_default_lambda_dip)
    lambda_brg: float = const.LAMBDA_BRG
    beta_i: float = const.BETA_I
    trap_depth: float = const.k_B * 1e-3
    temperature: float = 200e-6
    w_dip: float = 130e-6
    w_r: float = 30e-6
    w_z: float = 250e-6
    n_tot: float = 1e7
    illuminated_fraction: float = 1 / 16
    axial_frequency: float = field(default_factory=_default_axial_frequency)
    density: float = 5e17
    light_shift_ratio: float = const.LIGHT_SHIFT_RATIO

    def __post_init__(self):
        positive = ("lambda_dip", "lambda_brg", "trap_depth", "temperature",
                    "w_dip", "w_r", "w_z", "axial_frequency", "density")
        for name in positive:
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be > 0, got {value!r}")
        if self.n_tot < 0:
            raise ValueError("n_tot must be >= 0")
        if not 0 < self.illuminated_fraction <= 1:
            raise ValueError("illuminated_fraction must lie in (0, 1]")
        if not 0 < self.beta_i < np.pi / 2:
            raise ValueError("beta_i must lie in (0, pi/2)")
        if self.light_shift_ratio < 0:
            raise ValueError("light_shift_ratio must be >= 0")

    @property
    def k_dip(self):
        return 2 * np.pi / self.lambda_dip

    @property
    def k_brg(self):
        return 2 * np.pi / self.lambda_brg

    @property
    def lattice_period(self):
        return self.lambda_dip / 2

    @property
    def delta_kz(self):
        """Axial momentum transfer ``2 k_brg cos(beta_i)``."""
        return 2 * self.k_brg * np.cos(self.beta_i)


def bragg_mismatch(cfg: LatticeConfig):
    """Phase error per lattice period, ``2 k_brg (lambda_dip/2) cos(beta_i) - 2 pi``."""
    return 2 * cfg.k_brg * cfg.lattice_period * np.cos(cfg.beta_i) - 2 * np.pi


def solid_angle(cfg: LatticeConfig):
    return 2 * cfg.lambda_brg**2 / (np.pi * cfg.w_r * cfg.w_z)


def axial_rms_size(cfg: LatticeConfig):
    """RMS axial extent of an atom in one well, harmonic approximation."""
    return np.sqrt(const.k_B * cfg.temperature / (2 * cfg.trap_depth)) / cfg.k_dip


def lamb_dicke_factor(cfg: LatticeConfig, n_z=0):
    """Suppression ``(2 n_z + 1) eps / Omega_z`` of vibration-changing scattering,
    with the recoil frequency of the Bragg light."""
    eps = recoil_frequency(cfg.lambda_brg)
    return (2 * n_z + 1) * eps / cfg.axial_frequency


def effective_layers(cfg: LatticeConfig) -> int:
    """Layers taking part in multiple scattering, ``round(2 w_r / (lambda_dip tan beta_i))``."""
    return int(round(2 * cfg.w_r / (cfg.lambda_dip * np.tan(cfg.beta_i))))


def illuminated_atoms(cfg: LatticeConfig) -> int:
    return int(round(cfg.n_tot * cfg.illuminated_fraction))


def illuminated_planes(cfg: LatticeConfig) -> int:
    """Lattice planes spanned by the probe beam along the lattice axis."""
    return int(round(cfg.w_z / cfg.lattice_period))


def debye_waller_factor(cfg: LatticeConfig):
    return float(debye_waller(cfg.delta_kz, axial_rms_size(cfg)))
