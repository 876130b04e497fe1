"""
Inhomogeneous light-shift broadening of the Bragg reflection spectrum.

Atoms are drawn from the Boltzmann distribution of the trap: harmonic along
the lattice axis (rms size from :func:`~braggphase.lattice.axial_rms_size`)
and the Gaussian radial profile of the cavity mode, truncated at one waist.
Each atom sees its line shifted by ``light_shift_ratio * u(x) / hbar`` where
``u(x) = U0 cos^2(k_dip z) exp(-2 r^2 / w_dip^2)`` is the local trap depth.
The complex reflection is proportional to the ensemble-averaged polarizability.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np
from scipy import optimize, special

from . import constants as const
from .lattice import LatticeConfig, axial_rms_size, illuminated_atoms
from .scattering import (ComplexReflection, LineSet, lineset_polarizability,
                         reflectivity)

# Operating point for the spectrum normalization: peak scattered power
# measured at the nominal illuminated atom number.
REFERENCE_POWER = 100e-12
REFERENCE_ATOMS = 1e7 / 16

_CHUNK_ELEMENTS = 1 << 21


def _radial_inverse_cdf(depth_over_kt, n_grid=4097):
    """Grid for inverse-CDF sampling of ``s = r^2 / w^2`` on [0, 1].

    In ``s`` the radial density is ``exp(-a (1 - exp(-2 s)))`` with
    ``a = U0 / k_B T``; its integral is a difference of exponential integrals.
    """
    a = depth_over_kt
    s = np.linspace(0.0, 1.0, n_grid)
    if a < 1e-8:
        return s, s
    cdf = special.expi(a) - special.expi(a * np.exp(-2 * s))
    cdf /= cdf[-1]
    return cdf, s


def sample_light_shifts(lattice: LatticeConfig, samples: int, rng):
    """Per-atom line shifts (rad/s) drawn from the thermal distribution."""
    z_rms = axial_rms_size(lattice)
    a = lattice.trap_depth / (const.k_B * lattice.temperature)
    cdf, s_grid = _radial_inverse_cdf(a)
    z = rng.normal(0.0, z_rms, samples)
    s = np.interp(rng.random(samples), cdf, s_grid)
    depth = lattice.trap_depth * np.cos(lattice.k_dip * z) ** 2 * np.exp(-2 * s)
    return lattice.light_shift_ratio * depth / const.hbar


def quantile_light_shifts(lattice: LatticeConfig, n_axial=200, n_radial=200):
    """Deterministic equal-weight shift nodes: tensor product of axial and
    radial mid-quantiles. Used where Monte-Carlo noise is unwanted."""
    z_rms = axial_rms_size(lattice)
    a = lattice.trap_depth / (const.k_B * lattice.temperature)
    cdf, s_grid = _radial_inverse_cdf(a)
    z = z_rms * special.ndtri((np.arange(n_axial) + 0.5) / n_axial)
    s = np.interp((np.arange(n_radial) + 0.5) / n_radial, cdf, s_grid)
    depth = (lattice.trap_depth * np.cos(lattice.k_dip * z)[:, None] ** 2
             * np.exp(-2 * s)[None, :])
    return (lattice.light_shift_ratio * depth / const.hbar).ravel()


def ensemble_polarizability(detunings, lineset: LineSet, shifts):
    """``mean_i alpha(delta - shift_i)`` evaluated in fixed-order chunks."""
    detunings = np.asarray(detunings, dtype=float)
    shifts = np.asarray(shifts, dtype=float)
    if shifts.size == 0:
        raise ValueError("need at least one sample")
    flat = detunings.ravel()
    chunk = max(1, _CHUNK_ELEMENTS // max(flat.size, 1))
    k = lineset.k_brg
    re = np.zeros(flat.size)
    im = np.zeros(flat.size)
    # G / (x + iG) = G (x - iG) / (x^2 + G^2), summed in real arithmetic
    for line in lineset.lines:
        if line.relative_strength == 0:
            continue
        g = line.linewidth
        scale = line.relative_strength * (6 * np.pi / k**3) * g
        for start in range(0, shifts.size, chunk):
            block = shifts[start:start + chunk]
            x = 2 * (flat[:, None] - block[None, :] - line.center_offset)
            inv = 1.0 / (x * x + g * g)
            re += scale * (x * inv).sum(axis=1)
            im -= scale * g * inv.sum(axis=1)
    return ((re + 1j * im) / shifts.size).reshape(detunings.shape)


def operating_reflectivity(lattice: LatticeConfig, incident_intensity=10.0,
                           reference_power=REFERENCE_POWER,
                           reference_atoms=REFERENCE_ATOMS):
    """Unbroadened on-resonance ``|r|`` for the configured atom number.

    The reference power scales with the square of the illuminated atom
    number (coherent scattering) before conversion via :func:`reflectivity`.
    """
    n = illuminated_atoms(lattice)
    power = reference_power * (n / reference_atoms) ** 2
    return reflectivity(power, incident_intensity, lattice.w_r, lattice.w_z)


def broadened_reflection_spectrum(lineset: LineSet, lattice: LatticeConfig, scan,
                                  samples=100_000, rng_seed=0,
                                  peak_reflectivity=None) -> ComplexReflection:
    """Light-shift-broadened complex reflection ``r(delta)`` on ``scan``.

    Normalized so the unbroadened spectrum has ``|r| = peak_reflectivity`` at
    the centre of the strongest line (default: :func:`operating_reflectivity`).
    Deterministic for a fixed ``rng_seed``.
    """
    scan = np.asarray(scan, dtype=float)
    if scan.size == 0:
        raise ValueError("empty detuning grid")
    if np.any(np.diff(scan) <= 0):
        raise ValueError("detuning grid must be strictly increasing")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if peak_reflectivity is None:
        peak_reflectivity = operating_reflectivity(lattice)

    rng = np.random.default_rng(rng_seed)
    shifts = sample_light_shifts(lattice, int(samples), rng)
    alpha = ensemble_polarizability(scan, lineset, shifts)
    ref = abs(lineset_polarizability(lineset.strongest.center_offset, lineset))
    return ComplexReflection(scan, peak_reflectivity * alpha / ref)


def power_fwhm(detunings, values):
    """Full width at half maximum of ``|values|^2``, outermost crossings."""
    p = np.abs(values) ** 2
    half = 0.5 * p.max()
    above = np.nonzero(p >= half)[0]
    i, j = above[0], above[-1]
    if i == 0 or j == p.size - 1:
        raise ValueError("profile not resolved within the grid")
    left = np.interp(half, [p[i - 1], p[i]], detunings[i - 1:i + 1])
    right = np.interp(half, [p[j + 1], p[j]], [detunings[j + 1], detunings[j]])
    return right - left


def single_line_fwhm(lattice: LatticeConfig, linewidth=const.GAMMA_BRG, n_grid=1201):
    """Power FWHM of the broadened single-line profile, by quantile quadrature."""
    lines = LineSet.single(linewidth, lattice.lambda_brg)
    max_shift = lattice.light_shift_ratio * lattice.trap_depth / const.hbar
    grid = np.linspace(-15 * linewidth, max_shift + 15 * linewidth, n_grid)
    shifts = quantile_light_shifts(lattice, 100, 100)
    return power_fwhm(grid, ensemble_polarizability(grid, lines, shifts))


def calibrate_light_shift_ratio(lattice: LatticeConfig, target_fwhm=None,
                                linewidth=const.GAMMA_BRG):
    """Light-shift ratio giving a broadened single-line FWHM of ``target_fwhm``
    (default ten natural linewidths)."""
    if target_fwhm is None:
        target_fwhm = 10 * linewidth

    def excess(ratio):
        cfg = replace(lattice, light_shift_ratio=ratio)
        return single_line_fwhm(cfg, linewidth) - target_fwhm

    hi = 1.0
    while excess(hi) < 0:
        hi *= 2
    return optimize.brentq(excess, 0.0, hi, xtol=1e-6)
