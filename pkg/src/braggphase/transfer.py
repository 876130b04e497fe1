"""
Transfer-matrix model of the lattice as a stack of thin polarizable sheets.

A sheet with coupling ``zeta`` reflects ``r1 = i zeta / (1 - i zeta)`` and
transmits ``t1 = 1 / (1 - i zeta)``. In the basis of (forward, backward)
amplitudes its transfer matrix is

    [[1 + i zeta,  i zeta    ],
     [  -i zeta,   1 - i zeta]]

with unit determinant. Sheets are separated by free propagation over the
lattice period with the axial wavevector ``k_z = k_brg cos(beta_i)``.
For weak coupling the stack reduces to the coherent Born sum
``r1 * sum_m exp(2 i k_z m d)``.

The matrices use ``exp(-i w t)`` fields while the polarizability follows the
``exp(+i w t)`` convention (``Im alpha < 0``), so the coupling is built from
``conj(alpha)`` and spectra are conjugated back on output. A passive sheet
then has ``Im zeta >= 0``. The factor ``i`` of a radiating sheet makes the
weak-coupling reflection ``-i`` times a real multiple of ``alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import constants as const
from .lattice import LatticeConfig, debye_waller_factor, effective_layers
from .scattering import ComplexReflection, LineSet, lineset_polarizability, structure_factor

SINGULAR_TOL = 1e-12
EPS_FLOOR = 1e-15


def layer_coupling(alpha_ratio, sigma, delta_kz, k_brg=2 * np.pi / const.LAMBDA_BRG):
    """Dimensionless sheet coupling ``zeta = k^2 sigma (alpha/eps0) / delta_kz``.

    With ``delta_kz = 2 k cos(beta)`` this is the field radiated by a dipole
    sheet of areal density ``sigma``, ``k sigma alpha / (2 eps0 cos(beta))``.
    """
    if not sigma > 0:
        raise ValueError("areal density must be > 0")
    return k_brg**2 * sigma * np.asarray(alpha_ratio) / delta_kz


@dataclass(frozen=True)
class LayerStack:
    """``n_layers`` identical sheets of areal density ``areal_density`` (m^-2)
    spaced by ``spacing`` (m). ``coherent_fraction`` scales the polarizability
    (Debye-Waller factor); ``polarization_angle`` enters as ``sin(xi)``."""

    n_layers: int
    areal_density: float
    spacing: float
    beta_i: float = const.BETA_I
    lineset: LineSet = field(default_factory=LineSet.single)
    coherent_fraction: float = 1.0
    polarization_angle: float = np.pi / 2

    def __post_init__(self):
        if int(self.n_layers) != self.n_layers or self.n_layers < 1:
            raise ValueError("n_layers must be an integer >= 1")
        if not self.areal_density > 0:
            raise ValueError("areal_density must be > 0")
        if not self.spacing > 0:
            raise ValueError("spacing must be > 0")

    @classmethod
    def from_lattice(cls, cfg: LatticeConfig, lineset: LineSet | None = None,
                     n_layers=None, **kwargs):
        """Stack for the lattice: ``effective_layers`` sheets of density
        ``n * lambda_dip / 2`` with the lattice Debye-Waller factor."""
        lineset = lineset or LineSet.single(wavelength=cfg.lambda_brg)
        n_layers = effective_layers(cfg) if n_layers is None else n_layers
        kwargs.setdefault("coherent_fraction", debye_waller_factor(cfg))
        return cls(n_layers, cfg.density * cfg.lattice_period, cfg.lattice_period,
                   cfg.beta_i, lineset, **kwargs)

    @property
    def k_z(self):
        return self.lineset.k_brg * np.cos(self.beta_i)

    @property
    def round_trip_phase(self):
        """Phase ``2 k_z d`` between reflections from adjacent sheets."""
        return 2 * self.k_z * self.spacing

    def coupling(self, detunings):
        alpha = self.coherent_fraction * lineset_polarizability(detunings, self.lineset)
        alpha = np.conj(alpha)
        zeta = layer_coupling(alpha, self.areal_density, 2 * self.k_z, self.lineset.k_brg)
        return zeta * np.sin(self.polarization_angle)


def transfer_matrix(zeta, n_layers, round_trip_phase):
    """Total transfer matrix elements ``(m00, m01, m10, m11)`` of the stack,
    vectorized over ``zeta``."""
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(1 - 1j * zeta) < SINGULAR_TOL):
        raise ValueError("unphysical coupling: |1 - i zeta| vanishes")
    half = np.exp(0.5j * round_trip_phase)
    s00, s01, s10, s11 = 1 + 1j * zeta, 1j * zeta, -1j * zeta, 1 - 1j * zeta
    m00, m01, m10, m11 = s00, s01, s10, s11
    for _ in range(int(n_layers) - 1):
        # propagate one period, then cross the next sheet
        p00, p01 = m00 * half, m01 * half
        p10, p11 = m10 / half, m11 / half
        m00, m01, m10, m11 = (s00 * p00 + s01 * p10, s00 * p01 + s01 * p11,
                              s10 * p00 + s11 * p10, s10 * p01 + s11 * p11)
    return m00, m01, m10, m11


def transfer_response(zeta, n_layers, round_trip_phase):
    """Reflection and transmission amplitudes for light incident from the front."""
    m00, m01, m10, m11 = transfer_matrix(zeta, n_layers, round_trip_phase)
    return -m10 / m11, 1 / m11


def stack_reflection(stack: LayerStack, detunings) -> ComplexReflection:
    detunings = np.asarray(detunings, dtype=float)
    r, _ = transfer_response(stack.coupling(detunings), stack.n_layers,
                             stack.round_trip_phase)
    return ComplexReflection(detunings, np.conj(r))


def _born_values(stack: LayerStack, detunings):
    zeta = stack.coupling(detunings)
    r1 = 1j * zeta / (1 - 1j * zeta)
    s = structure_factor(stack.n_layers, stack.round_trip_phase)
    return np.conj(r1 * s)


def born_reflection(stack: LayerStack, detunings) -> ComplexReflection:
    """Single-sheet reflection times the coherent structure factor.

    Only valid while the result stays below unity; the Born sum itself is
    unbounded for strong coupling.
    """
    detunings = np.asarray(detunings, dtype=float)
    return ComplexReflection(detunings, _born_values(stack, detunings))


def born_equivalence_report(stack: LayerStack, reflection: ComplexReflection,
                            born: ComplexReflection | None = None) -> float:
    """Largest ``|r_matrix - r_born| / max(|r_born|, 1e-15)`` over the grid.

    ``born`` defaults to the Born sum on the same grid (evaluated even where
    it exceeds unity); if given, only detunings present in both spectra are
    compared.
    """
    if born is None:
        rm = reflection.values
        rb = _born_values(stack, reflection.detunings)
    else:
        common, ia, ib = np.intersect1d(reflection.detunings, born.detunings,
                                        return_indices=True)
        if common.size == 0:
            raise ValueError("reflection and Born grids do not overlap")
        rm = reflection.values[ia]
        rb = born.values[ib]
    dev = np.abs(rm - rb) / np.maximum(np.abs(rb), EPS_FLOOR)
    return float(dev.max())
