"""
Closed-form Bragg scattering physics.

Complex polarizability of one or several hyperfine lines, the lattice
structure factor, the Debye-Waller factor, the Bragg-scattered power and
the reflectivity derived from it.

Units are SI throughout. Detunings are angular frequencies,
``delta = omega_laser - omega_line``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import constants as const


@dataclass(frozen=True)
class TransitionLine:
    """One resonance: centre offset and linewidth in rad/s, relative strength."""

    center_offset: float
    linewidth: float = const.GAMMA_BRG
    relative_strength: float = 1.0

    def __post_init__(self):
        if not self.linewidth > 0:
            raise ValueError(f"linewidth must be > 0, got {self.linewidth!r}")
        if not self.relative_strength >= 0:
            raise ValueError(
                f"relative_strength must be >= 0, got {self.relative_strength!r}")


@dataclass(frozen=True)
class LineSet:
    lines: tuple[TransitionLine, ...]
    reference_wavelength: float = const.LAMBDA_BRG

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if not self.lines:
            raise ValueError("a LineSet needs at least one line")
        if not any(line.relative_strength > 0 for line in self.lines):
            raise ValueError("at least one line must have strength > 0")
        centers = np.array([line.center_offset for line in self.lines])
        if np.any(np.diff(centers) <= 0):
            raise ValueError("line centers must be strictly increasing")
        if not self.reference_wavelength > 0:
            raise ValueError("reference_wavelength must be > 0")

    @property
    def k_brg(self) -> float:
        return 2 * np.pi / self.reference_wavelength

    @property
    def strongest(self) -> TransitionLine:
        return max(self.lines, key=lambda line: line.relative_strength)

    @classmethod
    def single(cls, linewidth=const.GAMMA_BRG, wavelength=const.LAMBDA_BRG):
        return cls((TransitionLine(0.0, linewidth, 1.0),), wavelength)

    @classmethod
    def rb85_blue(cls, f2_strength=0.0, linewidth=const.GAMMA_BRG):
        """F=3 -> F'=3,4 lines at 1:3 strength, 40 MHz apart, F'=4 as reference.

        ``f2_strength`` adds the weak F'=2 line; its splitting from F'=3 is
        taken as 20 MHz.
        """
        lines = [
            TransitionLine(-const.HYPERFINE_SPLITTING, linewidth, 1.0),
            TransitionLine(0.0, linewidth, 3.0),
        ]
        if f2_strength > 0:
            f2 = TransitionLine(-const.HYPERFINE_SPLITTING - const.TWO_PI * 20e6,
                                linewidth, f2_strength)
            lines.insert(0, f2)
        return cls(tuple(lines))


@dataclass(frozen=True)
class ComplexReflection:
    """Complex amplitude reflection coefficient sampled over detuning."""

    detunings: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.detunings, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if d.ndim != 1 or d.shape != v.shape:
            raise ValueError("detunings and values must be 1D arrays of equal length")
        if d.size == 0:
            raise ValueError("empty reflection spectrum")
        if np.any(np.diff(d) <= 0):
            raise ValueError("detunings must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("reflection values must be finite")
        peak = np.max(np.abs(v))
        if peak > 1 + 1e-12:
            raise ValueError(f"|r| = {peak:.4g} exceeds unity")
        object.__setattr__(self, "detunings", d)
        object.__setattr__(self, "values", v)

    @property
    def amplitude(self):
        return np.abs(self.values)

    @property
    def phase(self):
        return np.angle(self.values)

    def __call__(self, delta):
        """Linear interpolation of the complex spectrum at ``delta``."""
        delta = np.asarray(delta, dtype=float)
        if np.any(delta < self.detunings[0]) or np.any(delta > self.detunings[-1]):
            raise ValueError("detuning outside the sampled grid")
        re = np.interp(delta, self.detunings, self.values.real)
        im = np.interp(delta, self.detunings, self.values.imag)
        return re + 1j * im

    def to_csv(self, path):
        write_reflection_csv(self, path)


def write_reflection_csv(reflection: ComplexReflection, path):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["detuning_rad_s", "re_r", "im_r"])
        for d, r in zip(reflection.detunings, reflection.values):
            w.writerow([repr(float(d)), repr(float(r.real)), repr(float(r.imag))])


def read_reflection_csv(path) -> ComplexReflection:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return ComplexReflection(data[:, 0], data[:, 1] + 1j * data[:, 2])


@dataclass(frozen=True)
class ScatterInputs:
    """Operating point of the Bragg scattering power estimate.

    incident_intensity, saturation_intensity : W/m^2
    illuminated_atoms : number of coherent scatterers
    polarization_angle : angle between incident polarization and the
        diffracted wavevector, rad
    debye_waller : coherent-amplitude reduction factor, in (0, 1]
    solid_angle : sr
    """

    incident_intensity: float = 10.0
    saturation_intensity: float = 20.0
    illuminated_atoms: float = 6.25e5
    polarization_angle: float = np.pi / 2
    debye_waller: float = 0.8
    solid_angle: float = 1.5e-5

    def __post_init__(self):
        # I_i = 0 and N = 0 are legal and give zero power
        if self.incident_intensity < 0:
            raise ValueError("incident_intensity must be >= 0")
        if not self.saturation_intensity > 0:
            raise ValueError("saturation_intensity must be > 0")
        if self.illuminated_atoms < 0:
            raise ValueError("illuminated_atoms must be >= 0")
        if not 0 < self.debye_waller <= 1:
            raise ValueError("debye_waller must lie in (0, 1]")
        if not 0 < self.solid_angle < 4 * np.pi:
            raise ValueError(
                f"solid_angle must lie in (0, 4 pi), got {self.solid_angle!r}")


def polarizability(delta, line: TransitionLine, wavelength=const.LAMBDA_BRG):
    """Complex polarizability over epsilon_0 (m^3) of a single two-level line.

    ``(6 pi / k^3) * G / (2 delta' + i G)`` scaled by the line strength,
    with ``delta' = delta - center_offset``.
    """
    k = 2 * np.pi / wavelength
    dp = np.asarray(delta, dtype=float) - line.center_offset
    g = line.linewidth
    return line.relative_strength * (6 * np.pi / k**3) * g / (2 * dp + 1j * g)


def lineset_polarizability(delta, lineset: LineSet):
    delta = np.asarray(delta, dtype=float)
    total = np.zeros(delta.shape, dtype=complex)
    for line in lineset.lines:
        total = total + polarizability(delta, line, lineset.reference_wavelength)
    return total


def structure_factor(count, phase_mismatch):
    """Coherent sum ``sum_{m=0}^{M-1} exp(i m theta)`` in closed form.

    Exactly ``M`` whenever ``theta`` is a multiple of 2 pi.
    """
    m = int(count)
    if m != count or m < 0:
        raise ValueError(f"count must be a non-negative integer, got {count!r}")
    theta = np.asarray(phase_mismatch, dtype=float)
    # only theta mod 2 pi matters for integer m
    eps = np.remainder(theta + np.pi, 2 * np.pi) - np.pi
    half = 0.5 * eps
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.sin(m * half) / np.sin(half)
    ratio = np.where(eps == 0.0, float(m), ratio)
    out = np.exp(1j * (m - 1) * half) * ratio
    if m == 0:
        out = np.zeros_like(out)
    return out[()] if out.ndim == 0 else out


def debye_waller(delta_kz, z_rms):
    """``exp(-(delta_kz * z_rms)^2 / 2)``."""
    if np.any(np.asarray(z_rms) < 0):
        raise ValueError("z_rms must be >= 0")
    return np.exp(-0.5 * (np.asarray(delta_kz) * np.asarray(z_rms)) ** 2)


def bragg_power(inputs: ScatterInputs, alpha_ratio, lineset: LineSet, structure):
    """Bragg-scattered power (W) into the solid angle ``inputs.solid_angle``.

    ``I_i (pi^2/lambda^4) |alpha/eps0|^2 sin^2(xi) |S|^2 f_DW^2 Omega_s``
    where ``S`` is the coherent sum over scatterers.
    """
    if not inputs.solid_angle > 0:
        raise ValueError("solid_angle must be > 0")
    lam = lineset.reference_wavelength
    return (inputs.incident_intensity * np.pi**2 / lam**4
            * np.abs(alpha_ratio) ** 2
            * np.sin(inputs.polarization_angle) ** 2
            * np.abs(structure) ** 2
            * inputs.debye_waller**2
            * inputs.solid_angle)


def overlap_power(incident_intensity, w_r, w_z):
    """Incident power on the cloud, ``(pi/2) w_r w_z I_i``."""
    return 0.5 * np.pi * w_r * w_z * incident_intensity


def reflectivity(scattered_power, incident_intensity, w_r, w_z):
    """Amplitude reflection coefficient ``sqrt(P_s / ((pi/2) w_r w_z I_i))``."""
    if scattered_power < 0:
        raise ValueError("scattered_power must be >= 0")
    if not (incident_intensity > 0 and w_r > 0 and w_z > 0):
        raise ValueError("incident_intensity, w_r and w_z must be > 0")
    R = scattered_power / overlap_power(incident_intensity, w_r, w_z)
    if R > 1:
        raise ValueError(f"power reflectivity R = {R:.4g} exceeds unity")
    return float(np.sqrt(R))


def incoherent_rate_ratio(incident_intensity, saturation_intensity, delta,
                          linewidth=const.GAMMA_BRG):
    """Rate of incoherent processes relative to the elastic scattering rate.

    ``(I_i/I_s) / (1 + 4 delta^2 / Gamma^2)``; a diagnostic only.
    """
    delta = np.asarray(delta, dtype=float)
    return (incident_intensity / saturation_intensity) / (1 + 4 * delta**2 / linewidth**2)


def bare_reflection_spectrum(lineset: LineSet, detunings, peak_reflectivity):
    """Unbroadened ``r(delta)`` scaled so ``|r| = peak_reflectivity`` at the
    centre of the strongest line."""
    detunings = np.asarray(detunings, dtype=float)
    ref = abs(lineset_polarizability(lineset.strongest.center_offset, lineset))
    values = peak_reflectivity * lineset_polarizability(detunings, lineset) / ref
    return ComplexReflection(detunings, values)
