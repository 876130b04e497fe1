"""
Heterodyne beat synthesis.

The Bragg-reflected field ``r E_i`` is beaten against a reference field
``E_r`` offset by ``beat_offset``. With the blue laser swept across the
resonance the detector sees

    I(t) = E_r0^2 + |r|^2 E_i0^2 + 2 |r| E_r0 E_i0 cos(Theta(t))

where the carrier phase ``Theta`` advances at ``beat_offset - pump_difference``
(the moving-lattice Doppler shift is ``2 k_dip v = pump_difference``) and
picks up ``arg r`` plus optional laser phase noise.

Field amplitudes are in sqrt(W) so that ``E^2`` is a power.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import constants as const
from .scattering import ComplexReflection


@dataclass(frozen=True)
class NoiseConfig:
    """Laser phase diffusion (Lorentzian linewidth, Hz) and additive white
    detector noise (rms, detector units)."""

    laser_linewidth: float = 0.0
    additive_rms: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.laser_linewidth < 0 or self.additive_rms < 0:
            raise ValueError("noise parameters must be non-negative")

    @property
    def enabled(self):
        return self.laser_linewidth > 0 or self.additive_rms > 0


def _default_lambda_dip():
    return const.LAMBDA_BRG / np.cos(const.BETA_I)


@dataclass(frozen=True)
class SweepConfig:
    """Frequency sweep and heterodyne settings.

    Detunings, ``beat_offset`` and ``pump_difference`` are angular
    frequencies (rad/s); ``sample_rate`` is in Hz. ``pump_difference`` is the
    stored quantity; :attr:`lattice_velocity` follows from ``lambda_dip``.
    ``shape`` is ``"linear"`` or ``"triangle"`` (up then back down).
    """

    duration: float = 1e-3
    detuning_start: float = -const.TWO_PI * 100e6
    detuning_stop: float = const.TWO_PI * 100e6
    sample_rate: float = 1e6
    beat_offset: float = const.TWO_PI * 5.4e3
    pump_difference: float = 0.0
    e_r0: float = float(np.sqrt(54e-12))
    e_i0: float = float(np.sqrt(54e-12))
    lambda_dip: float = field(default_factory=_default_lambda_dip)
    shape: str = "linear"
    noise: NoiseConfig = field(default_factory=NoiseConfig)

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be > 0")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be > 0")
        if self.shape not in ("linear", "triangle"):
            raise ValueError(f"unknown sweep shape {self.shape!r}")
        if self.e_r0 < 0 or self.e_i0 < 0:
            raise ValueError("field amplitudes must be >= 0")
        if not self.lambda_dip > 0:
            raise ValueError("lambda_dip must be > 0")
        nyquist = 2 * (abs(self.beat_offset) + abs(self.pump_difference)) / const.TWO_PI
        if not self.sample_rate > nyquist:
            raise ValueError(
                f"Nyquist violation: sample_rate {self.sample_rate:g} Hz must exceed "
                f"2 (|beat_offset| + |pump_difference|) / 2 pi = {nyquist:g} Hz")
        if self.n_samples < 1:
            raise ValueError("duration * sample_rate must give at least one sample")

    @classmethod
    def from_velocity(cls, velocity, lambda_dip=None, **kwargs):
        lambda_dip = _default_lambda_dip() if lambda_dip is None else lambda_dip
        k_dip = 2 * np.pi / lambda_dip
        return cls(pump_difference=2 * k_dip * velocity, lambda_dip=lambda_dip, **kwargs)

    @property
    def lattice_velocity(self):
        return self.pump_difference / (2 * 2 * np.pi / self.lambda_dip)

    @property
    def carrier(self):
        """Angular frequency of the Bragg beat, ``beat_offset - 2 k_dip v``."""
        return self.beat_offset - self.pump_difference

    @property
    def n_samples(self):
        return int(round(self.duration * self.sample_rate))

    def time(self):
        return np.arange(self.n_samples) / self.sample_rate

    def detuning(self, t):
        """Laser detuning at time ``t`` for the configured sweep law."""
        frac = np.asarray(t, dtype=float) / self.duration
        if self.shape == "triangle":
            frac = 1 - np.abs(1 - 2 * frac)
        return self.detuning_start + (self.detuning_stop - self.detuning_start) * frac


@dataclass(frozen=True)
class BeatTrace:
    samples: np.ndarray = field(repr=False)
    sample_rate: float
    sweep: SweepConfig
    detuning: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("trace samples must be finite")
        if self.samples.shape != self.detuning.shape:
            raise ValueError("samples and detuning must align")

    @property
    def time(self):
        return np.arange(self.samples.size) / self.sample_rate

    def __len__(self):
        return self.samples.size

    def to_csv(self, path):
        write_trace_csv(self, path)


def write_trace_csv(trace: BeatTrace, path):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time_s", "value", "detuning_rad_s"])
        for t, v, d in zip(trace.time, trace.samples, trace.detuning):
            w.writerow([repr(float(t)), repr(float(v)), repr(float(d))])


def _noise(sweep: SweepConfig, n):
    noise = sweep.noise
    rng = np.random.default_rng(noise.seed)
    dt = 1.0 / sweep.sample_rate
    phase = np.zeros(n)
    if noise.laser_linewidth > 0:
        # Wiener phase: step variance 2 pi * linewidth * dt
        steps = rng.normal(0.0, np.sqrt(2 * np.pi * noise.laser_linewidth * dt), n)
        steps[0] = 0.0
        phase = np.cumsum(steps)
    additive = np.zeros(n)
    if noise.additive_rms > 0:
        additive = rng.normal(0.0, noise.additive_rms, n)
    return phase, additive


def synthesize_beat(reflection: ComplexReflection, sweep: SweepConfig) -> BeatTrace:
    """Detector trace of the Bragg/reference beat over one sweep."""
    lo, hi = sorted((sweep.detuning_start, sweep.detuning_stop))
    if lo < reflection.detunings[0] or hi > reflection.detunings[-1]:
        raise ValueError("reflection grid does not cover the sweep range")
    t = sweep.time()
    delta = sweep.detuning(t)
    r = reflection(delta)
    phase_noise, additive = _noise(sweep, t.size)
    carrier = np.exp(1j * (sweep.carrier * t + phase_noise))
    er, ei = sweep.e_r0, sweep.e_i0
    samples = (er**2 + np.abs(r) ** 2 * ei**2
               + 2 * er * ei * np.real(r * carrier) + additive)
    return BeatTrace(samples, sweep.sample_rate, sweep, delta)


def _tone(sweep: SweepConfig, omega):
    t = sweep.time()
    return BeatTrace(np.cos(omega * t), sweep.sample_rate, sweep, sweep.detuning(t))


def synthesize_reference_pair(sweep: SweepConfig):
    """Unit-amplitude tones at the Doppler shift (pump difference) and at the
    reference beat offset, on the sweep's timebase."""
    return _tone(sweep, sweep.pump_difference), _tone(sweep, sweep.beat_offset)


def with_noise(sweep: SweepConfig, **kwargs) -> SweepConfig:
    return replace(sweep, noise=replace(sweep.noise, **kwargs))
