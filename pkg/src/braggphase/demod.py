"""
Lock-in style recovery of the complex reflection from a beat trace.

The trace is mixed with ``cos`` and ``sin`` of the carrier and low-pass
filtered. For ``I = ... + A cos(w t + phi)`` the filtered products are

    u_c = (A/2) cos(phi),    u_s = -(A/2) sin(phi)

so ``amplitude = hypot(u_c, u_s) = A/2`` and ``phase = atan2(-u_s, u_c)``.
The mixer factor 1/2 is kept; with ``A = 2 |r| E_r0 E_i0`` the amplitude is
``|r| E_r0 E_i0`` directly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage, signal

from .synthesis import BeatTrace

WINDOWS = ("hann", "hamming", "blackman", "boxcar")


@dataclass(frozen=True)
class DemodConfig:
    """Carrier and low-pass settings, angular frequencies in rad/s.

    ``lowpass_cutoff`` defaults to a quarter of the carrier. ``filter_kind``
    is ``"fir"`` (Hamming windowed sinc, linear phase) or ``"brickwall"``
    (zeroing FFT bins above the cutoff). ``carrier_phase`` offsets the
    local oscillator.
    """

    carrier: float
    lowpass_cutoff: float | None = None
    filter_taps: int = 255
    dc_block: bool = True
    filter_kind: str = "fir"
    carrier_phase: float = 0.0

    def __post_init__(self):
        if self.lowpass_cutoff is None:
            object.__setattr__(self, "lowpass_cutoff", abs(self.carrier) / 4)
        if not 0 < self.lowpass_cutoff < abs(self.carrier):
            raise ValueError("need 0 < lowpass_cutoff < |carrier|")
        if self.filter_taps < 3 or self.filter_taps % 2 == 0:
            raise ValueError("filter_taps must be odd and >= 3")
        if self.filter_kind not in ("fir", "brickwall"):
            raise ValueError(f"unknown filter_kind {self.filter_kind!r}")


@dataclass(frozen=True)
class DemodResult:
    """Quadratures, amplitude and unwrapped phase on the valid samples.

    The first and last ``filter_taps // 2`` trace samples lack full filter
    support and are excluded; ``index`` gives the trace sample of each entry.
    """

    time: np.ndarray = field(repr=False)
    u_c: np.ndarray = field(repr=False)
    u_s: np.ndarray = field(repr=False)
    amplitude: np.ndarray = field(repr=False)
    phase: np.ndarray = field(repr=False)
    index: np.ndarray = field(repr=False)

    def to_csv(self, path):
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["time_s", "u_c", "u_s", "amplitude", "phase_rad"])
            for row in zip(self.time, self.u_c, self.u_s, self.amplitude, self.phase):
                w.writerow([repr(float(v)) for v in row])


@dataclass(frozen=True)
class SpectrumEstimate:
    frequencies: np.ndarray = field(repr=False)
    magnitude: np.ndarray = field(repr=False)
    window_name: str = "hann"

    @property
    def peak_frequency(self):
        return float(self.frequencies[np.argmax(self.magnitude)])

    @property
    def resolution(self):
        return float(self.frequencies[1] - self.frequencies[0])

    def to_csv(self, path):
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["freq_hz", "magnitude"])
            for f, m in zip(self.frequencies, self.magnitude):
                w.writerow([repr(float(f)), repr(float(m))])


def lowpass_taps(n_taps, cutoff_hz, sample_rate):
    """Hamming-windowed sinc with unit DC gain."""
    fc = cutoff_hz / sample_rate
    n = np.arange(n_taps) - (n_taps - 1) / 2
    h = 2 * fc * np.sinc(2 * fc * n) * np.hamming(n_taps)
    return h / h.sum()


def _fir_aligned(x, taps):
    # causal FIR then advance by the group delay (n_taps - 1) / 2;
    # keeps only outputs with full support on both sides
    d = (taps.size - 1) // 2
    y = np.convolve(x, taps)
    return y[2 * d: x.size]


def _brickwall(x, cutoff_hz, sample_rate, half):
    spec = np.fft.rfft(x)
    freqs = np.fft.rfftfreq(x.size, 1 / sample_rate)
    spec[freqs > cutoff_hz] = 0
    y = np.fft.irfft(spec, x.size)
    return y[half: x.size - half]


def demodulate(trace: BeatTrace, cfg: DemodConfig) -> DemodResult:
    fs = trace.sample_rate
    n = len(trace)
    if n <= cfg.filter_taps:
        raise ValueError(f"trace of {n} samples is shorter than the "
                         f"{cfg.filter_taps}-tap filter")
    if abs(cfg.carrier) / (2 * np.pi) >= fs / 2:
        raise ValueError("carrier is at or above the Nyquist frequency")

    x = trace.samples.astype(float)
    if cfg.dc_block:
        x = x - x.mean()
    t = trace.time
    arg = cfg.carrier * t + cfg.carrier_phase
    mixed_c = x * np.cos(arg)
    mixed_s = x * np.sin(arg)

    half = cfg.filter_taps // 2
    cutoff_hz = cfg.lowpass_cutoff / (2 * np.pi)
    if cfg.filter_kind == "fir":
        taps = lowpass_taps(cfg.filter_taps, cutoff_hz, fs)
        u_c = _fir_aligned(mixed_c, taps)
        u_s = _fir_aligned(mixed_s, taps)
    else:
        u_c = _brickwall(mixed_c, cutoff_hz, fs, half)
        u_s = _brickwall(mixed_s, cutoff_hz, fs, half)

    index = np.arange(half, n - half)
    amplitude = np.hypot(u_c, u_s)
    phase = np.unwrap(np.arctan2(-u_s, u_c))
    return DemodResult(t[index], u_c, u_s, amplitude, phase, index)


def spectrum(trace: BeatTrace, window_name="hann") -> SpectrumEstimate:
    """Amplitude spectrum of the mean-removed, windowed trace (Hz axis)."""
    if window_name not in WINDOWS:
        raise ValueError(f"unknown window {window_name!r}; choose from {WINDOWS}")
    n = len(trace)
    if n == 0:
        raise ValueError("empty trace")
    w = signal.get_window(window_name, n)
    x = (trace.samples - trace.samples.mean()) * w
    mag = np.abs(np.fft.rfft(x)) * 2 / w.sum()
    freqs = np.fft.rfftfreq(n, 1 / trace.sample_rate)
    return SpectrumEstimate(freqs, mag, window_name)


def zero_crossings(x, t):
    """Interpolated times at which ``x`` changes sign."""
    s = np.signbit(x)
    idx = np.nonzero(s[1:] != s[:-1])[0]
    x0, x1 = x[idx], x[idx + 1]
    frac = x0 / (x0 - x1)
    return t[idx] + frac * (t[idx + 1] - t[idx])


def phase_by_counting(trace: BeatTrace, carrier=None):
    """Phase profile from counting half-oscillations, carrier ramp removed.

    Every zero crossing advances the beat phase by pi; subtracting
    ``carrier * (t_k - t_0)`` leaves the phase relative to the first
    crossing. Held constant between crossings and returned on the trace
    timebase. The slowly varying baseline is removed first with a one-period
    moving average; crossings within one period of the trace ends are skipped.
    """
    if carrier is None:
        carrier = trace.sweep.carrier
    fs = trace.sample_rate
    t = trace.time
    period = max(1, int(round(fs * 2 * np.pi / abs(carrier))))
    baseline = ndimage.uniform_filter1d(trace.samples.astype(float), period,
                                        mode="reflect")
    tc = zero_crossings(trace.samples - baseline, t)
    # the baseline lacks full support within one window of either edge
    edge = period / fs
    tc = tc[(tc >= t[0] + edge) & (tc <= t[-1] - edge)]
    if tc.size < 3:
        raise ValueError(f"only {tc.size} zero crossings; trace is not oscillatory")
    counted = np.pi * np.arange(tc.size)
    residual = np.sign(carrier) * (counted - abs(carrier) * (tc - tc[0]))
    k = np.searchsorted(tc, t, side="right") - 1
    return np.where(k >= 0, residual[np.clip(k, 0, None)], 0.0)
