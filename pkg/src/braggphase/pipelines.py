"""
End-to-end runs built from a :class:`~braggphase.config.RunConfig`.

Each function returns plain results; writing files is left to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .broadening import broadened_reflection_spectrum
from .config import RunConfig
from .demod import DemodResult, SpectrumEstimate, demodulate, phase_by_counting, spectrum
from .scattering import ComplexReflection
from .synthesis import BeatTrace, synthesize_beat, synthesize_reference_pair

CENTRAL_FRACTION = 0.8
AMPLITUDE_TOL = 0.01
PHASE_TOL = 0.02


def reflection_spectrum(cfg: RunConfig) -> ComplexReflection:
    """Broadened complex reflection on the configured detuning grid."""
    mc_seed, _ = cfg.seeds()
    return broadened_reflection_spectrum(
        cfg.lineset(), cfg.lattice(), cfg.scan(),
        samples=cfg["spectrum"]["samples"], rng_seed=mc_seed,
        peak_reflectivity=cfg.peak_reflectivity())


def _wrap(x):
    return np.angle(np.exp(1j * np.asarray(x)))


def central_mask(time, duration, fraction=CENTRAL_FRACTION):
    edge = 0.5 * (1 - fraction) * duration
    return (time >= edge) & (time <= duration - edge)


def closure_report(reflection: ComplexReflection, trace: BeatTrace,
                   result: DemodResult, counted_phase=None) -> dict:
    """Recovered against generating ``r`` over the central part of the sweep.

    Amplitude error is RMS relative to ``max |r|``; phase error is the RMS of
    the wrapped difference.
    """
    sweep = trace.sweep
    scale = sweep.e_r0 * sweep.e_i0
    r = reflection(trace.detuning[result.index])
    mask = central_mask(result.time, sweep.duration)
    if not mask.any():
        raise ValueError("no demodulated samples in the central part of the sweep")
    peak = np.abs(r[mask]).max()
    if scale == 0 or peak == 0:
        raise ValueError("closure undefined for a vanishing beat amplitude")
    amp_err = (result.amplitude[mask] / scale - np.abs(r[mask])) / peak
    phase_err = _wrap(result.phase[mask] - np.angle(r[mask]))
    report = {
        "samples_compared": int(mask.sum()),
        "amplitude_rms_relative": float(np.sqrt(np.mean(amp_err**2))),
        "phase_rms_rad": float(np.sqrt(np.mean(phase_err**2))),
        "amplitude_tolerance": AMPLITUDE_TOL,
        "phase_tolerance_rad": PHASE_TOL,
    }
    report["passed"] = bool(report["amplitude_rms_relative"] < AMPLITUDE_TOL
                            and report["phase_rms_rad"] < PHASE_TOL)
    if counted_phase is not None:
        # counting measures phase relative to the first zero crossing
        diff = counted_phase[result.index] - result.phase
        diff = _wrap(diff - np.median(diff[mask]))
        report["counting_vs_demod_rms_rad"] = float(np.sqrt(np.mean(diff[mask] ** 2)))
    return report


@dataclass(frozen=True)
class HeterodyneRun:
    reflection: ComplexReflection
    trace: BeatTrace
    result: DemodResult
    beat_spectrum: SpectrumEstimate
    report: dict


def heterodyne(cfg: RunConfig, reflection: ComplexReflection | None = None) -> HeterodyneRun:
    """Synthesize the swept beat, demodulate it and compare with ``r``."""
    reflection = reflection_spectrum(cfg) if reflection is None else reflection
    sweep = cfg.sweep()
    trace = synthesize_beat(reflection, sweep)
    result = demodulate(trace, cfg.demod(sweep.carrier))
    try:
        counted = phase_by_counting(trace)
    except ValueError:
        counted = None
    report = closure_report(reflection, trace, result, counted)
    report["carrier_hz"] = sweep.carrier / (2 * np.pi)
    report["noise_enabled"] = sweep.noise.enabled
    beat = spectrum(trace, cfg["demod"]["window"])
    report["beat_peak_hz"] = beat.peak_frequency
    report["bin_hz"] = beat.resolution
    return HeterodyneRun(reflection, trace, result, beat, report)


@dataclass(frozen=True)
class MovingRun:
    doppler: SpectrumEstimate
    reference: SpectrumEstimate
    bragg: SpectrumEstimate
    peaks: dict


def moving(cfg: RunConfig, reflection: ComplexReflection | None = None) -> MovingRun:
    """Spectra of the Doppler tone, the reference tone and the Bragg beat."""
    reflection = reflection_spectrum(cfg) if reflection is None else reflection
    sweep = cfg.sweep()
    window = cfg["demod"]["window"]
    doppler_tone, reference_tone = synthesize_reference_pair(sweep)
    bragg_trace = synthesize_beat(reflection, sweep)
    spectra = [spectrum(x, window) for x in (doppler_tone, reference_tone, bragg_trace)]
    peaks = {
        "doppler_hz": spectra[0].peak_frequency,
        "reference_hz": spectra[1].peak_frequency,
        "bragg_hz": spectra[2].peak_frequency,
        "expected_bragg_hz": abs(sweep.carrier) / (2 * np.pi),
        "bin_hz": spectra[2].resolution,
        "lattice_velocity_m_s": sweep.lattice_velocity,
    }
    return MovingRun(*spectra, peaks)
