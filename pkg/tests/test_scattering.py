import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from braggphase import constants as const
from braggphase.scattering import (ComplexReflection, LineSet, ScatterInputs, TransitionLine,
                                   bare_reflection_spectrum, bragg_power, debye_waller,
                                   incoherent_rate_ratio, lineset_polarizability, overlap_power,
                                   polarizability, read_reflection_csv, reflectivity,
                                   structure_factor)

from oracles import direct_structure_sum, lorentzian_polarizability

G = const.GAMMA_BRG
K = 2 * np.pi / const.LAMBDA_BRG
LINE = TransitionLine(0.0)


# -- polarizability -------------------------------------------------------

def test_resonant_polarizability_is_negative_imaginary():
    a = polarizability(0.0, LINE)
    assert a == pytest.approx(-1j * 6 * np.pi / K**3, rel=1e-14)
    assert np.angle(a) == pytest.approx(-np.pi / 2)


def test_far_detuned_limit_vanishes():
    peak = abs(polarizability(0.0, LINE))
    assert abs(polarizability(1e6 * G, LINE)) < 1e-5 * peak
    assert abs(polarizability(-1e6 * G, LINE)) < 1e-5 * peak


def test_matches_rationalized_oracle():
    d = np.linspace(-50, 50, 1001) * G
    line = TransitionLine(3 * G, 2 * G, 0.7)
    ours = polarizability(d, line)
    ref = lorentzian_polarizability(d, 3 * G, 2 * G, 0.7, const.LAMBDA_BRG)
    np.testing.assert_allclose(ours, ref, rtol=1e-13)


@given(st.floats(-1e3, 1e3).filter(lambda x: abs(x) > 1e-6))
def test_single_line_phase_law(x):
    d = x * G
    a = polarizability(d, LINE)
    assert np.angle(a) == pytest.approx(np.arctan2(-G, 2 * d), abs=1e-12)


def test_phase_monotonic_from_zero_to_minus_pi():
    # detuning swept from blue to red
    d = np.linspace(1e4, -1e4, 20001) * G
    phi = np.angle(polarizability(d, LINE))
    assert np.all(np.diff(phi) < 0)
    assert phi[0] > -1e-4 and phi[-1] < -np.pi + 1e-4


def test_kramers_kronig_parity():
    d = np.linspace(-30, 30, 601) * G
    a = polarizability(d, LINE)
    np.testing.assert_allclose(a.real, -a.real[::-1], atol=1e-12 * abs(a).max())
    np.testing.assert_allclose(a.imag, a.imag[::-1], atol=1e-12 * abs(a).max())


def test_two_lines_peak_ratio_one_to_three():
    lines = LineSet.rb85_blue()
    d = np.linspace(-60e6, 20e6, 80001) * 2 * np.pi
    amp = np.abs(lineset_polarizability(d, lines))
    i3 = np.argmax(np.where(d < -20e6 * 2 * np.pi, amp, 0))
    i4 = np.argmax(np.where(d > -20e6 * 2 * np.pi, amp, 0))
    assert amp[i3] / amp[i4] == pytest.approx(1 / 3, rel=0.02)
    assert (d[i4] - d[i3]) / (2 * np.pi) == pytest.approx(40e6, rel=0.01)


def test_lineset_validation():
    with pytest.raises(ValueError):
        TransitionLine(0.0, linewidth=0.0)
    with pytest.raises(ValueError):
        TransitionLine(0.0, relative_strength=-1)
    with pytest.raises(ValueError):
        LineSet((TransitionLine(0.0, relative_strength=0.0),))
    with pytest.raises(ValueError):
        LineSet((TransitionLine(1.0), TransitionLine(0.0)))
    with pytest.raises(ValueError):
        LineSet(())


def test_optional_f2_line():
    lines = LineSet.rb85_blue(f2_strength=0.1)
    assert len(lines.lines) == 3
    assert lines.lines[0].center_offset == pytest.approx(-2 * np.pi * 60e6)


# -- structure factor -----------------------------------------------------

def test_structure_factor_cases():
    assert structure_factor(630, 0.0) == 630
    assert structure_factor(0, 0.3) == 0
    assert abs(structure_factor(4, np.pi)) < 1e-12


def test_structure_factor_matches_direct_sum():
    ours = structure_factor(100, 0.01)
    ref = direct_structure_sum(100, 0.01)
    assert abs(ours - ref) / abs(ref) < 1e-12


@given(st.integers(1, 300), st.floats(-20, 20))
def test_structure_factor_bounded(m, theta):
    s = structure_factor(m, theta)
    assert abs(s) <= m * (1 + 1e-12)
    assert abs(s - direct_structure_sum(m, theta)) <= 1e-9 * m


def test_structure_factor_equality_only_at_bragg():
    assert abs(structure_factor(50, 2 * np.pi * 3)) == pytest.approx(50)
    assert abs(structure_factor(50, 0.05)) < 50


def test_structure_factor_rejects_bad_counts():
    with pytest.raises(ValueError):
        structure_factor(2.5, 0)
    with pytest.raises(ValueError):
        structure_factor(-1, 0)


# -- Debye-Waller ---------------------------------------------------------

def test_debye_waller_values():
    assert debye_waller(1e7, 0.0) == 1.0
    assert debye_waller(1.0, np.sqrt(2)) == pytest.approx(np.exp(-1))
    assert debye_waller(2.0, np.sqrt(0.1)) == pytest.approx(np.exp(-0.2))
    with pytest.raises(ValueError):
        debye_waller(1.0, -1.0)


@given(st.floats(0, 5), st.floats(0, 5))
def test_debye_waller_monotonic(a, b):
    lo, hi = sorted((a, b))
    f_lo, f_hi = debye_waller(1.0, lo), debye_waller(1.0, hi)
    assert 0 < f_hi <= f_lo <= 1


# -- power and reflectivity ----------------------------------------------

def _resonant_power(**kw):
    lines = LineSet.single()
    inputs = ScatterInputs(**kw)
    return bragg_power(inputs, polarizability(0.0, LINE), lines,
                       structure_factor(int(inputs.illuminated_atoms), 0.0))


def test_power_zero_structure():
    assert bragg_power(ScatterInputs(), 1e-12, LineSet.single(), 0.0) == 0.0


def test_power_linear_in_intensity_and_quadratic_in_structure():
    lines = LineSet.single()
    a = polarizability(0.0, LINE)
    p1 = bragg_power(ScatterInputs(incident_intensity=1.0), a, lines, 10.0)
    assert bragg_power(ScatterInputs(incident_intensity=3.0), a, lines, 10.0) == pytest.approx(3 * p1)
    assert bragg_power(ScatterInputs(incident_intensity=1.0), a, lines, 30.0) == pytest.approx(9 * p1)


def test_doubling_atoms_quadruples_power():
    assert _resonant_power(illuminated_atoms=2e5) == pytest.approx(4 * _resonant_power(illuminated_atoms=1e5))


def test_degenerate_inputs_give_zero_power():
    assert _resonant_power(illuminated_atoms=0) == 0.0
    assert _resonant_power(incident_intensity=0.0) == 0.0


def test_scatter_inputs_validation():
    for kw in ({"debye_waller": 0.0}, {"debye_waller": 1.1}, {"solid_angle": 0.0},
               {"solid_angle": 4 * np.pi}, {"illuminated_atoms": -1},
               {"incident_intensity": -1.0}):
        with pytest.raises(ValueError):
            ScatterInputs(**kw)


def test_reflectivity_cases():
    assert reflectivity(100e-12, 10.0, 30e-6, 250e-6) == pytest.approx(0.0291, abs=5e-4)
    assert reflectivity(0.0, 10.0, 30e-6, 250e-6) == 0.0
    p = overlap_power(10.0, 30e-6, 250e-6)
    assert reflectivity(p, 10.0, 30e-6, 250e-6) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        reflectivity(1.01 * p, 10.0, 30e-6, 250e-6)


def test_incoherent_rate_ratio():
    assert incoherent_rate_ratio(10, 20, 0.0, G) == pytest.approx(0.5)
    assert incoherent_rate_ratio(10, 20, G / 2, G) == pytest.approx(0.25)


# -- ComplexReflection ----------------------------------------------------

def test_reflection_invariants():
    with pytest.raises(ValueError):
        ComplexReflection([0.0, 1.0], [0.5, 1.5])
    with pytest.raises(ValueError):
        ComplexReflection([1.0, 0.0], [0.1, 0.1])
    with pytest.raises(ValueError):
        ComplexReflection([0.0, 1.0], [0.1])
    with pytest.raises(ValueError):
        ComplexReflection([], [])


def test_reflection_interpolation_and_bounds():
    r = ComplexReflection([0.0, 2.0], [0.0, 0.2j])
    assert r(1.0) == pytest.approx(0.1j)
    with pytest.raises(ValueError):
        r(2.5)


def test_reflection_csv_round_trip(tmp_path):
    d = np.linspace(-5, 5, 11) * G
    r = bare_reflection_spectrum(LineSet.rb85_blue(), d, 0.03)
    path = tmp_path / "r.csv"
    r.to_csv(path)
    assert path.read_text().splitlines()[0] == "detuning_rad_s,re_r,im_r"
    back = read_reflection_csv(path)
    np.testing.assert_array_equal(back.detunings, r.detunings)
    np.testing.assert_array_equal(back.values, r.values)


def test_bare_spectrum_normalized_at_strongest_line():
    lines = LineSet.rb85_blue()
    r = bare_reflection_spectrum(lines, np.array([-1.0, 0.0, 1.0]), 0.03)
    assert abs(r.values[1]) == pytest.approx(0.03)
