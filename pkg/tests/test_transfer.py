from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from braggphase import constants as const
from braggphase.lattice import LatticeConfig, effective_layers
from braggphase.scattering import (ComplexReflection, LineSet, lineset_polarizability,
                                   structure_factor)
from braggphase.transfer import (LayerStack, born_equivalence_report, born_reflection,
                                 layer_coupling, stack_reflection, transfer_matrix,
                                 transfer_response)

from oracles import born_sum

G = const.GAMMA_BRG
CFG = LatticeConfig()
GRID = np.linspace(-20, 20, 401) * G


def default_stack():
    return LayerStack.from_lattice(CFG)


def test_layer_coupling_linear():
    assert layer_coupling(0.0, 1e11, 1e7) == 0
    z1 = layer_coupling(1e-15 - 2e-15j, 1e11, 1e7)
    assert layer_coupling(1e-15 - 2e-15j, 2e11, 1e7) == pytest.approx(2 * z1)
    with pytest.raises(ValueError):
        layer_coupling(1.0, 0.0, 1.0)


def test_default_density_is_thin_grating():
    stack = default_stack()
    assert stack.n_layers == effective_layers(CFG)
    assert np.abs(stack.coupling(GRID)).max() < 0.05


def test_single_layer_is_sheet_reflection():
    zeta = np.array([0.01 + 0.02j, 0.3 - 0.1j])
    r, t = transfer_response(zeta, 1, 1.234)
    np.testing.assert_allclose(r, 1j * zeta / (1 - 1j * zeta), rtol=1e-14)
    np.testing.assert_allclose(t, 1 / (1 - 1j * zeta), rtol=1e-14)


def test_unit_determinant():
    zeta = np.array([0.05 + 0.01j, 0.2j, -0.3])
    m00, m01, m10, m11 = transfer_matrix(zeta, 17, 0.4)
    np.testing.assert_allclose(m00 * m11 - m01 * m10, 1.0, atol=1e-12)


def test_weak_coupling_born_limit():
    # r_total / (N i zeta) -> 1 at the Bragg condition
    n = 40
    zeta = 1e-8 * (1 + 0.5j)
    r, _ = transfer_response(zeta, n, 2 * np.pi * 7)
    assert r / (n * 1j * zeta) == pytest.approx(1.0, rel=1e-6)
    r1 = 1j * zeta / (1 - 1j * zeta)
    assert r == pytest.approx(born_sum(r1, n, 2 * np.pi * 7), rel=1e-6)


def test_mismatch_by_pi_cancels():
    n, zeta = 40, 1e-6j
    matched, _ = transfer_response(zeta, n, 0.0)
    crossed, _ = transfer_response(zeta, n, np.pi)
    ratio = abs(crossed / matched)
    # even N: the structure factor cancels completely
    assert ratio < 1e-5
    assert abs(structure_factor(n, np.pi)) / n < 1e-12


def test_zero_coupling_is_pure_propagation():
    r, t = transfer_response(np.zeros(3), 12, 0.7)
    np.testing.assert_array_equal(r, 0)
    np.testing.assert_allclose(np.abs(t), 1.0)
    # propagation phase through N - 1 gaps
    np.testing.assert_allclose(t, np.exp(0.5j * 0.7 * 11))


@given(st.floats(-0.3, 0.3), st.integers(1, 80), st.floats(0, 2 * np.pi))
def test_energy_conserved_lossless(zeta, n, phase):
    r, t = transfer_response(zeta, n, phase)
    assert abs(abs(r) ** 2 + abs(t) ** 2 - 1) < 1e-9


def test_energy_conserved_lossless_default_stack():
    stack = default_stack()
    zeta = stack.coupling(GRID).real
    r, t = transfer_response(zeta, stack.n_layers, stack.round_trip_phase)
    assert np.max(np.abs(np.abs(r) ** 2 + np.abs(t) ** 2 - 1)) < 1e-9


def test_passive_stack_bounded():
    stack = default_stack()
    r, t = transfer_response(stack.coupling(GRID), stack.n_layers, stack.round_trip_phase)
    assert np.all(np.abs(r) ** 2 + np.abs(t) ** 2 <= 1 + 1e-12)


def test_reciprocity_reversed_stack():
    # light from the back sees the mirrored (identical) stack
    zeta = 0.02 + 0.01j
    m00, m01, m10, m11 = transfer_matrix(zeta, 25, 2 * np.pi + 0.1)
    r_front = -m10 / m11
    r_back = m01 / m11
    assert abs(r_front) == pytest.approx(abs(r_back), rel=1e-12)


def test_weak_stack_follows_polarizability_phase():
    # a radiating sheet adds a constant -pi/2 to the phase of alpha
    stack = replace(default_stack(), areal_density=1e5)
    r = stack_reflection(stack, GRID)
    alpha = lineset_polarizability(GRID, stack.lineset)
    rel = np.angle(r.values / alpha)
    np.testing.assert_allclose(rel, -np.pi / 2, atol=1e-6)


def test_dilute_stack_equivalence():
    stack = default_stack()
    nz = stack.n_layers * np.abs(stack.coupling(0.0))
    dilute = replace(stack, areal_density=stack.areal_density * 1e-4 / nz)
    dev = born_equivalence_report(dilute, stack_reflection(dilute, GRID))
    assert dev < 1e-3


def test_deviation_grows_with_coupling():
    stack = default_stack()
    devs = []
    for scale in (1e-3, 1e-2, 1e-1, 1.0, 3.0):
        s = replace(stack, areal_density=stack.areal_density * scale)
        devs.append(born_equivalence_report(s, stack_reflection(s, GRID)))
    assert np.all(np.diff(devs) > 0)
    assert devs[-1] > 0.5


def test_born_reflection_matches_direct_sum():
    stack = default_stack()
    born = born_reflection(stack, GRID[::40])
    zeta = stack.coupling(GRID[::40])
    r1 = 1j * zeta / (1 - 1j * zeta)
    direct = np.conj(born_sum(r1, stack.n_layers, stack.round_trip_phase))
    np.testing.assert_allclose(born.values, direct, rtol=1e-10)


def test_report_grid_handling():
    stack = default_stack()
    refl = stack_reflection(stack, GRID)
    other = ComplexReflection(GRID + 0.5, np.zeros(GRID.size))
    with pytest.raises(ValueError):
        born_equivalence_report(stack, refl, other)
    partial = born_reflection(stack, GRID[100:200])
    assert born_equivalence_report(stack, refl, partial) >= 0


def test_stack_validation():
    with pytest.raises(ValueError):
        LayerStack(0, 1e11, 4e-7)
    with pytest.raises(ValueError):
        LayerStack(3, -1.0, 4e-7)
    with pytest.raises(ValueError):
        LayerStack(3, 1e11, 0.0)
    with pytest.raises(ValueError):
        transfer_matrix(np.array([-1j]), 3, 0.0)


def test_multiline_stack():
    stack = LayerStack.from_lattice(CFG, LineSet.rb85_blue())
    grid = 2 * np.pi * np.linspace(-60e6, 20e6, 801)
    r = stack_reflection(stack, grid)
    assert np.all(r.amplitude <= 1)
