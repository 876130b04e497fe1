"""Phase-sensitive Bragg scattering from atoms in optical lattices.

Scattering physics, lattice geometry, heterodyne synthesis, lock-in
demodulation and a thin-sheet transfer-matrix model.
"""

__version__ = "0.1.0"

from .scattering import (ComplexReflection, LineSet, ScatterInputs, TransitionLine,
                         bragg_power, debye_waller, lineset_polarizability, polarizability,
                         read_reflection_csv, reflectivity, structure_factor,
                         write_reflection_csv)
from .lattice import (LatticeConfig, debye_waller_factor, effective_layers,
                      lamb_dicke_factor, solid_angle)
from .broadening import broadened_reflection_spectrum
from .synthesis import BeatTrace, NoiseConfig, SweepConfig, synthesize_beat
from .demod import DemodConfig, DemodResult, demodulate, spectrum
from .transfer import LayerStack, born_equivalence_report, born_reflection, stack_reflection

__all__ = [
    "ComplexReflection", "LineSet", "ScatterInputs", "TransitionLine", "bragg_power",
    "debye_waller", "lineset_polarizability", "polarizability", "read_reflection_csv",
    "reflectivity", "structure_factor", "write_reflection_csv", "LatticeConfig",
    "debye_waller_factor", "effective_layers", "lamb_dicke_factor", "solid_angle",
    "broadened_reflection_spectrum", "BeatTrace", "NoiseConfig", "SweepConfig",
    "synthesize_beat", "DemodConfig", "DemodResult", "demodulate", "spectrum",
    "LayerStack", "born_equivalence_report", "born_reflection", "stack_reflection",
]
