"""Moving lattice: the Bragg beat sits at the reference beat minus the
pump difference (paper-fig4 preset)."""

from braggphase import pipelines
from braggphase.config import RunConfig

run = pipelines.moving(RunConfig.default("paper-fig4"))
p = run.peaks
print(f"lattice velocity {p['lattice_velocity_m_s'] * 1e3:.3f} mm/s")
for key in ("doppler_hz", "reference_hz", "bragg_hz", "expected_bragg_hz"):
    print(f"  {key:18s} {p[key] / 1e3:8.3f} kHz")
print(f"bin {p['bin_hz']:.0f} Hz, Bragg peak offset "
      f"{p['bragg_hz'] - p['expected_bragg_hz']:+.0f} Hz")
