"""
Run configuration: sectioned key-value text with units in the key names.

Angles are given in degrees, frequencies in cyclic units (``_mhz`` keys are
multiplied by 2 pi internally), powers in pW. Unknown sections or keys are
rejected with the line they appear on.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .broadening import REFERENCE_ATOMS, REFERENCE_POWER, operating_reflectivity
from .demod import DemodConfig
from .lattice import LatticeConfig, effective_layers
from .scattering import LineSet, ScatterInputs, TransitionLine
from .synthesis import NoiseConfig, SweepConfig
from .transfer import LayerStack

TWO_PI = const.TWO_PI

_DEFAULT_LATTICE = LatticeConfig()

# section -> key -> default; the default's type is the key's type
SCHEMA = {
    "run": {
        "seed": 0,
    },
    "lattice": {
        "lambda_dip_nm": float(_DEFAULT_LATTICE.lambda_dip * 1e9),
        "lambda_brg_nm": const.LAMBDA_BRG * 1e9,
        "beta_i_deg": 58.0,
        "trap_depth_uk": 1000.0,
        "temperature_uk": 200.0,
        "w_dip_um": 130.0,
        "w_r_um": 30.0,
        "w_z_um": 250.0,
        "n_tot": 1e7,
        "illuminated_fraction": 1 / 16,
        "omega_z_rad_s": float(_DEFAULT_LATTICE.axial_frequency),
        "density_cm3": 5e11,
        "light_shift_ratio": const.LIGHT_SHIFT_RATIO,
    },
    "scatter": {
        "incident_intensity_w_m2": 10.0,
        "saturation_intensity_w_m2": 20.0,
        "polarization_deg": 90.0,
        "reference_power_pw": REFERENCE_POWER * 1e12,
        "reference_atoms": REFERENCE_ATOMS,
    },
    "lines": {
        "linewidth_mhz": 1.3,
        "centers_mhz": "-40, 0",
        "strengths": "1, 3",
    },
    "spectrum": {
        "detuning_min_mhz": -100.0,
        "detuning_max_mhz": 100.0,
        "points": 1024,
        "samples": 100000,
    },
    "sweep": {
        "duration_ms": 50.0,
        "detuning_start_mhz": 80.0,
        "detuning_stop_mhz": -40.0,
        "sample_rate_hz": 100e3,
        "beat_offset_khz": 5.4,
        "pump_difference_khz": 0.0,
        "power_r_pw": 54.0,
        "power_i_pw": 54.0,
        "shape": "linear",
    },
    "noise": {
        "laser_linewidth_hz": 0.0,
        "additive_rms_pw": 0.0,
    },
    "demod": {
        "lowpass_cutoff_khz": 0.0,
        "filter_taps": 255,
        "dc_block": True,
        "filter_kind": "fir",
        "window": "hann",
    },
    "stack": {
        "n_layers": 0,
        "span_gamma": 20.0,
        "points": 801,
    },
}

PRESETS = {
    "paper-fig2c": {},
    "paper-fig3": {},
    "paper-fig4": {
        "sweep": {
            "duration_ms": 50.0,
            "detuning_start_mhz": 100.0,
            "detuning_stop_mhz": -100.0,
            "sample_rate_hz": 1e6,
            "beat_offset_khz": 52.0,
            "pump_difference_khz": 37.0,
        },
    },
}


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending line."""


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(default, text):
    if isinstance(default, bool):
        return _parse_bool(text)
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text.strip()


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


@dataclass(frozen=True)
class RunConfig:
    """Resolved values in file units, ``values[section][key]``."""

    values: dict

    def __getitem__(self, section):
        return self.values[section]

    @classmethod
    def default(cls, preset=None):
        values = {s: dict(keys) for s, keys in SCHEMA.items()}
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
            for section, keys in PRESETS[preset].items():
                values[section].update(keys)
        return cls(values)

    def updated(self, section, **keys):
        values = {s: dict(v) for s, v in self.values.items()}
        values[section].update(keys)
        return RunConfig(values)

    def with_seed(self, seed):
        return self.updated("run", seed=int(seed))

    # -- serialization --------------------------------------------------

    def dumps(self):
        lines = []
        for section, keys in self.values.items():
            lines.append(f"[{section}]")
            for key, value in keys.items():
                if isinstance(value, bool):
                    text = "true" if value else "false"
                elif isinstance(value, (float, np.floating)):
                    text = repr(float(value))
                else:
                    text = str(value)
                lines.append(f"{key} = {text}")
            lines.append("")
        return "\n".join(lines)

    def as_dict(self):
        return {s: dict(v) for s, v in self.values.items()}

    # -- builders -------------------------------------------------------

    def lattice(self) -> LatticeConfig:
        c = self["lattice"]
        return LatticeConfig(
            lambda_dip=c["lambda_dip_nm"] * 1e-9,
            lambda_brg=c["lambda_brg_nm"] * 1e-9,
            beta_i=np.deg2rad(c["beta_i_deg"]),
            trap_depth=const.k_B * c["trap_depth_uk"] * 1e-6,
            temperature=c["temperature_uk"] * 1e-6,
            w_dip=c["w_dip_um"] * 1e-6,
            w_r=c["w_r_um"] * 1e-6,
            w_z=c["w_z_um"] * 1e-6,
            n_tot=c["n_tot"],
            illuminated_fraction=c["illuminated_fraction"],
            axial_frequency=c["omega_z_rad_s"],
            density=c["density_cm3"] * 1e6,
            light_shift_ratio=c["light_shift_ratio"],
        )

    def lineset(self) -> LineSet:
        c = self["lines"]
        centers = _float_list(c["centers_mhz"])
        strengths = _float_list(c["strengths"])
        if len(centers) != len(strengths):
            raise ValueError("centers_mhz and strengths must have equal length")
        gamma = TWO_PI * c["linewidth_mhz"] * 1e6
        lines = tuple(TransitionLine(TWO_PI * f * 1e6, gamma, s)
                      for f, s in zip(centers, strengths))
        return LineSet(lines, self["lattice"]["lambda_brg_nm"] * 1e-9)

    def scatter_inputs(self, illuminated_atoms, debye_waller, solid_angle) -> ScatterInputs:
        c = self["scatter"]
        return ScatterInputs(
            incident_intensity=c["incident_intensity_w_m2"],
            saturation_intensity=c["saturation_intensity_w_m2"],
            illuminated_atoms=illuminated_atoms,
            polarization_angle=np.deg2rad(c["polarization_deg"]),
            debye_waller=debye_waller,
            solid_angle=solid_angle,
        )

    def peak_reflectivity(self):
        c = self["scatter"]
        return operating_reflectivity(
            self.lattice(), c["incident_intensity_w_m2"],
            c["reference_power_pw"] * 1e-12, c["reference_atoms"])

    def scan(self):
        c = self["spectrum"]
        mhz = np.linspace(c["detuning_min_mhz"], c["detuning_max_mhz"], c["points"])
        return TWO_PI * mhz * 1e6

    def seeds(self):
        """Independent integer seeds for the ensemble sampling and the noise."""
        ss = np.random.SeedSequence(self["run"]["seed"])
        return tuple(int(child.generate_state(1)[0]) for child in ss.spawn(2))

    def sweep(self) -> SweepConfig:
        c = self["sweep"]
        n = self["noise"]
        noise = NoiseConfig(n["laser_linewidth_hz"], n["additive_rms_pw"] * 1e-12,
                            self.seeds()[1])
        return SweepConfig(
            duration=c["duration_ms"] * 1e-3,
            detuning_start=TWO_PI * c["detuning_start_mhz"] * 1e6,
            detuning_stop=TWO_PI * c["detuning_stop_mhz"] * 1e6,
            sample_rate=c["sample_rate_hz"],
            beat_offset=TWO_PI * c["beat_offset_khz"] * 1e3,
            pump_difference=TWO_PI * c["pump_difference_khz"] * 1e3,
            e_r0=float(np.sqrt(c["power_r_pw"] * 1e-12)),
            e_i0=float(np.sqrt(c["power_i_pw"] * 1e-12)),
            lambda_dip=self["lattice"]["lambda_dip_nm"] * 1e-9,
            shape=c["shape"],
            noise=noise,
        )

    def demod(self, carrier) -> DemodConfig:
        c = self["demod"]
        cutoff = TWO_PI * c["lowpass_cutoff_khz"] * 1e3 or None
        return DemodConfig(carrier, cutoff, c["filter_taps"], c["dc_block"],
                           c["filter_kind"])

    def stack(self, lineset=None) -> LayerStack:
        cfg = self.lattice()
        n = self["stack"]["n_layers"] or effective_layers(cfg)
        return LayerStack.from_lattice(cfg, lineset, n_layers=n)

    def stack_grid(self, linewidth):
        c = self["stack"]
        return linewidth * np.linspace(-c["span_gamma"], c["span_gamma"], c["points"])

    def validate(self):
        """Build every sub-config once so cross-field invariants are checked."""
        self.lattice()
        self.lineset()
        scan = self.scan()
        if scan.size < 2 or np.any(np.diff(scan) <= 0):
            raise ValueError("spectrum grid must be strictly increasing with >= 2 points")
        sweep = self.sweep()
        self.demod(sweep.carrier if sweep.carrier != 0 else sweep.beat_offset)
        self.stack()
        return self


_KEY_ORIGIN = {  # key -> section, for locating errors raised by builders
    key: section for section, keys in SCHEMA.items() for key in keys
}


def _locate(text, section, key=None):
    """1-based line number of ``[section]`` or of ``key`` inside it, or None."""
    current = None
    for number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        m = re.match(r"\[(.+)\]$", stripped)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return number
            continue
        if current == section and key is not None:
            if re.match(rf"{re.escape(key)}\s*[=:]", stripped):
                return number
    return None


def _mentioned_key(message):
    for key in sorted(_KEY_ORIGIN, key=len, reverse=True):
        if key in message:
            return key
    return None


_FIELD_KEYS = {  # dataclass field names in builder errors -> config keys
    "sample_rate": "sample_rate_hz", "Nyquist": "sample_rate_hz",
    "lambda_dip": "lambda_dip_nm", "lambda_brg": "lambda_brg_nm",
    "beta_i": "beta_i_deg", "trap_depth": "trap_depth_uk",
    "temperature": "temperature_uk", "w_dip": "w_dip_um", "w_r": "w_r_um",
    "w_z": "w_z_um", "n_tot": "n_tot", "duration": "duration_ms",
    "filter_taps": "filter_taps", "lowpass_cutoff": "lowpass_cutoff_khz",
    "linewidth": "linewidth_mhz", "centers": "centers_mhz",
    "solid_angle": "w_r_um", "debye_waller": "temperature_uk",
}


def loads(text, base: RunConfig | None = None, source="<config>") -> RunConfig:
    """Parse config text over ``base`` (defaults) and validate the result."""
    base = base or RunConfig.default()
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None

    values = base.as_dict()
    for section in parser.sections():
        if section not in SCHEMA:
            line = _locate(text, section)
            raise ConfigError(f"{source}:{line}: unknown section [{section}]")
        for key, raw in parser.items(section):
            line = _locate(text, section, key)
            if key not in SCHEMA[section]:
                raise ConfigError(f"{source}:{line}: unknown key {key!r} in [{section}]")
            try:
                values[section][key] = _convert(SCHEMA[section][key], raw)
            except ValueError as exc:
                raise ConfigError(f"{source}:{line}: bad value for {key}: {exc}") from None

    cfg = RunConfig(values)
    try:
        cfg.validate()
    except ValueError as exc:
        message = str(exc)
        key = _mentioned_key(message)
        if key is None:
            for field_name, config_key in _FIELD_KEYS.items():
                if field_name in message:
                    key = config_key
                    break
        where = source
        if key is not None:
            line = _locate(text, _KEY_ORIGIN[key], key)
            where = f"{source}:{line}" if line else f"{source} [{_KEY_ORIGIN[key]}] {key}"
        raise ConfigError(f"{where}: {message}") from None
    return cfg


def load(path, base: RunConfig | None = None) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads(text, base, source=str(path))


def resolved(preset=None, path=None, seed=None) -> RunConfig:
    cfg = RunConfig.default(preset)
    if path is not None:
        cfg = load(path, cfg)
    if seed is not None:
        cfg = cfg.with_seed(seed)
    try:
        return cfg.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
