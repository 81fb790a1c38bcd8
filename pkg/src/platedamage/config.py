"""Run configuration: flat key=value files, defaults, and specimen presets.

A config file is plain text, one ``key = value`` per line, ``#`` comments.
Unknown keys are errors; omitted keys fall back to the defaults below, which
describe the cantilevered aluminum test plates the method was developed on.
The optional ``case`` key applies a named preset (geometry, damping, and
frequency list) before the remaining keys are read, so individual values can
still be overridden.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fem import (
    CHI_MIN,
    MaterialModel,
    PlateGeometry,
    PlateModel,
    SimpParams,
    build_model,
    calibrate_youngs_modulus,
)
from .mesh import BoundarySpec
from .objectives import ObjectiveConfig
from .optimizer import OptimSettings
from .synth import NoiseSpec, NotchSpec


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Everything needed to build a model and run a forward or inverse case."""

    # plate geometry (m)
    length_x: float = 0.335
    length_y: float = 0.100
    thickness: float = 0.005
    # A2017 aluminum
    youngs_modulus: float = 72.5e9  # Pa
    poisson_ratio: float = 0.33
    density: float = 2790.0  # kg/m^3
    rayleigh_alpha: float = 1.94  # 1/s
    rayleigh_beta: float = 7.53e-7  # s
    # discretization
    elem_size: float = 0.010  # m
    clamped_edge: str = "left"
    # excitation / measurement layout (m)
    excitation_x: float = 0.325
    excitation_y: float = 0.090
    measurement_nx: int = 6
    measurement_ny: int = 4
    measurement_margin: float = 0.025
    measurement_points: tuple[tuple[float, float], ...] | None = None
    force_amplitude: float = 1.0  # N; inertance FRFs do not depend on it
    # frequencies (Hz)
    frequencies_hz: tuple[float, ...] = (260.0, 804.0, 900.0)
    # objective / regularization
    objective: str = "mac"
    mac_mode: str = "complex"
    lasso_weight: float = 0.1
    simp_p: float = 3.0
    simp_q: float = 1.0
    chi_min: float = CHI_MIN
    # optimizer
    max_iterations: int = 300
    q_rel_tolerance: float = 1e-6
    q_patience: int = 5
    grad_tolerance: float = 1e-6
    # synthetic damage (m) and noise
    notch_x: float = 0.150
    notch_y: float = 0.080
    notch_width: float = 0.040
    notch_height: float = 0.020
    noise_rel: float = 0.0
    noise_abs: float = 0.0
    seed: int = 0
    # files
    dataset: str | None = None  # measured FRF CSV; synthesized when omitted
    chi_path: str | None = None  # field CSV for forward runs
    output_dir: str = "out"
    calibrate_f1_hz: float | None = None
    case: str | None = None


# Presets for the four laboratory specimens: two plate blanks, each tested
# with two frequency sets. Notch placement mirrors the physical cuts (short
# free edge for *1 cases, long edge for *2 cases).
_SPECIMEN_A = dict(
    length_x=0.635,
    length_y=0.060,
    thickness=0.005,
    rayleigh_alpha=0.421,
    rayleigh_beta=4.55e-6,
    elem_size=0.010,
    excitation_x=0.625,
    excitation_y=0.045,
    measurement_nx=10,
    measurement_ny=2,
    measurement_margin=0.020,
)
_SPECIMEN_B = dict(
    length_x=0.335,
    length_y=0.100,
    thickness=0.005,
    rayleigh_alpha=1.94,
    rayleigh_beta=7.53e-7,
    elem_size=0.010,
    excitation_x=0.325,
    excitation_y=0.090,
    measurement_nx=6,
    measurement_ny=4,
    measurement_margin=0.025,
)

CASE_PRESETS: dict[str, dict] = {
    "A1": {
        **_SPECIMEN_A,
        "frequencies_hz": (60.0, 140.0, 350.0, 450.0),
        "notch_x": 0.615,
        "notch_y": 0.020,
        "notch_width": 0.020,
        "notch_height": 0.020,
    },
    "A2": {
        **_SPECIMEN_A,
        "frequencies_hz": (145.0, 325.0, 450.0),
        "notch_x": 0.300,
        "notch_y": 0.040,
        "notch_width": 0.040,
        "notch_height": 0.020,
    },
    "B1": {
        **_SPECIMEN_B,
        "frequencies_hz": (250.0, 500.0, 700.0),
        "notch_x": 0.315,
        "notch_y": 0.040,
        "notch_width": 0.020,
        "notch_height": 0.020,
    },
    "B2": {
        **_SPECIMEN_B,
        "frequencies_hz": (260.0, 804.0, 900.0),
        "notch_x": 0.150,
        "notch_y": 0.080,
        "notch_width": 0.040,
        "notch_height": 0.020,
    },
}

_FLOAT_KEYS = {
    "length_x", "length_y", "thickness", "youngs_modulus", "poisson_ratio",
    "density", "rayleigh_alpha", "rayleigh_beta", "elem_size", "excitation_x",
    "excitation_y", "measurement_margin", "force_amplitude", "lasso_weight",
    "simp_p", "simp_q", "chi_min", "q_rel_tolerance", "grad_tolerance",
    "notch_x", "notch_y", "notch_width", "notch_height", "noise_rel",
    "noise_abs", "calibrate_f1_hz",
}
_INT_KEYS = {"measurement_nx", "measurement_ny", "max_iterations", "q_patience", "seed"}
_STR_KEYS = {"clamped_edge", "objective", "mac_mode", "dataset", "chi_path",
             "output_dir", "case"}

_OBJECTIVE_ALIASES = {"mse": "mse", "mac": "mac", "j1": "mse", "j2": "mac"}


def _parse_value(key: str, raw: str, lineno: int, path: Path):
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key == "frequencies_hz":
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if key == "measurement_points":
            pts = []
            for token in raw.split(";"):
                token = token.strip()
                if not token:
                    continue
                x, _, y = token.partition(":")
                pts.append((float(x), float(y)))
            return tuple(pts)
        return raw
    except ValueError:
        raise ConfigError(
            f"{path}, line {lineno}: cannot parse value {raw!r} for key {key!r}"
        ) from None


def parse_config_file(path: str | Path) -> RunConfig:
    """Read a flat key=value config; unknown keys and bad values are errors."""
    path = Path(path)
    known = {f.name for f in dataclasses.fields(RunConfig)}
    entries: list[tuple[int, str, str]] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, raw = stripped.partition("=")
        if not sep:
            raise ConfigError(f"{path}, line {lineno}: expected 'key = value'")
        key = key.strip()
        raw = raw.strip()
        if key not in known:
            raise ConfigError(f"{path}, line {lineno}: unknown key {key!r}")
        entries.append((lineno, key, raw))

    config = RunConfig()
    # apply the case preset first so explicit keys override it
    for lineno, key, raw in entries:
        if key == "case":
            case = raw.upper()
            if case not in CASE_PRESETS:
                raise ConfigError(
                    f"{path}, line {lineno}: unknown case {raw!r}; "
                    f"choose from {sorted(CASE_PRESETS)}"
                )
            config.case = case
            for pkey, pval in CASE_PRESETS[case].items():
                setattr(config, pkey, pval)
    for lineno, key, raw in entries:
        if key == "case":
            continue
        setattr(config, key, _parse_value(key, raw, lineno, path))

    validate_config(config, path)
    return config


def validate_config(config: RunConfig, path: Path | None = None) -> None:
    where = f"{path}: " if path else ""
    freqs = np.asarray(config.frequencies_hz, dtype=float)
    if freqs.size < 1:
        raise ConfigError(where + "at least one frequency is required")
    if np.any(freqs <= 0.0) or np.any(np.diff(freqs) <= 0.0):
        raise ConfigError(where + "frequencies_hz must be positive and increasing")
    if config.objective.lower() not in _OBJECTIVE_ALIASES:
        raise ConfigError(
            where + f"objective must be one of {sorted(set(_OBJECTIVE_ALIASES))}"
        )
    if config.lasso_weight < 0.0:
        raise ConfigError(where + "lasso_weight must be nonnegative")
    if config.measurement_points is None and (
        config.measurement_nx < 1 or config.measurement_ny < 1
    ):
        raise ConfigError(where + "measurement grid must have at least one point")


def measurement_layout(config: RunConfig) -> tuple[tuple[float, float], ...]:
    """Explicit points if given, otherwise an evenly spaced inset grid."""
    if config.measurement_points is not None:
        return tuple(config.measurement_points)
    m = config.measurement_margin
    xs = np.linspace(m, config.length_x - m, config.measurement_nx)
    ys = np.linspace(m, config.length_y - m, config.measurement_ny)
    return tuple((float(x), float(y)) for y in ys for x in xs)


def model_from_config(config: RunConfig) -> PlateModel:
    geometry = PlateGeometry(config.length_x, config.length_y, config.thickness)
    material = MaterialModel(
        youngs_modulus=config.youngs_modulus,
        poisson_ratio=config.poisson_ratio,
        density=config.density,
        rayleigh_alpha=config.rayleigh_alpha,
        rayleigh_beta=config.rayleigh_beta,
    )
    boundary = BoundarySpec(
        clamped_edge=config.clamped_edge,
        excitation_point=(config.excitation_x, config.excitation_y),
        measurement_points=measurement_layout(config),
    )
    model = build_model(geometry, material, boundary, config.elem_size)
    if config.calibrate_f1_hz is not None:
        material = calibrate_youngs_modulus(model, config.calibrate_f1_hz)
        model = build_model(geometry, material, boundary, config.elem_size)
    return model


def objective_from_config(config: RunConfig) -> ObjectiveConfig:
    return ObjectiveConfig(
        kind=_OBJECTIVE_ALIASES[config.objective.lower()],
        lasso_weight=config.lasso_weight,
        simp=SimpParams(p=config.simp_p, q=config.simp_q),
        mac_mode=config.mac_mode,
    )


def settings_from_config(config: RunConfig) -> OptimSettings:
    return OptimSettings(
        max_iterations=config.max_iterations,
        q_rel_tolerance=config.q_rel_tolerance,
        q_patience=config.q_patience,
        grad_tolerance=config.grad_tolerance,
        chi_min=config.chi_min,
    )


def notch_from_config(config: RunConfig) -> NotchSpec:
    return NotchSpec(
        x0=config.notch_x,
        y0=config.notch_y,
        width=config.notch_width,
        height=config.notch_height,
    )


def noise_from_config(config: RunConfig) -> NoiseSpec:
    return NoiseSpec(rel=config.noise_rel, abs=config.noise_abs, seed=config.seed)


def omegas_from_config(config: RunConfig) -> np.ndarray:
    return 2.0 * np.pi * np.asarray(config.frequencies_hz, dtype=float)
