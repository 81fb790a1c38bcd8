"""Mismatch objectives and the L1 material penalty.

All functions here are pure: they map FRF arrays and design fields to
scalars, with no solver state. ``h_all`` and measured counterparts are
complex arrays of shape (n_freq, n_points).

Two data terms are supported:

* ``mse``: mean over frequencies of the squared 2-norm of the complex
  FRF error vector.
* ``mac``: sum over frequencies of ``1 - MAC(H, H_meas)``, where MAC is the
  modal-assurance-style correlation of the two response vectors. The
  correlation uses the complex Hermitian inner product by default; a
  magnitude-based variant correlating |H| vectors is available for
  comparison.

The Lasso penalty is the volume-weighted mean of (1 - chi): the fraction of
material removed. Its gradient is a strictly negative constant per element,
which is what pushes undamaged regions back toward solid material.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fem import CHI_MIN, SimpParams

OBJECTIVE_KINDS = ("mse", "mac")
MAC_MODES = ("complex", "magnitude")


@dataclass(frozen=True)
class DesignField:
    """Per-element design values chi in [chi_min, 1] with element volumes."""

    values: np.ndarray
    volumes: np.ndarray  # (n_elems,) in m^3
    chi_min: float = CHI_MIN

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        volumes = np.asarray(self.volumes, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "volumes", volumes)
        if values.ndim != 1 or values.shape != volumes.shape:
            raise ValueError("values and volumes must be 1-D arrays of equal length")
        if not 0.0 < self.chi_min < 1.0:
            raise ValueError("chi_min must lie in (0, 1)")
        if np.any(volumes <= 0.0):
            raise ValueError("element volumes must be strictly positive")
        if np.any(values < self.chi_min - 1e-12) or np.any(values > 1.0 + 1e-12):
            raise ValueError("design values must lie in [chi_min, 1]")

    @property
    def n_elems(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class FrfDataset:
    """Measured (or synthesized) inertance FRFs at a set of frequencies.

    ``omegas`` are angular frequencies in rad/s, strictly increasing;
    ``h`` has one row per frequency and one column per measurement point.
    """

    omegas: np.ndarray
    h: np.ndarray

    def __post_init__(self) -> None:
        omegas = np.asarray(self.omegas, dtype=float)
        h = np.asarray(self.h, dtype=complex)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "h", h)
        if omegas.ndim != 1 or omegas.size < 1:
            raise ValueError("at least one frequency is required")
        if np.any(omegas <= 0.0):
            raise ValueError("frequencies must be strictly positive")
        if np.any(np.diff(omegas) <= 0.0):
            raise ValueError("frequencies must be strictly increasing")
        if h.ndim != 2 or h.shape[0] != omegas.size:
            raise ValueError("h must be 2-D with one row per frequency")
        if h.shape[1] < 1:
            raise ValueError("at least one measurement point is required")

    @property
    def n_freqs(self) -> int:
        return self.omegas.size

    @property
    def n_points(self) -> int:
        return self.h.shape[1]

    @property
    def freqs_hz(self) -> np.ndarray:
        return self.omegas / (2.0 * np.pi)


@dataclass(frozen=True)
class ObjectiveConfig:
    """Choice of data term, regularization weight, and SIMP exponents."""

    kind: str = "mac"
    lasso_weight: float = 0.1
    simp: SimpParams = field(default_factory=SimpParams)
    mac_mode: str = "complex"

    def __post_init__(self) -> None:
        if self.kind not in OBJECTIVE_KINDS:
            raise ValueError(f"kind must be one of {OBJECTIVE_KINDS}, got {self.kind!r}")
        if self.mac_mode not in MAC_MODES:
            raise ValueError(
                f"mac_mode must be one of {MAC_MODES}, got {self.mac_mode!r}"
            )
        if self.lasso_weight < 0.0:
            raise ValueError("lasso_weight must be nonnegative")


def error_vector(h: np.ndarray, h_measured: np.ndarray) -> np.ndarray:
    """Complex FRF error E = H - H_meas for one frequency."""
    h = np.asarray(h, dtype=complex)
    h_measured = np.asarray(h_measured, dtype=complex)
    if h.shape != h_measured.shape:
        raise ValueError(
            f"FRF vectors have mismatched shapes {h.shape} and {h_measured.shape}"
        )
    return h - h_measured


def mse_objective(h_all: np.ndarray, h_meas_all: np.ndarray) -> float:
    """Mean over frequencies of the squared FRF error norm."""
    err = error_vector(h_all, h_meas_all)
    err = np.atleast_2d(err)
    return float(np.mean(np.sum(np.abs(err) ** 2, axis=1)))


def mac_mismatch(h: np.ndarray, h_measured: np.ndarray, mode: str = "complex") -> float:
    """1 - MAC of two response vectors at a single frequency, in [0, 1].

    Zero exactly when the vectors are (complex) scalar multiples of each
    other; insensitive to overall response scale.
    """
    h = np.asarray(h, dtype=complex)
    h_measured = np.asarray(h_measured, dtype=complex)
    if h.shape != h_measured.shape:
        raise ValueError(
            f"FRF vectors have mismatched shapes {h.shape} and {h_measured.shape}"
        )
    if mode not in MAC_MODES:
        raise ValueError(f"mode must be one of {MAC_MODES}, got {mode!r}")
    if mode == "magnitude":
        h = np.abs(h).astype(complex)
        h_measured = np.abs(h_measured).astype(complex)
    a = np.vdot(h, h).real
    b = np.vdot(h_measured, h_measured).real
    if a <= 0.0 or b <= 0.0:
        raise ValueError("degenerate (zero) response vector in MAC")
    c = np.vdot(h_measured, h)
    value = 1.0 - (abs(c) ** 2) / (a * b)
    # Cauchy-Schwarz bounds the MAC by 1; clip roundoff spill only.
    return float(min(max(value, 0.0), 1.0))


def mac_sum_objective(
    h_all: np.ndarray, h_meas_all: np.ndarray, mode: str = "complex"
) -> float:
    """Sum of per-frequency MAC mismatches."""
    h_all = np.atleast_2d(np.asarray(h_all, dtype=complex))
    h_meas_all = np.atleast_2d(np.asarray(h_meas_all, dtype=complex))
    return float(
        sum(mac_mismatch(h, hm, mode) for h, hm in zip(h_all, h_meas_all, strict=True))
    )


def per_frequency_terms(
    h_all: np.ndarray, h_meas_all: np.ndarray, config: ObjectiveConfig
) -> np.ndarray:
    """Per-frequency contributions: squared error norms (mse) or mismatches (mac)."""
    h_all = np.atleast_2d(np.asarray(h_all, dtype=complex))
    h_meas_all = np.atleast_2d(np.asarray(h_meas_all, dtype=complex))
    if config.kind == "mse":
        err = error_vector(h_all, h_meas_all)
        return np.sum(np.abs(err) ** 2, axis=1)
    return np.array(
        [
            mac_mismatch(h, hm, config.mac_mode)
            for h, hm in zip(h_all, h_meas_all, strict=True)
        ]
    )


def data_objective(
    h_all: np.ndarray, h_meas_all: np.ndarray, config: ObjectiveConfig
) -> tuple[float, np.ndarray]:
    """Data term J and its per-frequency terms for the configured objective."""
    terms = per_frequency_terms(h_all, h_meas_all, config)
    if config.kind == "mse":
        return float(np.mean(terms)), terms
    return float(np.sum(terms)), terms


def lasso_penalty(field: DesignField) -> float:
    """Volume fraction of removed material: sum(v*(1-chi)) / sum(v)."""
    return float(
        np.sum(field.volumes * (1.0 - field.values)) / np.sum(field.volumes)
    )


def lasso_gradient(field: DesignField) -> np.ndarray:
    """d(lasso)/d(chi): the strictly negative constant -v_e / sum(v)."""
    return -field.volumes / np.sum(field.volumes)


def total_objective(data_term: float, lasso_term: float, weight: float) -> float:
    """Q = J + weight * L."""
    if weight < 0.0:
        raise ValueError("weight must be nonnegative")
    return float(data_term + weight * lasso_term)
