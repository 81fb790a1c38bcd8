"""Synthetic damage cases: notched truth fields and noisy pseudo-measurements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fem import CHI_MIN, PlateModel, SimpParams, compute_frf
from .objectives import FrfDataset


@dataclass(frozen=True)
class NotchSpec:
    """Axis-aligned rectangular void, coordinates and sizes in meters."""

    x0: float
    y0: float
    width: float
    height: float

    def __post_init__(self) -> None:
        if self.width <= 0.0 or self.height <= 0.0:
            raise ValueError("notch width and height must be strictly positive")

    @property
    def x1(self) -> float:
        return self.x0 + self.width

    @property
    def y1(self) -> float:
        return self.y0 + self.height

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.x0 + 0.5 * self.width, self.y0 + 0.5 * self.height)

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative/additive complex Gaussian noise on the FRFs."""

    rel: float = 0.0
    abs: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rel < 0.0 or self.abs < 0.0:
            raise ValueError("noise levels must be nonnegative")


def notch_truth(mesh, notch: NotchSpec, chi_min: float = CHI_MIN) -> np.ndarray:
    """Ground-truth field: chi_min on elements fully inside the notch, 1 elsewhere.

    The notch must overlap the plate and swallow at least one whole element;
    elements merely cut by the notch boundary stay solid.
    """
    # element bounding boxes from center +/- half sizes; a small tolerance
    # keeps float edges that coincide with the notch boundary "inside"
    centers = mesh.elem_centers()
    hx, hy = mesh.elem_dx / 2.0, mesh.elem_dy / 2.0
    tol = 1e-12
    inside = (
        (centers[:, 0] - hx >= notch.x0 - tol)
        & (centers[:, 0] + hx <= notch.x1 + tol)
        & (centers[:, 1] - hy >= notch.y0 - tol)
        & (centers[:, 1] + hy <= notch.y1 + tol)
    )
    if not np.any(inside):
        raise ValueError(
            "notch does not fully contain any element; enlarge it or refine the mesh"
        )
    chi = np.ones(mesh.n_elems)
    chi[inside] = chi_min
    return chi


def apply_noise(h: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    """H_noisy = H*(1 + rel*eps1) + abs*eps2 with standard complex normal eps.

    eps draws are unit-variance complex Gaussians (real and imaginary parts
    each N(0, 1/2)); eps1 for the whole array is drawn before eps2, so a
    fixed seed gives bit-identical data.
    """
    rng = np.random.default_rng(noise.seed)
    shape = h.shape
    eps1 = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    eps2 = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return h * (1.0 + noise.rel * eps1) + noise.abs * eps2


def synth_dataset(
    model: PlateModel,
    notch: NotchSpec | None,
    omegas: np.ndarray,
    noise: NoiseSpec = NoiseSpec(),
    simp: SimpParams = SimpParams(),
    chi_min: float = CHI_MIN,
) -> tuple[FrfDataset, np.ndarray]:
    """Pseudo-measured FRFs for a notched (or healthy) plate plus the truth field.

    Refuses notches that swallow the excitation point or every measurement
    point: such data could not identify anything.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    if notch is None:
        chi_true = np.ones(model.mesh.n_elems)
    else:
        ex, ey = model.boundary.excitation_point
        if notch.contains(ex, ey):
            raise ValueError("notch covers the excitation point")
        if all(notch.contains(x, y) for x, y in model.boundary.measurement_points):
            raise ValueError("notch covers every measurement point")
        chi_true = notch_truth(model.mesh, notch, chi_min)

    h = compute_frf(model, chi_true, simp, omegas, chi_min)
    h = apply_noise(h, noise)
    return FrfDataset(omegas=omegas, h=h), chi_true
