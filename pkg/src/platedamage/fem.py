"""Mindlin plate elements, SIMP-scaled assembly, and frequency-domain response.

Kinematics
----------
Each node carries (w, rot_x, rot_y): transverse deflection plus the two
rotations of the plate normal. Bending curvatures are the rotation gradients
and the transverse shear strains are ``gamma_xz = dw/dx - rot_x`` and
``gamma_yz = dw/dy - rot_y``, so pure rigid tilts are strain free.

Transverse shear is interpolated from edge-midpoint tie points (assumed
natural shear strain). A fully integrated bilinear plate locks in the thin
limit, and plain one-point shear quadrature leaves two spurious zero-energy
modes on the 12-DOF element; the tied interpolation avoids both, leaving
exactly the three rigid-body modes at zero energy.

Material interpolation
----------------------
A per-element design value ``chi`` in [chi_min, 1] scales element stiffness
by ``chi**p`` and element mass by ``chi**q`` (SIMP). ``chi_min`` keeps the
stiffness matrix invertible where material is removed.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as spla

from .mesh import (
    BoundarySpec,
    Mesh,
    PlateGeometry,
    build_mesh,
    constrained_dofs,
    locate_dof,
)

# Lower bound on the design field; keeps K positive definite at full penalization.
CHI_MIN = 1e-3

# Acceptable relative residual ||Z u - f|| / ||f|| for a harmonic solve.
RESIDUAL_TOL = 1e-8

_GAUSS_2 = (-1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0))
_SHEAR_CORRECTION = 5.0 / 6.0


@dataclass(frozen=True)
class MaterialModel:
    """Isotropic material with Rayleigh damping C = alpha*M + beta*K."""

    youngs_modulus: float  # Pa
    poisson_ratio: float
    density: float  # kg/m^3
    rayleigh_alpha: float = 0.0  # 1/s, mass-proportional
    rayleigh_beta: float = 0.0  # s, stiffness-proportional

    def __post_init__(self) -> None:
        if not self.youngs_modulus > 0.0:
            raise ValueError("youngs_modulus must be strictly positive")
        if not -1.0 < self.poisson_ratio < 0.5:
            raise ValueError("poisson_ratio must lie in (-1, 0.5)")
        if not self.density > 0.0:
            raise ValueError("density must be strictly positive")
        if self.rayleigh_alpha < 0.0 or self.rayleigh_beta < 0.0:
            raise ValueError("Rayleigh coefficients must be nonnegative")


@dataclass(frozen=True)
class SimpParams:
    """SIMP exponents: stiffness ~ chi**p, mass ~ chi**q."""

    p: float = 3.0
    q: float = 1.0

    def __post_init__(self) -> None:
        if self.p < 1.0 or self.q < 1.0:
            raise ValueError("SIMP exponents must be >= 1")


def _shape(xi: float, eta: float) -> np.ndarray:
    return 0.25 * np.array(
        [
            (1 - xi) * (1 - eta),
            (1 + xi) * (1 - eta),
            (1 + xi) * (1 + eta),
            (1 - xi) * (1 + eta),
        ]
    )


def _dshape(xi: float, eta: float) -> tuple[np.ndarray, np.ndarray]:
    dxi = 0.25 * np.array([-(1 - eta), (1 - eta), (1 + eta), -(1 + eta)])
    deta = 0.25 * np.array([-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)])
    return dxi, deta


def _bending_b(xi: float, eta: float, dx: float, dy: float) -> np.ndarray:
    """Curvature-displacement matrix (3, 12) at one quadrature point."""
    dxi, deta = _dshape(xi, eta)
    dn_dx = dxi * 2.0 / dx
    dn_dy = deta * 2.0 / dy
    b = np.zeros((3, 12))
    b[0, 1::3] = dn_dx
    b[1, 2::3] = dn_dy
    b[2, 1::3] = dn_dy
    b[2, 2::3] = dn_dx
    return b


def _shear_b(xi: float, eta: float, dx: float, dy: float) -> np.ndarray:
    """Assumed transverse shear matrix (2, 12) at one quadrature point.

    gamma_xz is sampled at the bottom/top edge midpoints and interpolated
    linearly in eta; gamma_yz at the left/right midpoints, linearly in xi.
    """
    gb = np.zeros(12)
    gb[[0, 3]] = [-1.0 / dx, 1.0 / dx]
    gb[[1, 4]] = [-0.5, -0.5]
    gt = np.zeros(12)
    gt[[6, 9]] = [1.0 / dx, -1.0 / dx]
    gt[[7, 10]] = [-0.5, -0.5]

    gl = np.zeros(12)
    gl[[0, 9]] = [-1.0 / dy, 1.0 / dy]
    gl[[2, 11]] = [-0.5, -0.5]
    gr = np.zeros(12)
    gr[[3, 6]] = [-1.0 / dy, 1.0 / dy]
    gr[[5, 8]] = [-0.5, -0.5]

    b = np.zeros((2, 12))
    b[0] = 0.5 * (1 - eta) * gb + 0.5 * (1 + eta) * gt
    b[1] = 0.5 * (1 - xi) * gl + 0.5 * (1 + xi) * gr
    return b


def element_matrices(
    material: MaterialModel, thickness: float, dx: float, dy: float
) -> tuple[np.ndarray, np.ndarray]:
    """Stiffness and consistent mass matrix (12, 12) of one rectangular element.

    The mass matrix includes rotary inertia. Both matrices are exact for the
    bilinear interpolation (2x2 Gauss quadrature).
    """
    if min(thickness, dx, dy) <= 0.0:
        raise ValueError("thickness and element sizes must be strictly positive")
    e, nu, rho = material.youngs_modulus, material.poisson_ratio, material.density
    t = thickness

    d0 = e * t**3 / (12.0 * (1.0 - nu**2))
    db = d0 * np.array([[1.0, nu, 0.0], [nu, 1.0, 0.0], [0.0, 0.0, (1.0 - nu) / 2.0]])
    shear_mod = e / (2.0 * (1.0 + nu))
    ds = _SHEAR_CORRECTION * shear_mod * t * np.eye(2)

    det_j = dx * dy / 4.0
    ke = np.zeros((12, 12))
    me = np.zeros((12, 12))
    for xi in _GAUSS_2:
        for eta in _GAUSS_2:
            bb = _bending_b(xi, eta, dx, dy)
            bs = _shear_b(xi, eta, dx, dy)
            ke += (bb.T @ db @ bb + bs.T @ ds @ bs) * det_j

            n = _shape(xi, eta)
            nw = np.zeros(12)
            nw[0::3] = n
            nrx = np.zeros(12)
            nrx[1::3] = n
            nry = np.zeros(12)
            nry[2::3] = n
            me += (
                rho
                * det_j
                * (
                    t * np.outer(nw, nw)
                    + t**3 / 12.0 * (np.outer(nrx, nrx) + np.outer(nry, nry))
                )
            )

    ke = 0.5 * (ke + ke.T)
    me = 0.5 * (me + me.T)
    return ke, me


@dataclass(frozen=True)
class PlateModel:
    """Discretized plate: geometry, material, mesh, and boundary layout.

    ``full_to_free`` maps full DOF numbering to the reduced (clamped) system,
    with -1 for constrained DOF. Excitation and measurement DOF are stored in
    full numbering; the ``*_free`` properties give reduced indices.
    """

    geometry: PlateGeometry
    material: MaterialModel
    mesh: Mesh
    boundary: BoundarySpec
    ke: np.ndarray  # (12, 12) element stiffness at chi = 1
    me: np.ndarray  # (12, 12) element mass at chi = 1
    free_dofs: np.ndarray
    full_to_free: np.ndarray
    excitation_dof: int
    measurement_dofs: np.ndarray
    elem_volumes: np.ndarray  # (n_elems,) in m^3

    @property
    def n_free(self) -> int:
        return self.free_dofs.size

    @property
    def n_measurements(self) -> int:
        return self.measurement_dofs.size

    @property
    def excitation_free(self) -> int:
        return int(self.full_to_free[self.excitation_dof])

    @property
    def measurement_free(self) -> np.ndarray:
        return self.full_to_free[self.measurement_dofs]

    def unit_load(self) -> np.ndarray:
        """Unit transverse force at the excitation DOF, reduced numbering."""
        f = np.zeros(self.n_free)
        f[self.excitation_free] = 1.0
        return f


def build_model(
    geometry: PlateGeometry,
    material: MaterialModel,
    boundary: BoundarySpec,
    target_elem_size: float,
) -> PlateModel:
    """Mesh the plate and resolve boundary, excitation, and measurement DOF."""
    mesh = build_mesh(geometry, target_elem_size)
    fixed = constrained_dofs(mesh, boundary)

    full_to_free = np.full(mesh.n_dofs, -1, dtype=int)
    free_mask = np.ones(mesh.n_dofs, dtype=bool)
    free_mask[fixed] = False
    free_dofs = np.flatnonzero(free_mask)
    full_to_free[free_dofs] = np.arange(free_dofs.size)

    exc = locate_dof(mesh, boundary.excitation_point, boundary.excitation_direction)
    if full_to_free[exc] < 0:
        raise ValueError("excitation point maps to a clamped node")
    meas = np.array([locate_dof(mesh, p) for p in boundary.measurement_points])
    if np.any(full_to_free[meas] < 0):
        raise ValueError("a measurement point maps to a clamped node")

    ke, me = element_matrices(material, geometry.thickness, mesh.elem_dx, mesh.elem_dy)
    volumes = np.full(
        mesh.n_elems, mesh.elem_dx * mesh.elem_dy * geometry.thickness
    )
    return PlateModel(
        geometry=geometry,
        material=material,
        mesh=mesh,
        boundary=boundary,
        ke=ke,
        me=me,
        free_dofs=free_dofs,
        full_to_free=full_to_free,
        excitation_dof=exc,
        measurement_dofs=meas,
        elem_volumes=volumes,
    )


def _scatter(
    mesh: Mesh, elem_mat: np.ndarray, scale: np.ndarray, free_dofs: np.ndarray
) -> sparse.csc_matrix:
    dofs = mesh.elem_dofs
    rows = np.repeat(dofs, 12, axis=1).ravel()
    cols = np.tile(dofs, (1, 12)).ravel()
    data = (scale[:, None, None] * elem_mat[None, :, :]).ravel()
    full = sparse.coo_matrix(
        (data, (rows, cols)), shape=(mesh.n_dofs, mesh.n_dofs)
    ).tocsr()
    reduced = full[free_dofs][:, free_dofs]
    reduced = 0.5 * (reduced + reduced.T)  # kill last-bit assembly asymmetry
    return reduced.tocsc()


def assemble(
    model: PlateModel,
    chi: np.ndarray,
    simp: SimpParams = SimpParams(),
    chi_min: float = CHI_MIN,
) -> tuple[sparse.csc_matrix, sparse.csc_matrix]:
    """Global stiffness and mass on the free DOF, SIMP-scaled by ``chi``."""
    chi = np.asarray(chi, dtype=float)
    if chi.shape != (model.mesh.n_elems,):
        raise ValueError(
            f"chi must have one value per element ({model.mesh.n_elems}), got {chi.shape}"
        )
    if np.any(chi < chi_min - 1e-12) or np.any(chi > 1.0 + 1e-12):
        raise ValueError("chi out of [chi_min, 1]; upstream projection is broken")
    k = _scatter(model.mesh, model.ke, chi**simp.p, model.free_dofs)
    m = _scatter(model.mesh, model.me, chi**simp.q, model.free_dofs)
    return k, m


def dynamic_stiffness(
    k: sparse.spmatrix, m: sparse.spmatrix, material: MaterialModel, omega: float
) -> sparse.csc_matrix:
    """Z(omega) = -omega^2 M + j omega (alpha M + beta K) + K, complex sparse."""
    alpha, beta = material.rayleigh_alpha, material.rayleigh_beta
    z = (1.0 + 1j * beta * omega) * k.astype(complex) + (
        -(omega**2) + 1j * alpha * omega
    ) * m.astype(complex)
    return z.tocsc()


def factorize(z: sparse.csc_matrix, omega: float) -> spla.SuperLU:
    """LU-factorize a dynamic stiffness matrix, reporting the frequency on failure."""
    try:
        return spla.splu(z)
    except RuntimeError as exc:
        raise RuntimeError(
            f"dynamic stiffness factorization failed at omega={omega:.6g} rad/s: {exc}"
        ) from exc


def checked_solve(
    lu: spla.SuperLU,
    z: sparse.csc_matrix,
    rhs: np.ndarray,
    omega: float,
    trans: str = "N",
) -> np.ndarray:
    """Solve with an existing factorization and verify the residual."""
    u = lu.solve(rhs, trans=trans)
    zz = z if trans == "N" else z.T
    denom = np.linalg.norm(rhs)
    residual = np.linalg.norm(zz @ u - rhs) / denom
    if not np.isfinite(residual) or residual > RESIDUAL_TOL:
        raise RuntimeError(
            f"harmonic solve at omega={omega:.6g} rad/s has relative residual "
            f"{residual:.3e} (tolerance {RESIDUAL_TOL:g}); system is near singular"
        )
    return u


def harmonic_solve(
    k: sparse.spmatrix,
    m: sparse.spmatrix,
    material: MaterialModel,
    omega: float,
    load: np.ndarray,
) -> np.ndarray:
    """Steady-state displacement U solving Z(omega) U = F on the free DOF."""
    if omega < 0.0:
        raise ValueError("omega must be nonnegative")
    load = np.asarray(load, dtype=complex)
    if not np.any(load != 0.0):
        raise ValueError("load vector is identically zero")
    z = dynamic_stiffness(k, m, material, omega)
    lu = factorize(z, omega)
    return checked_solve(lu, z, load, omega)


def compute_frf(
    model: PlateModel,
    chi: np.ndarray,
    simp: SimpParams,
    omegas: np.ndarray,
    chi_min: float = CHI_MIN,
) -> np.ndarray:
    """Inertance FRF matrix H, shape (n_freq, n_measurements).

    H = -omega^2 U / F at the measurement DOF for a unit transverse force at
    the excitation DOF. Inertance does not depend on the force amplitude.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    k, m = assemble(model, chi, simp, chi_min)
    load = model.unit_load().astype(complex)
    meas = model.measurement_free
    h = np.empty((omegas.size, meas.size), dtype=complex)
    for j, omega in enumerate(omegas):
        u = harmonic_solve(k, m, model.material, omega, load)
        h[j] = -(omega**2) * u[meas]
    return h


def natural_frequencies(
    model: PlateModel,
    chi: np.ndarray | None = None,
    simp: SimpParams = SimpParams(),
    n_modes: int = 6,
) -> np.ndarray:
    """Lowest undamped natural frequencies in Hz (shift-invert eigensolve)."""
    if chi is None:
        chi = np.ones(model.mesh.n_elems)
    k, m = assemble(model, chi, simp)
    n_modes = min(n_modes, model.n_free - 2)
    vals = spla.eigsh(
        k,
        k=n_modes,
        M=m,
        sigma=0.0,
        which="LM",
        v0=np.ones(model.n_free),
        return_eigenvectors=False,
    )
    vals = np.sort(vals)
    return np.sqrt(np.maximum(vals, 0.0)) / (2.0 * np.pi)


def calibrate_youngs_modulus(model: PlateModel, target_f1_hz: float) -> MaterialModel:
    """Scale E so the healthy first natural frequency matches a measured one.

    Frequencies scale with sqrt(E) at fixed Poisson ratio and density, so a
    single rescaling lands exactly on the target.
    """
    if not target_f1_hz > 0.0:
        raise ValueError("target_f1_hz must be strictly positive")
    f1 = natural_frequencies(model, n_modes=1)[0]
    scale = (target_f1_hz / f1) ** 2
    return dataclasses.replace(
        model.material, youngs_modulus=model.material.youngs_modulus * scale
    )
