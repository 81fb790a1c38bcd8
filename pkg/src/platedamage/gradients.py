"""Objective evaluation and design sensitivities via the adjoint method.

For each frequency the state solves Z(chi, omega) U = F with Z complex
symmetric. A real objective g(U, conj(U)) has

    dg = 2 Re[ (dg/dU)^T dU ]        (Wirtinger derivative, conj(U) fixed)

and with one adjoint solve Z^T Lambda = -dg/dU per frequency the design
derivative becomes

    dQ/dchi_e = sum_j 2 Re[ Lambda_j^T (dZ_j/dchi_e) U_j ] + weight * dL/dchi_e

where dZ/dchi_e combines the SIMP-scaled element stiffness and mass:

    dZ/dchi_e = p chi_e^(p-1) (1 + j omega beta) Ke
              + q chi_e^(q-1) (-omega^2 + j omega alpha) Me

The element products Lambda^T Ke U collapse to per-element quadratic forms,
so one factorization per frequency serves both state and adjoint solves.

``finite_difference_gradient`` is the slow reference: central differences on
the full objective, falling back to one-sided stencils at the box bounds so
no evaluation ever leaves [chi_min, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fem import (
    CHI_MIN,
    PlateModel,
    assemble,
    checked_solve,
    dynamic_stiffness,
    factorize,
)
from .objectives import (
    DesignField,
    FrfDataset,
    ObjectiveConfig,
    data_objective,
    lasso_gradient,
    lasso_penalty,
    total_objective,
)


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Q = J + weight*L with the per-frequency contributions to J."""

    total: float
    data_term: float
    lasso_term: float
    per_frequency: np.ndarray


@dataclass(frozen=True)
class _FrequencyState:
    omega: float
    lu: object
    z: object
    u: np.ndarray  # free DOF, complex
    h: np.ndarray  # inertance at measurement DOF


def _check_alignment(model: PlateModel, dataset: FrfDataset) -> None:
    if dataset.n_points != model.n_measurements:
        raise ValueError(
            f"dataset has {dataset.n_points} measurement points but the model "
            f"defines {model.n_measurements}"
        )


def _frequency_states(
    model: PlateModel,
    chi: np.ndarray,
    config: ObjectiveConfig,
    omegas: np.ndarray,
    chi_min: float,
) -> list[_FrequencyState]:
    k, m = assemble(model, chi, config.simp, chi_min)
    load = model.unit_load().astype(complex)
    meas = model.measurement_free
    states = []
    for omega in omegas:
        z = dynamic_stiffness(k, m, model.material, omega)
        lu = factorize(z, omega)
        u = checked_solve(lu, z, load, omega)
        states.append(
            _FrequencyState(omega=float(omega), lu=lu, z=z, u=u, h=-(omega**2) * u[meas])
        )
    return states


def _breakdown(
    model: PlateModel,
    chi: np.ndarray,
    config: ObjectiveConfig,
    dataset: FrfDataset,
    h_all: np.ndarray,
    chi_min: float,
) -> ObjectiveBreakdown:
    data_term, terms = data_objective(h_all, dataset.h, config)
    lasso_term = lasso_penalty(DesignField(chi, model.elem_volumes, chi_min))
    return ObjectiveBreakdown(
        total=total_objective(data_term, lasso_term, config.lasso_weight),
        data_term=data_term,
        lasso_term=lasso_term,
        per_frequency=terms,
    )


def evaluate_design(
    model: PlateModel,
    chi: np.ndarray,
    config: ObjectiveConfig,
    dataset: FrfDataset,
    chi_min: float = CHI_MIN,
) -> ObjectiveBreakdown:
    """Forward-solve all frequencies and evaluate Q, J, and L at ``chi``."""
    _check_alignment(model, dataset)
    states = _frequency_states(model, chi, config, dataset.omegas, chi_min)
    h_all = np.array([s.h for s in states])
    return _breakdown(model, chi, config, dataset, h_all, chi_min)


def _data_term_h_gradient(
    h: np.ndarray, h_meas: np.ndarray, config: ObjectiveConfig, n_freqs: int
) -> np.ndarray:
    """Wirtinger derivative dg/dH of one frequency's data term."""
    if config.kind == "mse":
        return np.conj(h - h_meas) / n_freqs
    if config.mac_mode == "magnitude":
        r = np.abs(h)
        rm = np.abs(h_meas)
        if np.any(r == 0.0) or not np.any(rm != 0.0):
            raise ValueError("degenerate (zero) response in magnitude MAC gradient")
        a = float(r @ r)
        b = float(rm @ rm)
        c = float(r @ rm)
        dm_dr = (2.0 * c**2 / (a**2 * b)) * r - (2.0 * c / (a * b)) * rm
        return dm_dr * np.conj(h) / (2.0 * r)
    a = np.vdot(h, h).real
    b = np.vdot(h_meas, h_meas).real
    if a <= 0.0 or b <= 0.0:
        raise ValueError("degenerate (zero) response vector in MAC gradient")
    c = np.vdot(h_meas, h)
    return (abs(c) ** 2 / (a**2 * b)) * np.conj(h) - (np.conj(c) / (a * b)) * np.conj(
        h_meas
    )


def value_and_gradient(
    model: PlateModel,
    chi: np.ndarray,
    config: ObjectiveConfig,
    dataset: FrfDataset,
    chi_min: float = CHI_MIN,
) -> tuple[ObjectiveBreakdown, np.ndarray]:
    """Objective breakdown and adjoint gradient dQ/dchi in one pass."""
    _check_alignment(model, dataset)
    chi = np.asarray(chi, dtype=float)
    states = _frequency_states(model, chi, config, dataset.omegas, chi_min)
    h_all = np.array([s.h for s in states])
    breakdown = _breakdown(model, chi, config, dataset, h_all, chi_min)

    mesh = model.mesh
    simp = config.simp
    alpha = model.material.rayleigh_alpha
    beta = model.material.rayleigh_beta
    meas_free = model.measurement_free
    edofs = mesh.elem_dofs
    n_freqs = dataset.n_freqs

    field = DesignField(chi, model.elem_volumes, chi_min)
    grad = config.lasso_weight * lasso_gradient(field)

    dk_scale = simp.p * chi ** (simp.p - 1.0)
    dm_scale = simp.q * chi ** (simp.q - 1.0)

    for j, state in enumerate(states):
        dg_dh = _data_term_h_gradient(state.h, dataset.h[j], config, n_freqs)
        rhs = np.zeros(model.n_free, dtype=complex)
        # dH/dU = -omega^2 at the measurement DOF; repeated DOF accumulate
        np.add.at(rhs, meas_free, -(state.omega**2) * dg_dh)
        if not np.any(rhs != 0.0):
            continue  # data term stationary at this frequency
        lam = checked_solve(state.lu, state.z, -rhs, state.omega, trans="T")

        u_full = np.zeros(mesh.n_dofs, dtype=complex)
        u_full[model.free_dofs] = state.u
        lam_full = np.zeros(mesh.n_dofs, dtype=complex)
        lam_full[model.free_dofs] = lam

        ue = u_full[edofs]
        le = lam_full[edofs]
        k_forms = np.einsum("ni,ij,nj->n", le, model.ke, ue)
        m_forms = np.einsum("ni,ij,nj->n", le, model.me, ue)

        dz_k = (1.0 + 1j * beta * state.omega) * dk_scale
        dz_m = (-(state.omega**2) + 1j * alpha * state.omega) * dm_scale
        grad += 2.0 * np.real(dz_k * k_forms + dz_m * m_forms)

    return breakdown, grad


def adjoint_gradient(
    model: PlateModel,
    chi: np.ndarray,
    config: ObjectiveConfig,
    dataset: FrfDataset,
    chi_min: float = CHI_MIN,
) -> np.ndarray:
    """Adjoint gradient dQ/dchi, one value per element."""
    return value_and_gradient(model, chi, config, dataset, chi_min)[1]


def finite_difference_gradient(
    model: PlateModel,
    chi: np.ndarray,
    config: ObjectiveConfig,
    dataset: FrfDataset,
    step: float = 1e-6,
    chi_min: float = CHI_MIN,
) -> np.ndarray:
    """Reference gradient by differencing the full objective per element.

    Central differences where the stencil fits in [chi_min, 1], one-sided
    at the bounds.
    """
    if not step > 0.0:
        raise ValueError("step must be strictly positive")
    chi = np.asarray(chi, dtype=float)

    def q_at(values: np.ndarray) -> float:
        return evaluate_design(model, values, config, dataset, chi_min).total

    q_base: float | None = None
    grad = np.zeros(chi.size)
    for e in range(chi.size):
        up_ok = chi[e] + step <= 1.0
        down_ok = chi[e] - step >= chi_min
        if not up_ok and not down_ok:
            raise ValueError(f"step {step} does not fit inside the bounds at element {e}")
        if up_ok and down_ok:
            hi = chi.copy()
            hi[e] += step
            lo = chi.copy()
            lo[e] -= step
            grad[e] = (q_at(hi) - q_at(lo)) / (2.0 * step)
            continue
        if q_base is None:
            q_base = q_at(chi)
        shifted = chi.copy()
        if up_ok:
            shifted[e] += step
            grad[e] = (q_at(shifted) - q_base) / step
        else:
            shifted[e] -= step
            grad[e] = (q_base - q_at(shifted)) / step
    return grad
