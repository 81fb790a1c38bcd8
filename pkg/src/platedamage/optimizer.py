"""Box-constrained minimization of Q(chi) = J(chi) + weight * L(chi).

The update is a projected limited-memory quasi-Newton step: an L-BFGS
direction built from the gradient with bound-active components frozen,
followed by a backtracking line search along the projected path that
enforces an Armijo decrease of Q. Every accepted iterate therefore has
Q no larger than its predecessor, and every evaluated field stays inside
[chi_min, 1] exactly.

Termination requires both a sustained relative change of Q below tolerance
(for a fixed number of consecutive iterations) and a small projected
gradient; either way the iteration budget is a hard cap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .fem import CHI_MIN, PlateModel
from .gradients import ObjectiveBreakdown, evaluate_design, value_and_gradient
from .objectives import DesignField, FrfDataset, ObjectiveConfig


class TerminationDecision(Enum):
    CONTINUE = "continue"
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iter"


@dataclass
class OptimSettings:
    """Iteration budget, tolerances, and line-search knobs."""

    max_iterations: int = 300
    q_rel_tolerance: float = 1e-6  # relative |dQ| considered stationary
    q_patience: int = 5  # consecutive stationary iterations required
    grad_tolerance: float = 1e-6  # infinity norm of the projected gradient
    chi_min: float = CHI_MIN
    initial_chi: np.ndarray | None = None  # default: solid plate (all ones)
    memory: int = 10
    armijo_c1: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 30
    first_step_move: float = 0.1  # max |dchi| of the first (unscaled) step
    verbose: bool = False

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.q_patience < 1:
            raise ValueError("q_patience must be at least 1")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError("backtrack_factor must lie in (0, 1)")


@dataclass(frozen=True)
class IterationRecord:
    """Snapshot of one optimizer iteration (iteration 0 is the initial point)."""

    iteration: int
    chi: np.ndarray
    total: float
    data_term: float
    lasso_term: float
    per_frequency: np.ndarray
    proj_grad_norm: float
    step_size: float
    n_backtracks: int


@dataclass
class OptimHistory:
    """Full iteration trace plus the final termination status."""

    records: list[IterationRecord] = field(default_factory=list)
    status: TerminationDecision = TerminationDecision.CONTINUE

    @property
    def totals(self) -> np.ndarray:
        return np.array([r.total for r in self.records])

    @property
    def n_iterations(self) -> int:
        return len(self.records) - 1


def check_termination(
    history: OptimHistory | list[IterationRecord], settings: OptimSettings
) -> TerminationDecision:
    """Decide whether to stop, given the trace so far.

    The iteration budget wins over everything else; convergence needs the
    last ``q_patience`` relative Q changes below tolerance and a projected
    gradient below tolerance at the latest iterate.
    """
    records = history.records if isinstance(history, OptimHistory) else history
    if not records:
        raise ValueError("history must contain at least the initial evaluation")
    completed = records[-1].iteration
    if completed >= settings.max_iterations:
        return TerminationDecision.MAX_ITERATIONS
    if len(records) < settings.q_patience + 1:
        return TerminationDecision.CONTINUE
    totals = [r.total for r in records[-(settings.q_patience + 1) :]]
    for prev, curr in zip(totals[:-1], totals[1:]):
        rel = abs(curr - prev) / max(abs(prev), 1e-300)
        if rel >= settings.q_rel_tolerance:
            return TerminationDecision.CONTINUE
    if records[-1].proj_grad_norm < settings.grad_tolerance:
        return TerminationDecision.CONVERGED
    return TerminationDecision.CONTINUE


def _projected_gradient_norm(
    chi: np.ndarray, grad: np.ndarray, chi_min: float
) -> float:
    return float(np.max(np.abs(chi - np.clip(chi - grad, chi_min, 1.0))))


def _frozen_mask(chi: np.ndarray, grad: np.ndarray, chi_min: float) -> np.ndarray:
    at_lower = (chi <= chi_min + 1e-12) & (grad > 0.0)
    at_upper = (chi >= 1.0 - 1e-12) & (grad < 0.0)
    return at_lower | at_upper


def _lbfgs_direction(
    grad_reduced: np.ndarray,
    pairs: deque,
    first_step_move: float,
) -> np.ndarray:
    """Two-loop recursion; falls back to a move-limited steepest step."""
    if not pairs:
        gmax = np.max(np.abs(grad_reduced))
        if gmax == 0.0:
            return np.zeros_like(grad_reduced)
        return -grad_reduced * (first_step_move / gmax)
    q = grad_reduced.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    s, y, _ = pairs[-1]
    q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * (y @ q)
        q += (a - b) * s
    return -q


def _line_search(
    chi: np.ndarray,
    q0: float,
    grad: np.ndarray,
    direction: np.ndarray,
    eval_q,
    settings: OptimSettings,
) -> tuple[np.ndarray, float, int] | None:
    """Backtrack along the projected path until Q decreases sufficiently."""
    t = 1.0
    for back in range(settings.max_backtracks + 1):
        trial = np.clip(chi + t * direction, settings.chi_min, 1.0)
        predicted = grad @ (trial - chi)
        if predicted > 0.0:
            t *= settings.backtrack_factor
            continue
        q_trial = eval_q(trial)
        if q_trial <= q0 + settings.armijo_c1 * predicted:
            return trial, t, back
        t *= settings.backtrack_factor
    return None


def identify(
    model: PlateModel,
    dataset: FrfDataset,
    config: ObjectiveConfig,
    settings: OptimSettings | None = None,
) -> tuple[DesignField, OptimHistory]:
    """Recover the material field that best explains the measured FRFs.

    Starts from a solid plate (unless ``settings.initial_chi`` says
    otherwise) and descends Q until converged or out of budget. Returns the
    final field and the full iteration history.
    """
    settings = settings or OptimSettings()
    chi_min = settings.chi_min
    n_elems = model.mesh.n_elems

    if settings.initial_chi is None:
        chi = np.ones(n_elems)
    else:
        chi = np.asarray(settings.initial_chi, dtype=float).copy()
        if chi.shape != (n_elems,):
            raise ValueError(f"initial_chi must have shape ({n_elems},)")
        if np.any(chi < chi_min) or np.any(chi > 1.0):
            raise ValueError("initial_chi must lie in [chi_min, 1]")

    def eval_q(values: np.ndarray) -> float:
        return evaluate_design(model, values, config, dataset, chi_min).total

    def record_of(
        iteration: int,
        values: np.ndarray,
        breakdown: ObjectiveBreakdown,
        grad: np.ndarray,
        step: float,
        backtracks: int,
    ) -> IterationRecord:
        if not np.isfinite(breakdown.total):
            raise RuntimeError(
                f"objective became non-finite at iteration {iteration}"
            )
        return IterationRecord(
            iteration=iteration,
            chi=values.copy(),
            total=breakdown.total,
            data_term=breakdown.data_term,
            lasso_term=breakdown.lasso_term,
            per_frequency=breakdown.per_frequency.copy(),
            proj_grad_norm=_projected_gradient_norm(values, grad, chi_min),
            step_size=step,
            n_backtracks=backtracks,
        )

    breakdown, grad = value_and_gradient(model, chi, config, dataset, chi_min)
    history = OptimHistory()
    history.records.append(record_of(0, chi, breakdown, grad, 0.0, 0))
    if settings.verbose:
        _print_iteration(history.records[-1])

    pairs: deque = deque(maxlen=settings.memory)
    for iteration in range(1, settings.max_iterations + 1):
        frozen = _frozen_mask(chi, grad, chi_min)
        grad_reduced = np.where(frozen, 0.0, grad)
        direction = _lbfgs_direction(grad_reduced, pairs, settings.first_step_move)
        direction[frozen] = 0.0
        if direction @ grad >= 0.0 and np.any(direction != 0.0):
            gmax = np.max(np.abs(grad_reduced))
            direction = -grad_reduced * (settings.first_step_move / gmax)

        if not np.any(direction != 0.0):
            # stationary within the box at this point; spin down via the
            # sustained-Q criterion so the trace stays honest
            chi_new, step, backs = chi, 0.0, 0
        else:
            hit = _line_search(chi, breakdown.total, grad, direction, eval_q, settings)
            if hit is None:
                gmax = np.max(np.abs(grad_reduced))
                fallback = -grad_reduced * (settings.first_step_move / max(gmax, 1e-300))
                hit = _line_search(
                    chi, breakdown.total, grad, fallback, eval_q, settings
                )
            if hit is None:
                chi_new, step, backs = chi, 0.0, settings.max_backtracks
            else:
                chi_new, step, backs = hit

        breakdown_new, grad_new = value_and_gradient(
            model, chi_new, config, dataset, chi_min
        )
        s = chi_new - chi
        y = grad_new - grad
        sy = s @ y
        if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y, 1.0 / sy))

        chi, breakdown, grad = chi_new, breakdown_new, grad_new
        history.records.append(record_of(iteration, chi, breakdown, grad, step, backs))
        if settings.verbose:
            _print_iteration(history.records[-1])

        decision = check_termination(history, settings)
        if decision is not TerminationDecision.CONTINUE:
            history.status = decision
            break
    else:
        history.status = TerminationDecision.MAX_ITERATIONS

    field = DesignField(chi, model.elem_volumes, chi_min)
    return field, history


def _print_iteration(rec: IterationRecord) -> None:
    print(
        f"it {rec.iteration:4d}  Q {rec.total:.6e}  J {rec.data_term:.6e}  "
        f"L {rec.lasso_term:.4e}  |pg| {rec.proj_grad_norm:.3e}  "
        f"step {rec.step_size:.2e}  bt {rec.n_backtracks}"
    )
