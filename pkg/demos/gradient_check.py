"""Adjoint gradient verification against central finite differences.

Uses a small plate so the full finite-difference sweep stays cheap, then
compares the adjoint gradient of Q = J + lambda L against central
differences over a range of steps. The disagreement follows the usual
V shape: truncation error shrinks quadratically as the step shrinks until
solver roundoff takes over. Prints a table and saves a log-log plot to
demos/output/.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from platedamage import (
    BoundarySpec,
    MaterialModel,
    ObjectiveConfig,
    PlateGeometry,
    build_model,
    finite_difference_gradient,
    synth_dataset,
    value_and_gradient,
)
from platedamage.synth import NotchSpec

OUTPUT_DIR = Path(__file__).resolve().parent / "output"

STEPS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


def main() -> None:
    geometry = PlateGeometry(length_x=0.16, length_y=0.08, thickness=0.005)
    material = MaterialModel(
        youngs_modulus=72.5e9,
        poisson_ratio=0.33,
        density=2790.0,
        rayleigh_alpha=1.94,
        rayleigh_beta=7.53e-7,
    )
    points = tuple((x, y) for y in (0.02, 0.06) for x in (0.04, 0.08, 0.12))
    boundary = BoundarySpec("left", excitation_point=(0.15, 0.07), measurement_points=points)
    model = build_model(geometry, material, boundary, target_elem_size=0.02)

    omegas = 2.0 * np.pi * np.array([300.0, 900.0])
    notch = NotchSpec(x0=0.08, y0=0.02, width=0.02, height=0.02)
    dataset, _ = synth_dataset(model, notch, omegas)

    config = ObjectiveConfig(kind="mse", lasso_weight=0.1)
    rng = np.random.default_rng(7)
    chi = 0.3 + 0.6 * rng.random(model.mesh.n_elems)

    _, grad = value_and_gradient(model, chi, config, dataset)

    print(f"design variables: {chi.size}")
    print("    step   max rel error")
    errors = []
    for step in STEPS:
        fd = finite_difference_gradient(model, chi, config, dataset, step=step)
        rel = np.abs(fd - grad) / np.maximum(np.abs(grad), 1e-12)
        errors.append(rel.max())
        print(f"  {step:6.0e}   {rel.max():.3e}")

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.loglog(STEPS, errors, "o-", color="tab:blue", label="measured")
    ref = np.array(STEPS)
    # Quadratic truncation reference anchored at the largest step.
    ax.loglog(ref, errors[0] * (ref / ref[0]) ** 2, "--", color="gray", label=r"$O(h^2)$")
    ax.set_xlabel("finite-difference step h")
    ax.set_ylabel("max relative error vs adjoint")
    ax.set_title("Central differences vs adjoint gradient")
    ax.legend()
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()

    OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
    out_path = OUTPUT_DIR / "gradient_check.png"
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
