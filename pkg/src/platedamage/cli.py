"""Command line entry points.

Subcommands:

* ``forward``   compute FRFs for a configured plate and material field
* ``synth``     generate a noisy synthetic dataset plus its truth field
* ``identify``  run the damage identification loop and export results
* ``gradcheck`` compare adjoint and finite-difference gradients

Exit codes: 0 on success, 1 on a runtime error (message on stderr),
2 on a usage error. ``gradcheck`` exits 1 when the gradients disagree.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import dataio
from .config import (
    ConfigError,
    RunConfig,
    model_from_config,
    noise_from_config,
    notch_from_config,
    objective_from_config,
    omegas_from_config,
    parse_config_file,
    settings_from_config,
)
from .fem import compute_frf
from .gradients import adjoint_gradient, finite_difference_gradient
from .optimizer import identify
from .synth import synth_dataset

GRADCHECK_TOL = 1e-5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platedamage",
        description="FRF-based damage identification for clamped plates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, func) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a key=value config file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="noise seed (overrides config)")
        p.add_argument(
            "--lambda",
            dest="lasso_weight",
            type=float,
            help="regularization weight (overrides config)",
        )
        p.set_defaults(func=func)
        return p

    add("forward", "compute FRFs for the configured plate", _cmd_forward)
    add("synth", "generate a synthetic measured dataset", _cmd_synth)
    add("identify", "identify damage from measured FRFs", _cmd_identify)
    add("gradcheck", "verify adjoint gradients against finite differences", _cmd_gradcheck)
    return parser


def _load_config(args) -> RunConfig:
    config = parse_config_file(args.config)
    if args.out is not None:
        config.output_dir = args.out
    if args.seed is not None:
        config.seed = args.seed
    if args.lasso_weight is not None:
        if args.lasso_weight < 0.0:
            raise ConfigError("--lambda must be nonnegative")
        config.lasso_weight = args.lasso_weight
    return config


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dataset_for(config, model):
    """Measured dataset from file, or a synthetic one from the notch keys."""
    if config.dataset is not None:
        dataset = dataio.load_frf_dataset(config.dataset)
        return dataset, None
    dataset, chi_true = synth_dataset(
        model,
        notch_from_config(config),
        omegas_from_config(config),
        noise_from_config(config),
        objective_from_config(config).simp,
        config.chi_min,
    )
    return dataset, chi_true


def _cmd_forward(args) -> int:
    config = _load_config(args)
    model = model_from_config(config)
    out = _out_dir(config)
    if config.chi_path is not None:
        chi, meta = dataio.load_field(config.chi_path)
        if meta["nx"] != model.mesh.nx or meta["ny"] != model.mesh.ny:
            raise ConfigError(
                f"field grid {meta['nx']}x{meta['ny']} does not match the "
                f"{model.mesh.nx}x{model.mesh.ny} mesh"
            )
    else:
        chi = np.ones(model.mesh.n_elems)
    omegas = omegas_from_config(config)
    h = compute_frf(model, chi, objective_from_config(config).simp, omegas, config.chi_min)
    from .objectives import FrfDataset

    path = dataio.save_frf_dataset(FrfDataset(omegas=omegas, h=h), out / "frf.csv")
    print(f"wrote {path} ({len(omegas)} frequencies x {model.n_measurements} points)")
    return 0


def _cmd_synth(args) -> int:
    config = _load_config(args)
    model = model_from_config(config)
    out = _out_dir(config)
    dataset, chi_true = synth_dataset(
        model,
        notch_from_config(config),
        omegas_from_config(config),
        noise_from_config(config),
        objective_from_config(config).simp,
        config.chi_min,
    )
    data_path = dataio.save_frf_dataset(dataset, out / "dataset.csv")
    csv_path, pgm_path = dataio.export_field(
        chi_true, model.mesh, out / "truth", config.chi_min
    )
    print(f"wrote {data_path}, {csv_path}, {pgm_path}")
    return 0


def _cmd_identify(args) -> int:
    config = _load_config(args)
    model = model_from_config(config)
    out = _out_dir(config)
    dataset, chi_true = _dataset_for(config, model)
    if chi_true is not None:
        dataio.save_frf_dataset(dataset, out / "dataset.csv")
        dataio.export_field(chi_true, model.mesh, out / "truth", config.chi_min)

    objective = objective_from_config(config)
    settings = settings_from_config(config)
    field, history = identify(model, dataset, objective, settings)

    dataio.export_field(field.values, model.mesh, out / "field", config.chi_min)
    dataio.write_convergence_log(history.records, dataset.freqs_hz, out / "convergence.csv")
    stats = dataio.damage_statistics(
        field.values, model.mesh, model.elem_volumes, chi_min=config.chi_min
    )
    last = history.records[-1]
    dataio.write_summary(
        out / "summary.txt",
        history.status.value,
        history.n_iterations,
        last.total,
        last.data_term,
        last.lasso_term,
        stats,
    )
    print(
        f"{history.status.value} after {history.n_iterations} iterations: "
        f"Q={last.total:.6e}, min chi={stats['min_chi']:.4f}, "
        f"void fraction={stats['void_volume_fraction']:.4f}"
    )
    return 0


def _cmd_gradcheck(args) -> int:
    config = _load_config(args)
    model = model_from_config(config)
    dataset, _ = _dataset_for(config, model)
    objective = objective_from_config(config)

    # deterministic interior test field, away from both bounds
    n = model.mesh.n_elems
    chi = 0.55 + 0.35 * np.sin(np.linspace(0.0, 3.0 * np.pi, n))
    adj = adjoint_gradient(model, chi, objective, dataset, config.chi_min)
    fd = finite_difference_gradient(
        model, chi, objective, dataset, chi_min=config.chi_min
    )
    denom = np.maximum(np.abs(fd), 1e-12)
    rel = np.abs(adj - fd) / denom
    worst = int(np.argmax(rel))
    print(
        f"max relative gradient error {rel.max():.3e} at element {worst} "
        f"(adjoint {adj[worst]:+.6e}, finite difference {fd[worst]:+.6e})"
    )
    if rel.max() < GRADCHECK_TOL:
        print(f"PASS (tolerance {GRADCHECK_TOL:g})")
        return 0
    print(f"FAIL (tolerance {GRADCHECK_TOL:g})")
    return 1


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (ConfigError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
