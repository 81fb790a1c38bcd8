"""File formats: FRF datasets, design-field exports, and convergence logs.

All floats are written with ``repr`` (shortest exact decimal), so files
round-trip to the bit and identical runs produce byte-identical output.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .fem import CHI_MIN
from .mesh import Mesh
from .objectives import DesignField, FrfDataset, lasso_penalty

FRF_HEADER = ["freq_hz", "point_id", "re", "im"]


def save_frf_dataset(dataset: FrfDataset, path: str | Path) -> Path:
    """Write one row per (frequency, point): freq_hz, point_id, re, im."""
    path = Path(path)
    freqs_hz = dataset.freqs_hz
    lines = [",".join(FRF_HEADER)]
    for j in range(dataset.n_freqs):
        for i in range(dataset.n_points):
            v = complex(dataset.h[j, i])
            lines.append(f"{float(freqs_hz[j])!r},{i},{v.real!r},{v.imag!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def load_frf_dataset(path: str | Path) -> FrfDataset:
    """Read an FRF CSV, validating schema, ordering, and completeness."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        if [c.strip() for c in header] != FRF_HEADER:
            raise ValueError(
                f"{path}, line 1: expected header {','.join(FRF_HEADER)!r}"
            )
        freqs: list[float] = []
        blocks: dict[float, dict[int, complex]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}, line {lineno}: expected 4 columns")
            try:
                f = float(row[0])
                pid = int(row[1])
                val = complex(float(row[2]), float(row[3]))
            except ValueError:
                raise ValueError(f"{path}, line {lineno}: malformed numeric value") from None
            if f not in blocks:
                if freqs and f <= freqs[-1]:
                    raise ValueError(
                        f"{path}, line {lineno}: frequencies must be strictly increasing"
                    )
                freqs.append(f)
                blocks[f] = {}
            if pid in blocks[f]:
                raise ValueError(
                    f"{path}, line {lineno}: duplicate point_id {pid} at {f} Hz"
                )
            blocks[f][pid] = val

    if not freqs:
        raise ValueError(f"{path}: no data rows")
    n_points = len(blocks[freqs[0]])
    h = np.empty((len(freqs), n_points), dtype=complex)
    for j, f in enumerate(freqs):
        block = blocks[f]
        if len(block) != n_points or sorted(block) != list(range(n_points)):
            raise ValueError(
                f"{path}: frequency {f} Hz does not cover point_ids 0..{n_points - 1}"
            )
        for pid, val in block.items():
            h[j, pid] = val
    return FrfDataset(omegas=2.0 * np.pi * np.asarray(freqs), h=h)


def export_field(
    chi: np.ndarray, mesh: Mesh, base_path: str | Path, chi_min: float = CHI_MIN
) -> tuple[Path, Path]:
    """Write the design field as ``<base>.csv`` and ``<base>.pgm``.

    The CSV holds the element grid row-major (row j=0 first) after a header
    comment with the grid dimensions. The graymap has one pixel per element,
    top image row = top plate row, and a fixed linear gray map with
    chi_min = black and solid = white.
    """
    chi = np.asarray(chi, dtype=float)
    if chi.shape != (mesh.n_elems,):
        raise ValueError(f"chi must have shape ({mesh.n_elems},), got {chi.shape}")
    base = Path(base_path)
    base.parent.mkdir(parents=True, exist_ok=True)
    grid = chi.reshape(mesh.ny, mesh.nx)

    csv_path = base.with_suffix(".csv")
    lines = [
        f"# nx={mesh.nx},ny={mesh.ny},elem_dx={mesh.elem_dx!r},elem_dy={mesh.elem_dy!r}"
    ]
    for j in range(mesh.ny):
        lines.append(",".join(repr(float(v)) for v in grid[j]))
    csv_path.write_text("\n".join(lines) + "\n")

    pgm_path = base.with_suffix(".pgm")
    gray = np.rint((grid - chi_min) / (1.0 - chi_min) * 255.0).clip(0, 255).astype(int)
    rows = [" ".join(str(v) for v in gray[j]) for j in range(mesh.ny - 1, -1, -1)]
    pgm_path.write_text(f"P2\n{mesh.nx} {mesh.ny}\n255\n" + "\n".join(rows) + "\n")
    return csv_path, pgm_path


def load_field(csv_path: str | Path) -> tuple[np.ndarray, dict]:
    """Read a field CSV back into (chi, grid metadata)."""
    csv_path = Path(csv_path)
    lines = csv_path.read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{csv_path}: missing grid header")
    meta: dict = {}
    for item in lines[0].lstrip("#").strip().split(","):
        key, _, value = item.partition("=")
        meta[key.strip()] = value.strip()
    try:
        nx, ny = int(meta["nx"]), int(meta["ny"])
        meta = {
            "nx": nx,
            "ny": ny,
            "elem_dx": float(meta["elem_dx"]),
            "elem_dy": float(meta["elem_dy"]),
        }
    except (KeyError, ValueError):
        raise ValueError(f"{csv_path}: malformed grid header") from None
    rows = [line for line in lines[1:] if line.strip()]
    if len(rows) != ny:
        raise ValueError(f"{csv_path}: expected {ny} grid rows, found {len(rows)}")
    grid = np.array([[float(v) for v in row.split(",")] for row in rows])
    if grid.shape != (ny, nx):
        raise ValueError(f"{csv_path}: grid shape {grid.shape} does not match header")
    return grid.ravel(), meta


def write_convergence_log(
    records, freqs_hz: np.ndarray, path: str | Path
) -> Path:
    """One CSV row per iteration: iter, Q, J, L, per-frequency terms, |pg|."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    term_cols = [f"term_{f:g}hz" for f in freqs_hz]
    lines = [",".join(["iter", "Q", "J", "L", *term_cols, "proj_grad_norm"])]
    for rec in records:
        cells = [
            str(rec.iteration),
            repr(rec.total),
            repr(rec.data_term),
            repr(rec.lasso_term),
            *[repr(float(t)) for t in rec.per_frequency],
            repr(rec.proj_grad_norm),
        ]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    return path


def damage_statistics(
    chi: np.ndarray,
    mesh: Mesh,
    volumes: np.ndarray,
    threshold: float = 0.9,
    chi_min: float = CHI_MIN,
) -> dict:
    """Simple descriptors of the identified damage pattern."""
    chi = np.asarray(chi, dtype=float)
    centers = mesh.elem_centers()
    weights = (1.0 - chi) * volumes
    total = weights.sum()
    if total > 0.0:
        centroid = tuple((weights @ centers) / total)
    else:
        centroid = None
    below = chi < threshold
    return {
        "min_chi": float(chi.min()),
        "void_volume_fraction": float(
            lasso_penalty(DesignField(chi, volumes, chi_min))
        ),
        "n_below_threshold": int(np.count_nonzero(below)),
        "threshold": threshold,
        "void_centroid": centroid,
    }


def write_summary(
    path: str | Path,
    status: str,
    n_iterations: int,
    total: float,
    data_term: float,
    lasso_term: float,
    stats: dict,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    centroid = stats["void_centroid"]
    centroid_txt = (
        f"({centroid[0]:.4f}, {centroid[1]:.4f}) m" if centroid is not None else "n/a"
    )
    lines = [
        "identification summary",
        f"status:                {status}",
        f"iterations:            {n_iterations}",
        f"objective Q:           {total!r}",
        f"data term J:           {data_term!r}",
        f"lasso term L:          {lasso_term!r}",
        f"min chi:               {stats['min_chi']:.6f}",
        f"void volume fraction:  {stats['void_volume_fraction']:.6f}",
        f"elements chi < {stats['threshold']:g}:   {stats['n_below_threshold']}",
        f"void centroid:         {centroid_txt}",
    ]
    path.write_text("\n".join(lines) + "\n")
    return path
