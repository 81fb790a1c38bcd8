"""Structured rectangular plate mesh with 3-DOF-per-node bending kinematics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

EDGE_NAMES = ("left", "right", "top", "bottom")

# Points this close to the domain boundary (meters) still count as inside.
INSIDE_TOL = 1e-9


@dataclass(frozen=True)
class PlateGeometry:
    """Rectangular plate domain; all dimensions in meters."""

    length_x: float
    length_y: float
    thickness: float

    def __post_init__(self) -> None:
        for name in ("length_x", "length_y", "thickness"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.thickness > self.length_y / 5.0:
            warnings.warn(
                "plate thickness exceeds length_y/5; thin-plate kinematics are "
                "questionable for this geometry",
                stacklevel=2,
            )


@dataclass(frozen=True)
class BoundarySpec:
    """Clamped edge plus excitation and measurement layout.

    Coordinates are in meters in the plate plane. The excitation direction
    must be out of plane; in-plane forcing is not part of the bending model.
    """

    clamped_edge: str
    excitation_point: tuple[float, float]
    measurement_points: tuple[tuple[float, float], ...]
    excitation_direction: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self) -> None:
        if self.clamped_edge not in EDGE_NAMES:
            raise ValueError(
                f"clamped_edge must be one of {EDGE_NAMES}, got {self.clamped_edge!r}"
            )
        object.__setattr__(
            self, "excitation_point", tuple(float(c) for c in self.excitation_point)
        )
        points = tuple(tuple(float(c) for c in p) for p in self.measurement_points)
        if len(points) < 1:
            raise ValueError("at least one measurement point is required")
        object.__setattr__(self, "measurement_points", points)

    @property
    def n_measurements(self) -> int:
        return len(self.measurement_points)


@dataclass(frozen=True)
class Mesh:
    """Uniform grid of 4-node quad elements.

    Node ``n = j*(nx+1) + i`` sits at ``(i*elem_dx, j*elem_dy)`` and carries
    DOF ``(3n, 3n+1, 3n+2)`` = (deflection w, rotation rot_x, rotation rot_y).
    Elements are numbered row-major, ``e = j*nx + i``, with counterclockwise
    connectivity. Instances are shared freely; treat all arrays as read-only.
    """

    nx: int
    ny: int
    elem_dx: float
    elem_dy: float
    node_xy: np.ndarray  # (n_nodes, 2) coordinates in meters
    elem_nodes: np.ndarray  # (n_elems, 4) node indices, counterclockwise
    elem_dofs: np.ndarray = field(init=False)  # (n_elems, 12)

    def __post_init__(self) -> None:
        dofs = (3 * self.elem_nodes[:, :, None] + np.arange(3)).reshape(-1, 12)
        object.__setattr__(self, "elem_dofs", dofs)

    @property
    def n_nodes(self) -> int:
        return self.node_xy.shape[0]

    @property
    def n_elems(self) -> int:
        return self.elem_nodes.shape[0]

    @property
    def n_dofs(self) -> int:
        return 3 * self.n_nodes

    @property
    def length_x(self) -> float:
        return float(self.node_xy[:, 0].max())

    @property
    def length_y(self) -> float:
        return float(self.node_xy[:, 1].max())

    def elem_centers(self) -> np.ndarray:
        """Element centroid coordinates, shape (n_elems, 2)."""
        return self.node_xy[self.elem_nodes].mean(axis=1)

    def edge_nodes(self, edge: str) -> np.ndarray:
        """Node indices lying on one of the four outer edges."""
        if edge not in EDGE_NAMES:
            raise ValueError(f"edge must be one of {EDGE_NAMES}, got {edge!r}")
        cols = np.arange(self.nx + 1)
        rows = np.arange(self.ny + 1)
        if edge == "left":
            return rows * (self.nx + 1)
        if edge == "right":
            return rows * (self.nx + 1) + self.nx
        if edge == "bottom":
            return cols
        return self.ny * (self.nx + 1) + cols


def build_mesh(geometry: PlateGeometry, target_elem_size: float) -> Mesh:
    """Mesh the plate with near-square quads of roughly the requested size.

    Element counts per side come from rounding length/target to the nearest
    integer (halves round up), so the actual element size can differ slightly
    from the target but the mesh always spans the full domain.
    """
    if not target_elem_size > 0.0:
        raise ValueError("target_elem_size must be strictly positive")
    if target_elem_size > min(geometry.length_x, geometry.length_y) / 2.0:
        raise ValueError(
            "target_elem_size must not exceed half the shorter plate side"
        )
    nx = int(np.floor(geometry.length_x / target_elem_size + 0.5))
    ny = int(np.floor(geometry.length_y / target_elem_size + 0.5))
    if nx < 2 or ny < 2:
        raise ValueError(f"mesh of {nx}x{ny} elements is too coarse to be useful")

    xs = np.linspace(0.0, geometry.length_x, nx + 1)
    ys = np.linspace(0.0, geometry.length_y, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    node_xy = np.column_stack([gx.ravel(), gy.ravel()])

    ei = np.tile(np.arange(nx), ny)
    ej = np.repeat(np.arange(ny), nx)
    n0 = ej * (nx + 1) + ei
    elem_nodes = np.column_stack([n0, n0 + 1, n0 + nx + 2, n0 + nx + 1])

    return Mesh(
        nx=nx,
        ny=ny,
        elem_dx=geometry.length_x / nx,
        elem_dy=geometry.length_y / ny,
        node_xy=node_xy,
        elem_nodes=elem_nodes,
    )


def constrained_dofs(mesh: Mesh, spec: BoundarySpec) -> np.ndarray:
    """Sorted DOF indices fixed by the clamp (all 3 DOF of every edge node)."""
    nodes = mesh.edge_nodes(spec.clamped_edge)
    return np.sort((3 * nodes[:, None] + np.arange(3)).ravel())


def locate_dof(
    mesh: Mesh,
    point: tuple[float, float],
    direction: tuple[float, float, float] = (0.0, 0.0, 1.0),
) -> int:
    """Deflection DOF of the mesh node nearest to a physical point.

    The point must lie inside the plate (with a small tolerance for points
    on the boundary). Distance ties resolve to the lowest node index so the
    mapping is deterministic.
    """
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (3,) or abs(direction[2]) < 1e-12 * np.linalg.norm(direction):
        raise ValueError("only out-of-plane excitation/measurement is supported")
    if np.linalg.norm(direction[:2]) > 1e-9 * abs(direction[2]):
        raise ValueError("only out-of-plane excitation/measurement is supported")

    x, y = float(point[0]), float(point[1])
    if not (-INSIDE_TOL <= x <= mesh.length_x + INSIDE_TOL):
        raise ValueError(f"point x={x} lies outside the plate")
    if not (-INSIDE_TOL <= y <= mesh.length_y + INSIDE_TOL):
        raise ValueError(f"point y={y} lies outside the plate")

    d2 = (mesh.node_xy[:, 0] - x) ** 2 + (mesh.node_xy[:, 1] - y) ** 2
    dmin = d2.min()
    # ties within roundoff resolve to the first (lowest) node index
    node = int(np.flatnonzero(d2 <= dmin * (1.0 + 1e-9) + 1e-18)[0])
    return 3 * node
