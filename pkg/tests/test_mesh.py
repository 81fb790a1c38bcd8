"""Mesh construction, DOF numbering, and point-to-DOF mapping."""

import numpy as np
import pytest

from platedamage import BoundarySpec, PlateGeometry, build_mesh, constrained_dofs, locate_dof


def square_plate(side=0.1, thickness=0.01):
    return PlateGeometry(side, side, thickness)


class TestPlateGeometry:
    def test_rejects_nonpositive_dimensions(self):
        with pytest.raises(ValueError):
            PlateGeometry(0.0, 0.1, 0.005)
        with pytest.raises(ValueError):
            PlateGeometry(0.1, -0.1, 0.005)
        with pytest.raises(ValueError):
            PlateGeometry(0.1, 0.1, 0.0)

    def test_warns_when_thick(self):
        with pytest.warns(UserWarning):
            PlateGeometry(0.1, 0.02, 0.005)


class TestBuildMesh:
    def test_exact_division_counts(self):
        mesh = build_mesh(square_plate(), 0.01)
        assert (mesh.nx, mesh.ny) == (10, 10)
        assert mesh.n_elems == 100
        assert mesh.n_nodes == 121
        assert mesh.n_dofs == 363

    def test_rounded_division(self):
        # 0.335/0.010 = 33.5 rounds up; elem_dx shrinks to fit
        mesh = build_mesh(PlateGeometry(0.335, 0.100, 0.005), 0.010)
        assert (mesh.nx, mesh.ny) == (34, 10)
        assert mesh.elem_dx == 0.335 / 34
        assert mesh.elem_dy == 0.010
        assert abs(mesh.elem_dx - 0.009852941176470589) < 1e-18

    def test_mesh_spans_domain_exactly(self):
        geo = PlateGeometry(0.335, 0.100, 0.005)
        mesh = build_mesh(geo, 0.010)
        assert mesh.node_xy[:, 0].max() == geo.length_x
        assert mesh.node_xy[:, 1].max() == geo.length_y
        assert np.isclose(mesh.elem_dx * mesh.nx, geo.length_x, rtol=1e-15)

    def test_rejects_bad_target_size(self):
        with pytest.raises(ValueError):
            build_mesh(square_plate(), 0.0)
        with pytest.raises(ValueError):
            build_mesh(square_plate(), -0.01)
        with pytest.raises(ValueError):
            build_mesh(square_plate(), 0.06)  # > half the shorter side

    def test_rejects_degenerate_mesh(self):
        with pytest.raises(ValueError):
            build_mesh(PlateGeometry(0.02, 0.1, 0.005), 0.0105)

    @pytest.mark.parametrize("nx,ny", [(2, 2), (5, 3), (12, 7)])
    def test_counts_match_closed_form(self, nx, ny):
        mesh = build_mesh(PlateGeometry(0.01 * nx, 0.01 * ny, 0.001), 0.01)
        assert (mesh.nx, mesh.ny) == (nx, ny)
        assert mesh.n_nodes == (nx + 1) * (ny + 1)
        assert mesh.n_elems == nx * ny

    def test_dof_map_is_bijective(self):
        mesh = build_mesh(square_plate(), 0.02)
        dofs = mesh.elem_dofs.ravel()
        assert set(dofs) == set(range(mesh.n_dofs))

    def test_elements_counterclockwise(self):
        mesh = build_mesh(PlateGeometry(0.05, 0.03, 0.002), 0.01)
        for quad in mesh.node_xy[mesh.elem_nodes]:
            x, y = quad[:, 0], quad[:, 1]
            area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
            assert area > 0.0

    def test_node_coordinates_row_major(self):
        mesh = build_mesh(PlateGeometry(0.03, 0.02, 0.002), 0.01)
        # node j*(nx+1)+i at (i*dx, j*dy)
        n = 1 * (mesh.nx + 1) + 2
        assert np.allclose(mesh.node_xy[n], [2 * mesh.elem_dx, mesh.elem_dy])


class TestConstrainedDofs:
    def boundary(self, edge):
        return BoundarySpec(edge, (0.05, 0.05), ((0.05, 0.05),))

    def test_left_edge_clamp(self):
        mesh = build_mesh(square_plate(), 0.01)
        fixed = constrained_dofs(mesh, self.boundary("left"))
        assert fixed.size == 3 * 11
        assert np.all(mesh.node_xy[fixed // 3, 0] == 0.0)

    def test_all_edges_counts(self):
        mesh = build_mesh(PlateGeometry(0.335, 0.100, 0.005), 0.010)
        for edge, n_nodes in [("left", 11), ("right", 11), ("top", 35), ("bottom", 35)]:
            fixed = constrained_dofs(mesh, self.boundary(edge))
            assert fixed.size == 3 * n_nodes

    def test_sorted_and_unique(self):
        mesh = build_mesh(square_plate(), 0.02)
        fixed = constrained_dofs(mesh, self.boundary("bottom"))
        assert np.all(np.diff(fixed) > 0)

    def test_rejects_unknown_edge(self):
        with pytest.raises(ValueError):
            BoundarySpec("north", (0.0, 0.0), ((0.0, 0.0),))


class TestLocateDof:
    def test_exact_node_hit(self):
        mesh = build_mesh(square_plate(), 0.01)
        # node (3, 2) -> index 2*11+3, w-DOF is 3x that
        assert locate_dof(mesh, (0.03, 0.02)) == 3 * (2 * 11 + 3)

    def test_tie_resolves_to_lowest_node_index(self):
        mesh = build_mesh(square_plate(), 0.01)
        # element center is equidistant from 4 nodes; lowest index wins
        dof = locate_dof(mesh, (0.005, 0.005))
        assert dof == 3 * 0

    def test_outside_domain_rejected(self):
        mesh = build_mesh(square_plate(), 0.01)
        with pytest.raises(ValueError):
            locate_dof(mesh, (0.11, 0.05))
        with pytest.raises(ValueError):
            locate_dof(mesh, (0.05, -0.001))

    def test_boundary_tolerance(self):
        mesh = build_mesh(square_plate(), 0.01)
        assert locate_dof(mesh, (0.1 + 1e-10, 0.1)) == 3 * (mesh.n_nodes - 1)

    def test_in_plane_direction_rejected(self):
        mesh = build_mesh(square_plate(), 0.01)
        with pytest.raises(ValueError):
            locate_dof(mesh, (0.05, 0.05), direction=(1.0, 0.0, 0.0))

    def test_measurement_points_required(self):
        with pytest.raises(ValueError):
            BoundarySpec("left", (0.0, 0.0), ())
