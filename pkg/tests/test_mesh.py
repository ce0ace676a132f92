"""
Unit tests for mesh parsing, SDQ labeling, generators and strips
"""
import json

import numpy as np
import pytest

from src.config.constants import Family
from src.core.errors import GeometryError, InputError, MeshParserError, SDQValidationError
from src.core.mesh.generator import gen_testmesh, grid, singular_disk
from src.core.mesh.mesh_io import load_mesh, mesh_to_text, parse_mesh, write_mesh
from src.core.mesh.sdq_mesh import SDQMesh, build_mesh, quad_normal, validate_sdq
from src.core.mesh.strips import rail_edge_set, rung_edge_set, shared_rail_edges, trace_strips


SINGLE_QUAD = """{
  "units": "mm",
  "vertices": [[0, 0, 0], [10, 0, 0], [10, 10, 0], [0, 10, 0]],
  "quads": [[0, 1, 2, 3]]
}"""

TRIANGLE_FACE = """{
  "units": "mm",
  "vertices": [[0, 0, 0], [10, 0, 0], [10, 10, 0], [0, 10, 0]],
  "quads": [[0, 1, 2]]
}"""

FLIPPED_NEIGHBOUR = """{
  "units": "mm",
  "vertices": [[0, 0, 0], [10, 0, 0], [20, 0, 0], [0, 10, 0], [10, 10, 0], [20, 10, 0]],
  "quads": [[0, 1, 4, 3], [1, 4, 5, 2]]
}"""

BAD_LABELS = """{
  "units": "mm",
  "vertices": [[0, 0, 0], [10, 0, 0], [10, 10, 0], [0, 10, 0]],
  "quads": [[0, 1, 2, 3]],
  "edge_labels": {"U": [[0, 1], [1, 2]], "V": [[2, 3], [0, 3]]}
}"""


class TestMeshParser:
    """Test cases for the mesh file parser"""

    def test_parse_single_quad(self):
        """Test parsing a one-quad mesh with derived labels"""
        mesh = parse_mesh(SINGLE_QUAD)

        assert mesh.vertex_count == 4
        assert mesh.quad_count == 1
        assert mesh.edge_count == 4
        assert mesh.labels[0] == Family.U
        assert mesh.labels[1] == Family.V

    def test_non_quad_face(self):
        """Test that a triangle is rejected with its face index"""
        with pytest.raises(MeshParserError) as exc_info:
            parse_mesh(TRIANGLE_FACE)
        assert "non-quad face at index 0" in str(exc_info.value)

    def test_inconsistent_orientation(self):
        """Test that a flipped neighbour quad is rejected"""
        with pytest.raises(MeshParserError) as exc_info:
            parse_mesh(FLIPPED_NEIGHBOUR)
        assert "orientation" in str(exc_info.value)

    def test_invalid_json(self):
        """Test malformed JSON"""
        with pytest.raises(MeshParserError):
            parse_mesh("{not json")

    def test_inconsistent_labels(self):
        """Test supplied labels that break the opposite-edge rule"""
        with pytest.raises(SDQValidationError):
            parse_mesh(BAD_LABELS)

    def test_missing_file(self, tmp_path):
        """Test loading a file that does not exist"""
        with pytest.raises(MeshParserError):
            load_mesh(tmp_path / "missing.json")

    def test_errors_are_input_errors(self):
        """Test that parser errors map to the input error class"""
        assert issubclass(MeshParserError, InputError)
        assert issubclass(SDQValidationError, InputError)


class TestMeshRoundTrip:
    """Test cases for deterministic mesh files"""

    def test_write_load_write_identical(self, tmp_path, saddle_mesh):
        """Test write -> load -> write is byte-identical"""
        first = write_mesh(saddle_mesh, tmp_path / "a.json")
        again = write_mesh(load_mesh(first), tmp_path / "b.json")

        assert first.read_bytes() == again.read_bytes()

    def test_labels_survive(self, tmp_path, d6_mesh):
        """Test written labels are read back unchanged"""
        path = write_mesh(d6_mesh, tmp_path / "d6.json")
        loaded = load_mesh(path)

        assert loaded.labels == d6_mesh.labels
        assert json.loads(path.read_text())["units"] == "mm"

    def test_text_without_labels(self, small_grid):
        """Test writing without the label block"""
        data = json.loads(mesh_to_text(small_grid, include_labels=False))
        assert "edge_labels" not in data


class TestSDQLabeling:
    """Test cases for U/V 2-coloring"""

    def test_grid_labels(self, small_grid):
        """Test horizontal edges are U and vertical edges are V"""
        for e, (a, b) in enumerate(small_grid.edges):
            pa, pb = small_grid.vertices[a], small_grid.vertices[b]
            horizontal = abs(pa[1] - pb[1]) < 1e-9
            assert small_grid.label(e) == (Family.U if horizontal else Family.V)

    def test_odd_valence_not_decomposable(self):
        """Test a valence-3 interior vertex cannot be 2-colored"""
        with pytest.raises(SDQValidationError) as exc_info:
            singular_disk(3, 2)
        assert "not strip-decomposable" in str(exc_info.value)

    def test_relabel_is_stable(self, d2_mesh):
        """Test re-deriving labels gives the same coloring"""
        assert validate_sdq(d2_mesh) == d2_mesh.labels

    def test_unlabeled_mesh_object(self):
        """Test a bare mesh gets no labels until validated"""
        mesh = SDQMesh([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], [[0, 1, 2, 3]])
        assert mesh.labels == ()
        assert len(validate_sdq(mesh)) == 4


class TestGenerators:
    """Test cases for synthetic test meshes"""

    def test_grid_counts(self):
        """Test a 4 x 6 grid"""
        mesh = grid(4, 6)

        assert mesh.vertex_count == 35
        assert mesh.quad_count == 24
        assert mesh.euler_characteristic() == 1

    def test_torus_is_closed(self, torus_mesh):
        """Test the torus has no boundary and Euler characteristic 0"""
        assert not any(torus_mesh.boundary_edge)
        assert torus_mesh.euler_characteristic() == 0

    def test_unknown_kind(self):
        """Test an unknown generator kind"""
        with pytest.raises(InputError):
            gen_testmesh("sphere")

    def test_invalid_params(self):
        """Test generator parameter validation"""
        with pytest.raises(InputError):
            gen_testmesh("torus", radius=10.0, minor_radius=20.0)

    def test_deterministic(self):
        """Test the same parameters give the same mesh"""
        a = gen_testmesh("d6", sector=3, amplitude=15.0)
        b = gen_testmesh("d6", sector=3, amplitude=15.0)
        assert mesh_to_text(a) == mesh_to_text(b)


class TestStrips:
    """Test cases for strip tracing"""

    def test_grid_strips(self, small_grid):
        """Test grid rows are U strips and columns are V strips"""
        u = trace_strips(small_grid, Family.U)
        v = trace_strips(small_grid, Family.V)

        assert u.strip_count == 2
        assert v.strip_count == 3
        assert all(s.length == 3 for s in u.strips)
        assert all(s.length == 2 for s in v.strips)

    def test_every_quad_in_one_strip(self, d6_mesh):
        """Test each family covers every quad exactly once"""
        for family in (Family.U, Family.V):
            network = trace_strips(d6_mesh, family)
            covered = sorted(q for s in network.strips for q in s.quads)
            assert covered == list(range(d6_mesh.quad_count))

    def test_cylinder_rings_closed(self, cylinder_mesh):
        """Test circumferential U strips are closed rings"""
        u = trace_strips(cylinder_mesh, Family.U)

        assert u.strip_count == 6
        assert u.closed_count == 6
        assert all(len(s.rungs) == s.length == 16 for s in u.strips)

    def test_open_strip_rungs(self, small_grid):
        """Test an open strip has one more rung than quads"""
        strip = trace_strips(small_grid, Family.U).strips[0]
        assert len(strip.rungs) == strip.length + 1

    def test_rungs_of_one_family_are_rails_of_the_other(self, d6_mesh):
        """Test U rung edges and V rail edges are both the V-labeled edges"""
        u = trace_strips(d6_mesh, Family.U)
        v = trace_strips(d6_mesh, Family.V)
        v_edges = set(d6_mesh.edges_with_label(Family.V))

        assert rung_edge_set(d6_mesh, u) == rail_edge_set(d6_mesh, v) == v_edges
        assert rung_edge_set(d6_mesh, v) == rail_edge_set(d6_mesh, u) == set(d6_mesh.edges_with_label(Family.U))

    def test_neighbouring_rows_share_a_rail(self, small_grid):
        """Test the two grid rows meet along the middle line of three edges"""
        first, second = trace_strips(small_grid, Family.U).strips
        shared = shared_rail_edges(small_grid, first, second)

        assert len(shared) == 3
        assert all(small_grid.label(e) == Family.U for e in shared)
        assert all(small_grid.vertices[v][1] == pytest.approx(10.0) for e in shared for v in small_grid.edges[e])


class TestQuadNormal:
    """Test cases for quad normals"""

    def test_counter_clockwise(self):
        mesh = build_mesh([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 1, 2, 3)])
        assert quad_normal(mesh, 0) == pytest.approx(np.array([0.0, 0.0, 1.0]))

    def test_clockwise(self):
        mesh = build_mesh([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 3, 2, 1)])
        assert quad_normal(mesh, 0) == pytest.approx(np.array([0.0, 0.0, -1.0]))

    def test_lifted_corner(self):
        """Test a non-planar quad averages its two triangle normals"""
        mesh = build_mesh([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 1, 2, 3)])
        lifted = mesh.vertices.copy()
        lifted[3] = (0.0, 1.0, 1.0)
        expected = np.array([0.0, 0.0, 1.0]) + np.array([1.0, -1.0, 1.0]) / np.sqrt(3)

        assert quad_normal(mesh, 0, lifted) == pytest.approx(expected / np.linalg.norm(expected))

    def test_degenerate(self):
        mesh = build_mesh([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 1, 2, 3)])
        with pytest.raises(GeometryError):
            quad_normal(mesh, 0, np.zeros((4, 3)))
