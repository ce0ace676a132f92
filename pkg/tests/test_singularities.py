"""
Unit tests for singularity detection and separatrix tracing
"""
from fractions import Fraction

import pytest

from src.config.constants import SingularityKind, Terminal
from src.core.mesh.generator import cylinder, grid
from src.core.singularities.detector import classify, find_singularities, index_check, index_sum
from src.core.singularities.separatrix import (
    separatrix_census,
    singularity_separatrices,
    trace_separatrix,
)


class TestDetector:
    """Test cases for singular vertex detection"""

    def test_regular_grid(self, small_grid):
        """Test a grid has no singularities"""
        assert find_singularities(small_grid) == []
        assert index_check(small_grid)

    def test_d6(self, d6_mesh):
        """Test the valence-6 disk"""
        sings = find_singularities(d6_mesh)

        assert len(sings) == 1
        assert sings[0].vertex == 0
        assert sings[0].valence == 6
        assert sings[0].kind == SingularityKind.D6

    def test_d2(self, d2_mesh):
        """Test the valence-2 disk"""
        sings = find_singularities(d2_mesh)

        assert [s.kind for s in sings] == [SingularityKind.D2]
        assert sings[0].to_dict() == {"vertex": 0, "valence": 2, "kind": "D2"}

    def test_boundary_vertices_ignored(self, small_grid):
        """Test grid corners (valence 2) are not singular"""
        assert small_grid.valence(0) == 2
        assert not small_grid.is_singular(0)

    def test_classify(self):
        """Test valence classification"""
        assert classify(2) == SingularityKind.D2
        assert classify(6) == SingularityKind.D6
        assert classify(8) == SingularityKind.OTHER


class TestIndexSum:
    """Test cases for the combinatorial Gauss-Bonnet check"""

    @pytest.mark.parametrize("fixture", ["small_grid", "cylinder_mesh", "torus_mesh", "d2_mesh", "d6_mesh"])
    def test_index_matches_euler(self, fixture, request):
        """Test the index sum equals V - E + F"""
        mesh = request.getfixturevalue(fixture)
        assert index_sum(mesh) == mesh.euler_characteristic()
        assert index_check(mesh)

    def test_d6_contribution(self, d6_mesh):
        """Test a D6 vertex contributes -1/2"""
        interior = sum(
            Fraction(4 - d6_mesh.valence(v), 4)
            for v in range(d6_mesh.vertex_count)
            if not d6_mesh.boundary_vertex[v]
        )
        assert interior == Fraction(-1, 2)


class TestSeparatrices:
    """Test cases for straight walks from singularities"""

    def test_d6_separatrices(self, d6_mesh):
        """Test six separatrices, each reaching the boundary"""
        sing = find_singularities(d6_mesh)[0]
        seps = singularity_separatrices(d6_mesh, sing)

        assert len(seps) == 6
        assert all(s.terminal == Terminal.BOUNDARY for s in seps)
        assert all(s.length == 3 for s in seps)

    def test_labels_alternate(self, d6_mesh):
        """Test three separatrices per label"""
        sing = find_singularities(d6_mesh)[0]
        labels = [s.label.value for s in singularity_separatrices(d6_mesh, sing)]
        assert sorted(labels) == ["U", "U", "U", "V", "V", "V"]

    def test_d2_separatrices(self, d2_mesh):
        """Test a D2 vertex has one separatrix per label"""
        sing = find_singularities(d2_mesh)[0]
        seps = singularity_separatrices(d2_mesh, sing)

        assert len(seps) == 2
        assert {s.label.value for s in seps} == {"U", "V"}
        assert all(s.edges[0] in d2_mesh.vertex_edges[0] for s in seps)

    def test_census_deduplicates(self, d6_mesh):
        """Test the census lists each walk once"""
        census = separatrix_census(d6_mesh)
        keys = [s.undirected_key() for s in census]
        assert len(keys) == len(set(keys)) == 6

    def test_edge_not_incident(self, d6_mesh):
        """Test tracing from an edge not at the origin"""
        far = next(e for e, (a, b) in enumerate(d6_mesh.edges) if 0 not in (a, b))
        with pytest.raises(ValueError):
            trace_separatrix(d6_mesh, 0, far)

    def test_torus_has_none(self, torus_mesh):
        """Test a regular torus has no separatrices"""
        assert separatrix_census(torus_mesh) == []

    def test_closed_loop(self):
        """Test a straight walk around a cylinder's middle ring closes after 8 edges"""
        mesh = cylinder(8, 2)
        forward = trace_separatrix(mesh, 8, mesh.edge_between(8, 9))
        backward = trace_separatrix(mesh, 8, mesh.edge_between(8, 15))

        assert forward.terminal == Terminal.LOOP
        assert forward.length == 8
        assert forward.vertices == (8, 9, 10, 11, 12, 13, 14, 15, 8)
        assert backward.edges == tuple(reversed(forward.edges))

    def test_retrace_from_far_end(self):
        """Test walking back from where a grid walk ended gives the reversed path"""
        mesh = grid(4, 4)
        forward = trace_separatrix(mesh, 10, mesh.edge_between(10, 11))
        backward = trace_separatrix(mesh, forward.end_vertex, forward.edges[-1])

        assert forward.vertices == (10, 11, 12, 13, 14)
        assert forward.terminal == Terminal.BOUNDARY
        assert backward.edges == tuple(reversed(forward.edges))
        assert backward.vertices == tuple(reversed(forward.vertices))
