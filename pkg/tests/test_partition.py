"""
Unit tests for topological and geometric partitioning
"""
import math

import numpy as np
import pytest

from src.config.constants import CutOrigin, Family
from src.core.errors import PartitionError
from src.core.mesh.generator import fan, grid, saddle, torus
from src.core.mesh.strips import trace_strips
from src.core.partition.cuts import Cut, CutRegistry, validate_cut
from src.core.partition.geometric import (
    angle_partition,
    angle_variation,
    equidistant_positions,
    patch_extents,
    pca_extents,
    size_partition,
)
from src.core.partition.patch import check_patch, cut_open_topology, make_patch
from src.core.partition.pipeline import PartitionResult, partition_pipeline
from src.core.partition.topological import validate_patch
from src.models.config_models import PartitionConfig

GAMMAS = (math.pi / 2, math.pi / 4)
BBOXES = ((500.0, 500.0, 500.0), (120.0, 120.0, 120.0))

CORPUS = ["small_grid", "grid_8x12", "cylinder_mesh", "torus_mesh", "saddle_mesh", "d2_mesh", "d6_mesh"]


def seams_disjoint(result: PartitionResult) -> bool:
    """U and V cut edges meet only inside D2 residuals"""
    return result.registry.overlap() <= result.registry.residual_edges


class TestEquidistantPositions:
    """Test cases for cut placement along a strip"""

    def test_two_cuts(self):
        assert equidistant_positions(10, 2) == [3, 6]

    def test_four_cuts(self):
        assert equidistant_positions(10, 4) == [2, 4, 6, 8]

    def test_short_strip(self):
        """Test more cuts than quads uses every inner rung"""
        assert equidistant_positions(3, 5) == [1, 2]

    def test_nothing_to_cut(self):
        assert equidistant_positions(1, 3) == []
        assert equidistant_positions(8, 0) == []


class TestAngleVariation:
    """Test cases for strip turning measures"""

    def test_straight_strip(self, small_grid):
        """Test a grid row does not turn"""
        strip = trace_strips(small_grid, Family.U).strips[0]
        assert angle_variation(strip, small_grid) == pytest.approx(0.0)
        assert angle_variation(strip, small_grid, along="rails") == pytest.approx(0.0)

    def test_fan_arc(self, fan_for_angle):
        """Test an arc strip turns by sweep * (cols - 1) / cols along its rails"""
        mesh = fan_for_angle(0.6 * math.pi)
        arc = max(trace_strips(mesh, Family.V).strips, key=lambda s: s.length)

        assert arc.length == 10
        assert angle_variation(arc, mesh, along="rails") == pytest.approx(0.6 * math.pi, abs=1e-5)

    def test_closed_ring(self, cylinder_mesh):
        """Test a closed ring turns by a full circle"""
        ring = trace_strips(cylinder_mesh, Family.U).strips[0]
        assert angle_variation(ring, cylinder_mesh, along="rails") == pytest.approx(2 * math.pi, abs=1e-5)


class TestPCA:
    """Test cases for principal extents"""

    def test_rotation_invariant(self, grid_8x12):
        """Test extents do not change when the points are turned by 30 degrees"""
        t = math.radians(30)
        turn = np.array([[math.cos(t), -math.sin(t), 0.0], [math.sin(t), math.cos(t), 0.0], [0.0, 0.0, 1.0]])
        lifted = grid_8x12.vertices + np.array([0.0, 0.0, 1.0]) * (grid_8x12.vertices[:, 0:1] ** 2 / 100.0)

        before = [e for _, e in pca_extents(lifted)]
        after = [e for _, e in pca_extents(lifted @ turn.T)]
        assert after == pytest.approx(before)
        assert after[0] > after[1] > after[2] > 0

    def test_grid_extents(self, grid_8x12):
        """Test a 120 x 80 grid"""
        extents = pca_extents(grid_8x12.vertices)

        assert extents[0][1] == pytest.approx(120.0)
        assert extents[1][1] == pytest.approx(80.0)
        assert extents[2][1] == pytest.approx(0.0, abs=1e-9)
        assert abs(extents[0][0][0]) == pytest.approx(1.0)

    def test_single_point(self):
        """Test a degenerate point set"""
        assert [e for _, e in pca_extents([[1.0, 2.0, 3.0]])] == [0.0, 0.0, 0.0]


class TestCutRegistry:
    """Test cases for per-network seam bookkeeping"""

    def test_rejects_overlap(self):
        """Test a cut on the other network's edges is rejected"""
        registry = CutRegistry()
        edges = (1,)
        assert registry.reserve(Cut(Family.U, edges, CutOrigin.SIZE)) is not None
        assert registry.reserve(Cut(Family.V, edges, CutOrigin.SIZE)) is None
        assert registry.overlap() == set()

    def test_forced_overlap_reported(self):
        """Test a forced overlap outside residuals fails the check"""
        registry = CutRegistry()
        registry.reserve(Cut(Family.U, (4,), CutOrigin.TOPOLOGICAL_D6))
        registry.reserve(Cut(Family.V, (4,), CutOrigin.TOPOLOGICAL_D6), force=True)

        assert registry.overlap() == {4}
        assert registry.check(dq=2)

    def test_residual_tolerated(self):
        """Test overlap inside a residual is allowed"""
        registry = CutRegistry()
        registry.add_residual(0, "C_U", (7, 8))
        registry.reserve(Cut(Family.U, (7, 8), CutOrigin.TOPOLOGICAL_D2_TRANSVERSAL, "C_U", 0))
        registry.reserve(Cut(Family.V, (7,), CutOrigin.TOPOLOGICAL_D2_PARALLEL, singularity=0))

        assert registry.check(dq=2) == []
        assert registry.check(dq=1)

    def test_validate_cut(self, small_grid):
        """Test connectivity and label checks"""
        u_edges = small_grid.edges_with_label(Family.U)
        v_edges = small_grid.edges_with_label(Family.V)

        assert validate_cut(small_grid, Cut(Family.U, (), CutOrigin.SIZE)) == ["empty cut"]
        issues = validate_cut(small_grid, Cut(Family.U, (v_edges[0],), CutOrigin.HANDLE))
        assert issues and "transversal" in issues[0]
        assert validate_cut(small_grid, Cut(Family.U, (u_edges[0],), CutOrigin.HANDLE)) == []


class TestPatch:
    """Test cases for patch construction and checks"""

    def test_whole_grid_patch(self, small_grid):
        """Test the uncut grid is a valid disk with path strip graph"""
        patch = make_patch(small_grid, Family.U, range(small_grid.quad_count), set(), 0)

        assert len(patch.strips) == 2
        assert check_patch(small_grid, patch, set()) == []

    def test_cylinder_not_simply_connected(self, cylinder_mesh):
        """Test the uncut cylinder fails the disk check"""
        quads = range(cylinder_mesh.quad_count)
        topo = cut_open_topology(cylinder_mesh, quads, set())
        assert topo.euler_characteristic == 0
        patch = make_patch(cylinder_mesh, Family.V, quads, set(), 0)
        assert check_patch(cylinder_mesh, patch, set())


class TestPartitionPipeline:
    """Test cases for the full partition of both networks"""

    def test_plain_grid(self, small_grid):
        """Test an uncut grid gives one piece per side"""
        result = partition_pipeline(small_grid)
        census = result.census()

        assert census["pieces_u"] == 1
        assert census["pieces_v"] == 1
        assert census["geometric_cuts"] == 0
        assert result.registry.cuts == []
        assert result.violations() == []
        assert result.assembly_sequence() == [("U", 0), ("V", 0)]

    @pytest.mark.parametrize("fixture", CORPUS)
    @pytest.mark.parametrize("gamma", GAMMAS)
    @pytest.mark.parametrize("bbox", BBOXES)
    def test_corpus_constraints(self, fixture, gamma, bbox, request):
        """Test every corpus mesh partitions without violations"""
        mesh = request.getfixturevalue(fixture)
        result = partition_pipeline(mesh, PartitionConfig(gamma=gamma, bbox=bbox))

        assert result.violations() == []
        assert seams_disjoint(result)
        assert result.is_assembly_connected()
        for network in (Family.U, Family.V):
            covered = sorted(q for p in result.patches[network] for q in p.quads)
            assert covered == list(range(mesh.quad_count))

    def test_torus_opened_into_disks(self):
        """Test a closed torus is cut into disks with path strip graphs in both networks"""
        mesh = torus(8, 8, 60.0, 20.0)
        result = partition_pipeline(mesh)

        assert result.violations() == []
        assert seams_disjoint(result)
        for network in (Family.U, Family.V):
            cuts = result.registry.edges[network]
            assert cuts
            for p in result.patches[network]:
                assert check_patch(mesh, p, cuts) == []
                assert cut_open_topology(mesh, p.quads, cuts).euler_characteristic == 1

    def test_size_fixpoint_on_curved_patch(self):
        """Test a 700 x 700 doubly curved sheet is cut until every piece fits a 500 mm box"""
        mesh = saddle(14, 14, 50.0, 50.0)
        result = partition_pipeline(mesh, PartitionConfig(bbox=(500.0, 500.0, 500.0)))
        census = result.census()

        assert result.violations() == []
        assert census["pieces_u"] >= 2
        assert census["pieces_v"] >= 2
        assert census["cuts_by_origin"].get("size", 0) >= 2
        for network in (Family.U, Family.V):
            for p in result.patches[network]:
                assert all(ext <= 500.0 + 1e-9 for _, ext in patch_extents(mesh, p))

    def test_size_cut(self, grid_8x12):
        """Test a 120 mm grid splits once per network for a 100 mm box"""
        result = partition_pipeline(grid_8x12, PartitionConfig(bbox=(100.0, 100.0, 100.0)))
        census = result.census()

        assert census["pieces_u"] == 2
        assert census["pieces_v"] == 2
        assert census["geometric_cuts"] == 2
        assert census["cuts_by_origin"] == {"size": 2}
        assert seams_disjoint(result)
        assert result.violations() == []

    @pytest.mark.parametrize("total,cuts", [
        (math.pi, 2),
        (0.6 * math.pi, 2),
        (1.2 * math.pi, 3),
        (1.6 * math.pi, 4),
    ])
    def test_fan_angle_cuts(self, fan_for_angle, total, cuts):
        """Test ceil(A / gamma) angle cuts on a fan turning by A"""
        mesh = fan_for_angle(total)
        result = partition_pipeline(mesh, PartitionConfig(gamma=math.pi / 2))

        assert result.registry.geometric_cut_count == cuts
        assert len(result.registry.cuts_of(Family.U, CutOrigin.ANGLE)) == cuts
        assert result.census()["pieces_u"] == cuts + 1
        assert result.census()["pieces_v"] == 1
        assert result.violations() == []

    def test_d6_cuts(self, d6_mesh):
        """Test each network is cut along its three D6 separatrices"""
        result = partition_pipeline(d6_mesh)

        for network in (Family.U, Family.V):
            assert len(result.registry.cuts_of(network, CutOrigin.TOPOLOGICAL_D6)) == 3
            assert len(result.patches[network]) >= 3
        assert result.census()["singularities"] == 1

    @pytest.mark.parametrize("dq", [0, 1, 2])
    def test_d2_residual(self, d2_mesh, dq):
        """Test D2 residuals stay within dq edges per arm"""
        result = partition_pipeline(d2_mesh, PartitionConfig(dq=dq))

        assert all(len(r.edges) <= dq for r in result.registry.residuals)
        assert seams_disjoint(result)
        assert result.registry.check(dq) == []

    def test_cylinder_handles(self, cylinder_mesh):
        """Test the cylinder is opened in both networks"""
        result = partition_pipeline(cylinder_mesh)
        origins = {c.origin for c in result.registry.cuts}

        assert origins & {CutOrigin.HANDLE, CutOrigin.HANDLE_TRANSVERSAL}
        for network in (Family.U, Family.V):
            cuts = result.registry.edges[network]
            for p in result.patches[network]:
                assert check_patch(cylinder_mesh, p, cuts) == []

    def test_round_trip(self, d6_mesh):
        """Test a partition rebuilt from its artifact keeps patches and census"""
        result = partition_pipeline(d6_mesh)
        again = PartitionResult.from_dict(result.to_dict())

        assert again.census() == result.census()
        for network in (Family.U, Family.V):
            assert [p.quads for p in again.patches[network]] == [p.quads for p in result.patches[network]]
        assert again.violations() == []


class TestPartitionErrors:
    """Test cases for unsatisfiable bounds"""

    def test_irreducible_rung_turn(self):
        """Test a single-quad strip whose rungs turn more than gamma"""
        mesh = fan(1, 1, sweep=math.pi / 2)
        patch = make_patch(mesh, Family.U, [0], set(), 0)

        with pytest.raises(PartitionError) as exc_info:
            angle_partition(mesh, patch, 0.1, CutRegistry(), along="rungs")
        assert "irreducible angle violation" in str(exc_info.value)

    def test_size_error_names_patch(self, grid_8x12):
        """Test an unplaceable size cut names the patch by its lowest quad"""
        patch = make_patch(grid_8x12, Family.U, range(48, 96), set())
        registry = CutRegistry()
        registry.edges[Family.V] = set(range(grid_8x12.edge_count))

        with pytest.raises(PartitionError) as exc_info:
            size_partition(grid_8x12, patch, (50.0, 50.0, 50.0), registry)
        assert "patch at quad 48" in str(exc_info.value)
        assert "-1" not in str(exc_info.value)


class TestValidatePatch:
    """Test cases for splitting patches whose strips branch"""

    def test_branching_patch_split(self):
        """Test a middle row touching two rows below and one above is split into paths"""
        mesh = grid(4, 4)
        quads = [0, 1, 3, 4, 5, 6, 7, 8]
        registry = CutRegistry()
        patch = make_patch(mesh, Family.U, quads, set())

        assert check_patch(mesh, patch, set())
        pieces = validate_patch(mesh, patch, registry)
        cuts = registry.edges[Family.U]

        assert len(pieces) >= 2
        assert registry.cuts_of(Family.U, CutOrigin.BRANCH)
        assert sorted(q for p in pieces for q in p.quads) == quads
        for p in pieces:
            assert check_patch(mesh, p, cuts) == []

    def test_path_patch_untouched(self, small_grid):
        """Test a patch already shaped as a path needs no cut"""
        registry = CutRegistry()
        patch = make_patch(small_grid, Family.U, range(small_grid.quad_count), set())
        pieces = validate_patch(small_grid, patch, registry)

        assert [sorted(p.quads) for p in pieces] == [list(range(small_grid.quad_count))]
        assert registry.cuts == []
