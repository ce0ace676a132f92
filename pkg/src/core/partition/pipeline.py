"""
Partition pipeline

Runs topological partitioning on both strip networks, opens handles,
resolves branching patches, then size and angle partitioning per patch
until no stage adds a cut.
"""
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from src.config.constants import ANGLE_EPS, EPS, CutOrigin, Family
from src.core.errors import PartitionError
from src.core.mesh.mesh_io import mesh_from_dict, mesh_to_dict
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.partition.cuts import CutRegistry
from src.core.partition.geometric import (
    angle_partition,
    angle_variation,
    patch_extents,
    size_partition,
)
from src.core.partition.patch import Patch, check_patch, make_patch, quad_components, transversal_strips
from src.core.partition.topological import (
    ensure_simply_connected,
    topological_partition,
    validate_patch,
)
from src.core.singularities.detector import Singularity, find_singularities
from src.core.singularities.separatrix import Separatrix, separatrix_census
from src.models.config_models import PartitionConfig
from src.utils.logger import logger

MAX_FIXPOINT_ROUNDS = 100
NETWORKS = (Family.U, Family.V)


@dataclass
class PartitionResult:
    """Patches of both networks with the registry that produced them"""
    mesh: SDQMesh
    config: PartitionConfig
    patches: Dict[Family, List[Patch]]
    registry: CutRegistry
    singularities: List[Singularity] = field(default_factory=list)
    separatrices: List[Separatrix] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def patch_of(self, network: Family) -> Dict[int, int]:
        """Patch id owning each quad"""
        return {q: p.id for p in self.patches[network] for q in p.quads}

    def census(self) -> dict:
        cuts = self.registry.cuts
        return {
            "pieces_u": len(self.patches[Family.U]),
            "pieces_v": len(self.patches[Family.V]),
            "geometric_cuts": self.registry.geometric_cut_count,
            "cuts_by_origin": {
                o.value: sum(1 for c in cuts if c.origin is o)
                for o in CutOrigin
                if any(c.origin is o for c in cuts)
            },
            "singularities": len(self.singularities),
            "residual_edges": sorted(self.registry.residual_edges),
        }

    def assembly_graph(self) -> nx.Graph:
        """Bipartite contact graph: U piece -- V piece when they share a quad"""
        graph = nx.Graph()
        for network in NETWORKS:
            graph.add_nodes_from((network.value, p.id) for p in self.patches[network])
        owner_u = self.patch_of(Family.U)
        owner_v = self.patch_of(Family.V)
        for q in range(self.mesh.quad_count):
            graph.add_edge(("U", owner_u[q]), ("V", owner_v[q]))
        return graph

    def is_assembly_connected(self) -> bool:
        graph = self.assembly_graph()
        return graph.number_of_nodes() > 0 and nx.is_connected(graph)

    def assembly_sequence(self) -> List[Tuple[str, int]]:
        """
        Alternating U/V assembly order

        Breadth-first over the contact graph from U piece 0; at each step the
        next piece of the opposite side is taken when one is available, so
        every new piece attaches to already placed ones.
        """
        graph = self.assembly_graph()
        if not graph:
            return []
        seen = set()
        placed: List[Tuple[str, int]] = []
        frontier = {"U": deque(), "V": deque()}

        def take(node):
            seen.add(node)
            placed.append(node)
            for nb in sorted(graph.neighbors(node)):
                if nb not in seen:
                    frontier[nb[0]].append(nb)

        def pop(side):
            queue = frontier[side]
            while queue and queue[0] in seen:
                queue.popleft()
            return queue.popleft() if queue else None

        take(("U", 0))
        while len(placed) < graph.number_of_nodes():
            side = "V" if placed[-1][0] == "U" else "U"
            node = pop(side) or pop("U" if side == "V" else "V")
            if node is None:
                # disconnected assembly: restart from the lowest unplaced piece
                node = min(n for n in graph.nodes if n not in seen)
            take(node)
        return placed

    def violations(self) -> List[str]:
        """Final-patch constraint violations (empty on success)"""
        issues = list(self.registry.check(self.config.dq))
        bounds = sorted(self.config.usable_bbox, reverse=True)
        for network in NETWORKS:
            cuts = self.registry.edges[network]
            covered = sorted(q for p in self.patches[network] for q in p.quads)
            if covered != list(range(self.mesh.quad_count)):
                issues.append(f"{network.value} patches do not cover every quad exactly once")
            for p in self.patches[network]:
                issues.extend(check_patch(self.mesh, p, cuts))
                for (_, ext), bound in zip(patch_extents(self.mesh, p), bounds):
                    if ext > bound + EPS:
                        issues.append(f"{network.value} patch {p.id} extent {ext:.3f} > {bound}")
                for s in transversal_strips(self.mesh, p, cuts):
                    a = angle_variation(s, self.mesh, along="rails")
                    if a > self.config.gamma + ANGLE_EPS:
                        issues.append(
                            f"{network.value} patch {p.id} transversal strip turns {a:.4f} rad"
                        )
        if not self.is_assembly_connected():
            issues.append("assembly contact graph is disconnected")
        return issues

    def to_dict(self) -> dict:
        return {
            "mesh": mesh_to_dict(self.mesh),
            "config": {
                "gamma": self.config.gamma,
                "bbox": list(self.config.bbox),
                "dq": self.config.dq,
                "support_allowance": self.config.support_allowance,
            },
            "singularities": [s.to_dict() for s in self.singularities],
            "separatrices": [s.to_dict() for s in self.separatrices],
            "patches": {
                network.value: [p.to_dict() for p in self.patches[network]]
                for network in NETWORKS
            },
            "cuts": [c.to_dict() for c in self.registry.cuts],
            "registry": self.registry.to_dict(),
            "census": self.census(),
            "assembly_sequence": [f"{side}{pid}" for side, pid in self.assembly_sequence()],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PartitionResult":
        """Rebuild a partition from its artifact"""
        mesh = mesh_from_dict(data["mesh"])
        config = PartitionConfig(**data["config"])
        registry = CutRegistry.from_dict(data["registry"], data.get("cuts", []))
        patches = {}
        for network in NETWORKS:
            cuts = registry.edges[network]
            items = []
            for entry in data["patches"][network.value]:
                p = make_patch(mesh, network, entry["quads"], cuts, entry["id"])
                p.boundary_cuts = list(entry.get("boundary_cuts", []))
                items.append(p)
            patches[network] = items
        sings = find_singularities(mesh)
        return cls(
            mesh=mesh,
            config=config,
            patches=patches,
            registry=registry,
            singularities=sings,
            separatrices=separatrix_census(mesh, sings),
            warnings=list(data.get("warnings", [])),
        )


def _network_fixpoint(
    mesh: SDQMesh,
    network: Family,
    patches: List[Patch],
    config: PartitionConfig,
    registry: CutRegistry,
    positions: Optional[np.ndarray],
) -> List[Patch]:
    for round_ in range(1, MAX_FIXPOINT_ROUNDS + 1):
        before = len(registry.cuts)
        out: List[Patch] = []
        for p in patches:
            for sized in size_partition(mesh, p, config.usable_bbox, registry, positions):
                for angled in angle_partition(mesh, sized, config.gamma, registry, positions):
                    out.extend(validate_patch(mesh, angled, registry))
        patches = sorted(out, key=lambda p: p.min_quad)
        if len(registry.cuts) == before:
            logger.debug(f"{network.value} geometric partition stable after {round_} rounds")
            return patches
    raise PartitionError(f"{network.value} partition did not reach a fixpoint")


def _boundary_cuts(mesh: SDQMesh, patch: Patch, registry: CutRegistry) -> List[int]:
    edges = {e for q in patch.quads for e in mesh.quad_edges[q]}
    return [c.id for c in registry.cuts_of(patch.network) if edges.intersection(c.edges)]


def partition_pipeline(
    mesh: SDQMesh,
    config: Optional[PartitionConfig] = None,
    positions: Optional[np.ndarray] = None,
) -> PartitionResult:
    """
    Partition both strip networks into printable patches

    Args:
        mesh: validated SDQ mesh
        config: gamma, bbox and dq
        positions: vertex positions for geometric checks (default mesh.vertices)

    Returns:
        PartitionResult with patch ids assigned by lowest quad per network
    """
    config = config or PartitionConfig()
    logger.info("=" * 60)
    logger.info("PARTITIONING")
    logger.info("=" * 60)

    sings = find_singularities(mesh)
    census = separatrix_census(mesh, sings)
    registry = CutRegistry()
    warnings: List[str] = []

    # Step 1: separatrix cuts on both networks before any other cut
    staged: Dict[Family, List[Patch]] = {}
    for network in NETWORKS:
        staged[network] = topological_partition(mesh, network, config.dq, registry, sings)
    overlap = registry.overlap() - registry.residual_edges
    if overlap:
        warnings.append(f"topological cuts overlap on {len(overlap)} edges outside D2 residuals")

    # Step 2: handles and branching strip graphs
    for network in NETWORKS:
        valid: List[Patch] = []
        for p in staged[network]:
            for disk in ensure_simply_connected(mesh, p, registry):
                valid.extend(validate_patch(mesh, disk, registry))
        staged[network] = valid
        logger.info(f"✅ {network.value}: {len(valid)} topologically valid patches")

    # Step 3: size and angle cuts to a fixpoint
    for network in NETWORKS:
        staged[network] = _network_fixpoint(mesh, network, staged[network], config, registry, positions)

    # Final ids from the global components of each network's cut set
    patches: Dict[Family, List[Patch]] = {}
    for network in NETWORKS:
        cuts = registry.edges[network]
        comps = quad_components(mesh, range(mesh.quad_count), cuts)
        items = []
        for i, comp in enumerate(comps):
            p = make_patch(mesh, network, comp, cuts, i)
            p.boundary_cuts = _boundary_cuts(mesh, p, registry)
            items.append(p)
        patches[network] = items

    result = PartitionResult(
        mesh=mesh,
        config=config,
        patches=patches,
        registry=registry,
        singularities=sings,
        separatrices=census,
        warnings=warnings,
    )
    c = result.census()
    logger.info(
        f"✅ Partition: {c['pieces_u']} U pieces, {c['pieces_v']} V pieces, "
        f"{c['geometric_cuts']} geometric cuts"
    )
    if not result.is_assembly_connected():
        msg = "assembly contact graph is disconnected"
        logger.warning(f"⚠️  {msg}")
        result.warnings.append(msg)
    return result
