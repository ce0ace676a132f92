"""
Topological partitioning

Cuts each strip network along the separatrices of its singularities,
opens handles until every patch is a disk, and splits patches whose
strip adjacency branches.
"""
from typing import List, Optional, Set, Tuple

import networkx as nx

from src.config.constants import CutOrigin, Family, SingularityKind
from src.core.errors import PartitionError
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.partition.cuts import Cut, CutRegistry
from src.core.partition.patch import (
    Patch,
    boundary_vertices,
    cut_open_topology,
    is_strip_path,
    make_patch,
    quad_components,
    shared_rails,
    strip_graph,
    sub_strips,
)
from src.core.singularities.detector import Singularity, find_singularities
from src.core.singularities.separatrix import singularity_separatrices, straight_walk
from src.utils.logger import logger

MAX_VALIDATION_ROUNDS = 10000


def _split(mesh: SDQMesh, network: Family, quads, cuts: Set[int]) -> List[Patch]:
    return [make_patch(mesh, network, comp, cuts) for comp in quad_components(mesh, quads, cuts)]


def topological_partition(
    mesh: SDQMesh,
    network: Family,
    dq: int,
    registry: CutRegistry,
    singularities: Optional[List[Singularity]] = None,
) -> List[Patch]:
    """
    Cut a strip network along singularity separatrices

    D6 (and higher valence) singularities contribute the separatrices
    parallel to the network's strips. D2 singularities contribute the
    parallel separatrix in full plus the transversal one truncated dq edges
    from the singularity; the truncated run is registered as residual.

    Returns:
        Connected components of the network's quads as patches
    """
    sings = find_singularities(mesh) if singularities is None else singularities
    marker = "C_U" if network is Family.U else "C_V"

    for sing in sings:
        for sep in singularity_separatrices(mesh, sing):
            if sep.label == network:
                origin = (
                    CutOrigin.TOPOLOGICAL_D2_PARALLEL
                    if sing.kind is SingularityKind.D2
                    else CutOrigin.TOPOLOGICAL_D6
                )
                registry.reserve(
                    Cut(network, sep.edges, origin, singularity=sing.vertex), force=True
                )
                continue
            if sing.kind is not SingularityKind.D2 or dq == 0:
                continue
            if dq > sep.length:
                logger.warning(
                    f"⚠️  dq={dq} exceeds separatrix length {sep.length} at singularity "
                    f"{sing.vertex}; truncating at its {sep.terminal.value}"
                )
            edges = sep.edges[:dq]
            registry.add_residual(sing.vertex, marker, edges)
            registry.reserve(
                Cut(network, edges, CutOrigin.TOPOLOGICAL_D2_TRANSVERSAL, marker, sing.vertex),
                force=True,
            )

    cuts = set(registry.edges[network])
    patches = _split(mesh, network, range(mesh.quad_count), cuts)
    logger.info(
        f"Topological partition of {network.value}: {len(patches)} patches, "
        f"{len(cuts)} cut edges"
    )
    return patches


def _walk_in_patch(mesh: SDQMesh, start: int, edge: int, border: Set[int]) -> List[int]:
    edges, _, _ = straight_walk(mesh, start, edge, lambda w: w in border)
    return edges


def _find_handle_cut(
    mesh: SDQMesh,
    patch: Patch,
    cuts: Set[int],
    registry: CutRegistry,
) -> Optional[Cut]:
    network = patch.network
    quads = set(patch.quads)
    before = cut_open_topology(mesh, quads, cuts).score
    border = boundary_vertices(mesh, quads, cuts)
    # a closed patch has no border: any of its vertices may start the cut
    candidates = sorted(border) if border else patch.vertices(mesh)

    for v in candidates:
        inner = [
            e for e in mesh.vertex_edges[v]
            if e not in cuts and len(mesh.edge_quads[e]) == 2
            and all(q in quads for q in mesh.edge_quads[e])
        ]
        inner.sort(key=lambda e: (mesh.label(e) != network, e))
        for e in inner:
            path = _walk_in_patch(mesh, v, e, border)
            if registry.collides(network, path):
                continue
            after = cut_open_topology(mesh, quads, cuts | set(path)).score
            if after > before:
                origin = CutOrigin.HANDLE if mesh.label(e) == network else CutOrigin.HANDLE_TRANSVERSAL
                return Cut(network, tuple(path), origin)
    return None


def ensure_simply_connected(mesh: SDQMesh, patch: Patch, registry: CutRegistry) -> List[Patch]:
    """
    Open handles until every resulting patch is a disk

    Cuts start at the lowest patch-boundary vertex (any patch vertex when
    the patch is closed) whose straight walk (own label first, then
    transversal) raises the deficiency measure without touching the other
    network's seams.

    Raises:
        PartitionError: no admissible cut exists
    """
    cuts = set(registry.edges[patch.network])
    work = [patch]
    done: List[Patch] = []
    while work:
        current = work.pop(0)
        topo = cut_open_topology(mesh, current.quads, cuts)
        if topo.components > 1:
            work.extend(_split(mesh, current.network, current.quads, cuts))
            continue
        if topo.is_disk:
            done.append(current)
            continue
        cut = _find_handle_cut(mesh, current, cuts, registry)
        if cut is None:
            raise PartitionError(
                f"cannot open handle without overlap (patch at quad {current.min_quad})"
            )
        cut = registry.reserve(cut)
        cuts.update(cut.edges)
        logger.debug(f"Opened handle in {patch.network.value} with {len(cut.edges)} edges")
        work.extend(_split(mesh, current.network, current.quads, cuts))
    return sorted(done, key=lambda p: p.min_quad)


def _branch_candidates(graph) -> List[Tuple[int, int]]:
    """Strip pairs whose shared rails separate a branch, best first"""
    loops = sorted({u for u, _ in nx.selfloop_edges(graph)})
    if loops:
        return [(loops[0], loops[0])]
    simple = {v: sorted(set(graph.neighbors(v)) - {v}) for v in graph.nodes}
    branching = sorted(v for v, ns in simple.items() if len(ns) > 2)
    if not branching:
        # a cycle: every node has degree 2
        branching = sorted(v for v, ns in simple.items() if len(ns) == 2)
    pairs = []
    for b in branching:
        for n in sorted(simple[b], reverse=True):
            pairs.append((b, n))
    return pairs


def _branch_cut(mesh: SDQMesh, patch: Patch, cuts: Set[int], registry: CutRegistry) -> Cut:
    strips = sub_strips(mesh, patch.network, patch.quads, cuts)
    graph = strip_graph(mesh, patch.network, patch.quads, cuts, strips)
    for a, b in _branch_candidates(graph):
        rails = set(shared_rails(graph, a, b))
        if not rails or registry.collides(patch.network, rails):
            continue
        # keep the rail order of strip a
        left, right = strips[a].rail_edges(mesh)
        along = [e for e in left + right if e in rails]
        ordered = list(dict.fromkeys(along))
        return Cut(patch.network, tuple(ordered), CutOrigin.BRANCH)
    raise PartitionError(f"cannot split branching patch at quad {patch.min_quad} without overlap")


def validate_patch(mesh: SDQMesh, patch: Patch, registry: CutRegistry) -> List[Patch]:
    """
    Resolve a patch into disks with path-shaped strip graphs

    Branching strip graphs are split along the rails shared by the lowest
    branching strip and its highest-id neighbour, then re-validated.

    Returns:
        Valid patches, by lowest quad
    """
    cuts = set(registry.edges[patch.network])
    work = [patch]
    done: List[Patch] = []
    rounds = 0
    while work:
        rounds += 1
        if rounds > MAX_VALIDATION_ROUNDS:
            raise PartitionError(f"patch validation did not converge at quad {patch.min_quad}")
        current = work.pop(0)
        topo = cut_open_topology(mesh, current.quads, cuts)
        if topo.components > 1:
            work.extend(_split(mesh, current.network, current.quads, cuts))
            continue
        if not topo.is_disk:
            work.extend(ensure_simply_connected(mesh, current, registry))
            cuts = set(registry.edges[patch.network])
            continue
        graph = strip_graph(mesh, current.network, current.quads, cuts)
        if is_strip_path(graph):
            done.append(make_patch(mesh, current.network, current.quads, cuts))
            continue
        cut = registry.reserve(_branch_cut(mesh, current, cuts, registry))
        cuts.update(cut.edges)
        logger.debug(f"Split branching patch at quad {current.min_quad} ({len(cut.edges)} rail edges)")
        work.extend(_split(mesh, current.network, current.quads, cuts))
    return sorted(done, key=lambda p: p.min_quad)
