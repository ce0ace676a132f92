"""
Patches

A patch is a connected set of quads of one strip network, bounded by cut
edges and the mesh boundary. This module computes the cut-open topology
of a quad set (Euler characteristic, boundary loops), the patch's own
strip adjacency graph and its print order.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from src.config.constants import Family
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.mesh.strips import Strip, trace_strips


@dataclass
class Patch:
    """Connected quads of one network with their sub-strips in print order"""
    network: Family
    quads: FrozenSet[int]
    strips: List[Strip] = field(default_factory=list)
    boundary_cuts: List[int] = field(default_factory=list)
    id: int = -1

    @property
    def min_quad(self) -> int:
        return min(self.quads)

    @property
    def ref(self) -> str:
        """Final id once assigned, the lowest quad before that"""
        return str(self.id) if self.id >= 0 else f"at quad {self.min_quad}"

    def vertices(self, mesh: SDQMesh) -> List[int]:
        return sorted({v for q in self.quads for v in mesh.quads[q]})

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "network": self.network.value,
            "quads": sorted(self.quads),
            "print_order": [list(s.quads) for s in self.strips],
            "boundary_cuts": list(self.boundary_cuts),
        }


# ----------------------------------------------------------------------
# Cut-open topology
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PatchTopology:
    """Counts of the quad set cut open along the cut edges"""
    vertices: int
    edges: int
    faces: int
    boundary_loops: int
    components: int

    @property
    def euler_characteristic(self) -> int:
        return self.vertices - self.edges + self.faces

    @property
    def is_disk(self) -> bool:
        return self.components == 1 and self.euler_characteristic == 1

    @property
    def score(self) -> Tuple[int, int]:
        """Deficiency measure; a handle cut must increase it"""
        return self.euler_characteristic, self.boundary_loops


def _inside(mesh: SDQMesh, e: int, quads: Set[int]) -> bool:
    qs = mesh.edge_quads[e]
    return len(qs) == 2 and qs[0] in quads and qs[1] in quads


def cut_open_topology(mesh: SDQMesh, quads: Iterable[int], cut_edges: Iterable[int]) -> PatchTopology:
    """
    Topology of a quad set after cutting it open

    Quad corners are glued across every shared edge that is not cut; the
    glued corners are the vertices of the cut-open complex.
    """
    qset = set(quads)
    cuts = set(cut_edges)
    parent: Dict[Tuple[int, int], Tuple[int, int]] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    edge_set: Set[int] = set()
    for q in qset:
        for v in mesh.quads[q]:
            find((q, v))
        edge_set.update(mesh.quad_edges[q])

    interior = 0
    copies: List[Tuple[int, int]] = []   # (quad, edge) sides of boundary edge copies
    for e in sorted(edge_set):
        a, b = mesh.edges[e]
        inside = _inside(mesh, e, qset)
        if inside and e not in cuts:
            q1, q2 = mesh.edge_quads[e]
            union((q1, a), (q2, a))
            union((q1, b), (q2, b))
            interior += 1
        else:
            copies.extend((q, e) for q in mesh.edge_quads[e] if q in qset)

    loops = nx.Graph()
    for q, e in copies:
        a, b = mesh.edges[e]
        loops.add_edge(find((q, a)), find((q, b)), key=(q, e))

    faces = nx.Graph()
    faces.add_nodes_from(qset)
    for e in edge_set:
        if e not in cuts and _inside(mesh, e, qset):
            faces.add_edge(*mesh.edge_quads[e])

    return PatchTopology(
        vertices=len({find(x) for x in list(parent)}),
        edges=interior + len(copies),
        faces=len(qset),
        boundary_loops=nx.number_connected_components(loops) if copies else 0,
        components=nx.number_connected_components(faces) if qset else 0,
    )


def quad_components(mesh: SDQMesh, quads: Iterable[int], cut_edges: Iterable[int]) -> List[List[int]]:
    """Connected components of quads glued across non-cut edges, by lowest quad"""
    qset = set(quads)
    cuts = set(cut_edges)
    graph = nx.Graph()
    graph.add_nodes_from(qset)
    for q in qset:
        for e in mesh.quad_edges[q]:
            if e in cuts:
                continue
            for r in mesh.edge_quads[e]:
                if r != q and r in qset:
                    graph.add_edge(q, r)
    return sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])


def boundary_vertices(mesh: SDQMesh, quads: Iterable[int], cut_edges: Iterable[int]) -> Set[int]:
    """
    Vertices on the boundary of a patch

    A vertex is inside a patch when it is an interior mesh vertex, all its
    quads lie in the patch and none of its edges is cut.
    """
    qset = set(quads)
    cuts = set(cut_edges)
    out = set()
    for q in qset:
        for v in mesh.quads[q]:
            if v in out:
                continue
            if (mesh.boundary_vertex[v]
                    or any(r not in qset for r in mesh.vertex_quads[v])
                    or any(e in cuts for e in mesh.vertex_edges[v])):
                out.add(v)
    return out


# ----------------------------------------------------------------------
# Strip adjacency and print order
# ----------------------------------------------------------------------

def sub_strips(mesh: SDQMesh, family: Family, quads: Iterable[int], cut_edges: Iterable[int]) -> List[Strip]:
    """Strips of `family` restricted to the quads, broken at cut rungs"""
    return trace_strips(mesh, family, quads=quads, blocked_edges=cut_edges).strips


def strip_graph(
    mesh: SDQMesh,
    network: Family,
    quads: Iterable[int],
    cut_edges: Iterable[int],
    strips: Optional[List[Strip]] = None,
) -> nx.MultiGraph:
    """
    Adjacency of the network's sub-strips across shared, uncut rails

    Nodes are strip ids; each shared rail edge adds one graph edge keyed by
    the mesh edge, so self-loops mark strips adjacent to themselves.
    """
    qset = set(quads)
    cuts = set(cut_edges)
    if strips is None:
        strips = sub_strips(mesh, network, qset, cuts)
    owner = {q: s.id for s in strips for q in s.quads}
    graph = nx.MultiGraph()
    graph.add_nodes_from(s.id for s in strips)
    rails = {e for q in qset for e in mesh.quad_edges[q] if mesh.label(e) == network}
    for e in sorted(rails):
        if e in cuts or not _inside(mesh, e, qset):
            continue
        q1, q2 = mesh.edge_quads[e]
        graph.add_edge(owner[q1], owner[q2], key=e)
    return graph


def shared_rails(graph: nx.MultiGraph, a: int, b: int) -> List[int]:
    """Mesh edges joining two strips in the adjacency graph"""
    if not graph.has_edge(a, b):
        return []
    return sorted(graph[a][b])


def is_strip_path(graph: nx.MultiGraph) -> bool:
    """True when the strip adjacency graph is a simple path"""
    n = graph.number_of_nodes()
    if n == 0:
        return False
    if nx.number_of_selfloops(graph) > 0:
        return False
    simple = nx.Graph(graph)
    if not nx.is_connected(simple):
        return False
    return simple.number_of_edges() == n - 1 and max(d for _, d in simple.degree()) <= 2


def print_order(graph: nx.MultiGraph) -> Optional[List[int]]:
    """Strip ids along the path from its lowest end, or None when not a path"""
    if not is_strip_path(graph):
        return None
    simple = nx.Graph(graph)
    if simple.number_of_nodes() == 1:
        return list(simple.nodes)
    start = min(v for v, d in simple.degree() if d == 1)
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = [w for w in simple.neighbors(cur) if w != prev]
        if not nxt:
            return order
        prev, cur = cur, nxt[0]
        order.append(cur)


def _orient_stack(strips: List[Strip]) -> List[Strip]:
    """Flip strips so each left rail meets the previous strip's right rail"""
    if len(strips) < 2:
        return list(strips)
    out = list(strips)
    first, second = out[0], out[1]
    nxt = set(second.left_rail) | set(second.right_rail)
    if len(set(first.left_rail) & nxt) > len(set(first.right_rail) & nxt):
        out[0] = first.flipped()
    for k in range(1, len(out)):
        prev_right = set(out[k - 1].right_rail)
        cur = out[k]
        if len(set(cur.right_rail) & prev_right) > len(set(cur.left_rail) & prev_right):
            out[k] = cur.flipped()
    return out


def make_patch(
    mesh: SDQMesh,
    network: Family,
    quads: Iterable[int],
    cut_edges: Iterable[int],
    patch_id: int = -1,
) -> Patch:
    """
    Build a patch with its sub-strips

    When the strip graph is a path the strips are stored in print order and
    oriented as a stack; otherwise in id order.
    """
    qset = frozenset(quads)
    cuts = set(cut_edges)
    strips = sub_strips(mesh, network, qset, cuts)
    order = print_order(strip_graph(mesh, network, qset, cuts, strips))
    if order is not None:
        by_id = {s.id: s for s in strips}
        strips = _orient_stack([by_id[i] for i in order])
    return Patch(network=network, quads=qset, strips=strips, id=patch_id)


def transversal_strips(mesh: SDQMesh, patch: Patch, cut_edges: Iterable[int]) -> List[Strip]:
    """Strips of the other family inside a patch"""
    return sub_strips(mesh, patch.network.other, patch.quads, cut_edges)


def check_patch(mesh: SDQMesh, patch: Patch, cut_edges: Iterable[int]) -> List[str]:
    """
    Topological patch checks

    Returns:
        Violations (empty when the patch is a disk with a path strip graph)
    """
    cuts = set(cut_edges)
    issues = []
    topo = cut_open_topology(mesh, patch.quads, cuts)
    if topo.components != 1:
        issues.append(f"patch {patch.id} has {topo.components} components")
    elif topo.euler_characteristic != 1:
        issues.append(
            f"patch {patch.id} not simply connected (V-E+F = {topo.euler_characteristic})"
        )
    if not is_strip_path(strip_graph(mesh, patch.network, patch.quads, cuts)):
        issues.append(f"patch {patch.id} strip graph is not a path")
    return issues
