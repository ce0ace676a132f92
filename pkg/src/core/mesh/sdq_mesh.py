"""
SDQ Mesh Data Model

Indexed quad mesh with derived edge tables, manifold/orientation checks and
the U/V edge labeling that makes it Strip-Decomposable.

Key Design Principles:
- Immutable after construction (safe to share between threads)
- Fully deterministic (edge indices follow first appearance in quad order)
- Labels are either validated (when supplied) or derived by validate_sdq
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config.constants import EPS, Family
from src.core.errors import GeometryError, MeshParserError, SDQValidationError
from src.utils.logger import logger

Edge = Tuple[int, int]


def edge_key(a: int, b: int) -> Edge:
    """Unordered vertex pair as a sorted tuple"""
    return (a, b) if a < b else (b, a)


class SDQMesh:
    """
    Quad mesh with consistent orientation and per-edge U/V labels

    Attributes:
        vertices: (n, 3) float array, millimeters
        quads: tuple of 4-tuples of vertex indices
        edges: sorted vertex pairs, indexed in order of first appearance
        edge_quads: incident quads per edge (1 on the boundary, 2 inside)
        quad_edges: edge index of local edge i (v_i -> v_i+1) per quad
        labels: Family per edge
    """

    def __init__(
        self,
        vertices: Sequence[Sequence[float]],
        quads: Sequence[Sequence[int]],
        labels: Optional[Sequence[Family]] = None,
    ):
        self.vertices = np.array(vertices, dtype=float).reshape(-1, 3)
        self.vertices.setflags(write=False)
        self.quads: Tuple[Tuple[int, int, int, int], ...] = tuple(
            tuple(int(i) for i in q) for q in quads
        )

        self.edges: List[Edge] = []
        self.edge_index: Dict[Edge, int] = {}
        self.edge_quads: List[List[int]] = []
        self.quad_edges: List[Tuple[int, int, int, int]] = []

        self._check_quads()
        self._build_edges()
        self._check_orientation()

        n = len(self.vertices)
        self.vertex_edges: List[List[int]] = [[] for _ in range(n)]
        self.vertex_quads: List[List[int]] = [[] for _ in range(n)]
        for e, (a, b) in enumerate(self.edges):
            self.vertex_edges[a].append(e)
            self.vertex_edges[b].append(e)
        for q, quad in enumerate(self.quads):
            for v in quad:
                self.vertex_quads[v].append(q)

        self.boundary_edge = [len(qs) == 1 for qs in self.edge_quads]
        self.boundary_vertex = [False] * n
        for e, (a, b) in enumerate(self.edges):
            if self.boundary_edge[e]:
                self.boundary_vertex[a] = True
                self.boundary_vertex[b] = True

        self._check_vertex_fans()

        self.labels: Tuple[Family, ...] = ()
        if labels is not None:
            self.labels = tuple(Family(x) for x in labels)
            check_labels(self, self.labels)

    # ------------------------------------------------------------------
    # Construction checks
    # ------------------------------------------------------------------

    def _check_quads(self):
        n = len(self.vertices)
        for i, quad in enumerate(self.quads):
            if len(quad) != 4:
                raise MeshParserError(f"non-quad face at index {i}")
            if len(set(quad)) != 4:
                raise MeshParserError(f"degenerate quad at index {i}: repeated vertex in {quad}")
            for v in quad:
                if not 0 <= v < n:
                    raise MeshParserError(f"quad {i} references missing vertex {v}")

    def _build_edges(self):
        for q, quad in enumerate(self.quads):
            local = []
            for i in range(4):
                key = edge_key(quad[i], quad[(i + 1) % 4])
                e = self.edge_index.get(key)
                if e is None:
                    e = len(self.edges)
                    self.edge_index[key] = e
                    self.edges.append(key)
                    self.edge_quads.append([])
                self.edge_quads[e].append(q)
                if len(self.edge_quads[e]) > 2:
                    raise MeshParserError(
                        f"non-manifold edge {key} shared by quads {self.edge_quads[e]}"
                    )
                local.append(e)
            self.quad_edges.append(tuple(local))

    def _check_orientation(self):
        seen: Dict[Edge, int] = {}
        for q, quad in enumerate(self.quads):
            for i in range(4):
                directed = (quad[i], quad[(i + 1) % 4])
                if directed in seen:
                    raise MeshParserError(
                        f"inconsistent orientation at edge {directed} between quads {seen[directed]} and {q}"
                    )
                seen[directed] = q

    def _check_vertex_fans(self):
        for v, quads in enumerate(self.vertex_quads):
            if not quads:
                raise MeshParserError(f"unreferenced vertex {v}")
            # quads around v are connected through edges incident to v
            parent = {q: q for q in quads}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for e in self.vertex_edges[v]:
                qs = self.edge_quads[e]
                if len(qs) == 2:
                    parent[find(qs[0])] = find(qs[1])
            roots = {find(q) for q in quads}
            boundary_count = sum(1 for e in self.vertex_edges[v] if self.boundary_edge[e])
            if len(roots) != 1 or boundary_count not in (0, 2):
                raise MeshParserError(f"non-manifold vertex {v}")

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def quad_count(self) -> int:
        return len(self.quads)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def valence(self, v: int) -> int:
        """Number of edges incident to a vertex"""
        return len(self.vertex_edges[v])

    def is_interior(self, v: int) -> bool:
        return not self.boundary_vertex[v]

    def is_singular(self, v: int) -> bool:
        """Interior vertex with valence other than 4"""
        return self.is_interior(v) and self.valence(v) != 4

    def edge_between(self, a: int, b: int) -> Optional[int]:
        return self.edge_index.get(edge_key(a, b))

    def other_vertex(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if v == a else a

    def label(self, e: int) -> Family:
        return self.labels[e]

    def edges_with_label(self, family: Family) -> List[int]:
        return [e for e, f in enumerate(self.labels) if f == family]

    def quad_points(self, q: int, positions: Optional[np.ndarray] = None) -> np.ndarray:
        """Corner positions of a quad (4, 3)"""
        pos = self.vertices if positions is None else positions
        return pos[list(self.quads[q])]

    def quad_area(self, q: int, positions: Optional[np.ndarray] = None) -> float:
        """Sum of the two triangle areas (split along v0-v2)"""
        p = self.quad_points(q, positions)
        a1 = np.linalg.norm(np.cross(p[1] - p[0], p[2] - p[0])) / 2
        a2 = np.linalg.norm(np.cross(p[2] - p[0], p[3] - p[0])) / 2
        return float(a1 + a2)

    def edge_length(self, e: int, positions: Optional[np.ndarray] = None) -> float:
        pos = self.vertices if positions is None else positions
        a, b = self.edges[e]
        return float(np.linalg.norm(pos[b] - pos[a]))

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.quad_count

    def with_vertices(self, vertices: np.ndarray) -> "SDQMesh":
        """Same connectivity and labels at new positions"""
        return SDQMesh(vertices, self.quads, self.labels or None)

    def summary(self) -> dict:
        """Counts for logs and analysis output"""
        return {
            "vertices": self.vertex_count,
            "quads": self.quad_count,
            "edges": self.edge_count,
            "boundary_edges": sum(self.boundary_edge),
            "euler_characteristic": self.euler_characteristic(),
        }


def check_labels(mesh: SDQMesh, labels: Sequence[Family]) -> None:
    """
    Verify supplied labels: opposite edges equal, adjacent edges different

    Raises:
        SDQValidationError: on the first offending quad
    """
    if len(labels) != mesh.edge_count:
        raise SDQValidationError(
            f"edge labels cover {len(labels)} edges, mesh has {mesh.edge_count}"
        )
    for q, (e0, e1, e2, e3) in enumerate(mesh.quad_edges):
        if labels[e0] != labels[e2] or labels[e1] != labels[e3] or labels[e0] == labels[e1]:
            raise SDQValidationError(f"edge labels inconsistent at quad {q}")


def validate_sdq(mesh: SDQMesh) -> Tuple[Family, ...]:
    """
    2-color the opposite-edge equivalence classes into U/V

    The class containing the lowest-index edge (processed first in each
    connected constraint component) is U.

    Returns:
        Family per edge index

    Raises:
        SDQValidationError: "not strip-decomposable" when a class needs both colors
    """
    parent = list(range(mesh.edge_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    for e0, e1, e2, e3 in mesh.quad_edges:
        union(e0, e2)
        union(e1, e3)

    # adjacent edges of a quad belong to differently colored classes
    differ: Dict[int, set] = {}
    for q, (e0, e1, e2, e3) in enumerate(mesh.quad_edges):
        a, b = find(e0), find(e1)
        if a == b:
            raise SDQValidationError(
                f"not strip-decomposable: quad {q} has adjacent edges in one class"
            )
        differ.setdefault(a, set()).add(b)
        differ.setdefault(b, set()).add(a)

    color: Dict[int, Family] = {}
    roots = sorted({find(e) for e in range(mesh.edge_count)})
    for root in roots:
        if root in color:
            continue
        color[root] = Family.U
        stack = [root]
        while stack:
            c = stack.pop()
            for d in sorted(differ.get(c, ())):
                want = color[c].other
                if d not in color:
                    color[d] = want
                    stack.append(d)
                elif color[d] != want:
                    raise SDQValidationError(
                        f"not strip-decomposable: edge classes {c} and {d} need the same color"
                    )

    labels = tuple(color[find(e)] for e in range(mesh.edge_count))
    logger.debug(f"Labeled {labels.count(Family.U)} U edges, {labels.count(Family.V)} V edges")
    return labels


def build_mesh(
    vertices: Sequence[Sequence[float]],
    quads: Sequence[Sequence[int]],
    labels: Optional[Sequence[Family]] = None,
) -> SDQMesh:
    """
    Construct a validated SDQ mesh, deriving labels when none are supplied

    Raises:
        MeshParserError: topology problems
        SDQValidationError: labeling problems
    """
    mesh = SDQMesh(vertices, quads, labels)
    if labels is None:
        mesh.labels = validate_sdq(mesh)
    return mesh


def quad_normal(mesh: SDQMesh, quad: int, positions: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Unit quad normal: average of the two triangle normals (split along v0-v2)

    Orientation follows the quad winding.

    Raises:
        GeometryError: both triangles have zero area
    """
    p = mesh.quad_points(quad, positions)
    total = np.zeros(3)
    for tri in ((0, 1, 2), (0, 2, 3)):
        n = np.cross(p[tri[1]] - p[tri[0]], p[tri[2]] - p[tri[0]])
        length = np.linalg.norm(n)
        if length > EPS:
            total += n / length
    norm = np.linalg.norm(total)
    if norm <= EPS:
        raise GeometryError(f"degenerate quad {quad}: no defined normal")
    return total / norm
