"""
Rigidifying ribs

Ribs are single-width walls standing on the inside of each shell wall,
running across that side's print paths: U-side ribs follow V-labeled
rail lines, V-side ribs follow U-labeled ones. Where ribs of the two
sides cross, the V ribs are interrupted and a screw point is placed.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from src.config.constants import EPS, Family
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.singularities.separatrix import opposite_edge
from src.models.config_models import ShellConfig
from src.utils.logger import logger

Interval = Tuple[float, float]


@dataclass(frozen=True)
class RailLine:
    """Maximal straight chain of equally labeled edges"""
    label: Family
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    closed: bool = False


@dataclass
class Rib:
    """
    Rib on one side's offset wall

    `arc` holds the arc-length position of each vertex along the offset
    polyline; `segments` are the printed intervals of [0, length].
    """
    side: Family
    index: int
    line: RailLine
    points: np.ndarray
    depth: float
    width: float
    arc: Tuple[float, ...] = ()
    segments: List[Interval] = field(default_factory=list)
    crossings: List[int] = field(default_factory=list)

    @property
    def length(self) -> float:
        return self.arc[-1] if self.arc else 0.0

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self.line.vertices

    def position(self, vertex: int) -> float:
        return self.arc[self.line.vertices.index(vertex)]

    def edge_span(self, a: int, b: int) -> Optional[Interval]:
        """Arc positions of an edge's endpoints in the order (a, b), or None"""
        vs = self.line.vertices
        if a not in vs or b not in vs:
            return None
        i, j = vs.index(a), vs.index(b)
        if abs(i - j) == 1:
            return self.arc[i], self.arc[j]
        if self.line.closed and {i, j} == {0, len(vs) - 1}:
            # closing edge: vertex 0 sits at the full length
            si = self.length if i == 0 else self.arc[i]
            sj = self.length if j == 0 else self.arc[j]
            return si, sj
        return None

    def is_printed(self, s: float) -> bool:
        return any(lo - EPS <= s <= hi + EPS for lo, hi in self.segments)

    def to_dict(self) -> dict:
        return {
            "side": self.side.value,
            "index": self.index,
            "vertices": list(self.line.vertices),
            "closed": self.line.closed,
            "depth": self.depth,
            "width": self.width,
            "length": round(self.length, 6),
            "segments": [[round(a, 6), round(b, 6)] for a, b in self.segments],
            "crossings": list(self.crossings),
        }


def rail_lines(mesh: SDQMesh, label: Family) -> List[RailLine]:
    """
    All maximal straight chains of edges carrying `label`

    Chains continue through regular interior vertices and end at boundary
    or singular vertices. Ordered by their lowest edge index.
    """
    seen = set()
    lines = []
    for start in mesh.edges_with_label(label):
        if start in seen:
            continue
        a, b = mesh.edges[start]

        def extend(v, e):
            verts, edges = [], []
            while True:
                nxt = opposite_edge(mesh, v, e)
                if nxt is None or nxt == start or mesh.label(nxt) != label:
                    return verts, edges, nxt == start
                w = mesh.other_vertex(nxt, v)
                edges.append(nxt)
                verts.append(w)
                v, e = w, nxt

        fwd_v, fwd_e, closed = extend(b, start)
        if closed:
            verts = (a, b) + tuple(fwd_v[:-1])
            edges = (start,) + tuple(fwd_e)
        else:
            back_v, back_e, _ = extend(a, start)
            verts = tuple(reversed(back_v)) + (a, b) + tuple(fwd_v)
            edges = tuple(reversed(back_e)) + (start,) + tuple(fwd_e)
        seen.update(edges)
        lines.append(RailLine(label, verts, edges, closed))
    return lines


def order_rail_lines(mesh: SDQMesh, lines: List[RailLine]) -> List[RailLine]:
    """
    Order lines across the strips they bound

    Lines are adjacent when a quad has an edge on each. Each component is
    walked depth-first from its lowest end line (a line with at most one
    neighbour, else its lowest line), neighbours by ascending index.
    """
    owner = {e: i for i, line in enumerate(lines) for e in line.edges}
    graph = nx.Graph()
    graph.add_nodes_from(range(len(lines)))
    for q, quad_edges in enumerate(mesh.quad_edges):
        for k in (0, 1):
            ea, eb = quad_edges[k], quad_edges[k + 2]
            if ea in owner and eb in owner and owner[ea] != owner[eb]:
                graph.add_edge(owner[ea], owner[eb])
    ordered = []
    for comp in sorted(nx.connected_components(graph), key=min):
        sub = nx.Graph()
        for v in sorted(comp):
            sub.add_node(v)
        for v in sorted(comp):
            for w in sorted(graph.neighbors(v)):
                sub.add_edge(v, w)
        ends = [v for v in sorted(comp) if sub.degree(v) <= 1]
        source = ends[0] if ends else min(comp)
        ordered.extend(nx.dfs_preorder_nodes(sub, source))
    return [lines[i] for i in ordered]


def _arc(points: np.ndarray, closed: bool) -> Tuple[float, ...]:
    steps = np.linalg.norm(np.diff(points, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(steps)])
    if closed:
        arc = np.append(arc, arc[-1] + np.linalg.norm(points[0] - points[-1]))
    return tuple(float(x) for x in arc)


def generate_ribs(
    mesh: SDQMesh,
    side: Family,
    config: ShellConfig,
    positions: Optional[np.ndarray] = None,
) -> List[Rib]:
    """
    Ribs of one side along every rib_spacing-th transversal rail line

    Args:
        mesh: labeled mesh
        side: wall the ribs stand on
        config: spacing, depth (t/2 - n) and width (n)
        positions: the side's offset vertices (default: base vertices)

    Returns:
        Ribs at line indices 0, spacing, 2*spacing, ...
    """
    pos = mesh.vertices if positions is None else positions
    lines = order_rail_lines(mesh, rail_lines(mesh, side.other))
    ribs = []
    for i in range(0, len(lines), config.rib_spacing):
        line = lines[i]
        points = pos[list(line.vertices)]
        arc = _arc(points, line.closed)
        ribs.append(Rib(
            side=side,
            index=i,
            line=line,
            points=points,
            depth=config.rib_depth,
            width=config.rib_width,
            arc=arc,
            segments=[(0.0, arc[-1])],
        ))
    logger.info(f"{side.value} side: {len(ribs)} ribs over {len(lines)} rail lines")
    return ribs


def _merge(intervals: List[Interval]) -> Tuple[List[Interval], bool]:
    merged: List[Interval] = []
    overlapped = False
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            overlapped = True
        else:
            merged.append((lo, hi))
    return merged, overlapped


def subtract_intervals(whole: Interval, holes: List[Interval]) -> List[Interval]:
    """Parts of `whole` outside the (merged) holes"""
    out = []
    cursor = whole[0]
    for lo, hi in holes:
        lo, hi = max(lo, whole[0]), min(hi, whole[1])
        if hi <= lo:
            continue
        if lo > cursor:
            out.append((cursor, lo))
        cursor = max(cursor, hi)
    if cursor < whole[1]:
        out.append((cursor, whole[1]))
    return out


def interlock_ribs(ribs_u: List[Rib], ribs_v: List[Rib], config: ShellConfig) -> List[Rib]:
    """
    Interrupt V ribs where U ribs cross them

    Each crossing removes (rib width + 2 * rib_gap) centred on it; U ribs
    stay continuous. Overlapping interruptions are merged with a warning.

    Returns:
        The V ribs, updated in place
    """
    half = config.rib_width / 2 + config.rib_gap
    u_vertices = {}
    for r in ribs_u:
        for v in r.vertices:
            u_vertices.setdefault(v, []).append(r.index)

    for rib in ribs_v:
        crossings = sorted({v for v in rib.vertices if v in u_vertices}, key=rib.position)
        rib.crossings = crossings
        holes = [(rib.position(v) - half, rib.position(v) + half) for v in crossings]
        merged, overlapped = _merge(holes)
        if overlapped:
            logger.warning(
                f"⚠️  V rib {rib.index}: crossings closer than {2 * half:.2f} mm, interruptions merged"
            )
        rib.segments = subtract_intervals((0.0, rib.length), merged)
    v_vertices = {v for r in ribs_v for v in r.vertices}
    for rib in ribs_u:
        rib.crossings = [v for v in rib.vertices if v in v_vertices]
    return ribs_v


@dataclass(frozen=True)
class ScrewPoint:
    """Fastening point at a rib crossing, on the mid-surface"""
    vertex: int
    point: Tuple[float, float, float]
    u_rib: int
    v_rib: int
    u_piece: Optional[int] = None
    v_piece: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "point": [round(x, 6) for x in self.point],
            "u_rib": self.u_rib,
            "v_rib": self.v_rib,
            "u_piece": self.u_piece,
            "v_piece": self.v_piece,
        }


def screw_points(
    mesh: SDQMesh,
    ribs_u: List[Rib],
    ribs_v: List[Rib],
    owners: Optional[Dict[Family, Dict[int, int]]] = None,
) -> List[ScrewPoint]:
    """
    One screw point per U/V rib crossing

    The point is the crossing's base vertex, midway between the walls. With
    `owners` (quad -> patch id per network) each point is attributed to the
    U and V pieces owning its lowest incident quad.
    """
    if not ribs_u or not ribs_v:
        logger.warning("⚠️  No rib crossings: pieces rely on seam contact only")
        return []
    points = []
    for ru in ribs_u:
        for rv in ribs_v:
            for v in sorted(set(ru.vertices) & set(rv.vertices)):
                u_piece = v_piece = None
                if owners:
                    q = min(mesh.vertex_quads[v])
                    u_piece = owners[Family.U].get(q)
                    v_piece = owners[Family.V].get(q)
                points.append(ScrewPoint(
                    v, tuple(float(x) for x in mesh.vertices[v]), ru.index, rv.index, u_piece, v_piece,
                ))
    points.sort(key=lambda p: (p.vertex, p.u_rib, p.v_rib))
    logger.info(f"{len(points)} screw points at rib crossings")
    return points
