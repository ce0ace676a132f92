"""
Separatrix tracing

Straight combinatorial edge walks: at every regular (interior, valence-4)
vertex the walk leaves by the edge opposite the entering one in the vertex
fan. Walks stop at boundary vertices, singular vertices, or when the
starting directed edge comes round again.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

from src.config.constants import Family, Terminal
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.singularities.detector import Singularity, find_singularities
from src.utils.logger import logger


@dataclass(frozen=True)
class Separatrix:
    """Monochromatic straight edge path leaving a singularity"""
    origin: int                      # vertex index of the origin
    edges: Tuple[int, ...]
    vertices: Tuple[int, ...]        # len(edges) + 1 vertices along the walk
    label: Family
    terminal: Terminal

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def end_vertex(self) -> int:
        return self.vertices[-1]

    def undirected_key(self) -> Tuple[int, ...]:
        """Canonical key shared by a path and its reverse"""
        return min(self.edges, tuple(reversed(self.edges)))

    def to_dict(self) -> dict:
        return {
            "origin": self.origin,
            "edges": list(self.edges),
            "vertices": list(self.vertices),
            "label": self.label.value,
            "terminal": self.terminal.value,
        }


def opposite_edge(mesh: SDQMesh, vertex: int, edge: int) -> Optional[int]:
    """
    Edge leaving `vertex` opposite `edge` in its fan

    Defined only at vertices with four incident quads and four edges:
    the opposite edge shares no quad with `edge`.
    """
    if mesh.valence(vertex) != 4 or len(mesh.vertex_quads[vertex]) != 4:
        return None
    near = set(mesh.edge_quads[edge])
    for e in mesh.vertex_edges[vertex]:
        if e == edge:
            continue
        if not near.intersection(mesh.edge_quads[e]):
            return e
    return None


def straight_walk(
    mesh: SDQMesh,
    start: int,
    first_edge: int,
    stop_at: Callable[[int], bool],
) -> Tuple[List[int], List[int], Terminal]:
    """
    Walk straight from `start` along `first_edge`

    Args:
        mesh: labeled mesh
        start: start vertex (an endpoint of first_edge)
        first_edge: first edge of the walk
        stop_at: predicate ending the walk at a vertex (besides loops)

    Returns:
        (edges, vertices, terminal)
    """
    edges = [first_edge]
    vertices = [start]
    start_directed = (start, first_edge)
    v, e = start, first_edge
    while True:
        w = mesh.other_vertex(e, v)
        vertices.append(w)
        if mesh.boundary_vertex[w]:
            return edges, vertices, Terminal.BOUNDARY
        if mesh.is_singular(w):
            return edges, vertices, Terminal.SINGULARITY
        if stop_at(w):
            return edges, vertices, Terminal.BOUNDARY
        nxt = opposite_edge(mesh, w, e)
        if nxt is None:
            return edges, vertices, Terminal.BOUNDARY
        if (w, nxt) == start_directed:
            return edges, vertices, Terminal.LOOP
        if len(edges) > mesh.edge_count:
            # unreachable for a consistent mesh; guards against corrupt input
            logger.error(f"straight walk from {start} did not terminate")
            return edges, vertices, Terminal.LOOP
        edges.append(nxt)
        v, e = w, nxt


def trace_separatrix(
    mesh: SDQMesh,
    origin: Union[Singularity, int],
    first_edge: int,
) -> Separatrix:
    """
    Trace the straight walk leaving `origin` along `first_edge`

    Raises:
        ValueError: first_edge is not incident to the origin vertex
    """
    vertex = origin.vertex if isinstance(origin, Singularity) else int(origin)
    if vertex not in mesh.edges[first_edge]:
        raise ValueError(f"edge {first_edge} is not incident to vertex {vertex}")
    edges, vertices, terminal = straight_walk(mesh, vertex, first_edge, lambda w: False)
    return Separatrix(
        origin=vertex,
        edges=tuple(edges),
        vertices=tuple(vertices),
        label=mesh.label(first_edge),
        terminal=terminal,
    )


def singularity_separatrices(mesh: SDQMesh, sing: Singularity) -> List[Separatrix]:
    """Separatrices along every outgoing edge of one singularity, by edge index"""
    return [trace_separatrix(mesh, sing, e) for e in sorted(mesh.vertex_edges[sing.vertex])]


def separatrix_census(mesh: SDQMesh, singularities: Optional[List[Singularity]] = None) -> List[Separatrix]:
    """
    All separatrices from all singularities

    Two traces with the same undirected edge path (a separatrix joining two
    singularities traced from both ends) are kept once, from the lower vertex.
    """
    sings = find_singularities(mesh) if singularities is None else singularities
    seen = set()
    census = []
    for sing in sings:
        for sep in singularity_separatrices(mesh, sing):
            key = sep.undirected_key()
            if key in seen:
                continue
            seen.add(key)
            census.append(sep)
    logger.info(f"Separatrix census: {len(census)} separatrices from {len(sings)} singularities")
    return census
