"""
Strip tracing

A strip of family F is a maximal ladder of quads glued across their
transversal edges: its rails carry label F, its rungs the other label.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.config.constants import Family
from src.core.mesh.sdq_mesh import SDQMesh
from src.utils.logger import logger

Rung = Tuple[int, int]  # (left vertex, right vertex)


@dataclass(frozen=True)
class Strip:
    """
    Ordered ladder of quads

    rungs[i] is the directed transversal edge (left, right) before quads[i];
    an open strip has len(quads) + 1 rungs, a closed one len(quads).
    """
    family: Family
    quads: Tuple[int, ...]
    rungs: Tuple[Rung, ...]
    closed: bool = False
    id: int = 0

    @property
    def length(self) -> int:
        return len(self.quads)

    @property
    def left_rail(self) -> List[int]:
        return [r[0] for r in self.rungs]

    @property
    def right_rail(self) -> List[int]:
        return [r[1] for r in self.rungs]

    def rung_edges(self, mesh: SDQMesh) -> List[int]:
        return [mesh.edge_between(a, b) for a, b in self.rungs]

    def rail_edges(self, mesh: SDQMesh) -> Tuple[List[int], List[int]]:
        """Edge indices along the left and right rails"""
        rails = []
        for rail in (self.left_rail, self.right_rail):
            pairs = list(zip(rail, rail[1:]))
            if self.closed:
                pairs.append((rail[-1], rail[0]))
            rails.append([mesh.edge_between(a, b) for a, b in pairs])
        return rails[0], rails[1]

    def area(self, mesh: SDQMesh, positions: Optional[np.ndarray] = None) -> float:
        return sum(mesh.quad_area(q, positions) for q in self.quads)

    def flipped(self) -> "Strip":
        """Same strip with left and right rails swapped"""
        return Strip(
            self.family, self.quads, tuple((b, a) for a, b in self.rungs), self.closed, self.id
        )

    def rail_direction(self, mesh: SDQMesh, positions: Optional[np.ndarray] = None) -> np.ndarray:
        """Normalized average of unit rail edge vectors (walking along the strip)"""
        pos = mesh.vertices if positions is None else positions
        total = np.zeros(3)
        for rail in (self.left_rail, self.right_rail):
            for a, b in zip(rail, rail[1:]):
                d = pos[b] - pos[a]
                n = np.linalg.norm(d)
                if n > 0:
                    total += d / n
        n = np.linalg.norm(total)
        return total / n if n > 0 else total


@dataclass
class StripNetwork:
    """All strips of one family; every quad belongs to exactly one strip"""
    family: Family
    strips: List[Strip] = field(default_factory=list)
    quad_to_strip: Dict[int, int] = field(default_factory=dict)

    @property
    def strip_count(self) -> int:
        return len(self.strips)

    @property
    def closed_count(self) -> int:
        return sum(1 for s in self.strips if s.closed)

    def strip_of(self, quad: int) -> Strip:
        return self.strips[self.quad_to_strip[quad]]


def rung_local_index(mesh: SDQMesh, quad: int, family: Family) -> int:
    """Local index (0 or 1) of the first rung of a quad for a strip family"""
    e0 = mesh.quad_edges[quad][0]
    return 1 if mesh.label(e0) == family else 0


def opposite_rung(quad: Sequence[int], left: int, right: int) -> Rung:
    """
    Rung across the quad from (left, right), keeping the left side

    The opposite edge's vertex adjacent to `left` becomes the new left.
    """
    il, ir = quad.index(left), quad.index(right)
    if ir == (il + 1) % 4:
        return quad[(il - 1) % 4], quad[(ir + 1) % 4]
    return quad[(il + 1) % 4], quad[(ir - 1) % 4]


def _next_quad(mesh: SDQMesh, quad: int, rung: Rung) -> Optional[int]:
    e = mesh.edge_between(*rung)
    others = [q for q in mesh.edge_quads[e] if q != quad]
    return others[0] if others else None


def walk_ladder(
    mesh: SDQMesh,
    start: int,
    family: Family,
    allowed: Optional[Set[int]] = None,
    blocked_edges: Iterable[int] = (),
) -> Strip:
    """
    Trace the ladder through `start` across rungs

    Args:
        mesh: labeled mesh
        start: seed quad
        family: strip family (rails carry this label)
        allowed: restrict to these quads (patch sub-strips)
        blocked_edges: rungs that may not be crossed (cuts)

    Returns:
        Strip with quads ordered from one end to the other
    """
    blocked = set(blocked_edges)
    quad = mesh.quads[start]
    r = rung_local_index(mesh, start, family)
    entry: Rung = (quad[r], quad[r + 1])

    def step(q: int, rung: Rung) -> Optional[int]:
        e = mesh.edge_between(*rung)
        if e in blocked:
            return None
        nq = _next_quad(mesh, q, rung)
        if nq is None or (allowed is not None and nq not in allowed):
            return None
        return nq

    # forward from start through its exit rung
    forward_quads = [start]
    forward_rungs = [entry]
    exit_rung = opposite_rung(quad, *entry)
    q = start
    rung = exit_rung
    closed = False
    while True:
        nq = step(q, rung)
        if nq is None:
            forward_rungs.append(rung)
            break
        if nq == start:
            closed = True
            break
        forward_quads.append(nq)
        forward_rungs.append(rung)
        rung = opposite_rung(mesh.quads[nq], *rung)
        q = nq

    if closed:
        return Strip(family, tuple(forward_quads), tuple(forward_rungs), True)

    # backward from start through its entry rung
    back_quads: List[int] = []
    back_rungs: List[Rung] = []
    q = start
    rung = entry
    while True:
        nq = step(q, rung)
        if nq is None:
            break
        back_quads.append(nq)
        rung = opposite_rung(mesh.quads[nq], *rung)
        back_rungs.append(rung)
        q = nq

    quads = tuple(reversed(back_quads)) + tuple(forward_quads)
    rungs = tuple(reversed(back_rungs)) + tuple(forward_rungs)
    return Strip(family, quads, rungs, False)


def trace_strips(
    mesh: SDQMesh,
    family: Family,
    quads: Optional[Iterable[int]] = None,
    blocked_edges: Iterable[int] = (),
) -> StripNetwork:
    """
    Trace all maximal strips of a family

    Strips are indexed by the lowest quad they contain. With `quads` and
    `blocked_edges` the tracing is confined to a patch and stops at cut rungs.

    Returns:
        StripNetwork covering every (allowed) quad exactly once
    """
    allowed = set(range(mesh.quad_count)) if quads is None else set(quads)
    blocked = set(blocked_edges)
    network = StripNetwork(family=family)
    for q in sorted(allowed):
        if q in network.quad_to_strip:
            continue
        strip = walk_ladder(mesh, q, family, allowed, blocked)
        strip = Strip(strip.family, strip.quads, strip.rungs, strip.closed, len(network.strips))
        network.strips.append(strip)
        for sq in strip.quads:
            network.quad_to_strip[sq] = strip.id

    if quads is None:
        logger.debug(
            f"Traced {network.strip_count} {family.value} strips "
            f"({network.closed_count} closed)"
        )
    return network


def rail_edge_set(mesh: SDQMesh, network: StripNetwork) -> Set[int]:
    """Every rail edge of the network's strips"""
    edges: Set[int] = set()
    for strip in network.strips:
        left, right = strip.rail_edges(mesh)
        edges.update(left)
        edges.update(right)
    return edges


def rung_edge_set(mesh: SDQMesh, network: StripNetwork) -> Set[int]:
    """Every rung edge of the network's strips"""
    edges: Set[int] = set()
    for strip in network.strips:
        edges.update(strip.rung_edges(mesh))
    return edges


def shared_rail_edges(mesh: SDQMesh, a: Strip, b: Strip) -> Set[int]:
    """Rail edges common to two strips"""
    ea = set().union(*a.rail_edges(mesh))
    eb = set().union(*b.rail_edges(mesh))
    return ea & eb
