"""
Geometric partitioning

Size cuts keep every patch inside the printer's reachable box (PCA
extents), angle cuts bound the total rotation of the print direction
along each transversal strip. Cuts are straight edge walks through a
chosen rung, interrupted at the patch boundary, so patches are
partitioned independently.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config.constants import ANGLE_EPS, EPS, CutOrigin, Family, Terminal
from src.core.errors import GeometryError, PartitionError
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.mesh.strips import Strip
from src.core.partition.cuts import Cut, CutRegistry
from src.core.partition.patch import (
    Patch,
    boundary_vertices,
    quad_components,
    transversal_strips,
)
from src.core.partition.topological import validate_patch
from src.core.singularities.separatrix import straight_walk
from src.utils.logger import logger

Extent = Tuple[np.ndarray, float]


def pca_extents(points: np.ndarray) -> List[Extent]:
    """
    Principal directions and extents of a point set

    Each direction is signed so its largest-magnitude component is positive.
    Extent is max - min of the projections. Degenerate inputs give zero
    extents along the missing directions.

    Returns:
        Three (unit direction, extent) pairs, extent descending
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) < 2:
        return [(np.eye(3)[i], 0.0) for i in range(3)]
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / len(pts)
    _, vecs = np.linalg.eigh(cov)
    out = []
    for i in range(3):
        d = vecs[:, i]
        if d[np.argmax(np.abs(d))] < 0:
            d = -d
        proj = centered @ d
        out.append((d, float(proj.max() - proj.min())))
    out.sort(key=lambda x: -x[1])
    return out


def patch_extents(mesh: SDQMesh, patch: Patch, positions: Optional[np.ndarray] = None) -> List[Extent]:
    pos = mesh.vertices if positions is None else positions
    return pca_extents(pos[patch.vertices(mesh)])


def _unit(d: np.ndarray, what: str) -> np.ndarray:
    n = np.linalg.norm(d)
    if n <= EPS:
        raise GeometryError(f"degenerate {what}")
    return d / n


def _rail_directions(strip: Strip, pos: np.ndarray) -> List[np.ndarray]:
    """Per-quad average direction of the two rail edges, walking along the strip"""
    dirs = []
    n = len(strip.rungs)
    for i in range(strip.length):
        (l0, r0), (l1, r1) = strip.rungs[i], strip.rungs[(i + 1) % n]
        d = _unit(pos[l1] - pos[l0], "rail edge") + _unit(pos[r1] - pos[r0], "rail edge")
        dirs.append(_unit(d, "rail direction"))
    return dirs


def angle_variation(
    strip: Strip,
    mesh: SDQMesh,
    positions: Optional[np.ndarray] = None,
    along: str = "rungs",
) -> float:
    """
    Total rotation of a direction field along a strip

    With along="rungs" the field is the strip's unit rung directions (left
    to right). With along="rails" it is the direction of its rails, which is
    the print direction T of the crossing strips; partitioning measures
    transversal strips this way. Closed strips include the wrap-around pair.

    Raises:
        GeometryError: "degenerate rung" on a zero-length rung
    """
    pos = mesh.vertices if positions is None else positions
    if along == "rails":
        dirs = _rail_directions(strip, pos)
    else:
        dirs = [_unit(pos[r] - pos[l], f"rung ({l}, {r})") for l, r in strip.rungs]
    if strip.closed and len(dirs) > 1:
        dirs.append(dirs[0])
    total = 0.0
    for a, b in zip(dirs, dirs[1:]):
        total += math.acos(float(np.clip(np.dot(a, b), -1.0, 1.0)))
    return total


def equidistant_positions(length: int, count: int) -> List[int]:
    """
    Rung positions splitting `length` quads into count + 1 runs

    Runs have length // (count + 1) quads, the remainder going to the last.
    """
    if count <= 0 or length < 2:
        return []
    step = length // (count + 1)
    if step == 0:
        return list(range(1, length))
    return [j * step for j in range(1, count + 1)]


def straight_cut(mesh: SDQMesh, quads, cuts, edge: int) -> List[int]:
    """
    Edge path through `edge` extended straight both ways inside a patch

    Walks stop at patch-boundary vertices (mesh boundary, other patches,
    existing cuts) and at singular vertices.
    """
    border = boundary_vertices(mesh, quads, cuts)
    a, b = mesh.edges[edge]
    ahead, _, end = straight_walk(mesh, a, edge, lambda w: w in border)
    if end is Terminal.LOOP:
        return ahead
    behind, _, _ = straight_walk(mesh, b, edge, lambda w: w in border)
    return list(reversed(behind[1:])) + ahead


def _place_cut(
    mesh: SDQMesh,
    patch: Patch,
    strip: Strip,
    position: int,
    registry: CutRegistry,
    origin: CutOrigin,
) -> Cut:
    """
    Register a cut through the strip's rung nearest `position`

    Rungs are tried at offsets 0, +1, -1, +2, -2, ...; a rung qualifies when
    its straight cut splits the patch and avoids the other network's seams.

    Raises:
        PartitionError: no admissible rung
    """
    cuts = set(registry.edges[patch.network])
    n = len(strip.rungs)
    lo, hi = (0, n - 1) if strip.closed else (1, n - 2)
    parts_before = len(quad_components(mesh, patch.quads, cuts))
    rung_edges = strip.rung_edges(mesh)

    offsets = [0]
    for k in range(1, n):
        offsets.extend((k, -k))
    for off in offsets:
        k = position + off
        if not lo <= k <= hi:
            continue
        e = rung_edges[k]
        if e in cuts:
            continue
        path = straight_cut(mesh, patch.quads, cuts, e)
        if registry.collides(patch.network, path):
            continue
        if len(quad_components(mesh, patch.quads, cuts | set(path))) <= parts_before:
            continue
        cut = registry.reserve(Cut(patch.network, tuple(path), origin))
        if cut is not None:
            if off:
                logger.debug(f"{origin.value} cut shifted by {off} rungs in patch {patch.ref}")
            return cut
    raise PartitionError(f"no admissible {origin.value} cut in patch {patch.ref}")


def _resplit(mesh: SDQMesh, patch: Patch, registry: CutRegistry) -> List[Patch]:
    cuts = set(registry.edges[patch.network])
    pieces = []
    for comp in quad_components(mesh, patch.quads, cuts):
        part = Patch(network=patch.network, quads=frozenset(comp), id=patch.id)
        for piece in validate_patch(mesh, part, registry):
            piece.id = patch.id
            pieces.append(piece)
    return pieces


def _largest(strips: Sequence[Strip], mesh: SDQMesh, positions) -> Optional[Strip]:
    best, best_area = None, -1.0
    for s in sorted(strips, key=lambda s: s.id):
        area = s.area(mesh, positions)
        if area > best_area + EPS:
            best, best_area = s, area
    return best


def size_partition(
    mesh: SDQMesh,
    patch: Patch,
    bbox: Sequence[float],
    registry: CutRegistry,
    positions: Optional[np.ndarray] = None,
) -> List[Patch]:
    """
    Cut a patch until its PCA extents fit the bounding box

    Extents (descending) are compared with the bbox sides (descending).
    Each oversized direction goes to the largest-area strip of the family
    whose rail direction is better aligned with it, and ceil(extent/bound) - 1
    equidistant cuts are placed across that strip. A position with no
    admissible rung falls back to the same position on the largest strip of
    the other family.

    Raises:
        PartitionError: no admissible cut in either family (carries the patch ref)
    """
    bounds = sorted((float(b) for b in bbox), reverse=True)
    work = [patch]
    done: List[Patch] = []
    while work:
        current = work.pop(0)
        extents = patch_extents(mesh, current, positions)
        over = [
            (d, ext, bound) for (d, ext), bound in zip(extents, bounds) if ext > bound + EPS
        ]
        if not over:
            done.append(current)
            continue

        cuts = set(registry.edges[current.network])
        own = current.strips
        trans = transversal_strips(mesh, current, cuts)
        by_family = {current.network: own, current.network.other: trans}
        s_u = _largest(by_family[Family.U], mesh, positions)
        s_v = _largest(by_family[Family.V], mesh, positions)

        placed = 0
        for d, ext, bound in over:
            du = abs(float(np.dot(d, s_u.rail_direction(mesh, positions))))
            dv = abs(float(np.dot(d, s_v.rail_direction(mesh, positions))))
            target, alt = (s_u, s_v) if du >= dv else (s_v, s_u)
            count = max(1, math.ceil(ext / bound - EPS) - 1)
            logger.debug(
                f"Patch {current.ref}: extent {ext:.1f} > {bound:.1f}, "
                f"{count} cuts across {target.family.value} strip {target.id}"
            )
            target_positions = equidistant_positions(target.length, count)
            alt_positions = equidistant_positions(alt.length, count)
            if not target_positions:
                target, alt = alt, target
                target_positions, alt_positions = alt_positions, []
            for i, pos in enumerate(target_positions):
                try:
                    _place_cut(mesh, current, target, pos, registry, CutOrigin.SIZE)
                except PartitionError:
                    if i >= len(alt_positions):
                        raise
                    logger.debug(
                        f"Patch {current.ref}: falling back to {alt.family.value} strip {alt.id}"
                    )
                    _place_cut(mesh, current, alt, alt_positions[i], registry, CutOrigin.SIZE)
                placed += 1
        if not placed:
            raise PartitionError(f"no admissible {CutOrigin.SIZE.value} cut in patch {current.ref}")
        work.extend(_resplit(mesh, current, registry))
    return sorted(done, key=lambda p: p.min_quad)


def angle_partition(
    mesh: SDQMesh,
    patch: Patch,
    gamma: float,
    registry: CutRegistry,
    positions: Optional[np.ndarray] = None,
    along: str = "rails",
) -> List[Patch]:
    """
    Cut a patch until every transversal strip turns by at most gamma

    The transversal strip with the largest variation A_max (lowest id on
    ties) gets ceil(A_max / gamma) equidistant cuts, which run parallel to
    the patch's own strips. Variation is measured `along` the strips' rails
    (the print direction) unless "rungs" is given.

    Raises:
        PartitionError: "irreducible angle violation" on a single-quad strip
    """
    work = [patch]
    done: List[Patch] = []
    while work:
        current = work.pop(0)
        cuts = set(registry.edges[current.network])
        trans = transversal_strips(mesh, current, cuts)
        worst, a_max = None, 0.0
        for s in trans:
            a = angle_variation(s, mesh, positions, along)
            if a > a_max + EPS:
                worst, a_max = s, a
        if worst is None or a_max <= gamma + ANGLE_EPS:
            done.append(current)
            continue
        if worst.length == 1:
            raise PartitionError(
                f"irreducible angle violation in patch {current.ref}: "
                f"single-quad strip turns {a_max:.4f} rad > {gamma:.4f}"
            )
        k = math.ceil(a_max / gamma - ANGLE_EPS)
        logger.debug(
            f"Patch {current.ref}: A_max {a_max:.4f} > gamma {gamma:.4f}, "
            f"{k} cuts across strip {worst.id}"
        )
        for pos in equidistant_positions(worst.length, k):
            _place_cut(mesh, current, worst, pos, registry, CutOrigin.ANGLE)
        work.extend(_resplit(mesh, current, registry))
    return sorted(done, key=lambda p: p.min_quad)
