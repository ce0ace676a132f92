"""
Surface offsetting

Both walls of the double shell are copies of the base surface moved along
per-vertex normals: the U side by +d, the V side by -d, d = t/2 - 0.5n.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.config.constants import EPS, Family
from src.core.errors import GeometryError
from src.core.mesh.sdq_mesh import SDQMesh, quad_normal
from src.models.config_models import ShellConfig
from src.utils.logger import logger


@dataclass(frozen=True)
class OffsetSurface:
    """One wall of the double shell; connectivity is the base mesh's"""
    side: Family
    vertices: np.ndarray
    normals: np.ndarray
    distance: float
    flipped_quads: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "side": self.side.value,
            "distance": self.distance,
            "vertices": [[round(float(x), 6) for x in p] for p in self.vertices],
            "flipped_quads": list(self.flipped_quads),
        }


def vertex_normals(mesh: SDQMesh) -> np.ndarray:
    """
    Normalized, unweighted average of incident quad normals

    Raises:
        GeometryError: a vertex whose average normal vanishes
    """
    quad_normals = np.array([quad_normal(mesh, q) for q in range(mesh.quad_count)])
    normals = np.zeros((mesh.vertex_count, 3))
    for v in range(mesh.vertex_count):
        total = quad_normals[mesh.vertex_quads[v]].sum(axis=0)
        length = np.linalg.norm(total)
        if length <= EPS:
            raise GeometryError(f"zero average normal at vertex {v}")
        normals[v] = total / length
    return normals


def flipped_quads(mesh: SDQMesh, positions: np.ndarray) -> List[int]:
    """Quads whose offset normal turns against the base normal (offset self-intersection)"""
    flipped = []
    for q in range(mesh.quad_count):
        base = quad_normal(mesh, q)
        try:
            moved = quad_normal(mesh, q, positions)
        except GeometryError:
            flipped.append(q)
            continue
        if float(np.dot(base, moved)) <= 0:
            flipped.append(q)
    return flipped


def offset_shell(mesh: SDQMesh, config: ShellConfig) -> Tuple[OffsetSurface, OffsetSurface]:
    """
    Offset the base surface to both sides

    Returns:
        (U-side surface at +d, V-side surface at -d)
    """
    d = config.offset_distance
    normals = vertex_normals(mesh)
    sides = []
    for side, sign in ((Family.U, 1.0), (Family.V, -1.0)):
        positions = mesh.vertices + sign * d * normals
        positions.setflags(write=False)
        flipped = tuple(flipped_quads(mesh, positions))
        if flipped:
            logger.warning(
                f"⚠️  {side.value} offset self-intersects: {len(flipped)} quads flip "
                f"(first: {flipped[0]})"
            )
        sides.append(OffsetSurface(side, positions, normals, sign * d, flipped))
    logger.info(f"Offset both walls by {d:.3f} mm")
    return sides[0], sides[1]
