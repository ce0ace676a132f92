"""
Per-piece slicing

Turns every patch of both sides into an oriented toolpath piece: wall
and rib paths on its offset wall, rigid fabrication transform, support,
flow profile, statistics and a printability report. Pieces are
independent, so they are sliced on a thread pool and returned in
(side, id) order.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from src.config.constants import Family, Feature
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.errors import SupportError
from src.core.partition.geometric import angle_variation
from src.core.partition.patch import Patch, transversal_strips
from src.core.pathgen.flow import flow_profile, total_volume
from src.core.pathgen.orientation import Orientation, compute_orientation
from src.core.pathgen.paths import Path, piece_paths
from src.core.pathgen.support import generate_support
from src.core.pathgen.validator import PrintabilityReport, validate_printability
from src.core.shell.offset import OffsetSurface
from src.core.shell.ribs import Rib
from src.models.config_models import PrintConfig
from src.utils.logger import logger

SECONDS_PER_HOUR = 3600.0


@dataclass
class ToolpathPiece:
    """One printable piece in its fabrication frame"""
    piece: int
    side: Family
    paths: List[Path]
    orientation: Orientation
    support: List[Path] = field(default_factory=list)
    stats: Dict[str, float] = field(default_factory=dict)
    report: PrintabilityReport = field(default_factory=PrintabilityReport)

    @property
    def print_sequence(self) -> List[Path]:
        """Support first, then walls and ribs"""
        return self.support + self.paths

    def to_dict(self) -> dict:
        return {
            "piece": self.piece,
            "side": self.side.value,
            "transform": self.orientation.to_list(),
            "paths": [p.to_dict() for p in self.print_sequence],
            "stats": {k: round(v, 6) for k, v in self.stats.items()},
            "validation": self.report.to_dict(),
        }


def piece_stats(paths: List[Path], support: List[Path], config: PrintConfig) -> Dict[str, float]:
    """Lengths (mm), volumes (mm^3) and extrusion time (h) of a piece"""
    wall = sum(p.length for p in paths if p.feature is Feature.WALL)
    rib = sum(p.length for p in paths if p.feature is Feature.RIB)
    sup = sum(p.length for p in support)
    object_volume = total_volume(paths, config, support=False)
    support_volume = total_volume(support, config, support=True)
    seconds = (wall + rib) / config.speed_wall + sup / config.speed_support
    return {
        "wall_length": wall,
        "rib_length": rib,
        "support_length": sup,
        "object_volume": object_volume,
        "support_volume": support_volume,
        "print_time_hours": seconds / SECONDS_PER_HOUR,
        "path_count": float(len(paths) + len(support)),
    }


def slice_piece(
    mesh: SDQMesh,
    patch: Patch,
    surface: OffsetSurface,
    config: PrintConfig,
    ribs: Optional[List[Rib]] = None,
    cut_edges: Iterable[int] = (),
) -> ToolpathPiece:
    """
    Slice one patch on its side's offset wall

    A first path that is still not the lowest after orientation is recorded
    as a violation of the piece, which then carries no support.

    Raises:
        GeometryError: degenerate rung
        OrientationError: print directions cancel out
    """
    side = surface.side
    raw = piece_paths(mesh, patch, surface.vertices, config, ribs, surface.normals, side)
    orientation = compute_orientation(raw, config.support_height)
    oriented = orientation.transform_paths(raw)
    try:
        support = generate_support(oriented, config)
    except SupportError as e:
        logger.error(f"❌ {side.value} piece {patch.id}: {e}")
        support, support_issue = [], str(e)
    else:
        support_issue = None
    flow_profile(support + oriented, config)

    angles = [
        angle_variation(s, mesh, surface.vertices, along="rails")
        for s in transversal_strips(mesh, patch, cut_edges)
    ]
    report = validate_printability(support + oriented, config, angles)
    piece = ToolpathPiece(
        piece=patch.id,
        side=side,
        paths=oriented,
        orientation=orientation,
        support=support,
        stats=piece_stats(oriented, support, config),
        report=report,
    )
    if orientation.fallback:
        report.warnings.append("orientation fell back to the mean print direction")
    if orientation.tilted:
        report.warnings.append("orientation tilted so the first path is lowest")
    if support_issue:
        report.violations.append(support_issue)
    if not report.valid:
        logger.warning(f"⚠️  {side.value} piece {patch.id}: {len(report.violations)} printability violations")
    return piece


def slice_pieces(
    mesh: SDQMesh,
    patches: Dict[Family, List[Patch]],
    surfaces: Dict[Family, OffsetSurface],
    config: PrintConfig,
    ribs: Optional[Dict[Family, List[Rib]]] = None,
    cut_edges: Optional[Dict[Family, Iterable[int]]] = None,
    workers: int = 1,
) -> List[ToolpathPiece]:
    """
    Slice every piece of both sides

    Args:
        mesh: base mesh (connectivity shared by both walls)
        patches: printable patches per side
        surfaces: offset wall per side
        config: print parameters
        ribs: ribs per side
        cut_edges: cut edges per network (for transversal strips)
        workers: thread count

    Returns:
        Pieces ordered by side (U first) then id
    """
    ribs = ribs or {}
    cut_edges = cut_edges or {}
    jobs = [
        (side, patch)
        for side in (Family.U, Family.V)
        for patch in sorted(patches.get(side, []), key=lambda p: p.id)
    ]
    logger.info(f"Slicing {len(jobs)} pieces on {workers} worker(s)")

    def run(job):
        side, patch = job
        return slice_piece(
            mesh, patch, surfaces[side], config, ribs.get(side), set(cut_edges.get(side, ())),
        )

    if workers <= 1:
        pieces = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(run, jobs))
    logger.info(
        f"✅ Sliced {sum(p.side is Family.U for p in pieces)} U and "
        f"{sum(p.side is Family.V for p in pieces)} V pieces"
    )
    return pieces
