"""
Sacrificial support

Only the first wall path of a standing shell rests on support: a
platform of stacked copies of that path, carried by a planar serpentine
hatch (scaffold) from the build plate up to the platform.
"""
from typing import List

import numpy as np
from shapely.geometry import LineString, Point

from src.config.constants import EPS, Feature
from src.core.errors import SupportError
from src.core.pathgen.paths import Path, PathPoint
from src.models.config_models import PrintConfig
from src.utils.logger import logger

UP = np.array([0.0, 0.0, 1.0])


def platform_paths(first: Path, config: PrintConfig) -> List[Path]:
    """Copies of the first path lowered by i * h_target, i = 1..p, bottom layer first"""
    layers = []
    for i in range(config.platform_layers, 0, -1):
        shift = np.array([0.0, 0.0, -i * config.h_target])
        pts = [
            PathPoint(p.position + shift, UP.copy(), config.h_target, Feature.PLATFORM)
            for p in first.points
        ]
        layers.append(Path(Feature.PLATFORM, pts, first.closed))
    return layers


def footprint(first: Path, config: PrintConfig):
    """xy projection of the first path widened by half a layer width"""
    xy = [(float(p.position[0]), float(p.position[1])) for p in first.points]
    if first.closed and len(xy) > 2:
        xy.append(xy[0])
    if len(xy) == 1:
        return Point(xy[0]).buffer(config.layer_width / 2)
    return LineString(xy).buffer(config.layer_width / 2, cap_style=2)


def hatch_lines(region, spacing: float) -> List[List[tuple]]:
    """
    Serpentine x-direction hatch over a planar region

    Rows sit at miny + spacing/2 + k * spacing; a region narrower than the
    spacing gets one row through its middle.
    """
    if region.is_empty:
        return []
    minx, miny, maxx, maxy = region.bounds
    rows = list(np.arange(miny + spacing / 2, maxy, spacing))
    if not rows:
        rows = [(miny + maxy) / 2]
    lines = []
    for k, y in enumerate(rows):
        scanline = LineString([(minx - 1.0, y), (maxx + 1.0, y)])
        cut = region.intersection(scanline)
        parts = list(getattr(cut, "geoms", [cut]))
        parts = [g for g in parts if isinstance(g, LineString) and g.length > EPS]
        parts.sort(key=lambda g: g.bounds[0], reverse=k % 2 == 1)
        for g in parts:
            lines.append(sorted(g.coords, reverse=k % 2 == 1))
    return lines


def scaffold_paths(first: Path, bottom: float, config: PrintConfig) -> List[Path]:
    """Hatch layers at z = k * h_target strictly below the platform's bottom layer"""
    region = footprint(first, config)
    rows = hatch_lines(region, config.hatch_spacing)
    paths = []
    k = 0
    while k * config.h_target <= bottom - config.h_target + EPS:
        z = k * config.h_target
        for row in rows:
            pts = [
                PathPoint(np.array([x, y, z]), UP.copy(), config.h_target, Feature.SCAFFOLD)
                for x, y in row
            ]
            paths.append(Path(Feature.SCAFFOLD, pts))
        k += 1
    return paths


def generate_support(paths: List[Path], config: PrintConfig) -> List[Path]:
    """
    Scaffold and platform for an oriented piece, in print order

    Raises:
        SupportError: "orientation/support inconsistency" when the first wall
            path is not the lowest
    """
    walls = [p for p in paths if p.feature is Feature.WALL]
    if not walls:
        return []
    first = walls[0]
    first_z = float(first.positions[:, 2].min())
    for path in walls[1:]:
        if float(path.positions[:, 2].min()) < first_z - EPS:
            raise SupportError("orientation/support inconsistency: first path is not the lowest")

    platform = platform_paths(first, config)
    bottom = float(platform[0].positions[:, 2].min())
    scaffold = scaffold_paths(first, bottom, config)
    logger.debug(f"Support: {len(platform)} platform layers, {len(scaffold)} scaffold passes")
    return scaffold + platform
