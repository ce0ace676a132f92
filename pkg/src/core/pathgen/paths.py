"""
Print path generation

Each strip of a patch is subdivided along its rungs into N + 1 iso-paths;
the strips are stacked in print order, sharing their common rail path,
and rib passes are inserted after the wall path they stand on.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from src.config.constants import EPS, Family, Feature
from src.core.errors import GeometryError
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.mesh.strips import Strip
from src.core.partition.patch import Patch
from src.core.shell.ribs import Rib
from src.models.config_models import PrintConfig


@dataclass
class PathPoint:
    """Point of a print path with print direction T, layer height h and flow"""
    position: np.ndarray
    T: np.ndarray
    h: float
    feature: Feature = Feature.WALL
    flow_rate: float = 0.0

    def to_dict(self) -> dict:
        return {
            "p": [round(float(x), 6) + 0.0 for x in self.position],
            "t": [round(float(x), 6) + 0.0 for x in self.T],
            "h": round(float(self.h), 6),
            "flow": round(float(self.flow_rate), 6),
        }

    @classmethod
    def from_dict(cls, data: dict, feature: Feature = Feature.WALL) -> "PathPoint":
        return cls(
            np.array(data["p"], dtype=float),
            np.array(data["t"], dtype=float),
            float(data["h"]),
            feature,
            float(data.get("flow", 0.0)),
        )


@dataclass
class Path:
    """Ordered point sequence printed in one motion"""
    feature: Feature
    points: List[PathPoint] = field(default_factory=list)
    closed: bool = False
    strip: Optional[int] = None

    @property
    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.points]).reshape(-1, 3)

    def segment_lengths(self) -> np.ndarray:
        pts = self.positions
        if self.closed and len(pts) > 1:
            pts = np.vstack([pts, pts[:1]])
        if len(pts) < 2:
            return np.zeros(0)
        return np.linalg.norm(np.diff(pts, axis=0), axis=1)

    @property
    def length(self) -> float:
        return float(self.segment_lengths().sum())

    def reversed(self) -> "Path":
        return Path(self.feature, list(reversed(self.points)), self.closed, self.strip)

    def to_dict(self) -> dict:
        data = {"feature": self.feature.value, "points": [p.to_dict() for p in self.points]}
        if self.closed:
            data["closed"] = True
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Path":
        feature = Feature(data["feature"])
        points = [PathPoint.from_dict(p, feature) for p in data["points"]]
        return cls(feature, points, bool(data.get("closed", False)))


def subdivide_strip(strip: Strip, positions: np.ndarray, h_target: float) -> List[Path]:
    """
    Iso-paths of a strip at parameters j/N along every rung

    N = ceil(L_max / h_target). Path j's points carry T = unit rung direction
    (toward increasing j) and h = rung length / N; path 0 gets h_target.

    Raises:
        GeometryError: degenerate rung
    """
    lefts = positions[[l for l, _ in strip.rungs]]
    rights = positions[[r for _, r in strip.rungs]]
    spans = rights - lefts
    lengths = np.linalg.norm(spans, axis=1)
    if np.any(lengths <= EPS):
        i = int(np.argmin(lengths))
        raise GeometryError(f"degenerate rung {strip.rungs[i]} in strip {strip.id}")
    n = max(1, math.ceil(float(lengths.max()) / h_target - 1e-12))
    tangents = spans / lengths[:, None]

    paths = []
    for j in range(n + 1):
        pts = []
        for i in range(len(strip.rungs)):
            h = h_target if j == 0 else float(lengths[i]) / n
            pts.append(PathPoint(lefts[i] + (j / n) * spans[i], tangents[i].copy(), h))
        paths.append(Path(Feature.WALL, pts, strip.closed, strip.id))
    return paths


def _rib_lookup(mesh: SDQMesh, ribs: List[Rib]) -> Dict[int, Rib]:
    lookup = {}
    for rib in ribs:
        for e in rib.line.edges:
            lookup[e] = rib
    return lookup


def _rib_pass(point: PathPoint, normal: np.ndarray, inward: float, config: PrintConfig, depth: float) -> Path:
    direction = inward * normal
    start = point.position + direction * (config.layer_width / 2)
    end = start + direction * depth
    return Path(Feature.RIB, [
        PathPoint(start, point.T.copy(), point.h, Feature.RIB),
        PathPoint(end, point.T.copy(), point.h, Feature.RIB),
    ])


def piece_paths(
    mesh: SDQMesh,
    patch: Patch,
    positions: np.ndarray,
    config: PrintConfig,
    ribs: Optional[List[Rib]] = None,
    normals: Optional[np.ndarray] = None,
    side: Family = Family.U,
) -> List[Path]:
    """
    Wall (and rib) paths of a piece in print order

    Strips follow the patch's print order; the first path of every strip
    after the first repeats the previous strip's last path and is dropped.
    Open paths alternate direction. With ribs and vertex normals, after
    each wall path a short rib pass is added at every point whose rung lies
    on a printed part of a rib of this side.
    """
    lookup = _rib_lookup(mesh, ribs or [])
    inward = -1.0 if side is Family.U else 1.0
    out: List[Path] = []
    wall_index = 0
    for k, strip in enumerate(patch.strips):
        layers = subdivide_strip(strip, positions, config.h_target)
        steps = len(layers) - 1
        first = 0 if k == 0 else 1
        for j in range(first, steps + 1):
            path = layers[j]
            rib_passes = []
            if lookup and normals is not None:
                for i, (left, right) in enumerate(strip.rungs):
                    e = mesh.edge_between(left, right)
                    rib = lookup.get(e)
                    if rib is None:
                        continue
                    span = rib.edge_span(left, right)
                    if span is None:
                        continue
                    s = span[0] + (j / steps) * (span[1] - span[0])
                    if not rib.is_printed(s):
                        continue
                    nrm = (1 - j / steps) * normals[left] + (j / steps) * normals[right]
                    nrm = nrm / max(np.linalg.norm(nrm), EPS)
                    rib_passes.append((i, _rib_pass(path.points[i], nrm, inward, config, rib.depth)))
            if wall_index % 2 == 1 and not path.closed:
                path = path.reversed()
                rib_passes.reverse()
            out.append(path)
            out.extend(p for _, p in rib_passes)
            wall_index += 1
    return out


def wall_paths(paths: List[Path]) -> List[Path]:
    return [p for p in paths if p.feature is Feature.WALL]
