"""
Printability validation

Checks an oriented piece against the print constraints and returns a
report instead of raising, so the pipeline can collect violations for
every piece before failing.
"""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.config.constants import ANGLE_EPS, EPS, H_MAX_FACTOR, H_MIN_FACTOR, LAYERING_FACTOR, Feature
from src.core.pathgen.paths import Path
from src.models.config_models import PrintConfig


@dataclass
class PrintabilityReport:
    """Violations fail the pipeline, warnings are reported"""
    violations: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": self.violations, "warnings": self.warnings}


def point_polyline_distance(points: np.ndarray, polyline: np.ndarray, closed: bool = False) -> np.ndarray:
    """Distance from each point to the nearest segment of a polyline"""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    line = np.asarray(polyline, dtype=float).reshape(-1, 3)
    if closed and len(line) > 2:
        line = np.vstack([line, line[:1]])
    if len(line) == 1:
        return np.linalg.norm(pts - line[0], axis=1)
    a, b = line[:-1], line[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom = np.where(denom > EPS, denom, 1.0)
    # (points, segments) parameter of the projection, clamped to the segment
    t = np.einsum("pij,ij->pi", pts[:, None, :] - a[None, :, :], ab) / denom
    t = np.clip(t, 0.0, 1.0)
    nearest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    dist = np.linalg.norm(pts[:, None, :] - nearest, axis=2)
    return dist.min(axis=1)


def check_layering(paths: List[Path]) -> List[str]:
    """Every point of wall path j >= 1 lies within 1.5 h of wall path j - 1"""
    walls = [p for p in paths if p.feature is Feature.WALL]
    issues = []
    for j in range(1, len(walls)):
        prev, cur = walls[j - 1], walls[j]
        dist = point_polyline_distance(cur.positions, prev.positions, prev.closed)
        limits = np.array([LAYERING_FACTOR * p.h for p in cur.points])
        bad = np.nonzero(dist > limits + EPS)[0]
        if len(bad):
            i = int(bad[0])
            issues.append(
                f"layering: path {j} point {i} is {dist[i]:.3f} mm from path {j - 1} "
                f"(limit {limits[i]:.3f})"
            )
    return issues


def validate_printability(
    paths: List[Path],
    config: PrintConfig,
    angle_variations: Optional[List[float]] = None,
) -> PrintabilityReport:
    """
    Check an oriented piece (support included)

    (a) transversal strip angle variation <= gamma
    (b) axis-aligned extents of all geometry <= bbox
    (c) layering of consecutive wall paths
    (d) layer heights within [0.2n, n], as warnings
    """
    report = PrintabilityReport()

    for i, a in enumerate(angle_variations or []):
        if a > config.gamma + ANGLE_EPS:
            report.violations.append(f"angle: transversal strip {i} turns {a:.4f} rad > {config.gamma:.4f}")

    pts = [p.positions for p in paths if p.points]
    if pts:
        allp = np.vstack(pts)
        extent = allp.max(axis=0) - allp.min(axis=0)
        for axis, (e, bound) in enumerate(zip(extent, config.bbox)):
            if e > bound + EPS:
                report.violations.append(f"bbox: extent {e:.2f} mm along {'xyz'[axis]} exceeds {bound}")

    report.violations.extend(check_layering(paths))

    lo, hi = H_MIN_FACTOR * config.nozzle, H_MAX_FACTOR * config.nozzle
    walls = [p for p in paths if p.feature is Feature.WALL]
    for j, path in enumerate(walls):
        hs = [pt.h for pt in path.points]
        if hs and (min(hs) < lo - EPS or max(hs) > hi + EPS):
            report.warnings.append(
                f"layer height on path {j} in [{min(hs):.3f}, {max(hs):.3f}] outside [{lo:.3f}, {hi:.3f}]"
            )
    return report
