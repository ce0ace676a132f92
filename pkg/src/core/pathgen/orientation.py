"""
Fabrication orientation

A piece is rotated so the average build-up direction, halfway between
the mean print direction h and the first path's mean direction m, points
up (+z), then translated so its first path rests at the support height.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.config.constants import ANTIPARALLEL_EPS, EPS, Feature
from src.core.errors import OrientationError
from src.core.pathgen.paths import Path, PathPoint
from src.utils.logger import logger

Z_AXIS = np.array([0.0, 0.0, 1.0])
MAX_TILT_ROUNDS = 500


@dataclass(frozen=True)
class Orientation:
    """Rigid transform x -> R x + t"""
    rotation: np.ndarray
    translation: np.ndarray
    fallback: bool = False
    tilted: bool = False

    @property
    def matrix(self) -> np.ndarray:
        """4x4 homogeneous matrix"""
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points) @ self.rotation.T + self.translation

    def rotate(self, vectors: np.ndarray) -> np.ndarray:
        return np.asarray(vectors) @ self.rotation.T

    def transform_paths(self, paths: List[Path]) -> List[Path]:
        out = []
        for path in paths:
            pts = [
                PathPoint(self.apply(p.position), self.rotate(p.T), p.h, p.feature, p.flow_rate)
                for p in path.points
            ]
            out.append(Path(path.feature, pts, path.closed, path.strip))
        return out

    def to_list(self) -> List[float]:
        """Row-major 16 numbers"""
        return [round(float(x), 9) + 0.0 for x in self.matrix.flatten()]


def _mean_direction(vectors: List[np.ndarray]) -> np.ndarray:
    if not vectors:
        return np.zeros(3)
    total = np.sum(vectors, axis=0)
    n = np.linalg.norm(total)
    return total / n if n > EPS else np.zeros(3)


def rotation_to_z(v: np.ndarray) -> np.ndarray:
    """
    Minimal rotation taking unit vector v to +z

    Antiparallel input rotates by pi about +x.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    c = float(np.dot(v, Z_AXIS))
    if c <= -1 + ANTIPARALLEL_EPS and np.linalg.norm(np.cross(v, Z_AXIS)) < ANTIPARALLEL_EPS:
        return np.diag([1.0, -1.0, -1.0])
    axis = np.cross(v, Z_AXIS)
    k = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + k + k @ k / (1.0 + c)


def build_direction(paths: List[Path]) -> np.ndarray:
    """unit(h + m), or h alone when the two cancel; raises when h vanishes"""
    walls = [p for p in paths if p.feature is Feature.WALL]
    h_bar = _mean_direction([pt.T for p in walls for pt in p.points])
    if np.linalg.norm(h_bar) <= EPS:
        raise OrientationError("print directions average to zero: orientation undefined")
    m_bar = _mean_direction([pt.T for pt in walls[0].points])
    s = h_bar + m_bar
    if np.linalg.norm(s) < ANTIPARALLEL_EPS:
        logger.warning("⚠️  h and m cancel out, orienting by the mean print direction alone")
        return h_bar
    return s / np.linalg.norm(s)


def tilt_toward_cone(directions: np.ndarray, d: np.ndarray) -> Tuple[np.ndarray, bool]:
    """
    Tilt d until no direction points against it

    Steps toward the worst direction with shrinking weights, which moves d
    to the axis of the narrowest cone holding every direction. Returns the
    best d found and whether it was changed.
    """
    d = np.asarray(d, dtype=float)
    dirs = np.asarray(directions, dtype=float)
    if len(dirs) == 0 or float((dirs @ d).min()) >= -EPS:
        return d, False
    best, best_score = d, float((dirs @ d).min())
    current = d
    for k in range(MAX_TILT_ROUNDS):
        dots = dirs @ current
        score = float(dots.min())
        if score > best_score:
            best, best_score = current, score
        if score > EPS:
            break
        step = current + (dirs[int(np.argmin(dots))] - current) / (k + 2)
        n = np.linalg.norm(step)
        if n <= EPS:
            break
        current = step / n
    if best_score < -EPS:
        logger.warning(f"⚠️  print directions span more than a hemisphere (min cos {best_score:.3f})")
    return best, best is not d


def compute_orientation(paths: List[Path], support_height: float) -> Orientation:
    """
    Rigid transform for fabrication

    Rotates unit(0.5(h + m)) onto +z, then places the first path's lowest
    point at z = support_height with its xy centroid on the origin. When a
    print direction points downward from that axis the axis is tilted
    toward the cone of print directions, so every layer stays above the
    first path.

    Raises:
        OrientationError: no wall points or all print directions cancel
    """
    walls = [p for p in paths if p.feature is Feature.WALL and p.points]
    if not walls:
        raise OrientationError("piece has no wall paths")
    h_raw = _mean_direction([pt.T for p in walls for pt in p.points])
    m_raw = _mean_direction([pt.T for pt in walls[0].points])
    fallback = np.linalg.norm(h_raw) > EPS and np.linalg.norm(h_raw + m_raw) < ANTIPARALLEL_EPS

    directions = np.array([pt.T for p in walls for pt in p.points], dtype=float)
    up, tilted = tilt_toward_cone(directions, build_direction(walls))
    rotation = rotation_to_z(up)
    first = walls[0].positions @ rotation.T
    translation = np.array([
        -float(first[:, 0].mean()),
        -float(first[:, 1].mean()),
        support_height - float(first[:, 2].min()),
    ])
    return Orientation(rotation, translation, bool(fallback), tilted)
