"""
Flow profile

Volumetric flow at constant linear speed: flow = h * w * speed, with the
wall speed for walls and ribs and the support speed for platform and
scaffold.
"""
from typing import List

import numpy as np

from src.config.constants import EPS, Feature
from src.core.pathgen.paths import Path
from src.models.config_models import PrintConfig


def flow_rate(h: float, feature: Feature, config: PrintConfig) -> float:
    """mm^3/s for one point; a non-positive h falls back to h_target"""
    height = h if h > EPS else config.h_target
    return height * config.layer_width * config.speed_for(feature)


def flow_profile(paths: List[Path], config: PrintConfig) -> List[Path]:
    """Assign flow_rate to every point (in place); returns the paths"""
    for path in paths:
        for point in path.points:
            point.flow_rate = flow_rate(point.h, point.feature, config)
    return paths


def path_volume(path: Path, config: PrintConfig) -> float:
    """
    Extruded volume of a path

    Each segment deposits (flow / speed) * length with the flow averaged
    over its two endpoints.
    """
    if len(path.points) < 2:
        return 0.0
    speed = config.speed_for(path.feature)
    flows = np.array([p.flow_rate for p in path.points])
    if path.closed:
        flows = np.append(flows, flows[0])
    lengths = path.segment_lengths()
    return float(np.sum((flows[:-1] + flows[1:]) / 2 * lengths) / speed)


def total_volume(paths: List[Path], config: PrintConfig, support: bool = None) -> float:
    """Volume over paths, optionally only support (True) or only object (False)"""
    return sum(
        path_volume(p, config)
        for p in paths
        if support is None or p.feature.is_support == support
    )
