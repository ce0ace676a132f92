"""
Pydantic models for stage configuration
"""
import math
from typing import Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from src.config import constants as C


class PartitionConfig(BaseModel):
    """
    Partitioning bounds

    gamma is the maximum print angle variation, bbox the reachable box (mm),
    dq the distance in edges at which D2 transversal cuts are truncated.
    support_allowance is the height under each piece taken by its support;
    any principal axis may end up vertical, so every side gives it up.
    """
    gamma: float = Field(C.DEFAULT_GAMMA, gt=0, le=math.pi + C.EPS)
    bbox: Tuple[float, float, float] = C.DEFAULT_BBOX
    dq: int = Field(C.DEFAULT_DQ, ge=0)
    support_allowance: float = Field(0.0, ge=0)

    @field_validator('bbox')
    @classmethod
    def positive_extents(cls, v):
        """Every bbox extent must be positive"""
        if any(x <= 0 for x in v):
            raise ValueError(f"bbox extents must be positive, got {v}")
        return tuple(float(x) for x in v)

    @model_validator(mode='after')
    def check_allowance(self):
        if min(self.bbox) <= self.support_allowance:
            raise ValueError(
                f"support allowance {self.support_allowance} leaves no room in bbox {self.bbox}"
            )
        return self

    @property
    def usable_bbox(self) -> Tuple[float, float, float]:
        """Box sides available to a piece above its support"""
        return tuple(b - self.support_allowance for b in self.bbox)


class ShellConfig(BaseModel):
    """
    Double-shell geometry parameters (mm)

    Total thickness t defaults to 4n; walls are offset by t/2 - 0.5n on each side.
    """
    nozzle: float = Field(C.DEFAULT_NOZZLE, gt=0)
    thickness: Optional[float] = None
    rib_spacing: int = C.DEFAULT_RIB_SPACING
    rib_gap: float = Field(C.DEFAULT_RIB_GAP, ge=0)

    @model_validator(mode='after')
    def check_walls(self):
        """Fill the default thickness and reject intersecting walls"""
        if self.thickness is None:
            self.thickness = C.DEFAULT_THICKNESS_FACTOR * self.nozzle
        if self.thickness <= 2 * self.nozzle:
            raise ValueError(
                f"thickness {self.thickness} must exceed 2 * nozzle ({2 * self.nozzle})"
            )
        if self.rib_spacing < 2:
            raise ValueError(f"rib spacing must be >= 2, got {self.rib_spacing}")
        return self

    @property
    def offset_distance(self) -> float:
        """Distance of each wall from the base surface"""
        return self.thickness / 2 - 0.5 * self.nozzle

    @property
    def rib_depth(self) -> float:
        """Rib depth so opposing ribs meet at the mid-surface"""
        return self.thickness / 2 - self.nozzle

    @property
    def rib_width(self) -> float:
        """Ribs are single-extrusion walls"""
        return self.nozzle


class PrintConfig(BaseModel):
    """Slicing, speed and support parameters (mm, mm/s)"""
    layer_width: float = Field(C.DEFAULT_NOZZLE, gt=0)
    nozzle: float = Field(C.DEFAULT_NOZZLE, gt=0)
    h_target: Optional[float] = None
    speed_wall: float = Field(C.DEFAULT_SPEED_WALL, gt=0)
    speed_support: float = Field(C.DEFAULT_SPEED_SUPPORT, gt=0)
    hatch_spacing: float = Field(C.DEFAULT_HATCH_SPACING, gt=0)
    platform_layers: int = Field(C.DEFAULT_PLATFORM_LAYERS, ge=1)
    support_height: Optional[float] = None
    gamma: float = Field(C.DEFAULT_GAMMA, gt=0)
    bbox: Tuple[float, float, float] = C.DEFAULT_BBOX

    @model_validator(mode='after')
    def check_layer_height(self):
        """Default h_target to 0.6n and keep it within (0, n]"""
        if self.h_target is None:
            self.h_target = C.DEFAULT_H_TARGET_FACTOR * self.nozzle
        if not 0 < self.h_target <= self.nozzle + C.EPS:
            raise ValueError(f"h_target must be in (0, {self.nozzle}], got {self.h_target}")
        return self

    @model_validator(mode='after')
    def check_support_height(self):
        """Default the first path onto a platform standing on the plate"""
        platform = self.platform_layers * self.h_target
        if self.support_height is None:
            self.support_height = platform
        if self.support_height < platform - C.EPS:
            raise ValueError(
                f"support height {self.support_height} is below the platform ({platform})"
            )
        return self

    def speed_for(self, feature: C.Feature) -> float:
        """Linear speed used for a feature"""
        return self.speed_support if feature.is_support else self.speed_wall
