"""
Application Settings and Configuration
Loads DSHELL_* environment variables and provides typed configuration access
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Literal, Optional, Tuple
from functools import lru_cache

from src.config import constants as C


class Settings(BaseSettings):
    """Pipeline settings loaded from environment variables (DSHELL_*) and .env"""

    model_config = SettingsConfigDict(
        env_prefix="DSHELL_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Partitioning
    gamma: float = C.DEFAULT_GAMMA
    bbox: Tuple[float, float, float] = C.DEFAULT_BBOX
    dq: int = C.DEFAULT_DQ

    # Shell
    nozzle: float = C.DEFAULT_NOZZLE
    thickness: Optional[float] = None  # defaults to 4 * nozzle
    rib_spacing: int = C.DEFAULT_RIB_SPACING
    rib_gap: float = C.DEFAULT_RIB_GAP

    # Printing
    h_target: Optional[float] = None  # defaults to 0.6 * nozzle
    speed_wall: float = C.DEFAULT_SPEED_WALL
    speed_support: float = C.DEFAULT_SPEED_SUPPORT
    hatch: float = C.DEFAULT_HATCH_SPACING
    platform_layers: int = C.DEFAULT_PLATFORM_LAYERS
    support_height: Optional[float] = None  # defaults to platform_layers * h_target

    # Execution
    workers: int = 1

    # Logging
    log: Literal["error", "warn", "warning", "info", "debug"] = "info"
    log_file: Optional[str] = None

    @property
    def log_level(self) -> str:
        """Logging module level name"""
        return "WARNING" if self.log in ("warn", "warning") else self.log.upper()

    def partition_config(self):
        """Validated partitioning parameters"""
        from src.models.config_models import PartitionConfig
        return PartitionConfig(
            gamma=self.gamma,
            bbox=self.bbox,
            dq=self.dq,
            support_allowance=self.print_config().support_height,
        )

    def shell_config(self):
        """Validated shell parameters"""
        from src.models.config_models import ShellConfig
        return ShellConfig(
            nozzle=self.nozzle,
            thickness=self.thickness,
            rib_spacing=self.rib_spacing,
            rib_gap=self.rib_gap,
        )

    def print_config(self):
        """Validated slicing parameters"""
        from src.models.config_models import PrintConfig
        return PrintConfig(
            layer_width=self.nozzle,
            nozzle=self.nozzle,
            h_target=self.h_target,
            speed_wall=self.speed_wall,
            speed_support=self.speed_support,
            hatch_spacing=self.hatch,
            platform_layers=self.platform_layers,
            support_height=self.support_height,
            gamma=self.gamma,
            bbox=self.bbox,
        )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
