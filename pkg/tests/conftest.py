"""
Shared fixtures: small synthetic meshes and default stage configs
"""
import pytest

from src.core.mesh.generator import cylinder, fan, grid, saddle, singular_disk, torus
from src.models.config_models import PartitionConfig, PrintConfig, ShellConfig


@pytest.fixture
def fan_for_angle():
    """
    Factory of fans whose arc strips turn by a given total along their rails

    Rail directions of consecutive quads differ by sweep / cols, so an arc
    of `cols` quads turns by sweep * (cols - 1) / cols.
    """
    def make(total: float, cols: int = 10, rows: int = 4):
        return fan(rows, cols, sweep=total * cols / (cols - 1), inner_radius=20.0)
    return make


@pytest.fixture
def small_grid():
    return grid(2, 3, 10.0)


@pytest.fixture
def grid_8x12():
    return grid(8, 12, 10.0)


@pytest.fixture
def cylinder_mesh():
    return cylinder(16, 6, radius=50.0, height=10.0)


@pytest.fixture
def torus_mesh():
    return torus(16, 8, radius=60.0, minor_radius=20.0)


@pytest.fixture
def saddle_mesh():
    return saddle(6, 6, 10.0, 10.0)


@pytest.fixture
def d2_mesh():
    return singular_disk(2, 4, 10.0)


@pytest.fixture
def d6_mesh():
    return singular_disk(6, 3, 10.0, 15.0)


@pytest.fixture
def partition_config():
    return PartitionConfig()


@pytest.fixture
def shell_config():
    return ShellConfig()


@pytest.fixture
def print_config():
    return PrintConfig()
