"""
Synthetic SDQ test meshes

Deterministic generators for the test corpus: grids, cylinders, tori,
saddles, planar fans and disks with exactly one interior singularity.
Coordinates are rounded to the file precision so meshes round-trip exactly.
"""
import math
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from src.config.constants import COORD_DECIMALS, MeshKind
from src.core.errors import InputError
from src.core.mesh.sdq_mesh import SDQMesh, build_mesh
from src.utils.logger import logger


class MeshParams(BaseModel):
    """Generator parameters (mm, radians)"""
    rows: int = Field(4, ge=1)
    cols: int = Field(6, ge=1)
    size: float = Field(10.0, gt=0, description="Cell size")
    radius: float = Field(50.0, gt=0)
    minor_radius: float = Field(20.0, gt=0)
    height: float = Field(10.0, gt=0, description="Row height for cylinders")
    amplitude: float = Field(0.0, ge=0)
    sweep: float = Field(math.pi, gt=0, le=2 * math.pi)
    inner_radius: float = Field(20.0, gt=0)
    sector: int = Field(3, ge=1, description="Cells per sector side for singular disks")

    @model_validator(mode='after')
    def check_radii(self):
        if self.minor_radius >= self.radius:
            raise ValueError("torus minor_radius must be smaller than radius")
        return self


def _round(points: List[Tuple[float, float, float]]) -> np.ndarray:
    arr = np.round(np.array(points, dtype=float), COORD_DECIMALS) + 0.0
    return arr


def grid(rows: int, cols: int, size: float = 10.0, size_y: float = None) -> SDQMesh:
    """Planar rows x cols grid in the xy-plane; U strips are the rows"""
    sy = size if size_y is None else size_y
    verts = [(j * size, i * sy, 0.0) for i in range(rows + 1) for j in range(cols + 1)]
    w = cols + 1
    quads = [
        (i * w + j, i * w + j + 1, (i + 1) * w + j + 1, (i + 1) * w + j)
        for i in range(rows)
        for j in range(cols)
    ]
    return build_mesh(_round(verts), quads)


def cylinder(around: int, high: int, radius: float = 50.0, height: float = 10.0) -> SDQMesh:
    """Open cylinder around the z axis; U strips are the closed circumferential rings"""
    if around < 3:
        raise InputError("cylinder needs at least 3 segments around")
    verts = []
    for i in range(high + 1):
        for j in range(around):
            t = 2 * math.pi * j / around
            verts.append((radius * math.cos(t), radius * math.sin(t), i * height))
    quads = [
        (i * around + j, i * around + (j + 1) % around,
         (i + 1) * around + (j + 1) % around, (i + 1) * around + j)
        for i in range(high)
        for j in range(around)
    ]
    return build_mesh(_round(verts), quads)


def torus(around: int, tube: int, radius: float = 50.0, minor_radius: float = 20.0) -> SDQMesh:
    """Closed torus grid with `around` segments on the major circle and `tube` on the minor"""
    if around < 3 or tube < 3:
        raise InputError("torus needs at least 3 segments in each direction")
    verts = []
    for i in range(tube):
        phi = 2 * math.pi * i / tube
        for j in range(around):
            theta = 2 * math.pi * j / around
            rr = radius + minor_radius * math.cos(phi)
            verts.append((rr * math.cos(theta), rr * math.sin(theta), minor_radius * math.sin(phi)))
    quads = [
        (i * around + j, i * around + (j + 1) % around,
         ((i + 1) % tube) * around + (j + 1) % around, ((i + 1) % tube) * around + j)
        for i in range(tube)
        for j in range(around)
    ]
    return build_mesh(_round(verts), quads)


def saddle(rows: int, cols: int, size: float = 10.0, amplitude: float = 20.0) -> SDQMesh:
    """Grid centered on the origin lifted to z = amplitude * (x^2 - y^2) / half^2"""
    hx, hy = cols * size / 2, rows * size / 2
    half = max(hx, hy)
    verts = []
    for i in range(rows + 1):
        for j in range(cols + 1):
            x, y = j * size - hx, i * size - hy
            verts.append((x, y, amplitude * (x * x - y * y) / (half * half)))
    w = cols + 1
    quads = [
        (i * w + j, i * w + j + 1, (i + 1) * w + j + 1, (i + 1) * w + j)
        for i in range(rows)
        for j in range(cols)
    ]
    return build_mesh(_round(verts), quads)


def fan(rows: int, cols: int, sweep: float = math.pi,
        inner_radius: float = 20.0, size: float = 10.0) -> SDQMesh:
    """
    Planar annular sector

    `rows` radial layers of width `size` starting at inner_radius, `cols`
    angular segments over `sweep`. V strips run around the arc and their
    radial rungs rotate by `sweep` in total.
    """
    w = cols + 1
    verts = []
    for i in range(rows + 1):
        r = inner_radius + i * size
        for j in range(cols + 1):
            t = sweep * j / cols
            verts.append((r * math.cos(t), r * math.sin(t), 0.0))
    quads = [
        (i * w + j, (i + 1) * w + j, (i + 1) * w + j + 1, i * w + j + 1)
        for i in range(rows)
        for j in range(cols)
    ]
    return build_mesh(_round(verts), quads)


def singular_disk(valence: int, sector: int = 3, size: float = 10.0,
                  amplitude: float = 0.0) -> SDQMesh:
    """
    Disk with one interior vertex of the given valence

    `valence` square sectors of sector x sector cells are glued around the
    center; sector s spans the angular wedge [2*pi*s/m, 2*pi*(s+1)/m].
    An odd valence yields a mesh that is not strip-decomposable.
    """
    m, k = valence, sector
    if m < 2:
        raise InputError("singular disk needs valence >= 2")
    wedge = 2 * math.pi / m
    outer = size * k * math.sqrt(2)

    def vid(s: int, a: int, b: int) -> int:
        if a == 0 and b == 0:
            return 0
        if a == 0:
            return vid((s + 1) % m, b, 0)
        return 1 + s * k * (k + 1) + (a - 1) * (k + 1) + b

    verts = [(0.0, 0.0, 0.0)]
    for s in range(m):
        for a in range(1, k + 1):
            for b in range(k + 1):
                r = size * math.hypot(a, b)
                t = wedge * s + wedge * math.atan2(b, a) / (math.pi / 2)
                verts.append((r * math.cos(t), r * math.sin(t), amplitude * (r / outer) ** 2))

    quads = [
        (vid(s, a, b), vid(s, a + 1, b), vid(s, a + 1, b + 1), vid(s, a, b + 1))
        for s in range(m)
        for a in range(k)
        for b in range(k)
    ]
    return build_mesh(_round(verts), quads)


def gen_testmesh(kind: str, **params) -> SDQMesh:
    """
    Build a synthetic SDQ mesh

    Args:
        kind: grid | cylinder | torus | d2 | d6 | saddle | fan
        params: rows, cols, size, radius, minor_radius, height, amplitude,
            sweep, inner_radius, sector

    Raises:
        InputError: unknown kind or invalid parameters
    """
    try:
        kind = MeshKind(kind)
    except ValueError:
        raise InputError(f"unknown mesh kind: {kind}")
    try:
        p = MeshParams(**{k: v for k, v in params.items() if v is not None})
    except ValidationError as e:
        raise InputError(f"invalid params: {e.errors()[0]['msg']}")

    if kind is MeshKind.GRID:
        mesh = grid(p.rows, p.cols, p.size)
    elif kind is MeshKind.CYLINDER:
        mesh = cylinder(p.cols, p.rows, p.radius, p.height)
    elif kind is MeshKind.TORUS:
        mesh = torus(p.cols, p.rows, p.radius, p.minor_radius)
    elif kind is MeshKind.SADDLE:
        mesh = saddle(p.rows, p.cols, p.size, p.amplitude)
    elif kind is MeshKind.FAN:
        mesh = fan(p.rows, p.cols, p.sweep, p.inner_radius, p.size)
    elif kind is MeshKind.D2:
        mesh = singular_disk(2, p.sector, p.size, p.amplitude)
    else:
        mesh = singular_disk(6, p.sector, p.size, p.amplitude)

    logger.info(f"Generated {kind.value} mesh: {mesh.vertex_count} vertices, {mesh.quad_count} quads")
    return mesh
