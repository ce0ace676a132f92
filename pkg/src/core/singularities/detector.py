"""
Singularity detection

Interior vertices whose valence differs from 4, classified D2 / D6 / OTHER,
plus the quad-mesh index check against the Euler characteristic.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from src.config.constants import SingularityKind
from src.core.mesh.sdq_mesh import SDQMesh
from src.utils.logger import logger


@dataclass(frozen=True)
class Singularity:
    """Interior vertex with even valence other than 4"""
    vertex: int
    valence: int
    kind: SingularityKind

    def to_dict(self) -> dict:
        return {"vertex": self.vertex, "valence": self.valence, "kind": self.kind.value}


def classify(valence: int) -> SingularityKind:
    if valence == 2:
        return SingularityKind.D2
    if valence == 6:
        return SingularityKind.D6
    return SingularityKind.OTHER


def find_singularities(mesh: SDQMesh) -> List[Singularity]:
    """
    All interior vertices with valence != 4, sorted by vertex index

    Boundary vertices are never classified, whatever their valence.
    """
    sings = [
        Singularity(v, mesh.valence(v), classify(mesh.valence(v)))
        for v in range(mesh.vertex_count)
        if mesh.is_singular(v)
    ]
    others = [s for s in sings if s.kind is SingularityKind.OTHER]
    if others:
        logger.warning(
            f"⚠️  {len(others)} singularities of valence >= 8 are cut like D6: "
            f"{[s.vertex for s in others]}"
        )
    logger.debug(f"Found {len(sings)} singularities")
    return sings


def index_sum(mesh: SDQMesh) -> Fraction:
    """
    Combinatorial Gauss-Bonnet sum for quad meshes

    sum over interior vertices of (4 - valence)/4 plus sum over boundary
    vertices of (3 - valence)/4; equals the Euler characteristic.
    """
    total = Fraction(0)
    for v in range(mesh.vertex_count):
        val = mesh.valence(v)
        if mesh.boundary_vertex[v]:
            total += Fraction(3 - val, 4)
        else:
            total += Fraction(4 - val, 4)
    return total


def index_check(mesh: SDQMesh) -> bool:
    """True when the index sum matches V - E + F"""
    return index_sum(mesh) == mesh.euler_characteristic()
