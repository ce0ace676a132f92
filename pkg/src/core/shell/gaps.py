"""
Tolerance gaps

Strips along the seams between V patches are left unprinted so the
pieces fit together. Each seam takes one strip from its lower-id patch;
the U side keeps its full coverage so no hole appears.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Set, Tuple

from src.config.constants import Family
from src.core.errors import ShellError
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.partition.patch import Patch, make_patch, sub_strips
from src.utils.logger import logger


@dataclass(frozen=True)
class GapStrip:
    """A strip removed from a V patch at a seam"""
    patch: int
    neighbour: int
    family: Family
    quads: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "patch": self.patch,
            "neighbour": self.neighbour,
            "family": self.family.value,
            "quads": list(self.quads),
        }


@dataclass
class GapResult:
    patches: List[Patch]
    removed: List[GapStrip] = field(default_factory=list)

    @property
    def gap_quads(self) -> List[int]:
        return sorted(q for g in self.removed for q in g.quads)


def patch_seams(mesh: SDQMesh, patches: Iterable[Patch]) -> Dict[Tuple[int, int], List[int]]:
    """Edges shared by two patches, keyed by (lower id, higher id)"""
    owner = {q: p.id for p in patches for q in p.quads}
    seams: Dict[Tuple[int, int], List[int]] = {}
    for e, quads in enumerate(mesh.edge_quads):
        if len(quads) != 2:
            continue
        a, b = owner.get(quads[0]), owner.get(quads[1])
        if a is None or b is None or a == b:
            continue
        seams.setdefault((min(a, b), max(a, b)), []).append(e)
    return dict(sorted(seams.items()))


def apply_tolerance_gaps(
    mesh: SDQMesh,
    patches: List[Patch],
    cut_edges: Iterable[int],
) -> GapResult:
    """
    Remove the seam-adjacent strip of the lower-id patch at every V seam

    The removed strip belongs to the family whose rails run along the
    seam, so a seam across the V strips shortens them by one quad column.

    Raises:
        ShellError: "gap consumed patch" when a patch loses all its quads
    """
    cuts = set(cut_edges)
    quads: Dict[int, Set[int]] = {p.id: set(p.quads) for p in patches}
    removed: List[GapStrip] = []

    for (low, high), edges in patch_seams(mesh, patches).items():
        for family in (Family.U, Family.V):
            seam = [e for e in edges if mesh.label(e) == family]
            if not seam:
                continue
            touching = {
                q for e in seam for q in mesh.edge_quads[e] if q in quads[low]
            }
            if not touching:
                # already removed by an earlier seam
                continue
            for strip in sub_strips(mesh, family, quads[low], cuts):
                if touching.intersection(strip.quads):
                    removed.append(GapStrip(low, high, family, strip.quads))
                    quads[low].difference_update(strip.quads)
        if not quads[low]:
            raise ShellError(f"gap consumed patch {low}")

    result = [
        make_patch(mesh, p.network, quads[p.id], cuts, p.id) if quads[p.id] != set(p.quads) else p
        for p in patches
    ]
    logger.info(
        f"Tolerance gaps: removed {len(removed)} strips "
        f"({sum(len(g.quads) for g in removed)} quads) from the V side"
    )
    return GapResult(patches=result, removed=removed)
