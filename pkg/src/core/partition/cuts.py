"""
Cuts and the global cut registry

The registry keeps, per strip network, every edge used as a seam and
refuses cuts that would overlap the other network's seams. The only
tolerated overlap is the residual run next to a D2 singularity.
"""
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from src.config.constants import CutOrigin, Family
from src.core.mesh.sdq_mesh import SDQMesh
from src.utils.logger import logger

# origins whose edges must carry the network's own label
PARALLEL_ORIGINS = (
    CutOrigin.TOPOLOGICAL_D6,
    CutOrigin.TOPOLOGICAL_D2_PARALLEL,
    CutOrigin.HANDLE,
    CutOrigin.BRANCH,
)


@dataclass(frozen=True)
class Cut:
    """Edge path used as a partition seam in one network"""
    network: Family
    edges: Tuple[int, ...]
    origin: CutOrigin
    truncation: Optional[str] = None   # "C_U" | "C_V" on truncated D2 transversal cuts
    singularity: Optional[int] = None
    id: int = -1

    def to_dict(self) -> dict:
        data = {
            "id": self.id,
            "network": self.network.value,
            "origin": self.origin.value,
            "edges": list(self.edges),
        }
        if self.truncation:
            data["truncation"] = self.truncation
        if self.singularity is not None:
            data["singularity"] = self.singularity
        return data


def validate_cut(mesh: SDQMesh, cut: Cut) -> List[str]:
    """
    Check the Cut invariants

    Returns:
        List of issues (empty when valid)
    """
    issues = []
    if not cut.edges:
        return ["empty cut"]
    for e1, e2 in zip(cut.edges, cut.edges[1:]):
        if not set(mesh.edges[e1]) & set(mesh.edges[e2]):
            issues.append(f"edges {e1} and {e2} are not connected")
    if cut.origin in PARALLEL_ORIGINS:
        wrong = [e for e in cut.edges if mesh.label(e) != cut.network]
        if wrong:
            issues.append(f"{cut.origin.value} cut carries transversal edges {wrong[:5]}")
    return issues


@dataclass(frozen=True)
class Residual:
    """Tolerated U/V overlap next to a D2 singularity (one arm)"""
    singularity: int
    truncation: str
    edges: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {"singularity": self.singularity, "truncation": self.truncation,
                "edges": list(self.edges)}


class CutRegistry:
    """
    Per-network cut-edge sets with overlap control

    Reservations are serialized through a lock so per-patch geometric
    partitioning may run from several threads.
    """

    def __init__(self):
        self.edges: Dict[Family, Set[int]] = {Family.U: set(), Family.V: set()}
        self.cuts: List[Cut] = []
        self.residuals: List[Residual] = []
        self._lock = threading.Lock()

    @property
    def residual_edges(self) -> Set[int]:
        out: Set[int] = set()
        for r in self.residuals:
            out.update(r.edges)
        return out

    def add_residual(self, singularity: int, truncation: str, edges: Iterable[int]) -> Residual:
        residual = Residual(singularity, truncation, tuple(edges))
        with self._lock:
            self.residuals.append(residual)
        return residual

    def collisions(self, network: Family, edges: Iterable[int]) -> Set[int]:
        """Edges that would overlap the other network outside the residuals"""
        other = self.edges[network.other]
        return (set(edges) & other) - self.residual_edges

    def collides(self, network: Family, edges: Iterable[int]) -> bool:
        return bool(self.collisions(network, edges))

    def reserve(self, cut: Cut, force: bool = False) -> Optional[Cut]:
        """
        Register a cut

        Args:
            cut: candidate cut (id is assigned here)
            force: register even when overlapping (topological cuts), warning

        Returns:
            The registered cut, or None when rejected
        """
        with self._lock:
            clash = (set(cut.edges) & self.edges[cut.network.other]) - self.residual_edges
            if clash and not force:
                return None
            if clash:
                logger.warning(
                    f"⚠️  {cut.origin.value} cut in {cut.network.value} overlaps "
                    f"{len(clash)} edges of the other network"
                )
            registered = Cut(
                cut.network, cut.edges, cut.origin, cut.truncation, cut.singularity, len(self.cuts)
            )
            self.cuts.append(registered)
            self.edges[cut.network].update(cut.edges)
        logger.debug(
            f"Registered {registered.origin.value} cut #{registered.id} "
            f"({len(registered.edges)} edges) in {registered.network.value}"
        )
        return registered

    def overlap(self) -> Set[int]:
        """Edges cut in both networks"""
        return self.edges[Family.U] & self.edges[Family.V]

    def check(self, dq: int) -> List[str]:
        """
        Verify the seam invariants

        U/V overlap lies inside the residuals and each residual has <= dq edges.
        """
        issues = []
        stray = self.overlap() - self.residual_edges
        if stray:
            issues.append(f"{len(stray)} overlapping seam edges outside D2 residuals")
        for r in self.residuals:
            if len(r.edges) > dq:
                issues.append(f"residual at singularity {r.singularity} has {len(r.edges)} > {dq} edges")
        return issues

    def cuts_of(self, network: Family, origin: Optional[CutOrigin] = None) -> List[Cut]:
        return [
            c for c in self.cuts
            if c.network == network and (origin is None or c.origin == origin)
        ]

    @property
    def geometric_cut_count(self) -> int:
        return sum(1 for c in self.cuts if c.origin.is_geometric)

    def to_dict(self) -> dict:
        return {
            "U": sorted(self.edges[Family.U]),
            "V": sorted(self.edges[Family.V]),
            "residuals": [r.to_dict() for r in self.residuals],
        }

    @classmethod
    def from_dict(cls, data: dict, cuts: List[dict]) -> "CutRegistry":
        registry = cls()
        registry.edges[Family.U] = set(data.get("U", []))
        registry.edges[Family.V] = set(data.get("V", []))
        registry.residuals = [
            Residual(r["singularity"], r["truncation"], tuple(r["edges"]))
            for r in data.get("residuals", [])
        ]
        registry.cuts = [
            Cut(
                Family(c["network"]), tuple(c["edges"]), CutOrigin(c["origin"]),
                c.get("truncation"), c.get("singularity"), c["id"],
            )
            for c in cuts
        ]
        return registry
