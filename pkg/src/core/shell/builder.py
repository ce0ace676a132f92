"""
Double-shell construction

Combines the shell steps for a partition: offset walls, tolerance gaps
on the V side, ribs on both walls, rib interlocking and screw points.
"""
from dataclasses import dataclass, field
from typing import Dict, List

from src.config.constants import Family
from src.core.partition.patch import Patch
from src.core.partition.pipeline import NETWORKS, PartitionResult
from src.core.shell.gaps import GapResult, apply_tolerance_gaps
from src.core.shell.offset import OffsetSurface, offset_shell
from src.core.shell.ribs import Rib, ScrewPoint, generate_ribs, interlock_ribs, screw_points
from src.models.config_models import ShellConfig
from src.utils.logger import logger


@dataclass
class ShellResult:
    """Everything the slicer needs for both walls"""
    partition: PartitionResult
    config: ShellConfig
    surfaces: Dict[Family, OffsetSurface]
    gaps: GapResult
    ribs: Dict[Family, List[Rib]]
    screws: List[ScrewPoint] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def patches(self) -> Dict[Family, List[Patch]]:
        """Printable patches: U as partitioned, V with gap strips removed"""
        return {Family.U: self.partition.patches[Family.U], Family.V: self.gaps.patches}

    @property
    def cut_edges(self) -> Dict[Family, set]:
        return {n: set(self.partition.registry.edges[n]) for n in NETWORKS}

    def to_dict(self) -> dict:
        return {
            "partition": self.partition.to_dict(),
            "config": self.config.model_dump(),
            "offsets": [self.surfaces[s].to_dict() for s in NETWORKS],
            "gaps": [g.to_dict() for g in self.gaps.removed],
            "patches": {
                s.value: [p.to_dict() for p in self.patches[s]] for s in NETWORKS
            },
            "ribs": [r.to_dict() for s in NETWORKS for r in self.ribs[s]],
            "screw_points": [p.to_dict() for p in self.screws],
            "assembly_sequence": [f"{s}{pid}" for s, pid in self.partition.assembly_sequence()],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ShellResult":
        """Rebuild from shell.json; every derived field is recomputed from partition and config"""
        partition = PartitionResult.from_dict(data["partition"])
        return build_shell(partition, ShellConfig(**data["config"]))


def build_shell(partition: PartitionResult, config: ShellConfig) -> ShellResult:
    """
    Build both walls of the double shell

    Raises:
        GeometryError: zero vertex normal
        ShellError: a tolerance gap consumed a patch
    """
    logger.info("=" * 60)
    logger.info("SHELL")
    logger.info("=" * 60)
    mesh = partition.mesh
    warnings: List[str] = []

    u_side, v_side = offset_shell(mesh, config)
    surfaces = {Family.U: u_side, Family.V: v_side}
    for side in NETWORKS:
        if surfaces[side].flipped_quads:
            warnings.append(
                f"{side.value} offset self-intersects on {len(surfaces[side].flipped_quads)} quads"
            )

    gaps = apply_tolerance_gaps(mesh, partition.patches[Family.V], partition.registry.edges[Family.V])

    ribs = {side: generate_ribs(mesh, side, config, surfaces[side].vertices) for side in NETWORKS}
    interlock_ribs(ribs[Family.U], ribs[Family.V], config)
    owners = {Family.U: partition.patch_of(Family.U), Family.V: {q: p.id for p in gaps.patches for q in p.quads}}
    screws = screw_points(mesh, ribs[Family.U], ribs[Family.V], owners)
    if not screws:
        warnings.append("no rib crossings: pieces rely on seam contact only")

    logger.info(
        f"✅ Shell: {len(ribs[Family.U])} U ribs, {len(ribs[Family.V])} V ribs, "
        f"{len(screws)} screw points, {len(gaps.removed)} gap strips"
    )
    return ShellResult(
        partition=partition,
        config=config,
        surfaces=surfaces,
        gaps=gaps,
        ribs=ribs,
        screws=screws,
        warnings=warnings,
    )
