"""
Double-Shell Fabrication Pipeline

End-to-end pipeline: mesh → analysis → partition → shell → toolpaths → report

Every stage writes its artifact to the output directory and can be
resumed from the previous stage's artifact.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from src.config.constants import (
    ANALYSIS_FILE,
    PARTITION_FILE,
    REPORT_JSON_FILE,
    REPORT_TEXT_FILE,
    SHELL_FILE,
    Family,
)
from src.config.settings import Settings, get_settings
from src.core.mesh.sdq_mesh import SDQMesh
from src.core.mesh.strips import trace_strips
from src.core.partition.pipeline import PartitionResult, partition_pipeline
from src.core.pathgen.slicer import ToolpathPiece, slice_pieces
from src.core.report.artifacts import read_json, toolpath_files, toolpath_name, write_json
from src.core.report.report import fabrication_report, render_table
from src.core.shell.builder import ShellResult, build_shell
from src.core.singularities.detector import find_singularities, index_check, index_sum
from src.core.singularities.separatrix import singularity_separatrices
from src.models.report_models import FabricationReport
from src.utils.logger import logger


def analyze_mesh(mesh: SDQMesh) -> Dict[str, Any]:
    """Singularity census with separatrix terminals, index check and strip counts"""
    sings = find_singularities(mesh)
    census = []
    for s in sings:
        seps = singularity_separatrices(mesh, s)
        census.append({
            **s.to_dict(),
            "separatrices": len(seps),
            "terminals": [sep.terminal.value for sep in seps],
        })
    strips = {}
    for family in (Family.U, Family.V):
        network = trace_strips(mesh, family)
        strips[family.value] = {"strips": network.strip_count, "closed": network.closed_count}
    return {
        "mesh": mesh.summary(),
        "singularities": census,
        "index_sum": str(index_sum(mesh)),
        "index_check": index_check(mesh),
        "strips": strips,
    }


@dataclass
class RunResult:
    """Outcome of a full run"""
    report: FabricationReport
    pieces: List[ToolpathPiece] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class FabricationPipeline:
    """
    Complete mesh → toolpath pipeline

    Orchestrates the stages, writing one artifact per stage into `out_dir`.
    """

    def __init__(self, out_dir: Union[str, Path], settings: Optional[Settings] = None):
        """
        Initialize pipeline

        Args:
            out_dir: artifact directory
            settings: parameters (defaults to environment settings)
        """
        self.settings = settings or get_settings()
        self.out_dir = Path(out_dir)
        self.partition_config = self.settings.partition_config()
        self.shell_config = self.settings.shell_config()
        self.print_config = self.settings.print_config()
        logger.debug(f"Pipeline initialized, artifacts in {self.out_dir}")

    def analyze(self, mesh: SDQMesh, write: bool = True) -> Dict[str, Any]:
        analysis = analyze_mesh(mesh)
        if write:
            write_json(self.out_dir / ANALYSIS_FILE, analysis)
        return analysis

    def partition(self, mesh: SDQMesh) -> PartitionResult:
        result = partition_pipeline(mesh, self.partition_config)
        write_json(self.out_dir / PARTITION_FILE, result.to_dict())
        return result

    def shell(self, partition: PartitionResult) -> ShellResult:
        result = build_shell(partition, self.shell_config)
        write_json(self.out_dir / SHELL_FILE, result.to_dict())
        return result

    def slice(self, shell: ShellResult) -> List[ToolpathPiece]:
        pieces = slice_pieces(
            shell.partition.mesh,
            shell.patches,
            shell.surfaces,
            self.print_config,
            ribs=shell.ribs,
            cut_edges=shell.cut_edges,
            workers=self.settings.workers,
        )
        # stale pieces from an earlier run would break the file/piece count match
        for old in toolpath_files(self.out_dir):
            old.unlink()
        for piece in pieces:
            write_json(self.out_dir / toolpath_name(piece.side.value, piece.piece), piece.to_dict())
        return pieces

    def report(self, name: str, shell: ShellResult, violations: Optional[List[str]] = None) -> FabricationReport:
        toolpaths = [read_json(p) for p in toolpath_files(self.out_dir)]
        partition = shell.partition
        report = fabrication_report(
            name=name,
            mesh=partition.mesh,
            census=partition.census(),
            toolpaths=toolpaths,
            config=self.print_config,
            assembly_sequence=[f"{s}{pid}" for s, pid in partition.assembly_sequence()],
            violations=violations,
            warnings=partition.warnings + shell.warnings + [
                f"{t['side']}{t['piece']}: {w}"
                for t in toolpaths
                for w in (t.get("validation") or {}).get("warnings", [])
            ],
        )
        write_json(self.out_dir / REPORT_JSON_FILE, report.model_dump())
        (self.out_dir / REPORT_TEXT_FILE).write_text(render_table([report]), encoding="utf-8")
        return report

    def load_partition(self) -> PartitionResult:
        return PartitionResult.from_dict(read_json(self.out_dir / PARTITION_FILE))

    def load_shell(self) -> ShellResult:
        return ShellResult.from_dict(read_json(self.out_dir / SHELL_FILE))

    def stored_violations(self) -> List[str]:
        """Printability violations recorded in the emitted toolpath files"""
        out = []
        for path in toolpath_files(self.out_dir):
            data = read_json(path)
            out.extend(
                f"{data['side']}{data['piece']}: {v}"
                for v in (data.get("validation") or {}).get("violations", [])
            )
        return out

    def run(self, mesh: SDQMesh, name: str = "model") -> RunResult:
        """
        Run every stage

        Violations (partition constraints and printability) do not stop the
        run; all artifacts are written and the violations are returned.
        """
        logger.info("=" * 60)
        logger.info("Starting Double-Shell Fabrication Pipeline")
        logger.info("=" * 60)

        logger.info("\n[1/5] Analyzing mesh...")
        analysis = self.analyze(mesh)
        logger.info(f"✅ {len(analysis['singularities'])} singularities")

        logger.info("\n[2/5] Partitioning...")
        partition = self.partition(mesh)
        violations = [f"partition: {v}" for v in partition.violations()]

        logger.info("\n[3/5] Building double shell...")
        shell = self.shell(partition)

        logger.info("\n[4/5] Slicing pieces...")
        pieces = self.slice(shell)
        violations.extend(
            f"{p.side.value}{p.piece}: {v}" for p in pieces for v in p.report.violations
        )

        logger.info("\n[5/5] Writing report...")
        report = self.report(name, shell, violations)

        logger.info("\n" + "=" * 60)
        logger.info("Pipeline Complete")
        logger.info("=" * 60)
        if violations:
            logger.warning(f"⚠️  {len(violations)} violations: {violations[:5]}")
        else:
            logger.info(f"✅ {report.to_row()}")
        return RunResult(report=report, pieces=pieces, violations=violations)


def run_pipeline(
    mesh: SDQMesh,
    settings: Optional[Settings] = None,
    out_dir: Union[str, Path] = "out",
    name: str = "model",
) -> RunResult:
    """
    Run analyze → partition → shell → slice → report, writing every artifact

    The first failing stage aborts with its error.
    """
    return FabricationPipeline(out_dir, settings).run(mesh, name)
