"""
Fabrication report

Summarizes a job in the prototype-table format: dimensions, singularity
and cut counts, piece counts per side, extrusion time and the share of
sacrificial support. Time and support are recomputed from the toolpath
files so the report always matches what was emitted.
"""
from typing import Iterable, List, Optional

import numpy as np

from src.core.mesh.sdq_mesh import SDQMesh
from src.core.pathgen.flow import path_volume
from src.core.pathgen.paths import Path
from src.models.config_models import PrintConfig
from src.models.report_models import TABLE_COLUMNS, FabricationReport
from src.utils.logger import logger

SECONDS_PER_HOUR = 3600.0
MM_PER_CM = 10.0

TABLE_HEADER_NOTE = "% sacrificial support is measured by extruded volume (platform + scaffold)."
TABLE_FOOTER_NOTE = "Print time covers extrusion motion only (no travel, tool or color changes)."


def mesh_dimensions_cm(mesh: SDQMesh) -> tuple:
    """Axis-aligned bounding box of the input mesh, cm"""
    extent = mesh.vertices.max(axis=0) - mesh.vertices.min(axis=0)
    return tuple(float(x) / MM_PER_CM for x in extent)


def job_totals(toolpaths: Iterable[dict], config: PrintConfig) -> dict:
    """Object/support lengths and volumes over toolpath file contents"""
    totals = {"object_length": 0.0, "support_length": 0.0, "object_volume": 0.0, "support_volume": 0.0}
    for data in toolpaths:
        for raw in data["paths"]:
            path = Path.from_dict(raw)
            kind = "support" if path.feature.is_support else "object"
            totals[f"{kind}_length"] += path.length
            totals[f"{kind}_volume"] += path_volume(path, config)
    return totals


def print_time_hours(totals: dict, config: PrintConfig) -> float:
    seconds = totals["object_length"] / config.speed_wall + totals["support_length"] / config.speed_support
    return seconds / SECONDS_PER_HOUR


def support_percent(totals: dict) -> float:
    volume = totals["object_volume"] + totals["support_volume"]
    if volume <= 0:
        return 0.0
    return 100.0 * totals["support_volume"] / volume


def fabrication_report(
    name: str,
    mesh: SDQMesh,
    census: dict,
    toolpaths: List[dict],
    config: PrintConfig,
    assembly_sequence: Optional[List[str]] = None,
    violations: Optional[List[str]] = None,
    warnings: Optional[List[str]] = None,
) -> FabricationReport:
    """
    Build the report row of a job

    Args:
        name: model name
        mesh: input mesh (dimensions)
        census: partition census (singularities, geometric cuts, pieces, residuals)
        toolpaths: contents of every emitted toolpath file
        config: print speeds
    """
    totals = job_totals(toolpaths, config)
    sides = [t["side"] for t in toolpaths]
    if sides.count("U") != census["pieces_u"] or sides.count("V") != census["pieces_v"]:
        logger.warning(
            f"⚠️  toolpath files ({sides.count('U')} U, {sides.count('V')} V) differ from "
            f"partition ({census['pieces_u']} U, {census['pieces_v']} V)"
        )
    report = FabricationReport(
        name=name,
        dimensions_cm=mesh_dimensions_cm(mesh),
        singularities=census["singularities"],
        geometric_cuts=census["geometric_cuts"],
        pieces_u=sides.count("U"),
        pieces_v=sides.count("V"),
        print_time_hours=print_time_hours(totals, config),
        support_percent=support_percent(totals),
        residual_edges=list(census.get("residual_edges", [])),
        assembly_sequence=list(assembly_sequence or []),
        violations=list(violations or []),
        warnings=list(warnings or []),
    )
    logger.info(f"✅ Report: {report.to_row()}")
    return report


def render_table(reports: List[FabricationReport]) -> str:
    """Aligned text table with the support-basis header and time footer"""
    rows = [list(TABLE_COLUMNS)] + [[c.strip() for c in r.to_row().split("|")] for r in reports]
    widths = np.max([[len(c) for c in row] for row in rows], axis=0)
    lines = [TABLE_HEADER_NOTE]
    for i, row in enumerate(rows):
        lines.append(" | ".join(c.ljust(int(w)) for c, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("-+-".join("-" * int(w) for w in widths))
    lines.append(TABLE_FOOTER_NOTE)
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> List[FabricationReport]:
    """Rows of a rendered table (notes, header and rule skipped)"""
    out = []
    for line in text.splitlines():
        cells = [c.strip() for c in line.split("|")]
        if len(cells) != len(TABLE_COLUMNS) or cells[0] == TABLE_COLUMNS[0] or set(line) <= set("-+ "):
            continue
        out.append(FabricationReport.from_row(line))
    return out
