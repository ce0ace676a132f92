"""
Preview export

Writes OBJ geometry and an orthographic SVG (top view for patches and
ribs, side view for toolpaths) so partitions and paths can be inspected
in any viewer. Colors are a deterministic function of the piece id.
"""
import colorsys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import svgwrite

from src.config.constants import Family, PreviewKind
from src.core.errors import PreviewError
from src.core.mesh.sdq_mesh import SDQMesh
from src.utils.logger import logger

SVG_SIZE = 800.0
SVG_MARGIN = 20.0
GOLDEN = 0.618033988749895

FEATURE_COLORS = {
    "wall": "#1f77b4",
    "rib": "#d62728",
    "platform": "#7f7f7f",
    "scaffold": "#bcbd22",
}


def piece_color(pid: int) -> str:
    """Hex color spread around the hue circle by the golden ratio"""
    r, g, b = colorsys.hsv_to_rgb((pid * GOLDEN) % 1.0, 0.55, 0.9)
    return "#{:02x}{:02x}{:02x}".format(int(r * 255), int(g * 255), int(b * 255))


class Projection:
    """Fits 2D coordinates into the SVG canvas, y pointing up"""

    def __init__(self, points: np.ndarray):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        self.lo = pts.min(axis=0) if len(pts) else np.zeros(2)
        span = (pts.max(axis=0) - self.lo) if len(pts) else np.ones(2)
        self.scale = (SVG_SIZE - 2 * SVG_MARGIN) / max(float(span.max()), 1e-9)
        self.height = float(span[1]) * self.scale + 2 * SVG_MARGIN

    def __call__(self, xy) -> Tuple[float, float]:
        x = (float(xy[0]) - self.lo[0]) * self.scale + SVG_MARGIN
        y = self.height - ((float(xy[1]) - self.lo[1]) * self.scale + SVG_MARGIN)
        return round(x, 3), round(y, 3)


def _empty(path: Path, what: str) -> List[Path]:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("")
    logger.warning(f"⚠️  Nothing to preview ({what}): wrote empty {path.name}")
    return [path]


def _fmt(x: float) -> str:
    return f"{round(float(x), 6) + 0.0:g}"


def _obj_vertices(points: Iterable[Sequence[float]]) -> List[str]:
    return ["v " + " ".join(_fmt(c) for c in p) for p in points]


def patches_obj(mesh: SDQMesh, patches: Dict[int, List[int]]) -> str:
    """All mesh vertices, then one object of quad faces per patch"""
    lines = _obj_vertices(mesh.vertices)
    for pid, quads in sorted(patches.items()):
        lines.append(f"o patch_{pid}")
        for q in sorted(quads):
            lines.append("f " + " ".join(str(v + 1) for v in mesh.quads[q]))
    return "\n".join(lines) + "\n"


def patches_svg(mesh: SDQMesh, patches: Dict[int, List[int]], path: Path) -> Path:
    proj = Projection(mesh.vertices[:, :2])
    dwg = svgwrite.Drawing(str(path), size=(SVG_SIZE, proj.height))
    for pid, quads in sorted(patches.items()):
        group = dwg.g(id=f"patch-{pid}", fill=piece_color(pid), stroke="#333333", stroke_width=0.3)
        for q in sorted(quads):
            group.add(dwg.polygon([proj(mesh.vertices[v]) for v in mesh.quads[q]]))
        dwg.add(group)
    dwg.save(pretty=True)
    return path


def polylines_obj(objects: List[Tuple[str, List[np.ndarray]]]) -> str:
    """One object per name, each polyline as an OBJ line element"""
    lines: List[str] = []
    offset = 1
    for name, polylines in objects:
        lines.append(f"o {name}")
        for pts in polylines:
            if len(pts) < 2:
                continue
            lines.extend(_obj_vertices(pts))
            lines.append("l " + " ".join(str(offset + i) for i in range(len(pts))))
            offset += len(pts)
    return "\n".join(lines) + "\n"


def export_patches(mesh: SDQMesh, patches: Dict[Family, Dict[int, List[int]]], out_dir: Path) -> List[Path]:
    written = []
    for side in (Family.U, Family.V):
        items = patches.get(side, {})
        obj = out_dir / f"preview_patches_{side.value}.obj"
        svg = out_dir / f"preview_patches_{side.value}.svg"
        if not items:
            written.extend(_empty(obj, f"{side.value} patches"))
            continue
        obj.write_text(patches_obj(mesh, items))
        written.extend([obj, patches_svg(mesh, items, svg)])
    return written


def export_paths(toolpaths: List[dict], out_dir: Path) -> List[Path]:
    """OBJ and side-view SVG per toolpath piece"""
    if not toolpaths:
        return _empty(out_dir / "preview_paths.obj", "toolpaths")
    written = []
    for data in toolpaths:
        stem = f"preview_paths_{data['side']}_{data['piece']}"
        polylines = [np.array([p["p"] for p in raw["points"]], dtype=float) for raw in data["paths"]]
        obj = out_dir / f"{stem}.obj"
        obj.write_text(polylines_obj([(f"piece_{data['side']}_{data['piece']}", polylines)]))

        xz = [pl[:, [0, 2]] for pl in polylines if len(pl)]
        proj = Projection(np.vstack(xz) if xz else np.zeros((0, 2)))
        svg = out_dir / f"{stem}.svg"
        dwg = svgwrite.Drawing(str(svg), size=(SVG_SIZE, proj.height))
        for raw, pl in zip(data["paths"], polylines):
            if len(pl) < 2:
                continue
            dwg.add(dwg.polyline(
                [proj(p) for p in pl[:, [0, 2]]],
                fill="none",
                stroke=FEATURE_COLORS[raw["feature"]],
                stroke_width=0.5,
            ))
        dwg.save(pretty=True)
        written.extend([obj, svg])
    return written


def export_ribs(mesh: SDQMesh, ribs: List[dict], out_dir: Path) -> List[Path]:
    """Rib centre lines over the base surface, colored by side"""
    obj = out_dir / "preview_ribs.obj"
    if not ribs:
        return _empty(obj, "ribs")
    objects = []
    for rib in ribs:
        vs = list(rib["vertices"])
        if rib.get("closed"):
            vs.append(vs[0])
        objects.append((f"rib_{rib['side']}_{rib['index']}", [mesh.vertices[vs]]))
    obj.write_text(polylines_obj(objects))

    proj = Projection(mesh.vertices[:, :2])
    svg = out_dir / "preview_ribs.svg"
    dwg = svgwrite.Drawing(str(svg), size=(SVG_SIZE, proj.height))
    for (name, (pts,)), rib in zip(objects, ribs):
        color = piece_color(0) if rib["side"] == Family.U.value else piece_color(1)
        dwg.add(dwg.polyline([proj(p) for p in pts], id=name, fill="none", stroke=color, stroke_width=1.0))
    dwg.save(pretty=True)
    return [obj, svg]


def export_preview(
    kind: Union[str, PreviewKind],
    out_dir: Union[str, Path],
    mesh: Optional[SDQMesh] = None,
    patches: Optional[Dict[Family, Dict[int, List[int]]]] = None,
    toolpaths: Optional[List[dict]] = None,
    ribs: Optional[List[dict]] = None,
) -> List[Path]:
    """
    Write preview files of one kind

    Args:
        kind: patches | paths | ribs
        out_dir: destination directory
        mesh: base mesh (patches, ribs)
        patches: quads per patch id per side
        toolpaths: toolpath file contents
        ribs: rib records as written to shell.json

    Raises:
        PreviewError: unknown kind or missing input for the kind
    """
    try:
        kind = PreviewKind(kind)
    except ValueError:
        raise PreviewError(f"unknown preview kind: {kind}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if kind is PreviewKind.PATHS:
        written = export_paths(toolpaths or [], out_dir)
    else:
        if mesh is None:
            raise PreviewError(f"{kind.value} preview needs the mesh")
        if kind is PreviewKind.PATCHES:
            written = export_patches(mesh, patches or {}, out_dir)
        else:
            written = export_ribs(mesh, ribs or [], out_dir)
    logger.info(f"✅ Preview ({kind.value}): {len(written)} files")
    return written
