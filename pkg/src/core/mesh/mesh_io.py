"""
Mesh file I/O

Parses and writes the JSON mesh format. Vertex coordinates are written
with 6 decimal places so that write -> load -> write is byte-identical.
"""
import json
from pathlib import Path
from typing import Dict, List, Union

from pydantic import ValidationError

from src.config.constants import COORD_DECIMALS, MESH_UNITS, Family
from src.core.errors import MeshParserError
from src.core.mesh.sdq_mesh import SDQMesh, build_mesh, edge_key
from src.models.mesh_models import MeshFile
from src.utils.logger import logger


class MeshParser:
    """
    Parser for mesh JSON files

    Expected format:
    - "units": "mm"
    - "vertices": list of [x, y, z]
    - "quads": list of 4 vertex indices, consistently oriented
    - "edge_labels": optional {"U": [[a, b], ...], "V": [[a, b], ...]}
    """

    def parse(self, text: str) -> SDQMesh:
        """
        Parse mesh JSON text into a validated SDQ mesh

        Args:
            text: JSON document

        Returns:
            SDQMesh with labels read from the file or derived

        Raises:
            MeshParserError: malformed JSON, non-quad faces, non-manifold or
                inconsistently oriented input
            SDQValidationError: labels missing/inconsistent or not 2-colorable
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise MeshParserError(f"parse error: {e}")

        try:
            mesh_file = MeshFile.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            raise MeshParserError(f"parse error: {first['msg']} at {list(first['loc'])}")

        labels = None
        if mesh_file.has_labels:
            labels = self._labels_from_file(mesh_file)

        mesh = build_mesh(mesh_file.vertices, mesh_file.quads, labels)
        logger.info(
            f"Loaded mesh: {mesh.vertex_count} vertices, {mesh.quad_count} quads, "
            f"{mesh.edge_count} edges ({'file' if labels else 'derived'} labels)"
        )
        return mesh

    def _labels_from_file(self, mesh_file: MeshFile) -> List[Family]:
        """Map labeled vertex pairs onto edge indices of the parsed quads"""
        # edge order must match SDQMesh construction
        order: Dict[tuple, int] = {}
        for quad in mesh_file.quads:
            for i in range(4):
                key = edge_key(quad[i], quad[(i + 1) % 4])
                if key not in order:
                    order[key] = len(order)

        labels: List = [None] * len(order)
        for family, pairs in mesh_file.edge_labels.items():
            for a, b in pairs:
                key = edge_key(a, b)
                if key not in order:
                    raise MeshParserError(f"labeled edge {key} is not an edge of the mesh")
                labels[order[key]] = Family(family)

        missing = [i for i, f in enumerate(labels) if f is None]
        if missing:
            raise MeshParserError(f"{len(missing)} edges have no label (first: edge {missing[0]})")
        return labels


def load_mesh(path: Union[str, Path]) -> SDQMesh:
    """
    Load a mesh file

    Raises:
        MeshParserError: file missing or invalid
    """
    path = Path(path)
    if not path.is_file():
        raise MeshParserError(f"mesh file not found: {path}")
    logger.info(f"Reading mesh from: {path}")
    return MeshParser().parse(path.read_text(encoding="utf-8"))


def parse_mesh(text: str) -> SDQMesh:
    """Convenience function to parse mesh JSON text"""
    return MeshParser().parse(text)


def _fmt(x: float) -> str:
    return f"{round(float(x), COORD_DECIMALS) + 0.0:.{COORD_DECIMALS}f}"


def mesh_to_text(mesh: SDQMesh, include_labels: bool = True) -> str:
    """Serialize a mesh to the JSON format (deterministic text)"""
    lines = ["{", f'  "units": "{MESH_UNITS}",', '  "vertices": [']
    vertex_lines = [f"    [{_fmt(x)}, {_fmt(y)}, {_fmt(z)}]" for x, y, z in mesh.vertices]
    lines.append(",\n".join(vertex_lines))
    lines.append("  ],")
    lines.append('  "quads": [')
    lines.append(",\n".join(f"    [{a}, {b}, {c}, {d}]" for a, b, c, d in mesh.quads))
    if include_labels and mesh.labels:
        lines.append("  ],")
        lines.append('  "edge_labels": {')
        groups = []
        for family in (Family.U, Family.V):
            pairs = [mesh.edges[e] for e in mesh.edges_with_label(family)]
            body = ", ".join(f"[{a}, {b}]" for a, b in pairs)
            groups.append(f'    "{family.value}": [{body}]')
        lines.append(",\n".join(groups))
        lines.append("  }")
    else:
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def mesh_to_dict(mesh: SDQMesh) -> dict:
    """Mesh as a plain dict (embedded in stage artifacts)"""
    return json.loads(mesh_to_text(mesh))


def mesh_from_dict(data: dict) -> SDQMesh:
    return MeshParser().parse(json.dumps(data))


def write_mesh(mesh: SDQMesh, path: Union[str, Path], include_labels: bool = True) -> Path:
    """Write a mesh file, creating parent directories"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(mesh_to_text(mesh, include_labels), encoding="utf-8")
    logger.info(f"✅ Saved mesh: {path}")
    return path
