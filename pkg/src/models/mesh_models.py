"""
Pydantic models for the mesh JSON file format
"""
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from src.config.constants import MESH_UNITS


class MeshFile(BaseModel):
    """
    On-disk mesh representation

    {"units":"mm","vertices":[[x,y,z],...],"quads":[[i0,i1,i2,i3],...],
     "edge_labels":{"U":[[a,b],...],"V":[[a,b],...]}}
    """
    units: Literal["mm"] = MESH_UNITS
    vertices: List[Tuple[float, float, float]] = Field(..., description="Vertex positions (mm)")
    quads: List[List[int]] = Field(..., description="Quad vertex indices, consistently oriented")
    edge_labels: Optional[Dict[Literal["U", "V"], List[Tuple[int, int]]]] = Field(
        None, description="Optional U/V edge labeling"
    )

    @field_validator('quads')
    @classmethod
    def quads_have_four_vertices(cls, v):
        """Reject faces that are not quads, naming the face index"""
        for i, face in enumerate(v):
            if len(face) != 4:
                raise ValueError(f"non-quad face at index {i}")
        return v

    @property
    def has_labels(self) -> bool:
        return bool(self.edge_labels)
