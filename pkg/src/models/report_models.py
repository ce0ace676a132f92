"""
Pydantic models for the fabrication report and toolpath files
"""
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

TABLE_COLUMNS = (
    "model",
    "Dimensions (cm)",
    "#sings",
    "#geometric cuts",
    "# pieces U",
    "# pieces V",
    "Total print time (hrs)",
    "% sacrificial support",
)


def _num(x: float, digits: int = 1) -> str:
    """Shortest rendering after rounding: 30.0 -> '30', 16.84 -> '16.8'"""
    return f"{round(float(x), digits):g}"


class FabricationReport(BaseModel):
    """
    One prototype row of the fabrication table

    Time covers extrusion motion only; support is the share of extruded
    volume spent on platform and scaffold.
    """
    name: str = Field(..., description="Model name")
    dimensions_cm: Tuple[float, float, float] = Field(..., description="Bounding box (cm)")
    singularities: int = Field(..., ge=0)
    geometric_cuts: int = Field(..., ge=0)
    pieces_u: int = Field(..., ge=0)
    pieces_v: int = Field(..., ge=0)
    print_time_hours: float = Field(..., ge=0)
    support_percent: float = Field(..., ge=0, le=100)
    residual_edges: List[int] = Field(default_factory=list, description="Shared D2 cut edges")
    assembly_sequence: List[str] = Field(default_factory=list)
    violations: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    def to_row(self) -> str:
        """'Fig. 9e | 30 x 30 x 30 | 7 | 4 | 9 | 12 | 16.8 | 28%'"""
        dims = " x ".join(_num(d) for d in self.dimensions_cm)
        return " | ".join([
            self.name,
            dims,
            str(self.singularities),
            str(self.geometric_cuts),
            str(self.pieces_u),
            str(self.pieces_v),
            _num(self.print_time_hours),
            f"{round(self.support_percent):d}%",
        ])

    @classmethod
    def from_row(cls, row: str) -> "FabricationReport":
        """Parse a table row (pipe or tab separated)"""
        sep = "|" if "|" in row else "\t"
        cells = [c.strip() for c in row.split(sep)]
        if len(cells) != len(TABLE_COLUMNS):
            raise ValueError(f"expected {len(TABLE_COLUMNS)} columns, got {len(cells)}: {row!r}")
        dims = tuple(float(x) for x in cells[1].lower().split("x"))
        if len(dims) != 3:
            raise ValueError(f"dimensions must be 'X x Y x Z', got {cells[1]!r}")
        return cls(
            name=cells[0],
            dimensions_cm=dims,
            singularities=int(cells[2]),
            geometric_cuts=int(cells[3]),
            pieces_u=int(cells[4]),
            pieces_v=int(cells[5]),
            print_time_hours=float(cells[6]),
            support_percent=float(cells[7].rstrip("%")),
        )


class ToolpathPointModel(BaseModel):
    p: Tuple[float, float, float]
    t: Tuple[float, float, float]
    h: float
    flow: float = 0.0


class ToolpathPathModel(BaseModel):
    feature: Literal["wall", "rib", "platform", "scaffold"]
    points: List[ToolpathPointModel]
    closed: bool = False


class ToolpathFile(BaseModel):
    """piece_<side>_<id>.toolpath.json"""
    piece: int = Field(..., ge=0)
    side: Literal["U", "V"]
    transform: List[float]
    paths: List[ToolpathPathModel]
    stats: Dict[str, float] = Field(default_factory=dict)
    validation: Optional[dict] = None

    @field_validator('transform')
    @classmethod
    def sixteen_numbers(cls, v):
        """Row-major 4x4 matrix"""
        if len(v) != 16:
            raise ValueError(f"transform must have 16 numbers, got {len(v)}")
        return v
