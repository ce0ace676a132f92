"""
Double-shell fabrication constants and enumerations
"""
from enum import Enum
import math


class Family(str, Enum):
    """Edge label / strip network family"""
    U = "U"
    V = "V"

    @property
    def other(self) -> "Family":
        """The transversal family"""
        return Family.V if self is Family.U else Family.U


class SingularityKind(str, Enum):
    """Classification of interior singular vertices by valence"""
    D2 = "D2"
    D6 = "D6"
    OTHER = "OTHER"  # even valence >= 8, cut like D6


class Terminal(str, Enum):
    """How a separatrix walk ended"""
    BOUNDARY = "boundary"
    SINGULARITY = "singularity"
    LOOP = "loop"


class CutOrigin(str, Enum):
    """Why a cut was added"""
    TOPOLOGICAL_D6 = "topological-D6"
    TOPOLOGICAL_D2_PARALLEL = "topological-D2-parallel"
    TOPOLOGICAL_D2_TRANSVERSAL = "topological-D2-transversal"
    HANDLE = "handle"
    HANDLE_TRANSVERSAL = "handle-transversal"  # handle opened across the strips
    BRANCH = "branch"
    SIZE = "size"
    ANGLE = "angle"

    @property
    def is_geometric(self) -> bool:
        return self in (CutOrigin.SIZE, CutOrigin.ANGLE)


class Feature(str, Enum):
    """Toolpath feature tags"""
    WALL = "wall"
    RIB = "rib"
    PLATFORM = "platform"
    SCAFFOLD = "scaffold"

    @property
    def is_support(self) -> bool:
        return self in (Feature.PLATFORM, Feature.SCAFFOLD)


class PreviewKind(str, Enum):
    """Preview export kinds"""
    PATCHES = "patches"
    PATHS = "paths"
    RIBS = "ribs"


class MeshKind(str, Enum):
    """Synthetic test-mesh kinds"""
    GRID = "grid"
    CYLINDER = "cylinder"
    TORUS = "torus"
    D2 = "d2"
    D6 = "d6"
    SADDLE = "saddle"
    FAN = "fan"


# Mesh file format
MESH_UNITS = "mm"
COORD_DECIMALS = 6

# Print setup defaults (mm, mm/s, radians)
DEFAULT_NOZZLE = 2.5
DEFAULT_THICKNESS_FACTOR = 4.0      # t = 4n
DEFAULT_H_TARGET_FACTOR = 0.6       # h_target = 0.6n
DEFAULT_GAMMA = math.pi / 2
DEFAULT_BBOX = (500.0, 500.0, 500.0)
DEFAULT_DQ = 2
DEFAULT_RIB_SPACING = 4
DEFAULT_RIB_GAP = 0.5
DEFAULT_SPEED_WALL = 15.0
DEFAULT_SPEED_SUPPORT = 23.0
DEFAULT_HATCH_SPACING = 10.0
DEFAULT_PLATFORM_LAYERS = 3

# Numeric tolerances
EPS = 1e-9
ANTIPARALLEL_EPS = 1e-6
ANGLE_EPS = 1e-6  # radians; covers coordinate rounding
LAYERING_FACTOR = 1.5
H_MIN_FACTOR = 0.2
H_MAX_FACTOR = 1.0

# Exit codes
EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2

# Artifact file names
PARTITION_FILE = "partition.json"
SHELL_FILE = "shell.json"
ANALYSIS_FILE = "analysis.json"
REPORT_JSON_FILE = "report.json"
REPORT_TEXT_FILE = "report.txt"
TOOLPATH_FILE_PATTERN = "piece_{side}_{id}.toolpath.json"
