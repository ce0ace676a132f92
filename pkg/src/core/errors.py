"""
Exception hierarchy for the double-shell pipeline

Input errors (mesh parsing, SDQ validation) map to CLI exit code 2.
"""


class DoubleShellError(Exception):
    """Base class for all pipeline errors"""
    pass


class InputError(DoubleShellError):
    """Errors caused by the input mesh or configuration"""
    pass


class MeshParserError(InputError):
    """Mesh file could not be parsed or is not a manifold, oriented quad mesh"""
    pass


class SDQValidationError(InputError):
    """Edge labels cannot be 2-colored into U/V"""
    pass


class GeometryError(DoubleShellError):
    """Degenerate geometry (zero-area quad, zero-length rung, zero normal)"""
    pass


class PartitionError(DoubleShellError):
    """Partitioning could not satisfy its constraints"""
    pass


class ShellError(DoubleShellError):
    """Shell construction failed"""
    pass


class OrientationError(DoubleShellError):
    """Fabrication orientation is undefined"""
    pass


class SupportError(DoubleShellError):
    """Sacrificial support cannot be built for an oriented piece"""
    pass


class PreviewError(DoubleShellError):
    """Preview export failed"""
    pass
