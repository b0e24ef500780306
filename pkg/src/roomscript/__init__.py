"""roomscript: constraint-based indoor scene layout.

Scene programs written in a small declarative language compile into
geometric constraint problems solved by staged gradient descent; companion
modules supply embedding retrieval, size filtering, and front-face
orientation for populating solved layouts with 3D assets.
"""

from .compiler import (
    CompileError,
    CompiledObject,
    Connectivity,
    Constraint,
    ConstraintKind,
    ConstraintProblem,
    apply_surround,
    build_connectivity,
    compile_spec,
)
from .dsl import ExecError, ParseError, SceneSpec, execute, parse, print_program
from .geometry import (
    Axis,
    Cuboid,
    Direction,
    InvalidDimsError,
    Rotation,
    bbd,
    cuboid_distance,
    footprint_bbox,
    min_bbd,
    overlap_region,
)
from .repair import (
    RepairLog,
    RepairOutcome,
    classify_unsatisfiable,
    detect_contradictions,
    repair_execute,
    resolve_contradictions,
)
from .solver import LayoutState, SolveConfig, SolveResult, assign_directions, solve

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "CompileError",
    "CompiledObject",
    "Connectivity",
    "Constraint",
    "ConstraintKind",
    "ConstraintProblem",
    "Cuboid",
    "Direction",
    "ExecError",
    "InvalidDimsError",
    "LayoutState",
    "ParseError",
    "RepairLog",
    "RepairOutcome",
    "Rotation",
    "SceneSpec",
    "SolveConfig",
    "SolveResult",
    "apply_surround",
    "assign_directions",
    "bbd",
    "build_connectivity",
    "classify_unsatisfiable",
    "compile_spec",
    "cuboid_distance",
    "detect_contradictions",
    "execute",
    "footprint_bbox",
    "min_bbd",
    "overlap_region",
    "parse",
    "print_program",
    "repair_execute",
    "resolve_contradictions",
    "solve",
]
