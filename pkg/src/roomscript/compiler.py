"""Compile a SceneSpec into a geometric constraint problem.

Relations desugar into twelve constraint kinds: ten relational ones (ON,
NEXTTOWALL, HEIGHT, ADJACENT0/1/2, CEILING, ABOVE, ALIGNED, FACING) plus the
two defaults added for every scene (WITHINBOUNDS per object, NOOVERLAP per
object pair).  Compilation is deterministic: the same spec always produces
the same constraint list, byte for byte when serialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .dsl.scene import ObjectDecl, ObjectKind, RelationKind, RelationStmt, SceneSpec
from .geometry import Cuboid, Direction

__all__ = [
    "ConstraintKind",
    "Constraint",
    "CompiledObject",
    "Connectivity",
    "ConstraintProblem",
    "CompileError",
    "compile_spec",
    "apply_surround",
    "build_connectivity",
    "DOOR_AURA",
    "WINDOW_AURA",
]

# Non-overlap margins around doors and windows, meters.  A door needs swing
# clearance; a window only needs to stay reachable.
DOOR_AURA = 0.75
WINDOW_AURA = 0.30

RUG_CATEGORIES = frozenset({"rug", "carpet", "mat"})
RUG_MAX_HEIGHT = 0.1
RUG_MIN_AREA = 0.25


class CompileError(Exception):
    pass


class ConstraintKind(Enum):
    ON = "ON"
    NEXTTOWALL = "NEXTTOWALL"
    HEIGHT = "HEIGHT"
    ADJACENT0 = "ADJACENT0"
    ADJACENT1 = "ADJACENT1"
    ADJACENT2 = "ADJACENT2"
    CEILING = "CEILING"
    ABOVE = "ABOVE"
    ALIGNED = "ALIGNED"
    FACING = "FACING"
    WITHINBOUNDS = "WITHINBOUNDS"
    NOOVERLAP = "NOOVERLAP"


ADJACENT_KINDS = (ConstraintKind.ADJACENT0, ConstraintKind.ADJACENT1,
                  ConstraintKind.ADJACENT2)
# Constraints whose subjects become edges of the connectivity graph.
CONNECTING_KINDS = (ConstraintKind.NEXTTOWALL, ConstraintKind.ON) + ADJACENT_KINDS


@dataclass
class Constraint:
    """One typed constraint over object indices and/or a wall."""

    kind: ConstraintKind
    a: int
    b: int | None = None
    wall: Direction | None = None
    direction: Direction | None = None
    direction2: Direction | None = None
    westeast: bool | None = None  # ALIGNED axis flag (WESTEAST aligns z centers)
    distance: float = 0.0
    height: float = 0.0
    aura_x: float = 0.0
    aura_z: float = 0.0
    horizontal_only: bool = False  # ON variant used by mounted_on_ceiling(above=...)
    source_decl_order: int = -1

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "a": self.a,
            "b": self.b,
            "wall": self.wall.name if self.wall is not None else None,
            "direction": self.direction.name if self.direction is not None else None,
            "direction2": self.direction2.name if self.direction2 is not None else None,
            "westeast": self.westeast,
            "distance": self.distance,
            "height": self.height,
            "auraX": self.aura_x,
            "auraZ": self.aura_z,
            "horizontalOnly": self.horizontal_only,
            "sourceDeclOrder": self.source_decl_order,
        }


@dataclass
class CompiledObject:
    """Per-object solve-time attributes derived from its declaration."""

    index: int
    description: str
    category: str
    width: float
    depth: float
    height: float
    kind: ObjectKind
    decl_order: int
    fixed_direction: Direction | None = None
    facing_target: int | None = None
    is_rug: bool = False
    aura: float = 0.0
    unique_group: int | None = None

    @property
    def dims(self) -> tuple[float, float, float]:
        return (self.width, self.depth, self.height)

    def static_direction(self) -> Direction:
        """Direction used for compile-time footprints (NORTH when free)."""
        return self.fixed_direction if self.fixed_direction is not None else Direction.NORTH

    def static_extent(self, axis: int) -> float:
        """Horizontal extent along axis 0 (x) or 2 (z) under the static direction."""
        along_x_is_depth = self.static_direction().axis == 0
        if axis == 0:
            return self.depth if along_x_is_depth else self.width
        return self.width if along_x_is_depth else self.depth

    def to_json(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "description": self.description,
            "category": self.category,
            "width": self.width,
            "depth": self.depth,
            "height": self.height,
            "kind": self.kind.value,
            "declOrder": self.decl_order,
            "fixedDirection": (self.fixed_direction.name
                               if self.fixed_direction is not None else None),
            "facingTarget": self.facing_target,
            "isRug": self.is_rug,
            "aura": self.aura,
            "uniqueGroup": self.unique_group,
        }


@dataclass
class Connectivity:
    """Connected components over objects and the four walls.

    Edges come from NEXTTOWALL (object-wall) and ON/ADJACENT* (object-object)
    constraints only.
    """

    edges: list[tuple[Any, Any]]
    object_component: np.ndarray  # (N,) component id per object
    wall_component: dict[Direction, int]
    n_components: int


@dataclass
class ConstraintProblem:
    scene: Cuboid
    objects: list[CompiledObject]
    constraints: list[Constraint]
    floor_texture: str = ""
    wall_texture: str = ""
    connectivity: Connectivity | None = None

    @property
    def scene_size(self) -> np.ndarray:
        return self.scene.size

    def to_json(self) -> dict[str, Any]:
        return {
            "scene": {"min": list(self.scene.min), "max": list(self.scene.max)},
            "floorTexture": self.floor_texture,
            "wallTexture": self.wall_texture,
            "objects": [o.to_json() for o in self.objects],
            "constraints": [c.to_json() for c in self.constraints],
        }


def _is_rug(decl: ObjectDecl) -> bool:
    if decl.category.strip().lower() in RUG_CATEGORIES:
        return True
    return decl.height <= RUG_MAX_HEIGHT and decl.width * decl.depth >= RUG_MIN_AREA


def _compile_objects(spec: SceneSpec) -> list[CompiledObject]:
    objects: list[CompiledObject] = []
    for decl in spec.objects:
        aura = 0.0
        if decl.kind is ObjectKind.DOOR:
            aura = DOOR_AURA
        elif decl.kind is ObjectKind.WINDOW:
            aura = WINDOW_AURA
        obj = CompiledObject(
            index=decl.index,
            description=decl.description,
            category=decl.category,
            width=decl.width,
            depth=decl.depth,
            height=decl.height,
            kind=decl.kind,
            decl_order=decl.decl_order,
            is_rug=decl.kind is ObjectKind.REGULAR and _is_rug(decl),
            aura=aura,
            unique_group=decl.unique_group,
        )
        if isinstance(decl.facing, Direction):
            obj.fixed_direction = decl.facing
        elif isinstance(decl.facing, int):
            obj.facing_target = decl.facing
        objects.append(obj)
    return objects


def _check_index(objects: list[CompiledObject], idx: Any) -> int:
    if not isinstance(idx, int) or not 0 <= idx < len(objects):
        raise CompileError(f"unresolved object reference {idx!r}")
    return idx


def _desugar_relation(rel: RelationStmt, problem: ConstraintProblem) -> None:
    objects = problem.objects
    out = problem.constraints
    order = rel.decl_order
    kind = rel.kind
    if kind is RelationKind.ON:
        a, b = (_check_index(objects, i) for i in rel.args)
        out.append(Constraint(ConstraintKind.ON, a, b=b, source_decl_order=order))
    elif kind is RelationKind.NEXT_TO_WALL:
        a = _check_index(objects, rel.args[0])
        out.append(Constraint(ConstraintKind.NEXTTOWALL, a, wall=rel.args[1],
                              distance=rel.args[2], source_decl_order=order))
    elif kind is RelationKind.MOUNTED_ON_WALL:
        a = _check_index(objects, rel.args[0])
        wall: Direction = rel.args[1]
        height: float = rel.args[2]
        above = rel.args[3]
        out.append(Constraint(ConstraintKind.NEXTTOWALL, a, wall=wall,
                              distance=0.0, source_decl_order=order))
        out.append(Constraint(ConstraintKind.HEIGHT, a, height=height,
                              source_decl_order=order))
        if above is not None:
            out.append(Constraint(ConstraintKind.ABOVE, a,
                                  b=_check_index(objects, above), wall=wall,
                                  source_decl_order=order))
        # wall-mounted objects face into the room
        objects[a].fixed_direction = wall.opposite()
    elif kind is RelationKind.MOUNTED_ON_CEILING:
        a = _check_index(objects, rel.args[0])
        out.append(Constraint(ConstraintKind.CEILING, a, source_decl_order=order))
        if rel.args[1] is not None:
            b = _check_index(objects, rel.args[1])
            out.append(Constraint(ConstraintKind.ON, a, b=b, horizontal_only=True,
                                  source_decl_order=order))
    elif kind is RelationKind.ADJACENT:
        a = _check_index(objects, rel.args[0])
        b = _check_index(objects, rel.args[1])
        rest = rel.args[2:]
        if len(rest) == 1:
            out.append(Constraint(ConstraintKind.ADJACENT0, a, b=b,
                                  distance=rest[0], source_decl_order=order))
        elif len(rest) == 2:
            out.append(Constraint(ConstraintKind.ADJACENT1, a, b=b,
                                  direction=rest[0], distance=rest[1],
                                  source_decl_order=order))
        else:
            out.append(Constraint(ConstraintKind.ADJACENT2, a, b=b,
                                  direction=rest[0], direction2=rest[1],
                                  distance=rest[2], source_decl_order=order))
    elif kind is RelationKind.ALIGNED:
        indices, axis = rel.args
        indices = [_check_index(objects, i) for i in indices]
        westeast = not axis  # language constant WESTEAST=False, NORTHSOUTH=True
        for i in range(len(indices) - 1):
            out.append(Constraint(ConstraintKind.ALIGNED, indices[i],
                                  b=indices[i + 1], westeast=westeast,
                                  source_decl_order=order))
    elif kind is RelationKind.FACING:
        a = _check_index(objects, rel.args[0])
        target = rel.args[1]
        if isinstance(target, Direction):
            objects[a].fixed_direction = target
        else:
            b = _check_index(objects, target)
            out.append(Constraint(ConstraintKind.FACING, a, b=b,
                                  source_decl_order=order))
            objects[a].facing_target = b
    elif kind is RelationKind.SURROUND:
        raise CompileError("surround relations are expanded separately")
    else:
        raise CompileError(f"unknown relation kind {kind!r}")


def apply_surround(object_indices: list[int], center: int,
                   problem: ConstraintProblem, source_decl_order: int,
                   ) -> list[Constraint]:
    """Expand one surround relation, appending its constraints to the problem.

    Surrounding objects are assigned one-by-one to the side of the center
    object with the most free capacity.  A side's capacity is the center's
    extent along that side minus the widths already assigned to it, and is
    forced to zero when the center touches a wall on that side or an existing
    adjacency already occupies it.  Ties break in NORTH, SOUTH, EAST, WEST
    order.  Each object becomes ADJACENT1 to the center from its side and
    faces the center.
    """
    objects = problem.objects
    cobj = objects[center]
    if cobj.fixed_direction is None and cobj.facing_target is None:
        # pin the center so compile-time side capacities match solve-time boxes
        cobj.fixed_direction = Direction.NORTH

    blocked: set[Direction] = set()
    for c in problem.constraints:
        if c.kind is ConstraintKind.NEXTTOWALL and c.a == center:
            blocked.add(c.wall)
        elif c.kind in (ConstraintKind.ADJACENT1, ConstraintKind.ADJACENT2):
            if c.b == center:
                blocked.add(c.direction)
            elif c.a == center:
                blocked.add(c.direction.opposite())

    def side_length(d: Direction) -> float:
        # NORTH/SOUTH sides run along x, EAST/WEST sides along z
        return cobj.static_extent(0 if d.axis == 2 else 2)

    assigned = {d: 0.0 for d in Direction}
    tie_order = [Direction.NORTH, Direction.SOUTH, Direction.EAST, Direction.WEST]
    emitted: list[Constraint] = []
    for idx in object_indices:
        obj = objects[idx]
        best = max(tie_order,
                   key=lambda d: (0.0 if d in blocked
                                  else side_length(d) - assigned[d]))
        # the object's extent along the packed side (perpendicular to its approach)
        assigned[best] += obj.static_extent(0 if best.axis == 2 else 2)
        adj = Constraint(ConstraintKind.ADJACENT1, idx, b=center, direction=best,
                         distance=0.0, source_decl_order=source_decl_order)
        fac = Constraint(ConstraintKind.FACING, idx, b=center,
                         source_decl_order=source_decl_order)
        obj.facing_target = center
        emitted.extend((adj, fac))
        problem.constraints.extend((adj, fac))
    return emitted


def build_connectivity(problem: ConstraintProblem) -> Connectivity:
    """Compute connected components over objects and walls; stores and returns."""
    n = len(problem.objects)
    wall_nodes = {d: n + int(d) for d in Direction}
    adjacency: dict[int, set[int]] = {i: set() for i in range(n + 4)}
    edges: list[tuple[Any, Any]] = []
    for c in problem.constraints:
        if c.kind is ConstraintKind.NEXTTOWALL:
            u, v = c.a, wall_nodes[c.wall]
            edges.append((c.a, c.wall))
        elif c.kind in (ConstraintKind.ON,) + ADJACENT_KINDS:
            u, v = c.a, c.b
            edges.append((c.a, c.b))
        else:
            continue
        adjacency[u].add(v)
        adjacency[v].add(u)

    component = np.full(n + 4, -1, dtype=int)
    next_id = 0
    for start in range(n + 4):
        if component[start] != -1:
            continue
        stack = [start]
        component[start] = next_id
        while stack:
            node = stack.pop()
            for nb in sorted(adjacency[node]):
                if component[nb] == -1:
                    component[nb] = next_id
                    stack.append(nb)
        next_id += 1

    conn = Connectivity(
        edges=edges,
        object_component=component[:n].copy(),
        wall_component={d: int(component[wall_nodes[d]]) for d in Direction},
        n_components=next_id,
    )
    problem.connectivity = conn
    return conn


def compile_spec(spec: SceneSpec) -> ConstraintProblem:
    """Translate an executed scene into a constraint problem.

    Surround relations are expanded after all other relations so their side
    assignments see every wall contact and adjacency.  Default constraints
    (WITHINBOUNDS per object, NOOVERLAP per non-rug pair with door/window
    auras) are appended last with sourceDeclOrder -1.
    """
    if spec.size is None:
        raise CompileError("scene size is not set (set_size was never called)")
    we, ns, height = spec.size
    scene = Cuboid(np.zeros(3), np.array([we, height, ns]))

    problem = ConstraintProblem(
        scene=scene,
        objects=_compile_objects(spec),
        constraints=[],
        floor_texture=spec.floor_texture,
        wall_texture=spec.wall_texture,
    )

    surrounds: list[RelationStmt] = []
    for rel in spec.relations:
        if rel.kind is RelationKind.SURROUND:
            surrounds.append(rel)
        else:
            _desugar_relation(rel, problem)
    for rel in surrounds:
        indices, center = rel.args
        apply_surround([_check_index(problem.objects, i) for i in indices],
                       _check_index(problem.objects, center),
                       problem, rel.decl_order)

    for obj in problem.objects:
        problem.constraints.append(
            Constraint(ConstraintKind.WITHINBOUNDS, obj.index))
    n = len(problem.objects)
    for i in range(n):
        for j in range(i + 1, n):
            oi, oj = problem.objects[i], problem.objects[j]
            if oi.is_rug or oj.is_rug:
                continue
            aura = oi.aura + oj.aura
            problem.constraints.append(
                Constraint(ConstraintKind.NOOVERLAP, i, b=j,
                           aura_x=aura, aura_z=aura))

    build_connectivity(problem)
    return problem
