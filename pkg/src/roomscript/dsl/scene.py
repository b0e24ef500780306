"""Executed-program scene model: object declarations and relation statements."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from ..geometry import Direction

__all__ = ["ObjectKind", "ObjectDecl", "RelationKind", "RelationStmt", "SceneSpec"]

# Doors and windows have no depth argument in the language; they are modeled
# as thin slabs against their wall.
DOOR_DEPTH = 0.05
WINDOW_DEPTH = 0.05


class ObjectKind(Enum):
    REGULAR = "regular"
    DOOR = "door"
    WINDOW = "window"


class RelationKind(Enum):
    ON = "on"
    NEXT_TO_WALL = "next_to_wall"
    MOUNTED_ON_WALL = "mounted_on_wall"
    MOUNTED_ON_CEILING = "mounted_on_ceiling"
    ADJACENT = "adjacent"
    ALIGNED = "aligned"
    FACING = "facing"
    SURROUND = "surround"


@dataclass
class ObjectDecl:
    """One declared object. ``facing`` is None, a Direction, or an object index."""

    index: int
    description: str
    category: str
    width: float
    depth: float
    height: float
    facing: Direction | int | None
    kind: ObjectKind
    decl_order: int
    wall: Direction | None = None
    height_above_ground: float = 0.0
    unique_group: int | None = None

    @property
    def dims(self) -> tuple[float, float, float]:
        return (self.width, self.depth, self.height)

    def to_json(self) -> dict[str, Any]:
        facing: Any
        if self.facing is None:
            facing = None
        elif isinstance(self.facing, Direction):
            facing = {"direction": self.facing.name}
        else:
            facing = {"object": self.facing}
        return {
            "index": self.index,
            "description": self.description,
            "category": self.category,
            "width": self.width,
            "depth": self.depth,
            "height": self.height,
            "facing": facing,
            "kind": self.kind.value,
            "declOrder": self.decl_order,
            "wall": self.wall.name if self.wall is not None else None,
            "heightAboveGround": self.height_above_ground,
            "uniqueGroup": self.unique_group,
        }


@dataclass
class RelationStmt:
    """One relation call, with arguments resolved to object indices/values."""

    kind: RelationKind
    args: tuple[Any, ...]
    decl_order: int
    implicit: bool = False  # emitted by a door/window constructor

    def to_json(self) -> dict[str, Any]:
        def enc(v: Any) -> Any:
            if isinstance(v, Direction):
                return {"direction": v.name}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {
            "kind": self.kind.value,
            "args": [enc(a) for a in self.args],
            "declOrder": self.decl_order,
            "implicit": self.implicit,
        }


@dataclass
class SceneSpec:
    """Result of executing a scene program, before constraint compilation."""

    size: tuple[float, float, float] | None = None  # (westeast, northsouth, height)
    floor_texture: str = ""
    wall_texture: str = ""
    objects: list[ObjectDecl] = field(default_factory=list)
    relations: list[RelationStmt] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "size": list(self.size) if self.size else None,
            "floorTexture": self.floor_texture,
            "wallTexture": self.wall_texture,
            "objects": [o.to_json() for o in sorted(self.objects, key=lambda o: o.decl_order)],
            "relations": [r.to_json() for r in self.relations],
        }
