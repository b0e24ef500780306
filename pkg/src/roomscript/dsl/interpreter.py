"""Interpreter: executes a parsed scene program into a SceneSpec.

Execution is deterministic and side-effect free apart from the returned
spec.  Failures raise ExecError pinned to the offending statement; the
error class mirrors how a hosted-Python implementation would surface them
(undefined names say "is not defined" and classify as hallucinations,
everything else is misuse).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..geometry import Direction
from .ast import (
    Assign,
    BinOp,
    Call,
    Comprehension,
    Expr,
    ExprStmt,
    ForStmt,
    Index,
    ListLit,
    Name,
    Num,
    Program,
    Statement,
    Str,
    UnaryOp,
)
from .errors import ExecError
from .scene import ObjectDecl, ObjectKind, RelationKind, RelationStmt, SceneSpec

__all__ = ["execute", "ObjectHandle", "BUILTIN_NAMES", "CONSTANTS"]


@dataclass(frozen=True)
class ObjectHandle:
    """Language-level value referring to a declared object."""

    index: int


CONSTANTS: dict[str, Any] = {
    "EAST": 0,
    "NORTH": 1,
    "WEST": 2,
    "SOUTH": 3,
    "WESTEAST": False,
    "NORTHSOUTH": True,
}


class _Failure(Exception):
    """Internal runtime failure; wrapped into ExecError at statement level."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _type_name(v: Any) -> str:
    if isinstance(v, ObjectHandle):
        return "Object"
    if isinstance(v, bool):
        return "bool"
    return type(v).__name__


def _bind(func: str, args: list[Any], kwargs: dict[str, Any],
          params: list[tuple[str, Any]], required: int) -> dict[str, Any]:
    """Bind call arguments to named parameters with Python-like error messages."""
    if len(args) > len(params):
        raise _Failure(f"{func}() takes at most {len(params)} arguments "
                       f"({len(args)} given)")
    bound: dict[str, Any] = {}
    for value, (pname, _default) in zip(args, params):
        bound[pname] = value
    names = [p for p, _ in params]
    for key, value in kwargs.items():
        if key not in names:
            raise _Failure(f"{func}() got an unexpected keyword argument '{key}'")
        if key in bound:
            raise _Failure(f"{func}() got multiple values for argument '{key}'")
        bound[key] = value
    for pname, default in params[:required]:
        if pname not in bound:
            raise _Failure(f"{func}() missing required argument: '{pname}'")
    for pname, default in params[required:]:
        bound.setdefault(pname, default)
    return bound


def _as_number(func: str, pname: str, v: Any) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise _Failure(f"{func}() argument '{pname}' must be a number, "
                       f"got {_type_name(v)}")
    return float(v)


def _as_positive(func: str, pname: str, v: Any) -> float:
    x = _as_number(func, pname, v)
    if x <= 0:
        raise _Failure(f"{func}() argument '{pname}' must be positive, got {x}")
    return x


def _as_str(func: str, pname: str, v: Any) -> str:
    if not isinstance(v, str):
        raise _Failure(f"{func}() argument '{pname}' must be a string, "
                       f"got {_type_name(v)}")
    return v


def _as_direction(func: str, pname: str, v: Any) -> Direction:
    if isinstance(v, bool) or not isinstance(v, int):
        raise _Failure(f"{func}() argument '{pname}' must be a direction "
                       f"(EAST/NORTH/WEST/SOUTH), got {_type_name(v)}")
    if not 0 <= v <= 3:
        raise _Failure(f"{func}() argument '{pname}' is not a valid direction: {v}")
    return Direction(v)


def _as_object(func: str, pname: str, v: Any) -> ObjectHandle:
    if not isinstance(v, ObjectHandle):
        raise _Failure(f"{func}() argument '{pname}' must be an Object, "
                       f"got {_type_name(v)}")
    return v


def _as_object_list(func: str, pname: str, v: Any) -> list[ObjectHandle]:
    if not isinstance(v, list) or not all(isinstance(x, ObjectHandle) for x in v):
        raise _Failure(f"{func}() argument '{pname}' must be a list of Objects")
    return v


def _as_int(func: str, pname: str, v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise _Failure(f"{func}() argument '{pname}' must be an integer, "
                       f"got {_type_name(v)}")
    return v


class _Interp:
    def __init__(self) -> None:
        self.env: dict[str, Any] = dict(CONSTANTS)
        self.spec = SceneSpec()
        self.decl_counter = 0
        self.unique_counter = 0

    # -- bookkeeping -----------------------------------------------------

    def next_order(self) -> int:
        order = self.decl_counter
        self.decl_counter += 1
        return order

    def add_object(self, **fields: Any) -> ObjectHandle:
        index = len(self.spec.objects)
        decl = ObjectDecl(index=index, decl_order=self.next_order(), **fields)
        self.spec.objects.append(decl)
        return ObjectHandle(index)

    def add_relation(self, kind: RelationKind, args: tuple[Any, ...],
                     implicit: bool = False) -> None:
        self.spec.relations.append(
            RelationStmt(kind, args, self.next_order(), implicit))

    # -- constructors ----------------------------------------------------

    def _facing_value(self, func: str, v: Any) -> Direction | int | None:
        if v is None:
            return None
        if isinstance(v, ObjectHandle):
            return v.index
        return _as_direction(func, "facing", v)

    def bi_object(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("Object", args, kwargs,
                  [("description", None), ("width", None), ("depth", None),
                   ("height", None), ("facing", None), ("category", "")], 4)
        return self.add_object(
            description=_as_str("Object", "description", b["description"]),
            category=_as_str("Object", "category", b["category"]),
            width=_as_positive("Object", "width", b["width"]),
            depth=_as_positive("Object", "depth", b["depth"]),
            height=_as_positive("Object", "height", b["height"]),
            facing=self._facing_value("Object", b["facing"]),
            kind=ObjectKind.REGULAR)

    def _many(self, func: str, args: list[Any], kwargs: dict[str, Any],
              unique: bool) -> Any:
        b = _bind(func, args, kwargs,
                  [("amount", None), ("description", None), ("width", None),
                   ("depth", None), ("height", None), ("category", "")], 5)
        amount = _as_int(func, "amount", b["amount"])
        if amount < 1:
            raise _Failure(f"{func}() amount must be at least 1, got {amount}")
        group = None
        if unique:
            group = self.unique_counter
            self.unique_counter += 1
        handles = []
        for _ in range(amount):
            handles.append(self.add_object(
                description=_as_str(func, "description", b["description"]),
                category=_as_str(func, "category", b["category"]),
                width=_as_positive(func, "width", b["width"]),
                depth=_as_positive(func, "depth", b["depth"]),
                height=_as_positive(func, "height", b["height"]),
                facing=None,
                kind=ObjectKind.REGULAR,
                unique_group=group))
        return handles

    def bi_objects(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        return self._many("objects", args, kwargs, unique=False)

    def bi_unique_objects(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        return self._many("unique_objects", args, kwargs, unique=True)

    def bi_door(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        from .scene import DOOR_DEPTH
        b = _bind("Door", args, kwargs,
                  [("description", None), ("width", None), ("height", None),
                   ("wall", None), ("category", "")], 4)
        wall = _as_direction("Door", "wall", b["wall"])
        handle = self.add_object(
            description=_as_str("Door", "description", b["description"]),
            category=_as_str("Door", "category", b["category"]) or "door",
            width=_as_positive("Door", "width", b["width"]),
            depth=DOOR_DEPTH,
            height=_as_positive("Door", "height", b["height"]),
            facing=None,
            kind=ObjectKind.DOOR,
            wall=wall)
        # doors initialize against their wall, standing on the floor
        self.add_relation(RelationKind.MOUNTED_ON_WALL,
                          (handle.index, wall, 0.0, None), implicit=True)
        return handle

    def bi_window(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        from .scene import WINDOW_DEPTH
        b = _bind("Window", args, kwargs,
                  [("description", None), ("width", None), ("height", None),
                   ("wall", None), ("height_above_ground", None),
                   ("above", None), ("category", "")], 5)
        wall = _as_direction("Window", "wall", b["wall"])
        hag = _as_number("Window", "height_above_ground", b["height_above_ground"])
        if hag < 0:
            raise _Failure("Window() height_above_ground must be non-negative, "
                           f"got {hag}")
        above = b["above"]
        above_idx = _as_object("Window", "above", above).index if above is not None else None
        handle = self.add_object(
            description=_as_str("Window", "description", b["description"]),
            category=_as_str("Window", "category", b["category"]) or "window",
            width=_as_positive("Window", "width", b["width"]),
            depth=WINDOW_DEPTH,
            height=_as_positive("Window", "height", b["height"]),
            facing=None,
            kind=ObjectKind.WINDOW,
            wall=wall,
            height_above_ground=hag)
        self.add_relation(RelationKind.MOUNTED_ON_WALL,
                          (handle.index, wall, hag, above_idx), implicit=True)
        return handle

    # -- relations ---------------------------------------------------------

    def bi_on(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("on", args, kwargs, [("top", None), ("bottom", None)], 2)
        top = _as_object("on", "top", b["top"])
        bottom = _as_object("on", "bottom", b["bottom"])
        self.add_relation(RelationKind.ON, (top.index, bottom.index))

    def bi_next_to_wall(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("next_to_wall", args, kwargs,
                  [("a", None), ("wall", None), ("distance", 0.0)], 2)
        a = _as_object("next_to_wall", "a", b["a"])
        wall = _as_direction("next_to_wall", "wall", b["wall"])
        dist = _as_number("next_to_wall", "distance", b["distance"])
        if dist < 0:
            raise _Failure(f"next_to_wall() distance must be non-negative, got {dist}")
        self.add_relation(RelationKind.NEXT_TO_WALL, (a.index, wall, dist))

    def bi_mounted_on_wall(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("mounted_on_wall", args, kwargs,
                  [("a", None), ("wall", None), ("height", None), ("above", None)], 3)
        a = _as_object("mounted_on_wall", "a", b["a"])
        wall = _as_direction("mounted_on_wall", "wall", b["wall"])
        height = _as_number("mounted_on_wall", "height", b["height"])
        if height < 0:
            raise _Failure(f"mounted_on_wall() height must be non-negative, got {height}")
        above = b["above"]
        above_idx = (_as_object("mounted_on_wall", "above", above).index
                     if above is not None else None)
        self.add_relation(RelationKind.MOUNTED_ON_WALL,
                          (a.index, wall, height, above_idx))

    def bi_mounted_on_ceiling(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("mounted_on_ceiling", args, kwargs,
                  [("a", None), ("above", None)], 1)
        a = _as_object("mounted_on_ceiling", "a", b["a"])
        above = b["above"]
        above_idx = (_as_object("mounted_on_ceiling", "above", above).index
                     if above is not None else None)
        self.add_relation(RelationKind.MOUNTED_ON_CEILING, (a.index, above_idx))

    def bi_adjacent(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("adjacent", args, kwargs,
                  [("a", None), ("b", None), ("arg1", None), ("arg2", None),
                   ("arg3", 0.0)], 2)
        a = _as_object("adjacent", "a", b["a"])
        bb = _as_object("adjacent", "b", b["b"])
        arg1, arg2, arg3 = b["arg1"], b["arg2"], b["arg3"]
        dist_default = _as_number("adjacent", "arg3", arg3)
        if dist_default < 0:
            raise _Failure(f"adjacent() distance must be non-negative, got {dist_default}")

        if arg1 is None:
            if arg2 is not None:
                raise _Failure("adjacent() got arg2 without a direction in arg1")
            self.add_relation(RelationKind.ADJACENT, (a.index, bb.index, dist_default))
            return
        if isinstance(arg1, float):
            if arg2 is not None:
                raise _Failure("adjacent() got arg2 after a distance in arg1")
            if arg1 < 0:
                raise _Failure(f"adjacent() distance must be non-negative, got {arg1}")
            self.add_relation(RelationKind.ADJACENT, (a.index, bb.index, arg1))
            return
        d1 = _as_direction("adjacent", "arg1", arg1)
        if arg2 is None:
            self.add_relation(RelationKind.ADJACENT,
                              (a.index, bb.index, d1, dist_default))
            return
        if isinstance(arg2, float):
            if arg2 < 0:
                raise _Failure(f"adjacent() distance must be non-negative, got {arg2}")
            self.add_relation(RelationKind.ADJACENT, (a.index, bb.index, d1, arg2))
            return
        d2 = _as_direction("adjacent", "arg2", arg2)
        if d1.axis == d2.axis:
            raise _Failure("adjacent() alignment side must be perpendicular to "
                           f"the adjacency direction, got {d1.name} and {d2.name}")
        self.add_relation(RelationKind.ADJACENT,
                          (a.index, bb.index, d1, d2, dist_default))

    def bi_aligned(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("aligned", args, kwargs, [("cuboids", None), ("axis", None)], 2)
        objs = _as_object_list("aligned", "cuboids", b["cuboids"])
        axis = b["axis"]
        if not isinstance(axis, (bool, int)) or (isinstance(axis, int)
                                                 and axis not in (0, 1)):
            raise _Failure("aligned() axis must be WESTEAST or NORTHSOUTH")
        self.add_relation(RelationKind.ALIGNED,
                          (tuple(o.index for o in objs), bool(axis)))

    def bi_facing(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("facing", args, kwargs, [("a", None), ("direction", None)], 2)
        a = _as_object("facing", "a", b["a"])
        target = b["direction"]
        if isinstance(target, ObjectHandle):
            self.add_relation(RelationKind.FACING, (a.index, target.index))
        else:
            d = _as_direction("facing", "direction", target)
            self.add_relation(RelationKind.FACING, (a.index, d))

    def bi_surround(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("surround", args, kwargs, [("objects", None), ("centerobj", None)], 2)
        objs = _as_object_list("surround", "objects", b["objects"])
        if not objs:
            raise _Failure("surround() requires a non-empty object list")
        center = _as_object("surround", "centerobj", b["centerobj"])
        self.add_relation(RelationKind.SURROUND,
                          (tuple(o.index for o in objs), center.index))

    # -- parameters ---------------------------------------------------------

    def bi_set_size(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("set_size", args, kwargs,
                  [("westeast", None), ("northsouth", None), ("height", None)], 3)
        if self.spec.size is not None:
            raise _Failure("set_size() may only be called once per scene")
        self.spec.size = (
            _as_positive("set_size", "westeast", b["westeast"]),
            _as_positive("set_size", "northsouth", b["northsouth"]),
            _as_positive("set_size", "height", b["height"]),
        )

    def bi_set_floor_texture(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("set_floor_texture", args, kwargs, [("texture", None)], 1)
        self.spec.floor_texture = _as_str("set_floor_texture", "texture", b["texture"])

    def bi_set_wall_texture(self, args: list[Any], kwargs: dict[str, Any]) -> Any:
        b = _bind("set_wall_texture", args, kwargs, [("texture", None)], 1)
        self.spec.wall_texture = _as_str("set_wall_texture", "texture", b["texture"])


_BUILTINS = {
    "Object": _Interp.bi_object,
    "objects": _Interp.bi_objects,
    "unique_objects": _Interp.bi_unique_objects,
    "Door": _Interp.bi_door,
    "Window": _Interp.bi_window,
    "on": _Interp.bi_on,
    "next_to_wall": _Interp.bi_next_to_wall,
    "mounted_on_wall": _Interp.bi_mounted_on_wall,
    "mounted_on_ceiling": _Interp.bi_mounted_on_ceiling,
    "adjacent": _Interp.bi_adjacent,
    "aligned": _Interp.bi_aligned,
    "facing": _Interp.bi_facing,
    "surround": _Interp.bi_surround,
    "set_size": _Interp.bi_set_size,
    "set_floor_texture": _Interp.bi_set_floor_texture,
    "set_wall_texture": _Interp.bi_set_wall_texture,
}

BUILTIN_NAMES = frozenset(_BUILTINS)


def _eval(interp: _Interp, e: Expr) -> Any:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Str):
        return e.value
    if isinstance(e, Name):
        if e.ident in interp.env:
            return interp.env[e.ident]
        raise _Failure(f"name '{e.ident}' is not defined")
    if isinstance(e, UnaryOp):
        v = _eval(interp, e.operand)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise _Failure(f"bad operand type for unary -: '{_type_name(v)}'")
        return -v
    if isinstance(e, BinOp):
        left = _eval(interp, e.left)
        right = _eval(interp, e.right)
        try:
            if e.op == "+":
                if isinstance(left, ObjectHandle) or isinstance(right, ObjectHandle):
                    raise TypeError
                return left + right
            if e.op == "-":
                return left - right
            if e.op == "*":
                if isinstance(left, ObjectHandle) or isinstance(right, ObjectHandle):
                    raise TypeError
                return left * right
            if e.op == "/":
                return left / right
        except ZeroDivisionError:
            raise _Failure("division by zero") from None
        except TypeError:
            raise _Failure(
                f"unsupported operand type(s) for {e.op}: "
                f"'{_type_name(left)}' and '{_type_name(right)}'") from None
        raise _Failure(f"unknown operator {e.op!r}")
    if isinstance(e, ListLit):
        return [_eval(interp, item) for item in e.items]
    if isinstance(e, Index):
        target = _eval(interp, e.target)
        index = _eval(interp, e.index)
        if not isinstance(target, (list, str)):
            raise _Failure(f"'{_type_name(target)}' object is not subscriptable")
        if isinstance(index, bool) or not isinstance(index, int):
            raise _Failure("list indices must be integers, "
                           f"got {_type_name(index)}")
        try:
            return target[index]
        except IndexError:
            raise _Failure("list index out of range") from None
    if isinstance(e, Call):
        if e.func in _BUILTINS:
            args = [_eval(interp, a) for a in e.args]
            kwargs = {k: _eval(interp, v) for k, v in e.kwargs}
            return _BUILTINS[e.func](interp, args, kwargs)
        if e.func in interp.env:
            raise _Failure(f"'{_type_name(interp.env[e.func])}' object is not callable")
        raise _Failure(f"name '{e.func}' is not defined")
    if isinstance(e, Comprehension):
        indices = _range_values(interp, "comprehension", e.range_args)
        saved = interp.env.get(e.var, _MISSING)
        out = []
        for i in indices:
            interp.env[e.var] = i
            out.append(_eval(interp, e.expr))
        if saved is _MISSING:
            interp.env.pop(e.var, None)
        else:
            interp.env[e.var] = saved
        return out
    raise _Failure(f"cannot evaluate expression {e!r}")


_MISSING = object()


def _range_values(interp: _Interp, what: str, range_args: list[Expr]) -> range:
    vals = [_eval(interp, a) for a in range_args]
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, int):
            raise _Failure(f"'{_type_name(v)}' object cannot be interpreted "
                           "as an integer")
    if len(vals) == 1:
        return range(vals[0])
    return range(vals[0], vals[1])


def _exec_block(interp: _Interp, stmts: list[Statement], prefix: tuple[int, ...]) -> None:
    for i, stmt in enumerate(stmts):
        path = prefix + (i,)
        if isinstance(stmt, ForStmt):
            try:
                indices = _range_values(interp, "for", stmt.range_args)
            except _Failure as f:
                raise ExecError(f.message, path[0], path, stmt.span.start_line) from None
            for value in indices:
                interp.env[stmt.var] = value
                _exec_block(interp, stmt.body, path)
            continue
        try:
            if isinstance(stmt, Assign):
                interp.env[stmt.target] = _eval(interp, stmt.value)
            elif isinstance(stmt, ExprStmt):
                _eval(interp, stmt.expr)
            else:
                raise _Failure(f"unknown statement {stmt!r}")
        except _Failure as f:
            raise ExecError(f.message, path[0], path, stmt.span.start_line) from None


def execute(program: Program) -> SceneSpec:
    """Run a program, returning the populated SceneSpec.

    Raises ExecError on the first failing statement.  Running the same
    program twice yields structurally identical specs.
    """
    interp = _Interp()
    _exec_block(interp, program.statements, ())
    return interp.spec
