"""Automatic program repair: statement deletion, contradiction resolution,
and the unsatisfiability signal.

Execution errors are repaired by deleting the offending statement and
re-running.  Compiled problems are scanned for six contradiction patterns;
each detected subgraph is fixed by deleting its youngest constraint (highest
sourceDeclOrder).  A problem whose first 10 solver restarts all miss the
success threshold is declared unsatisfiable, which signals the caller to
regenerate the program's relations.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

from .compiler import (
    ADJACENT_KINDS,
    Constraint,
    ConstraintKind,
    ConstraintProblem,
    build_connectivity,
)
from .dsl.ast import ForStmt, Program
from .dsl.errors import ErrorClass, ExecError
from .dsl.interpreter import execute
from .dsl.scene import SceneSpec
from .geometry import Direction

__all__ = [
    "RepairOutcome",
    "Deletion",
    "ContradictionFix",
    "RepairLog",
    "Finding",
    "repair_execute",
    "detect_contradictions",
    "resolve_contradictions",
    "classify_unsatisfiable",
]


class RepairOutcome(Enum):
    CLEAN = "clean"
    REPAIRED = "repaired"
    UNSATISFIABLE = "unsatisfiable"


@dataclass
class Deletion:
    statement_index: int
    line: int
    error_class: ErrorClass
    message: str

    def to_json(self) -> dict[str, Any]:
        return {
            "statementIndex": self.statement_index,
            "line": self.line,
            "errorClass": self.error_class.value,
            "message": self.message,
        }


@dataclass
class ContradictionFix:
    pattern_id: int
    removed_decl_order: int

    def to_json(self) -> dict[str, Any]:
        return {"patternId": self.pattern_id,
                "removedDeclOrder": self.removed_decl_order}


@dataclass
class RepairLog:
    deletions: list[Deletion] = field(default_factory=list)
    contradiction_fixes: list[ContradictionFix] = field(default_factory=list)
    outcome: RepairOutcome = RepairOutcome.CLEAN

    def to_json(self) -> dict[str, Any]:
        return {
            "deletions": [d.to_json() for d in self.deletions],
            "contradictionFixes": [f.to_json() for f in self.contradiction_fixes],
            "outcome": self.outcome.value,
        }


def _delete_at_path(program: Program, path: tuple[int, ...]) -> None:
    """Remove the statement at ``path``; loops left with empty bodies go too."""
    containers: list[list] = [program.statements]
    stmts = program.statements
    for idx in path[:-1]:
        stmt = stmts[idx]
        assert isinstance(stmt, ForStmt)
        stmts = stmt.body
        containers.append(stmts)
    del stmts[path[-1]]
    # drop any enclosing loops emptied by the deletion
    for depth in range(len(containers) - 1, 0, -1):
        if not containers[depth]:
            del containers[depth - 1][path[depth - 1]]


def repair_execute(program: Program) -> tuple[SceneSpec, RepairLog, Program]:
    """Execute with retry-on-delete until the program runs cleanly.

    Returns the final spec, the repair log, and the surviving program.  The
    statement count strictly decreases on every failure, so the loop always
    terminates (in the worst case with an empty program and empty scene).
    """
    prog = copy.deepcopy(program)
    log = RepairLog()
    while True:
        try:
            spec = execute(prog)
        except ExecError as err:
            log.deletions.append(Deletion(err.statement_index, err.line,
                                          err.error_class, err.message))
            _delete_at_path(prog, err.path)
            continue
        if log.deletions:
            log.outcome = RepairOutcome.REPAIRED
        return spec, log, prog


@dataclass
class Finding:
    """One detected contradiction subgraph."""

    pattern_id: int
    constraints: list[Constraint]
    note: str

    def removal_candidate(self) -> Constraint:
        """The constraint deleted to break the subgraph: declared last."""
        return max(self.constraints, key=lambda c: c.source_decl_order)


def _opposing(d1, d2) -> bool:
    return d1 == d2.opposite()


def detect_contradictions(problem: ConstraintProblem) -> list[Finding]:
    """Find all instances of the six contradiction patterns.

    1. An object relates to itself (adjacent/on/facing).
    2. NEXTTOWALL on opposing walls while the object cannot span the room.
    3. a adjacent to b from d, and b adjacent to a from anything but opposite(d).
    4. ON(a, b) together with a horizontal adjacency between a and b.
    5. a touches wall d while some other object is adjacent to a from d.
    6. Objects adjacent to one side of a are wider in total than that side.

    Patterns only reference relational constraints; defaults are never part
    of a subgraph.
    """
    findings: list[Finding] = []
    cs = problem.constraints
    objects = problem.objects
    room = problem.scene.size

    # pattern 1: self relations
    for c in cs:
        if c.kind in ADJACENT_KINDS + (ConstraintKind.ON, ConstraintKind.FACING):
            if c.b == c.a:
                findings.append(Finding(1, [c], f"object {c.a} relates to itself"))

    # pattern 2: opposing walls without the size to span them
    ntw = [c for c in cs if c.kind is ConstraintKind.NEXTTOWALL]
    for i, c1 in enumerate(ntw):
        for c2 in ntw[i + 1:]:
            if c1.a != c2.a or not _opposing(c1.wall, c2.wall):
                continue
            axis = c1.wall.axis
            extent = objects[c1.a].static_extent(axis)
            if extent < room[axis]:
                findings.append(Finding(
                    2, [c1, c2],
                    f"object {c1.a} pinned to opposing walls "
                    f"({c1.wall.name}/{c2.wall.name}) with extent "
                    f"{extent:.3g} < room {room[axis]:.3g}"))

    # pattern 3: mutual adjacency from non-opposite directions
    directed = [c for c in cs
                if c.kind in (ConstraintKind.ADJACENT1, ConstraintKind.ADJACENT2)]
    for i, c1 in enumerate(directed):
        for c2 in directed[i + 1:]:
            if c1.a == c2.b and c1.b == c2.a and not _opposing(c2.direction, c1.direction):
                findings.append(Finding(
                    3, [c1, c2],
                    f"objects {c1.a} and {c1.b} adjacent from incompatible sides "
                    f"({c1.direction.name}, {c2.direction.name})"))

    # pattern 4: stacked and horizontally adjacent at once
    ons = [c for c in cs if c.kind is ConstraintKind.ON and not c.horizontal_only]
    adjacents = [c for c in cs if c.kind in ADJACENT_KINDS]
    for c1 in ons:
        for c2 in adjacents:
            if {c1.a, c1.b} == {c2.a, c2.b}:
                findings.append(Finding(
                    4, [c1, c2],
                    f"object {c1.a} stands on {c1.b} but is also adjacent to it"))

    # pattern 5: an object wedged between a and the wall a touches
    for c1 in ntw:
        for c2 in directed:
            if c2.b == c1.a and c2.a != c1.a and c2.direction == c1.wall:
                findings.append(Finding(
                    5, [c1, c2],
                    f"object {c2.a} adjacent to {c1.a} from its "
                    f"{c1.wall.name} wall side"))

    # pattern 6: one side packed beyond its length
    by_side: dict[tuple[int, Direction], list[Constraint]] = {}
    for c in directed:
        by_side.setdefault((c.b, c.direction), []).append(c)
    for (center, d), group in sorted(
            by_side.items(), key=lambda kv: (kv[0][0], int(kv[0][1]))):
        side_axis = 0 if d.axis == 2 else 2
        total = sum(objects[c.a].static_extent(side_axis) for c in group)
        side_len = objects[center].static_extent(side_axis)
        if total > side_len:
            findings.append(Finding(
                6, list(group),
                f"{d.name} side of object {center} packed with {total:.3g} m "
                f"of objects but is only {side_len:.3g} m long"))

    return findings


def resolve_contradictions(problem: ConstraintProblem,
                           ) -> tuple[ConstraintProblem, list[ContradictionFix]]:
    """Delete youngest constraints of detected subgraphs until none remain.

    Mutates and returns the problem.  Terminates because every pass removes
    at least one constraint.  Connectivity is rebuilt after changes.
    """
    fixes: list[ContradictionFix] = []
    while True:
        findings = detect_contradictions(problem)
        if not findings:
            break
        removed: set[int] = set()
        for finding in findings:
            victim = finding.removal_candidate()
            if id(victim) not in removed:
                removed.add(id(victim))
                fixes.append(ContradictionFix(finding.pattern_id,
                                              victim.source_decl_order))
        problem.constraints = [c for c in problem.constraints
                               if id(c) not in removed]
    build_connectivity(problem)
    return problem, fixes


def classify_unsatisfiable(final_losses: Sequence[float],
                           threshold: float = 1e-4) -> bool:
    """Whether a solve history shows unsatisfiability.

    True iff none of the first 10 restarts got strictly below the success
    threshold (a loss exactly at the threshold counts as failure) and at
    least 10 restarts ran.  Callers treat True as a backtrack signal.
    """
    if not final_losses:
        raise ValueError("need at least one solve result")
    first = list(final_losses)[:10]
    if any(loss < threshold for loss in first):
        return False
    return len(first) >= 10
