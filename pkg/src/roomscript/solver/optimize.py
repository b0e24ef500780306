"""Multi-stage layout optimization.

Each restart runs four stages: (1) random initial positions and random
non-fixed directions, (2) gradient descent with repel forces added to the
gradient, (3) discrete direction assignment for objects that face another
object, (4) gradient descent again without repels.  A restart succeeds when
the final total loss is strictly below the success threshold; the solver
stops at the first success and otherwise reports its best restart with an
unsatisfiable flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..compiler import ConstraintProblem, build_connectivity
from ..geometry import Direction
from .losses import Kernels, half_extents
from .repel import RepelField

__all__ = ["SolveConfig", "LayoutState", "PhaseTrace", "SolveResult",
           "assign_directions", "solve"]

_FORWARDS = np.array([
    [1.0, 0.0, 0.0],   # EAST
    [0.0, 0.0, -1.0],  # NORTH
    [-1.0, 0.0, 0.0],  # WEST
    [0.0, 0.0, 1.0],   # SOUTH
])


@dataclass
class SolveConfig:
    step_size: float = 0.05
    max_iters_per_phase: int = 2000
    restarts: int = 10
    success_threshold: float = 1e-4
    repel_noise_scale: float = 0.02
    rng_seed: int = 0
    use_repels: bool = True
    overlap_gradient: str = "custom"  # "custom" or "analytic"
    line_search_halvings: int = 12
    convergence_loss: float = 1e-12  # repel-free descent stops below this
    repel_settle_iters: int = 400  # repel phase stops after this long without progress

    def __post_init__(self) -> None:
        if self.step_size <= 0 or self.max_iters_per_phase <= 0:
            raise ValueError("step size and iteration budget must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.success_threshold <= 0 or self.repel_noise_scale < 0:
            raise ValueError("invalid solver thresholds")
        if self.overlap_gradient not in ("custom", "analytic"):
            raise ValueError(f"unknown overlap gradient mode {self.overlap_gradient!r}")


@dataclass
class LayoutState:
    positions: np.ndarray  # (N,3) object centers
    directions: np.ndarray  # (N,) Direction values
    fixed_mask: np.ndarray  # (N,) True where the direction may never change


@dataclass
class PhaseTrace:
    phase: str
    iterations: int
    loss_start: float
    loss_end: float

    def to_json(self) -> dict[str, Any]:
        return {"phase": self.phase, "iterations": self.iterations,
                "lossStart": self.loss_start, "lossEnd": self.loss_end}


@dataclass
class SolveResult:
    layout: LayoutState
    final_loss: float
    per_constraint_loss: np.ndarray
    iterations: int
    phase_trace: list[PhaseTrace]
    success: bool
    restart_index: int
    unsatisfiable: bool
    restart_losses: list[float] = field(default_factory=list)


def assign_directions(positions: np.ndarray, directions: np.ndarray,
                      problem: ConstraintProblem) -> np.ndarray:
    """Point facing-target objects at their target given current positions.

    Picks the cardinal direction with the largest dot product against the
    horizontal center-to-center vector; ties break in enum order (EAST
    first).  Fixed directions and free objects are left untouched.
    """
    out = directions.copy()
    for i, obj in enumerate(problem.objects):
        if obj.fixed_direction is not None or obj.facing_target is None:
            continue
        v = positions[obj.facing_target] - positions[i]
        v = np.array([v[0], 0.0, v[2]])
        dots = _FORWARDS @ v
        out[i] = int(np.argmax(dots))
    return out


def _random_init(problem: ConstraintProblem, rng: np.random.Generator,
                 ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = len(problem.objects)
    fixed_mask = np.zeros(n, dtype=bool)
    directions = rng.integers(0, 4, size=n)
    for i, obj in enumerate(problem.objects):
        if obj.fixed_direction is not None:
            directions[i] = int(obj.fixed_direction)
            fixed_mask[i] = True

    half = half_extents(problem, directions)
    smin, smax = problem.scene.min, problem.scene.max
    lo = smin + half
    hi = smax - half
    u = rng.uniform(0.0, 1.0, size=(n, 2))
    positions = np.zeros((n, 3))
    for axis, col in ((0, 0), (2, 1)):
        span = np.maximum(hi[:, axis] - lo[:, axis], 0.0)
        center = (smin[axis] + smax[axis]) / 2.0
        positions[:, axis] = np.where(hi[:, axis] >= lo[:, axis],
                                      lo[:, axis] + u[:, col] * span,
                                      center)
    # objects start resting on the floor; vertical constraints lift them
    positions[:, 1] = half[:, 1]
    return positions, directions, fixed_mask


def _descend(kern: Kernels, repel: RepelField | None, pos: np.ndarray,
             half: np.ndarray, config: SolveConfig,
             rng: np.random.Generator, phase: str) -> tuple[np.ndarray, PhaseTrace]:
    """One descent phase: line-searched steps on the composite gradient.

    The composite direction is the analytic gradient of the differentiable
    losses plus pseudo-forces (custom overlap push, repels).  A step must
    strictly decrease the total loss; when no halved step does, a force-only
    step is taken instead so pushes can act across loss plateaus.
    """
    use_analytic_overlap = config.overlap_gradient == "analytic"
    loss_start = kern.total_loss(pos, half)
    loss = loss_start
    iterations = 0
    best = loss_start
    stalled = 0
    for _ in range(config.max_iters_per_phase):
        if repel is None:
            # without repels the only goal is the loss; force steps may
            # cross flat regions without improving it, so no stall exit
            if loss < config.convergence_loss:
                break
        else:
            # the repel phase never converges (noise keeps objects moving);
            # stop once the spreading has held the loss at its floor a while
            if loss < best - max(1e-12, 0.01 * best):
                best = loss
                stalled = 0
            else:
                stalled += 1
                if stalled >= config.repel_settle_iters:
                    break
        grad = kern.analytic_gradient(pos, half,
                                      include_overlap=use_analytic_overlap)
        force = np.zeros_like(pos)
        if not use_analytic_overlap:
            force += kern.overlap_force(pos, half)
        if repel is not None:
            force += repel.force(pos, half, rng)
        direction = grad + force
        dir_norm = float(np.max(np.abs(direction))) if direction.size else 0.0
        if dir_norm < 1e-15:
            break
        iterations += 1

        accepted = False
        alpha = config.step_size
        for _ in range(config.line_search_halvings):
            trial = pos - alpha * direction
            trial_loss = kern.total_loss(trial, half)
            if trial_loss < loss - 1e-18:
                pos = trial
                loss = trial_loss
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            force_norm = float(np.max(np.abs(force))) if force.size else 0.0
            if force_norm > 1e-15:
                pos = pos - config.step_size * force
                loss = kern.total_loss(pos, half)
            else:
                break  # local optimum with no forces left
    return pos, PhaseTrace(phase, iterations, loss_start, loss)


def solve(problem: ConstraintProblem, config: SolveConfig | None = None) -> SolveResult:
    """Find object positions and directions minimizing the constraint losses.

    Deterministic for a given ``config.rng_seed``.  Runs up to
    ``config.restarts`` independent attempts, stopping at the first whose
    loss beats the success threshold; otherwise returns the best attempt
    flagged unsatisfiable.
    """
    config = config or SolveConfig()
    if problem.connectivity is None:
        build_connectivity(problem)
    kern = Kernels(problem.constraints, problem.scene, len(problem.objects))
    repel = None
    if config.use_repels:
        repel = RepelField(problem, problem.connectivity, config.repel_noise_scale)

    seeds = np.random.SeedSequence(config.rng_seed).spawn(config.restarts)
    best: SolveResult | None = None
    restart_losses: list[float] = []
    for r in range(config.restarts):
        rng = np.random.default_rng(seeds[r])
        positions, directions, fixed_mask = _random_init(problem, rng)
        half = half_extents(problem, directions)
        positions, trace_a = _descend(kern, repel, positions, half, config,
                                      rng, "descent+repel")
        directions = assign_directions(positions, directions, problem)
        half = half_extents(problem, directions)
        positions, trace_b = _descend(kern, None, positions, half, config,
                                      rng, "descent")
        per = kern.loss_vector(positions, half)
        total = float(np.sum(per))
        restart_losses.append(total)
        result = SolveResult(
            layout=LayoutState(positions, directions, fixed_mask),
            final_loss=total,
            per_constraint_loss=per,
            iterations=trace_a.iterations + trace_b.iterations,
            phase_trace=[trace_a, trace_b],
            success=total < config.success_threshold,
            restart_index=r,
            unsatisfiable=False,
        )
        if best is None or result.final_loss < best.final_loss:
            best = result
        if result.success:
            break

    assert best is not None
    best.unsatisfiable = not best.success
    best.restart_losses = restart_losses
    return best
