"""Repel forces between disconnected parts of the scene.

Objects (and walls) that are not linked through NEXTTOWALL/ON/ADJACENT
constraints push each other apart during the first descent phase, so
unrelated furniture does not end up incidentally touching.  The push
magnitude is max(1 - d/d_max, 0) where d is the gap between the two boxes
(or box and wall) and d_max is a quarter of the smaller horizontal scene
dimension.  A small per-pair noise term breaks symmetric deadlocks; it is
gated off once a pair is out of range.  Repels act on horizontal
coordinates only and never contribute to the loss.
"""

from __future__ import annotations

import numpy as np

from ..compiler import Connectivity, ConstraintProblem
from ..geometry import Direction

__all__ = ["RepelField"]


class RepelField:
    def __init__(self, problem: ConstraintProblem, connectivity: Connectivity,
                 noise_scale: float = 0.02):
        size = problem.scene.size
        self.scene_min = problem.scene.min.copy()
        self.scene_max = problem.scene.max.copy()
        self.d_max = 0.25 * float(min(size[0], size[2]))
        self.noise = noise_scale * self.d_max

        comp = connectivity.object_component
        n = len(problem.objects)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if comp[i] != comp[j]]
        self.pair_a = np.array([p[0] for p in pairs], dtype=int)
        self.pair_b = np.array([p[1] for p in pairs], dtype=int)

        wall_pairs = [(i, d) for i in range(n) for d in Direction
                      if comp[i] != connectivity.wall_component[d]]
        self.wall_obj = np.array([p[0] for p in wall_pairs], dtype=int)
        self.wall_dir = [p[1] for p in wall_pairs]
        self.wall_axis = np.array([d.axis for d in self.wall_dir], dtype=int)
        self.wall_maxside = np.array(
            [d in (Direction.EAST, Direction.SOUTH) for d in self.wall_dir])
        # push direction away from the wall, on the wall's axis
        self.wall_push_sign = np.where(self.wall_maxside, -1.0, 1.0)

    @property
    def n_pairs(self) -> int:
        return len(self.pair_a) + len(self.wall_obj)

    def force(self, pos: np.ndarray, half: np.ndarray,
              rng: np.random.Generator) -> np.ndarray:
        """Repel contribution to the descent gradient at this state.

        Draws one noise sample per pair per call, so call sequence alone
        determines the random stream.
        """
        force = np.zeros_like(pos)
        mn = pos - half
        mx = pos + half

        if len(self.pair_a):
            a, b = self.pair_a, self.pair_b
            gap = np.maximum(np.maximum(mn[a] - mx[b], mn[b] - mx[a]), 0.0)
            d = np.sqrt(np.sum(gap**2, axis=1))
            mag = np.maximum(1.0 - d / self.d_max, 0.0)
            diff = pos[a] - pos[b]
            diff[:, 1] = 0.0
            norm = np.linalg.norm(diff, axis=1)
            unit = np.zeros_like(diff)
            ok = norm > 1e-12
            unit[ok] = diff[ok] / norm[ok, None]
            unit[~ok] = np.array([1.0, 0.0, 0.0])
            noise2 = rng.uniform(-self.noise, self.noise, size=(len(a), 2))
            active = mag > 0
            push = mag[:, None] * unit
            push[:, 0] += noise2[:, 0]
            push[:, 2] += noise2[:, 1]
            push[~active] = 0.0
            np.add.at(force, a, -push)
            np.add.at(force, b, push)

        if len(self.wall_obj):
            i = self.wall_obj
            ax = self.wall_axis
            d = np.where(self.wall_maxside,
                         self.scene_max[ax] - mx[i, ax],
                         mn[i, ax] - self.scene_min[ax])
            d = np.maximum(d, 0.0)
            mag = np.maximum(1.0 - d / self.d_max, 0.0)
            noise2 = rng.uniform(-self.noise, self.noise, size=(len(i), 2))
            active = mag > 0
            push = np.zeros((len(i), 3))
            push[np.arange(len(i)), ax] = mag * self.wall_push_sign
            push[:, 0] += noise2[:, 0]
            push[:, 2] += noise2[:, 1]
            push[~active] = 0.0
            np.add.at(force, i, -push)

        return force
