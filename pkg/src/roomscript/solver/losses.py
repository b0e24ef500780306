"""Vectorized constraint losses and gradients.

Boxes are derived from object center positions (N,3) and per-object half
extents (N,3); the half extents already account for each object's current
facing direction.  Every loss is non-negative and zero exactly when its
geometric predicate holds.  FACING contributes zero loss (it is resolved by
the discrete direction-assignment stage, not by descent).

NOOVERLAP is special: its loss is the volume of the overlap region of the
two (aura-inflated) boxes, but its gradient is replaced by a custom push
along the horizontal centroid-difference vector with magnitude equal to the
smallest side of the overlap region.  The volume loss is flat when one box
is inside the other along every axis; the custom push is not.
"""

from __future__ import annotations

import numpy as np

from ..compiler import Constraint, ConstraintKind, ConstraintProblem
from ..geometry import Cuboid, Direction

__all__ = ["Kernels", "constraint_loss", "constraint_gradient", "half_extents"]


def _relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def half_extents(problem: ConstraintProblem, directions: np.ndarray) -> np.ndarray:
    """Per-object half extents (hx, hy, hz) for the given facing directions."""
    w = np.array([o.width for o in problem.objects])
    d = np.array([o.depth for o in problem.objects])
    h = np.array([o.height for o in problem.objects])
    along_x = (directions == int(Direction.EAST)) | (directions == int(Direction.WEST))
    hx = np.where(along_x, d, w) / 2.0
    hz = np.where(along_x, w, d) / 2.0
    return np.column_stack([hx, h / 2.0, hz])


class _GradAccumulator:
    """Collects (object, axis, value) gradient contributions for one bincount."""

    def __init__(self, n_objects: int):
        self.n = n_objects
        self.flat: list[np.ndarray] = []
        self.vals: list[np.ndarray] = []

    def add(self, idx: np.ndarray, axis, vals: np.ndarray) -> None:
        self.flat.append(idx * 3 + axis)
        self.vals.append(vals)

    def add_vec(self, idx: np.ndarray, vals: np.ndarray) -> None:
        """Add (K,3) contributions for all three axes of the given objects."""
        base = (idx * 3)[:, None] + np.arange(3)[None, :]
        self.flat.append(base.ravel())
        self.vals.append(vals.ravel())

    def result(self) -> np.ndarray:
        if not self.flat:
            return np.zeros((self.n, 3))
        flat = np.concatenate(self.flat)
        vals = np.concatenate(self.vals)
        return np.bincount(flat, weights=vals, minlength=self.n * 3).reshape(self.n, 3)


class Kernels:
    """Grouped index arrays for evaluating a constraint list in bulk."""

    def __init__(self, constraints: list[Constraint], scene: Cuboid, n_objects: int):
        self.scene_min = scene.min.copy()
        self.scene_max = scene.max.copy()
        self.n_objects = n_objects
        self.n_constraints = len(constraints)

        wb, on, height, ntw, ceil, aligned, above = [], [], [], [], [], [], []
        adj0, adj1, adj2, noov = [], [], [], []
        for pos, c in enumerate(constraints):
            k = c.kind
            if k is ConstraintKind.WITHINBOUNDS:
                wb.append((pos, c.a))
            elif k is ConstraintKind.ON:
                on.append((pos, c.a, c.b, c.horizontal_only))
            elif k is ConstraintKind.HEIGHT:
                height.append((pos, c.a, c.height))
            elif k is ConstraintKind.NEXTTOWALL:
                maxside = c.wall in (Direction.EAST, Direction.SOUTH)
                ntw.append((pos, c.a, c.wall.axis, maxside, c.distance))
            elif k is ConstraintKind.CEILING:
                ceil.append((pos, c.a))
            elif k is ConstraintKind.ALIGNED:
                aligned.append((pos, c.a, c.b, 2 if c.westeast else 0))
            elif k is ConstraintKind.ABOVE:
                above.append((pos, c.a, c.b, 2 if c.wall.axis == 0 else 0))
            elif k is ConstraintKind.ADJACENT0:
                adj0.append((pos, c.a, c.b, c.distance))
            elif k is ConstraintKind.ADJACENT1:
                adj1.append((pos, c.a, c.b, c.direction.axis,
                             c.direction.positive, c.distance))
            elif k is ConstraintKind.ADJACENT2:
                adj2.append((pos, c.a, c.b, c.direction.axis, c.direction.positive,
                             not c.direction2.positive, c.distance))
            elif k is ConstraintKind.NOOVERLAP:
                noov.append((pos, c.a, c.b, c.aura_x, c.aura_z))
            elif k is ConstraintKind.FACING:
                pass  # zero loss; handled by direction assignment
            else:
                raise ValueError(f"unknown constraint kind {k!r}")

        def cols(rows, *casts):
            if not rows:
                return tuple(np.zeros(0, dtype=c) for c in casts)
            arr = list(zip(*rows))
            return tuple(np.asarray(col, dtype=c) for col, c in zip(arr, casts))

        self.wb_pos, self.wb_a = cols(wb, int, int)
        self.on_pos, self.on_a, self.on_b, self.on_horiz = cols(on, int, int, int, bool)
        self.h_pos, self.h_a, self.h_target = cols(height, int, int, float)
        (self.ntw_pos, self.ntw_a, self.ntw_axis,
         self.ntw_maxside, self.ntw_dist) = cols(ntw, int, int, int, bool, float)
        self.ceil_pos, self.ceil_a = cols(ceil, int, int)
        (self.al_pos, self.al_a, self.al_b,
         self.al_coord) = cols(aligned, int, int, int, int)
        (self.ab_pos, self.ab_a, self.ab_b,
         self.ab_axis) = cols(above, int, int, int, int)
        (self.a0_pos, self.a0_a, self.a0_b,
         self.a0_dist) = cols(adj0, int, int, int, float)
        (self.a1_pos, self.a1_a, self.a1_b, self.a1_axis,
         self.a1_positive, self.a1_dist) = cols(adj1, int, int, int, int, bool, float)
        (self.a2_pos, self.a2_a, self.a2_b, self.a2_axis, self.a2_positive,
         self.a2_align_min, self.a2_dist) = cols(adj2, int, int, int, int, bool,
                                                 bool, float)
        (self.nov_pos, self.nov_a, self.nov_b,
         self.nov_ax, self.nov_az) = cols(noov, int, int, int, float, float)
        self.a1_perp = np.where(self.a1_axis == 0, 2, 0)
        self.a2_perp = np.where(self.a2_axis == 0, 2, 0)
        self.nov_inflate = np.column_stack([self.nov_ax,
                                            np.zeros(len(self.nov_ax)),
                                            self.nov_az])

    # ------------------------------------------------------------------
    # losses
    # ------------------------------------------------------------------

    def loss_vector(self, pos: np.ndarray, half: np.ndarray) -> np.ndarray:
        """Loss of every constraint, aligned with the compiled constraint list."""
        out = np.zeros(self.n_constraints)
        mn = pos - half
        mx = pos + half

        if len(self.wb_pos):
            a = self.wb_a
            low = _relu(self.scene_min - mn[a])
            high = _relu(mx[a] - self.scene_max)
            out[self.wb_pos] = np.sum(low**2 + high**2, axis=1)

        if len(self.on_pos):
            a, b = self.on_a, self.on_b
            total = np.where(self.on_horiz, 0.0, (mx[b, 1] - mn[a, 1]) ** 2)
            for t in (0, 2):
                p = _relu(mn[b, t] - mn[a, t])
                q = _relu(mx[a, t] - mx[b, t])
                s = _relu(2.0 * (half[a, t] - half[b, t]))
                total = total + p**2 + q**2 - 0.5 * s**2
            out[self.on_pos] = total

        if len(self.h_pos):
            out[self.h_pos] = (mn[self.h_a, 1] - self.h_target) ** 2

        if len(self.ntw_pos):
            a, ax = self.ntw_a, self.ntw_axis
            slack = np.where(self.ntw_maxside,
                             self.scene_max[ax] - mx[a, ax] - self.ntw_dist,
                             mn[a, ax] - self.scene_min[ax] - self.ntw_dist)
            out[self.ntw_pos] = _relu(slack) ** 2

        if len(self.ceil_pos):
            out[self.ceil_pos] = (mx[self.ceil_a, 1] - self.scene_max[1]) ** 2

        if len(self.al_pos):
            diff = pos[self.al_a, self.al_coord] - pos[self.al_b, self.al_coord]
            out[self.al_pos] = diff**2

        if len(self.ab_pos):
            a, b, t = self.ab_a, self.ab_b, self.ab_axis
            a_small = half[a, t] < half[b, t]
            mn_small = np.where(a_small, mn[a, t], mn[b, t])
            mx_small = np.where(a_small, mx[a, t], mx[b, t])
            mn_big = np.where(a_small, mn[b, t], mn[a, t])
            mx_big = np.where(a_small, mx[b, t], mx[a, t])
            out[self.ab_pos] = (_relu(mn_big - mn_small) ** 2
                                + _relu(mx_small - mx_big) ** 2)

        if len(self.a0_pos):
            a, b = self.a0_a, self.a0_b
            gap = _relu(np.maximum(mn[a] - mx[b], mn[b] - mx[a]))
            dist = np.sqrt(np.sum(gap**2, axis=1))
            out[self.a0_pos] = (dist - self.a0_dist) ** 2

        if len(self.a1_pos):
            out[self.a1_pos] = self._adj_loss(
                mn, mx, half, self.a1_a, self.a1_b, self.a1_axis, self.a1_perp,
                self.a1_positive, self.a1_dist, align_min=None)

        if len(self.a2_pos):
            out[self.a2_pos] = self._adj_loss(
                mn, mx, half, self.a2_a, self.a2_b, self.a2_axis, self.a2_perp,
                self.a2_positive, self.a2_dist, align_min=self.a2_align_min)

        if len(self.nov_pos):
            o = self._overlap_extents(mn, mx)
            positive = np.all(o > 0, axis=1)
            out[self.nov_pos] = np.where(positive, np.prod(o, axis=1), 0.0)

        return out

    def _adj_loss(self, mn, mx, half, a, b, n, t, positive, dist, align_min):
        gap = np.where(positive,
                       mn[a, n] - mx[b, n],
                       mn[b, n] - mx[a, n])
        loss = _relu(gap - dist) ** 2 + _relu(-gap) ** 2
        q = _relu(mx[a, t] - mx[b, t])
        s = _relu(2.0 * (half[a, t] - half[b, t]))
        loss = loss + q**2 - 0.5 * s**2
        if align_min is None:
            p = _relu(mn[b, t] - mn[a, t])
            loss = loss + p**2
        else:
            c = np.where(align_min,
                         mn[b, t] - mn[a, t],
                         mx[b, t] - mx[a, t])
            loss = loss + c**2
        return loss

    def _overlap_extents(self, mn, mx):
        a, b = self.nov_a, self.nov_b
        lo = np.maximum(mn[a] - self.nov_inflate, mn[b])
        hi = np.minimum(mx[a] + self.nov_inflate, mx[b])
        return hi - lo

    def total_loss(self, pos: np.ndarray, half: np.ndarray) -> float:
        return float(np.sum(self.loss_vector(pos, half)))

    # ------------------------------------------------------------------
    # gradients
    # ------------------------------------------------------------------

    def analytic_gradient(self, pos: np.ndarray, half: np.ndarray,
                          include_overlap: bool = False) -> np.ndarray:
        """Gradient of the total loss over positions.

        NOOVERLAP's analytic volume gradient is included only on request
        (the solver normally replaces it with the custom push from
        ``overlap_force``).
        """
        acc = _GradAccumulator(len(pos))
        mn = pos - half
        mx = pos + half

        if len(self.wb_pos):
            a = self.wb_a
            g = -2.0 * _relu(self.scene_min - mn[a]) + 2.0 * _relu(mx[a] - self.scene_max)
            acc.add_vec(a, g)

        if len(self.on_pos):
            a, b = self.on_a, self.on_b
            v = np.where(self.on_horiz, 0.0, mx[b, 1] - mn[a, 1])
            acc.add(a, 1, -2.0 * v)
            acc.add(b, 1, 2.0 * v)
            for t in (0, 2):
                p = _relu(mn[b, t] - mn[a, t])
                q = _relu(mx[a, t] - mx[b, t])
                acc.add(a, t, -2.0 * p + 2.0 * q)
                acc.add(b, t, 2.0 * p - 2.0 * q)

        if len(self.h_pos):
            acc.add(self.h_a, 1, 2.0 * (mn[self.h_a, 1] - self.h_target))

        if len(self.ntw_pos):
            a, ax = self.ntw_a, self.ntw_axis
            slack = np.where(self.ntw_maxside,
                             self.scene_max[ax] - mx[a, ax] - self.ntw_dist,
                             mn[a, ax] - self.scene_min[ax] - self.ntw_dist)
            sign = np.where(self.ntw_maxside, -1.0, 1.0)
            acc.add(a, ax, 2.0 * _relu(slack) * sign)

        if len(self.ceil_pos):
            a = self.ceil_a
            acc.add(a, 1, 2.0 * (mx[a, 1] - self.scene_max[1]))

        if len(self.al_pos):
            diff = pos[self.al_a, self.al_coord] - pos[self.al_b, self.al_coord]
            acc.add(self.al_a, self.al_coord, 2.0 * diff)
            acc.add(self.al_b, self.al_coord, -2.0 * diff)

        if len(self.ab_pos):
            a, b, t = self.ab_a, self.ab_b, self.ab_axis
            a_small = half[a, t] < half[b, t]
            small = np.where(a_small, a, b)
            big = np.where(a_small, b, a)
            u = _relu(mn[big, t] - mn[small, t])
            v2 = _relu(mx[small, t] - mx[big, t])
            acc.add(big, t, 2.0 * u - 2.0 * v2)
            acc.add(small, t, -2.0 * u + 2.0 * v2)

        if len(self.a0_pos):
            a, b = self.a0_a, self.a0_b
            low = mn[a] - mx[b]
            high = mn[b] - mx[a]
            gap = _relu(np.maximum(low, high))
            dist = np.sqrt(np.sum(gap**2, axis=1))
            active = dist > 0
            coef = np.zeros_like(dist)
            coef[active] = 2.0 * (dist[active] - self.a0_dist[active]) / dist[active]
            sign_a = np.where(low > 0, 1.0, np.where(high > 0, -1.0, 0.0))
            contrib = coef[:, None] * gap * sign_a
            acc.add_vec(a, contrib)
            acc.add_vec(b, -contrib)

        if len(self.a1_pos):
            self._adj_grad(acc, mn, mx, half, self.a1_a, self.a1_b, self.a1_axis,
                           self.a1_perp, self.a1_positive, self.a1_dist,
                           align_min=None)

        if len(self.a2_pos):
            self._adj_grad(acc, mn, mx, half, self.a2_a, self.a2_b, self.a2_axis,
                           self.a2_perp, self.a2_positive, self.a2_dist,
                           align_min=self.a2_align_min)

        if include_overlap and len(self.nov_pos):
            a, b = self.nov_a, self.nov_b
            mna = mn[a] - self.nov_inflate
            mxa = mx[a] + self.nov_inflate
            lo = np.maximum(mna, mn[b])
            hi = np.minimum(mxa, mx[b])
            o = hi - lo
            positive = np.all(o > 0, axis=1)
            if np.any(positive):
                others = np.empty_like(o)
                others[:, 0] = o[:, 1] * o[:, 2]
                others[:, 1] = o[:, 0] * o[:, 2]
                others[:, 2] = o[:, 0] * o[:, 1]
                dhi_a = (mxa <= mx[b]).astype(float)
                dlo_a = (mna >= mn[b]).astype(float)
                ga = (dhi_a - dlo_a) * others
                gb = ((1.0 - dhi_a) - (1.0 - dlo_a)) * others
                ga[~positive] = 0.0
                gb[~positive] = 0.0
                acc.add_vec(a, ga)
                acc.add_vec(b, gb)

        return acc.result()

    def _adj_grad(self, acc, mn, mx, half, a, b, n, t, positive, dist, align_min):
        gap = np.where(positive, mn[a, n] - mx[b, n], mn[b, n] - mx[a, n])
        dgap = 2.0 * _relu(gap - dist) - 2.0 * _relu(-gap)
        sig = np.where(positive, 1.0, -1.0)
        acc.add(a, n, dgap * sig)
        acc.add(b, n, -dgap * sig)

        q = _relu(mx[a, t] - mx[b, t])
        if align_min is None:
            p = _relu(mn[b, t] - mn[a, t])
        else:
            p = np.where(align_min,
                         mn[b, t] - mn[a, t],
                         mx[b, t] - mx[a, t])
        acc.add(a, t, 2.0 * q - 2.0 * p)
        acc.add(b, t, -2.0 * q + 2.0 * p)

    def overlap_force(self, pos: np.ndarray, half: np.ndarray) -> np.ndarray:
        """Custom NOOVERLAP pseudo-gradient.

        For every overlapping pair, push the two objects apart along the
        horizontal line between their centers, with magnitude equal to the
        smallest side of the overlap region.  Returns an array to be added
        to the descent gradient.
        """
        force = np.zeros_like(pos)
        if not len(self.nov_pos):
            return force
        mn = pos - half
        mx = pos + half
        o = self._overlap_extents(mn, mx)
        positive = np.all(o > 0, axis=1)
        if not np.any(positive):
            return force
        a = self.nov_a[positive]
        b = self.nov_b[positive]
        mag = np.min(o[positive], axis=1)
        diff = pos[a] - pos[b]
        diff[:, 1] = 0.0
        norm = np.linalg.norm(diff, axis=1)
        unit = np.zeros_like(diff)
        ok = norm > 1e-12
        unit[ok] = diff[ok] / norm[ok, None]
        unit[~ok] = np.array([1.0, 0.0, 0.0])
        push = mag[:, None] * unit
        np.add.at(force, a, -push)
        np.add.at(force, b, push)
        return force


# ----------------------------------------------------------------------
# single-constraint views (used by tests and diagnostics)
# ----------------------------------------------------------------------


def constraint_loss(constraint: Constraint, pos: np.ndarray, half: np.ndarray,
                    scene: Cuboid) -> float:
    """Loss of one constraint at the given state."""
    kern = Kernels([constraint], scene, len(pos))
    return float(kern.loss_vector(np.asarray(pos, dtype=float),
                                  np.asarray(half, dtype=float))[0])


def constraint_gradient(constraint: Constraint, pos: np.ndarray, half: np.ndarray,
                        scene: Cuboid) -> np.ndarray:
    """Position gradient of one constraint.

    All kinds are the analytic gradient of their loss except NOOVERLAP,
    which returns the custom centroid push.
    """
    kern = Kernels([constraint], scene, len(pos))
    p = np.asarray(pos, dtype=float)
    h = np.asarray(half, dtype=float)
    if constraint.kind is ConstraintKind.NOOVERLAP:
        return kern.overlap_force(p, h)
    return kern.analytic_gradient(p, h)
