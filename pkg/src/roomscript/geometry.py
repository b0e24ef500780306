"""Coordinate conventions, cuboid algebra, and the bounding-box distortion metric.

Conventions used throughout the package:

* The frame is y-up and right-handed.  EAST is +x, WEST is -x, SOUTH is +z,
  NORTH is -z.  The floor of a scene is the y=0 plane.
* An object's ``width`` is the horizontal dimension perpendicular to its
  front-facing direction, ``depth`` is the dimension along it, ``height`` is
  vertical.  Facing EAST or WEST therefore puts depth along x and width
  along z; facing NORTH or SOUTH swaps the two.
* All lengths are meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

__all__ = [
    "Direction",
    "Axis",
    "Rotation",
    "Cuboid",
    "InvalidDimsError",
    "footprint_bbox",
    "footprint_half_extents",
    "bbd",
    "min_bbd",
    "overlap_region",
    "cuboid_distance",
]


class InvalidDimsError(ValueError):
    """Raised when a box dimension is zero or negative."""


class Direction(IntEnum):
    """One of the four cardinal directions an object can face."""

    EAST = 0
    NORTH = 1
    WEST = 2
    SOUTH = 3

    def opposite(self) -> "Direction":
        return Direction((self + 2) % 4)

    @property
    def forward(self) -> np.ndarray:
        """Unit forward vector (EAST=+x, NORTH=-z, WEST=-x, SOUTH=+z)."""
        return _FORWARD[self].copy()

    @property
    def axis(self) -> int:
        """Index of the horizontal axis the direction runs along (0=x, 2=z)."""
        return 0 if self in (Direction.EAST, Direction.WEST) else 2

    @property
    def positive(self) -> bool:
        """Whether the forward vector points along the positive axis."""
        return self in (Direction.EAST, Direction.SOUTH)


_FORWARD = {
    Direction.EAST: np.array([1.0, 0.0, 0.0]),
    Direction.NORTH: np.array([0.0, 0.0, -1.0]),
    Direction.WEST: np.array([-1.0, 0.0, 0.0]),
    Direction.SOUTH: np.array([0.0, 0.0, 1.0]),
}


class Axis(IntEnum):
    """Alignment axis for ALIGNED constraints.

    WESTEAST aligns the z coordinates of object centers (objects sit on a
    west-east line); NORTHSOUTH aligns the x coordinates.
    """

    WESTEAST = 0
    NORTHSOUTH = 1

    @property
    def aligned_coord(self) -> int:
        """Index of the coordinate that is equalized (2=z for WESTEAST)."""
        return 2 if self is Axis.WESTEAST else 0


class Rotation(IntEnum):
    """The four axis-aligned rotations tried when matching bounding boxes.

    Each rotation acts on an axis-aligned box purely as a permutation of its
    side lengths:

    * ``IDENTITY`` (0,0,0):   (sx, sy, sz) -> (sx, sy, sz)
    * ``YAW_90``   (0,90,0):  (sx, sy, sz) -> (sz, sy, sx)   x and z swap
    * ``PITCH_90`` (90,0,0):  (sx, sy, sz) -> (sx, sz, sy)   y and z swap
    * ``PITCH_YAW`` (90,0,90): (sx, sy, sz) -> (sy, sz, sx)  full cycle

    The same table is used for size filtering and upright correction.
    """

    IDENTITY = 0
    YAW_90 = 1
    PITCH_90 = 2
    PITCH_YAW = 3

    @property
    def euler(self) -> tuple[int, int, int]:
        return _EULER[self]

    def permute(self, sides) -> np.ndarray:
        """Apply the rotation to a vector of box side lengths."""
        s = np.asarray(sides, dtype=float)
        return s[list(_PERM[self])]


_EULER = {
    Rotation.IDENTITY: (0, 0, 0),
    Rotation.YAW_90: (0, 90, 0),
    Rotation.PITCH_90: (90, 0, 0),
    Rotation.PITCH_YAW: (90, 0, 90),
}

# Index i of the permutation gives which input side lands on output axis i.
_PERM = {
    Rotation.IDENTITY: (0, 1, 2),
    Rotation.YAW_90: (2, 1, 0),
    Rotation.PITCH_90: (0, 2, 1),
    Rotation.PITCH_YAW: (1, 2, 0),
}


@dataclass(frozen=True)
class Cuboid:
    """Axis-aligned box given by its two extreme corners, in meters."""

    min: np.ndarray
    max: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "min", np.asarray(self.min, dtype=float))
        object.__setattr__(self, "max", np.asarray(self.max, dtype=float))
        if self.min.shape != (3,) or self.max.shape != (3,):
            raise ValueError("cuboid corners must be 3-vectors")
        if np.any(self.min > self.max):
            raise ValueError(f"cuboid min {self.min} exceeds max {self.max}")

    @property
    def size(self) -> np.ndarray:
        return self.max - self.min

    @property
    def center(self) -> np.ndarray:
        return (self.min + self.max) / 2.0

    @property
    def volume(self) -> float:
        return float(np.prod(self.size))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cuboid):
            return NotImplemented
        return bool(np.array_equal(self.min, other.min) and np.array_equal(self.max, other.max))

    def __hash__(self) -> int:
        return hash((tuple(self.min), tuple(self.max)))


def footprint_half_extents(width: float, depth: float, height: float,
                           direction: Direction) -> np.ndarray:
    """Half extents (hx, hy, hz) of an object's box for a facing direction."""
    if width <= 0 or depth <= 0 or height <= 0:
        raise InvalidDimsError(
            f"dimensions must be positive, got ({width}, {depth}, {height})")
    if direction.axis == 0:  # facing east/west: depth runs along x
        return np.array([depth / 2.0, height / 2.0, width / 2.0])
    return np.array([width / 2.0, height / 2.0, depth / 2.0])


def footprint_bbox(center, width: float, depth: float, height: float,
                   direction: Direction) -> Cuboid:
    """Axis-aligned box of an object centered at ``center`` facing ``direction``."""
    c = np.asarray(center, dtype=float)
    h = footprint_half_extents(width, depth, height, direction)
    return Cuboid(c - h, c + h)


def _normalized_sides(sides) -> np.ndarray:
    s = np.asarray(sides, dtype=float)
    if s.shape != (3,):
        raise InvalidDimsError(f"expected 3 side lengths, got {s!r}")
    if np.any(s <= 0):
        raise InvalidDimsError(f"side lengths must be positive, got {s}")
    return s / np.cbrt(float(np.prod(s)))


def bbd(box, target) -> float:
    """Bounding-box distortion between two boxes given as side-length triples.

    Sum over the three axes of |log(b_i / t_i)| where each side is first
    divided by the cube root of its own box volume.  The normalization makes
    the metric invariant to uniform scaling of either box, so it compares
    aspect ratios only.
    """
    b = _normalized_sides(box)
    t = _normalized_sides(target)
    return float(np.sum(np.abs(np.log(b / t))))


def min_bbd(box, target) -> tuple[float, Rotation]:
    """Minimum distortion over the four axis-aligned rotations of ``box``.

    Ties are broken toward IDENTITY, then enum order.
    """
    best_val = math.inf
    best_rot = Rotation.IDENTITY
    for rot in Rotation:
        val = bbd(rot.permute(box), target)
        if val < best_val:
            best_val = val
            best_rot = rot
    return best_val, best_rot


def overlap_region(a: Cuboid, b: Cuboid) -> Cuboid | None:
    """Intersection cuboid of two boxes, or None if they do not overlap.

    Touching (zero extent on some axis) counts as no overlap.
    """
    lo = np.maximum(a.min, b.min)
    hi = np.minimum(a.max, b.max)
    if np.any(hi - lo <= 0):
        return None
    return Cuboid(lo, hi)


def cuboid_distance(a: Cuboid, b: Cuboid) -> float:
    """Euclidean gap between two boxes; 0 if they touch or overlap."""
    gap = np.maximum(np.maximum(a.min - b.max, b.min - a.max), 0.0)
    return float(np.linalg.norm(gap))
