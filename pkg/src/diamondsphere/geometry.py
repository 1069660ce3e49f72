"""Spherical primitives: unit vectors, caps, cap counting and test grids.

Conventions used throughout the package:

* Heights are cosines of colatitude.  A parallel "at height h" is the
  circle {(x, y, z) : z = h}; partition boundaries and cap heights are
  stored the same way, so no arccos round-trips are needed.
* A spherical cap with center c and height t is the closed set
  {x : <x, c> >= t}.  Counting against a cap supports both a closed and
  an open mode; a point is treated as lying on the boundary when
  |<x, c> - t| <= BOUNDARY_TOL.
* Angles are radians, longitudes live in [0, 2*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Points of the ensemble sit exactly on the circles we test against, so
# boundary ties are the normal case, not an edge case.  The band below is
# wide enough to absorb float noise in generated coordinates and narrow
# enough never to capture a second parallel.
BOUNDARY_TOL = 1e-10

# Cross products with norm at or below this are treated as degenerate
# (coincident or numerically collinear inputs).
DEGENERATE_TOL = 1e-12

# |x|^2 must match 1 to this tolerance for a vector to count as "unit".
UNIT_NORM_TOL = 1e-12

TWO_PI = 2.0 * math.pi
SPHERE_AREA = 4.0 * math.pi


class DegenerateCapError(ValueError):
    """Raised when a cap through given points is not uniquely determined."""


class DuplicatePointError(ValueError):
    """Raised by kernels that cannot tolerate coincident points."""


@dataclass(frozen=True)
class UnitVec:
    """A point on the unit sphere.

    The constructor validates the norm; use :meth:`normalized` to build
    one from an arbitrary nonzero vector.
    """

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        n2 = self.x * self.x + self.y * self.y + self.z * self.z
        if not math.isfinite(n2) or abs(n2 - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"not a unit vector: norm^2 = {n2!r}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVec":
        n = math.sqrt(x * x + y * y + z * z)
        if n <= DEGENERATE_TOL:
            raise ValueError("cannot normalize a (near-)zero vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_array(cls, a) -> "UnitVec":
        x, y, z = (float(v) for v in a)
        return cls.normalized(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def dot(self, other: "UnitVec") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def antipode(self) -> "UnitVec":
        return UnitVec(-self.x, -self.y, -self.z)

    @property
    def phi(self) -> float:
        """Longitude in [0, 2*pi)."""
        return math.atan2(self.y, self.x) % TWO_PI


NORTH_POLE = UnitVec(0.0, 0.0, 1.0)
SOUTH_POLE = UnitVec(0.0, 0.0, -1.0)


@dataclass(frozen=True)
class SphericalCap:
    """Closed cap {x : <x, center> >= t}, with -1 <= t <= 1."""

    center: UnitVec
    t: float

    def __post_init__(self) -> None:
        if not -1.0 <= self.t <= 1.0:
            raise ValueError(f"cap height must lie in [-1, 1], got {self.t!r}")

    @property
    def area(self) -> float:
        return cap_area(self)

    @property
    def area_fraction(self) -> float:
        return (1.0 - self.t) / 2.0


class PointSet:
    """An immutable batch of unit vectors with optional provenance tags.

    Parameters
    ----------
    coords : (N, 3) array
        Unit vectors, one per row.
    parallel : (N,) int array, optional
        For generated ensembles: 0 for the north pole, 1..p for the
        parallels top to bottom, p + 1 for the south pole.
    index_in_parallel : (N,) int array, optional
        Position i (0-based) of the point within its parallel.
    """

    __slots__ = ("coords", "parallel", "index_in_parallel")

    def __init__(self, coords, parallel=None, index_in_parallel=None):
        coords = np.ascontiguousarray(coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 3 or coords.shape[0] < 1:
            raise ValueError("coords must be a nonempty (N, 3) array")
        n2 = np.einsum("ij,ij->i", coords, coords)
        worst = float(np.max(np.abs(n2 - 1.0)))
        if worst > UNIT_NORM_TOL:
            raise ValueError(f"row norms deviate from 1 by up to {worst:.3e}")
        coords.setflags(write=False)
        self.coords = coords
        for name, arr in (("parallel", parallel), ("index_in_parallel", index_in_parallel)):
            if arr is not None:
                arr = np.ascontiguousarray(arr, dtype=np.int64)
                if arr.shape != (coords.shape[0],):
                    raise ValueError(f"{name} must have shape (N,)")
                arr.setflags(write=False)
            setattr(self, name, arr)

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def has_provenance(self) -> bool:
        return self.parallel is not None and self.index_in_parallel is not None

    def point(self, i: int) -> UnitVec:
        x, y, z = self.coords[i]
        return UnitVec.normalized(float(x), float(y), float(z))


def _as_coords(points) -> np.ndarray:
    if isinstance(points, PointSet):
        return points.coords
    return np.asarray(points, dtype=float)


def chord_distance(a: UnitVec, b: UnitVec) -> float:
    """Euclidean (chordal) distance between two sphere points."""
    dx, dy, dz = a.x - b.x, a.y - b.y, a.z - b.z
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def cap_area(cap: SphericalCap) -> float:
    """Surface area 2*pi*(1 - t) of a cap of height t."""
    return TWO_PI * (1.0 - cap.t)


def count_in_cap(points, cap: SphericalCap, mode: str = "closed") -> int:
    """Count points inside a cap.

    mode="closed" counts <x, c> >= t - BOUNDARY_TOL, mode="open" counts
    <x, c> > t + BOUNDARY_TOL, so points within the boundary band are
    included by the closed count and excluded by the open one.
    """
    coords = _as_coords(points)
    dots = coords @ cap.center.as_array()
    if mode == "closed":
        return int(np.count_nonzero(dots >= cap.t - BOUNDARY_TOL))
    if mode == "open":
        return int(np.count_nonzero(dots > cap.t + BOUNDARY_TOL))
    raise ValueError(f"mode must be 'closed' or 'open', got {mode!r}")


def circumcap(a: UnitVec, b: UnitVec, c: UnitVec) -> SphericalCap:
    """The cap whose boundary circle passes through three given points.

    The center is the normalized cross product (b - a) x (c - a); the
    antipodal center gives the complementary cap.  Raises
    DegenerateCapError when the three points do not determine a circle
    (coincident or numerically collinear inputs).
    """
    av, bv, cv = a.as_array(), b.as_array(), c.as_array()
    n = np.cross(bv - av, cv - av)
    nn = float(np.linalg.norm(n))
    if nn <= DEGENERATE_TOL:
        raise DegenerateCapError("triple does not span a circle")
    center = UnitVec(*(n / nn))
    t = max(-1.0, min(1.0, center.dot(a)))
    return SphericalCap(center, t)


def pair_diametral_cap(a: UnitVec, b: UnitVec) -> SphericalCap:
    """The cap on whose boundary a and b sit diametrically opposite.

    Its center is the normalized midpoint of a and b.  Raises
    DegenerateCapError for coincident inputs (no unique cap) and
    antipodal inputs (center undefined).
    """
    if chord_distance(a, b) <= DEGENERATE_TOL:
        raise DegenerateCapError("points coincide; diametral cap not unique")
    sx, sy, sz = a.x + b.x, a.y + b.y, a.z + b.z
    n = math.sqrt(sx * sx + sy * sy + sz * sz)
    if n <= DEGENERATE_TOL:
        raise DegenerateCapError("points are antipodal; diametral cap undefined")
    center = UnitVec(sx / n, sy / n, sz / n)
    t = max(-1.0, min(1.0, center.dot(a)))
    return SphericalCap(center, t)


def spiral_points(k: int) -> np.ndarray:
    """Deterministic spiral grid of k near-uniform directions.

    Golden-angle spiral: heights march linearly through (-1, 1) while the
    longitude advances by pi*(3 - sqrt(5)) per step.  Used as a test grid
    for covering estimates and as an equal-area node set for quadrature.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    i = np.arange(k, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / k
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = i * (math.pi * (3.0 - math.sqrt(5.0)))
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
