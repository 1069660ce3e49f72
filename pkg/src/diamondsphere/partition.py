"""Equal-area partition companion to a generated model.

The sphere splits into two polar caps and, per parallel, a ring of
congruent "rectangles" in longitude/height coordinates.  Boundary
heights follow the exact recurrence h_1 = 1 - 2/N,
h_{j+1} = h_j - 2 r_j / N, equivalently h_j = 1 - 2 N_j / N, so every
region has area exactly 4*pi/N and parallel j is strictly interior to
its collar: h_{j+1} < z_j < h_j.  All of that is certified in rational
arithmetic; floats only enter when locating arbitrary points.

Region ownership conventions (fixed for the whole package):

* height intervals are half-open downward, h_lo < z <= h_hi, i.e. every
  region owns its upper edge; the north cap additionally owns the pole
  and the south cap owns both its upper edge and the south pole;
* longitude intervals are half-open, phi_lo <= phi < phi_hi, with
  boundaries at (2*pi*i + pi)/r_j + theta_j so that points sit at the
  exact centers of their cells.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .ensemble import DiamondModel
from .geometry import TWO_PI, PointSet, UnitVec

SPHERE_AREA = 4.0 * math.pi


class VerificationFailure(RuntimeError):
    """A certified partition property failed to hold."""


@dataclass(frozen=True)
class Region:
    """One cell of the partition.

    kind is "cap_north", "cap_south" or "rect".  For rectangles, j is
    the parallel whose points the ring matches (1..p) and i the cell
    position within the ring; phi bounds satisfy 0 <= phi_lo < 2*pi and
    phi_hi = phi_lo + 2*pi/r (wrap past 2*pi implied).  Caps carry
    j = i = 0 and no phi bounds.
    """

    region_id: int
    kind: str
    j: int
    i: int
    phi_lo: float | None
    phi_hi: float | None
    h_lo: float
    h_hi: float
    h_lo_exact: Fraction
    h_hi_exact: Fraction
    matched_point: int


@dataclass(frozen=True)
class SideLengths:
    """Side data for the collar of northern parallel j.

    horizontal_lo / horizontal_hi are the two horizontal arc lengths
    2*pi*sqrt(1 - h^2)/r_j at the collar's bounding heights (lo <= hi;
    they coincide for the equatorial collar).  vertical is the geodesic
    height of a cell and diameter the maximal chord between cell corners.
    """

    horizontal_lo: float
    horizontal_hi: float
    vertical: float
    diameter: float


class Partition:
    """Area-regular partition of the sphere matched to a model's points."""

    def __init__(self, model: DiamondModel):
        self.model = model
        N = model.N
        M = model.M

        h: list[Fraction] = [1 - Fraction(2, N)]
        for j in range(1, M):
            h.append(h[-1] - Fraction(2 * model.r[j - 1], N))
        # The closed form h_j = 1 - 2 N_j / N must reproduce the recurrence.
        for j in range(1, M + 1):
            assert h[j - 1] == 1 - Fraction(2 * model.partial_count(j), N)
        assert h[M - 1] == Fraction(model.r[M - 1], N) > 0
        self.h_exact: tuple[Fraction, ...] = tuple(h)
        self.h = np.array([float(v) for v in h])

        # Collars in region-id order: north cap (region 0), one ring per
        # parallel top to bottom, south cap (region N - 1).  The mirror
        # parallel 2M - j reuses collar heights of j, negated, and brings
        # its own rotation offset.
        self._collars: list[dict] = []
        rid = 1
        for jp in range(1, model.p + 1):
            j = min(jp, 2 * M - jp)
            upper, lower = self._collar_heights(j)
            if jp > M:
                upper, lower = -lower, -upper
            self._collars.append({
                "jp": jp,
                "r": model.r[jp - 1],
                "theta": float(model.theta[jp - 1]),
                "h_hi": upper,
                "h_lo": lower,
                "first_region": rid,
                "first_point": model.partial_count(jp),
            })
            rid += model.r[jp - 1]
        assert rid == N - 1
        self.n_regions = N
        self._starts = [c["first_region"] for c in self._collars]
        self._point_firsts = [c["first_point"] for c in self._collars]
        # Per-parallel gather tables so locate_many is O(len(coords)).
        self._r_by_jp = np.array([c["r"] for c in self._collars], dtype=np.int64)
        self._theta_by_jp = np.array([c["theta"] for c in self._collars])
        self._first_region_by_jp = np.array(
            [c["first_region"] for c in self._collars], dtype=np.int64
        )

        # Height boundaries bottom-up for locate():
        # -1 < -h_1 < ... < -h_M < h_M < ... < h_1 < 1.
        asc = [-1.0]
        asc += [float(-v) for v in self.h_exact]
        asc += [float(v) for v in reversed(self.h_exact)]
        asc.append(1.0)
        self._asc_bounds = np.array(asc)
        assert np.all(np.diff(self._asc_bounds) > 0)

    def _collar_heights(self, j: int) -> tuple[Fraction, Fraction]:
        """(upper, lower) exact heights of northern collar j; j = M spans the equator."""
        M = self.model.M
        if j < M:
            return self.h_exact[j - 1], self.h_exact[j]
        return self.h_exact[M - 1], -self.h_exact[M - 1]

    # -- region materialization -------------------------------------------

    def region(self, region_id: int) -> Region:
        N = self.model.N
        if region_id == 0:
            h1 = self.h_exact[0]
            return Region(0, "cap_north", 0, 0, None, None,
                          float(h1), 1.0, h1, Fraction(1), 0)
        if region_id == N - 1:
            h1 = self.h_exact[0]
            return Region(N - 1, "cap_south", 0, 0, None, None,
                          -1.0, float(-h1), Fraction(-1), -h1, N - 1)
        if not 0 < region_id < N - 1:
            raise IndexError(f"region id {region_id} outside 0..{N - 1}")
        col = self._collars[bisect_right(self._starts, region_id) - 1]
        i = region_id - col["first_region"]
        r = col["r"]
        phi_lo = (TWO_PI * i / r + math.pi / r + col["theta"]) % TWO_PI
        return Region(
            region_id, "rect", col["jp"], i, phi_lo, phi_lo + TWO_PI / r,
            float(col["h_lo"]), float(col["h_hi"]), col["h_lo"], col["h_hi"],
            col["first_point"] + (i + 1) % r,
        )

    def __iter__(self) -> Iterator[Region]:
        for rid in range(self.n_regions):
            yield self.region(rid)

    def __len__(self) -> int:
        return self.n_regions

    @property
    def collars(self) -> tuple[dict, ...]:
        """Ring descriptors in region-id order; heights are exact Fractions."""
        return tuple(dict(c) for c in self._collars)

    # -- point/region matching --------------------------------------------

    def region_of_point(self, point_index: int) -> int:
        """The region a generated point owns, by construction (exact)."""
        N = self.model.N
        if point_index == 0:
            return 0
        if point_index == N - 1:
            return N - 1
        if not 0 < point_index < N - 1:
            raise IndexError(f"point index {point_index} outside 0..{N - 1}")
        col = self._collars[bisect_right(self._point_firsts, point_index) - 1]
        i = point_index - col["first_point"]
        # Point i sits at the center of the cell one step back in the ring.
        return col["first_region"] + (i - 1) % col["r"]

    def locate(self, point) -> int:
        """Region id containing an arbitrary unit vector (total function)."""
        if isinstance(point, UnitVec):
            coords = np.array([[point.x, point.y, point.z]])
        else:
            coords = np.asarray(point, dtype=float).reshape(1, 3)
        return int(self.locate_many(coords)[0])

    def locate_many(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized locate; rows must be unit vectors."""
        coords = np.asarray(coords, dtype=float)
        z = coords[:, 2]
        N = self.model.N
        M = self.model.M
        # Ascending band b owns (asc[b], asc[b + 1]]; z = -1 falls in band 0.
        band = np.searchsorted(self._asc_bounds, z, side="left") - 1
        band = np.clip(band, 0, 2 * M)
        out = np.empty(len(coords), dtype=np.int64)

        south_cap = band == 0
        north_cap = band == 2 * M
        out[south_cap] = N - 1
        out[north_cap] = 0

        rect = ~(south_cap | north_cap)
        if np.any(rect):
            phi = np.arctan2(coords[rect, 1], coords[rect, 0]) % TWO_PI
            jp = 2 * M - band[rect]  # band M is the equator ring, jp = M
            r = self._r_by_jp[jp - 1]
            theta = self._theta_by_jp[jp - 1]
            frac = (phi - theta - math.pi / r) * r / TWO_PI
            i = np.floor(frac).astype(np.int64) % r
            out[rect] = self._first_region_by_jp[jp - 1] + i
        return out


def build_partition(model: DiamondModel) -> Partition:
    return Partition(model)


def region_area(region: Region) -> float:
    """Area of a region computed from its own bounds.

    Height differences come from the exact fractions: near the poles
    1 - h cancels to a few float digits, while the rational difference
    rounds just once.
    """
    dh = float(region.h_hi_exact - region.h_lo_exact)
    if region.kind in ("cap_north", "cap_south"):
        return TWO_PI * dh
    return (region.phi_hi - region.phi_lo) * dh


def region_area_fraction_exact(partition: Partition, region: Region) -> Fraction:
    """Area of a region as an exact fraction of the whole sphere.

    The area element splits as dphi * dh, so a cap above height h covers
    (1 - h)/2 of the sphere and a rectangle covers (dh/2) * (dphi/2*pi).
    """
    if region.kind == "cap_north":
        return (1 - region.h_lo_exact) / 2
    if region.kind == "cap_south":
        return (region.h_hi_exact + 1) / 2
    r = partition.model.r[region.j - 1]
    return (region.h_hi_exact - region.h_lo_exact) / (2 * r)


def polar_cap_radius(partition: Partition) -> float:
    """Geodesic radius of the polar caps, 2*arcsin(1/sqrt(N))."""
    return 2.0 * math.asin(1.0 / math.sqrt(partition.model.N))


@dataclass(frozen=True)
class MatchingReport:
    """Outcome of verify_matching: exact certificates plus float locate."""

    ok: bool
    interleaving_ok: bool
    bijection_ok: bool
    point_to_region: np.ndarray
    failures: tuple[str, ...]


def verify_matching(partition: Partition, points: PointSet) -> MatchingReport:
    """Certify that locate() is a bijection points <-> regions.

    Exact part: h_{j+1} < z_j < h_j for every parallel, in rational
    arithmetic, plus the integer statement that point i of a ring of r
    sits strictly inside cell (i - 1) mod r (points lie at even,
    boundaries at odd multiples of pi/r relative to theta, so no float
    tie is possible).  Float part: locate() applied to the generated
    coordinates must reproduce the exact matching.
    """
    model = partition.model
    M = model.M
    h = partition.h_exact
    failures: list[str] = []

    for j in range(1, model.p + 1):
        zj = model.height_z_exact(j)
        if j < M:
            lower, upper = h[j], h[j - 1]
        elif j == M:
            lower, upper = -h[M - 1], h[M - 1]
        else:
            jm = 2 * M - j  # 1 <= jm <= M - 1: mirror of a northern collar
            lower, upper = -h[jm - 1], -h[jm]
        if not (lower < zj < upper):
            failures.append(f"parallel {j}: z = {zj} outside ({lower}, {upper})")
    interleaving_ok = not failures

    if not points.has_provenance or len(points) != model.N:
        failures.append("points lack provenance tags or have the wrong count")
        return MatchingReport(False, interleaving_ok, False,
                              np.empty(0, dtype=np.int64), tuple(failures))

    N = model.N
    firsts = np.array(partition._point_firsts, dtype=np.int64)
    interior = np.arange(1, N - 1)
    ci = np.searchsorted(firsts, interior, side="right") - 1
    expected = np.empty(N, dtype=np.int64)
    expected[0], expected[-1] = 0, N - 1
    expected[1:-1] = (partition._first_region_by_jp[ci]
                      + (interior - firsts[ci] - 1) % partition._r_by_jp[ci])
    located = partition.locate_many(points.coords)
    mism = np.nonzero(located != expected)[0]
    for idx in mism[:8]:
        failures.append(
            f"point {idx}: locate -> {located[idx]}, matching says {expected[idx]}"
        )
    bijection_ok = mism.size == 0 and len(np.unique(expected)) == model.N

    ok = interleaving_ok and bijection_ok
    return MatchingReport(ok, interleaving_ok, bijection_ok, located, tuple(failures))


def side_lengths(partition: Partition, j: int) -> SideLengths:
    """Side lengths for the collar of northern parallel j, 1 <= j <= M.

    horizontal_lo is the arc at the collar's defining height h_j, the
    shorter of the two horizontal sides (for j = M the two coincide);
    sqrt(N) times this quantity is what the shape bounds control.
    """
    model = partition.model
    M = model.M
    if not 1 <= j <= M:
        raise IndexError(f"collar index {j} outside 1..{M}")
    hi_ex, lo_ex = partition._collar_heights(j)
    h_hi, h_lo = float(hi_ex), float(lo_ex)
    r = model.r[j - 1]

    def arc(h: float) -> float:
        return TWO_PI * math.sqrt(max(0.0, 1.0 - h * h)) / r

    top, bottom = arc(h_hi), arc(h_lo)
    vertical = math.acos(h_lo) - math.acos(h_hi)

    dphi = TWO_PI / r
    corners = []
    for h in (h_hi, h_lo):
        s = math.sqrt(max(0.0, 1.0 - h * h))
        corners.append((s, 0.0, h))
        corners.append((s * math.cos(dphi), s * math.sin(dphi), h))
    diameter = max(
        math.dist(corners[a], corners[b])
        for a in range(4) for b in range(a + 1, 4)
    )
    return SideLengths(min(top, bottom), max(top, bottom), vertical, diameter)


def _collar_far_radius(h_hi: float, h_lo: float, z_point: float, r: int) -> float:
    """Max chord from a cell's matched point to any location in the cell.

    The point sits at the phi-center of its cell at height z_point.  The
    cosine of the angle to a cell location (dphi, h) is
    A(dphi)*sqrt(1 - h^2) + B*h with A = s_p*cos(dphi), B = z_point; it
    is minimized on the meridian edges dphi = +-pi/r, where the minimum
    over h sits at a corner, or interior to the edge when A < 0 (only
    possible for r = 1, where the cell wraps past a half-turn).
    """
    s_p = math.sqrt(max(0.0, 1.0 - z_point * z_point))
    a_coef = s_p * math.cos(math.pi / r)
    b_coef = z_point
    min_cos = min(
        a_coef * math.sqrt(max(0.0, 1.0 - h * h)) + b_coef * h
        for h in (h_hi, h_lo)
    )
    if a_coef < 0.0:
        radius = math.hypot(a_coef, b_coef)
        if radius > 0.0:
            h_star = -b_coef / radius
            if h_lo <= h_star <= h_hi:
                min_cos = min(min_cos, -radius)
    return math.sqrt(max(0.0, 2.0 - 2.0 * min_cos))


def covering_upper_bound(partition: Partition) -> float:
    """Certified covering-radius bound: the farthest any location can be
    from the matched point of the region containing it.

    Cells within a ring are congruent with congruently placed points, so
    one evaluation per ring plus the cap rim distance suffices.
    """
    model = partition.model
    h1 = float(partition.h_exact[0])
    best = math.sqrt(2.0 - 2.0 * h1)
    for col in partition._collars:
        z = float(model.height_z_exact(col["jp"]))
        far = _collar_far_radius(float(col["h_hi"]), float(col["h_lo"]), z, col["r"])
        best = max(best, far)
    return best


def partition_records(partition: Partition) -> list[dict]:
    """Flat serializable description of every region, in region-id order."""
    rows = []
    for reg in partition:
        rows.append({
            "region_id": reg.region_id,
            "kind": reg.kind,
            "j": reg.j,
            "i": reg.i,
            "phi_lo": reg.phi_lo,
            "phi_hi": reg.phi_hi,
            "h_lo": reg.h_lo,
            "h_hi": reg.h_hi,
            "h_lo_exact": str(reg.h_lo_exact),
            "h_hi_exact": str(reg.h_hi_exact),
            "matched_point": reg.matched_point,
        })
    return rows
