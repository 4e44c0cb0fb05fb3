"""Exact incidence counting and structure detection for point/line sets.

The naive strategy tests every point against every line with integer
arithmetic.  The grid strategy buckets points into axis-aligned cells and
walks each line through the cells it meets; it is a pure speedup and agrees
with the naive count exactly, including on degenerate inputs, because points
sitting on cell boundaries are duplicated into every touching bucket.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import algebra
from ._linalg import nullspace
from .geom import (
    Rational3Point,
    RationalLine,
    RationalPlane,
    plane_through_lines,
    point_on_line,
)

THREADS_ENV = "INCILAB_THREADS"


class InvalidConfigurationError(ValueError):
    pass


class DegeneracyError(ValueError):
    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


@dataclass(eq=True)
class Configuration:
    """A finite set of distinct points and distinct lines, plus metadata."""

    points: tuple[Rational3Point, ...]
    lines: tuple[RationalLine, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = tuple(self.points)
        self.lines = tuple(self.lines)

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.lines)

    def validate(self) -> None:
        seen = {}
        for i, p in enumerate(self.points):
            if p in seen:
                raise InvalidConfigurationError(
                    f"duplicate point at indexes {seen[p]} and {i}: {p!r}"
                )
            seen[p] = i
        seen_l = {}
        for i, l in enumerate(self.lines):
            if l in seen_l:
                raise InvalidConfigurationError(
                    f"duplicate line at indexes {seen_l[l]} and {i}: {l!r}"
                )
            seen_l[l] = i


@dataclass
class IncidenceTally:
    total: int
    per_point: list[int]
    per_line: list[int]
    points_by_line: list[list[int]]

    def to_json_dict(self) -> dict:
        hist = richness_histogram(self)
        return {
            "I": self.total,
            "per_line": list(self.per_line),
            "richness": {str(k): v for k, v in sorted(hist.items())},
        }


# -- integer fast path -------------------------------------------------------


def _point_reps(points: Sequence[Rational3Point]):
    reps = []
    for p in points:
        den = math.lcm(p.x.denominator, p.y.denominator, p.z.denominator)
        reps.append((int(p.x * den), int(p.y * den), int(p.z * den), den))
    return reps


def _line_reps(lines: Sequence[RationalLine]):
    reps = []
    for l in lines:
        b = l.base
        den = math.lcm(b.x.denominator, b.y.denominator, b.z.denominator)
        reps.append(
            (int(b.x * den), int(b.y * den), int(b.z * den), den, l.dir[0], l.dir[1], l.dir[2])
        )
    return reps


def _on_line_int(prep, lrep) -> bool:
    px, py, pz, pd = prep
    bx, by, bz, bd, dx, dy, dz = lrep
    ux = px * bd - bx * pd
    uy = py * bd - by * pd
    uz = pz * bd - bz * pd
    return (
        uy * dz - uz * dy == 0
        and uz * dx - ux * dz == 0
        and ux * dy - uy * dx == 0
    )


def _thread_count(explicit: int | None) -> int:
    if explicit is not None:
        return max(1, explicit)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def count_incidences(
    cfg: Configuration,
    strategy: str = "naive",
    cell_width: Fraction | None = None,
    bbox: tuple | None = None,
    threads: int | None = None,
) -> IncidenceTally:
    """Exact incidence tally; `strategy` is "naive" or "grid".

    Both strategies return identical tallies.  INCILAB_THREADS (or the
    `threads` argument) caps the worker pool used to spread lines across
    threads; the merge is associative, so results do not depend on it.
    """
    cfg.validate()
    if strategy == "naive":
        points_by_line = _count_naive(cfg, _thread_count(threads))
    elif strategy == "grid":
        points_by_line = _count_grid(cfg, cell_width, bbox, _thread_count(threads))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    per_point = [0] * cfg.m
    per_line = [len(pl) for pl in points_by_line]
    for pl in points_by_line:
        for idx in pl:
            per_point[idx] += 1
    return IncidenceTally(
        total=sum(per_line),
        per_point=per_point,
        per_line=per_line,
        points_by_line=points_by_line,
    )


def _count_naive(cfg: Configuration, threads: int) -> list[list[int]]:
    preps = _point_reps(cfg.points)
    lreps = _line_reps(cfg.lines)

    def work(chunk):
        out = []
        for lrep in chunk:
            out.append([i for i, prep in enumerate(preps) if _on_line_int(prep, lrep)])
        return out

    return _map_line_chunks(lreps, work, threads)


def _map_line_chunks(lreps, work, threads: int) -> list[list[int]]:
    if threads <= 1 or len(lreps) < 64:
        return work(lreps)
    size = -(-len(lreps) // threads)
    chunks = [lreps[i : i + size] for i in range(0, len(lreps), size)]
    out: list[list[int]] = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(work, chunks):
            out.extend(part)
    return out


def _axis_cells(coord: Fraction, width: Fraction) -> tuple[int, ...]:
    q = coord / width
    f = math.floor(q)
    # A coordinate exactly on a cell wall belongs to both neighbouring cells.
    return (f - 1, f) if q == f else (f,)


def _count_grid(
    cfg: Configuration,
    cell_width: Fraction | None,
    bbox: tuple | None,
    threads: int,
) -> list[list[int]]:
    if cfg.m == 0 or cfg.n == 0:
        return [[] for _ in cfg.lines]
    preps = _point_reps(cfg.points)
    lreps = _line_reps(cfg.lines)
    coords = [p.coords for p in cfg.points]
    if bbox is None:
        lo = tuple(min(c[i] for c in coords) for i in range(3))
        hi = tuple(max(c[i] for c in coords) for i in range(3))
    else:
        lo = tuple(Fraction(v) for v in bbox[0])
        hi = tuple(Fraction(v) for v in bbox[1])
    inside = [
        i
        for i, c in enumerate(coords)
        if all(lo[a] <= c[a] <= hi[a] for a in range(3))
    ]
    residual = [i for i in range(cfg.m) if i not in set(inside)]
    if cell_width is None:
        diam = max(hi[a] - lo[a] for a in range(3))
        k = 1
        while k ** 3 < cfg.m + cfg.n:
            k += 1
        cell_width = diam / k if diam > 0 else Fraction(1)
    width = Fraction(cell_width)
    if width <= 0:
        raise ValueError("cell width must be positive")

    buckets: dict[tuple[int, int, int], list[int]] = {}
    for i in inside:
        c = coords[i]
        for ix in _axis_cells(c[0], width):
            for iy in _axis_cells(c[1], width):
                for iz in _axis_cells(c[2], width):
                    buckets.setdefault((ix, iy, iz), []).append(i)

    lines = cfg.lines

    def work(chunk):
        out = []
        for lrep, line in chunk:
            base = line.base.coords
            direc = line.dir
            t_lo: Fraction | None = None
            t_hi: Fraction | None = None
            empty = False
            for a in range(3):
                if direc[a] == 0:
                    if not (lo[a] <= base[a] <= hi[a]):
                        empty = True
                        break
                    continue
                ta = (lo[a] - base[a]) / direc[a]
                tb = (hi[a] - base[a]) / direc[a]
                if ta > tb:
                    ta, tb = tb, ta
                t_lo = ta if t_lo is None else max(t_lo, ta)
                t_hi = tb if t_hi is None else min(t_hi, tb)
            candidates: set[int] = set()
            if not empty and t_lo is not None and t_lo <= t_hi:
                cuts = {t_lo, t_hi}
                for a in range(3):
                    if direc[a] == 0:
                        continue
                    ca = base[a] + t_lo * direc[a]
                    cb = base[a] + t_hi * direc[a]
                    if ca > cb:
                        ca, cb = cb, ca
                    k0 = math.ceil(ca / width)
                    k1 = math.floor(cb / width)
                    for k in range(k0, k1 + 1):
                        cuts.add((k * width - base[a]) / direc[a])
                ts = sorted(cuts)
                probes = []
                if len(ts) == 1:
                    probes.append(ts[0])
                for ta, tb in zip(ts, ts[1:]):
                    probes.append((ta + tb) / 2)
                for t in probes:
                    pt = tuple(base[a] + t * direc[a] for a in range(3))
                    for ix in _axis_cells(pt[0], width):
                        for iy in _axis_cells(pt[1], width):
                            for iz in _axis_cells(pt[2], width):
                                candidates.update(buckets.get((ix, iy, iz), ()))
            hits = [i for i in sorted(candidates) if _on_line_int(preps[i], lrep)]
            for i in residual:
                if _on_line_int(preps[i], lrep):
                    hits.append(i)
            out.append(sorted(hits))
        return out

    pairs = list(zip(lreps, lines))
    if threads <= 1 or len(pairs) < 64:
        return work(pairs)
    size = -(-len(pairs) // threads)
    chunks = [pairs[i : i + size] for i in range(0, len(pairs), size)]
    out: list[list[int]] = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(work, chunks):
            out.extend(part)
    return out


# -- richness and coplanarity -------------------------------------------------


def richness_histogram(tally: IncidenceTally) -> dict[int, int]:
    """Map richness r -> number of points lying on exactly r of the lines."""
    hist: dict[int, int] = {}
    for r in tally.per_point:
        hist[r] = hist.get(r, 0) + 1
    return hist


def two_rich_count(hist: dict[int, int]) -> int:
    return sum(v for k, v in hist.items() if k >= 2)


def one_poor_count(hist: dict[int, int]) -> int:
    return sum(v for k, v in hist.items() if k <= 1)


def max_coplanar_lines(
    lines: Sequence[RationalLine],
) -> tuple[int, RationalPlane | None]:
    """Largest number of input lines lying in one plane, with a witness.

    Returns (0, None) for no lines and (1, None) when no two lines are
    coplanar.  Intersecting or parallel pairs pin down their common plane,
    so bucketing pairs by that plane finds the maximum exactly.
    """
    if not lines:
        return 0, None
    buckets: dict[RationalPlane, set[int]] = {}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            res = plane_through_lines(lines[i], lines[j])
            if isinstance(res, RationalPlane):
                buckets.setdefault(res, set()).update((i, j))
    if not buckets:
        return 1, None
    best = max(buckets.items(), key=lambda kv: (len(kv[1]), kv[0].coeffs))
    return len(best[1]), best[0]


def rich_points_per_line(cfg: Configuration, threshold: int = 2) -> list[int]:
    """Per line, how many of its points lie on >= threshold configuration lines."""
    tally = count_incidences(cfg)
    out = []
    for hits in tally.points_by_line:
        out.append(sum(1 for i in hits if tally.per_point[i] >= threshold))
    return out


# -- first-come-first-serve plane assignment ----------------------------------


@dataclass
class PlaneAssignment:
    point_plane: list[int | None]
    line_plane: list[int | None]
    per_plane_points: list[list[int]]
    per_plane_lines: list[list[int]]
    cross_charges: int
    within_plane_incidences: list[int]
    sub_configurations: list[Configuration]


def assign_to_planes(
    points: Sequence[Rational3Point],
    lines: Sequence[RationalLine],
    planes: Sequence[RationalPlane],
) -> PlaneAssignment:
    """Assign each point/line to the first plane containing it.

    Cross-charges count incidences (p, l) whose point is assigned to a plane
    that does not fully contain l.  Together with the within-plane incidences
    and the incidences at unassigned points this partitions every incidence
    of the input sets exactly once.
    """
    if len(set(planes)) != len(planes):
        raise ValueError("planes must be distinct")
    point_plane: list[int | None] = []
    for p in points:
        point_plane.append(
            next((k for k, pl in enumerate(planes) if pl.contains_point(p)), None)
        )
    line_plane: list[int | None] = []
    for l in lines:
        line_plane.append(
            next((k for k, pl in enumerate(planes) if pl.contains_line(l)), None)
        )
    per_plane_points = [[] for _ in planes]
    for i, k in enumerate(point_plane):
        if k is not None:
            per_plane_points[k].append(i)
    per_plane_lines = [[] for _ in planes]
    for i, k in enumerate(line_plane):
        if k is not None:
            per_plane_lines[k].append(i)

    preps = _point_reps(points)
    lreps = _line_reps(lines)
    cross = 0
    within = [0] * len(planes)
    for j, lrep in enumerate(lreps):
        for i, prep in enumerate(preps):
            if not _on_line_int(prep, lrep):
                continue
            k = point_plane[i]
            if k is None:
                continue
            if line_plane[j] == k:
                within[k] += 1
            else:
                cross += 1
    subs = [
        Configuration(
            points=tuple(points[i] for i in per_plane_points[k]),
            lines=tuple(lines[i] for i in per_plane_lines[k]),
            meta={"plane": list(planes[k].coeffs)},
        )
        for k in range(len(planes))
    ]
    return PlaneAssignment(
        point_plane=point_plane,
        line_plane=line_plane,
        per_plane_points=per_plane_points,
        per_plane_lines=per_plane_lines,
        cross_charges=cross,
        within_plane_incidences=within,
        sub_configurations=subs,
    )


# -- reguli -------------------------------------------------------------------

MONOMIALS_DEG2 = (
    (2, 0, 0),
    (0, 2, 0),
    (0, 0, 2),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (0, 0, 0),
)


@dataclass(frozen=True)
class Quadric:
    """Degree-2 surface, stored as 10 coprime integer coefficients.

    Coefficient order follows MONOMIALS_DEG2; the first nonzero entry is
    positive.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != 10 or all(c == 0 for c in self.coeffs):
            raise ValueError("quadric needs 10 coefficients, not all zero")
        fracs = [Fraction(c) for c in self.coeffs]
        mult = math.lcm(*(f.denominator for f in fracs))
        ints = [int(f * mult) for f in fracs]
        g = math.gcd(*ints)
        ints = [c // g for c in ints]
        for c in ints:
            if c != 0:
                if c < 0:
                    ints = [-v for v in ints]
                break
        object.__setattr__(self, "coeffs", tuple(ints))

    @property
    def poly(self) -> algebra.TriPoly:
        return algebra.TriPoly(
            {e: c for e, c in zip(MONOMIALS_DEG2, self.coeffs) if c}
        )

    def contains_point(self, p: Rational3Point) -> bool:
        return self.poly.evaluate_point(p) == 0

    def contains_line(self, line: RationalLine) -> bool:
        return algebra.line_in_zero_set(self.poly, line)


def regulus_through(l1: RationalLine, l2: RationalLine, l3: RationalLine) -> Quadric:
    """The unique quadric through three pairwise skew lines.

    A degree-2 polynomial vanishing at three distinct points of a line
    vanishes on the whole line, so nine interpolation conditions pin the
    quadric down.  Raises ValueError for non-skew inputs and
    DegeneracyError if the solution space dimension differs from 1.
    """
    trio = (l1, l2, l3)
    for i in range(3):
        for j in range(i + 1, 3):
            if plane_through_lines(trio[i], trio[j]) != "skew":
                raise ValueError(
                    f"lines {i} and {j} are not skew; a regulus needs pairwise skew lines"
                )
    rows = []
    for line in trio:
        for t in (0, 1, 2):
            p = line.point_at(t)
            rows.append(
                [p.x ** e[0] * p.y ** e[1] * p.z ** e[2] for e in MONOMIALS_DEG2]
            )
    basis = nullspace(rows)
    if len(basis) != 1:
        raise DegeneracyError(
            f"quadric solution space has dimension {len(basis)}, expected 1",
            dimension=len(basis),
        )
    return Quadric(coeffs=tuple(basis[0]))
