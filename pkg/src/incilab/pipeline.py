"""Two-stage partitioning experiment harness with exact accounting.

Stage 1 partitions the points with a polynomial of the planned degree,
splits entities by the zero set, prunes plane/cone/regulus components of
the surface under first-come-first-serve assignment, and buckets every
incidence of the input into pruned / cross-charge / residual, so the books
always balance against an independent oracle recount.  Stage 2 repeats the
partitioning on the residual at the window degree E and reports per-class
occupancy and line-crossing counts against their target quotas.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import bounds as bounds_mod
from .algebra import TriPoly, divides_by_plane, is_cone_with_apex, line_in_zero_set, tp_divides
from .bounds import DegreePlan, OutOfRangeError, degree_plan
from .geom import RationalLine, RationalPlane, Rational3Point, plane_through_lines
from .incidence import (
    Configuration,
    DegeneracyError,
    count_incidences,
    max_coplanar_lines,
    regulus_through,
    richness_histogram,
)
from .partition import (
    PartitionPoly,
    build_partition,
    cell_occupancy,
    classes_crossed,
    classify_lines,
    classify_points,
    degree_budget,
)
from .powers import cmp_power_products, power_product
from .qformat import qstr


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class WindowError(ValueError):
    """No usable window for the second-stage degree E."""


@dataclass
class SurfaceComponent:
    cause: str  # planar | conic | regulus
    description: str
    has_point: Callable[[Rational3Point], bool]
    has_line: Callable[[RationalLine], bool]


def _levels_for_degree(d: int) -> int:
    """Number of bisection levels for degree target d: 3*log2(d) rounded up,
    then trimmed so the per-level degree budget stays within d."""
    if d < 1:
        raise ValueError("degree target must be >= 1")
    raw = max(1, math.ceil(3 * math.log2(d))) if d > 1 else 1
    t = 1
    while t < raw and degree_budget(t + 1) <= d:
        t += 1
    return t


def _pair_count(cfg: Configuration, point_idx, line_idx) -> int:
    sub = Configuration(
        points=tuple(cfg.points[i] for i in point_idx),
        lines=tuple(cfg.lines[i] for i in line_idx),
        meta={},
    )
    if sub.m == 0 or sub.n == 0:
        return 0
    return count_incidences(sub).total


@dataclass
class StageReport:
    stage: str
    degree_target: int | None
    degree_used: int
    t: int
    E: int | None = None
    partition: PartitionPoly | None = None
    plan: DegreePlan | None = None
    counts: dict = field(default_factory=dict)
    identity: dict = field(default_factory=dict)
    pruned_by_cause: dict = field(default_factory=dict)
    cross_charges: int = 0
    residual_surface_incidences: int = 0
    residual_cell_incidences: int = 0
    components: list = field(default_factory=list)
    occupancy: dict = field(default_factory=dict)
    occupancy_max: int = 0
    occupancy_bound: int = 0
    on_surface_points: int = 0
    max_cross_roots: int = 0
    residual: Configuration | None = None
    residual_contained_max_coplanar: int | None = None
    residual_coplanar_within_degree: bool | None = None
    class_point_quota: Fraction | None = None
    class_line_quota: Fraction | None = None
    class_line_counts: dict = field(default_factory=dict)
    flagged_classes: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    @property
    def pruned_total(self) -> int:
        return sum(self.pruned_by_cause.values())

    @property
    def residual_incidences(self) -> int:
        return self.residual_surface_incidences + self.residual_cell_incidences

    def to_json_dict(self) -> dict:
        return _jsonable(
            {
                "stage": self.stage,
                "degree_target": self.degree_target,
                "degree_used": self.degree_used,
                "t": self.t,
                "E": self.E,
                "partition": None
                if self.partition is None
                else self.partition.to_json_dict(),
                "plan": None if self.plan is None else self.plan.to_json_dict(),
                "counts": self.counts,
                "identity": self.identity,
                "pruned_by_cause": self.pruned_by_cause,
                "pruned_total": self.pruned_total,
                "cross_charges": self.cross_charges,
                "residual_surface_incidences": self.residual_surface_incidences,
                "residual_cell_incidences": self.residual_cell_incidences,
                "components": self.components,
                "occupancy": {
                    _sign_str(k): v for k, v in sorted(self.occupancy.items())
                },
                "occupancy_max": self.occupancy_max,
                "occupancy_bound": self.occupancy_bound,
                "on_surface_points": self.on_surface_points,
                "max_cross_roots": self.max_cross_roots,
                "residual_sizes": None
                if self.residual is None
                else {"m": self.residual.m, "n": self.residual.n},
                "residual_contained_max_coplanar": self.residual_contained_max_coplanar,
                "residual_coplanar_within_degree": self.residual_coplanar_within_degree,
                "class_point_quota": self.class_point_quota,
                "class_line_quota": self.class_line_quota,
                "class_line_counts": {
                    _sign_str(k): v for k, v in sorted(self.class_line_counts.items())
                },
                "flagged_classes": [_sign_str(k) for k in self.flagged_classes],
                "flags": self.flags,
            }
        )


def _sign_str(sv) -> str:
    return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in sv)


def _occupancy_bound(m: int, t: int, epsilon: Fraction) -> int:
    return math.ceil((Fraction(1, 2) + Fraction(epsilon)) ** t * m)


def _detect_planes(f: TriPoly, lines: Sequence[RationalLine], contained: list[int]):
    """Planes spanned by coplanar pairs of contained lines that divide f."""
    found: list[RationalPlane] = []
    seen: set[RationalPlane] = set()
    truncated = False
    budget = 5000
    pairs = 0
    for ai in range(len(contained)):
        for bi in range(ai + 1, len(contained)):
            pairs += 1
            if pairs > budget:
                truncated = True
                break
            res = plane_through_lines(lines[contained[ai]], lines[contained[bi]])
            if not isinstance(res, RationalPlane) or res in seen:
                continue
            seen.add(res)
            if divides_by_plane(f, res):
                found.append(res)
        if truncated:
            break
    return found, truncated


def _detect_cones(
    part: PartitionPoly,
    points: Sequence[Rational3Point],
    surface_idx: list[int],
    richness: dict[int, int],
):
    """Cone-shaped level factors apexed at rich surface points."""
    candidates = sorted(
        (i for i in surface_idx if richness.get(i, 0) >= 2),
        key=lambda i: (-richness.get(i, 0), i),
    )[:8]
    out = []
    seen = set()
    for g in part.levels:
        if g.degree < 2:
            continue
        for i in candidates:
            p = points[i]
            if g.evaluate_point(p) != 0:
                continue
            if is_cone_with_apex(g, p):
                key = (g, p)
                if key not in seen:
                    seen.add(key)
                    out.append((g, p))
    return out


def _detect_reguli(
    f: TriPoly, lines: Sequence[RationalLine], contained: list[int], seed: int
):
    """Quadrics through seeded skew triples of contained lines dividing f."""
    if len(contained) < 3:
        return []
    rng = random.Random(seed * 7919 + 1)
    out = []
    seen = set()
    for _ in range(20):
        trio = rng.sample(contained, 3)
        ls = [lines[i] for i in trio]
        if any(
            plane_through_lines(ls[a], ls[b]) != "skew"
            for a in range(3)
            for b in range(a + 1, 3)
        ):
            continue
        try:
            quad = regulus_through(*ls)
        except (DegeneracyError, ValueError):
            continue
        if quad in seen:
            continue
        seen.add(quad)
        if tp_divides(quad.poly, f):
            out.append(quad)
    return out


def run_stage1(
    cfg: Configuration,
    D_override: int | None = None,
    seed: int = 0,
    epsilon: Fraction = Fraction(1, 10),
    partition_override: PartitionPoly | None = None,
    include_reguli: bool | None = None,
) -> StageReport:
    """First-stage partition, surface pruning, and exact incidence ledger."""
    cfg.validate()
    m, n = cfg.m, cfg.n
    plan = None
    if m >= 1 and n >= 1:
        try:
            plan = degree_plan(m, n)
        except OutOfRangeError:
            if D_override is None and partition_override is None:
                raise
    if D_override is not None:
        D = D_override
    elif plan is not None:
        D = plan.D_int
    elif partition_override is not None:
        D = max(1, partition_override.degree)
    else:
        raise PipelineError("stage1", "no degree plan and no override")
    if D < 1:
        raise ValueError("degree target must be >= 1")

    report = StageReport(
        stage="1", degree_target=D, degree_used=0, t=0, plan=plan
    )
    if m == 0 or n == 0:
        report.identity = {
            "I": 0,
            "surface_surface": 0,
            "surface_crossing": 0,
            "cells_crossing": 0,
            "cells_contained": 0,
        }
        report.residual = Configuration((), (), {})
        return report

    if partition_override is not None:
        part = partition_override
        t = part.t
    else:
        t = _levels_for_degree(D)
        part = build_partition(cfg.points, t, epsilon, seed)
    f = part.f
    report.partition = part
    report.t = t
    report.degree_used = part.degree

    surface_idx, cell_idx = classify_points(part, cfg.points)
    lc = classify_lines(part, cfg.lines)
    contained = lc.contained
    crossing_idx = [i for i, _ in lc.crossing]
    report.max_cross_roots = lc.max_roots
    report.counts = {
        "P_surface": len(surface_idx),
        "P_cells": len(cell_idx),
        "L_contained": len(contained),
        "L_crossing": len(crossing_idx),
    }

    occ, on_surface = cell_occupancy(part, cfg.points)
    report.occupancy = occ
    report.on_surface_points = on_surface
    report.occupancy_max = max(occ.values(), default=0)
    report.occupancy_bound = _occupancy_bound(m, t, epsilon)

    tally = count_incidences(cfg)
    total = tally.total
    id_ss = _pair_count(cfg, surface_idx, contained)
    id_sc = _pair_count(cfg, surface_idx, crossing_idx)
    id_cc = _pair_count(cfg, cell_idx, crossing_idx)
    id_c1 = _pair_count(cfg, cell_idx, contained)
    report.identity = {
        "I": total,
        "surface_surface": id_ss,
        "surface_crossing": id_sc,
        "cells_crossing": id_cc,
        "cells_contained": id_c1,
    }
    if id_c1 != 0:
        raise AssertionError(
            "a cell point claims to lie on a fully contained line"
        )
    if total != id_ss + id_sc + id_cc:
        raise AssertionError("stage-1 accounting identity failed")

    # component inventory, first-come-first-serve
    richness_l1: dict[int, int] = {}
    contained_set = set(contained)
    for li, hits in enumerate(tally.points_by_line):
        if li in contained_set:
            for pi in hits:
                richness_l1[pi] = richness_l1.get(pi, 0) + 1
    planes, truncated = _detect_planes(f, cfg.lines, contained)
    cones = _detect_cones(part, cfg.points, surface_idx, richness_l1)
    want_reguli = (
        include_reguli
        if include_reguli is not None
        else (plan is not None and plan.regime == "large-m")
    )
    reguli = _detect_reguli(f, cfg.lines, contained, seed) if want_reguli else []
    comps: list[SurfaceComponent] = []
    for pl in planes:
        comps.append(
            SurfaceComponent(
                cause="planar",
                description=f"plane {pl.coeffs}",
                has_point=pl.contains_point,
                has_line=pl.contains_line,
            )
        )
    for g, apex in cones:
        comps.append(
            SurfaceComponent(
                cause="conic",
                description=f"cone apex ({qstr(apex.x)},{qstr(apex.y)},{qstr(apex.z)})",
                has_point=lambda p, g=g: g.evaluate_point(p) == 0,
                has_line=lambda l, g=g: line_in_zero_set(g, l),
            )
        )
    for quad in reguli:
        comps.append(
            SurfaceComponent(
                cause="regulus",
                description=f"regulus {quad.coeffs}",
                has_point=quad.contains_point,
                has_line=quad.contains_line,
            )
        )
    report.components = [(c.cause, c.description) for c in comps]
    if truncated:
        report.flags.append("plane-pair search truncated")

    point_comp: dict[int, int] = {}
    for i in surface_idx:
        p = cfg.points[i]
        for ci, comp in enumerate(comps):
            if comp.has_point(p):
                point_comp[i] = ci
                break
    line_comp: dict[int, int] = {}
    for i in contained:
        l = cfg.lines[i]
        for ci, comp in enumerate(comps):
            if comp.has_line(l):
                line_comp[i] = ci
                break

    pruned: dict[str, int] = {"planar": 0, "conic": 0, "regulus": 0}
    cross = 0
    res_surface = 0
    res_cells = 0
    cell_set = set(cell_idx)
    for li, hits in enumerate(tally.points_by_line):
        for pi in hits:
            if pi in cell_set:
                res_cells += 1
            elif pi in point_comp:
                ci = point_comp[pi]
                if line_comp.get(li) == ci:
                    pruned[comps[ci].cause] += 1
                else:
                    cross += 1
            else:
                res_surface += 1
    report.pruned_by_cause = pruned
    report.cross_charges = cross
    report.residual_surface_incidences = res_surface
    report.residual_cell_incidences = res_cells
    if report.pruned_total + cross + res_surface + res_cells != total:
        raise AssertionError("pruned + cross-charge + residual != I")

    res_points = [i for i in range(m) if i not in point_comp]
    res_lines = [i for i in range(n) if i not in line_comp]
    report.residual = Configuration(
        points=tuple(cfg.points[i] for i in res_points),
        lines=tuple(cfg.lines[i] for i in res_lines),
        meta={"residual_of": cfg.meta.get("family", "custom")},
    )
    res_contained = [i for i in contained if i not in line_comp]
    if not truncated:
        s_res, _w = max_coplanar_lines([cfg.lines[i] for i in res_contained])
        report.residual_contained_max_coplanar = s_res
        report.residual_coplanar_within_degree = s_res <= max(part.degree, 1)
    return report


def run_stage2(
    residual: Configuration,
    plan: DegreePlan | None = None,
    E_override: int | None = None,
    seed: int = 0,
    epsilon: Fraction = Fraction(1, 10),
) -> StageReport:
    """Second-stage partition of the residual at the window degree E."""
    flags: list[str] = []
    if E_override is not None:
        E = int(E_override)
        if E < 1:
            raise ValueError("E must be >= 1")
        if plan is not None and plan.e_lo is not None:
            if cmp_power_products([(Fraction(E), Fraction(1))], plan.e_lo) < 0:
                flags.append(
                    f"window-violated: E={E} below lower bound "
                    f"~{float(plan.e_lo_approx):.6g}"
                )
            elif cmp_power_products([(Fraction(E), Fraction(1))], plan.e_hi) > 0:
                flags.append(
                    f"window-violated: E={E} above upper bound "
                    f"~{float(plan.e_hi_approx):.6g}"
                )
    else:
        if plan is None or plan.e_lo is None:
            raise WindowError(
                "no degree window available (midrange or missing plan); pass "
                "an explicit E"
            )
        if plan.window_empty:
            raise WindowError(plan.violated or "empty E window")
        E, inside = plan.smallest_integer_E()
        if not inside:
            flags.append(
                f"window-violated: smallest integer E={E} exceeds upper bound "
                f"~{float(plan.e_hi_approx):.6g}"
            )

    report = StageReport(
        stage="2", degree_target=E, degree_used=0, t=0, E=E, plan=plan, flags=flags
    )
    m, n = residual.m, residual.n
    if m == 0 or n == 0:
        report.identity = {
            "I": 0,
            "surface_surface": 0,
            "surface_crossing": 0,
            "cells_crossing": 0,
            "cells_contained": 0,
        }
        return report

    t = _levels_for_degree(E)
    part = build_partition(residual.points, t, epsilon, seed)
    report.partition = part
    report.t = t
    report.degree_used = part.degree

    surface_idx, cell_idx = classify_points(part, residual.points)
    lc = classify_lines(part, residual.lines)
    contained = lc.contained
    crossing_idx = [i for i, _ in lc.crossing]
    report.max_cross_roots = lc.max_roots
    report.counts = {
        "P_surface": len(surface_idx),
        "P_cells": len(cell_idx),
        "L_contained": len(contained),
        "L_crossing": len(crossing_idx),
    }

    total = count_incidences(residual).total
    id_ss = _pair_count(residual, surface_idx, contained)
    id_sc = _pair_count(residual, surface_idx, crossing_idx)
    id_cc = _pair_count(residual, cell_idx, crossing_idx)
    id_c1 = _pair_count(residual, cell_idx, contained)
    report.identity = {
        "I": total,
        "surface_surface": id_ss,
        "surface_crossing": id_sc,
        "cells_crossing": id_cc,
        "cells_contained": id_c1,
    }
    if id_c1 != 0 or total != id_ss + id_sc + id_cc:
        raise AssertionError("stage-2 accounting identity failed")

    occ, on_surface = cell_occupancy(part, residual.points)
    report.occupancy = occ
    report.on_surface_points = on_surface
    report.occupancy_max = max(occ.values(), default=0)
    report.occupancy_bound = _occupancy_bound(m, t, epsilon)
    report.class_point_quota = Fraction(m, E ** 3)
    report.class_line_quota = Fraction(n, E * E)

    class_lines: dict[tuple, int] = {key: 0 for key in occ}
    for i in crossing_idx:
        for sv in classes_crossed(part, residual.lines[i]):
            class_lines[sv] = class_lines.get(sv, 0) + 1
    report.class_line_counts = class_lines
    report.flagged_classes = [
        sv for sv, cnt in sorted(class_lines.items()) if cnt > report.class_line_quota
    ]
    return report


# -- aggregate report ---------------------------------------------------------


@dataclass
class IncidenceReport:
    family: str
    m: int
    n: int
    s: int
    witness_plane: tuple | None
    I: int
    richness: dict
    max_richness: int
    bound_st2d: Fraction | None
    bound_gk: Fraction | None
    bound_trivial: int | None
    bound_midrange: Fraction | None
    ratio: Fraction | None
    stages: list
    flags: list

    def to_json_dict(self) -> dict:
        return _jsonable(
            {
                "family": self.family,
                "m": self.m,
                "n": self.n,
                "s": self.s,
                "witness_plane": self.witness_plane,
                "I": self.I,
                "richness": {str(k): v for k, v in sorted(self.richness.items())},
                "max_richness": self.max_richness,
                "bounds": {
                    "st2d": self.bound_st2d,
                    "gk_A1_B1": self.bound_gk,
                    "trivial": self.bound_trivial,
                    "midrange": self.bound_midrange,
                },
                "ratio": self.ratio,
                "ratio_float": None if self.ratio is None else float(self.ratio),
                "stages": [st.to_json_dict() for st in self.stages],
                "flags": self.flags,
            }
        )

    def csv_row(self) -> list:
        return [
            self.family,
            self.m,
            self.n,
            self.s,
            self.I,
            self.max_richness,
            _csv_num(self.bound_st2d),
            _csv_num(self.bound_gk),
            _csv_num(self.bound_trivial),
            _csv_num(self.ratio),
        ]


CSV_COLUMNS = [
    "family",
    "m",
    "n",
    "s",
    "I",
    "max_richness",
    "bound_st2d",
    "bound_gk_A1_B1",
    "bound_trivial",
    "ratio",
]


def _csv_num(v):
    if v is None:
        return ""
    if isinstance(v, int):
        return v
    return repr(float(v))


def ratio_denominator(m: int, n: int, s: int) -> Fraction:
    """m^{1/2} n^{3/4} + m^{2/3} n^{1/3} s^{1/3} + m + n, rounded down so the
    reported ratio errs on the large side."""
    lead, _ = power_product([(m, Fraction(1, 2)), (n, Fraction(3, 4))], "down")
    tail, _ = power_product(
        [(m, Fraction(2, 3)), (n, Fraction(1, 3)), (s, Fraction(1, 3))], "down"
    )
    return lead + tail + m + n


def full_report(
    cfg: Configuration,
    run_pipeline: bool = True,
    D_override: int | None = None,
    E_override: int | None = None,
    seed: int = 0,
    epsilon: Fraction = Fraction(1, 10),
    include_reguli: bool | None = None,
) -> IncidenceReport:
    """Counting (both strategies, checked equal), coplanarity, bounds, and
    optionally the two-stage pipeline."""
    cfg.validate()
    m, n = cfg.m, cfg.n
    flags: list[str] = []
    naive = count_incidences(cfg, strategy="naive")
    grid = count_incidences(cfg, strategy="grid")
    if naive.points_by_line != grid.points_by_line:
        raise AssertionError("grid and naive strategies disagree")
    I = naive.total
    s, witness = max_coplanar_lines(cfg.lines)
    hist = richness_histogram(naive)
    max_rich = max((k for k, v in hist.items() if v and k > 0), default=0)

    bound_st2d = bound_gk = bound_trivial = bound_mid = ratio = None
    if m >= 1 and n >= 1:
        s_eff = max(s, 1)
        bound_st2d = bounds_mod.st2d_bound(m, n)
        bound_gk = bounds_mod.gk_bound(m, n, s_eff)
        bound_trivial = bounds_mod.trivial_bound(m, n)
        if m * m == n ** 3:
            bound_mid = bounds_mod.midrange_bound(m, n, s_eff)[2]
        ratio = Fraction(I) / ratio_denominator(m, n, s_eff)

    stages: list[StageReport] = []
    if run_pipeline and m >= 1 and n >= 1:
        try:
            st1 = run_stage1(
                cfg,
                D_override=D_override,
                seed=seed,
                epsilon=epsilon,
                include_reguli=include_reguli,
            )
        except AssertionError:
            raise
        except Exception as err:
            raise PipelineError("stage1", str(err)) from err
        stages.append(st1)
        residual = st1.residual
        if residual is not None and residual.m and residual.n:
            try:
                st2 = run_stage2(
                    residual,
                    plan=st1.plan,
                    E_override=E_override,
                    seed=seed,
                    epsilon=epsilon,
                )
                stages.append(st2)
            except WindowError as err:
                flags.append(f"stage 2 skipped: {err}")
            except AssertionError:
                raise
            except Exception as err:
                raise PipelineError("stage2", str(err)) from err
        else:
            flags.append("stage 2 skipped: empty residual")

    return IncidenceReport(
        family=cfg.meta.get("family", "custom"),
        m=m,
        n=n,
        s=s,
        witness_plane=None if witness is None else witness.coeffs,
        I=I,
        richness=hist,
        max_richness=max_rich,
        bound_st2d=bound_st2d,
        bound_gk=bound_gk,
        bound_trivial=bound_trivial,
        bound_midrange=bound_mid,
        ratio=ratio,
        stages=stages,
        flags=flags,
    )


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return qstr(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_report_json(report: IncidenceReport, path) -> None:
    Path(path).write_text(
        json.dumps(report.to_json_dict(), indent=2) + "\n", encoding="utf-8"
    )


def write_csv(reports: Sequence[IncidenceReport], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rep in reports:
            writer.writerow(rep.csv_row())
