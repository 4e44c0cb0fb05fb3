"""Deterministic point/line configuration generators and file round-trip.

Families with exactly derivable counts (products of grids and packs of
planar grids), ruled-surface families kept rational by construction, and a
seeded random family.  Serialization keeps every coordinate as a canonical
rational string so round trips are identities, byte for byte.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .geom import Rational3Point, RationalLine
from .incidence import Configuration, InvalidConfigurationError
from .qformat import qparse, qstr

FAMILIES = (
    "elekes2d",
    "coplanar_pack",
    "grid3d",
    "ruled_surface",
    "concurrent",
    "random",
)

RULED_KINDS = ("plane", "cone", "hp")


class ConfigParseError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}; choose from {FAMILIES}"
            )


def _pt(x, y, z) -> Rational3Point:
    return Rational3Point(Fraction(x), Fraction(y), Fraction(z))


def _meta(family: str, params: dict, seed: int = 0) -> dict:
    return {"family": family, "params": dict(params), "seed": seed}


def elekes2d(N: int) -> Configuration:
    """2N^3 grid points and N^3 low-slope lines in z=0; every line holds
    exactly N of the points, so I = N^4."""
    if N < 1:
        raise ValueError("N must be >= 1")
    points = tuple(
        _pt(i, j, 0) for i in range(1, N + 1) for j in range(1, 2 * N * N + 1)
    )
    lines = tuple(
        RationalLine(_pt(0, b, 0), (1, a, 0))
        for a in range(1, N + 1)
        for b in range(1, N * N + 1)
    )
    return Configuration(points, lines, _meta("elekes2d", {"N": N}))


def coplanar_pack(k: int, N: int) -> Configuration:
    """k parallel planar copies of elekes2d(N), in planes z = 0..k-1."""
    if k < 1 or N < 1:
        raise ValueError("k and N must be >= 1")
    points = tuple(
        _pt(i, j, c)
        for c in range(k)
        for i in range(1, N + 1)
        for j in range(1, 2 * N * N + 1)
    )
    lines = tuple(
        RationalLine(_pt(0, b, c), (1, a, 0))
        for c in range(k)
        for a in range(1, N + 1)
        for b in range(1, N * N + 1)
    )
    return Configuration(points, lines, _meta("coplanar_pack", {"k": k, "N": N}))


def grid3d(N: int) -> Configuration:
    """The integer grid [1,N]^3 with all 3N^2 axis-parallel lines."""
    if N < 1:
        raise ValueError("N must be >= 1")
    rng1 = range(1, N + 1)
    points = tuple(_pt(i, j, k) for i in rng1 for j in rng1 for k in rng1)
    lines = []
    for a in rng1:
        for b in rng1:
            lines.append(RationalLine(_pt(0, a, b), (1, 0, 0)))
            lines.append(RationalLine(_pt(a, 0, b), (0, 1, 0)))
            lines.append(RationalLine(_pt(a, b, 0), (0, 0, 1)))
    return Configuration(points, tuple(lines), _meta("grid3d", {"N": N}))


def _pythagorean_directions(count: int) -> list[tuple[int, int, int]]:
    """Primitive integer directions with a^2 + b^2 = c^2, in a fixed order."""
    out: list[tuple[int, int, int]] = []
    seen: set[tuple[int, int, int]] = set()
    c = 0
    while len(out) < count:
        c += 1
        if c > 10000:
            raise ValueError("ran out of rational cone directions")
        for a in range(-c, c + 1):
            b2 = c * c - a * a
            b = math.isqrt(b2)
            if b * b != b2:
                continue
            for bb in sorted({b, -b}):
                g = math.gcd(math.gcd(abs(a), abs(bb)), c)
                d = (a // g, bb // g, c // g)
                for coord in d:
                    if coord != 0:
                        if coord < 0:
                            d = tuple(-v for v in d)
                        break
                if d not in seen:
                    seen.add(d)
                    out.append(d)
                if len(out) == count:
                    return out
    return out


def ruled_surface(kind: str, k: int) -> Configuration:
    """k lines on a doubly- or singly-ruled surface plus their rational
    pairwise intersection points.

    plane: a pencil of k lines through the origin in z = 0.
    cone:  k rulings of x^2 + y^2 = z^2 through the apex.
    hp:    rulings of z = xy, split between the two families.
    """
    if kind not in RULED_KINDS:
        raise ValueError(f"unknown ruled kind {kind!r}; choose from {RULED_KINDS}")
    if k < 1:
        raise ValueError("k must be >= 1")
    origin = _pt(0, 0, 0)
    if kind == "plane":
        lines = tuple(
            RationalLine(origin, (1, i, 0)) for i in range(k)
        )
        points = (origin,)
    elif kind == "cone":
        lines = tuple(
            RationalLine(origin, d) for d in _pythagorean_directions(k)
        )
        points = (origin,)
    else:
        na = -(-k // 2)
        nb = k - na
        fam_a = [RationalLine(_pt(a, 0, 0), (0, 1, a)) for a in range(1, na + 1)]
        fam_b = [RationalLine(_pt(0, b, 0), (1, 0, b)) for b in range(1, nb + 1)]
        lines = tuple(fam_a + fam_b)
        points = tuple(
            _pt(a, b, a * b)
            for a in range(1, na + 1)
            for b in range(1, nb + 1)
        )
    return Configuration(
        points, lines, _meta("ruled_surface", {"kind": kind, "k": k})
    )


def concurrent(k: int) -> Configuration:
    """k lines through the origin with moment-curve directions (1, i, i^2)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lines = tuple(RationalLine(_pt(0, 0, 0), (1, i, i * i)) for i in range(k))
    return Configuration((_pt(0, 0, 0),), lines, _meta("concurrent", {"k": k}))


def random_config(m: int, n: int, seed: int = 0) -> Configuration:
    """m distinct integer points and n distinct lines; about half the lines
    pass through two of the points, the rest are unconstrained."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    rng = random.Random(seed)
    radius = 50
    while (2 * radius + 1) ** 3 < 8 * (m + 1):
        radius *= 2
    points: list[Rational3Point] = []
    seen_pts = set()
    guard = 0
    while len(points) < m:
        guard += 1
        if guard > 200 * (m + 1):
            raise ValueError("point sampling stalled; lower m")
        c = tuple(rng.randint(-radius, radius) for _ in range(3))
        if c in seen_pts:
            continue
        seen_pts.add(c)
        points.append(_pt(*c))
    lines: list[RationalLine] = []
    seen_lines = set()
    forced = n // 2 if m >= 2 else 0
    guard = 0
    while len(lines) < n:
        guard += 1
        if guard > 400 * (n + 1):
            raise ValueError("line sampling stalled; lower n")
        if len(lines) < forced:
            i, j = rng.sample(range(m), 2)
            a, b = points[i], points[j]
            direction = (b.x - a.x, b.y - a.y, b.z - a.z)
            line = RationalLine(a, direction)
        else:
            base = _pt(*(rng.randint(-radius, radius) for _ in range(3)))
            direction = tuple(rng.randint(-5, 5) for _ in range(3))
            if direction == (0, 0, 0):
                continue
            line = RationalLine(base, direction)
        if line in seen_lines:
            continue
        seen_lines.add(line)
        lines.append(line)
    return Configuration(
        tuple(points), tuple(lines), _meta("random", {"m": m, "n": n}, seed)
    )


_REQUIRED_PARAMS = {
    "elekes2d": ("N",),
    "coplanar_pack": ("k", "N"),
    "grid3d": ("N",),
    "ruled_surface": ("kind", "k"),
    "concurrent": ("k",),
    "random": ("m", "n"),
}


def generate(spec: GeneratorSpec) -> Configuration:
    wanted = _REQUIRED_PARAMS[spec.family]
    missing = [p for p in wanted if p not in spec.params]
    if missing:
        raise ValueError(f"{spec.family} needs parameters {missing}")
    extra = [p for p in spec.params if p not in wanted]
    if extra:
        raise ValueError(f"{spec.family} does not take parameters {extra}")
    p = spec.params
    if spec.family == "elekes2d":
        return elekes2d(int(p["N"]))
    if spec.family == "coplanar_pack":
        return coplanar_pack(int(p["k"]), int(p["N"]))
    if spec.family == "grid3d":
        return grid3d(int(p["N"]))
    if spec.family == "ruled_surface":
        return ruled_surface(str(p["kind"]), int(p["k"]))
    if spec.family == "concurrent":
        return concurrent(int(p["k"]))
    return random_config(int(p["m"]), int(p["n"]), spec.seed)


# -- file round trip ----------------------------------------------------------


def config_to_json_dict(cfg: Configuration) -> dict:
    return {
        "meta": cfg.meta,
        "points": [[qstr(p.x), qstr(p.y), qstr(p.z)] for p in cfg.points],
        "lines": [
            {
                "base": [qstr(l.base.x), qstr(l.base.y), qstr(l.base.z)],
                "dir": [qstr(Fraction(d)) for d in l.dir],
            }
            for l in cfg.lines
        ],
    }


def save_config(cfg: Configuration, path) -> None:
    text = json.dumps(config_to_json_dict(cfg), indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _parse_triple(raw, where: str) -> tuple[Fraction, Fraction, Fraction]:
    if not isinstance(raw, list) or len(raw) != 3:
        raise ConfigParseError(f"{where}: expected a 3-element list, got {raw!r}")
    vals = []
    for axis, item in zip("xyz", raw):
        try:
            vals.append(qparse(item))
        except ValueError as err:
            raise ConfigParseError(f"{where}.{axis}: {err}") from None
    return tuple(vals)


def load_config(path) -> Configuration:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigParseError(
            f"{path}: line {err.lineno} column {err.colno}: {err.msg}"
        ) from None
    if not isinstance(data, dict):
        raise ConfigParseError(f"{path}: top level must be an object")
    for key in ("points", "lines"):
        if key not in data or not isinstance(data[key], list):
            raise ConfigParseError(f"{path}: missing or malformed {key!r} list")
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise ConfigParseError(f"{path}: 'meta' must be an object")
    points = tuple(
        Rational3Point(*_parse_triple(raw, f"points[{i}]"))
        for i, raw in enumerate(data["points"])
    )
    lines = []
    for i, raw in enumerate(data["lines"]):
        if not isinstance(raw, dict) or "base" not in raw or "dir" not in raw:
            raise ConfigParseError(
                f"lines[{i}]: expected an object with 'base' and 'dir'"
            )
        base = _parse_triple(raw["base"], f"lines[{i}].base")
        direction = _parse_triple(raw["dir"], f"lines[{i}].dir")
        if direction == (0, 0, 0):
            raise ConfigParseError(f"lines[{i}].dir: zero direction")
        lines.append(RationalLine(Rational3Point(*base), direction))
    cfg = Configuration(points, tuple(lines), meta)
    cfg.validate()
    return cfg
