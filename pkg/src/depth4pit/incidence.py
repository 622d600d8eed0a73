"""Colored projective point configurations and exhaustive line finders.

A linear form ``sum c_i x_i`` is identified with the projective point
``(c_1 : ... : c_n)``; a linear form lies in the ideal of two others exactly
when the three points are collinear.  Everything here is exhaustive pair
scanning in lexicographic order, so "absent" really means "does not exist".
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .circuit import Circuit
from .field import ONE, ZERO, FieldElem, omega
from .linalg import Matrix, rank

log = logging.getLogger(__name__)


class ProjPoint:
    """Point of projective space; coordinates scaled so the first nonzero one is 1."""

    __slots__ = ("coords", "_hash")

    def __init__(self, coords: Sequence):
        cs = [FieldElem.coerce(c) for c in coords]
        lead = next((c for c in cs if c), None)
        if lead is None:
            raise ValueError("projective point with all-zero coordinates")
        if lead != ONE:
            inv = lead.inverse()
            cs = [c * inv for c in cs]
        self.coords: tuple[FieldElem, ...] = tuple(cs)
        self._hash = hash(self.coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class Configuration:
    """Named, pairwise disjoint, nonempty sets of projective points in ``n`` coordinates."""

    n: int
    sets: tuple[tuple[str, tuple[ProjPoint, ...]], ...]

    @classmethod
    def build(cls, n: int, sets) -> "Configuration":
        items = sets.items() if isinstance(sets, dict) else sets
        out = []
        owner: dict[ProjPoint, str] = {}
        for name, pts in items:
            uniq: list[ProjPoint] = []
            for p in pts:
                p = p if isinstance(p, ProjPoint) else ProjPoint(p)
                if p.n != n:
                    raise ValueError(f"point {p} does not have {n} coordinates")
                if p in owner and owner[p] != name:
                    raise ValueError(f"point {p} appears in sets {owner[p]!r} and {name!r}")
                if p not in uniq:
                    uniq.append(p)
                owner[p] = name
            if not uniq:
                raise ValueError(f"set {name!r} is empty")
            out.append((str(name), tuple(uniq)))
        return cls(n, tuple(out))

    def labelled_points(self) -> list[tuple[str, ProjPoint]]:
        return [(name, p) for name, pts in self.sets for p in pts]

    def points(self) -> list[ProjPoint]:
        return [p for _, pts in self.sets for p in pts]


def _dim(points: Sequence[ProjPoint]) -> int:
    if not points:
        return 0
    return rank(Matrix([p.coords for p in points]))


def span_dim(cfg: Configuration) -> int:
    """Vector-space dimension of the span of all points (projective dimension is one less)."""
    return _dim(cfg.points())


def projective_dim(cfg: Configuration) -> int:
    return span_dim(cfg) - 1


class _LineThrough:
    """Reduced echelon basis of the 2-dimensional span of two distinct points."""

    def __init__(self, p: ProjPoint, q: ProjPoint):
        rows = [list(p.coords), list(q.coords)]
        self.basis: list[tuple[int, list[FieldElem]]] = []
        for row in rows:
            row = self._reduce(row)
            c = next((i for i, v in enumerate(row) if v), None)
            if c is None:
                raise ValueError("points coincide")
            inv = row[c].inverse()
            row = [v * inv for v in row]
            # keep the basis fully reduced
            self.basis = [(pc, [a - pr[c] * b for a, b in zip(pr, row)]) if pr[c] else (pc, pr)
                          for pc, pr in self.basis]
            self.basis.append((c, row))

    def _reduce(self, v: list[FieldElem]) -> list[FieldElem]:
        for c, row in self.basis:
            f = v[c]
            if f:
                v = [a - f * b if b else a for a, b in zip(v, row)]
        return v

    def contains(self, p: ProjPoint) -> bool:
        return not any(self._reduce(list(p.coords)))


def line_points(p: ProjPoint, q: ProjPoint, cfg: Configuration) -> list[tuple[str, ProjPoint]]:
    """Every configuration point on the projective line through ``p`` and ``q``."""
    if p == q:
        raise ValueError("line through a point and itself is undefined")
    line = _LineThrough(p, q)
    return [(name, r) for name, r in cfg.labelled_points() if line.contains(r)]


@dataclass(frozen=True)
class LineReport:
    p: ProjPoint
    q: ProjPoint
    points: tuple[tuple[str, ProjPoint], ...]
    sets: tuple[str, ...]


def find_line_two_sets(cfg: Configuration) -> Optional[LineReport]:
    """First line through points of two different sets that meets exactly two of the sets."""
    if len(cfg.sets) < 2:
        raise ValueError("need at least two sets")
    pts = cfg.labelled_points()
    order = [name for name, _ in cfg.sets]
    for i in range(len(pts)):
        si, p = pts[i]
        for j in range(i + 1, len(pts)):
            sj, q = pts[j]
            if si == sj:
                continue
            on = line_points(p, q, cfg)
            touched = {name for name, _ in on}
            if len(touched) == 2:
                names = tuple(n for n in order if n in touched)
                return LineReport(p, q, tuple(on), names)
    return None


def find_ordinary_line(points: Sequence[ProjPoint]) -> Optional[tuple[ProjPoint, ProjPoint]]:
    """First pair whose line contains no third point of ``points``."""
    pts = list(dict.fromkeys(points))
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            line = _LineThrough(pts[i], pts[j])
            if not any(line.contains(r) for k, r in enumerate(pts) if k != i and k != j):
                return pts[i], pts[j]
    return None


def circuit_to_configuration(c: Circuit) -> Configuration:
    """Set ``i`` holds the points of the linear factors of term ``i`` (named ``"1"``, ``"2"``, ...).

    Non-linear factors are skipped; a point shared by two terms is rejected
    because it means the terms are not coprime.
    """
    sets = []
    for ti, t in enumerate(c.terms, start=1):
        pts = []
        for f in t.factors:
            if f.degree() != 1 or not f.is_homogeneous():
                log.info("term %d: skipping non-linear factor %s", ti, f)
                continue
            pts.append(ProjPoint(f.linear_coeffs()))
        if pts:
            sets.append((str(ti), pts))
        else:
            log.info("term %d has no linear factors; no set emitted", ti)
    return Configuration.build(c.n, sets)


def hesse_configuration() -> list[ProjPoint]:
    """The 9 inflection points of ``x^3 + y^3 + z^3``; requires the extension ``d = -3``."""
    w = omega()
    roots = [ONE, w, w * w]
    pts = []
    for r in roots:
        pts.append(ProjPoint([ZERO, ONE, -r]))
    for r in roots:
        pts.append(ProjPoint([-r, ZERO, ONE]))
    for r in roots:
        pts.append(ProjPoint([ONE, -r, ZERO]))
    return pts


def random_colored_configuration(
    seed: int,
    n: int = 6,
    nsets: int | None = None,
    size: tuple[int, int] = (2, 5),
    box: int = 2,
    lattice: bool = False,
) -> Configuration:
    """Seeded disjoint colored configuration in ``n`` coordinates.

    With ``lattice=True`` coordinates come from ``{-1, 0, 1}``, which makes
    3-point lines common.
    """
    rng = random.Random(seed)
    k = nsets if nsets is not None else rng.randint(2, 4)
    seen: set[ProjPoint] = set()
    sets = []
    lo, hi = (-1, 1) if lattice else (-box, box)
    for s in range(k):
        want = rng.randint(*size)
        pts = []
        tries = 0
        while len(pts) < want and tries < 200:
            tries += 1
            v = [rng.randint(lo, hi) for _ in range(n)]
            if not any(v):
                continue
            p = ProjPoint(v)
            if p in seen:
                continue
            seen.add(p)
            pts.append(p)
        sets.append((f"S{s + 1}", pts))
    return Configuration.build(n, sets)


def random_point_set(seed: int, n: int = 4, count: tuple[int, int] = (4, 9), box: int = 2) -> list[ProjPoint]:
    rng = random.Random(seed)
    want = rng.randint(*count)
    pts: list[ProjPoint] = []
    while len(pts) < want:
        v = [rng.randint(-box, box) for _ in range(n)]
        if any(v):
            p = ProjPoint(v)
            if p not in pts:
                pts.append(p)
    return pts
