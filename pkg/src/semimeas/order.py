"""Finite preorders, strict up-sets, the Norberg correspondences and the grid ambient.

The grid ambient is the pointwise-ordered space ``Q^k`` plus a formal top ``INF``.  It is cut
into cells: per coordinate the open interval below the first level, each level as a
singleton, each open gap between levels and the open interval above the last level.  Piece
``2j + 1`` is the singleton at level ``j`` and even pieces are the open intervals.  Strict
up-sets of grid points are exact unions of cells, so region algebra reduces to bitmasks.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations, product as iproduct
from typing import Iterable, Mapping, Sequence

from .semimodular import (
    SetFunction,
    Value,
    is_semiadditive,
    is_semimodular_solver,
    semiadditive_translation,
    vadd,
    zero,
)
from .setcore import GroundSet, InternalIdentityError, SetFamily, bits_of, classify_family, lattice_atoms

INF = "inf"


class OrderPropertyError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# --- finite preorders ------------------------------------------------------------------

@dataclass(frozen=True)
class FinitePreorder:
    leq: tuple[tuple[bool, ...], ...]

    def __init__(self, leq: Sequence[Sequence[bool]]):
        n = len(leq)
        rel = tuple(tuple(bool(v) for v in row) for row in leq)
        if n == 0 or any(len(r) != n for r in rel):
            raise ValueError("leq must be a nonempty square matrix")
        for i in range(n):
            if not rel[i][i]:
                raise ValueError(f"leq is not reflexive at {i}")
        for i, j, k in iproduct(range(n), repeat=3):
            if rel[i][j] and rel[j][k] and not rel[i][k]:
                raise ValueError(f"leq is not transitive: {i}<={j}<={k}")
        object.__setattr__(self, "leq", rel)

    @classmethod
    def chain(cls, n: int) -> "FinitePreorder":
        return cls([[i <= j for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.leq)

    def le(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def lt(self, x: int, y: int) -> bool:
        return self.leq[x][y] and not self.leq[y][x]

    def sim(self, x: int, y: int) -> bool:
        return self.leq[x][y] and self.leq[y][x]

    def down(self, x: int) -> int:
        return sum(1 << y for y in range(self.n) if self.le(y, x))

    def up(self, x: int) -> int:
        return sum(1 << y for y in range(self.n) if self.le(x, y))

    def down_strict(self, x: int) -> int:
        return sum(1 << y for y in range(self.n) if self.lt(y, x))

    def up_strict(self, x: int) -> int:
        return sum(1 << y for y in range(self.n) if self.lt(x, y))

    def interval(self, kind: str, x: int) -> int:
        return {"down_closed": self.down, "up_closed": self.up,
                "down_strict": self.down_strict, "up_strict": self.up_strict}[kind](x)

    def classes(self) -> list[list[int]]:
        seen, out = set(), []
        for x in range(self.n):
            if x in seen:
                continue
            cls_ = [y for y in range(self.n) if self.sim(x, y)]
            seen.update(cls_)
            out.append(cls_)
        return out

    def is_total(self) -> bool:
        return all(self.le(x, y) or self.le(y, x) for x in range(self.n) for y in range(self.n))

    def meet(self, x: int, y: int) -> int | None:
        """Canonical (smallest index) greatest lower bound, or None."""
        lower = [z for z in range(self.n) if self.le(z, x) and self.le(z, y)]
        best = [z for z in lower if all(self.le(w, z) for w in lower)]
        return min(best) if best else None

    def meet_all(self, xs: Iterable[int]) -> int:
        xs = list(xs)
        m = xs[0]
        for x in xs[1:]:
            m = self.meet(m, x)
            if m is None:
                raise ValueError("elements have no meet")
        return m

    def is_meet_semilattice(self) -> bool:
        return all(self.meet(x, y) is not None for x in range(self.n) for y in range(self.n))


@dataclass(frozen=True)
class OrderInterval:
    kind: str
    anchor: int

    def members(self, p: FinitePreorder) -> int:
        return p.interval(self.kind, self.anchor)


def check_order_property(p: FinitePreorder) -> tuple[bool, tuple[int, int] | None]:
    ups = [p.up_strict(x) for x in range(p.n)]
    for x in range(p.n):
        for y in range(p.n):
            if ups[x] & ~ups[y] == 0 and not p.le(y, x):
                return False, (x, y)
    return True, None


def check_meet_lemma(p: FinitePreorder, xs: Sequence[int], ys: Sequence[int]) -> bool:
    if not p.is_meet_semilattice():
        raise OrderPropertyError("not a meet-semilattice")
    ok, wit = check_order_property(p)
    if not ok:
        raise OrderPropertyError("order property fails", wit)
    ux = reduce(lambda a, b: a | b, (p.up_strict(x) for x in xs), 0)
    uy = reduce(lambda a, b: a | b, (p.up_strict(y) for y in ys), 0)
    if ux & ~uy:
        return True
    return p.le(p.meet_all(ys), p.meet_all(xs))


def _check_class_constant(p: FinitePreorder, F: Sequence[Value]):
    for x in range(p.n):
        for y in range(p.n):
            if p.sim(x, y) and F[x] != F[y]:
                raise ValueError(f"point function is not constant on the class of {x} and {y}")


def _ground(p: FinitePreorder) -> GroundSet:
    return GroundSet([str(i) for i in range(p.n)], max_size=None)


def _as_values(F) -> list[Value]:
    return [tuple(Fraction(c) for c in (v if isinstance(v, (tuple, list)) else (v,))) for v in F]


def norberg_down(p: FinitePreorder, F: Sequence) -> SetFunction:
    """``Phi(down(x)) = F(x)`` on the family of principal down-sets, certified semi-additive."""
    if not p.is_meet_semilattice():
        raise OrderPropertyError("not a meet-semilattice")
    F = _as_values(F)
    _check_class_constant(p, F)
    vals = {p.down(x): F[x] for x in range(p.n)}
    fam = classify_family(_ground(p), vals)
    phi = SetFunction(fam, vals, len(F[0]))
    if not is_semimodular_solver(phi).verdict or not is_semiadditive(phi)[0]:
        raise InternalIdentityError("down-set correspondence is not semi-additive")
    return phi


def norberg_down_inverse(p: FinitePreorder, phi: SetFunction) -> list[Value]:
    return [phi.values[p.down(x)] for x in range(p.n)]


@dataclass(frozen=True)
class StrictCorrespondence:
    psi: SetFunction
    y: Value
    meets: Mapping[int, int]  # union of strict up-sets -> canonical meet of any generator family
    # true when no strict up-set is empty, so the translation constant is a convention
    y_by_convention: bool


def norberg_strict(p: FinitePreorder, F: Sequence) -> StrictCorrespondence:
    """``Psi(union of strict up-sets of xs) = F(meet xs) + y_F`` on finite unions of strict up-sets."""
    if not p.is_meet_semilattice():
        raise OrderPropertyError("not a meet-semilattice")
    ok, wit = check_order_property(p)
    if not ok:
        raise OrderPropertyError("order property fails", wit)
    F = _as_values(F)
    _check_class_constant(p, F)
    meets: dict[int, int] = {}
    frontier = []
    for x in range(p.n):
        u = p.up_strict(x)
        if u in meets:
            if not p.sim(meets[u], x):
                raise InternalIdentityError("equal strict up-sets with inequivalent anchors")
            continue
        meets[u] = x
        frontier.append(u)
    gens = list(meets.items())
    while frontier:
        nxt = []
        for u in frontier:
            for g, x in gens:
                w = u | g
                m = p.meet(meets[u], x)
                if w in meets:
                    if not p.sim(meets[w], m):
                        raise InternalIdentityError("meet of a union depends on the generators")
                else:
                    meets[w] = m
                    nxt.append(w)
        frontier = nxt
    d = len(F[0])
    raw = {u: F[m] for u, m in meets.items()}
    fam = classify_family(_ground(p), raw)
    psi0 = SetFunction(fam, raw, d)
    y, psi = semiadditive_translation(psi0)
    return StrictCorrespondence(psi, y, dict(sorted(meets.items())), 0 not in meets)


def norberg_strict_inverse(p: FinitePreorder, corr: StrictCorrespondence) -> list[Value]:
    neg = tuple(-c for c in corr.y)
    return [vadd(corr.psi.values[p.up_strict(x)], neg) for x in range(p.n)]


# --- the grid ambient ------------------------------------------------------------------

Point = tuple  # tuple of level indices, or INF


@dataclass(frozen=True)
class GridAmbient:
    levels: tuple[tuple[Fraction, ...], ...]
    formal_top: bool = True

    def __init__(self, levels: Sequence[Sequence], formal_top: bool = True):
        lv = []
        for vs in levels:
            vs = [Fraction(v) for v in vs]
            if not vs or sorted(set(vs)) != vs:
                raise ValueError("levels must be nonempty, strictly increasing rationals")
            lv.append(tuple(vs))
        if not lv:
            raise ValueError("at least one coordinate is required")
        object.__setattr__(self, "levels", tuple(lv))
        object.__setattr__(self, "formal_top", bool(formal_top))

    @property
    def k(self) -> int:
        return len(self.levels)

    @property
    def pieces(self) -> tuple[int, ...]:
        return tuple(2 * len(v) + 1 for v in self.levels)

    @cached_property
    def cells(self) -> tuple:
        cs = list(iproduct(*(range(m) for m in self.pieces)))
        if self.formal_top:
            cs.append(INF)
        return tuple(cs)

    @cached_property
    def cell_index(self) -> dict:
        return {c: i for i, c in enumerate(self.cells)}

    @cached_property
    def points(self) -> tuple:
        """Grid points (level index tuples) in lexicographic order."""
        return tuple(iproduct(*(range(len(v)) for v in self.levels)))

    @property
    def max_point(self) -> Point:
        return tuple(len(v) - 1 for v in self.levels)

    @property
    def min_point(self) -> Point:
        return (0,) * self.k

    def check_point(self, g) -> Point:
        if g == INF:
            if not self.formal_top:
                raise ValueError("this ambient has no formal top")
            return INF
        g = tuple(g)
        if len(g) != self.k or any(not 0 <= gi < len(v) for gi, v in zip(g, self.levels)):
            raise ValueError(f"point {g} is off the level grid")
        return g

    def values_of(self, g: Point) -> tuple[Fraction, ...] | str:
        if g == INF:
            return INF
        return tuple(v[i] for v, i in zip(self.levels, g))

    def le(self, g: Point, h: Point) -> bool:
        if h == INF:
            return True
        if g == INF:
            return False
        return all(a <= b for a, b in zip(g, h))

    def meet(self, g: Point, h: Point) -> Point:
        if g == INF:
            return h
        if h == INF:
            return g
        return tuple(min(a, b) for a, b in zip(g, h))

    def meet_all(self, gs: Iterable[Point]) -> Point:
        return reduce(self.meet, gs, INF)

    def upset_of(self, g) -> int:
        """Cell mask of the strict up-set of grid point ``g``."""
        g = self.check_point(g)
        if g == INF:
            return 0
        own = tuple(2 * gi + 1 for gi in g)
        m = 0
        for c, i in self.cell_index.items():
            if c == INF:
                m |= 1 << i
            elif c != own and all(ci >= oi for ci, oi in zip(c, own)):
                m |= 1 << i
        return m

    def sample_point(self, cell):
        """A rational point inside ``cell``: midpoints of gaps, one unit beyond the extremes."""
        if cell == INF:
            return INF
        out = []
        for piece, vs in zip(cell, self.levels):
            j, odd = divmod(piece, 2)
            if odd:
                out.append(vs[j])
            elif j == 0:
                out.append(vs[0] - 1)
            elif j == len(vs):
                out.append(vs[-1] + 1)
            else:
                out.append((vs[j - 1] + vs[j]) / 2)
        return tuple(out)

    def strictly_above(self, t, g) -> bool:
        """Point-level test ``t > g`` for an ambient point ``t`` and a grid point ``g``."""
        if g == INF:
            return False
        if t == INF:
            return True
        gv = self.values_of(g)
        return all(a >= b for a, b in zip(t, gv)) and tuple(t) != gv

    def cell_members(self, mask: int) -> list:
        return [self.cells[i] for i in bits_of(mask)]


def check_order_property_grid(g: GridAmbient) -> tuple[bool, tuple | None]:
    """Order property over all grid points, with strict up-sets compared on cells."""
    pts = list(g.points) + ([INF] if g.formal_top else [])
    ups = {p: g.upset_of(p) for p in pts}
    for x in pts:
        for y in pts:
            if ups[x] & ~ups[y] == 0 and not g.le(y, x):
                return False, (x, y)
            if g.le(y, x) and ups[x] & ~ups[y]:
                return False, (x, y)
    return True, None


def check_meet_lemma_grid(g: GridAmbient, xs: Sequence, ys: Sequence) -> bool:
    ux = reduce(lambda a, b: a | b, (g.upset_of(x) for x in xs), 0)
    uy = reduce(lambda a, b: a | b, (g.upset_of(y) for y in ys), 0)
    if ux & ~uy:
        return True
    return g.le(g.meet_all(ys), g.meet_all(xs))


# --- the region ring -------------------------------------------------------------------

@dataclass(frozen=True)
class RegionRing:
    """Ring of cell unions generated by the strict up-sets of grid points.

    Regions are handled in atom coordinates: bit ``i`` of a region mask stands for
    ``atoms[i]`` (a cell mask).
    """

    ambient: GridAmbient
    generators: tuple  # grid points (and INF)
    gen_cells: Mapping  # point -> cell mask
    atoms: tuple[int, ...]

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def full(self) -> int:
        return (1 << len(self.atoms)) - 1

    def to_atoms(self, cells: int) -> int:
        out = 0
        rest = cells
        for i, a in enumerate(self.atoms):
            if cells & a == a:
                out |= 1 << i
                rest &= ~a
            elif cells & a:
                raise ValueError("cell set is not a member of the region ring")
        if rest:
            raise ValueError("cell set is not a member of the region ring")
        return out

    def to_cells(self, region: int) -> int:
        return reduce(lambda m, i: m | self.atoms[i], bits_of(region), 0)

    def upset(self, g) -> int:
        return self.to_atoms(self.gen_cells[self.ambient.check_point(g)])

    @cached_property
    def ground(self) -> GroundSet:
        return GroundSet([f"a{i}" for i in range(len(self.atoms))], max_size=None)

    @cached_property
    def t0(self) -> dict[int, Point]:
        """Finite unions of strict up-sets, each with the meet of any generating family."""
        amb = self.ambient
        meets: dict[int, Point] = {}
        gens = []
        for p in self.generators:
            u = self.upset(p)
            if u in meets:
                if meets[u] != p:
                    raise InternalIdentityError("distinct grid points share a strict up-set")
                continue
            meets[u] = p
            gens.append((u, p))
        frontier = [u for u, _ in gens]
        while frontier:
            nxt = []
            for u in frontier:
                for g, p in gens:
                    w = u | g
                    m = amb.meet(meets[u], p)
                    if w in meets:
                        if meets[w] != m:
                            raise InternalIdentityError("meet of a union depends on the generators")
                    else:
                        meets[w] = m
                        nxt.append(w)
            frontier = nxt
        return dict(sorted(meets.items()))

    @cached_property
    def t1(self) -> tuple[int, ...]:
        """Lattice generated by the unions of strict up-sets and the empty region."""
        cur = set(self.t0) | {0}
        frontier = set(cur)
        while frontier:
            new = set()
            for a in frontier:
                for b in cur:
                    for c in (a | b, a & b):
                        if c not in cur:
                            new.add(c)
            cur |= new
            frontier = new
        return tuple(sorted(cur))

    def minimal_generators(self, region: int) -> list:
        """Minimal grid points whose strict up-set lies inside a union of strict up-sets."""
        inside = [p for p in self.generators if self.upset(p) & ~region == 0]
        amb = self.ambient
        return [p for p in inside if not any(q != p and amb.le(q, p) for q in inside)]


def grid_region_algebra(g: GridAmbient) -> RegionRing:
    gens = list(g.points) + ([INF] if g.formal_top else [])
    gen_cells = {p: g.upset_of(p) for p in gens}
    atoms = lattice_atoms(gen_cells.values())
    return RegionRing(g, tuple(gens), gen_cells, tuple(atoms))


def region_family(ring: RegionRing, regions: Iterable[int]) -> SetFamily:
    return classify_family(ring.ground, regions)


def all_preorder_relations(n: int, rng) -> FinitePreorder:
    """Random preorder on ``n`` points: transitive closure of a random relation."""
    rel = [[i == j or rng.random() < 0.3 for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if rel[i][k]:
                for j in range(n):
                    if rel[k][j]:
                        rel[i][j] = True
    return FinitePreorder(rel)


def zero_point_function(n: int, d: int = 1) -> list[Value]:
    return [zero(d)] * n


__all__ = [
    "INF", "FinitePreorder", "OrderInterval", "GridAmbient", "RegionRing", "OrderPropertyError",
    "StrictCorrespondence", "check_order_property", "check_meet_lemma", "check_order_property_grid",
    "check_meet_lemma_grid", "norberg_down", "norberg_down_inverse", "norberg_strict",
    "norberg_strict_inverse", "grid_region_algebra", "region_family", "all_preorder_relations",
    "combinations",
]
