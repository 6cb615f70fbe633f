"""Finite filtered probability spaces indexed by a grid ambient.

Random variables are tuples of Fractions indexed by outcome.  Partitions are stored as a
block label per outcome, normalised so that labels appear in first-occurrence order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..order import INF, GridAmbient

RV = tuple  # tuple[Fraction, ...]


class ModelError(ValueError):
    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


# --- partitions ------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    labels: tuple[int, ...]

    @staticmethod
    def _normalise(raw: Sequence) -> tuple[int, ...]:
        seen: dict = {}
        return tuple(seen.setdefault(x, len(seen)) for x in raw)

    @classmethod
    def from_labels(cls, raw: Sequence) -> "Partition":
        return cls(cls._normalise(raw))

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Sequence[int]]) -> "Partition":
        lab = [None] * n
        for b, block in enumerate(blocks):
            for w in block:
                if not 0 <= w < n:
                    raise ModelError(f"outcome index {w} out of range")
                if lab[w] is not None:
                    raise ModelError(f"outcome {w} appears in two blocks")
                lab[w] = b
        if any(v is None for v in lab):
            raise ModelError("blocks do not cover the sample space")
        return cls.from_labels(lab)

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(max(self.labels) + 1)]
        for w, b in enumerate(self.labels):
            out[b].append(w)
        return out

    def join(self, other: "Partition") -> "Partition":
        """Common refinement (generated sigma-algebra)."""
        return Partition.from_labels(list(zip(self.labels, other.labels)))

    def meet(self, other: "Partition") -> "Partition":
        """Finest common coarsening (intersection of sigma-algebras)."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for part in (self, other):
            first: dict[int, int] = {}
            for w, b in enumerate(part.labels):
                if b in first:
                    parent[find(w)] = find(first[b])
                else:
                    first[b] = w
        return Partition.from_labels([find(w) for w in range(self.n)])

    def refines(self, other: "Partition") -> bool:
        """True when every block of ``self`` lies in a block of ``other``."""
        m: dict[int, int] = {}
        return all(m.setdefault(a, b) == b for a, b in zip(self.labels, other.labels))

    def measurable(self, x: Sequence) -> bool:
        m: dict = {}
        return all(m.setdefault(b, v) == v for b, v in zip(self.labels, x))

    def contains_event(self, event: int) -> bool:
        return self.measurable([event >> w & 1 for w in range(self.n)])

    def split_block(self, x: Sequence) -> list[int] | None:
        m: dict = {}
        for b, v in zip(self.labels, x):
            if m.setdefault(b, v) != v:
                return self.blocks[b]
        return None


def join_all(parts, n: int) -> Partition:
    out = Partition.trivial(n)
    for p in parts:
        out = out.join(p)
    return out


def meet_all(parts, n: int) -> Partition:
    out = Partition.discrete(n)
    for p in parts:
        out = out.meet(p)
    return out


# --- probability space -----------------------------------------------------------------

@dataclass(frozen=True)
class FiniteProbSpace:
    omega: tuple[str, ...]
    p: tuple[Fraction, ...]

    def __post_init__(self):
        if not 0 < len(self.omega) <= 64:
            raise ModelError("the sample space needs between 1 and 64 outcomes")
        if len(set(self.omega)) != len(self.omega):
            raise ModelError("outcome labels must be distinct")
        if len(self.p) != len(self.omega):
            raise ModelError("one weight per outcome is required")
        if any(w <= 0 for w in self.p):
            raise ModelError("weights must be strictly positive")
        if sum(self.p) != 1:
            raise ModelError(f"weights sum to {sum(self.p)}, not 1")

    @classmethod
    def uniform(cls, n: int) -> "FiniteProbSpace":
        return cls(tuple(f"w{i + 1}" for i in range(n)), (Fraction(1, n),) * n)

    @property
    def n(self) -> int:
        return len(self.omega)

    def expect(self, x: Sequence) -> Fraction:
        return sum((w * v for w, v in zip(self.p, x)), Fraction(0))

    def cond(self, x: Sequence, part: Partition) -> RV:
        num: dict[int, Fraction] = {}
        den: dict[int, Fraction] = {}
        for b, w, v in zip(part.labels, self.p, x):
            num[b] = num.get(b, Fraction(0)) + w * v
            den[b] = den.get(b, Fraction(0)) + w
        return tuple(num[b] / den[b] for b in part.labels)

    def indicator(self, event: int) -> RV:
        return tuple(Fraction(event >> w & 1) for w in range(self.n))

    def prob(self, event: int) -> Fraction:
        return self.expect(self.indicator(event))

    @property
    def full_event(self) -> int:
        return (1 << self.n) - 1


def rv(values) -> RV:
    return tuple(Fraction(v) for v in values)


def rv_add(a, b) -> RV:
    return tuple(x + y for x, y in zip(a, b))


def rv_sub(a, b) -> RV:
    return tuple(x - y for x, y in zip(a, b))


def rv_mul(a, b) -> RV:
    return tuple(x * y for x, y in zip(a, b))


def rv_scale(k, a) -> RV:
    return tuple(k * x for x in a)


def rv_abs(a) -> RV:
    return tuple(abs(x) for x in a)


def rv_zero(n: int) -> RV:
    return (Fraction(0),) * n


# --- filtration, process, model --------------------------------------------------------

@dataclass(frozen=True)
class GridFiltration:
    ambient: GridAmbient
    parts: Mapping  # grid point -> Partition
    terminal: Partition

    def at(self, g) -> Partition:
        return self.terminal if g == INF else self.parts[g]

    def at_ambient(self, t) -> Partition:
        """Sigma-algebra at an ambient point: the one at its componentwise grid floor."""
        if t == INF:
            return self.terminal
        fl = []
        for ti, vs in zip(t, self.ambient.levels):
            below = [j for j, v in enumerate(vs) if v <= Fraction(ti)]
            if not below:
                raise ModelError(f"ambient point {t} lies below the grid")
            fl.append(below[-1])
        return self.parts[tuple(fl)]


X_INF_MODES = ("max_grid", "zero_at_infinity")


@dataclass(frozen=True)
class GridModel:
    space: FiniteProbSpace
    filtration: GridFiltration
    x: Mapping  # grid point -> RV
    x_inf: RV
    x_inf_mode: str = "max_grid"
    meta: Mapping = field(default_factory=dict, compare=False)

    @property
    def ambient(self) -> GridAmbient:
        return self.filtration.ambient

    @property
    def n(self) -> int:
        return self.space.n

    def value(self, g) -> RV:
        return self.x_inf if g == INF else self.x[g]

    def points(self, with_inf: bool = True) -> list:
        return list(self.ambient.points) + ([INF] if with_inf else [])

    def with_process(self, x: Mapping, x_inf=None) -> "GridModel":
        xs = {g: rv(v) for g, v in x.items()}
        if x_inf is None:
            x_inf = xs[self.ambient.max_point] if self.x_inf_mode == "max_grid" else rv_zero(self.n)
        return GridModel(self.space, self.filtration, xs, rv(x_inf), self.x_inf_mode, self.meta)


def build_model(space: FiniteProbSpace, levels, parts: Mapping, x: Mapping, x_inf=None,
                terminal: Partition | None = None, x_inf_mode: str = "max_grid",
                meta: Mapping | None = None) -> GridModel:
    """Assemble a model, filling ``x_inf`` and the terminal partition from the mode defaults."""
    if x_inf_mode not in X_INF_MODES:
        raise ModelError(f"unknown x_inf_mode {x_inf_mode!r}")
    amb = levels if isinstance(levels, GridAmbient) else GridAmbient(levels, formal_top=True)
    if not amb.formal_top:
        raise ModelError("stochastic models need the formal top")
    parts = {tuple(g): p for g, p in parts.items()}
    if terminal is None:
        terminal = parts.get(amb.max_point, Partition.discrete(space.n))
    xs = {tuple(g): rv(v) for g, v in x.items()}
    if x_inf is None:
        x_inf = xs.get(amb.max_point) if x_inf_mode == "max_grid" else rv_zero(space.n)
    m = GridModel(space, GridFiltration(amb, parts, terminal), xs, rv(x_inf), x_inf_mode, dict(meta or {}))
    check_invariants(m)
    return m


def check_invariants(m: GridModel) -> None:
    amb, n = m.ambient, m.n
    pts = list(amb.points)
    for g in pts:
        if g not in m.filtration.parts:
            raise ModelError(f"no partition at grid point {g}", g)
        if g not in m.x:
            raise ModelError(f"no process value at grid point {g}", g)
    for g, p in list(m.filtration.parts.items()) + [(INF, m.filtration.terminal)]:
        if p.n != n:
            raise ModelError(f"partition at {g} has the wrong size", g)
    for g in pts:
        for h in pts:
            if amb.le(g, h) and not m.filtration.parts[h].refines(m.filtration.parts[g]):
                raise ModelError(f"filtration is not monotone between {g} and {h}", (g, h))
        if not m.filtration.terminal.refines(m.filtration.parts[g]):
            raise ModelError(f"terminal partition does not refine the one at {g}", g)
    for g in pts + [INF]:
        v = m.value(g)
        if len(v) != n:
            raise ModelError(f"process value at {g} has the wrong dimension", g)
        blk = m.filtration.at(g).split_block(v)
        if blk is not None:
            raise ModelError(f"process is not adapted at {g}: block {blk} is split", (g, blk))
    if m.x_inf_mode == "max_grid" and m.x_inf != m.x[amb.max_point]:
        raise ModelError("max_grid mode requires x_inf to equal the value at the maximal grid point")
    if m.x_inf_mode == "zero_at_infinity" and any(m.x_inf):
        raise ModelError("zero_at_infinity mode requires x_inf = 0")


@dataclass(frozen=True)
class ModelReport:
    martingale: bool
    supermartingale: bool
    submartingale: bool
    increasing: bool
    pairs_checked: int
    witnesses: Mapping


def validate_model(m: GridModel) -> ModelReport:
    """Invariant check plus martingale-type flags over all comparable grid pairs (top included)."""
    check_invariants(m)
    amb = m.ambient
    pts = m.points()
    sup = sub = inc = True
    wit: dict = {}
    count = 0
    for g in pts:
        for h in pts:
            if g == h or not amb.le(g, h):
                continue
            count += 1
            xg, xh = m.value(g), m.value(h)
            c = m.space.cond(xh, m.filtration.at(g))
            if sup and any(a < b for a, b in zip(xg, c)):
                sup = False
                wit["supermartingale"] = (g, h)
            if sub and any(a > b for a, b in zip(xg, c)):
                sub = False
                wit["submartingale"] = (g, h)
            if inc and any(a > b for a, b in zip(xg, xh)):
                inc = False
                wit["increasing"] = (g, h)
    return ModelReport(sup and sub, sup, sub, inc, count, wit)


def fixture_b() -> GridModel:
    """Two-coordinate, two-level model on four equally likely outcomes (a martingale)."""
    sp = FiniteProbSpace.uniform(4)
    P = Partition.from_blocks
    parts = {
        (0, 0): P(4, [[0, 1, 2, 3]]),
        (1, 0): P(4, [[0, 1], [2, 3]]),
        (0, 1): P(4, [[0, 2], [1, 3]]),
        (1, 1): Partition.discrete(4),
    }
    x = {(0, 0): (1, 1, 1, 1), (1, 0): (2, 2, 0, 0), (0, 1): (2, 0, 2, 0), (1, 1): (3, 1, 1, -1)}
    return build_model(sp, [[0, 1], [0, 1]], parts, x)
