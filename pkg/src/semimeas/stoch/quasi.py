"""Variations over disjoint families of region differences, the quasi-martingale norm,
the conditioning operator and the induced measures."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable

from ..setcore import atom_witness, bits_of
from .extension import (
    DoleansDade, ExtendedFiltration, Integrand, ProcessExtension, doleans_dade, extend_filtration,
    extend_process,
)
from .model import RV, GridModel, ModelError, rv_abs, rv_add, rv_mul, rv_sub, rv_zero

Pair = tuple[int, int]


class DPartitionError(ModelError):
    pass


@dataclass(frozen=True)
class DPartition:
    """Disjoint region differences ``tau minus upsilon``, each carried with its pair."""

    pairs: tuple[Pair, ...]

    def __init__(self, pairs: Iterable[Pair]):
        object.__setattr__(self, "pairs", tuple(sorted((int(t), int(u)) for t, u in pairs)))

    def differences(self) -> list[int]:
        return [t & ~u for t, u in self.pairs]

    @property
    def support(self) -> int:
        return reduce(lambda a, b: a | b, self.differences(), 0)

    def refines(self, other: "DPartition") -> bool:
        """``self >= other``: every difference of ``other`` is a union of differences of ``self``
        whose first regions lie inside the corresponding first region of ``other``."""
        mine = list(zip(self.pairs, self.differences()))
        for (tau, _), diff in zip(other.pairs, other.differences()):
            inside = [(p, d) for p, d in mine if d & ~diff == 0]
            if reduce(lambda a, x: a | x[1], inside, 0) != diff:
                return False
            if any(p[0] & ~tau for p, _ in inside):
                return False
        return True


@dataclass(frozen=True)
class QuasiContext:
    """Everything the variation machinery needs, computed once per model."""

    model: GridModel
    ext: ProcessExtension
    filt: ExtendedFiltration
    dd: DoleansDade

    @property
    def ring(self):
        return self.ext.ring

    def cond(self, x: RV, region: int) -> RV:
        return self.model.space.cond(x, self.filt.at(region))

    def increment(self, tau: int, ups: int) -> RV:
        return rv_sub(self.cond(self.ext.xbar[ups], tau), self.ext.xbar[tau])


def context(m: GridModel, ring=None) -> QuasiContext:
    ext = extend_process(m, ring=ring)
    return QuasiContext(m, ext, extend_filtration(m, ring=ring), doleans_dade(m, ext))


def lattice_pairs(ring) -> list[Pair]:
    t1 = ring.t1
    return [(t, u) for t in t1 for u in t1 if u != t and u & ~t == 0]


def check_dpartition(ring, d: DPartition) -> None:
    lattice = set(ring.t1)
    used = 0
    for t, u in d.pairs:
        if t not in lattice or u not in lattice:
            raise DPartitionError(f"pair ({t:b}, {u:b}) is not made of lattice regions")
        if u & ~t or u == t:
            raise DPartitionError(f"pair ({t:b}, {u:b}) is not a proper nested pair")
        if used & t & ~u:
            raise DPartitionError("differences overlap")
        used |= t & ~u


def canonical_maximal(ring) -> DPartition:
    """One lattice pair per ring atom: the smallest lattice region holding it, minus the rest."""
    return DPartition(atom_witness(1 << i, ring.t1) for i in range(ring.n_atoms))


def variation(ctx: QuasiContext, d: DPartition) -> tuple[RV, RV]:
    check_dpartition(ctx.ring, d)
    n = ctx.model.n
    S, V = rv_zero(n), rv_zero(n)
    for t, u in d.pairs:
        inc = ctx.increment(t, u)
        S, V = rv_add(S, inc), rv_add(V, rv_abs(inc))
    return S, V


def difference_weights(ctx: QuasiContext) -> dict[int, Fraction]:
    """Best expected absolute increment over lattice pairs with a given difference."""
    sp = ctx.model.space
    w: dict[int, Fraction] = {}
    for t, u in lattice_pairs(ctx.ring):
        v = sp.expect(rv_abs(ctx.increment(t, u)))
        dif = t & ~u
        if v > w.get(dif, Fraction(-1)):
            w[dif] = v
    return w


def quasinorm(ctx: QuasiContext) -> Fraction:
    """Exact maximum of ``P(V^d)`` over all disjoint families, by a subset recursion."""
    w = difference_weights(ctx)
    full = ctx.ring.full
    best = {0: Fraction(0)}
    for s in range(1, full + 1):
        low = s & -s
        b = best[s & ~low]
        for dif, v in w.items():
            if dif & low and dif & ~s == 0:
                cand = v + best[s & ~dif]
                if cand > b:
                    b = cand
        best[s] = b
    return best[full]


def pd_operator(ctx: QuasiContext, d: DPartition, b: RV) -> Integrand:
    check_dpartition(ctx.ring, d)
    h: dict[int, RV] = {}
    for t, u in d.pairs:
        c = ctx.cond(b, t)
        for i in bits_of(t & ~u):
            h[i] = c
    return h


def restrict(h: Integrand, region: int) -> Integrand:
    return {i: g for i, g in h.items() if region >> i & 1}


@dataclass(frozen=True)
class MuAlpha:
    mu: Fraction
    alpha: Fraction
    mu_via_variation: Fraction
    mu_identity: bool
    x_term: Fraction  # P(Xbar_tau 1_F)
    literal_rhs: Fraction  # mu^d(E[F|F_tau]) - alpha^d_tau(F)
    literal_holds: bool
    corrected_rhs: Fraction  # P(X_inf g) - mu^d(g) + alpha^d_tau(g), g = E[F|F_tau]
    corrected_holds: bool


def mu_alpha(ctx: QuasiContext, d: DPartition, tau: int, event: int) -> MuAlpha:
    ring = ctx.ring
    if not 0 <= tau <= ring.full:
        raise DPartitionError("region is not in the ring")
    sp = ctx.model.space
    ind = sp.indicator(event)
    g = ctx.cond(ind, tau)
    comp = ring.full & ~tau

    def mu_of(b):
        return ctx.dd(pd_operator(ctx, d, b))

    def alpha_of(b):
        return ctx.dd(restrict(pd_operator(ctx, d, b), comp))

    S, _ = variation(ctx, d)
    mu, alpha = mu_of(ind), alpha_of(ind)
    via = sp.expect(rv_mul(S, ind))
    x_term = sp.expect(rv_mul(ctx.ext.xbar[tau], ind))
    literal = mu_of(g) - alpha
    corrected = sp.expect(rv_mul(ctx.model.x_inf, g)) - mu_of(g) + alpha_of(g)
    return MuAlpha(mu, alpha, via, mu == via, x_term, literal, literal == x_term, corrected,
                   corrected == x_term)


def enumerate_dpartitions(ring, limit: int | None = None) -> Iterable[DPartition]:
    """All families of lattice pairs with pairwise disjoint differences (depth-first)."""
    pairs = lattice_pairs(ring)
    diffs = [t & ~u for t, u in pairs]
    order = sorted(range(len(pairs)), key=lambda i: (diffs[i] & -diffs[i], diffs[i]))
    count = 0

    def rec(start, used, chosen):
        nonlocal count
        if limit is not None and count >= limit:
            return
        yield DPartition(pairs[i] for i in chosen)
        count += 1
        for j in range(start, len(order)):
            i = order[j]
            if diffs[i] & used == 0:
                yield from rec(j + 1, used | diffs[i], chosen + [i])

    yield from rec(0, 0, [])


@dataclass(frozen=True)
class IsometryReport:
    quasinorm: Fraction
    operator_norm: Fraction
    equal: bool
    partitions: int
    sign_patterns: int


def operator_norm(ctx: QuasiContext, max_atoms: int = 12) -> tuple[Fraction, int, int]:
    """Sup of ``|phi(h)|`` over adapted simple integrands bounded by one, by enumeration.

    For each disjoint family and each pair, every sign pattern constant on the blocks of the
    pair's sigma-algebra is tried; the pairs contribute independently.
    """
    ring = ctx.ring
    if ring.n_atoms > max_atoms:
        raise DPartitionError(f"{ring.n_atoms} predictable atoms exceeds the limit {max_atoms}")
    sp = ctx.model.space
    dd = ctx.dd
    pair_best: dict[Pair, Fraction] = {}
    patterns = 0
    for t, u in lattice_pairs(ring):
        blocks = ctx.filt.at(t).blocks
        best = None
        for signs in range(1 << len(blocks)):
            g = [Fraction(0)] * sp.n
            for b, blk in enumerate(blocks):
                s = 1 if signs >> b & 1 else -1
                for w in blk:
                    g[w] = Fraction(s)
            v = dd({i: tuple(g) for i in bits_of(t & ~u)})
            patterns += 1
            best = v if best is None or v > best else best
        pair_best[(t, u)] = best
    top, count = Fraction(0), 0
    for d in enumerate_dpartitions(ring):
        count += 1
        val = sum((pair_best[p] for p in d.pairs), Fraction(0))
        top = max(top, val)
    return top, count, patterns


def isometry_check(ctx: QuasiContext, max_atoms: int = 12) -> IsometryReport:
    op, count, patterns = operator_norm(ctx, max_atoms)
    q = quasinorm(ctx)
    return IsometryReport(q, op, q == op, count, patterns)
