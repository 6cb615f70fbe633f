"""Seeded random models for the property suites."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as iproduct

from ..order import GridAmbient
from .extension import extend_process, region_ring
from .model import (
    FiniteProbSpace, GridModel, Partition, build_model, join_all, rv_abs,
)


def _weights(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    raw = [rng.randint(1, 4) for _ in range(n)]
    tot = sum(raw)
    return tuple(Fraction(r, tot) for r in raw)


def _levels(sizes) -> list[list[int]]:
    return [list(range(s)) for s in sizes]


def product_model(sizes, seed: int, kind: str = "adapted", x_inf_mode: str = "max_grid",
                  span: int = 3) -> GridModel:
    """Independent coin per coordinate step; the filtration at ``g`` reveals ``g_i`` coins of
    coordinate ``i``.  ``kind`` is ``adapted``, ``martingale``, ``additive_martingale`` or
    ``supermartingale``."""
    rng = random.Random(seed)
    amb = GridAmbient(_levels(sizes))
    coins = [s - 1 for s in sizes]
    factors = []
    for c in coins:
        outcomes = list(iproduct((0, 1), repeat=c))
        factors.append((outcomes, _weights(rng, len(outcomes))))
    omega = list(iproduct(*(f[0] for f in factors)))
    p = []
    for w in omega:
        q = Fraction(1)
        for i, wi in enumerate(w):
            q *= factors[i][1][factors[i][0].index(wi)]
        p.append(q)
    space = FiniteProbSpace(tuple(f"w{i + 1}" for i in range(len(omega))), tuple(p))
    parts = {g: Partition.from_labels([tuple(w[i][:g[i]] for i in range(len(g))) for w in omega])
             for g in amb.points}
    if kind == "additive_martingale":
        # terminal value is a sum of per-coordinate terms, so mixed differences vanish
        terms = [{o: Fraction(rng.randint(-span, span)) for o in f[0]} for f in factors]
        final = tuple(sum((terms[i][wi] for i, wi in enumerate(w)), Fraction(0)) for w in omega)
        x = {g: space.cond(final, parts[g]) for g in amb.points}
        return build_model(space, amb, parts, x, final, parts[amb.max_point], x_inf_mode)
    return _fill(rng, amb, space, parts, kind, x_inf_mode, span)


def general_model(sizes, n_omega: int, seed: int, kind: str = "adapted",
                  x_inf_mode: str = "max_grid", span: int = 3) -> GridModel:
    """Per-coordinate refining chains of random partitions, joined at each grid point."""
    rng = random.Random(seed)
    amb = GridAmbient(_levels(sizes))
    space = FiniteProbSpace(tuple(f"w{i + 1}" for i in range(n_omega)), _weights(rng, n_omega))
    chains = []
    for s in sizes:
        cur = [0] * n_omega
        chain = [Partition.from_labels(cur)]
        for _ in range(s - 1):
            cur = [(c, rng.randint(0, 1)) for c in cur]
            chain.append(Partition.from_labels(cur))
        chains.append(chain)
    parts = {g: join_all((chains[i][gi] for i, gi in enumerate(g)), n_omega) for g in amb.points}
    return _fill(rng, amb, space, parts, kind, x_inf_mode, span)


def _measurable(rng, part: Partition, span: int):
    vals = [Fraction(rng.randint(-span, span)) for _ in part.blocks]
    return tuple(vals[b] for b in part.labels)


def _fill(rng, amb, space, parts, kind, x_inf_mode, span) -> GridModel:
    n = space.n
    top = amb.max_point
    terminal = parts[top] if x_inf_mode == "max_grid" else Partition.discrete(n)
    if kind == "adapted":
        x = {g: _measurable(rng, parts[g], span) for g in amb.points}
        if x_inf_mode == "zero_at_infinity":
            return build_model(space, amb, parts, x, None, terminal, x_inf_mode)
        return build_model(space, amb, parts, x, x[top], terminal, x_inf_mode)
    if x_inf_mode != "max_grid":
        raise ValueError("martingale-type generators use the max_grid convention")
    final = _measurable(rng, terminal, span)
    x = {g: space.cond(final, parts[g]) for g in amb.points}
    mart = build_model(space, amb, parts, x, final, terminal, x_inf_mode)
    if kind == "martingale":
        return mart
    if kind == "supermartingale":
        return subtract_drift(mart, rng)
    raise ValueError(f"unknown kind {kind!r}")


def subtract_drift(m: GridModel, rng: random.Random | None = None) -> GridModel:
    """Subtract a deterministic increasing process whose region atoms all carry positive
    mass, large enough to dominate the martingale part at every pair of regions."""
    rng = rng or random.Random(0)
    ring = region_ring(m.ambient)
    ext = extend_process(m)
    bound = max(max(rv_abs(v)) for v in ext.xbar.values())
    # atoms between a union of strict up-sets and the up-set of its meet carry no mass for
    # any process, and neither does the up-set of the top grid point
    forced = ring.upset(m.ambient.max_point)
    for sigma, meet in ring.t0.items():
        forced |= ring.upset(meet) & ~sigma
    w = [Fraction(0) if forced >> i & 1 else 2 * bound + rng.randint(1, 3)
         for i in range(ring.n_atoms)]
    drift = {}
    for g in m.ambient.points:
        up = ring.upset(g)
        drift[g] = -sum((w[i] for i in range(ring.n_atoms) if up >> i & 1), Fraction(0))
    x = {g: tuple(v - drift[g] for v in m.x[g]) for g in m.ambient.points}
    return build_model(m.space, m.ambient, m.filtration.parts, x, m.x_inf, m.filtration.terminal,
                       m.x_inf_mode, {"drift_atoms": tuple(w)})


__all__ = ["product_model", "general_model", "subtract_drift"]
