"""Experiment-design demo: the sample maximum of increasing local processes.

Locations run increasing processes ``A_k`` on a shared finite probability space.  For a
group ``K`` of locations advanced from time ``a`` to ``a + 1`` while the others stay at zero,
the conditional rise of the sample maximum is at least the largest conditional rise inside
the group; summing over disjoint groups gives a lower bound on the quasi-martingale norm of
the sample maximum that grows with the number of groups.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .extension import UnsupportedGridError
from .model import FiniteProbSpace, Partition, build_model, join_all
from .quasi import context, quasinorm


@dataclass(frozen=True)
class DemoReport:
    locations: int
    horizon: int
    groups: int
    seed: int
    eta: Fraction | None
    group_members: tuple[tuple[int, ...], ...]
    group_terms: tuple[Fraction, ...]
    bound: Fraction
    quasinorm: Fraction | None
    quasinorm_note: str


def _groups(K: int, G: int) -> list[list[int]]:
    if not 1 <= G <= K:
        raise ValueError("need 1 <= groups <= locations")
    out = [[] for _ in range(G)]
    for k in range(K):
        out[k % G].append(k)
    return out


def experiment_demo(K: int, H: int, G: int, seed: int = 0, eta=None, n_omega: int = 8) -> DemoReport:
    """Lower bound ``sum_i P max_{k in K_i} |E[A_k(a+1) | F] - A_k(a)|`` at ``a = 0``.

    With ``eta`` set, every local process rises deterministically by ``eta`` per step.
    Otherwise increments are ``1`` plus a fair-coin bonus, revealed at the step.
    """
    if K < 1 or H < 1:
        raise ValueError("need at least one location and one step")
    rng = random.Random(seed)
    eta = None if eta is None else Fraction(eta)
    if eta is not None:
        space = FiniteProbSpace.uniform(1)
        paths = [[[eta * a for a in range(H + 1)] for _ in range(K)]]
    else:
        space = FiniteProbSpace.uniform(n_omega)
        paths = []
        for _ in range(n_omega):
            loc = []
            for _k in range(K):
                run, vals = Fraction(0), [Fraction(0)]
                for _a in range(H):
                    run += 1 + rng.randint(0, 1)
                    vals.append(run)
                loc.append(vals)
            paths.append(loc)
    n = space.n

    def local(k, a):
        return tuple(paths[w][k][a] for w in range(n))

    def local_part(k, a):
        return Partition.from_labels([tuple(paths[w][k][: a + 1]) for w in range(n)])

    groups = _groups(K, G)
    terms = []
    for members in groups:
        # sigma-algebra at the design point: the group at time 0, everyone else at 0
        F = join_all((local_part(k, 0) for k in range(K)), n)
        best = [Fraction(0)] * n
        for k in members:
            rise = [abs(c - v) for c, v in zip(space.cond(local(k, 1), F), local(k, 0))]
            best = [max(b, r) for b, r in zip(best, rise)]
        terms.append(space.expect(best))
    bound = sum(terms, Fraction(0))

    q, note = None, ""
    if K <= 2 and H == 1 or K == 1:
        levels = [list(range(H + 1)) for _ in range(K)]
        pts = list(iproduct(*(range(H + 1) for _ in range(K))))
        parts = {t: join_all((local_part(k, t[k]) for k in range(K)), n) for t in pts}
        x = {t: tuple(max(paths[w][k][t[k]] for k in range(K)) for w in range(n)) for t in pts}
        try:
            m = build_model(space, levels, parts, x)
            q = quasinorm(context(m))
            note = "design grid supported"
        except UnsupportedGridError as err:
            note = f"design grid unsupported: {err}"
    else:
        note = "design grid too large for the region ring; bound computed from local processes"
    return DemoReport(K, H, G, seed, eta, tuple(map(tuple, groups)), tuple(terms), bound, q, note)
