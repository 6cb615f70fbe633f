"""Doob-Meyer and Riesz decompositions, stopping-time diagnostics and limits along chains."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..order import RegionRing
from ..setcore import InternalIdentityError
from .model import RV, GridModel, ModelError, rv_abs, rv_add, rv_mul, rv_sub, rv_zero
from .quasi import (
    DPartition, QuasiContext, canonical_maximal, context, enumerate_dpartitions, pd_operator,
    restrict, variation,
)


def _rn(ctx: QuasiContext, measure) -> RV:
    """Density of a finitely additive measure on outcomes, by pointwise division."""
    sp = ctx.model.space
    return tuple(measure(1 << w) / sp.p[w] for w in range(sp.n))


def _sign_pattern(diffs: Sequence[RV]) -> str:
    pos = any(v > 0 for d in diffs for v in d)
    neg = any(v < 0 for d in diffs for v in d)
    return {(False, False): "constant", (True, False): "nondecreasing",
            (False, True): "nonincreasing"}.get((pos, neg), "mixed")


@dataclass(frozen=True)
class DoobMeyerResult:
    M: RV
    A: Mapping[int, RV]
    dstar: DPartition
    reconstruction: bool
    mu_matches_variation: bool
    explicit_alpha_agrees: tuple[int, ...]  # regions where the summed alpha gives the same A
    naturality_holds: tuple[int, ...]
    non_measurable: tuple[int, ...]
    adapted_everywhere: bool
    invariant_under_reordering: bool
    stabilization: Mapping
    orientation: Mapping
    report: Mapping = field(default_factory=dict)


def _decompose(ctx: QuasiContext):
    sp = ctx.model.space
    dstar = canonical_maximal(ctx.ring)

    def mu(event):
        return ctx.dd(pd_operator(ctx, dstar, sp.indicator(event)))

    M = _rn(ctx, mu)
    A = {}
    for tau in range(ctx.ring.full + 1):
        def alpha(event, tau=tau):
            g = ctx.cond(sp.indicator(event), tau)
            return sp.expect(rv_mul(M, g)) - sp.expect(rv_mul(ctx.ext.xbar[tau], sp.indicator(event)))
        A[tau] = _rn(ctx, alpha)
    return dstar, M, A


def _permuted_ring(ring: RegionRing, seed: int) -> tuple[RegionRing, list[int]]:
    order = list(range(ring.n_atoms))
    random.Random(seed).shuffle(order)
    atoms = tuple(ring.atoms[i] for i in order)
    return RegionRing(ring.ambient, ring.generators, ring.gen_cells, atoms), order


def _remap(region: int, order: Sequence[int]) -> int:
    """Region in original atom coordinates to permuted coordinates."""
    out = 0
    for new, old in enumerate(order):
        if region >> old & 1:
            out |= 1 << new
    return out


def doob_meyer(m: GridModel, seed: int = 0, samples: int = 24) -> DoobMeyerResult:
    ctx = context(m)
    sp = m.space
    ring = ctx.ring
    dstar, M, A = _decompose(ctx)
    S, _ = variation(ctx, dstar)
    recon = all(rv_sub(ctx.cond(M, t), A[t]) == ctx.ext.xbar[t] for t in A)
    if not recon:
        raise InternalIdentityError("decomposition does not reconstruct the extended process")

    explicit_ok, natural_ok, nonmeas = [], [], []
    for tau in A:
        comp = ring.full & ~tau

        def alpha_sum(event, comp=comp):
            return ctx.dd(restrict(pd_operator(ctx, dstar, sp.indicator(event)), comp))

        if _rn(ctx, alpha_sum) == A[tau]:
            explicit_ok.append(tau)
        nat = True
        for w in range(sp.n):
            ind = sp.indicator(1 << w)
            lhs = sp.expect(rv_mul(A[tau], ind))
            rhs = Fraction(0)
            for t, u in dstar.pairs:
                if (t & ~u) & comp:
                    rhs += sp.expect(rv_mul(ctx.cond(ind, t), rv_sub(A[u], A[t])))
            nat = nat and lhs == rhs
        if nat:
            natural_ok.append(tau)
        if not ctx.filt.at(tau).measurable(A[tau]):
            nonmeas.append(tau)
    not_adapted = [t for t in A if not ctx.filt.at(t).measurable(ctx.ext.xbar[t])]
    if sorted(nonmeas) != sorted(not_adapted):
        raise InternalIdentityError("measurability of A differs from adaptedness of the process")

    pring, order = _permuted_ring(ring, seed)
    pctx = context(m, ring=pring)
    _, pM, pA = _decompose(pctx)
    invariant = pM == M and all(pA[_remap(t, order)] == A[t] for t in A)
    if not invariant:
        raise InternalIdentityError("decomposition depends on the order of the region atoms")

    stab = stabilization(ctx, dstar, seed, samples)
    if not stab["cofinal"] or not stab["stable"]:
        raise InternalIdentityError(f"net of partitions does not stabilise: {stab}")

    t1 = set(ring.t1)
    lat, full = [], []
    for t in A:
        for u in A:
            if u != t and u & ~t == 0:
                diff = rv_sub(A[u], A[t])
                full.append(diff)
                if t in t1 and u in t1:
                    lat.append(diff)
    orientation = {"lattice_pairs": _sign_pattern(lat), "ring_pairs": _sign_pattern(full)}
    return DoobMeyerResult(
        M, A, dstar, recon, S == M, tuple(explicit_ok), tuple(natural_ok), tuple(nonmeas),
        not not_adapted, invariant, stab, orientation,
    )


def stabilization(ctx: QuasiContext, dstar: DPartition, seed: int, samples: int) -> dict:
    """Cofinality of the canonical partition and constancy of the induced measure beyond it."""
    sp = ctx.model.space
    pool = list(enumerate_dpartitions(ctx.ring, limit=4000))
    rng = random.Random(seed)
    picked = rng.sample(pool, min(samples, len(pool)))

    def mu_vec(d):
        return tuple(ctx.dd(pd_operator(ctx, d, sp.indicator(1 << w))) for w in range(sp.n))

    ref = mu_vec(dstar)
    beyond = [d for d in pool if d.refines(dstar)]
    return {
        "sampled": len(picked),
        "cofinal": all(dstar.refines(d) for d in picked),
        "refinements_of_dstar": len(beyond),
        "stable": all(mu_vec(d) == ref for d in beyond),
    }


# --- Riesz -------------------------------------------------------------------------------

@dataclass(frozen=True)
class RieszResult:
    M: RV
    Z: Mapping[int, RV]
    z_empty_zero: bool
    lattice_supermartingale: bool  # over pairs of the lattice generated by the strict up-sets
    lattice_nonnegative: bool
    lattice_zero: bool
    ring_supermartingale: bool  # over all nested pairs of ring regions
    nonnegative: bool
    perturbation_detected: bool


def ring_supermartingale(ctx: QuasiContext, regions=None) -> bool:
    x = ctx.ext.xbar
    regions = list(x) if regions is None else list(regions)
    for t in regions:
        for u in regions:
            if u & ~t == 0 and any(a < b for a, b in zip(x[t], ctx.cond(x[u], t))):
                return False
    return True


def riesz(m: GridModel, seed: int = 0) -> RieszResult:
    ctx = context(m)
    x = ctx.ext.xbar
    M = x[0]
    Z = {t: rv_sub(x[t], ctx.cond(M, t)) for t in x}
    if any(Z[0]):
        raise InternalIdentityError("potential part does not vanish at the empty region")
    t1 = ctx.ring.t1
    lat_supm = ring_supermartingale(ctx, t1)
    lat_nonneg = all(v >= 0 for t in t1 for v in Z[t])
    if lat_supm and not lat_nonneg:
        raise InternalIdentityError("supermartingale with a negative potential part")
    supm = ring_supermartingale(ctx)
    nonneg = all(v >= 0 for z in Z.values() for v in z)
    if supm and not nonneg:
        raise InternalIdentityError("ring supermartingale with a negative potential part")
    rng = random.Random(seed)
    delta = tuple(Fraction(rng.choice([-2, -1, 1, 2])) for _ in range(m.n))
    delta = m.space.cond(delta, m.filtration.terminal)
    if not any(delta):
        delta = (Fraction(1),) * m.n
    detected = not riesz_holds(ctx, rv_add(M, delta), Z)
    if not detected:
        raise InternalIdentityError("a perturbed martingale part still satisfies the decomposition")
    return RieszResult(M, Z, True, lat_supm, lat_nonneg, all(not any(Z[t]) for t in t1), supm,
                       nonneg, detected)


def riesz_holds(ctx: QuasiContext, M: RV, Z: Mapping[int, RV]) -> bool:
    return all(rv_add(ctx.cond(M, t), Z[t]) == ctx.ext.xbar[t] for t in Z) and not any(Z[0])


def alternative_decomposition(ctx: QuasiContext, M: RV) -> bool:
    """True when ``M`` yields a potential part that vanishes at the empty region."""
    return not any(rv_sub(ctx.ext.xbar[0], ctx.cond(M, 0)))


# --- stopping times ----------------------------------------------------------------------

@dataclass(frozen=True)
class StoppingTime:
    """``sum tau_n 1_{F_n}`` with the empty region on the complement of the events."""

    pieces: tuple[tuple[int, int], ...]  # (region, event mask)


def check_stopping_time(ctx: QuasiContext, sigma: StoppingTime) -> None:
    used = 0
    for region, event in sigma.pieces:
        if not 0 <= region <= ctx.ring.full:
            raise ModelError(f"region {region:b} is not in the ring")
        if not ctx.filt.at(region).contains_event(event):
            raise ModelError(f"event {event:b} is not measurable at region {region:b}")
        if used & event:
            raise ModelError("stopping events overlap")
        used |= event


def stopped_value(ctx: QuasiContext, sigma: StoppingTime) -> RV:
    check_stopping_time(ctx, sigma)
    sp = ctx.model.space
    out = rv_zero(sp.n)
    rest = sp.full_event
    for region, event in sigma.pieces:
        out = rv_add(out, rv_mul(ctx.ext.xbar[region], sp.indicator(event)))
        rest &= ~event
    return rv_add(out, rv_mul(ctx.ext.xbar[0], sp.indicator(rest)))


def premeyer(Y: Sequence, k) -> tuple[Fraction, Fraction]:
    """Both sides of ``Z_N 1{Z_N > 2k} <= 3 sum_n Y_n 1{Z_n > k}`` for scalar increments."""
    k = Fraction(k)
    Z, rhs = Fraction(0), Fraction(0)
    for y in Y:
        y = Fraction(y)
        if y < 0:
            raise ValueError("increments must be nonnegative")
        Z += y
        if Z > k:
            rhs += y
    return (Z if Z > 2 * k else Fraction(0)), 3 * rhs


def _ind_gt(x: RV, k) -> RV:
    return tuple(Fraction(int(v > k)) for v in x)


def chain_dpartitions(ctx: QuasiContext) -> list[tuple[list[int], DPartition]]:
    """Consecutive-difference partitions along subsequences of a linearly ordered lattice."""
    chain = sorted(ctx.ring.t1, key=lambda r: -bin(r).count("1"))
    for a, b in zip(chain, chain[1:]):
        if b & ~a:
            raise ModelError("the predictable lattice is not linearly ordered")
    out = []
    n = len(chain)
    for sel in range(1, 1 << n):
        seq = [chain[i] for i in range(n) if sel >> i & 1]
        if len(seq) < 2:
            continue
        out.append((seq, DPartition(zip(seq, seq[1:]))))
    return out


@dataclass(frozen=True)
class StoppingReport:
    values: tuple[RV, ...]
    sup_l1: Fraction
    d_to_dm: tuple[dict, ...]
    dm_to_d: tuple[dict, ...]
    # +1 when the class inequalities were evaluated on the process itself (a submartingale),
    # -1 when on its negation (a supermartingale), 0 when neither applies
    orientation: int = 0


def _submartingale_view(m: GridModel) -> tuple[GridModel, int]:
    from .model import validate_model
    rep = validate_model(m)
    if rep.submartingale:
        return m, 1
    if rep.supermartingale:
        neg = {g: tuple(-v for v in x) for g, x in m.x.items()}
        return m.with_process(neg, tuple(-v for v in m.x_inf)), -1
    return m, 0


def stopping_diagnostics(m: GridModel, sigmas: Sequence[StoppingTime]) -> StoppingReport:
    """Stopped values, and on linearly ordered grids both class D / class DM inequalities.

    The inequalities concern submartingales; a supermartingale is handled through its negation,
    which leaves the absolute stopped values unchanged.
    """
    ctx = context(m)
    sp = m.space
    vals = tuple(stopped_value(ctx, s) for s in sigmas)
    sup = max((sp.expect(rv_abs(v)) for v in vals), default=Fraction(0))
    d_to_dm, dm_to_d = [], []
    sub, sign = _submartingale_view(m) if m.ambient.k == 1 else (m, 0)
    if sign:
        sctx = context(sub)
        svals = [stopped_value(sctx, s) for s in sigmas]
        chains = chain_dpartitions(sctx)
        for seq, d in chains:
            S, _ = variation(sctx, d)
            for k in (0, 1, 2):
                sig_k = _sigma_k(sctx, seq, k)
                candidates = svals + [stopped_value(sctx, sig_k),
                                      stopped_value(sctx, StoppingTime(((seq[-1], sp.full_event),)))]
                ind = _ind_gt(S, k)
                lhs = sp.expect(rv_mul(S, _ind_gt(S, 2 * k)))
                mid = 3 * sp.expect(rv_mul(rv_sub(sctx.ext.xbar[seq[-1]], candidates[-2]), ind))
                rhs = 6 * max(sp.expect(rv_mul(rv_abs(v), ind)) for v in candidates)
                d_to_dm.append({"sequence": seq, "k": k, "lhs": lhs, "middle": mid, "rhs": rhs,
                                "holds": lhs <= mid <= rhs})
        M = sctx.ext.xbar[0]
        for v in svals:
            for k in (0, 1, 2):
                big = tuple(Fraction(int(abs(a) > k)) for a in v)
                lhs = sp.expect(rv_mul(rv_abs(v), big))
                base = sp.expect(rv_mul(big, rv_add(rv_abs(sctx.ext.xbar[0]), rv_abs(M))))
                extra = max((sp.expect(rv_mul(big, variation(sctx, d)[0])) for _, d in chains),
                            default=Fraction(0))
                dm_to_d.append({"k": k, "lhs": lhs, "rhs": base + extra, "holds": lhs <= base + extra})
    return StoppingReport(vals, sup, tuple(d_to_dm), tuple(dm_to_d), sign)


def _sigma_k(ctx: QuasiContext, seq: Sequence[int], k) -> StoppingTime:
    """First index where the running sum of conditional increments exceeds ``k``."""
    sp = ctx.model.space
    running = rv_zero(sp.n)
    stopped = 0
    pieces = []
    for t, u in zip(seq, seq[1:]):
        prev = running
        running = rv_add(running, ctx.increment(t, u))
        ev = 0
        for w in range(sp.n):
            if not stopped >> w & 1 and running[w] > k >= prev[w]:
                ev |= 1 << w
        blk_ok = ctx.filt.at(t).contains_event(ev)
        if ev and blk_ok:
            pieces.append((t, ev))
            stopped |= ev
    return StoppingTime(tuple(pieces))


# --- limits along increasing sequences ---------------------------------------------------

@dataclass(frozen=True)
class ChainLimitReport:
    limits: tuple[RV, ...]
    stable_from: tuple[int, ...]
    y_identity: bool
    terminal_value: RV


def chain_limit(m: GridModel, regions: Sequence[int]) -> ChainLimitReport:
    ctx = context(m)
    sp = m.space
    regions = list(regions)
    if not regions:
        raise ModelError("empty sequence")
    for a, b in zip(regions, regions[1:]):
        if b & ~a:
            raise ModelError("regions must shrink weakly along the sequence")
    x = ctx.ext.xbar
    n = len(regions)
    limits, stable = [], []
    y_ok = True
    for k in range(n):
        G = ctx.filt.at(regions[k])
        for j in range(k + 1, n):
            G = G.meet(ctx.filt.at(regions[j]))
        seq = [sp.cond(x[regions[j]], ctx.filt.at(regions[k])) for j in range(k, n)]
        last = seq[-1]
        idx = len(seq) - 1
        while idx > 0 and seq[idx - 1] == last:
            idx -= 1
        limits.append(last)
        stable.append(k + idx)
        Y = sp.cond(x[regions[-1]], G)
        for j in range(k, n):
            val = sp.cond(x[regions[j]], G)
            for t in range(j, n - 1):
                val = rv_add(val, sp.cond(rv_sub(x[regions[t + 1]], x[regions[t]]), G))
            y_ok = y_ok and val == Y
    return ChainLimitReport(tuple(limits), tuple(stable), y_ok, x[regions[-1]])


def interleave(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Merge two shrinking sequences into one, when their members are nested."""
    merged = sorted(set(a) | set(b), key=lambda r: -bin(r).count("1"))
    for p, q in zip(merged, merged[1:]):
        if q & ~p:
            raise ModelError("sequences are not interleavable")
    return merged


__all__ = [
    "DoobMeyerResult", "RieszResult", "StoppingTime", "StoppingReport", "ChainLimitReport",
    "doob_meyer", "riesz", "riesz_holds", "alternative_decomposition", "stopping_diagnostics",
    "stopped_value", "premeyer", "chain_limit", "interleave", "stabilization", "ring_supermartingale",
]
