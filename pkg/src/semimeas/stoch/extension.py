"""Process to measure on the predictable ring, and the extensions of process and filtration.

Predictable regions are masks over the atoms of the region ring (see ``RegionRing``).  A
predictable set is a union of rectangles ``F x region``; simple predictable integrands are
stored as a map from region atom index to a random variable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from typing import Mapping, Sequence

from ..order import INF, GridAmbient, RegionRing, grid_region_algebra
from ..semimodular import NotSemimodularError, SetFunction, extend_to_ring
from ..setcore import InternalIdentityError, bits_of, classify_family, nu
from .model import (
    RV, GridModel, ModelError, Partition, join_all, meet_all, rv_add, rv_mul, rv_scale, rv_sub, rv_zero,
)


@lru_cache(maxsize=64)
def region_ring(amb: GridAmbient) -> RegionRing:
    return grid_region_algebra(amb)


def ring_of(m: GridModel) -> RegionRing:
    return region_ring(m.ambient)


def _event_rv(m: GridModel, event: int) -> RV:
    return m.space.indicator(event)


def _meet_of(m: GridModel, gens) -> object:
    amb = m.ambient
    pts = [amb.check_point(tuple(g) if g != INF else INF) for g in gens]
    if not pts:
        raise ModelError("at least one generator is required")
    return pts, amb.meet_all(pts)


def phi_p(m: GridModel, event: int, gens) -> RV:
    """``1_F (X_inf - X_meet)`` for the region generated by the strict up-sets of ``gens``."""
    pts, mt = _meet_of(m, gens)
    ring = ring_of(m)
    region = reduce(lambda a, g: a | ring.upset(g), pts, 0)
    if ring.t0[region] != mt:
        raise InternalIdentityError("generator families with equal region have different meets")
    return rv_mul(_event_rv(m, event), rv_sub(m.x_inf, m.value(mt)))


def phi_o(m: GridModel, event: int, gens) -> RV:
    """Optional counterpart ``1_F (X_inf - X_join)``."""
    amb = m.ambient
    pts = [amb.check_point(tuple(g) if g != INF else INF) for g in gens]
    if not pts:
        raise ModelError("at least one generator is required")
    jn = pts[0]
    for g in pts[1:]:
        jn = INF if INF in (jn, g) else tuple(max(a, b) for a, b in zip(jn, g))
    return rv_mul(_event_rv(m, event), rv_sub(m.x_inf, m.value(jn)))


@dataclass(frozen=True)
class ProcessExtension:
    ring: RegionRing
    psi: Mapping[int, RV]  # Omega x region, for every ring member
    xbar: Mapping[int, RV]
    atom_psi: tuple[RV, ...]

    def at(self, region: int) -> RV:
        return self.xbar[region]


class UnsupportedGridError(ModelError):
    """The region function of some process on this grid is not semi-additive."""


def extend_process(m: GridModel, verify: bool = True, ring: RegionRing | None = None) -> ProcessExtension:
    ring = ring or ring_of(m)
    n = m.n
    raw = {s: rv_sub(m.x_inf, m.value(g)) for s, g in ring.t0.items()}
    fam = classify_family(ring.ground, raw)
    try:
        ext = extend_to_ring(SetFunction(fam, raw, n), verify=verify)
    except NotSemimodularError as err:
        raise UnsupportedGridError(
            "the process does not induce a semi-additive function on unions of strict up-sets "
            f"of this grid (levels {[len(v) for v in m.ambient.levels]})", err.certificate.witness) from err
    if any(ext.translation):
        raise InternalIdentityError("the region function is not semi-additive")
    psi = {s: ext.at(s) for s in range(1 << ring.n_atoms)}
    xbar = {s: rv_sub(m.x_inf, v) for s, v in psi.items()}
    out = ProcessExtension(ring, psi, xbar, tuple(psi[1 << i] for i in range(ring.n_atoms)))
    if verify:
        for g in m.points():
            if xbar[ring.upset(g)] != m.value(g):
                raise InternalIdentityError(f"extended process differs from the input at {g}")
        if xbar[0] != m.x_inf:
            raise InternalIdentityError("extended process at the empty region is not x_inf")
    return out


def additivity_residuals(ext: ProcessExtension, regions: Sequence[int]) -> tuple[RV, RV]:
    """Residuals of both alternating-sum identities for the extended process."""
    k = len(regions)
    r_union, r_inter = ext.xbar[reduce(lambda a, b: a | b, regions, 0)], ext.xbar[reduce(lambda a, b: a & b, regions)]
    for sel in range(1, 1 << k):
        sub = [regions[i] for i in bits_of(sel)]
        s = nu(sel)
        r_union = rv_sub(r_union, rv_scale(s, ext.xbar[reduce(lambda a, b: a & b, sub)]))
        r_inter = rv_sub(r_inter, rv_scale(s, ext.xbar[reduce(lambda a, b: a | b, sub, 0)]))
    return r_union, r_inter


def check_strong_additivity(ext: ProcessExtension) -> tuple[bool, tuple | None]:
    members = range(1 << ext.ring.n_atoms)
    for a in members:
        for b in members:
            if a & b == 0 and rv_add(ext.psi[a], ext.psi[b]) != ext.psi[a | b]:
                return False, (a, b)
    return True, None


# --- the extended filtration -----------------------------------------------------------

@dataclass(frozen=True)
class ExtendedFiltration:
    ring: RegionRing
    stage0: Mapping[int, Partition]  # unions of strict up-sets
    stage1: Mapping[int, Partition]  # generated lattice
    parts: Mapping[int, Partition]  # every ring member

    def at(self, region: int) -> Partition:
        return self.parts[region]


def _antichain_representations(m: GridModel, ring: RegionRing, region: int):
    amb = m.ambient
    inside = [p for p in ring.generators if ring.upset(p) & ~region == 0]
    for r in range(1, len(inside) + 1):
        for sub in combinations(inside, r):
            if any(amb.le(a, b) for a in sub for b in sub if a != b):
                continue
            if reduce(lambda acc, g: acc | ring.upset(g), sub, 0) == region:
                yield sub


def extend_filtration(m: GridModel, ring: RegionRing | None = None) -> ExtendedFiltration:
    """Three-stage extension of the filtration to every predictable region.

    Stage 0 joins, over antichain representations, the meet of the generators' partitions.
    Stage 1 joins stage 0 over the unions of strict up-sets containing the region, and the
    final stage meets stage 1 over lattice members contained in the region.
    """
    ring = ring or ring_of(m)
    n = m.n
    f = m.filtration
    s0 = {}
    for sigma in ring.t0:
        reps = list(_antichain_representations(m, ring, sigma))
        if not reps:
            raise InternalIdentityError("union of strict up-sets without a representation")
        s0[sigma] = join_all((meet_all((f.at(g) for g in rep), n) for rep in reps), n)
    s1 = {tau: join_all((s0[s] for s in ring.t0 if tau & ~s == 0), n) for tau in ring.t1}
    parts = {}
    for u in range(1 << ring.n_atoms):
        parts[u] = meet_all((s1[t] for t in ring.t1 if t & ~u == 0), n)
    out = ExtendedFiltration(ring, s0, s1, parts)
    for g in m.points():
        if parts[ring.upset(g)] != f.at(g):
            raise InternalIdentityError(f"extended filtration differs from the input at {g}")
    return out


def filtration_antitone(ef: ExtendedFiltration) -> tuple[bool, tuple | None]:
    members = list(ef.parts)
    for a in members:
        for b in members:
            if b & ~a == 0 and not ef.parts[b].refines(ef.parts[a]):
                return False, (a, b)
    return True, None


def adaptedness(m: GridModel, ext: ProcessExtension, ef: ExtendedFiltration) -> list[int]:
    """Ring regions where the extended process is not measurable for the extended filtration."""
    return [u for u, p in ef.parts.items() if not p.measurable(ext.xbar[u])]


# --- Doleans-Dade measure ---------------------------------------------------------------

Integrand = Mapping[int, RV]  # region atom index -> random variable


def rectangle(m: GridModel, event: int, region: int) -> dict[int, RV]:
    ind = m.space.indicator(event)
    return {i: ind for i in bits_of(region)}


def integrate(ext: ProcessExtension, h: Integrand, n: int) -> RV:
    """Random-variable valued integral of a simple predictable integrand."""
    out = rv_zero(n)
    for i, g in h.items():
        out = rv_add(out, rv_mul(g, ext.atom_psi[i]))
    return out


@dataclass(frozen=True)
class DoleansDade:
    model: GridModel
    ext: ProcessExtension

    def __call__(self, h: Integrand) -> Fraction:
        return self.model.space.expect(integrate(self.ext, h, self.model.n))

    def of_set(self, event: int, region: int) -> Fraction:
        return self(rectangle(self.model, event, region))

    def of_predictable(self, cells: Sequence[tuple[int, int]]) -> Fraction:
        """Measure of a predictable set given as (outcome, region atom) pairs."""
        sp = self.model.space
        return sum((sp.p[w] * self.ext.atom_psi[a][w] for w, a in set(cells)), Fraction(0))


def doleans_dade(m: GridModel, ext: ProcessExtension | None = None) -> DoleansDade:
    return DoleansDade(m, ext or extend_process(m))
