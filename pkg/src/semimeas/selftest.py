"""Property suites behind ``semimeas selftest``.

Each property draws its instances from its own generator seeded by ``(seed, name)`` so that
reports are reproducible and independent of suite order.  A failing property carries a
witness and, when the instance is a set function or a model, a standalone JSON reproducer.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Callable

from . import io
from .order import (
    INF, FinitePreorder, GridAmbient, all_preorder_relations, check_order_property,
    check_order_property_grid, norberg_down, norberg_down_inverse, norberg_strict,
    norberg_strict_inverse,
)
from .product import disjoint_union_value, product_extend_ring, rectangle_mask
from .samplers import random_product, random_semilattice, random_semimodular, random_setfunction
from .semimodular import (
    SetFunction, alternating_sum, conjugate, extend_to_lattice, extend_to_ring, is_semiadditive,
    is_semimodular, is_semimodular_enum, is_semimodular_solver, semiadditive_translation, vsub,
)
from .setcore import (
    classify_family, generate_ring, indicator_identity_check, mobius_interval_sum,
    mobius_invert, nu, popcount, recover, submasks,
)

SUITES = ("core", "stoch")
FAULTS = ("nu",)


@dataclass
class PropertyResult:
    name: str
    module: str
    checked: int = 0
    passed: bool = True
    witness: object = None
    reproducer: object = None
    note: str = ""

    def fail(self, witness, reproducer=None):
        if self.passed:
            self.passed = False
            self.witness = witness
            self.reproducer = reproducer


@dataclass
class Config:
    samples: int
    seed: int
    faults: frozenset = field(default_factory=frozenset)

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")

    @property
    def weight(self) -> Callable[[int], int]:
        if "nu" not in self.faults:
            return nu
        # corrupted sign on three-element index sets
        return lambda b: -nu(b) if popcount(b) == 3 else nu(b)


PROPERTIES: list[tuple[str, str, str, Callable]] = []


def prop(suite: str, module: str, name: str):
    def deco(fn):
        PROPERTIES.append((suite, module, name, fn))
        return fn
    return deco


def shrink_setfunction(f: SetFunction, fails: Callable[[SetFunction], bool]) -> SetFunction:
    """Greedily drop domain members while the family stays a semilattice and ``fails`` holds."""
    changed = True
    while changed and len(f.domain) > 1:
        changed = False
        for s in f.domain.sets:
            fam = classify_family(f.ground, [t for t in f.domain.sets if t != s])
            if not fam.is_semilattice:
                continue
            g = SetFunction(fam, {t: f.values[t] for t in fam.sets}, f.dim)
            try:
                bad = fails(g)
            except Exception:
                bad = False
            if bad:
                f, changed = g, True
                break
    return f


def _repro_sf(f: SetFunction, fails, cfg: Config) -> dict:
    return {"seed": cfg.seed, "instance": io.setfunction_doc(shrink_setfunction(f, fails))}


def _repro_model(m, cfg: Config) -> dict:
    return {"seed": cfg.seed, "instance": io.model_doc(m)}


def _n_models(cfg: Config) -> int:
    return max(2, -(-cfg.samples // 5))


# --- set_core ----------------------------------------------------------------------------

@prop("core", "set_core", "mobius_interval_sums_vanish")
def _mobius_zero(cfg: Config, r: PropertyResult):
    w = cfg.weight
    for b in range(1 << 6):
        for a in submasks(b):
            if a == b:
                continue
            r.checked += 1
            if mobius_interval_sum(a, b, w) != 0:
                r.fail({"a": a, "b": b, "sum": mobius_interval_sum(a, b, w)})
                return


@prop("core", "set_core", "nu_sums_to_one")
def _nu_sum(cfg: Config, r: PropertyResult):
    w = cfg.weight
    for N in range(1, 7):
        r.checked += 1
        s = sum(w(b) for b in range(1, 1 << N))
        if s != 1:
            r.fail({"N": N, "sum": s})
            return


def _inversion_ok(f, n, w) -> tuple[bool, object]:
    for anchor in range(1 << n):
        for direction in ("lower", "upper"):
            try:
                out = mobius_invert(f, n, anchor, direction, weight=w)
            except Exception as err:
                return False, {"anchor": anchor, "direction": direction, "error": str(err)}
            back = recover(out, w)
            if any(back[s] != f[s] for s in back):
                return False, {"anchor": anchor, "direction": direction}
    return True, None


@prop("core", "set_core", "mobius_inversion_round_trip")
def _mobius_invert(cfg: Config, r: PropertyResult):
    w = cfg.weight
    # inversion is linear in f, so the basis of indicator functions certifies every f on [3]
    for s in range(8):
        f = {t: Fraction(int(t == s)) for t in range(8)}
        r.checked += 1
        ok, wit = _inversion_ok(f, 3, w)
        if not ok:
            r.fail({"basis": s, **wit})
            return
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        n = rng.choice((3, 5))
        f = {t: Fraction(rng.randint(-3, 3)) for t in range(1 << n)}
        r.checked += 1
        ok, wit = _inversion_ok(f, n, w) if n == 3 else _inversion_ok_anchor(f, n, w, rng)
        if not ok:
            r.fail({"f": f, **wit})
            return


def _inversion_ok_anchor(f, n, w, rng):
    anchor = rng.randint(0, (1 << n) - 1)
    for direction in ("lower", "upper"):
        try:
            back = recover(mobius_invert(f, n, anchor, direction, weight=w), w)
        except Exception as err:
            return False, {"anchor": anchor, "direction": direction, "error": str(err)}
        if any(back[s] != f[s] for s in back):
            return False, {"anchor": anchor, "direction": direction}
    return True, None


@prop("core", "set_core", "ring_closed_and_atoms_sound")
def _ring(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        fam = random_semilattice(rng, rng.randint(1, 6))
        ring = generate_ring(fam)
        members = set(ring.family.sets)
        r.checked += 1
        for a in members:
            for b in members:
                if not {a | b, a & b, a & ~b} <= members:
                    r.fail({"family": io.family_doc(fam), "pair": [a, b]})
                    return
        for m in members:
            idx = ring.atom_of[m]
            parts = [ring.atoms[i] for i in idx]
            if reduce(lambda x, y: x | y, parts, 0) != m or sum(map(popcount, parts)) != popcount(m):
                r.fail({"family": io.family_doc(fam), "member": m})
                return


@prop("core", "set_core", "indicator_identities")
def _indicator(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        n, N = rng.randint(1, 8), rng.randint(1, 5)
        sets = [rng.randint(0, (1 << n) - 1) for _ in range(N)]
        r.checked += 1
        try:
            indicator_identity_check(sets, n)
        except Exception as err:
            r.fail({"sets": sets, "n": n, "error": str(err)})
            return


# --- semimodular -------------------------------------------------------------------------

def _instance(rng, semimodular_bias=0.5, max_n=6) -> SetFunction:
    fam = random_semilattice(rng, rng.randint(1, max_n), 10)
    if rng.random() < semimodular_bias:
        return random_semimodular(rng, fam, translated=rng.random() < 0.5)
    return random_setfunction(rng, fam)


@prop("core", "semimodular", "deciders_agree")
def _deciders(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)

    def disagree(g):
        return is_semimodular_enum(g, 12).verdict != is_semimodular_solver(g).verdict

    for _ in range(cfg.samples):
        f = _instance(rng)
        r.checked += 1
        if disagree(f):
            r.fail({"enumerative": is_semimodular_enum(f, 12).verdict},
                   _repro_sf(f, disagree, cfg))
            return


@prop("core", "semimodular", "ring_extension_is_the_atom_solution")
def _uniqueness(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        f = random_semimodular(rng, random_semilattice(rng, rng.randint(1, 6)))
        cert = is_semimodular_solver(f)
        ext = extend_to_ring(f)
        r.checked += 1
        for m, idx in ext.ring.atom_of.items():
            tot = [Fraction(0)] * f.dim
            for i in idx:
                tot = [a + b for a, b in zip(tot, cert.atom_values[i])]
            if tuple(tot) != ext.at(m):
                r.fail({"member": m}, _repro_sf(f, lambda g: False, cfg))
                return


@prop("core", "semimodular", "restriction_law")
def _restriction(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        f = random_semimodular(rng, random_semilattice(rng, rng.randint(1, 6)),
                               translated=rng.random() < 0.5)
        ext = extend_to_ring(f)
        sa, _ = is_semiadditive(f)
        y, _ = semiadditive_translation(f)
        r.checked += 1
        for s in f.domain.sets:
            diff = vsub(ext.at(s), f.values[s])
            if (sa and any(diff)) or diff != y:
                r.fail({"set": s, "semiadditive": sa, "difference": diff, "y": y},
                       _repro_sf(f, lambda g: False, cfg))
                return
        lat = extend_to_lattice(f)
        if any(lat.values[s] != f.values[s] for s in f.domain.sets):
            r.fail({"lattice_restriction": False}, _repro_sf(f, lambda g: False, cfg))
            return


def _collection(rng, f: SetFunction, N: int) -> list[int]:
    return [rng.choice(f.domain.sets) for _ in range(N)]


@prop("core", "semimodular", "parsimony_identity")
def _parsimony(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        f = _instance(rng, 0.0)
        kind = f.domain.kind
        op = "cap" if kind == "cap" else "cup"
        sets = _collection(rng, f, rng.randint(1, 4))
        # an extra member nested inside (cap) or around (cup) the last one
        last = sets[-1]
        nested = [s for s in f.domain.sets
                  if (s & ~last == 0 if kind == "cap" else last & ~s == 0)]
        extra = rng.choice(nested)
        r.checked += 1
        lhs = alternating_sum(f.values, sets + [extra], op, f.dim)
        rhs = alternating_sum(f.values, sets, op, f.dim)
        if lhs != rhs:
            r.fail({"collection": sets + [extra], "lhs": lhs, "rhs": rhs},
                   {"seed": cfg.seed, "instance": io.setfunction_doc(f)})
            return


@prop("core", "semimodular", "decomposition_identity")
def _decomposition(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        f = _instance(rng, 0.0)
        op = "cap" if f.domain.kind == "cap" else "cup"
        comb = (lambda a, b: a & b) if op == "cap" else (lambda a, b: a | b)
        sets = _collection(rng, f, rng.randint(2, 5))
        head, last = sets[:-1], sets[-1]
        lhs = alternating_sum(f.values, sets, op, f.dim)
        a = alternating_sum(f.values, head, op, f.dim)
        b = alternating_sum(f.values, [comb(s, last) for s in head], op, f.dim)
        rhs = tuple(x + y - z for x, y, z in zip(f.values[last], a, b))
        r.checked += 1
        if lhs != rhs:
            r.fail({"collection": sets, "lhs": lhs, "rhs": rhs},
                   {"seed": cfg.seed, "instance": io.setfunction_doc(f)})
            return


@prop("core", "semimodular", "conjugation_duality")
def _conjugation(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        f = _instance(rng)
        r.checked += 1
        fails = lambda g: is_semimodular(g) != is_semimodular(conjugate(g))  # noqa: E731
        if fails(f):
            r.fail({"verdict": is_semimodular(f)}, _repro_sf(f, fails, cfg))
            return


# --- product_ext -------------------------------------------------------------------------

@prop("core", "product_ext", "sections_paths_and_rectangles")
def _product(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(max(1, cfg.samples // 2)):
        f = random_product(rng, rng.randint(1, 4), rng.randint(1, 4))
        r.checked += 1
        try:
            ext = product_extend_ring(f)  # checks both pass orders and the direct solve
        except Exception as err:
            r.fail({"error": str(err)})
            return
        L, R = generate_ring(f.base.left), generate_ring(f.base.right)
        nr = f.base.right.ground.n
        for a in f.base.left.sets:
            sec = extend_to_ring(f.section_left(a))
            for b in R.family.sets:
                if ext.at(rectangle_mask(a, b, nr)) != sec.at(b):
                    r.fail({"section_left": a, "right_member": b})
                    return
        for b in f.base.right.sets:
            sec = extend_to_ring(f.section_right(b))
            for a in L.family.sets:
                if ext.at(rectangle_mask(a, b, nr)) != sec.at(a):
                    r.fail({"section_right": b, "left_member": a})
                    return
        for m in rng.sample(list(ext.function.values), min(8, len(ext.function.values))):
            if disjoint_union_value(ext, m) != ext.at(m):
                r.fail({"member": m})
                return


# --- order_semilattice -------------------------------------------------------------------

def _random_total_preorder(rng, n) -> FinitePreorder:
    rank = [rng.randint(0, n) for _ in range(n)]
    return FinitePreorder([[rank[i] <= rank[j] for j in range(n)] for i in range(n)])


@prop("core", "order_semilattice", "order_property_forces_chains")
def _structure(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for i in range(cfg.samples):
        n = rng.randint(1, 8)
        p = _random_total_preorder(rng, n) if i % 2 else all_preorder_relations(n, rng)
        ok, _ = check_order_property(p)
        if not ok:
            continue
        r.checked += 1
        for x in range(n):
            for y in range(n):
                if (p.up_strict(x) & ~p.up_strict(y) == 0) != p.le(y, x):
                    r.fail({"preorder": io.preorder_doc(p), "x": x, "y": y})
                    return
        if not p.is_total():
            r.fail({"preorder": io.preorder_doc(p), "total": False})
            return


@prop("core", "order_semilattice", "norberg_round_trips_and_linearity")
def _norberg(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        p = _random_total_preorder(rng, rng.randint(1, 6))
        cls = {x: min(c) for c in p.classes() for x in c}
        base = {c: Fraction(rng.randint(-4, 4)) for c in set(cls.values())}
        base2 = {c: Fraction(rng.randint(-4, 4)) for c in set(cls.values())}
        F = [(base[cls[x]],) for x in range(p.n)]
        G = [(base2[cls[x]],) for x in range(p.n)]
        r.checked += 1
        phi = norberg_down(p, F)
        corr = norberg_strict(p, F)
        if norberg_down_inverse(p, phi) != F or norberg_strict_inverse(p, corr) != F:
            r.fail({"preorder": io.preorder_doc(p), "F": F})
            return
        k = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        H = [(k * f[0] + g[0],) for f, g in zip(F, G)]
        phiG, phiH = norberg_down(p, G), norberg_down(p, H)
        cG, cH = norberg_strict(p, G), norberg_strict(p, H)
        for s in phiH.domain.sets:
            if phiH.values[s][0] != k * phi.values[s][0] + phiG.values[s][0]:
                r.fail({"preorder": io.preorder_doc(p), "linearity": "down"})
                return
        for s in cH.psi.domain.sets:
            if cH.psi.values[s][0] != k * corr.psi.values[s][0] + cG.psi.values[s][0]:
                r.fail({"preorder": io.preorder_doc(p), "linearity": "strict"})
                return


def _random_expr(rng, amb: GridAmbient, depth: int):
    if depth == 0 or rng.random() < 0.3:
        return ("up", rng.choice(list(amb.points) + [INF]))
    return (rng.choice(("or", "and", "minus")), _random_expr(rng, amb, depth - 1),
            _random_expr(rng, amb, depth - 1))


def _eval_cells(amb, e) -> int:
    if e[0] == "up":
        return amb.upset_of(e[1])
    a, b = _eval_cells(amb, e[1]), _eval_cells(amb, e[2])
    return a | b if e[0] == "or" else a & b if e[0] == "and" else a & ~b


def _eval_point(amb, e, t) -> bool:
    if e[0] == "up":
        return amb.strictly_above(t, e[1])
    a, b = _eval_point(amb, e[1], t), _eval_point(amb, e[2], t)
    return a or b if e[0] == "or" else a and b if e[0] == "and" else a and not b


@prop("core", "order_semilattice", "grid_cells_match_sample_points")
def _grid(cfg: Config, r: PropertyResult):
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples):
        k = rng.randint(1, 3)
        amb = GridAmbient([sorted(rng.sample(range(-5, 6), rng.randint(1, 3 if k < 3 else 2)))
                           for _ in range(k)])
        ok, wit = check_order_property_grid(amb)
        if not ok:
            r.fail({"levels": [list(map(str, lv)) for lv in amb.levels], "order_property": wit})
            return
        e1, e2 = _random_expr(rng, amb, 3), _random_expr(rng, amb, 3)
        c1, c2 = _eval_cells(amb, e1), _eval_cells(amb, e2)
        pts = [amb.sample_point(c) for c in amb.cells]
        v1 = [_eval_point(amb, e1, t) for t in pts]
        v2 = [_eval_point(amb, e2, t) for t in pts]
        r.checked += 1
        if [bool(c1 >> i & 1) for i in range(len(pts))] != v1 or (c1 == c2) != (v1 == v2):
            r.fail({"levels": [list(map(str, lv)) for lv in amb.levels], "expr": [e1, e2]})
            return


# --- stoch -------------------------------------------------------------------------------

def _models(cfg: Config, name: str, kinds=("adapted",), grids=((2, 2), (3,), (4,))):
    from .stoch.generators import general_model, product_model
    rng = cfg.rng(name)
    for i in range(_n_models(cfg)):
        sizes = grids[i % len(grids)]
        kind = kinds[i % len(kinds)]
        s = rng.randrange(2 ** 32)
        if kind in ("additive_martingale",) or rng.random() < 0.5:
            yield product_model(sizes, s, kind)
        else:
            yield general_model(sizes, rng.randint(2, 8), s, kind)


def _guard(r: PropertyResult, cfg: Config, m, fn) -> bool:
    try:
        return fn()
    except Exception as err:
        r.fail({"error": f"{type(err).__name__}: {err}"}, _repro_model(m, cfg))
        return False


@prop("stoch", "stoch", "predictable_measure_sound")
def _measure(cfg: Config, r: PropertyResult):
    from .stoch import check_strong_additivity, extend_process, phi_p
    for m in _models(cfg, r.name):
        r.checked += 1

        def run():
            ext = extend_process(m)
            ok, wit = check_strong_additivity(ext)
            if not ok:
                r.fail({"pair": wit}, _repro_model(m, cfg))
                return False
            amb = m.ambient
            pts = list(amb.points)
            seen = {}
            for size in range(1, len(pts) + 1):
                for gens in combinations(pts, size):
                    if any(amb.le(a, b) for a in gens for b in gens if a != b):
                        continue
                    region = reduce(lambda acc, g: acc | ext.ring.upset(g), gens, 0)
                    v = phi_p(m, m.space.full_event, gens)
                    if seen.setdefault(region, v) != v:
                        r.fail({"region": region, "generators": list(gens)}, _repro_model(m, cfg))
                        return False
            return True

        if not _guard(r, cfg, m, run):
            return


@prop("stoch", "stoch", "extension_additive_and_adapted")
def _extension(cfg: Config, r: PropertyResult):
    from .stoch import adaptedness, additivity_residuals, extend_filtration, extend_process
    for m in _models(cfg, r.name):
        r.checked += 1

        def run():
            ext = extend_process(m)
            regions = list(range(ext.ring.full + 1))
            rng = cfg.rng(r.name + str(r.checked))
            tuples = [tuple(rng.sample(regions, rng.randint(1, min(3, len(regions)))))
                      for _ in range(60)]
            for t in tuples:
                ru, ri = additivity_residuals(ext, t)
                if any(ru) or any(ri):
                    r.fail({"regions": list(t)}, _repro_model(m, cfg))
                    return False
            bad = adaptedness(m, ext, extend_filtration(m))
            if bad:
                r.fail({"not_adapted": bad}, _repro_model(m, cfg))
                return False
            return True

        if not _guard(r, cfg, m, run):
            return


@prop("stoch", "stoch", "doob_meyer_reconstruction")
def _dm(cfg: Config, r: PropertyResult):
    from .stoch import doob_meyer
    for m in _models(cfg, r.name, kinds=("adapted", "supermartingale", "martingale")):
        r.checked += 1
        if not _guard(r, cfg, m, lambda: doob_meyer(m, seed=cfg.seed, samples=8).reconstruction):
            return


@prop("stoch", "stoch", "martingale_collapse")
def _collapse(cfg: Config, r: PropertyResult):
    from .stoch import context, validate_model
    from .stoch.quasi import lattice_pairs
    r.note = ("checked on chains and on coordinate-additive martingales over 2x2 grids; generic "
              "2x2 martingales keep a mixed-difference increment")
    models = list(_models(cfg, r.name, kinds=("martingale", "adapted"), grids=((3,), (4,))))
    models += list(_models(cfg, r.name + "+", kinds=("additive_martingale",), grids=((2, 2),)))
    for m in models:
        r.checked += 1

        def run():
            ctx = context(m)
            flat = all(not any(ctx.increment(t, u)) for t, u in lattice_pairs(ctx.ring))
            if flat != validate_model(m).martingale:
                r.fail({"all_increments_zero": flat}, _repro_model(m, cfg))
                return False
            return True

        if not _guard(r, cfg, m, run):
            return


@prop("stoch", "stoch", "riesz_uniqueness")
def _riesz(cfg: Config, r: PropertyResult):
    from .stoch import riesz
    for m in _models(cfg, r.name, kinds=("supermartingale", "adapted")):
        r.checked += 1
        if not _guard(r, cfg, m, lambda: riesz(m, seed=cfg.seed).perturbation_detected):
            return


@prop("stoch", "stoch", "isometry")
def _isometry(cfg: Config, r: PropertyResult):
    from .stoch import context, isometry_check
    for m in _models(cfg, r.name, kinds=("adapted", "martingale", "supermartingale")):
        r.checked += 1
        if not _guard(r, cfg, m, lambda: isometry_check(context(m)).equal):
            return


@prop("stoch", "stoch", "premeyer_inequality")
def _premeyer(cfg: Config, r: PropertyResult):
    from .stoch import premeyer
    rng = cfg.rng(r.name)
    for _ in range(cfg.samples * 10):
        Y = [Fraction(rng.randint(0, 4), rng.randint(1, 2)) for _ in range(rng.randint(1, 6))]
        k = rng.randint(0, 2)
        lhs, rhs = premeyer(Y, k)
        r.checked += 1
        if lhs > rhs:
            r.fail({"Y": Y, "k": k, "lhs": lhs, "rhs": rhs})
            return


def _run_one(index: int, cfg: Config) -> dict:
    _, module, name, fn = PROPERTIES[index]
    r = PropertyResult(name, module)
    try:
        fn(cfg, r)
    except Exception as err:  # a crash is a failed property, not a crashed run
        r.fail({"error": f"{type(err).__name__}: {err}"})
    return dict(r.__dict__)


def run_suite(suite: str = "all", samples: int = 100, seed: int = 0, faults=(),
              workers: int = 1) -> dict:
    """Run every property of ``suite``; with ``workers > 1`` properties run in separate
    processes and are merged back in their fixed order."""
    if suite not in ("all",) + SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    unknown = set(faults) - set(FAULTS)
    if unknown:
        raise ValueError(f"unknown fault {sorted(unknown)[0]!r}")
    if samples < 1 or workers < 1:
        raise ValueError("samples and workers must be positive")
    cfg = Config(samples, seed, frozenset(faults))
    chosen = [i for i, (s, *_rest) in enumerate(PROPERTIES) if suite == "all" or s == suite]
    if workers == 1:
        results = [_run_one(i, cfg) for i in chosen]
    else:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, chosen, [cfg] * len(chosen)))
    return {
        "suite": suite,
        "samples": samples,
        "faults": sorted(faults),
        "properties": results,
        "passed": all(r["passed"] for r in results),
    }
