"""Semi-modular and semi-additive set functions on semilattices of sets.

Values live in ``Q^d`` and are tuples of :class:`fractions.Fraction`.  A set function
on a cap-closed family is semi-modular when the inclusion-exclusion formula over
intersections reproduces its value on every union that stays in the family; the
cup-closed case is dual.  Semi-modular functions are exactly the restrictions of
additive functions on the generated ring shifted by a constant, which is what
:func:`is_semimodular_solver` decides by exact linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations, product as iproduct
from typing import Iterable, Iterator, Mapping, Sequence

from . import linalg
from .setcore import (
    GroundSet,
    InternalIdentityError,
    RingStructure,
    SetCoreError,
    SetFamily,
    atom_witness,
    bits_of,
    classify_family,
    complement_family,
    generate_ring,
    nu,
)

Value = tuple[Fraction, ...]
EXHAUSTIVE_DOMAIN = 12
DEFAULT_MAX_COLLECTION = 4


class NotSemimodularError(ValueError):
    def __init__(self, certificate: "SemimodularCertificate"):
        super().__init__("set function is not semi-modular")
        self.certificate = certificate


def value(*coords) -> Value:
    return tuple(Fraction(c) for c in coords)


def zero(d: int) -> Value:
    return (Fraction(0),) * d


def vadd(a: Value, b: Value) -> Value:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Value, b: Value) -> Value:
    return tuple(x - y for x, y in zip(a, b))


def vscale(k, a: Value) -> Value:
    return tuple(k * x for x in a)


def vsum(vals: Iterable[Value], d: int) -> Value:
    return reduce(vadd, vals, zero(d))


@dataclass(frozen=True)
class SetFunction:
    domain: SetFamily
    values: Mapping[int, Value]
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        vals = {}
        for s, v in self.values.items():
            if s not in self.domain:
                raise ValueError(f"value given for a set outside the domain: {s:b}")
            v = tuple(Fraction(x) for x in (v if isinstance(v, (tuple, list)) else (v,)))
            if len(v) != self.dim:
                raise ValueError(f"value {v} has dimension {len(v)}, expected {self.dim}")
            vals[s] = v
        missing = [s for s in self.domain.sets if s not in vals]
        if missing:
            raise ValueError(f"no value for domain member {missing[0]:b}")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    def __call__(self, mask: int) -> Value:
        return self.values[mask]

    @property
    def ground(self) -> GroundSet:
        return self.domain.ground

    @classmethod
    def from_scalars(cls, ground: GroundSet, values: Mapping[int, object]) -> "SetFunction":
        fam = classify_family(ground, values)
        return cls(fam, {s: (Fraction(v),) for s, v in values.items()}, 1)

    def coordinate(self, i: int) -> "SetFunction":
        return SetFunction(self.domain, {s: (v[i],) for s, v in self.values.items()}, 1)


@dataclass(frozen=True)
class SemimodularCertificate:
    verdict: bool
    method: str
    witness: dict | None = None
    incomplete: bool = False
    # solver artifacts on "yes"
    atom_values: tuple[Value, ...] | None = None
    c: Value | None = None
    # whether c was a free variable (then fixed at zero)
    c_free: bool = False
    ring: RingStructure | None = field(default=None, compare=False, repr=False)

    @property
    def answer(self) -> str:
        return "yes" if self.verdict else "no"


def _require_semilattice(family: SetFamily) -> str:
    if not family.is_semilattice:
        raise SetCoreError("domain is not a semi-lattice")
    return family.kind


# --- alternating sums ------------------------------------------------------------------

def alternating_sum(f: Mapping[int, Value], sets: Sequence[int], op: str, d: int) -> Value:
    """sum_{0<b<=[N]} nu(b) f(op_{n in b} A_n) with ``op`` in {"cap", "cup"}.

    Intersections (unions) are built incrementally over the subset lattice of ``[N]``.
    """
    N = len(sets)
    comb = [0] * (1 << N)
    total = zero(d)
    for b in range(1, 1 << N):
        low = b & -b
        i = low.bit_length() - 1
        rest = b ^ low
        if rest == 0:
            comb[b] = sets[i]
        else:
            comb[b] = comb[rest] & sets[i] if op == "cap" else comb[rest] | sets[i]
        v = f[comb[b]]
        total = vadd(total, v) if nu(b) > 0 else vsub(total, v)
    return total


def _antichains(sets: Sequence[int], max_size: int | None, minimum: int = 2) -> Iterator[tuple[int, ...]]:
    n = len(sets)

    def comparable(a: int, b: int) -> bool:
        return a & ~b == 0 or b & ~a == 0

    def rec(start: int, chosen: list[int]):
        if len(chosen) >= minimum:
            yield tuple(chosen)
        if max_size is not None and len(chosen) >= max_size:
            return
        for j in range(start, n):
            s = sets[j]
            if all(not comparable(s, c) for c in chosen):
                chosen.append(s)
                yield from rec(j + 1, chosen)
                chosen.pop()

    yield from rec(0, [])


def relevant_collections(family: SetFamily, max_collection: int | None = DEFAULT_MAX_COLLECTION,
                         minimum: int = 2) -> tuple[Iterator[tuple[int, ...]], bool]:
    """Antichains whose union (cap case) or intersection (cup case) lies in the family.

    Returns the iterator and whether the enumeration is exhaustive.
    """
    kind = _require_semilattice(family)
    exhaustive = len(family) <= EXHAUSTIVE_DOMAIN or max_collection is None
    size = None if exhaustive else max_collection
    combine = (lambda a, b: a | b) if kind == "cap" else (lambda a, b: a & b)

    def gen():
        for coll in _antichains(family.sets, size, minimum):
            if reduce(combine, coll) in family:
                yield coll

    return gen(), exhaustive


def is_semimodular_enum(f: SetFunction, max_collection: int = DEFAULT_MAX_COLLECTION) -> SemimodularCertificate:
    if max_collection < 2:
        raise ValueError("max_collection must be at least 2")
    kind = _require_semilattice(f.domain)
    inner = "cap" if kind == "cap" else "cup"
    collections, exhaustive = relevant_collections(f.domain, max_collection)
    outer = (lambda a, b: a | b) if kind == "cap" else (lambda a, b: a & b)
    for coll in collections:
        target = reduce(outer, coll)
        rhs = alternating_sum(f.values, coll, inner, f.dim)
        lhs = f.values[target]
        if lhs != rhs:
            return SemimodularCertificate(
                False, "enumerative",
                witness={"collection": list(coll), "combined": target, "lhs": lhs, "rhs": rhs},
            )
    return SemimodularCertificate(True, "enumerative", incomplete=not exhaustive)


def _system(f: SetFunction, ring: RingStructure):
    rows = []
    for s in f.domain.sets:
        inside = set(ring.atom_of[s])
        rows.append([Fraction(int(i in inside)) for i in range(len(ring.atoms))] + [Fraction(-1)])
    return rows


def is_semimodular_solver(f: SetFunction) -> SemimodularCertificate:
    """Decide semi-modularity by solving ``sum_{atoms in A} m = f(A) + c`` on the domain.

    When ``c`` is not pinned down by the system it is set to zero, which is the
    empty-union convention for the value of the extension at the empty set.
    """
    _require_semilattice(f.domain)
    ring = generate_ring(f.domain)
    rows = _system(f, ring)
    red = linalg.rref(rows)
    k = len(ring.atoms)
    if any(col < k for col in red.free_columns):
        raise InternalIdentityError("atom values are not determined by the domain")
    sols = []
    for i in range(f.dim):
        rhs = [f.values[s][i] for s in f.domain.sets]
        sol = linalg.solve_reduced(red, rhs)
        if not sol.feasible:
            y = sol.certificate
            combo = linalg.vecmat(y, rows)
            residual = sum((a * b for a, b in zip(y, rhs)), Fraction(0))
            if any(combo) or residual == 0:
                raise InternalIdentityError("bad infeasibility certificate")
            witness = {
                "coordinate": i,
                "multipliers": {s: m for s, m in zip(f.domain.sets, y) if m != 0},
                "residual": residual,
            }
            return SemimodularCertificate(False, "linear_solver", witness=witness, ring=ring)
        sols.append(sol.x)
    atoms = tuple(tuple(sols[i][j] for i in range(f.dim)) for j in range(k))
    c = tuple(sols[i][k] for i in range(f.dim))
    return SemimodularCertificate(True, "linear_solver", atom_values=atoms, c=c,
                                  c_free=k in red.free_columns, ring=ring)


def is_semimodular(f: SetFunction) -> bool:
    return is_semimodular_solver(f).verdict


def _require(f: SetFunction) -> SemimodularCertificate:
    cert = is_semimodular_solver(f)
    if not cert.verdict:
        raise NotSemimodularError(cert)
    return cert


# --- conjugation and translation --------------------------------------------------------

def conjugate(f: SetFunction, debug: bool = False) -> SetFunction:
    g = f.ground
    fam = complement_family(f.domain)
    out = SetFunction(fam, {g.complement(s): vscale(-1, v) for s, v in f.values.items()}, f.dim)
    if debug and f.domain.is_semilattice and is_semimodular(f) != is_semimodular(out):
        raise InternalIdentityError("conjugation changed semi-modularity")
    return out


def translate(f: SetFunction, y: Value, debug: bool = False) -> SetFunction:
    y = tuple(Fraction(v) for v in y)
    if len(y) != f.dim:
        raise ValueError("translation vector has the wrong dimension")
    out = SetFunction(f.domain, {s: vadd(v, y) for s, v in f.values.items()}, f.dim)
    if debug and f.domain.is_semilattice and is_semimodular(f) != is_semimodular(out):
        raise InternalIdentityError("translation changed semi-modularity")
    return out


# --- semi-additivity --------------------------------------------------------------------

def is_semiadditive(f: SetFunction) -> tuple[bool, dict | None]:
    cert = _require(f)
    del cert
    kind = f.domain.kind
    z = zero(f.dim)
    if kind == "cap":
        if 0 in f.domain and f.values[0] != z:
            return False, {"collection": [0], "sum": f.values[0]}
        return True, None
    collections = _antichains(f.domain.sets, None, minimum=1)
    for coll in collections:
        if reduce(lambda a, b: a & b, coll) != 0:
            continue
        s = alternating_sum(f.values, coll, "cup", f.dim)
        if s != z:
            return False, {"collection": list(coll), "sum": s}
    return True, None


# --- extensions -------------------------------------------------------------------------

def _ring_values(ring: RingStructure, atoms: Sequence[Value], d: int, shift: Value | None = None) -> dict[int, Value]:
    out = {}
    for m, idx in ring.atom_of.items():
        v = vsum((atoms[i] for i in idx), d)
        out[m] = vsub(v, shift) if shift is not None else v
    return out


def _eq_k(f: SetFunction, target: int) -> list[Value]:
    """Evaluate the lattice formula at ``target`` for each available representation."""
    kind = f.domain.kind
    results = []
    if kind == "cap":
        inside = [s for s in f.domain.sets if s & ~target == 0]
        if not inside or reduce(lambda a, b: a | b, inside) != target:
            return results
        maximal = [s for s in inside if not any(s != t and s & ~t == 0 for t in inside)]
        results.append(alternating_sum(f.values, maximal, "cap", f.dim))
        if len(inside) <= EXHAUSTIVE_DOMAIN and len(inside) != len(maximal):
            results.append(alternating_sum(f.values, inside, "cap", f.dim))
    else:
        around = [s for s in f.domain.sets if target & ~s == 0]
        if not around or reduce(lambda a, b: a & b, around) != target:
            return results
        minimal = [s for s in around if not any(s != t and t & ~s == 0 for t in around)]
        results.append(alternating_sum(f.values, minimal, "cup", f.dim))
        if len(around) <= EXHAUSTIVE_DOMAIN and len(around) != len(minimal):
            results.append(alternating_sum(f.values, around, "cup", f.dim))
    return results


def extend_to_lattice(f: SetFunction, verify: bool = True) -> SetFunction:
    cert = _require(f)
    ring = cert.ring
    lattice = ring.lattice
    all_vals = _ring_values(ring, cert.atom_values, f.dim, cert.c)
    vals = {m: all_vals[m] for m in lattice.sets}
    phi1 = SetFunction(lattice, vals, f.dim)
    if verify:
        for s, v in f.values.items():
            if vals[s] != v:
                raise InternalIdentityError(f"lattice extension does not restrict to f at {s:b}")
        members = lattice.sets
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if vadd(vals[a | b], vals[a & b]) != vadd(vals[a], vals[b]):
                    raise InternalIdentityError("lattice extension is not modular")
        for m in members:
            for rep in _eq_k(f, m):
                if rep != vals[m]:
                    raise InternalIdentityError(f"lattice formula disagrees at {m:b}")
    return phi1


@dataclass(frozen=True)
class RingExtension:
    ring: RingStructure
    function: SetFunction
    atom_values: tuple[Value, ...]
    difference_map: Mapping[tuple[int, int], Value]
    translation: Value

    def __iter__(self):
        return iter((self.function, self.difference_map))

    def at(self, mask: int) -> Value:
        return self.function.values[mask]


def extend_to_ring(f: SetFunction, verify: bool = True) -> RingExtension:
    """Unique strongly additive function on the generated ring matching domain differences."""
    cert = _require(f)
    ring = cert.ring
    vals = _ring_values(ring, cert.atom_values, f.dim)
    phi = SetFunction(ring.family, vals, f.dim)
    diffs = {}
    dom = f.domain.sets
    for a in dom:
        for b in dom:
            if b & ~a == 0:
                diffs[(a, b)] = vsub(f.values[a], f.values[b])
    if verify:
        for (a, b), v in diffs.items():
            if vals[a & ~b] != v:
                raise InternalIdentityError(f"ring extension violates difference rule at {a:b}\\{b:b}")
        for s, v in f.values.items():
            if vals[s] != vadd(v, cert.c):
                raise InternalIdentityError("ring extension does not equal the translated function")
    return RingExtension(ring, phi, cert.atom_values, diffs, cert.c)


def extend_to_algebra(f: SetFunction, total: Value | None = None) -> RingExtension:
    """Additive extension to the algebra generated by the domain, given its value on the ground set.

    ``total`` defaults to zero when the ring does not already contain the ground set.
    """
    ext = extend_to_ring(f)
    ring = ext.ring
    g = f.ground
    top = reduce(lambda a, b: a | b, ring.atoms, 0)
    if top == g.full:
        if total is not None and tuple(Fraction(t) for t in total) != ext.at(top):
            raise ValueError("the ring already contains the ground set; its value is fixed at "
                             + ", ".join(str(v) for v in ext.at(top)))
        return ext
    total = zero(f.dim) if total is None else tuple(Fraction(t) for t in total)
    if len(total) != f.dim:
        raise ValueError("total has the wrong dimension")
    atoms = list(ring.atoms) + [g.full & ~top]
    atom_vals = list(ext.atom_values) + [vsub(total, ext.at(top))]
    lattice_sets = set(ring.lattice.sets) | {g.full}
    lattice = classify_family(g, lattice_sets)
    members = {}
    for sel in range(1 << len(atoms)):
        idx = tuple(bits_of(sel))
        members[reduce(lambda x, i: x | atoms[i], idx, 0)] = idx
    fam = SetFamily(g, tuple(sorted(members)), True, True)
    witnesses = tuple(atom_witness(a, lattice.sets) for a in atoms)
    alg = RingStructure(fam, tuple(atoms), members, lattice, witnesses)
    vals = _ring_values(alg, atom_vals, f.dim)
    return RingExtension(alg, SetFunction(fam, vals, f.dim), tuple(atom_vals), ext.difference_map,
                         ext.translation)


def semiadditive_translation(f: SetFunction) -> tuple[Value, SetFunction]:
    cert = _require(f)
    y = cert.c
    g = translate(f, y)
    ok, _ = is_semiadditive(g)
    if not ok:
        raise InternalIdentityError("translation did not produce a semi-additive function")
    # any other candidate moves every value; when c is pinned it also breaks semi-additivity
    other = translate(f, vadd(y, (Fraction(1),) + zero(f.dim - 1)))
    if all(other.values[s] == g.values[s] for s in f.domain.sets):
        raise InternalIdentityError("distinct translations agree on the domain")
    if not cert.c_free and is_semiadditive(other)[0]:
        raise InternalIdentityError("a second semi-additive translation exists")
    return y, g


# --- positivity, boundedness ------------------------------------------------------------

@dataclass(frozen=True)
class PositivityReport:
    positive: bool
    bounded: bool
    positive_bounded: bool
    total_variation: Fraction
    atom_values: tuple[Fraction, ...]
    negative_atoms: tuple[int, ...]
    # largest |Phi(h)| / max(h) found among domain-simple functions with coefficients in {-1,0,1}
    simple_checked: int
    simple_consistent: bool
    # a domain-simple h <= 0 with positive integral, found only when positivity fails
    simple_negative_witness: tuple[tuple[int, int], ...] | None = None


def certify_positive_bounded(f: SetFunction, max_support: int = 6) -> PositivityReport:
    if f.dim != 1:
        raise ValueError("positivity is defined for scalar set functions only")
    ext = extend_to_ring(f)
    atoms = [v[0] for v in ext.atom_values]
    negative = tuple(ext.ring.atoms[i] for i, v in enumerate(atoms) if v < 0)
    tv = sum((abs(v) for v in atoms), Fraction(0))
    positive = not negative
    # simple functions sum_i a_i 1_{A_i} over domain members, evaluated atomwise
    dom = list(f.domain.sets)
    phi_dom = [ext.at(s)[0] for s in dom]
    inside = [set(ext.ring.atom_of[s]) for s in dom]
    checked = 0
    consistent = True
    neg_witness = None
    idx_sets = [i for i in range(len(dom)) if dom[i] != 0]
    for support_size in range(1, min(max_support, len(idx_sets)) + 1):
        for supp in combinations(idx_sets, support_size):
            for signs in iproduct((-1, 1), repeat=support_size):
                h = [0] * len(atoms)
                val = Fraction(0)
                for i, sgn in zip(supp, signs):
                    val += sgn * phi_dom[i]
                    for a in inside[i]:
                        h[a] += sgn
                checked += 1
                integral = sum((hv * av for hv, av in zip(h, atoms)), Fraction(0))
                if integral != val:
                    consistent = False
                if max(h) <= 0 and val > 0:
                    if positive:
                        consistent = False
                    elif neg_witness is None:
                        neg_witness = tuple((dom[i], sgn) for i, sgn in zip(supp, signs))
                bound = max(abs(x) for x in h)
                if abs(val) > tv * bound:
                    consistent = False
    return PositivityReport(positive, True, positive, tv, tuple(atoms), negative, checked, consistent,
                            neg_witness)


def dynkin_agree(p: SetFunction, q: SetFunction) -> tuple[bool, int | None]:
    """Compare the algebra extensions of two finitely additive probabilities given on one semi-lattice."""
    if p.dim != 1 or q.dim != 1:
        raise ValueError("probabilities must be scalar")
    if p.domain != q.domain:
        raise ValueError("both set functions must share a domain")
    exts = []
    for f in (p, q):
        ok, _ = is_semiadditive(f)
        if not ok:
            raise ValueError("input is not the restriction of an additive set function")
        try:
            ext = extend_to_algebra(f, (Fraction(1),))
        except ValueError as exc:
            raise ValueError("input does not extend to a finitely additive probability") from exc
        if ext.at(f.ground.full) != (1,) or any(v[0] < 0 for v in ext.atom_values):
            raise ValueError("input does not extend to a finitely additive probability")
        if any(ext.translation):
            raise ValueError("input is not the restriction of an additive set function")
        exts.append(ext)
    for s in p.domain.sets:
        if p.values[s] != q.values[s]:
            return False, s
    a, b = exts
    for m in sorted(a.function.values):
        if a.at(m) != b.at(m):
            return False, m
    return True, None
