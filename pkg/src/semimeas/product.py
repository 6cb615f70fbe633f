"""Set functions on rectangles of two semilattices and their extensions to the product ring.

A product ground set with ``n_l`` and ``n_r`` elements is encoded with bit ``i * n_r + j``
for the pair ``(i, j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import linalg
from .semimodular import (
    SetFunction,
    Value,
    extend_to_lattice,
    extend_to_ring,
    is_semiadditive,
    is_semimodular_solver,
    vadd,
    vsum,
    zero,
)
from .setcore import (
    GroundSet,
    InternalIdentityError,
    SetCoreError,
    SetFamily,
    bits_of,
    generate_ring,
    max_ground,
)


class ProductPreconditionError(ValueError):
    def __init__(self, message: str, certificate: "SeparateCertificate | None" = None):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class ProductFamily:
    left: SetFamily
    right: SetFamily

    def __post_init__(self):
        for side in (self.left, self.right):
            if not side.is_semilattice:
                raise SetCoreError("both factors must be semi-lattices")

    def rectangles(self):
        return [(a, b) for a in self.left.sets for b in self.right.sets]


@dataclass(frozen=True)
class ProductSetFunction:
    base: ProductFamily
    values: Mapping[tuple[int, int], Value]
    dim: int

    def __post_init__(self):
        vals = {}
        for (a, b), v in self.values.items():
            if a not in self.base.left or b not in self.base.right:
                raise ValueError("value given outside the rectangles")
            v = tuple(Fraction(x) for x in v)
            if len(v) != self.dim:
                raise ValueError("inconsistent value dimension")
            vals[(a, b)] = v
        for r in self.base.rectangles():
            if r not in vals:
                raise ValueError(f"no value for rectangle {r}")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    def section_left(self, a: int) -> SetFunction:
        """Freeze the left coordinate at ``a``: a set function on the right family."""
        return SetFunction(self.base.right, {b: self.values[(a, b)] for b in self.base.right.sets}, self.dim)

    def section_right(self, b: int) -> SetFunction:
        """Freeze the right coordinate at ``b``: a set function on the left family."""
        return SetFunction(self.base.left, {a: self.values[(a, b)] for a in self.base.left.sets}, self.dim)

    @classmethod
    def tensor(cls, g: SetFunction, h: SetFunction) -> "ProductSetFunction":
        """``(A, B) -> g(A) * h(B)`` coordinatewise, for equal dimensions (or a scalar factor)."""
        d = max(g.dim, h.dim)

        def mul(u, v):
            if len(u) == 1:
                u = u * d
            if len(v) == 1:
                v = v * d
            return tuple(x * y for x, y in zip(u, v))

        vals = {(a, b): mul(g.values[a], h.values[b]) for a in g.domain.sets for b in h.domain.sets}
        return cls(ProductFamily(g.domain, h.domain), vals, d)


@dataclass(frozen=True)
class SeparateCertificate:
    verdict: bool
    frozen: str | None = None  # "left" or "right": which coordinate was held fixed
    frozen_set: int | None = None
    witness: object = None


def is_separately_semimodular(f: ProductSetFunction) -> SeparateCertificate:
    for a in f.base.left.sets:
        cert = is_semimodular_solver(f.section_left(a))
        if not cert.verdict:
            return SeparateCertificate(False, "left", a, cert.witness)
    for b in f.base.right.sets:
        cert = is_semimodular_solver(f.section_right(b))
        if not cert.verdict:
            return SeparateCertificate(False, "right", b, cert.witness)
    return SeparateCertificate(True)


def is_separately_semiadditive(f: ProductSetFunction) -> SeparateCertificate:
    cert = is_separately_semimodular(f)
    if not cert.verdict:
        return cert
    for a in f.base.left.sets:
        ok, wit = is_semiadditive(f.section_left(a))
        if not ok:
            return SeparateCertificate(False, "left", a, wit)
    for b in f.base.right.sets:
        ok, wit = is_semiadditive(f.section_right(b))
        if not ok:
            return SeparateCertificate(False, "right", b, wit)
    return SeparateCertificate(True)


def _two_pass(f: ProductSetFunction, left_first: bool, extend) -> dict[tuple[int, int], Value]:
    """Extend sectionwise: first along one coordinate for every fixed set of the other."""
    L, R = f.base.left, f.base.right
    mid: dict[tuple[int, int], Value] = {}
    if left_first:
        for b in R.sets:
            for a, v in extend(f.section_right(b)).items():
                mid[(a, b)] = v
        new_left = sorted({a for a, _ in mid})
        out = {}
        for a in new_left:
            sec = SetFunction(R, {b: mid[(a, b)] for b in R.sets}, f.dim)
            for b, v in extend(sec).items():
                out[(a, b)] = v
        return out
    for a in L.sets:
        for b, v in extend(f.section_left(a)).items():
            mid[(a, b)] = v
    new_right = sorted({b for _, b in mid})
    out = {}
    for b in new_right:
        sec = SetFunction(L, {a: mid[(a, b)] for a in L.sets}, f.dim)
        for a, v in extend(sec).items():
            out[(a, b)] = v
    return out


@dataclass(frozen=True)
class ProductLatticeExtension:
    left: SetFamily
    right: SetFamily
    values: Mapping[tuple[int, int], Value]
    dim: int


def product_extend_lattice(f: ProductSetFunction) -> ProductLatticeExtension:
    cert = is_separately_semimodular(f)
    if not cert.verdict:
        raise ProductPreconditionError("not separately semi-modular", cert)

    def ext(g: SetFunction):
        return extend_to_lattice(g).values

    first = _two_pass(f, True, ext)
    second = _two_pass(f, False, ext)
    if first != second:
        raise InternalIdentityError("sectionwise lattice extension depends on the pass order")
    L1 = generate_ring(f.base.left).lattice
    R1 = generate_ring(f.base.right).lattice
    for (a, b), v in f.values.items():
        if first[(a, b)] != v:
            raise InternalIdentityError("lattice extension does not restrict to f")
    # separately modular
    for a in L1.sets:
        for i, b in enumerate(R1.sets):
            for c in R1.sets[i + 1:]:
                if vadd(first[(a, b | c)], first[(a, b & c)]) != vadd(first[(a, b)], first[(a, c)]):
                    raise InternalIdentityError("extension is not modular in the right coordinate")
    for b in R1.sets:
        for i, a in enumerate(L1.sets):
            for c in L1.sets[i + 1:]:
                if vadd(first[(a | c, b)], first[(a & c, b)]) != vadd(first[(a, b)], first[(c, b)]):
                    raise InternalIdentityError("extension is not modular in the left coordinate")
    return ProductLatticeExtension(L1, R1, first, f.dim)


def product_ground(left: GroundSet, right: GroundSet, cap: int | None = None) -> GroundSet:
    cap = max_ground() if cap is None else cap
    n = left.n * right.n
    if n > cap:
        raise SetCoreError(f"product ground of size {n} exceeds cap {cap}")
    labels = [f"{x}.{y}" for x in left.labels for y in right.labels]
    return GroundSet(labels, max_size=cap)


def rectangle_mask(a: int, b: int, n_right: int) -> int:
    m = 0
    for i in bits_of(a):
        m |= b << (i * n_right)
    return m


@dataclass(frozen=True)
class ProductRingExtension:
    ground: GroundSet
    left_atoms: tuple[int, ...]
    right_atoms: tuple[int, ...]
    atom_values: Mapping[tuple[int, int], Value]  # (left atom index, right atom index) -> value
    function: SetFunction  # on every member of the product ring, over the product ground
    n_right: int

    def at(self, mask: int) -> Value:
        return self.function.values[mask]

    def rectangle(self, a: int, b: int) -> Value:
        return self.at(rectangle_mask(a, b, self.n_right))


def _atom_route(f: ProductSetFunction, left_first: bool):
    """Atom values through two sectionwise ring extensions."""
    if left_first:
        mid = {}
        for b in f.base.right.sets:
            ext = extend_to_ring(f.section_right(b))
            for i, v in enumerate(ext.atom_values):
                mid[(i, b)] = v
        out = {}
        for i in range(len(generate_ring(f.base.left).atoms)):
            sec = SetFunction(f.base.right, {b: mid[(i, b)] for b in f.base.right.sets}, f.dim)
            ext = extend_to_ring(sec)
            if any(ext.translation):
                raise InternalIdentityError("intermediate section is not semi-additive")
            for j, v in enumerate(ext.atom_values):
                out[(i, j)] = v
        return out
    mid = {}
    for a in f.base.left.sets:
        ext = extend_to_ring(f.section_left(a))
        for j, v in enumerate(ext.atom_values):
            mid[(a, j)] = v
    out = {}
    nR = len(generate_ring(f.base.right).atoms)
    for j in range(nR):
        sec = SetFunction(f.base.left, {a: mid[(a, j)] for a in f.base.left.sets}, f.dim)
        ext = extend_to_ring(sec)
        if any(ext.translation):
            raise InternalIdentityError("intermediate section is not semi-additive")
        for i, v in enumerate(ext.atom_values):
            out[(i, j)] = v
    return out


def _direct_solve(f: ProductSetFunction, ringL, ringR):
    pairs = [(i, j) for i in range(len(ringL.atoms)) for j in range(len(ringR.atoms))]
    rows = []
    rects = f.base.rectangles()
    for a, b in rects:
        ia, ib = set(ringL.atom_of[a]), set(ringR.atom_of[b])
        rows.append([Fraction(int(i in ia and j in ib)) for i, j in pairs])
    red = linalg.rref(rows)
    if red.free_columns:
        raise InternalIdentityError("rectangle values do not determine the product atoms")
    cols = []
    for k in range(f.dim):
        sol = linalg.solve_reduced(red, [f.values[r][k] for r in rects])
        if not sol.feasible:
            raise InternalIdentityError("rectangle system is inconsistent for a separately semi-additive input")
        cols.append(sol.x)
    return {p: tuple(cols[k][n] for k in range(f.dim)) for n, p in enumerate(pairs)}


def disjoint_rectangles(mask: int, left_atoms, right_atoms, n_right: int) -> list[tuple[int, int]]:
    """Rewrite a product-ring member as a union of rectangles with pairwise disjoint left sides."""
    groups: dict[int, int] = {}
    for la in left_atoms:
        section = 0
        for ra in right_atoms:
            if rectangle_mask(la, ra, n_right) & mask:
                section |= ra
        if section:
            groups[section] = groups.get(section, 0) | la
    return sorted((a, b) for b, a in groups.items())


def product_extend_ring(f: ProductSetFunction, cap: int | None = None, verify: bool = True) -> ProductRingExtension:
    cert = is_separately_semiadditive(f)
    if not cert.verdict:
        raise ProductPreconditionError("not separately semi-additive", cert)
    gl, gr = f.base.left.ground, f.base.right.ground
    ground = product_ground(gl, gr, cap)
    ringL = generate_ring(f.base.left)
    ringR = generate_ring(f.base.right)
    atoms = left_first = _atom_route(f, True)

    if verify:
        if _atom_route(f, False) != left_first:
            raise InternalIdentityError("product atoms depend on the pass order")
        if _direct_solve(f, ringL, ringR) != left_first:
            raise InternalIdentityError("direct rectangle solve disagrees with sectionwise extension")
    pairs = sorted(atoms)
    masks = [rectangle_mask(ringL.atoms[i], ringR.atoms[j], gr.n) for i, j in pairs]
    vals = {}
    for sel in range(1 << len(pairs)):
        idx = bits_of(sel)
        m = 0
        for k in idx:
            m |= masks[k]
        vals[m] = vsum((atoms[pairs[k]] for k in idx), f.dim)
    fam = SetFamily(ground, tuple(sorted(vals)), True, True)
    fn = SetFunction(fam, vals, f.dim)
    out = ProductRingExtension(ground, ringL.atoms, ringR.atoms, atoms, fn, gr.n)
    if verify:
        for (a, b), v in f.values.items():
            if vals[rectangle_mask(a, b, gr.n)] != v:
                raise InternalIdentityError("product ring extension does not restrict to f")
    return out


def disjoint_union_value(ext: ProductRingExtension, mask: int) -> Value:
    """Value of a ring member via its disjoint-left-side rectangle form."""
    parts = disjoint_rectangles(mask, ext.left_atoms, ext.right_atoms, ext.n_right)
    d = ext.function.dim
    return vsum((ext.rectangle(a, b) for a, b in parts), d) if parts else zero(d)
