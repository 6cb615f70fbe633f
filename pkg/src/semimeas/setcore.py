"""Finite ground sets, subset masks, set families and their generated lattices/rings.

Subsets of a ground set with ``n`` elements are plain ``int`` bitmasks; bit ``i``
stands for ``ground.labels[i]``.  Index sets ``b`` used in inclusion-exclusion
sums are bitmasks over ``range(N)`` as well.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable, Mapping, Sequence

DEFAULT_MAX_GROUND = 16
HARD_MAX_GROUND = 24


class SetCoreError(ValueError):
    pass


class InternalIdentityError(AssertionError):
    """An identity that must hold by theory failed; indicates an implementation fault."""


def max_ground() -> int:
    env = os.environ.get("SEMIMEAS_MAX_GROUND")
    if env is None:
        return DEFAULT_MAX_GROUND
    cap = int(env)
    if not 1 <= cap <= HARD_MAX_GROUND:
        raise SetCoreError(f"SEMIMEAS_MAX_GROUND must lie in 1..{HARD_MAX_GROUND}, got {cap}")
    return cap


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits_of(x: int) -> list[int]:
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def submasks(mask: int) -> Iterable[int]:
    """All submasks of ``mask`` in ascending order."""
    subs = []
    s = mask
    while True:
        subs.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    return reversed(subs)


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str], max_size: int | None = -1):
        labels = tuple(str(x) for x in labels)
        cap = max_ground() if max_size == -1 else max_size
        if not labels:
            raise SetCoreError("ground set must have at least one element")
        if len(set(labels)) != len(labels):
            raise SetCoreError("ground labels must be unique")
        if cap is not None and len(labels) > cap:
            raise SetCoreError(f"ground set of size {len(labels)} exceeds cap {cap}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of_size(cls, n: int, max_size: int | None = -1) -> "GroundSet":
        return cls([str(i + 1) for i in range(n)], max_size=max_size)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def mask(self, members: Iterable[str]) -> int:
        index = {lab: i for i, lab in enumerate(self.labels)}
        m = 0
        for lab in members:
            lab = str(lab)
            if lab not in index:
                raise SetCoreError(f"unknown ground label {lab!r}")
            m |= 1 << index[lab]
        return m

    def members(self, mask: int) -> list[str]:
        return [self.labels[i] for i in bits_of(mask)]

    def complement(self, mask: int) -> int:
        return self.full & ~mask


# --- signed inclusion-exclusion weights ---------------------------------------------

def nu(b: int) -> int:
    """(-1)**(1 + |b|) for a finite index set given as a bitmask."""
    return 1 if popcount(b) % 2 else -1


def mobius_interval_sum(a: int, b: int, weight=nu) -> int:
    if a & ~b:
        raise SetCoreError("interval sum needs a subset of b")
    free = b & ~a
    return sum(weight(a | x) for x in submasks(free))


def mobius_invert(f: Mapping[int, Fraction], n: int, anchor: int, direction: str = "lower",
                  weight=nu) -> dict[int, Fraction]:
    """Signed sums of interval totals ``F(a, b) = sum_{a<=y<=b} f(y)``.

    ``direction="lower"`` fixes the lower end at ``anchor`` and returns, for every ``b``
    containing it, ``sum_{anchor<=y<=b} F(anchor, y) nu(y)``, which must equal ``nu(b) f(b)``.
    ``"upper"`` fixes the upper end and returns ``sum_{a<=y<=anchor} F(y, anchor) nu(y)`` for
    every ``a`` inside ``anchor``, which must equal ``nu(a) f(a)``.  Use :func:`recover` to get
    ``f`` back.
    """
    universe = (1 << n) - 1
    missing = [s for s in range(universe + 1) if s not in f]
    if missing:
        raise SetCoreError(f"f must be defined on all subsets of [{n}]; missing {missing[:3]}")
    if anchor & ~universe:
        raise SetCoreError("anchor outside [N]")

    def F(lo: int, hi: int) -> Fraction:
        return sum((f[lo | y] for y in submasks(hi & ~lo)), Fraction(0))

    out: dict[int, Fraction] = {}
    if direction == "lower":
        for b in submasks(universe & ~anchor):
            b |= anchor
            total = sum((F(anchor, anchor | y) * weight(anchor | y) for y in submasks(b & ~anchor)),
                        Fraction(0))
            out[b] = total
    elif direction == "upper":
        for a in submasks(anchor):
            total = sum((F(a | y, anchor) * weight(a | y) for y in submasks(anchor & ~a)), Fraction(0))
            out[a] = total
    else:
        raise SetCoreError(f"direction must be 'lower' or 'upper', not {direction!r}")
    for s, v in out.items():
        if v != weight(s) * f[s]:
            raise InternalIdentityError(f"inversion failed at {s:b}: {v} != nu*f = {weight(s) * f[s]}")
    return out


def recover(signed: Mapping[int, Fraction], weight=nu) -> dict[int, Fraction]:
    """Undo the sign in :func:`mobius_invert` output (nu is its own inverse)."""
    return {s: v * weight(s) for s, v in signed.items()}


def indicator_identity_check(sets: Sequence[int], n: int) -> bool:
    """Pointwise check of the inclusion-exclusion indicator identities for ``sets``.

    1_{cap A} = sum_{0<b<=[N]} nu(b) 1_{cup_{b} A}  and the dual with cap/cup swapped.
    """
    if not sets:
        raise SetCoreError("need a nonempty list of sets")
    N = len(sets)
    inter = reduce(lambda x, y: x & y, sets)
    union = reduce(lambda x, y: x | y, sets)
    for x in range(n):
        bit = 1 << x
        cup_sum = 0
        cap_sum = 0
        for b in range(1, 1 << N):
            chosen = [sets[i] for i in bits_of(b)]
            cup_sum += nu(b) * bool(reduce(lambda p, q: p | q, chosen) & bit)
            cap_sum += nu(b) * bool(reduce(lambda p, q: p & q, chosen) & bit)
        if cup_sum != bool(inter & bit) or cap_sum != bool(union & bit):
            raise InternalIdentityError(f"indicator identity fails at ground element {x}")
    return True


# --- families -------------------------------------------------------------------------

def _pairwise_closed(sets: frozenset[int], op) -> bool:
    return all(op(a, b) in sets for a, b in combinations(sorted(sets), 2))


@dataclass(frozen=True)
class SetFamily:
    ground: GroundSet
    sets: tuple[int, ...]
    cap_closed: bool
    cup_closed: bool

    @property
    def union_property(self) -> bool:
        """Whether a union of members lying in the family always equals one of them."""
        cached = self.__dict__.get("_uprop")
        if cached is None:
            cached = _union_property(self._index)
            object.__setattr__(self, "_uprop", cached)
        return cached

    @property
    def kind(self) -> str:
        """'cap' or 'cup': which closure the semilattice machinery uses (cap wins ties)."""
        if self.cap_closed:
            return "cap"
        if self.cup_closed:
            return "cup"
        return "none"

    @property
    def is_semilattice(self) -> bool:
        return self.cap_closed or self.cup_closed

    def __contains__(self, mask: int) -> bool:
        return mask in self._index

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def _index(self) -> frozenset[int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.sets)
            object.__setattr__(self, "_idx", idx)
        return idx


def _union_property(sets: frozenset[int]) -> bool:
    # A_1..A_N and their union in the family => the union is one of them.
    ordered = sorted(sets)
    for target in ordered:
        below = [s for s in ordered if s & ~target == 0 and s != target]
        cover = reduce(lambda x, y: x | y, below, 0)
        if below and cover == target:
            return False
    return True


def classify_family(ground: GroundSet, sets: Iterable[int]) -> SetFamily:
    uniq = frozenset(sets)
    if not uniq:
        raise SetCoreError("family must be nonempty")
    for s in uniq:
        if s < 0 or s > ground.full:
            raise SetCoreError(f"mask {s} does not belong to a ground set of size {ground.n}")
    return SetFamily(
        ground=ground,
        sets=tuple(sorted(uniq)),
        cap_closed=_pairwise_closed(uniq, lambda a, b: a & b),
        cup_closed=_pairwise_closed(uniq, lambda a, b: a | b),
    )


def complement_family(family: SetFamily) -> SetFamily:
    return classify_family(family.ground, (family.ground.complement(s) for s in family.sets))


def _close(sets: set[int], ops) -> set[int]:
    current = set(sets)
    frontier = set(sets)
    while frontier:
        new = set()
        for a in frontier:
            for b in current:
                for op in ops:
                    c = op(a, b)
                    if c not in current:
                        new.add(c)
        current |= new
        frontier = new
    return current


def generate_lattice(family: SetFamily) -> SetFamily:
    if not family.is_semilattice:
        raise SetCoreError("family is neither cap- nor cup-closed")
    closed = _close(set(family.sets) | {0}, (lambda a, b: a | b, lambda a, b: a & b))
    return classify_family(family.ground, closed)


@dataclass(frozen=True)
class RingStructure:
    family: SetFamily
    atoms: tuple[int, ...]
    atom_of: Mapping[int, tuple[int, ...]]
    lattice: SetFamily
    # atom index -> (B, C) with B, C in the lattice, C inside B and B \ C == atom
    witnesses: tuple[tuple[int, int], ...]

    def atoms_in(self, mask: int) -> tuple[int, ...]:
        return self.atom_of[mask]

    def member(self, atom_indices: Iterable[int]) -> int:
        return reduce(lambda x, i: x | self.atoms[i], atom_indices, 0)


def lattice_atoms(lattice: Iterable[int]) -> list[int]:
    """Atoms of the ring generated by ``lattice``: elements grouped by membership signature."""
    members = sorted(set(lattice))
    groups: dict[tuple[bool, ...], int] = {}
    support = reduce(lambda x, y: x | y, members, 0)
    for x in bits_of(support):
        sig = tuple(bool(m >> x & 1) for m in members)
        groups[sig] = groups.get(sig, 0) | (1 << x)
    return sorted(groups.values())


def atom_witness(atom: int, lattice: Sequence[int]) -> tuple[int, int]:
    """(B, C) in ``lattice`` with C inside B and B minus C equal to ``atom``."""
    full_cover = [m for m in lattice if m & atom == atom]
    B = reduce(lambda x, y: x & y, full_cover)
    C = reduce(lambda x, y: x | y, (m for m in lattice if m & ~B == 0 and not m & atom), 0)
    return B, C


def generate_ring(family: SetFamily) -> RingStructure:
    """Ring generated by ``family`` (closed under union, intersection and difference).

    Members are enumerated as all unions of atoms (the closure fixpoint, reached in one
    step); every atom carries a lattice witness.
    """
    lattice = generate_lattice(family)
    atoms = lattice_atoms(lattice.sets)
    members: dict[int, tuple[int, ...]] = {}
    for sel in range(1 << len(atoms)):
        idx = tuple(bits_of(sel))
        members[reduce(lambda x, i: x | atoms[i], idx, 0)] = idx
    # unions of pairwise disjoint atoms are closed under all three operations by construction
    ring = SetFamily(family.ground, tuple(sorted(members)), True, True)
    witnesses = []
    for a in atoms:
        B, C = atom_witness(a, lattice.sets)
        if B & ~C != a or C & ~B:
            raise InternalIdentityError(f"bad difference witness for atom {a:b}")
        witnesses.append((B, C))
    return RingStructure(ring, tuple(atoms), members, lattice, tuple(witnesses))


def difference_witness(ring: RingStructure, mask: int) -> list[tuple[int, int]]:
    """Disjoint representation of a ring member as differences B minus C of lattice sets."""
    return [ring.witnesses[i] for i in ring.atom_of[mask]]
