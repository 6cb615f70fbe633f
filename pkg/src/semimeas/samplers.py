"""Seeded random instances: semilattices, set functions, product functions."""
from __future__ import annotations

import random
from fractions import Fraction

from .product import ProductFamily, ProductSetFunction
from .semimodular import SetFunction
from .setcore import GroundSet, SetFamily, classify_family, generate_ring


def _close(sets: set[int], op) -> set[int]:
    cur = set(sets)
    while True:
        new = {op(a, b) for a in cur for b in cur} - cur
        if not new:
            return cur
        cur |= new


def random_semilattice(rng: random.Random, n: int, max_sets: int = 10, kind: str | None = None,
                       with_empty: bool = False) -> SetFamily:
    """A random family closed under ``kind`` ('cap' or 'cup', random when None)."""
    ground = GroundSet.of_size(n)
    kind = kind or rng.choice(("cap", "cup"))
    op = (lambda a, b: a & b) if kind == "cap" else (lambda a, b: a | b)
    while True:
        seeds = {rng.randint(0, ground.full) for _ in range(rng.randint(1, max(1, max_sets // 2)))}
        sets = _close(seeds, op)
        if with_empty:
            sets.add(0)
        if sets and len(sets) <= max_sets:
            fam = classify_family(ground, sets)
            if fam.is_semilattice:
                return fam


def random_setfunction(rng: random.Random, fam: SetFamily, span: int = 5, dim: int = 1) -> SetFunction:
    vals = {s: tuple(Fraction(rng.randint(-span, span)) for _ in range(dim)) for s in fam.sets}
    return SetFunction(fam, vals, dim)


def random_semimodular(rng: random.Random, fam: SetFamily, span: int = 5, dim: int = 1,
                       translated: bool = True) -> SetFunction:
    """Restriction of a random additive function on the generated ring, shifted by a constant."""
    ring = generate_ring(fam)
    atoms = [tuple(Fraction(rng.randint(-span, span)) for _ in range(dim)) for _ in ring.atoms]
    c = tuple(Fraction(rng.randint(-span, span)) if translated else Fraction(0) for _ in range(dim))
    vals = {}
    for s in fam.sets:
        tot = [Fraction(0)] * dim
        for i in ring.atom_of[s]:
            tot = [a + b for a, b in zip(tot, atoms[i])]
        vals[s] = tuple(a - b for a, b in zip(tot, c))
    return SetFunction(fam, vals, dim)


def random_product(rng: random.Random, n_left: int, n_right: int, max_sets: int = 4,
                   span: int = 4, dim: int = 1) -> ProductSetFunction:
    """Rectangle values of a random additive function on the product of two ground sets."""
    left = random_semilattice(rng, n_left, max_sets)
    right = random_semilattice(rng, n_right, max_sets)
    w = [[tuple(Fraction(rng.randint(-span, span)) for _ in range(dim)) for _ in range(n_right)]
         for _ in range(n_left)]
    vals = {}
    for a in left.sets:
        for b in right.sets:
            tot = [Fraction(0)] * dim
            for i in range(n_left):
                if a >> i & 1:
                    for j in range(n_right):
                        if b >> j & 1:
                            tot = [x + y for x, y in zip(tot, w[i][j])]
            vals[(a, b)] = tuple(tot)
    return ProductSetFunction(ProductFamily(left, right), vals, dim)
