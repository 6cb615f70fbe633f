"""Reference computations written independently of the library's bitmask helpers."""
from __future__ import annotations

from fractions import Fraction
from itertools import chain, combinations


def subsets(s):
    s = sorted(s)
    return [frozenset(c) for c in chain.from_iterable(combinations(s, r) for r in range(len(s) + 1))]


def to_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def to_mask(s) -> int:
    return sum(1 << i for i in s)


def sign(s) -> int:
    return (-1) ** (1 + len(s))


def interval_sum(a: frozenset, b: frozenset) -> int:
    return sum(sign(x) for x in subsets(b) if a <= x)


def inclusion_exclusion(values: dict, sets: list, outer: str):
    """Alternating sum over nonempty subcollections; ``outer`` is the combining operation
    of each subcollection ('cap' or 'cup')."""
    dim = len(next(iter(values.values())))
    total = [Fraction(0)] * dim
    for r in range(1, len(sets) + 1):
        for sub in combinations(sets, r):
            m = sub[0]
            for s in sub[1:]:
                m = m & s if outer == "cap" else m | s
            if m not in values:
                return None
            total = [t + (-1) ** (r + 1) * v for t, v in zip(total, values[m])]
    return tuple(total)


def lattice_representations(family: list, member: int, kind: str, max_size: int = 3):
    """Collections of family sets whose union ('cap' families) or intersection ('cup'
    families) equals ``member``."""
    out = []
    for r in range(1, max_size + 1):
        for sub in combinations(family, r):
            acc = sub[0]
            for s in sub[1:]:
                acc = acc | s if kind == "cap" else acc & s
            if acc == member:
                out.append(list(sub))
    return out


def point_sum(weights: dict, mask: int, dim: int):
    """Additive function from point weights ``{i: value}``."""
    tot = [Fraction(0)] * dim
    for i, w in weights.items():
        if mask >> i & 1:
            tot = [a + b for a, b in zip(tot, w)]
    return tuple(tot)


def cond_exp(p, blocks, x):
    """E[x | sigma(blocks)] for point probabilities ``p``."""
    out = [None] * len(p)
    for blk in blocks:
        mass = sum(p[i] for i in blk)
        avg = sum(p[i] * x[i] for i in blk) / mass
        for i in blk:
            out[i] = avg
    return tuple(out)
