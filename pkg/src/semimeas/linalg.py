"""Exact Gauss-Jordan elimination over the rationals with row-operation tracking."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class Reduced:
    """Reduced row echelon form ``R = T @ A`` of an ``m x n`` matrix."""

    rows: tuple[tuple[Fraction, ...], ...]
    transform: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]
    ncols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free_columns(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(j for j in range(self.ncols) if j not in piv)


@dataclass(frozen=True)
class Solution:
    x: tuple[Fraction, ...] | None
    # on infeasibility: multipliers y with y @ A == 0 and y @ b != 0
    certificate: tuple[Fraction, ...] | None
    free_columns: tuple[int, ...]

    @property
    def feasible(self) -> bool:
        return self.x is not None


def rref(A: Sequence[Sequence]) -> Reduced:
    m = len(A)
    n = len(A[0]) if m else 0
    R = [[Fraction(v) for v in row] for row in A]
    T = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][col] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        T[r], T[p] = T[p], T[r]
        inv = 1 / R[r][col]
        R[r] = [v * inv for v in R[r]]
        T[r] = [v * inv for v in T[r]]
        for i in range(m):
            if i != r and R[i][col] != 0:
                k = R[i][col]
                R[i] = [a - k * b for a, b in zip(R[i], R[r])]
                T[i] = [a - k * b for a, b in zip(T[i], T[r])]
        pivots.append(col)
        r += 1
    return Reduced(tuple(map(tuple, R)), tuple(map(tuple, T)), tuple(pivots), n)


def solve_reduced(red: Reduced, b: Sequence) -> Solution:
    """Solve ``A x = b`` given ``rref(A)``; free variables are set to zero."""
    tb = [sum((t * Fraction(v) for t, v in zip(row, b)), Fraction(0)) for row in red.transform]
    for i in range(red.rank, len(tb)):
        if tb[i] != 0:
            return Solution(None, red.transform[i], red.free_columns)
    x = [Fraction(0)] * red.ncols
    for i, col in enumerate(red.pivots):
        x[col] = tb[i]
    return Solution(tuple(x), None, red.free_columns)


def solve(A: Sequence[Sequence], b: Sequence) -> Solution:
    return solve_reduced(rref(A), b)


def matvec(A: Sequence[Sequence], x: Sequence) -> list[Fraction]:
    return [sum((Fraction(a) * v for a, v in zip(row, x)), Fraction(0)) for row in A]


def vecmat(y: Sequence, A: Sequence[Sequence]) -> list[Fraction]:
    n = len(A[0]) if A else 0
    return [sum((Fraction(y[i]) * A[i][j] for i in range(len(A))), Fraction(0)) for j in range(n)]
