"""Exact rational simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The slack basis is feasible from the start, so one phase suffices.  Bland's
rule picks entering and leaving variables, which guarantees termination.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class Unbounded(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    pivots: int


def maximize(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    m, n = len(A), len(c)
    if any(Fraction(bi) < 0 for bi in b):
        raise ValueError("right-hand side must be non-negative")
    # rows: [A | I | b]; objective row holds reduced costs z_j - c_j
    rows = [[Fraction(x) for x in A[i]] + [Fraction(int(i == k)) for k in range(m)] + [Fraction(b[i])]
            for i in range(m)]
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))
    width = n + m
    pivots = 0
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise Unbounded("objective is unbounded")
        piv = rows[leave][enter]
        prow = [x / piv for x in rows[leave]]
        rows[leave] = prow
        nz = [j for j, p in enumerate(prow) if p]
        for row in rows + [obj]:
            f = row[enter]
            if f and row is not prow:
                for j in nz:
                    row[j] -= f * prow[j]
        basis[leave] = enter
        pivots += 1
    x = [Fraction(0)] * width
    for i, var in enumerate(basis):
        x[var] = rows[i][-1]
    return LPResult(obj[-1], tuple(x[:n]), tuple(obj[n:n + m]), pivots)
