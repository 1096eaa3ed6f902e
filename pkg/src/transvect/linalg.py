"""Exact linear algebra over Q and Q(sqrt 21).

Rows are sparse ``{column: scalar}`` dicts. Rational systems are cleared of
denominators and eliminated fraction-free over the integers; systems with
``QuadExt`` entries fall back to plain Gauss-Jordan over the field.

``rank_mod_p`` is only a lower bound for the rational rank. It is used as a
certificate: full column rank modulo p proves the rational kernel is zero.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

import numpy as np

from .scalars import QuadExt

PRIME = 2_147_483_629  # largest prime below 2**31, products fit in int64

Row = Mapping[int, object]


def _is_rational_system(rows: Sequence[Row]) -> bool:
    return not any(isinstance(v, QuadExt) and v.b != 0 for row in rows for v in row.values())


def _as_fraction(v) -> Fraction:
    if isinstance(v, QuadExt):
        return v.a
    return v if isinstance(v, Fraction) else Fraction(v)


def integer_rows(rows: Sequence[Row], ncols: int) -> list[list[int]]:
    """Dense primitive integer rows spanning the same space; zero rows dropped."""
    out = []
    for row in rows:
        vals = {c: _as_fraction(v) for c, v in row.items() if v != 0}
        if not vals:
            continue
        den = 1
        for v in vals.values():
            den = lcm(den, v.denominator)
        dense = [0] * ncols
        g = 0
        for c, v in vals.items():
            dense[c] = int(v * den)
            g = gcd(g, dense[c])
        if g > 1:
            dense = [x // g for x in dense]
        out.append(dense)
    return out


def _int_rref(M: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss-Jordan; returns primitive pivot rows and pivot columns."""
    M = [r[:] for r in M]
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[rank], M[p] = M[p], M[rank]
        prow = M[rank]
        a = prow[c]
        for i in range(len(M)):
            if i == rank:
                continue
            b = M[i][c]
            if not b:
                continue
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = [fa * x - fb * y for x, y in zip(M[i], prow)]
            h = 0
            for x in new:
                if x:
                    h = gcd(h, x)
                    if h == 1:
                        break
            if h > 1:
                new = [x // h for x in new]
            M[i] = new
        pivots.append(c)
        rank += 1
        if rank == len(M):
            break
    return M[:rank], pivots


def _field_rref(rows: Sequence[Row], ncols: int) -> tuple[list[list], list[int]]:
    M = [[row.get(c, 0) for c in range(ncols)] for row in rows if any(v != 0 for v in row.values())]
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[rank], M[p] = M[p], M[rank]
        inv = 1 / M[rank][c] if isinstance(M[rank][c], QuadExt) else Fraction(1) / M[rank][c]
        M[rank] = [x * inv for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(M):
            break
    return M[:rank], pivots


def rref(rows: Sequence[Row], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form with unit pivots, plus the pivot columns."""
    if _is_rational_system(rows):
        R, piv = _int_rref(integer_rows(rows, ncols), ncols)
        return [[Fraction(x, r[c]) for x in r] for r, c in zip(R, piv)], piv
    return _field_rref(rows, ncols)


def rank(rows: Sequence[Row], ncols: int) -> int:
    if _is_rational_system(rows):
        return len(_int_rref(integer_rows(rows, ncols), ncols)[1])
    return len(_field_rref(rows, ncols)[1])


def nullspace(rows: Sequence[Row], ncols: int) -> list[list]:
    """Kernel basis in reduced echelon form: each vector's first nonzero entry is 1
    and no other basis vector is nonzero in that column."""
    R, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(R, piv):
            v[p] = -r[f]
        basis.append(v)
    if not basis:
        return []
    B, _ = rref([dict(enumerate(v)) for v in basis], ncols)
    return B


def rank_mod_p(M: Sequence[Sequence[int]], ncols: int, p: int = PRIME) -> int:
    """Rank of an integer matrix modulo the prime ``p`` (a lower bound on the rational rank)."""
    if not M:
        return 0
    A = np.array([[x % p for x in r] for r in M], dtype=np.int64)
    rows = A.shape[0]
    rk = 0
    for c in range(ncols):
        if rk == rows:
            break
        nz = np.nonzero(A[rk:, c])[0]
        if nz.size == 0:
            continue
        piv = rk + int(nz[0])
        if piv != rk:
            A[[rk, piv]] = A[[piv, rk]]
        inv = pow(int(A[rk, c]), p - 2, p)
        A[rk] = (A[rk] * inv) % p
        below = A[rk + 1:, c].copy()
        mask = below != 0
        if mask.any():
            sub = A[rk + 1:][mask]
            sub = (sub - (below[mask][:, None] * A[rk][None, :]) % p) % p
            A[rk + 1:][mask] = sub
        rk += 1
    return rk


def reduce_mod_p(x, p: int = PRIME) -> int:
    """Image of a rational number in Z/p."""
    f = _as_fraction(x)
    return f.numerator % p * pow(f.denominator % p, p - 2, p) % p


def certify_zero_kernel(rows: Sequence[Row], ncols: int) -> bool:
    """True only if the kernel is provably zero; False means 'not certified'."""
    if not _is_rational_system(rows):
        return False
    return rank_mod_p(integer_rows(rows, ncols), ncols) == ncols


def in_kernel(rows: Sequence[Row], vec: Sequence) -> bool:
    for row in rows:
        acc = 0
        for c, v in row.items():
            x = vec[c]
            if x != 0:
                acc = acc + v * x
        if acc != 0:
            return False
    return True
