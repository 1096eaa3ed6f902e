"""Grid-wide comparison of the closed-form invariance system with the brute-force defect.

The defect rows depend affinely on the weights: ``L_X`` on ``F_w`` is affine in
``w`` and the target weight is ``lam + gam + tau + k``. So the rows at any
``(lam, gam, tau)`` are ``R0 + lam*Rl + gam*Rg + tau*Rt`` with the four
matrices read off from the weights ``(0,0,0)``, ``(1,0,0)``, ``(0,1,0)``,
``(0,0,1)``. :meth:`AffineDefect.check_affine` tests that claim directly
against a fresh brute-force evaluation.

For each cell the kernel basis of the closed-form system must satisfy the
defect rows exactly, and the defect rows must have rank at least
``unknowns - dimension``. The rank is certified modulo a prime, which can only
underestimate the rational rank, so passing is a proof of equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import linalg
from .invariance import KernelBasis, classify, defect_rows, unknowns

ANCHORS = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))


def _rank_mod_p_array(A: np.ndarray, p: int = linalg.PRIME) -> tuple[int, list[int]]:
    """Rank modulo p of a reduced int64 matrix, plus the original indices of pivot rows."""
    A = A.copy()
    order = list(range(A.shape[0]))
    rk = 0
    for c in range(A.shape[1]):
        if rk == A.shape[0]:
            break
        nz = np.nonzero(A[rk:, c])[0]
        if nz.size == 0:
            continue
        piv = rk + int(nz[0])
        if piv != rk:
            A[[rk, piv]] = A[[piv, rk]]
            order[rk], order[piv] = order[piv], order[rk]
        inv = pow(int(A[rk, c]), p - 2, p)
        A[rk] = (A[rk] * inv) % p
        below = A[rk + 1:, c].copy()
        mask = below != 0
        if mask.any():
            sub = A[rk + 1:][mask]
            A[rk + 1:][mask] = (sub - (below[mask][:, None] * A[rk][None, :]) % p) % p
        rk += 1
    return rk, order[:rk]


@dataclass
class CellResult:
    weights: tuple
    unknowns: int
    dimension: int
    basis_satisfies_oracle: bool
    oracle_rank_lower_bound: int
    generator_check: bool

    @property
    def agrees(self) -> bool:
        full = self.oracle_rank_lower_bound + self.dimension >= self.unknowns
        return self.basis_satisfies_oracle and self.generator_check and full


class AffineDefect:
    def __init__(self, k: int):
        self.k = k
        self.ncols = len(unknowns(k))
        parts = [defect_rows(k, w) for w in ANCHORS]
        keys = sorted(set().union(*parts))
        self.keys = keys

        def dense(rows):
            M = np.zeros((len(keys), self.ncols), dtype=object)
            for i, key in enumerate(keys):
                for c, v in rows.get(key, {}).items():
                    M[i, c] = int(v)
            return M

        base = dense(parts[0])
        self.R0 = base
        self.R = [dense(parts[i]) - base for i in (1, 2, 3)]
        self._p = [np.array([[x % linalg.PRIME for x in row] for row in M], dtype=np.int64).reshape(M.shape)
                   for M in [self.R0] + self.R]
        self._probe_rows: list[int] | None = None

    def rows_at(self, weights: Sequence) -> np.ndarray:
        """Exact defect matrix at the given rational weights (object dtype of Fractions)."""
        M = self.R0.astype(object)
        for w, D in zip(weights, self.R):
            M = M + D * Fraction(w)
        return M

    def rows_mod_p(self, weights: Sequence) -> np.ndarray:
        p = linalg.PRIME
        M = self._p[0].copy()
        for w, D in zip(weights, self._p[1:]):
            M = (M + D * linalg.reduce_mod_p(w)) % p
        return M

    def check_affine(self, weights: Sequence) -> bool:
        """Compare the interpolated rows with a direct brute-force evaluation at ``weights``."""
        direct = defect_rows(self.k, weights)
        M = self.rows_at(weights)
        index = {key: i for i, key in enumerate(self.keys)}
        if any(key not in index for key in direct):
            return False
        for key, i in index.items():
            row = direct.get(key, {})
            for c in range(self.ncols):
                if M[i, c] != row.get(c, 0):
                    return False
        return True

    def satisfies(self, weights: Sequence, vec: Sequence) -> bool:
        """Exact test ``rows(weights) . vec == 0`` using integer arithmetic."""
        den = lcm(*(Fraction(x).denominator for x in vec), 1)
        v = np.array([int(Fraction(x) * den) for x in vec], dtype=object)
        ws = [Fraction(w) for w in weights]
        wden = lcm(*(w.denominator for w in ws))
        total = self.R0.dot(v) * wden
        for w, D in zip(ws, self.R):
            total = total + D.dot(v) * int(w * wden)
        return not any(total)

    def rank_lower_bound(self, weights: Sequence) -> int:
        M = self.rows_mod_p(weights)
        if self._probe_rows is not None:
            rk, _ = _rank_mod_p_array(M[self._probe_rows])
            if rk == self.ncols:
                return rk
        rk, piv = _rank_mod_p_array(M)
        if rk == self.ncols and self._probe_rows is None:
            # rows that were independent once usually stay independent
            self._probe_rows = sorted(piv)
        return rk

    def check_cell(self, weights: Sequence, K: KernelBasis | None = None) -> CellResult:
        K = classify(self.k, tuple(Fraction(w) for w in weights)) if K is None else K
        ok = all(self.satisfies(weights, b.vector()) for b in K.basis)
        rk = self.rank_lower_bound(weights)
        return CellResult(tuple(weights), self.ncols, K.dimension, ok, rk, bool(K.generator_check))
