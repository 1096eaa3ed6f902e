"""Invariance linear systems for ternary operators on densities on the line.

For ``A = sum alpha_{i,j,l} phi^(i) psi^(j) chi^(l)`` of order ``k`` on
``F_lam x F_gam x F_tau``, invariance under ``f d/dx`` splits by the order
``r`` of the derivative of ``f`` that appears. The ``r = 0, 1`` parts cancel
identically (``mu = lam + gam + tau + k``); each ``r >= 2`` gives one equation per
multi-index ``(i, j, l)`` with ``i >= r - 1``:

    alpha_{i,j,l}       (lam C(i, r-1)     + C(i, r))
  + alpha_{i-r+1,j+r-1,l} (gam C(j+r-1, r-1) + C(j+r-1, r))
  + alpha_{i-r+1,j,l+r-1} (tau C(l+r-1, r-1) + C(l+r-1, r))  = 0

Since ``d/dx`` and ``x^3 d/dx`` generate all polynomial fields, ``r in {2, 3}``
already yields the full kernel.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import linalg
from .densities import defect, monomial, monomial_field
from .opcore import DensityOp, binomial, multi_indices
from .scalars import format_scalar


class PreconditionError(ValueError):
    pass


def unknowns(k: int) -> list[tuple[int, int, int]]:
    return multi_indices(3, k)


@dataclass
class InvarianceSystem:
    order: int
    weights: tuple
    r_values: tuple[int, ...]
    unknowns: list[tuple[int, int, int]]
    rows: list[dict[int, object]]
    origins: list[tuple[tuple[int, int, int], int]] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.unknowns)


@dataclass
class KernelBasis:
    order: int
    weights: tuple
    basis: list[DensityOp]
    pivots: list[tuple[int, int, int]]
    generator_check: bool | None = None

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "weights": [format_scalar(w) for w in self.weights],
            "dimension": self.dimension,
            "pivots": [list(p) for p in self.pivots],
            "basis": [b.to_dict() for b in self.basis],
        }


def _coef(w, n: int, r: int):
    return w * binomial(n, r - 1) + binomial(n, r)


def build_system(k: int, weights: Sequence, r_set: Iterable[int] | None = None) -> InvarianceSystem:
    lam, gam, tau = weights
    rs = tuple(sorted(set(range(2, k + 2) if r_set is None else r_set)))
    if any(r < 2 or r > k + 1 for r in rs):
        raise ValueError(f"r values must lie in 2..{k + 1}")
    unk = unknowns(k)
    pos = {u: n for n, u in enumerate(unk)}
    rows, origins = [], []
    for r in rs:
        for (i, j, l) in unk:
            if i < r - 1:
                continue
            row: dict[int, object] = {}
            for key, val in (
                ((i, j, l), _coef(lam, i, r)),
                ((i - r + 1, j + r - 1, l), _coef(gam, j + r - 1, r)),
                ((i - r + 1, j, l + r - 1), _coef(tau, l + r - 1, r)),
            ):
                c = pos[key]
                row[c] = row.get(c, 0) + val
            row = {c: v for c, v in row.items() if v != 0}
            if row:
                rows.append(row)
                origins.append(((i, j, l), r))
    return InvarianceSystem(k, tuple(weights), rs, unk, rows, origins)


def _basis_ops(k: int, weights: tuple, vectors: list[list]) -> tuple[list[DensityOp], list]:
    unk = unknowns(k)
    ops, pivots = [], []
    for v in vectors:
        first = next(n for n, x in enumerate(v) if x != 0)
        pivots.append(unk[first])
        ops.append(DensityOp(weights, k, {u: x for u, x in zip(unk, v) if x != 0}))
    return ops, pivots


def kernel(S: InvarianceSystem) -> KernelBasis:
    vecs = linalg.nullspace(S.rows, len(S.unknowns))
    ops, pivots = _basis_ops(S.order, S.weights, vecs)
    return KernelBasis(S.order, S.weights, ops, pivots)


def kernel_dimension(k: int, weights: Sequence, r_set: Iterable[int] | None = None) -> int:
    """Exact kernel dimension; uses the modular zero-kernel certificate when it applies."""
    S = build_system(k, weights, r_set)
    n = len(S.unknowns)
    if linalg.certify_zero_kernel(S.rows, n):
        return 0
    return n - linalg.rank(S.rows, n)


def classify(k: int, weights: Sequence, check_generators: bool = True) -> KernelBasis:
    if k < 0:
        raise ValueError("order must be non-negative")
    weights = tuple(weights)
    K = kernel(build_system(k, weights))
    if check_generators and k >= 2:
        S23 = build_system(k, weights, (2, 3))
        K.generator_check = linalg.rank(S23.rows, len(S23.unknowns)) == len(S23.unknowns) - K.dimension
    elif check_generators:
        K.generator_check = True
    return K


def in_kernel(A: DensityOp) -> bool:
    """Exact membership of a ternary table in the invariance kernel at its own weights."""
    if A.arity != 3:
        raise ValueError("in_kernel expects a ternary operator")
    S = build_system(A.order, A.weights)
    return linalg.in_kernel(S.rows, A.vector())


def boundary_unknowns(k: int) -> list[tuple[int, int, int]]:
    """The 18 multi-indices with some entry >= k - 2 (k > 7)."""
    return [u for u in unknowns(k) if max(u) >= k - 2]


def rank18_check(weights: Sequence, k: int) -> tuple[int, int, int]:
    """Rank of the sub-system of rows supported inside the boundary unknowns.

    Returns ``(rows, cols, rank)``. These rows come from
    ``r in {k+1, k, k-1, k-2, 3, 2}``; ``k-2`` contributes the single row at
    ``(i, j, l) = (k-2, 1, 1)``.
    """
    lam, gam, tau = weights
    if k <= 7:
        raise PreconditionError("rank18_check needs k > 7")
    if lam * gam * tau == 0:
        raise PreconditionError("rank18_check needs lam*gam*tau != 0")
    B = boundary_unknowns(k)
    S = build_system(k, weights, sorted({k + 1, k, k - 1, k - 2, 3, 2}))
    col = {S.unknowns.index(u): n for n, u in enumerate(B)}
    sub = [{col[c]: v for c, v in row.items()} for row in S.rows if all(c in col for c in row)]
    return len(sub), len(B), linalg.rank(sub, len(B))


@dataclass
class MatchReport:
    members: list[bool]
    degenerate: list[bool]
    coordinates: list[list | None]
    spans: bool
    names: list[str]

    @property
    def all_members(self) -> bool:
        return all(self.members)


def match_catalog(K: KernelBasis, candidates: Sequence[DensityOp]) -> MatchReport:
    """Express each candidate in the kernel basis; report membership and spanning."""
    unk = unknowns(K.order)
    pos = {u: n for n, u in enumerate(unk)}
    members, degenerate, coords = [], [], []
    for c in candidates:
        if c.arity != 3 or c.order != K.order or c.weights != tuple(K.weights):
            raise ValueError(f"candidate {c.name or '?'} does not match the kernel's arity/order/weights")
        degenerate.append(c.degenerate)
        # the basis is reduced echelon, so coordinates are read off at the pivots
        t = [c.coeff(p) for p in K.pivots]
        recon = [0] * len(unk)
        for ti, b in zip(t, K.basis):
            for idx, v in b.coeffs.items():
                recon[pos[idx]] = recon[pos[idx]] + ti * v
        ok = all(recon[pos[u]] == c.coeff(u) for u in unk)
        members.append(ok)
        coords.append(t if ok else None)
    live = [dict(enumerate(t)) for t, m in zip(coords, members) if m]
    spans = all(members) and linalg.rank(live, K.dimension) == K.dimension if K.dimension else all(members)
    return MatchReport(members, degenerate, coords, spans, [c.name for c in candidates])


# --- brute-force oracle system -------------------------------------------------------------

def defect_rows(k: int, weights: Sequence, powers: Iterable[int] | None = None,
                bound: int | None = None) -> dict[tuple, dict[int, object]]:
    """Linear conditions on the unknowns obtained by evaluating the defect on monomials.

    For every unknown the unit operator is run through :func:`densities.defect`
    with ``X = x^r d/dx`` and monomial arguments ``x^a, x^b, x^c``. The defect is
    then a single monomial whose coefficient is linear in the unknowns. Rows are
    keyed by ``(r, (a, b, c), exponent)``.
    ``bound`` defaults to ``k + 1``: the defect has slot orders at most ``k + 1``,
    and monomials of that degree detect every such multilinear expression.
    """
    weights = tuple(weights)
    unk = unknowns(k)
    ops = [DensityOp(weights, k, {u: 1}) for u in unk]
    rs = range(k + 2) if powers is None else powers
    top = k + 1 if bound is None else bound
    rows: dict[tuple, dict[int, object]] = {}
    for r in rs:
        X = monomial_field(r)
        for degs in product(range(top + 1), repeat=3):
            args = [monomial(d, w) for d, w in zip(degs, weights)]
            for n, u in enumerate(unk):
                if any(d + r - 1 < i and d < i for d, i in zip(degs, u)):
                    continue  # every term of the defect differentiates some x^d more than d times
                D = defect(ops[n], X, args)
                for e, v in enumerate(D.coeffs):
                    if v != 0:
                        rows.setdefault((r, degs, e), {})[n] = v
    return dict(sorted(rows.items()))


def defect_system(k: int, weights: Sequence, powers: Iterable[int] | None = None,
                  bound: int | None = None) -> list[dict[int, object]]:
    return list(defect_rows(k, weights, powers, bound).values())


# --- weight grids and sweeps ---------------------------------------------------------------

DEFAULT_GRID_VALUES: tuple[Fraction, ...] = tuple(
    Fraction(s)
    for s in ("0", "1/2", "-1/2", "-2/3", "-3/4", "-1", "-5/4", "-4/3", "-3/2", "-2", "-5/2",
              "1", "2", "3", "1/3", "2/5")
)


def weight_grid(values: Iterable = DEFAULT_GRID_VALUES, extra: Iterable = ()) -> list[tuple]:
    vals = sorted(set(Fraction(v) for v in values) | set(Fraction(v) for v in extra))
    return [tuple(t) for t in product(vals, repeat=3)]


def _sweep_cell(args):
    k, w = args
    return kernel_dimension(k, w)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("TRANSVECT_THREADS", "1")))
    except ValueError:
        return 1


def sweep(k: int, grid: Sequence[tuple], threads: int | None = None) -> list[tuple[tuple, int]]:
    """Kernel dimension for every weight triple, in grid order."""
    threads = worker_count() if threads is None else threads
    cells = [(k, w) for w in grid]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            dims = list(pool.map(_sweep_cell, cells, chunksize=64))
    else:
        dims = [_sweep_cell(c) for c in cells]
    return list(zip(grid, dims))
