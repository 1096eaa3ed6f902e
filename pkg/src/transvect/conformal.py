"""Symbols of o(p+1, q+1)-invariant ternary operators on R^n.

A symbol is a polynomial in the six invariant contractions

    R_xixi, R_xieta, R_xizeta, R_etaeta, R_etazeta, R_zetazeta

of the covariables ``xi, eta, zeta`` of the three arguments. The exponent
tuple ``(a, b, c, d, e, f)`` of a monomial follows that order. The metric
signature never enters: everything depends on ``n = p + q`` only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from . import linalg
from .scalars import format_scalar, parse_scalar

Exp = tuple[int, int, int, int, int, int]
GENERATORS = ("R_xixi", "R_xieta", "R_xizeta", "R_etaeta", "R_etazeta", "R_zetazeta")


def exponents(k: int) -> list[Exp]:
    """All 6-tuples of non-negative integers with sum ``k``, lexicographically sorted."""
    def rec(total: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(total - first, parts - 1):
                yield (first,) + rest
    return sorted(rec(k, 6)) if k >= 0 else []


@dataclass(frozen=True)
class ConformalSymbol:
    n: int
    weights: tuple
    degree: int
    terms: Mapping[Exp, Fraction]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        clean = {}
        for e, v in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != 6 or sum(e) != self.degree or min(e) < 0:
                raise ValueError(f"exponent {e} is not a 6-tuple of degree {self.degree}")
            if v != 0:
                clean[e] = clean.get(e, 0) + v
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        object.__setattr__(self, "terms", {e: v for e, v in sorted(clean.items()) if v != 0})

    @property
    def target_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0)) + Fraction(2 * self.degree, self.n)

    @property
    def degenerate(self) -> bool:
        return not self.terms

    def vector(self) -> list:
        return [self.terms.get(e, 0) for e in exponents(self.degree)]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.degree,
            "weights": [format_scalar(w) for w in self.weights],
            "terms": [{"exp": list(e), "val": format_scalar(v)} for e, v in self.terms.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ConformalSymbol:
        return cls(
            int(data["n"]),
            tuple(parse_scalar(w) for w in data["weights"]),
            int(data["k"]),
            {tuple(t["exp"]): parse_scalar(t["val"]) for t in data["terms"]},
        )


def scalar_symbol(n: int, weights: Sequence) -> ConformalSymbol:
    return ConformalSymbol(n, tuple(weights), 0, {(0,) * 6: Fraction(1)})


@dataclass
class DefectExpansion:
    """Coefficients of ``x_i``, ``xi_i``, ``eta_i``, ``zeta_i`` in ``L_{Xbar_i} B``."""

    x: dict = field(default_factory=dict)
    xi: dict = field(default_factory=dict)
    eta: dict = field(default_factory=dict)
    zeta: dict = field(default_factory=dict)

    def families(self) -> dict[str, dict]:
        return {"x": self.x, "xi": self.xi, "eta": self.eta, "zeta": self.zeta}

    def is_zero(self) -> bool:
        return all(v == 0 for fam in self.families().values() for v in fam.values())


def _acc(target: dict, e: Sequence[int], v) -> None:
    if v == 0 or min(e) < 0:
        return
    e = tuple(e)
    target[e] = target.get(e, 0) + v
    if target[e] == 0:
        del target[e]


def conformal_defect(B: ConformalSymbol, mu=None) -> DefectExpansion:
    """Action of the inversion generators on ``B``, collected by covector slot."""
    n = B.n
    lam, gam, tau = B.weights
    k = B.degree
    shift = (B.target_weight if mu is None else Fraction(mu)) - lam - gam - tau
    out = DefectExpansion()
    for (a, b, c, d, e, f), al in B.terms.items():
        _acc(out.x, (a, b, c, d, e, f), 2 * (2 * k - n * shift) * al)

        X = out.xi
        _acc(X, (a - 1, b, c, d, e, f), 2 * a * (2 * a + n * (2 * lam - 1)) * al)
        _acc(X, (a, b - 2, c, d + 1, e, f), -b * (b - 1) * al)
        _acc(X, (a, b - 1, c - 1, d, e + 1, f), -2 * b * c * al)
        _acc(X, (a, b - 1, c, d, e, f), 2 * b * (b - 1 + e + 2 * d + n * gam) * al)
        _acc(X, (a, b, c - 2, d, e, f + 1), -c * (c - 1) * al)
        _acc(X, (a, b, c - 1, d, e, f), 2 * c * (c - 1 + e + 2 * f + n * tau) * al)

        Y = out.eta
        _acc(Y, (a, b, c, d - 1, e, f), 2 * d * (2 * d + n * (2 * gam - 1)) * al)
        _acc(Y, (a + 1, b - 2, c, d, e, f), -b * (b - 1) * al)
        _acc(Y, (a, b - 1, c + 1, d, e - 1, f), -2 * b * e * al)
        _acc(Y, (a, b - 1, c, d, e, f), 2 * b * (b - 1 + c + 2 * a + n * lam) * al)
        _acc(Y, (a, b, c, d, e - 2, f + 1), -e * (e - 1) * al)
        _acc(Y, (a, b, c, d, e - 1, f), 2 * e * (e - 1 + c + 2 * f + n * tau) * al)

        Z = out.zeta
        _acc(Z, (a, b, c, d, e, f - 1), 2 * f * (2 * f + n * (2 * tau - 1)) * al)
        _acc(Z, (a, b, c, d + 1, e - 2, f), -e * (e - 1) * al)
        _acc(Z, (a, b + 1, c - 1, d, e - 1, f), -2 * e * c * al)
        _acc(Z, (a, b, c, d, e - 1, f), 2 * e * (e - 1 + b + 2 * d + n * gam) * al)
        _acc(Z, (a + 1, b, c - 2, d, e, f), -c * (c - 1) * al)
        _acc(Z, (a, b, c - 1, d, e, f), 2 * c * (c - 1 + b + 2 * a + n * lam) * al)
    return out


def homogeneity_defect(B: ConformalSymbol, mu=None) -> dict:
    """Coefficients of ``L_{X_0} B``; zero for every term iff ``n(mu - lam - gam - tau) = 2k``."""
    shift = (B.target_weight if mu is None else Fraction(mu)) - sum(B.weights, Fraction(0))
    return {e: (B.n * shift - 2 * sum(e)) * v for e, v in B.terms.items() if (B.n * shift - 2 * sum(e)) * v != 0}


@dataclass
class NEqsSystem:
    degree: int
    n: int
    weights: tuple
    unknowns: list[Exp]
    rows: list[dict[int, Fraction]]
    labels: list[tuple[str, Exp]]

    def family_rows(self, family: str) -> dict[Exp, dict[Exp, Fraction]]:
        """Rows of one family keyed by target exponent, columns keyed by exponent."""
        out = {}
        for (fam, e), row in zip(self.labels, self.rows):
            if fam == family:
                out[e] = {self.unknowns[c]: v for c, v in row.items()}
        return out


def build_neqs(k: int, n: int, weights: Sequence) -> NEqsSystem:
    """Recurrence equations for the coefficients of a degree-``k`` invariant symbol.

    One equation per family and per exponent of degree ``k - 1``.
    """
    if k < 1:
        raise ValueError("build_neqs needs k >= 1")
    lam, gam, tau = (Fraction(w) for w in weights)
    unk = exponents(k)
    pos = {e: i for i, e in enumerate(unk)}
    rows, labels = [], []

    def emit(family, target, terms):
        row: dict[int, Fraction] = {}
        for e, v in terms:
            if v == 0 or min(e) < 0:
                continue
            c = pos[tuple(e)]
            row[c] = row.get(c, 0) + v
        row = {c: v for c, v in row.items() if v != 0}
        if row:
            rows.append(row)
            labels.append((family, target))

    for t in exponents(k - 1):
        a, b, c, d, e, f = t
        emit("xi", t, [
            ((a + 1, b, c, d, e, f), 2 * (a + 1) * (2 * (a + 1) + n * (2 * lam - 1))),
            ((a, b + 2, c, d - 1, e, f), -(b + 2) * (b + 1)),
            ((a, b + 1, c + 1, d, e - 1, f), -2 * (b + 1) * (c + 1)),
            ((a, b + 1, c, d, e, f), 2 * (b + 1) * (b + e + 2 * d + n * gam)),
            ((a, b, c + 2, d, e, f - 1), -(c + 2) * (c + 1)),
            ((a, b, c + 1, d, e, f), 2 * (c + 1) * (c + e + 2 * f + n * tau)),
        ])
        emit("eta", t, [
            ((a, b, c, d + 1, e, f), 2 * (d + 1) * (2 * (d + 1) + n * (2 * gam - 1))),
            ((a - 1, b + 2, c, d, e, f), -(b + 2) * (b + 1)),
            ((a, b + 1, c - 1, d, e + 1, f), -2 * (b + 1) * (e + 1)),
            ((a, b + 1, c, d, e, f), 2 * (b + 1) * (b + c + 2 * a + n * lam)),
            ((a, b, c, d, e + 2, f - 1), -(e + 2) * (e + 1)),
            ((a, b, c, d, e + 1, f), 2 * (e + 1) * (c + e + 2 * f + n * tau)),
        ])
        emit("zeta", t, [
            ((a, b, c, d, e, f + 1), 2 * (f + 1) * (2 * (f + 1) + n * (2 * tau - 1))),
            ((a, b, c, d - 1, e + 2, f), -(e + 2) * (e + 1)),
            ((a, b - 1, c + 1, d, e + 1, f), -2 * (e + 1) * (c + 1)),
            ((a, b, c, d, e + 1, f), 2 * (e + 1) * (b + e + 2 * d + n * gam)),
            ((a - 1, b, c + 2, d, e, f), -(c + 2) * (c + 1)),
            ((a, b, c + 1, d, e, f), 2 * (c + 1) * (c + b + 2 * a + n * lam)),
        ])
    return NEqsSystem(k, n, (lam, gam, tau), unk, rows, labels)


def b2_closed_form(n: int, weights: Sequence, s, t, u) -> ConformalSymbol:
    lam, gam, tau = (Fraction(w) for w in weights)
    s, t, u = Fraction(s), Fraction(t), Fraction(u)
    pl, pg, pt = (2 + n * (2 * w - 1) for w in (lam, gam, tau))
    terms = {
        (1, 0, 0, 0, 0, 0): n * (gam * s + tau * t) * pg * pt,
        (0, 0, 0, 1, 0, 0): n * (lam * s + tau * u) * pl * pt,
        (0, 0, 0, 0, 0, 1): n * (gam * u + lam * t) * pl * pg,
        (0, 1, 0, 0, 0, 0): -pl * pg * pt * s,
        (0, 0, 1, 0, 0, 0): -pl * pg * pt * t,
        (0, 0, 0, 0, 1, 0): -pl * pg * pt * u,
    }
    return ConformalSymbol(n, (lam, gam, tau), 1, terms)


@dataclass
class SymbolKernel:
    degree: int
    n: int
    weights: tuple
    basis: list[ConformalSymbol]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, B: ConformalSymbol) -> bool:
        if B.degree != self.degree:
            return False
        if B.degenerate:
            return True
        rows = [dict(enumerate(b.vector())) for b in self.basis]
        return linalg.rank(rows + [dict(enumerate(B.vector()))], len(exponents(self.degree))) == self.dimension

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.degree,
            "weights": [format_scalar(w) for w in self.weights],
            "dimension": self.dimension,
            "basis": [b.to_dict() for b in self.basis],
        }


def solve_b2k(k: int, n: int, weights: Sequence) -> SymbolKernel:
    weights = tuple(Fraction(w) for w in weights)
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return SymbolKernel(0, n, weights, [scalar_symbol(n, weights)])
    S = build_neqs(k, n, weights)
    vecs = linalg.nullspace(S.rows, len(S.unknowns))
    basis = [ConformalSymbol(n, weights, k, dict(zip(S.unknowns, v))) for v in vecs]
    return SymbolKernel(k, n, weights, basis)


def signature_dimension(p: int, q: int) -> int:
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("signature (p, q) needs p, q >= 0 and p + q >= 1")
    return p + q


@dataclass
class ObstructionVerdict:
    passes: bool
    degenerate: bool
    factor: Fraction
    products: dict

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "degenerate": self.degenerate,
            "factor": format_scalar(self.factor),
            "products": [{"exp": list(e), "val": format_scalar(v)} for e, v in self.products.items()],
        }


def vectn_obstruction(B: ConformalSymbol) -> ObstructionVerdict:
    """Divergence-term test for invariance under all vector fields.

    Every term picks up ``(mu - lam - gam - tau) * alpha * Div(X)``; this must
    vanish, which leaves only ``k = 0`` or the zero symbol. The remaining terms
    of the general Lie derivative are not examined.
    """
    factor = B.target_weight - sum(B.weights, Fraction(0))
    products = {e: factor * v for e, v in B.terms.items()}
    return ObstructionVerdict(all(v == 0 for v in products.values()), B.degenerate, factor, products)
