"""Named invariant operators on densities on the line, as exact coefficient tables.

Primitive constructors are written out once; everything in
:func:`theorem_representatives` is assembled from them with ``insert``,
``reorder`` and ``dualize`` so that a transcription error in a primitive
shows up everywhere it is used.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Sequence

from .opcore import DensityOp, insert, reorder, scalar_op
from .scalars import SQRT21, QuadExt, format_scalar, kappa

F = Fraction


class DomainError(ValueError):
    """Weights outside the domain where a catalog entry is defined."""


# --- unary and binary ----------------------------------------------------------------------

def deRham() -> DensityOp:
    return DensityOp((F(0),), 1, {(1,): 1}, "d")


def poisson(lam, mu) -> DensityOp:
    """``{phi (dx)^lam, psi (dx)^mu} = (mu phi' psi - lam phi psi') (dx)^(lam+mu+1)``."""
    return DensityOp((lam, mu), 1, {(1, 0): mu, (0, 1): -lam}, "poisson")


_BINARY: dict[str, tuple[Callable[[tuple], bool], Callable[[tuple], dict], str]] = {
    "ord2_a": (lambda w: w[0] == 0, lambda w: {(1, 1): -1, (2, 0): w[1]}, "F_0 x F_mu -> F_{mu+2}"),
    "ord2_b": (lambda w: w[1] == 0, lambda w: {(0, 2): -w[0], (1, 1): 1}, "F_lam x F_0 -> F_{lam+2}"),
    "ord2_c": (
        lambda w: w[0] + w[1] == -1,
        lambda w: {(0, 2): -w[0], (1, 1): -(2 * w[0] + 1), (2, 0): -(w[0] + 1)},
        "F_lam x F_{-lam-1} -> F_1",
    ),
    "ord3_a": (lambda w: w == (0, 0), lambda w: {(1, 2): 1, (2, 1): -1}, "F_0 x F_0 -> F_3"),
    "ord3_b": (lambda w: w == (0, -2), lambda w: {(1, 2): 1, (2, 1): 3, (3, 0): 2}, "F_0 x F_-2 -> F_1"),
    "ord3_c": (lambda w: w == (-2, 0), lambda w: {(2, 1): 1, (1, 2): 3, (0, 3): 2}, "F_-2 x F_0 -> F_1"),
    "grozman": (
        lambda w: w == (F(-2, 3), F(-2, 3)),
        lambda w: {(3, 0): 2, (2, 1): 3, (1, 2): -3, (0, 3): -2},
        "F_-2/3 x F_-2/3 -> F_5/3",
    ),
}

BINARY_NAMES = tuple(_BINARY)


def binary_catalog(name: str, weights: Sequence) -> DensityOp:
    if name not in _BINARY:
        raise KeyError(f"unknown binary operator {name!r}")
    w = tuple(F(x) for x in weights)
    ok, table, _ = _BINARY[name]
    if len(w) != 2 or not ok(w):
        raise DomainError(f"{name} is not defined at weights {w}")
    return DensityOp(w, _order_of(table(w)), table(w), name)


def grozman() -> DensityOp:
    return binary_catalog("grozman", (F(-2, 3), F(-2, 3)))


def _order_of(table: dict) -> int:
    return sum(next(iter(table)))


# --- alternating ternary operators ---------------------------------------------------------

def _sign(p: Sequence[int]) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _det(rows: tuple[int, int, int], scale=1) -> dict:
    """Coefficient table of the 3x3 Wronskian-type determinant with derivative rows ``rows``."""
    return {tuple(rows[p[m]] for m in range(3)): scale * _sign(p) for p in permutations(range(3))}


def _sum(*tables: dict) -> dict:
    out: dict = {}
    for t in tables:
        for k, v in t.items():
            out[k] = out.get(k, 0) + v
    return out


def ff_delta3(lam) -> DensityOp:
    return DensityOp((lam,) * 3, 3, _det((0, 1, 2)), "Delta_3")


def ff_upsilon() -> DensityOp:
    w = F(-5, 4)
    table = _sum(_det((0, 1, 5)), _det((0, 2, 4), F(5, 2)), _det((1, 2, 3), 2))
    return DensityOp((w,) * 3, 6, table, "Upsilon")


def ff_theta(sign: int) -> DensityOp:
    """Order 5 on ``F_k^3`` with ``k = -(9 + sign*sqrt21)/12``."""
    k = kappa(sign)
    c = 2 * (sign * SQRT21 - 4)
    table = _sum(_det((0, 1, 4), QuadExt(1)), _det((0, 2, 3), c))
    return DensityOp((k,) * 3, 5, table, "Theta+" if sign > 0 else "Theta-")


def ff_d_delta3_minus1() -> DensityOp:
    return insert(deRham(), 1, ff_delta3(F(-1))).named("d o Delta_-1,3")


def ff_delta3_ddd() -> DensityOp:
    return with_d(ff_delta3(F(1)), 1, 2, 3).named("Delta_1,3(d,d,d)")


# --- the non-alternating ternary operators -------------------------------------------------

def delta3(lam, gam, tau) -> DensityOp:
    l, g, t = lam, gam, tau
    table = {
        (0, 3, 0): l * t * (l - t) * (1 + l + t),
        (3, 0, 0): g * t * (t - g) * (1 + g + t),
        (0, 0, 3): g * l * (g - l) * (1 + g + l),
        (1, 1, 1): (l - g) * (g - t) * (l - t),
        (2, 1, 0): t * (1 + g + t) * (2 * l + t + g * (3 * l + 3 * t + 4) + 2),
        (1, 2, 0): -t * (1 + l + t) * (2 * g + t + l * (3 * g + 3 * t + 4) + 2),
        (2, 0, 1): -g * (1 + g + t) * (g + 2 * l + (3 * g + 3 * l + 4) * t + 2),
        (1, 0, 2): g * (1 + g + l) * (g + 2 * t + l * (3 * g + 3 * t + 4) + 2),
        (0, 2, 1): l * (1 + l + t) * (2 * g + l + (3 * g + 3 * l + 4) * t + 2),
        (0, 1, 2): -l * (1 + g + l) * (l + 2 * t + g * (3 * l + 3 * t + 4) + 2),
    }
    return DensityOp((lam, gam, tau), 3, table, "Delta_3(lam,gam,tau)")


def xi(tau) -> DensityOp:
    """Order 4 on ``F_{-tau-3/2} x F_tau x F_tau``; at ``tau = -3/4`` use :func:`xi_st`."""
    t = F(tau) if not isinstance(tau, Fraction) else tau
    if t == F(-3, 4):
        raise DomainError("xi is not defined at tau = -3/4; use xi_st(s, t)")
    table = {
        (0, 4, 0): -t * (3 + 2 * t),
        (0, 0, 4): t * (3 + 2 * t),
        (1, 1, 2): -10 * (1 + t),
        (1, 2, 1): 10 * (1 + t),
        (3, 1, 0): -F(8, 3) * t * (2 + 3 * t),
        (3, 0, 1): F(8, 3) * t * (2 + 3 * t),
        (1, 3, 0): -F(2, 3) * t * (13 + 12 * t),
        (1, 0, 3): F(2, 3) * t * (13 + 12 * t),
        (0, 3, 1): F(5, 3) * (3 + 2 * t),
        (0, 1, 3): -F(5, 3) * (3 + 2 * t),
        (2, 2, 0): -4 * t * (2 + 3 * t),
        (2, 0, 2): 4 * t * (2 + 3 * t),
    }
    return DensityOp((-t - F(3, 2), t, t), 4, table, "Xi")


def xi_st(s, t) -> DensityOp:
    """The two-parameter order-4 family on ``F_{-3/4}^3``."""
    s, t = F(s), F(t)
    table = {
        (0, 4, 0): s,
        (4, 0, 0): t,
        (0, 0, 4): -s - t,
        (3, 1, 0): F(4, 9) * (4 * t - s),
        (3, 0, 1): F(4, 9) * (s + 5 * t),
        (1, 3, 0): F(4, 9) * (4 * s - t),
        (1, 0, 3): -F(4, 9) * (4 * s + 5 * t),
        (0, 3, 1): F(4, 9) * (5 * s + t),
        (0, 1, 3): -F(4, 9) * (5 * s + 4 * t),
        (2, 2, 0): -F(2, 3) * (s + t),
        (2, 0, 2): F(2, 3) * s,
        (0, 2, 2): F(2, 3) * t,
        (2, 1, 1): F(20, 9) * t,
        (1, 2, 1): F(20, 9) * s,
        (1, 1, 2): -F(20, 9) * (s + t),
    }
    return DensityOp((F(-3, 4),) * 3, 4, table, f"Xi_st({s},{t})")


def gamma_op() -> DensityOp:
    """Order 5 on ``F_-2/3 x F_-2/3 x F_-4/3``; symmetric in the first two slots."""
    table = {
        (0, 0, 5): F(2, 5),
        (0, 1, 4): 1, (1, 0, 4): 1,
        (0, 2, 3): -1, (2, 0, 3): -1,
        (0, 3, 2): F(-5, 2), (3, 0, 2): F(-5, 2),
        (0, 4, 1): F(-17, 10), (4, 0, 1): F(-17, 10),
        (0, 5, 0): F(-2, 5), (5, 0, 0): F(-2, 5),
        (1, 1, 3): F(3, 2),
        (1, 2, 2): F(-9, 4), (2, 1, 2): F(-9, 4),
        (1, 3, 1): F(-9, 4), (3, 1, 1): F(-9, 4),
        (1, 4, 0): F(-3, 5), (4, 1, 0): F(-3, 5),
        (2, 2, 1): F(9, 2),
        (2, 3, 0): 3, (3, 2, 0): 3,
    }
    return DensityOp((F(-2, 3), F(-2, 3), F(-4, 3)), 5, table, "Gamma")


# --- composition helpers -------------------------------------------------------------------

def with_d(A: DensityOp, *slots: int) -> DensityOp:
    """Precompose the de Rham differential in each listed slot (slot weights must be 1)."""
    for s in slots:
        A = insert(A, s, deRham())
    return A


def times(B: DensityOp, weight) -> DensityOp:
    """``B(...) * f`` with ``f`` of the given weight appended as the last argument."""
    return insert(scalar_op((B.target_weight, weight)), 1, B)


def poisson_of(inner: DensityOp, other_weight, inner_first: bool = True) -> DensityOp:
    """``{inner(...), g}`` or ``{g, inner(...)}``."""
    if inner_first:
        return insert(poisson(inner.target_weight, other_weight), 1, inner)
    return insert(poisson(other_weight, inner.target_weight), 2, inner)


def d_of(B: DensityOp) -> DensityOp:
    return insert(deRham(), 1, B)


def _pb_dd() -> DensityOp:
    """``{d phi, d psi}`` on functions."""
    return with_d(poisson(1, 1), 1, 2)


# --- theorem case tables -------------------------------------------------------------------

def _named(pairs: list[tuple[str, DensityOp]]) -> list[DensityOp]:
    return [op.named(name) for name, op in pairs]


def _order1(l, g, t):
    if (l, g, t) == (0, 0, 0):
        return _named([
            ("dphi.psi.chi", with_d(scalar_op((1, 0, 0)), 1)),
            ("phi.dpsi.chi", with_d(scalar_op((0, 1, 0)), 2)),
            ("phi.psi.dchi", with_d(scalar_op((0, 0, 1)), 3)),
        ])
    # two of these three span the kernel; which two depends on which weights vanish
    return _named([
        ("{phi,psi}chi", times(poisson(l, g), t)),
        ("{phi,chi}psi", reorder(times(poisson(l, t), g), 1, 3, 2)),
        ("{psi,chi}phi", reorder(times(poisson(g, t), l), 2, 3, 1)),
    ])


def _order2(l, g, t):
    if (l, g) == (0, 0):
        return _named([
            ("{phi,dpsi}chi", times(with_d(poisson(0, 1), 2), t)),
            ("{chi,dphi}psi", reorder(times(with_d(poisson(t, 1), 2), 0), 3, 1, 2)),
            ("{dpsi,chi}phi", reorder(times(with_d(poisson(1, t), 1), 0), 2, 3, 1)),
        ])
    return _named([
        ("{{phi,psi},chi}", poisson_of(poisson(l, g), t)),
        ("{{phi,chi},psi}", reorder(poisson_of(poisson(l, t), g), 1, 3, 2)),
    ])


def _order3(l, g, t):
    m23 = F(-2, 3)
    h = F(-1, 2)
    if (l, g, t) == (0, 0, 0):
        return _named([
            ("{dphi,dpsi}chi", times(_pb_dd(), 0)),
            ("{dchi,dphi}psi", reorder(times(_pb_dd(), 0), 3, 1, 2)),
            ("{dpsi,dchi}phi", reorder(times(_pb_dd(), 0), 2, 3, 1)),
            ("dphi.dpsi.dchi", with_d(scalar_op((1, 1, 1)), 1, 2, 3)),
        ])
    if l == 0 and (g, t) != (0, 0):
        return _named([
            ("{{dphi,psi},chi}", poisson_of(with_d(poisson(1, g), 1), t)),
            ("{{dphi,chi},psi}", reorder(poisson_of(with_d(poisson(1, t), 1), g), 1, 3, 2)),
        ])
    if (l, g, t) == (m23, m23, m23):
        gz = times(grozman(), m23)
        return _named([
            ("Gz(phi,psi)chi", gz),
            ("Gz(chi,phi)psi", reorder(gz, 3, 1, 2)),
            ("Gz(psi,chi)phi", reorder(gz, 2, 3, 1)),
        ])
    if (l, g, t) == (h, h, h):
        op = poisson_of(d_of(poisson(h, h)), h)
        return _named([
            ("{d{phi,psi},chi}", op),
            ("{d{chi,phi},psi}", reorder(op, 3, 1, 2)),
            ("{d{psi,chi},phi}", reorder(op, 2, 3, 1)),
        ])
    if 1 + l + t == 0 and g == l and l != t:
        return _named([
            ("{d{phi,chi},psi}", reorder(poisson_of(d_of(poisson(l, t)), g), 1, 3, 2)),
            ("{d{psi,chi},phi}", reorder(poisson_of(d_of(poisson(g, t)), l), 2, 3, 1)),
        ])
    return [delta3(l, g, t)]


def _order4(l, g, t):
    m23 = F(-2, 3)
    m34 = F(-3, 4)
    if (l, g) == (0, 0):
        return _named([
            ("{{dphi,dpsi},chi}", poisson_of(_pb_dd(), t)),
            ("{{chi,dphi},dpsi}", reorder(insert(with_d(poisson(t + 2, 1), 2), 1, with_d(poisson(t, 1), 2)), 3, 1, 2)),
        ])
    if (l, g, t) == (-2, 0, -2):
        inner = d_of(with_d(poisson(1, -2), 1))
        return _named([
            ("{d{dpsi,phi},chi}", reorder(poisson_of(inner, -2), 2, 1, 3)),
            ("{d{dpsi,chi},phi}", reorder(poisson_of(inner, -2), 2, 3, 1)),
        ])
    if g == 0 and l != 0 and t != 0:
        return _named([("Delta_3(phi,dpsi,chi)", with_d(delta3(l, 1, t), 2))])
    if (l, g) == (m23, m23) and t != -1:
        return _named([("{Gz(phi,psi),chi}", poisson_of(grozman(), t))])
    if (l, g, t) == (-1, m23, m23):
        op = insert(grozman(), 1, poisson(-1, m23))
        return _named([
            ("Gz({phi,psi},chi)", op),
            ("Gz({phi,chi},psi)", reorder(op, 1, 3, 2)),
        ])
    if g == t and l == -F(3, 2) - t and t not in (-F(3, 2), m23, 0, m34):
        return _named([("Xi", xi(t))])
    if (l, g, t) == (m34, m34, m34):
        return _named([("Xi_st(1,0)", xi_st(1, 0)), ("Xi_st(0,1)", xi_st(0, 1))])
    return []


def _order5(l, g, t):
    m23 = F(-2, 3)
    if (l, g, t) == (0, 0, 0):
        outer = with_d(poisson(3, 1), 2)
        op = insert(outer, 1, _pb_dd())
        return _named([
            ("{{dphi,dpsi},dchi}", op),
            ("{{dchi,dphi},dpsi}", reorder(op, 3, 1, 2)),
        ])
    if (l, g, t) == (0, 0, -2):
        op = insert(with_d(poisson(1, 1), 2), 1, d_of(with_d(poisson(1, -2), 1)))
        return _named([
            ("{d{dphi,chi},dpsi}", reorder(op, 1, 3, 2)),
            ("{d{dpsi,chi},dphi}", reorder(op, 2, 3, 1)),
        ])
    if (l, g) == (0, 0) and t not in (-4, -2, 0):
        return _named([("Delta_3(dphi,dpsi,chi)", with_d(delta3(1, 1, t), 1, 2))])
    if (l, g, t) == (m23, m23, 0):
        return _named([("{Gz(phi,psi),dchi}", insert(with_d(poisson(F(5, 3), 1), 2), 1, grozman()))])
    if (l, g, t) == (F(-5, 2), 0, 1):
        return _named([("Xi(phi,dpsi,chi)", with_d(xi(1), 2))])
    if (l, g, t) == (m23, m23, F(-4, 3)):
        return [gamma_op()]
    for sign in (1, -1):
        k = kappa(sign)
        if l == k and g == k and t == k:
            return [ff_theta(sign)]
    return []


def _order6(l, g, t):
    m54 = F(-5, 4)
    if (l, g, t) == (0, 0, 0):
        return [ff_delta3_ddd()]
    if (l, g, t) == (0, 0, F(-5, 2)):
        return _named([("Xi(dphi,dpsi,chi)", reorder(with_d(xi(1), 2, 3), 3, 1, 2))])
    if (l, g, t) == (m54, m54, m54):
        return [ff_upsilon()]
    return []


_CASES = {1: _order1, 2: _order2, 3: _order3, 4: _order4, 5: _order5, 6: _order6}


def theorem_representatives(k: int, weights: Sequence) -> list[DensityOp]:
    """The spanning operators the classification lists for this order and these exact weights."""
    if k not in _CASES:
        raise ValueError("theorem representatives exist for orders 1..6")
    l, g, t = (w if isinstance(w, QuadExt) else F(w) for w in weights)
    return _CASES[k](l, g, t)


# --- registry ------------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    arity: int
    order: int | str
    weight_domain: str
    locus: str
    build: Callable[..., DensityOp]
    params: tuple[str, ...] = ()
    example: tuple = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "arity": self.arity,
            "order": self.order,
            "weight_domain": self.weight_domain,
            "locus": self.locus,
            "params": list(self.params),
            "example_weights": [format_scalar(w) for w in self.example],
        }


def _fixed(weights_expected: tuple, op_factory: Callable[[], DensityOp]) -> Callable[..., DensityOp]:
    def build(weights=None, **_):
        op = op_factory()
        if weights is not None and tuple(weights) != op.weights:
            raise DomainError(f"defined only at weights {tuple(str(w) for w in op.weights)}")
        return op
    return build


def _build_delta3(weights, **_):
    return delta3(*weights)


def _build_ff_delta3(weights, **_):
    l, g, t = weights
    if not l == g == t:
        raise DomainError("ff_delta3 needs equal weights")
    return ff_delta3(l)


def _build_xi(weights, **_):
    l, g, t = weights
    if g != t or l != -F(3, 2) - t:
        raise DomainError("xi needs weights (-tau-3/2, tau, tau)")
    return xi(t)


def _build_xi_st(weights=None, s=1, t=0, **_):
    if weights is not None and tuple(weights) != (F(-3, 4),) * 3:
        raise DomainError("xi_st is defined only at (-3/4, -3/4, -3/4)")
    return xi_st(s, t)


def _build_poisson(weights, **_):
    return poisson(*weights)


def _binary_builder(name):
    def build(weights, **_):
        return binary_catalog(name, weights)
    return build


_BINARY_EXAMPLES = {
    "ord2_a": (0, 2), "ord2_b": (3, 0), "ord2_c": (F(1, 3), F(-4, 3)), "ord3_a": (0, 0),
    "ord3_b": (0, -2), "ord3_c": (-2, 0), "grozman": (F(-2, 3), F(-2, 3)),
}

CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in [
        CatalogEntry("deRham", 1, 1, "(0)", "exterior differential F_0 -> F_1", _fixed((F(0),), deRham), (),
                     (F(0),)),
        CatalogEntry("poisson", 2, 1, "any (lam, mu)", "Poisson bracket F_lam x F_mu -> F_{lam+mu+1}",
                     _build_poisson, (), (F(1, 2), F(3))),
        *[CatalogEntry(n, 2, _order_of(_BINARY[n][1]((F(0), F(0)))), _BINARY[n][2], "binary invariant",
                       _binary_builder(n), (), tuple(F(x) for x in _BINARY_EXAMPLES[n])) for n in BINARY_NAMES],
        CatalogEntry("ff_delta3", 3, 3, "(lam, lam, lam)", "alternating, Wronskian rows 0,1,2", _build_ff_delta3, (),
                     (F(2),) * 3),
        CatalogEntry("ff_d_delta3_minus1", 3, 4, "(-1, -1, -1)", "alternating, d o Delta_-1,3",
                     _fixed((F(-1),) * 3, ff_d_delta3_minus1), (), (F(-1),) * 3),
        CatalogEntry("ff_upsilon", 3, 6, "(-5/4, -5/4, -5/4)", "alternating, order 6",
                     _fixed((F(-5, 4),) * 3, ff_upsilon), (), (F(-5, 4),) * 3),
        CatalogEntry("ff_delta3_ddd", 3, 6, "(0, 0, 0)", "alternating, Delta_1,3(d,d,d)",
                     _fixed((F(0),) * 3, ff_delta3_ddd), (), (F(0),) * 3),
        CatalogEntry("ff_theta+", 3, 5, "(k+, k+, k+), k+ = -(9+sqrt21)/12", "alternating, order 5, over Q(sqrt21)",
                     _fixed((kappa(1),) * 3, lambda: ff_theta(1)), (), (kappa(1),) * 3),
        CatalogEntry("ff_theta-", 3, 5, "(k-, k-, k-), k- = -(9-sqrt21)/12", "alternating, order 5, over Q(sqrt21)",
                     _fixed((kappa(-1),) * 3, lambda: ff_theta(-1)), (), (kappa(-1),) * 3),
        CatalogEntry("delta3", 3, 3, "any (lam, gam, tau)", "ternary order 3, generalizes Delta_lam,3", _build_delta3,
                     (), (F(1), F(2), F(3))),
        CatalogEntry("xi", 3, 4, "(-tau-3/2, tau, tau), tau != -3/4", "ternary order 4", _build_xi, (),
                     (F(-5, 2), F(1), F(1))),
        CatalogEntry("xi_st", 3, 4, "(-3/4, -3/4, -3/4)", "ternary order 4, two-parameter family", _build_xi_st,
                     ("s", "t"), (F(-3, 4),) * 3),
        CatalogEntry("gamma_op", 3, 5, "(-2/3, -2/3, -4/3)", "ternary order 5",
                     _fixed((F(-2, 3), F(-2, 3), F(-4, 3)), gamma_op), (), (F(-2, 3), F(-2, 3), F(-4, 3))),
    ]
}
