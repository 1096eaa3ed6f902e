"""Polynomial weighted densities on the line and the Lie derivative action.

A density ``phi(x) (dx)^w`` is stored as its coefficient list together with
the weight ``w``. This module is deliberately naive: it evaluates operators on
actual polynomials and is used as the brute-force check for the closed-form
invariance systems in :mod:`transvect.invariance`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .opcore import DensityOp


class ArgumentError(ValueError):
    """Arity or weight mismatch when applying an operator."""


def _trim(coeffs) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(p: Sequence, q: Sequence) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, v in enumerate(q):
        if v:
            out[i] = out[i] + v
    return _trim(out)


def poly_scale(p: Sequence, c) -> tuple:
    if c == 0:
        return ()
    return _trim(v * c for v in p)


def poly_mul(p: Sequence, q: Sequence) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return _trim(out)


def poly_deriv(p: Sequence, m: int = 1) -> tuple:
    """m-th derivative of the polynomial with coefficient list ``p``."""
    out = list(p)
    for _ in range(m):
        out = [i * out[i] for i in range(1, len(out))]
    return _trim(out)


@dataclass(frozen=True)
class WeightedDensity:
    coeffs: tuple
    weight: object = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self, m: int = 1) -> tuple:
        return poly_deriv(self.coeffs, m)

    def __add__(self, other: WeightedDensity) -> WeightedDensity:
        if other.weight != self.weight:
            raise ArgumentError("cannot add densities of different weights")
        return WeightedDensity(poly_add(self.coeffs, other.coeffs), self.weight)

    def __sub__(self, other: WeightedDensity) -> WeightedDensity:
        return self + other.scale(-1)

    def scale(self, c) -> WeightedDensity:
        return WeightedDensity(poly_scale(self.coeffs, c), self.weight)


@dataclass(frozen=True)
class VectorField1D:
    """The vector field ``f(x) d/dx``."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def bracket(self, other: VectorField1D) -> VectorField1D:
        """``[f d/dx, g d/dx] = (f g' - g f') d/dx``."""
        f, g = self.coeffs, other.coeffs
        return VectorField1D(poly_add(poly_mul(f, poly_deriv(g)), poly_scale(poly_mul(g, poly_deriv(f)), -1)))


def monomial(m: int, weight=Fraction(0), coeff=1) -> WeightedDensity:
    return WeightedDensity((0,) * m + (coeff,), weight)


def monomial_field(r: int) -> VectorField1D:
    """``x^r d/dx``."""
    return VectorField1D((0,) * r + (1,))


def _plain(w):
    # integral weights as int keep the arithmetic off the Fraction slow path
    return w.numerator if isinstance(w, Fraction) and w.denominator == 1 else w


def lie_derivative(X: VectorField1D, phi: WeightedDensity) -> WeightedDensity:
    f = X.coeffs
    body = poly_add(poly_mul(f, poly_deriv(phi.coeffs)),
                    poly_scale(poly_mul(poly_deriv(f), phi.coeffs), _plain(phi.weight)))
    return WeightedDensity(body, phi.weight)


def apply_op(A: DensityOp, args: Sequence[WeightedDensity]) -> WeightedDensity:
    if len(args) != A.arity:
        raise ArgumentError(f"operator has arity {A.arity}, got {len(args)} arguments")
    for slot, (arg, w) in enumerate(zip(args, A.weights), start=1):
        if arg.weight != w:
            raise ArgumentError(f"slot {slot}: expected weight {w}, got {arg.weight}")
    cache: dict[tuple[int, int], tuple] = {}

    def der(slot: int, m: int) -> tuple:
        key = (slot, m)
        if key not in cache:
            cache[key] = poly_deriv(args[slot].coeffs, m)
        return cache[key]

    total: tuple = ()
    for idx, c in A.coeffs.items():
        term: tuple = (c,)
        for slot, m in enumerate(idx):
            term = poly_mul(term, der(slot, m))
            if not term:
                break
        total = poly_add(total, term)
    return WeightedDensity(total, A.target_weight)


def defect(A: DensityOp, X: VectorField1D, args: Sequence[WeightedDensity]) -> WeightedDensity:
    """``L_X(A(args)) - sum_i A(..., L_X args[i], ...)``; zero for every X and args iff A is invariant."""
    out = lie_derivative(X, apply_op(A, args))
    for i in range(len(args)):
        shifted = list(args)
        shifted[i] = lie_derivative(X, args[i])
        out = out - apply_op(A, shifted)
    return out


def oracle_invariant(A: DensityOp, max_power: int | None = None, bound: int | None = None) -> bool:
    """Brute-force invariance test.

    Checks ``defect(A, x^r d/dx, monomials) == 0`` for ``r = 0..max_power``
    (default ``order + 1``) and all monomial arguments ``x^a`` with
    ``a <= bound`` in every slot (default ``order + r + 1``).
    """
    k = A.order
    rmax = k + 1 if max_power is None else max_power
    for r in range(rmax + 1):
        X = monomial_field(r)
        top = k + r + 1 if bound is None else bound
        for degs in product(range(top + 1), repeat=A.arity):
            args = [monomial(d, w) for d, w in zip(degs, A.weights)]
            if not defect(A, X, args).is_zero():
                return False
    return True
