"""Constant-coefficient multilinear operators on weighted densities.

An operator of arity ``m`` and order ``k`` acting on
``F_{w1} x ... x F_{wm}`` is the sparse table

    A(f_1, ..., f_m) = sum_{|idx| = k} coeffs[idx] * f_1^(idx_1) ... f_m^(idx_m)

with target weight ``w1 + ... + wm + k``. The target weight is always derived,
never stored. Slots are numbered from 1 in the public API.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations as _perms
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, Sequence

from .scalars import format_scalar, parse_scalar


class CompositionError(ValueError):
    """Inner target weight does not match the outer slot weight, or arity overflow."""


class SlotError(ValueError):
    pass


def multi_indices(arity: int, order: int) -> list[tuple[int, ...]]:
    """All ``arity``-tuples of non-negative integers summing to ``order``, lexicographically sorted."""
    if arity == 1:
        return [(order,)]
    out = []
    for first in range(order + 1):
        for rest in multi_indices(arity - 1, order - first):
            out.append((first,) + rest)
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(parts: Sequence[int]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


@dataclass(frozen=True)
class DensityOp:
    weights: tuple
    order: int
    coeffs: Mapping[tuple[int, ...], object]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        weights = tuple(w if not isinstance(w, int) else Fraction(w) for w in self.weights)
        if not 1 <= len(weights) <= 3:
            raise ValueError("arity must be 1, 2 or 3")
        clean = {}
        for idx, val in self.coeffs.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != len(weights) or sum(idx) != self.order or min(idx) < 0:
                raise ValueError(f"multi-index {idx} does not match arity {len(weights)} / order {self.order}")
            if val != 0:
                clean[idx] = clean.get(idx, 0) + val
        clean = {k: v for k, v in sorted(clean.items()) if v != 0}
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "coeffs", clean)

    @property
    def arity(self) -> int:
        return len(self.weights)

    @property
    def target_weight(self):
        return sum(self.weights, Fraction(0)) + self.order

    @property
    def degenerate(self) -> bool:
        """True when every coefficient vanishes (families can vanish at isolated weights)."""
        return not self.coeffs

    def coeff(self, idx: Iterable[int]):
        return self.coeffs.get(tuple(idx), 0)

    def vector(self) -> list:
        """Coefficients in lexicographic multi-index order."""
        return [self.coeff(i) for i in multi_indices(self.arity, self.order)]

    def named(self, name: str) -> DensityOp:
        return DensityOp(self.weights, self.order, self.coeffs, name)

    def _check_shape(self, other: DensityOp):
        if self.weights != other.weights or self.order != other.order:
            raise ValueError("operators differ in weights or order")

    def __add__(self, other: DensityOp) -> DensityOp:
        self._check_shape(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return DensityOp(self.weights, self.order, out)

    def __neg__(self) -> DensityOp:
        return self.scale(-1)

    def __sub__(self, other: DensityOp) -> DensityOp:
        return self + (-other)

    def scale(self, c) -> DensityOp:
        return DensityOp(self.weights, self.order, {k: v * c for k, v in self.coeffs.items()}, self.name)

    def __mul__(self, c) -> DensityOp:
        return self.scale(c)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "arity": self.arity,
            "weights": [format_scalar(w) for w in self.weights],
            "order": self.order,
            "coeffs": [{"idx": list(k), "val": format_scalar(v)} for k, v in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> DensityOp:
        weights = tuple(parse_scalar(w) for w in data["weights"])
        if int(data["arity"]) != len(weights):
            raise ValueError("arity does not match the number of weights")
        coeffs = {tuple(c["idx"]): parse_scalar(c["val"]) for c in data["coeffs"]}
        return cls(weights, int(data["order"]), coeffs)


def target_weight(A: DensityOp):
    return A.target_weight


def scalar_op(weights: Sequence) -> DensityOp:
    """Pointwise product of the arguments; invariant for any arity."""
    return DensityOp(tuple(weights), 0, {(0,) * len(weights): 1}, "scal")


@dataclass(frozen=True)
class Permutation3:
    """Bijection of {1, 2, 3}; ``images[p-1]`` is the image of ``p``."""

    images: tuple[int, int, int]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != [1, 2, 3]:
            raise ValueError(f"not a permutation of (1, 2, 3): {imgs}")
        object.__setattr__(self, "images", imgs)

    def __call__(self, p: int) -> int:
        return self.images[p - 1]

    def __mul__(self, other: Permutation3) -> Permutation3:
        """Composition ``self o other``."""
        return Permutation3(tuple(self(other(p)) for p in (1, 2, 3)))

    def inverse(self) -> Permutation3:
        inv = [0, 0, 0]
        for p in (1, 2, 3):
            inv[self(p) - 1] = p
        return Permutation3(tuple(inv))

    @property
    def sign(self) -> int:
        s = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if self.images[i] > self.images[j]:
                    s = -s
        return s

    @classmethod
    def identity(cls) -> Permutation3:
        return cls((1, 2, 3))

    @classmethod
    def all(cls) -> list[Permutation3]:
        return [cls(p) for p in _perms((1, 2, 3))]


def permute(A: DensityOp, sigma: Permutation3) -> DensityOp:
    """``A^sigma``: the argument in new slot ``sigma(p)`` is fed to old slot ``p``.

    Weights move the same way, so ``A^sigma(y1, y2, y3) = A(y_sigma(1), y_sigma(2), y_sigma(3))``.
    """
    if A.arity != 3:
        raise SlotError("permute needs a ternary operator")
    weights = [None] * 3
    for p in (1, 2, 3):
        weights[sigma(p) - 1] = A.weights[p - 1]
    coeffs = {}
    for idx, v in A.coeffs.items():
        new = [0, 0, 0]
        for p in (1, 2, 3):
            new[sigma(p) - 1] = idx[p - 1]
        coeffs[tuple(new)] = v
    return DensityOp(tuple(weights), A.order, coeffs)


def reorder(A: DensityOp, *slots: int) -> DensityOp:
    """``B(y1, y2, y3) = A(y_slots[0], y_slots[1], y_slots[2])``."""
    return permute(A, Permutation3(slots))


def dualize(A: DensityOp, slot: int) -> DensityOp:
    """Formal adjoint in ``slot``: ``F_w`` there is replaced by ``F_{1-target}``.

    The derivatives on the dualized argument are moved onto the others by
    integration by parts; the new target weight is ``1 - w_slot``.
    """
    if not 1 <= slot <= A.arity:
        raise SlotError(f"slot must be in 1..{A.arity}, got {slot}")
    s = slot - 1
    others = [p for p in range(A.arity) if p != s]
    coeffs: dict[tuple[int, ...], object] = {}
    for idx, val in A.coeffs.items():
        m = idx[s]
        sign = -1 if m % 2 else 1
        # distribute m derivatives over the other arguments and the new density in slot s
        for parts in _compositions(m, A.arity):
            new = list(idx)
            new[s] = parts[s]
            for p in others:
                new[p] = idx[p] + parts[p]
            key = tuple(new)
            coeffs[key] = coeffs.get(key, 0) + sign * _multinomial(parts) * val
    weights = list(A.weights)
    weights[s] = 1 - A.target_weight
    return DensityOp(tuple(weights), A.order, coeffs)


def insert(outer: DensityOp, slot: int, inner: DensityOp) -> DensityOp:
    """Composition ``outer(..., inner(...), ...)`` with ``inner`` in ``slot``.

    The arguments of ``inner`` take the place of that slot, in order.
    """
    if not 1 <= slot <= outer.arity:
        raise SlotError(f"slot must be in 1..{outer.arity}, got {slot}")
    s = slot - 1
    if inner.target_weight != outer.weights[s]:
        raise CompositionError(
            f"inner target weight {inner.target_weight} != outer slot weight {outer.weights[s]}"
        )
    arity = outer.arity - 1 + inner.arity
    if arity > 3:
        raise CompositionError(f"composition would have arity {arity} > 3")
    coeffs: dict[tuple[int, ...], object] = {}
    for oidx, oval in outer.coeffs.items():
        m = oidx[s]
        for iidx, ival in inner.coeffs.items():
            # Leibniz rule for the m-th derivative of the inner product
            for parts in _compositions(m, inner.arity):
                mid = tuple(q + u for q, u in zip(iidx, parts))
                key = oidx[:s] + mid + oidx[s + 1:]
                coeffs[key] = coeffs.get(key, 0) + _multinomial(parts) * oval * ival
    weights = outer.weights[:s] + inner.weights + outer.weights[s + 1:]
    return DensityOp(weights, outer.order + inner.order, coeffs)


def binomial(n: int, k: int) -> int:
    """``C(n, k)``, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)
