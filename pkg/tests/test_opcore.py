from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fractions, weight_triples
from transvect.catalog import d_of, delta3, deRham, grozman, poisson, poisson_of, times, xi
from transvect.densities import WeightedDensity, apply_op, oracle_invariant, poly_deriv, poly_mul
from transvect.invariance import in_kernel
from transvect.opcore import (
    CompositionError, DensityOp, Permutation3, SlotError, dualize, insert, multi_indices, permute, reorder,
    scalar_op, target_weight,
)

F = Fraction
perms = st.sampled_from(Permutation3.all())


@st.composite
def ternary_ops(draw, max_order=4):
    k = draw(st.integers(0, max_order))
    w = draw(weight_triples())
    idx = multi_indices(3, k)
    vals = draw(st.lists(st.integers(-5, 5), min_size=len(idx), max_size=len(idx)))
    return DensityOp(w, k, dict(zip(idx, vals)))


def test_target_weight_examples():
    assert target_weight(delta3(F(1), F(2), F(3))) == 9
    assert target_weight(xi(F(1))) == F(7, 2)
    assert scalar_op((F(1, 2), F(1, 3), F(1, 5))).target_weight == F(31, 30)


def test_normalization():
    A = DensityOp((1, 2), 2, {(2, 0): 0, (1, 1): 3})
    assert A.coeffs == {(1, 1): 3}
    assert A.weights == (F(1), F(2))
    with pytest.raises(ValueError):
        DensityOp((0, 0), 2, {(1, 0): 1})
    assert DensityOp((0, 0), 1, {}).degenerate


def test_json_round_trip():
    A = delta3(F(1, 2), F(-2, 3), F(5))
    data = A.to_dict()
    assert data["arity"] == 3 and data["weights"] == ["1/2", "-2/3", "5"]
    assert [c["idx"] for c in data["coeffs"]] == sorted(c["idx"] for c in data["coeffs"])
    assert DensityOp.from_dict(data) == A


def test_permutation_group():
    s = Permutation3((2, 3, 1))
    assert s * s.inverse() == Permutation3.identity()
    assert s.sign == 1 and Permutation3((2, 1, 3)).sign == -1
    with pytest.raises(ValueError):
        Permutation3((1, 1, 2))


def test_permute_identity_and_transposition():
    A = times(poisson(F(1, 2), F(3)), F(-1))
    assert permute(A, Permutation3.identity()) == A
    # {y2, y1} y3 = -{y1, y2} y3 as operators on (y1, y2, y3)
    swapped = permute(A, Permutation3((2, 1, 3)))
    assert swapped == -times(poisson(F(3), F(1, 2)), F(-1))
    assert swapped.weights == (F(3), F(1, 2), F(-1))


@given(ternary_ops(), perms, perms)
def test_permute_composition_law(A, s, t):
    assert permute(permute(A, t), s) == permute(A, s * t)


def _mono_args(degs, weights):
    return [WeightedDensity((0,) * d + (1,), w) for d, w in zip(degs, weights)]


@given(ternary_ops(), perms, st.tuples(*[st.integers(0, 5)] * 3))
def test_permute_moves_arguments(A, s, degs):
    args = _mono_args(degs, A.weights)
    new_args = [None] * 3
    for p in (1, 2, 3):
        new_args[s(p) - 1] = args[p - 1]
    assert apply_op(permute(A, s), new_args).coeffs == apply_op(A, args).coeffs


def test_dualize_scalar_op():
    l, g, t = F(1, 2), F(2), F(-1, 3)
    D = dualize(scalar_op((l, g, t)), 1)
    assert D.weights == (1 - l - g - t, g, t)
    assert D.coeffs == {(0, 0, 0): 1}


@given(ternary_ops(), st.integers(1, 3))
def test_dualize_is_an_involution(A, slot):
    D = dualize(A, slot)
    assert D.order == A.order
    assert D.target_weight == 1 - A.weights[slot - 1]
    assert dualize(D, slot) == A


def test_dualize_bad_slot():
    with pytest.raises(SlotError):
        dualize(scalar_op((0, 0, 0)), 4)


def _integrate01(p) -> Fraction:
    return sum(F(c) / (i + 1) for i, c in enumerate(p))


def _bump(m, n):
    # x^m (1 - x)^n, vanishing to high order at both ends of [0, 1]
    p = (0,) * m + (1,)
    for _ in range(n):
        p = poly_mul(p, (1, -1))
    return p


@given(ternary_ops(max_order=3), st.integers(1, 3), st.integers(0, 3), st.integers(0, 3))
def test_dualize_is_the_formal_adjoint(A, slot, m1, m2):
    # int_0^1 w * A(f1, f2, f3) == int_0^1 f_slot * A*(..., w, ...) when f_slot and w vanish at 0 and 1
    s = slot - 1
    k = A.order
    polys = [_bump(m1 + k, k + 1), (1, 2, 3), (2, 0, 1)]
    polys[s], polys[0] = polys[0], polys[s]
    w_poly = _bump(k + 1, m2 + k)
    args = [WeightedDensity(p, w) for p, w in zip(polys, A.weights)]
    lhs = _integrate01(poly_mul(w_poly, apply_op(A, args).coeffs))
    D = dualize(A, slot)
    dual_args = list(args)
    dual_args[s] = WeightedDensity(w_poly, D.weights[s])
    rhs = _integrate01(poly_mul(polys[s], apply_op(D, dual_args).coeffs))
    assert lhs == rhs


def test_dualized_bracket_stays_invariant():
    A = times(poisson(F(2), F(1, 3)), F(-1, 2))
    for slot in (1, 2, 3):
        assert in_kernel(dualize(A, slot))


def test_insert_derivative_into_d():
    # d o d is rejected on weights; a plain derivative on F_1 composes to the second derivative
    with pytest.raises(CompositionError):
        insert(deRham(), 1, deRham())
    outer = DensityOp((F(1),), 1, {(1,): 1})
    assert insert(outer, 1, deRham()).coeffs == {(2,): 1}


def test_insert_d_of_bracket():
    with pytest.raises(CompositionError):
        d_of(poisson(F(1), F(1)))
    op = poisson_of(d_of(poisson(F(1), F(-2))), F(3))
    assert op.weights == (1, -2, 3) and op.order == 3
    assert oracle_invariant(op)


def test_insert_multiply_by_density():
    m = F(-2, 3)
    op = times(grozman(), m)
    assert op.weights == (m, m, m)
    assert op.coeffs == {(3, 0, 0): 2, (2, 1, 0): 3, (1, 2, 0): -3, (0, 3, 0): -2}
    with pytest.raises(CompositionError):
        insert(scalar_op((F(5, 3), m, m)), 1, grozman())


def test_insert_weight_mismatch():
    with pytest.raises(CompositionError):
        insert(poisson(F(1), F(0)), 1, grozman())


@st.composite
def binary_ops(draw):
    k = draw(st.integers(0, 3))
    w = draw(st.tuples(fractions(), fractions()))
    idx = multi_indices(2, k)
    vals = draw(st.lists(st.integers(-4, 4), min_size=len(idx), max_size=len(idx)))
    return DensityOp(w, k, dict(zip(idx, vals)))


@given(binary_ops(), binary_ops(), st.integers(1, 2), st.tuples(*[st.integers(0, 5)] * 3))
def test_insert_is_composition(inner, outer_template, slot, degs):
    ws = list(outer_template.weights)
    ws[slot - 1] = inner.target_weight
    outer = DensityOp(tuple(ws), outer_template.order, outer_template.coeffs)
    C = insert(outer, slot, inner)
    w = C.weights
    args = _mono_args(degs, w)
    s = slot - 1
    inner_val = apply_op(inner, args[s:s + 2])
    outer_args = args[:s] + [inner_val] + args[s + 2:]
    assert apply_op(C, args).coeffs == apply_op(outer, outer_args).coeffs


def test_reorder_matches_permute():
    A = delta3(F(1), F(2), F(3))
    assert reorder(A, 2, 3, 1) == permute(A, Permutation3((2, 3, 1)))


def test_poly_deriv_helper():
    assert poly_deriv((1, 1, 1, 1), 2) == (2, 6)
