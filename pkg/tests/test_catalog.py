from fractions import Fraction

import pytest

from transvect.catalog import (
    CATALOG, DomainError, binary_catalog, d_of, delta3, deRham, ff_d_delta3_minus1, ff_delta3, ff_delta3_ddd,
    ff_theta, ff_upsilon, gamma_op, grozman, poisson, poisson_of, theorem_representatives, times, xi, xi_st,
)
from transvect.densities import WeightedDensity, apply_op, monomial, oracle_invariant
from transvect.invariance import classify, in_kernel, match_catalog
from transvect.opcore import Permutation3, permute, reorder
from transvect.scalars import SQRT21, kappa

F = Fraction


def test_deRham_table():
    d = deRham()
    assert d.weights == (0,) and d.order == 1 and d.coeffs == {(1,): 1}


def test_poisson_examples():
    assert poisson(F(0), F(0)).degenerate
    assert poisson(F(2), F(5)).coeffs == {(1, 0): 5, (0, 1): -2}
    out = apply_op(poisson(F(1), F(1)), [monomial(1, 1), monomial(0, 1)])
    assert out == WeightedDensity((1,), 3)
    out = apply_op(poisson(F(1), F(1)), [monomial(2, 1), monomial(1, 1)])
    assert out == WeightedDensity((0, 0, 1), 3)


def test_binary_tables():
    m = F(-2, 3)
    assert grozman().coeffs == {(3, 0): 2, (2, 1): 3, (1, 2): -3, (0, 3): -2}
    assert grozman().weights == (m, m) and grozman().target_weight == F(5, 3)
    lam = F(2, 7)
    c = binary_catalog("ord2_c", (lam, -lam - 1))
    assert c.coeffs == {(0, 2): -lam, (1, 1): -(2 * lam + 1), (2, 0): -(lam + 1)}
    assert binary_catalog("ord3_a", (0, 0)).coeffs == {(1, 2): 1, (2, 1): -1}


def test_binary_domain_errors():
    with pytest.raises(DomainError):
        binary_catalog("grozman", (0, 0))
    with pytest.raises(DomainError):
        binary_catalog("ord2_c", (1, 1))
    with pytest.raises(KeyError):
        binary_catalog("nope", (0, 0))


def test_delta_lam_3_is_the_signature_table():
    A = ff_delta3(F(3, 4))
    for idx in A.coeffs:
        assert sorted(idx) == [0, 1, 2]
    assert len(A.coeffs) == 6
    assert A.coeff((0, 1, 2)) == 1 and A.coeff((1, 0, 2)) == -1 and A.coeff((2, 0, 1)) == 1


def test_upsilon_and_theta_entries():
    assert ff_upsilon().coeff((0, 2, 4)) == F(5, 2)
    assert ff_upsilon().coeff((0, 4, 2)) == F(-5, 2)
    assert ff_upsilon().coeff((1, 2, 3)) == 2
    assert ff_theta(-1).coeff((0, 2, 3)) == 2 * (-SQRT21 - 4)
    assert ff_theta(1).coeff((0, 2, 3)) == 2 * (SQRT21 - 4)
    assert ff_theta(1).weights == (kappa(1),) * 3


@pytest.mark.parametrize("make", [lambda: ff_delta3(F(-1, 3)), ff_upsilon, lambda: ff_theta(1),
                                  lambda: ff_theta(-1), ff_d_delta3_minus1, ff_delta3_ddd])
def test_feigin_fuchs_tables_alternate(make):
    A = make()
    for s in Permutation3.all():
        assert permute(A, s) == A.scale(s.sign)


def test_delta3_entries():
    A = delta3(F(1), F(2), F(3))
    assert A.coeff((1, 1, 1)) == -2
    assert A.coeff((0, 3, 0)) == -30
    assert A.target_weight == 9
    assert in_kernel(A)


@pytest.mark.parametrize("lam", [F(0), F(-1, 2), F(-2, 3), F(1), F(2), F(-3), F(1, 3), F(5, 7), F(-7, 4), F(9, 2)])
def test_delta3_on_equal_weights(lam):
    factor = -lam * (1 + 2 * lam) ** 2 * (2 + 3 * lam)
    assert delta3(lam, lam, lam) == ff_delta3(lam).scale(factor)


@pytest.mark.parametrize("lam, tau", [(F(1), F(3)), (F(-1, 3), F(2)), (F(2, 5), F(-7, 3)), (F(4), F(1, 2)),
                                      (F(-5, 2), F(-1, 4))])
def test_delta3_on_dual_line(lam, tau):
    gam = -1 - lam
    bracket = poisson_of(d_of(poisson(lam, gam)), tau)
    assert delta3(lam, gam, tau) == bracket.scale((tau - lam) * (1 + lam + tau))


def test_delta_minus_two_thirds_is_sum_of_grozman_insertions():
    m = F(-2, 3)
    gz = times(grozman(), m)
    total = gz + reorder(gz, 3, 1, 2) + reorder(gz, 2, 3, 1)
    A = ff_delta3(m)
    ratio = total.coeff((0, 1, 2)) / A.coeff((0, 1, 2))
    assert ratio != 0 and total == A.scale(ratio)


def test_xi_entries():
    assert xi(F(1)).coeff((0, 4, 0)) == -5
    assert xi(F(1)).target_weight == F(7, 2)
    for t in (F(1), F(-2), F(3, 5)):
        assert xi(t).coeff((4, 0, 0)) == 0
    with pytest.raises(DomainError):
        xi(F(-3, 4))
    A = xi_st(1, 0)
    assert A.coeff((0, 4, 0)) == 1 and A.coeff((4, 0, 0)) == 0 and A.coeff((1, 2, 1)) == F(20, 9)


@pytest.mark.parametrize("tau", [F(1), F(-2), F(3, 5), F(7), F(-1, 6)])
def test_xi_in_kernel(tau):
    assert in_kernel(xi(tau))


@pytest.mark.parametrize("s, t", [(1, 0), (0, 1), (2, -3), (F(1, 2), F(5, 7))])
def test_xi_st_in_kernel(s, t):
    assert in_kernel(xi_st(s, t))


def test_gamma_entries_and_oracle():
    G = gamma_op()
    assert G.coeff((0, 0, 5)) == F(2, 5)
    assert G.coeff((2, 2, 1)) == F(9, 2)
    assert in_kernel(G)
    assert oracle_invariant(G, max_power=6)


def test_theta_oracle_over_extension():
    assert oracle_invariant(ff_theta(-1), bound=6)


def test_representative_examples():
    reps = theorem_representatives(3, (0, 0, 0))
    assert len(reps) == 4
    assert theorem_representatives(6, (F(-5, 4),) * 3) == [ff_upsilon()]
    assert theorem_representatives(5, (kappa(1),) * 3) == [ff_theta(1)]
    assert theorem_representatives(4, (F(1), F(2), F(3))) == []
    with pytest.raises(ValueError):
        theorem_representatives(7, (0, 0, 0))


CASE_WEIGHTS = {
    1: [(0, 0, 0), (1, 1, 1), (0, 1, 1), (1, 2, 3)],
    2: [(0, 0, 1), (1, 2, 3), (0, 0, 0)],
    3: [(0, 0, 0), (0, 1, 2), (F(-2, 3),) * 3, (F(-1, 2),) * 3, (2, 2, -3), (1, 2, 3)],
    4: [(0, 0, 0), (0, 0, 3), (-2, 0, -2), (1, 0, 2), (F(-2, 3), F(-2, 3), 2), (-1, F(-2, 3), F(-2, 3)),
        (F(-5, 2), 1, 1), (F(-3, 4),) * 3],
    5: [(0, 0, 0), (0, 0, -2), (0, 0, 1), (F(-2, 3), F(-2, 3), 0), (F(-5, 2), 0, 1),
        (F(-2, 3), F(-2, 3), F(-4, 3))],
    6: [(0, 0, 0), (0, 0, F(-5, 2)), (F(-5, 4),) * 3],
}


@pytest.mark.parametrize("k, w", [(k, w) for k, ws in CASE_WEIGHTS.items() for w in ws])
def test_representatives_span_kernel(k, w):
    w = tuple(F(x) for x in w)
    K = classify(k, w)
    reps = theorem_representatives(k, w)
    assert reps and all(in_kernel(r) for r in reps)
    assert match_catalog(K, reps).spans


def test_grozman_bracket_excluded_at_minus_one():
    # the {Gz, chi} row is listed only for tau != -1; the kernel there is still computed, not guessed
    assert theorem_representatives(4, (F(-2, 3), F(-2, 3), F(-1))) == []


def test_registry():
    for name, e in CATALOG.items():
        op = e.build(weights=e.example)
        assert op.arity == e.arity and op.order == e.order
        if op.arity == 3:
            assert in_kernel(op), name
        d = e.to_dict()
        assert set(d) == {"name", "arity", "order", "weight_domain", "locus", "params", "example_weights"}
    with pytest.raises(DomainError):
        CATALOG["gamma_op"].build(weights=(F(0),) * 3)
    with pytest.raises(DomainError):
        CATALOG["ff_delta3"].build(weights=(F(0), F(1), F(1)))
