import itertools
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from splitred.errors import NonUnit, TooLarge
from splitred.finite_field import FiniteField
from splitred.unitpowers import (
    EQUAL_CHAR_SUPPORT,
    NO,
    VALUATION_SCREEN,
    YES,
    TruncatedUnitRing,
    exhaustive_principal_search,
    mth_power_in_units,
    mth_power_vec,
    oracle_power_set,
    power_membership_oracle,
    power_membership_oracle_vec,
    principal_exponent,
    principal_membership_vec,
    principal_power_membership,
    rmul,
    rpow,
    unit_decompose,
    verify_witness,
    weight_screen,
)

from conftest import build


def test_principal_exponent():
    assert principal_exponent(2, 1) == 1
    assert principal_exponent(2, 3) == 4
    assert principal_exponent(3, 4) == 9


def test_weight_screen_when_binomials_vanish():
    # e_abs >= d: only the pure p^j-th power term can lead
    exact, floor = weight_screen(5, 2, 1, 5)
    assert floor == 5
    assert exact == {2: [(1, 2)], 4: [(2, 2)]}


def test_weight_screen_ties_give_floor():
    exact, floor = weight_screen(8, 2, 1, 2)
    assert floor == 4  # a = 2: weights 2+2 (binomial) and 4 (pure) tie at 4
    assert exact[2] == [(1, 2)]
    assert exact[5] == [(3, 1)]


def test_zeta3_principal_cube_screen(zeta3):
    R = TruncatedUnitRing(zeta3)
    tau, w = unit_decompose(zeta3.element("1+pi_L"), R)
    assert tau == 1
    v = principal_power_membership(w, 1, R)
    assert (v.answer, v.certificate) == (NO, VALUATION_SCREEN)
    # every principal cube is 1 modulo pi_L^2
    F = R.field
    cubes = oracle_power_set(F, 2, 3, principal=True)
    assert cubes.tolist() == [1]


def test_equal_char_support_and_witness():
    T = build(2, [("L", "t^5-pi_base")], characteristic=2)
    R = TruncatedUnitRing(T)
    v = principal_power_membership(T.element("1+pi_L^2"), 1, R)
    assert (v.answer, v.certificate) == (YES, EQUAL_CHAR_SUPPORT)
    assert R.witness_element(v) ** 2 == T.element("1+pi_L^2")
    assert verify_witness(v, R.field, R.reduce(T.element("1+pi_L^2")), 2)
    v = principal_power_membership(T.element("1+pi_L"), 1, R)
    assert v.answer == NO


def test_unit_decompose_teichmuller():
    T = build(2, [("L", "t^3-2")], residue_degree=2)
    R = TruncatedUnitRing(T)
    u = T.element("z*(1+pi_L)")
    tau, w = unit_decompose(u, R)
    assert tau ** 3 == 1
    assert w.residue() == 1
    assert tau * w == u
    with pytest.raises(NonUnit):
        unit_decompose(T.element("pi_L"), R)


def test_ring_must_be_adjacent():
    T = build(2, [("K", "t^3-2"), ("L", "t^2-pi_K")])
    with pytest.raises(ValueError):
        TruncatedUnitRing(T, K="base", L="L")
    assert TruncatedUnitRing(T).d == 2


def test_oracle_guard():
    F = FiniteField(3, degree=2)
    with pytest.raises(TooLarge):
        oracle_power_set(F, 8, 3, guard=1000)


def test_exhaustive_search_finds_squares():
    F = FiniteField(2)
    w = rpow(F, (1, 1, 0, 1), 2)
    wit, big, searched, blocked = exhaustive_principal_search(F, 4, 2, 1, w, s_max=1)
    assert wit is not None and rpow(big, wit, 2) == w


def test_torus_part_needs_extension():
    # 2 is not a square in F_3, but R answers over the algebraic closure
    F = FiniteField(3)
    v = mth_power_vec(F, 2, 3, (2, 0), 2, None)
    assert v.answer == YES
    assert v.witness_field.q == 9
    assert verify_witness(v, F, (2, 0), 2)


def _units(F, d):
    for tail in itertools.product(range(F.q), repeat=d - 1):
        for c0 in range(1, F.q):
            yield (c0,) + tail


def _coprime(n, p):
    """Smallest k > 1 prime to n and p: k-th powering is then a bijection on the torus."""
    k = 2
    while gcd(k, n) != 1 or k % p == 0:
        k += 1
    return k


@pytest.mark.parametrize("p, s, d", [(2, 1, 4), (2, 2, 3), (3, 1, 4), (3, 2, 2)])
@pytest.mark.parametrize("char", ["equal", "mixed"])
def test_solver_matches_oracle(p, s, d, char):
    F = FiniteField(p, degree=s)
    e_abs = None if char == "equal" else d
    for m in (p, p * p, p * _coprime(F.q - 1, p)):
        for u in _units(F, d):
            v = mth_power_vec(F, d, p, u, m, e_abs)
            if v.answer == "Inconclusive":
                continue
            assert (v.answer == YES) == power_membership_oracle_vec(F, d, u, m), (u, m)
            if v.answer == YES and v.witness is not None:
                assert verify_witness(v, F, u, m)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_powers_are_recognised(data):
    p = data.draw(st.sampled_from([2, 3]))
    s = data.draw(st.sampled_from([1, 2]))
    d = data.draw(st.integers(1, 5))
    F = FiniteField(p, degree=s)
    x = (data.draw(st.integers(1, F.q - 1)),) + tuple(data.draw(st.integers(0, F.q - 1)) for _ in range(d - 1))
    m = data.draw(st.sampled_from([p, p * p, 2 * p, 3 * p]))
    u = rpow(F, x, m)
    v = mth_power_vec(F, d, p, u, m, data.draw(st.sampled_from([None, d, 2 * d])))
    assert v.answer == YES
    if v.witness is not None:
        assert verify_witness(v, F, u, m)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_power_sets_are_subgroups(data):
    p = data.draw(st.sampled_from([2, 3]))
    d = data.draw(st.integers(2, 4))
    F = FiniteField(p)
    m = data.draw(st.sampled_from([p, p * p]))
    xs = [tuple([1] + [data.draw(st.integers(0, p - 1)) for _ in range(d - 1)]) for _ in range(2)]
    a, b = (rpow(F, x, m) for x in xs)
    assert principal_membership_vec(F, d, p, {p: 1, p * p: 2}[m], rmul(F, a, b), None).answer == YES


def test_tower_level_oracle_agrees(zeta3):
    R = TruncatedUnitRing(zeta3)
    for text in ("1+pi_L", "2+pi_L", "1", "2"):
        u = zeta3.element(text)
        v = mth_power_in_units(u, 3, R)
        assert (v.answer == YES) == power_membership_oracle(u, 3, R)
