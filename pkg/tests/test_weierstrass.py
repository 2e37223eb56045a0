import pytest
from hypothesis import assume, given, settings, strategies as st

from splitred.errors import (
    PrecisionExhausted,
    ResidueCollision,
    TableViolation,
    TorsionDegenerate,
    UnknownType,
)
from splitred.weierstrass import (
    INFINITY,
    O,
    CurvePoint,
    KodairaType,
    WeierstrassCurve,
    analyze_type_I0star,
    analyze_type_IV,
    en_membership,
    hensel_sqrt,
    ogg_discriminant,
    parse_kodaira,
    threshold_status,
    z_valuation,
)

from conftest import build

T5 = build(5, [("L", "t^2-5")], precision=40)


@pytest.mark.parametrize(
    "text, family, n",
    [("I0*", "I*", 0), ("I_4^*", "I*", 4), ("IV*", "IV*", 0), ("good", "I", 0), ("I7", "I", 7), ("III", "III", 0)],
)
def test_parse_kodaira(text, family, n):
    assert parse_kodaira(text) == KodairaType(family, n)


def test_parse_kodaira_rejects():
    with pytest.raises(UnknownType):
        parse_kodaira("V")


@pytest.mark.parametrize("kind, delta, expected", [("II", 1, 3), ("III", 1, 4), ("III*", 1, 10), ("II*", 1, 11),
                                                  ("I4*", 12, 22), ("I0*", 0, 6), ("IV", 0, 4)])
def test_ogg(kind, delta, expected):
    assert ogg_discriminant(kind, delta) == expected


def test_ogg_needs_additive():
    with pytest.raises(UnknownType):
        ogg_discriminant("I3", 0)


@st.composite
def curve_with_points(draw):
    L = T5.top
    r = st.integers(-6, 6)
    a1, a2, a3 = (L.from_int(draw(r)) for _ in range(3))
    xs = draw(st.lists(st.integers(0, 4), min_size=2, max_size=2, unique=True))
    x1, x2 = (L.from_int(x) + L.pi * draw(r) for x in xs)
    y1, y2 = (L.from_int(draw(r)) for _ in range(2))

    def F(x, y):
        return y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x

    a4 = (F(x1, y1) - F(x2, y2)) / (x1 - x2)
    a6 = F(x1, y1) - a4 * x1
    try:
        E = WeierstrassCurve(L, a1, a2, a3, a4, a6)
    except PrecisionExhausted:
        assume(False)
    return E, E.point(x1, y1), E.point(x2, y2)


@settings(max_examples=40, deadline=None)
@given(curve_with_points())
def test_group_law(data):
    E, P, Q = data
    try:
        S = E.add(P, Q)
        assert E.contains(S)
        assert E.add(Q, P) == S
        assert E.add(P, E.negate(P)) is O
        assert E.add(E.add(P, Q), P) == E.add(P, E.add(Q, P))
        P2 = E.add(P, P)
        if not P2.is_infinity:
            assert P2.x == E.double_x(P.x)
            assert E.multiply(P, 3) == E.add(P2, P)
    except PrecisionExhausted:
        assume(False)


def test_hensel_sqrt():
    T = build(3, [("L", "t^2-3")])
    a = T.element("pi_L^2*(1+pi_L)")
    r = hensel_sqrt(a)
    assert r * r == a
    with pytest.raises(TableViolation):
        hensel_sqrt(T.element("pi_L^3"))
    with pytest.raises(TableViolation):
        hensel_sqrt(T.element("2"))


def test_en_membership():
    T = build(3, [("L", "t^2-3")])
    L = T.top
    P = CurvePoint(T.element("pi_L^-2"), T.element("pi_L^-3"))
    assert z_valuation(P) == 1
    assert en_membership(P, 1) and not en_membership(P, 2)
    assert en_membership(O, 5)
    del L


# -- type IV -------------------------------------------------------------------------
T3 = build(3, [("L", "t^2-3")])


@pytest.mark.parametrize("a2, a4, vb8", [("pi_L", "pi_L^2", 3), ("pi_L^2", "pi_L^3", 4), ("pi_L^3", "pi_L^3", 5)])
def test_type_iv(a2, a4, vb8):
    E = WeierstrassCurve(T3.top, 0, a2, 0, a4, "pi_L^2")
    rep = analyze_type_IV(E, 2)
    assert rep.v_b8 == vb8
    assert rep.consistent
    assert rep.split_E == (vb8 >= 4)
    assert rep.res_split == (vb8 - 3 >= 2)


def test_type_iv_table_and_torsion():
    L = T3.top
    with pytest.raises(TableViolation):
        analyze_type_IV(WeierstrassCurve(L, 0, "pi_L", 0, "pi_L^2", "pi_L^3"))
    with pytest.raises(TorsionDegenerate):
        analyze_type_IV(WeierstrassCurve(L, 0, 0, 0, 0, "pi_L^2"))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(2, 4), st.integers(1, 8), st.integers(1, 8), st.integers(1, 8))
def test_type_iv_closed_form(al, be, u2, u4, s):
    assume(u2 % 3 and u4 % 3 and s % 3)
    L = T3.top
    E = WeierstrassCurve(L, 0, T3.element(f"{u2}*pi_L^{al}"), 0, T3.element(f"{u4}*pi_L^{be}"),
                         T3.element(f"pi_L^2*{s}^2"))
    try:
        rep = analyze_type_IV(E)
    except (TorsionDegenerate, PrecisionExhausted):
        assume(False)
    assert rep.consistent
    assert rep.z3_valuation == rep.v_b8 - 3


# -- type I0* ------------------------------------------------------------------------
T2 = build(2, [("L", "t^2-2")], residue_degree=2)


def i0star_curve(alphas, a1="pi_L", a3="pi_L^2"):
    L = T2.top
    xs = [L.pi * a for a in alphas]
    a2 = -(xs[0] + xs[1] + xs[2])
    a4 = xs[0] * xs[1] + xs[0] * xs[2] + xs[1] * xs[2]
    a6 = -(xs[0] * xs[1] * xs[2])
    return WeierstrassCurve(L, T2.element(a1) if isinstance(a1, str) else a1, a2,
                            T2.element(a3) if isinstance(a3, str) else a3, a4, a6)


def test_i0star_example():
    L = T2.top
    E = i0star_curve([L.from_int(0), L.one, L.z()])
    rep = analyze_type_I0star(E, 3)
    assert rep.m == (0, 2, 0)
    assert rep.consistent
    assert rep.status_E == "NotSplit"
    assert rep.status_Res == "TotallyNotSplit"
    assert rep.status_res_at(2) == "NotSplit"


def test_i0star_collision():
    L = T2.top
    with pytest.raises(ResidueCollision):
        analyze_type_I0star(i0star_curve([L.one, L.one + L.pi, L.z()]))


def test_threshold_status():
    assert threshold_status((1, 2, INFINITY), 1) == "Split"
    assert threshold_status((0, 0, 1), 2) == "TotallyNotSplit"
    assert threshold_status((0, 3, 1), 2) == "NotSplit"


@settings(max_examples=25, deadline=None)
@given(st.permutations([0, 1, 2, 3]), st.integers(0, 3), st.integers(0, 3))
def test_i0star_closed_form(perm, c1, c3):
    L = T2.top
    roots = [L.from_int(0), L.one, L.z(), L.z() * L.z()]
    alphas = [roots[i] + L.pi * c1 for i in perm[:3]]
    a3 = L.pi**2 * roots[c3] + L.pi**3
    try:
        rep = analyze_type_I0star(i0star_curve(alphas, a3=a3))
    except PrecisionExhausted:
        assume(False)
    assert rep.consistent
