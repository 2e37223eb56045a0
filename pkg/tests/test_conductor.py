import pytest
from hypothesis import given, strategies as st

from splitred import conductor as cd
from splitred.errors import DegreeGuard, NegativeResult, NonIntegralBound, NotTame
from splitred.localfield import different_valuation

from conftest import build


def _lambda_bruteforce(n, p):
    digits, i = 0, 0
    total = 0
    while n:
        n, r = divmod(n, p)
        total += i * r * p**i
        i += 1
    return total


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 5, 7]))
def test_lambda_definition(n, p):
    assert cd.lambda_p(n, p) == _lambda_bruteforce(n, p)
    # sum over digits of i*r_i*p^i vanishes exactly on n < p
    assert (cd.lambda_p(n, p) == 0) == (n < p)


@pytest.mark.parametrize("n, p, value", [(0, 2, 0), (1, 2, 0), (3, 2, 2), (10, 3, 18), (4, 2, 8)])
def test_lambda_values(n, p, value):
    assert cd.lambda_p(n, p) == value


@pytest.mark.parametrize("v", [1, 2, 3, 7])
def test_bound_instances(v):
    assert cd.bk_bound(2, v, 0, 2) == 6 * v
    assert cd.bk_bound(3, v, 0, 1) == 3 * v


@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(0, 6), st.integers(0, 6))
def test_bound_is_linear_in_v(p, v, d_t, two_da):
    assert cd.bk_bound(p, v, d_t, two_da) == v * cd.bk_bound(p, 1, d_t, two_da)


def test_bound_integrality():
    assert cd.bk_bound(2, 1, 1, 2.0) == cd.bk_bound(2, 1, 1, 2)
    with pytest.raises(NonIntegralBound):
        cd.bk_bound(2, 1, 1, 1.5)


def test_swan_weil_restriction_guards():
    assert cd.swan_weil_restriction(2, 5, 2, 2) == 10
    with pytest.raises(DegreeGuard):
        cd.swan_weil_restriction(2, 5, 2, 4)
    assert cd.swan_weil_restriction(2, 5, 2, 4, unsafe_degree=True) == 10
    with pytest.raises(NegativeResult):
        cd.swan_weil_restriction(0, 0, 3)


def test_simple_identities():
    assert cd.swan_norm_torus(3) == 2
    assert cd.swan_tate_from_norm_torus(2) == 4
    assert cd.swan_tame_scaling(2, 3, 2) == 6
    with pytest.raises(NotTame):
        cd.swan_tame_scaling(2, 4, 2)
    assert cd.equal_char_swan_family(2, 2, 3) == 2 + 12 - 1
    assert cd.equal_char_swan_family(0, 3, 1) == 4


@pytest.mark.parametrize("d", [2, 3, 4])
def test_quadratic_pipeline(d):
    T = build(2, [("K", f"t^{d}-2"), ("L", "t^2-pi_K"), ("M", "t^2+pi_L*t+pi_L")])
    assert different_valuation(T, "L") == 2 * d + 1
    rep = cd.weil_restriction_pipeline(T, "L", norm_torus_level="M").to_json()
    assert rep["delta_norm_torus"] == 1
    assert rep["delta_E"] == 2
    assert rep["delta_A"] == 2 + 4 * d


@pytest.mark.parametrize(
    "p, levels, vKp",
    [
        (2, [("L", "t^2-2")], 1),
        (3, [("L", "t^3-3")], 1),
        (3, [("K", "t^2+3*t+3"), ("L", "t^3-pi_K")], 2),
    ],
)
def test_kummer_pipeline_attains_bound(p, levels, vKp):
    T = build(p, levels)
    rep = cd.weil_restriction_pipeline(T, "L", delta_E=0, d_t=1, two_da=0).to_json()
    assert rep["v_different"] == p * vKp + p - 1
    assert rep["delta_A"] == 2 * p * vKp == rep["bk_bound"]
    assert rep["bound_attained"] and rep["bound_respected"]


def test_pipeline_input_errors():
    T = build(2, [("L", "t^2-2")])
    with pytest.raises(ValueError):
        cd.weil_restriction_pipeline(T, "base", delta_E=0)
    with pytest.raises(ValueError):
        cd.weil_restriction_pipeline(T, "L")


def test_elliptic_validators():
    assert cd.validate_elliptic_bounds("TotallyNotSplit", 3).passed
    assert not cd.validate_elliptic_bounds("TotallyNotSplit", 4).passed
    assert not cd.validate_elliptic_bounds("TotallyNotSplit", 0).passed
    assert cd.validate_elliptic_bounds("NotSplit", 5, "I2*").passed
    v = cd.validate_elliptic_bounds("NotSplit", 6, "I2*")
    assert not v.passed and v.violated == ["delta <= 5"]
    assert not cd.validate_elliptic_bounds("NotSplit", 1, "I1*").passed
    with pytest.raises(ValueError):
        cd.validate_elliptic_bounds("Maybe", 1)


def test_quotient_torus_validator():
    assert cd.quotient_torus_threshold(1, 1, 2) == 2
    assert cd.validate_quotient_torus(1, 1, "TotallyNotSplit", 1, 2).passed
    assert not cd.validate_quotient_torus(1, 2, "NotSplit", 1, 2).passed
    assert cd.validate_quotient_torus(1, 2, "Split", 1, 2).passed
    assert cd.validate_quotient_torus(2, 5, "NotSplit", 1, 3).to_json()["verdict"] == "Fail"
