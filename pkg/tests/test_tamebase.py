from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from splitred import tamebase as tb
from splitred.errors import DenominatorNotPrimeToP, InconsistentWithE, InputInconsistent, NotDivisor, NotTame

ADDITIVE = ["II", "III", "IV", "I0*", "I1*", "I2*", "IV*", "III*", "II*"]


@pytest.mark.parametrize("kind, e", [("I5", 1), ("I0*", 2), ("I3*", 2), ("IV", 3), ("IV*", 3), ("III", 4),
                                     ("III*", 4), ("II", 6), ("II*", 6)])
def test_stabilization_table(kind, e):
    assert tb.elliptic_stabilization_index(kind) == e


def test_stabilization_bound():
    assert tb.max_elliptic_stabilization_index() == 6


def test_rescale_and_phi():
    assert tb.stabilization_rescale(6, 2) == 3
    with pytest.raises(NotDivisor):
        tb.stabilization_rescale(6, 4)
    with pytest.raises(NotTame):
        tb.stabilization_rescale(6, 3, p=3)
    assert tb.tame_phi_order(2, 1, 5) == 10
    assert tb.tame_phi_order(7, 0, 5) == 7
    with pytest.raises(NotTame):
        tb.tame_phi_order(2, 1, 4, p=2)


@given(st.integers(1, 12), st.integers(1, 30), st.sampled_from([2, 3, 5, 7]))
def test_jacobian_certificate_threshold(e, d, p):
    if d % p == 0:
        with pytest.raises(NotTame):
            tb.jacobian_split_certificate(e, d, p)
        return
    expected = tb.SPLIT_GUARANTEED if d > e else tb.NO_GUARANTEE
    assert tb.jacobian_split_certificate(e, d, p) == expected


def _L_for(kind):
    # minimal [L:K] consistent with the component-group exponent
    return tb.elliptic_stabilization_index(kind)


@pytest.mark.parametrize("kind", ADDITIVE)
@pytest.mark.parametrize("p", [5, 7, 11])
def test_elliptic_split_after_large_degree(kind, p):
    L = _L_for(kind)
    for d in range(L + 1, 13):
        if d % p == 0:
            continue
        assert tb.elliptic_split_after(kind, L, None, None, d, p).result == tb.SPLIT


def test_elliptic_small_cases():
    dec = tb.elliptic_split_after("II", 2, 0, 2, 3, 5)
    assert dec.result == tb.SPLIT and dec.branch == "tame_delta"
    assert tb.elliptic_split_after("I0*", 2, None, None, 3, 5).branch == "stabilization_index"
    assert tb.elliptic_split_after("I4", 1, None, None, 2, 5).branch == "semi_abelian"
    assert tb.elliptic_split_after("III", 4, None, None, 3, 5).result == tb.NO_GUARANTEE
    with pytest.raises(InputInconsistent):
        tb.elliptic_split_after("II", 2, 1, 3, 3, 5)
    with pytest.raises(InputInconsistent):
        tb.elliptic_split_after("IV", 2, None, None, 3, 5)
    with pytest.raises(InputInconsistent):
        tb.elliptic_split_after("II", 6, 1, 5, 7, 5)  # Ogg mismatch
    with pytest.raises(InputInconsistent):
        tb.elliptic_split_after("I3", 2, None, None, 5, 7)
    with pytest.raises(InputInconsistent):
        tb.elliptic_split_after("III", 1, None, None, 5, 7)
    with pytest.raises(NotTame):
        tb.elliptic_split_after("II", 6, None, None, 10, 5)


def test_jumps_summary():
    s = tb.jumps_summary(["0", "1/3", "2/3"], 2, 3)
    assert (s.u, s.lcm_denominator) == (2, 3)
    assert tb.jumps_summary([Fraction(1, 2)], 3).lcm_denominator == 2
    with pytest.raises(DenominatorNotPrimeToP):
        tb.jumps_summary(["1/2"], 2)
    with pytest.raises(InconsistentWithE):
        tb.jumps_summary(["1/3"], 2, 4)
    with pytest.raises(ValueError):
        tb.jumps_summary(["1"], 2)


def test_certificates():
    datum = tb.ReductionDatum.from_dict({"p": 3, "phi_order": 4, "kodaira": "III", "L_degree": 4, "extra": 1})
    names = [c.name for c in tb.tame_split_certificates(datum)]
    assert names == ["phi_prime_to_p", "elliptic_tame"]
    assert tb.tame_split_certificates(tb.ReductionDatum(p=1))[0].name == "residue_characteristic_zero"
    wild = tb.ReductionDatum(p=2, phi_order=4, kodaira="III", L_degree=4)
    assert tb.tame_split_certificates(wild) == []
    torus = tb.ReductionDatum(p=5, genus=2, abelian_toric_rank=0, tame=True, semi_abelian=True)
    assert [c.name for c in tb.tame_split_certificates(torus)] == ["semi_abelian_reduction", "tame_toric_rank_zero"]
