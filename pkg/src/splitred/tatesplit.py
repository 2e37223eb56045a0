"""Tate curves over L and the reduction of their Weil restriction to K.

For q in L with n = v_L(q) > 0 the component group of the Tate curve is
Z/nZ. A point of order m in the component group lifts to the Néron model of
Res_{L/K} E exactly when pi_L^n / q is an m-th power in the units of
O_L / pi_K O_L; splitting is decided on the p-part of the component group.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import NotDivisor
from .localfield import RingElem, Tower
from .unitpowers import (
    INCONCLUSIVE,
    NO,
    YES,
    S_MAX,
    SIZE_GUARD,
    PowerMembershipVerdict,
    TruncatedUnitRing,
    mth_power_in_units,
)

SPLIT = "Split"
NOT_SPLIT = "NotSplit"
TOTALLY_NOT_SPLIT = "TotallyNotSplit"
STATUS_INCONCLUSIVE = "Inconclusive"


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class TateCurve:
    def __init__(self, tower: Tower, q: RingElem | str, K=None, L=None):
        self.tower = tower
        self.R = TruncatedUnitRing(tower, K, L)
        self.K, self.L = self.R.K, self.R.L
        if isinstance(q, str):
            q = tower.element(q, self.L)
        self.q = self.L.coerce(q)
        self.n = self.q.valuation()
        if self.n < 1:
            raise ValueError(f"v_L(q) = {self.n}; a Tate curve needs v_L(q) > 0")

    def __repr__(self):
        return f"TateCurve(q={self.q.to_expr()}, n={self.n})"

    @property
    def d(self) -> int:
        return self.R.d

    @property
    def p(self) -> int:
        return self.tower.p


def component_group_order(E: TateCurve) -> int:
    return E.n


def component_of_point(z: RingElem, E: TateCurve) -> int:
    """Class of the point z in L^x / q^Z inside Z/nZ."""
    return E.L.coerce(z).valuation() % E.n


def lifting_unit(E: TateCurve) -> RingElem:
    """pi_L^n / q, a unit whose m-th power membership decides lifting of order m."""
    return E.L.pi ** E.n / E.q


def lifts_order_m(E: TateCurve, m: int, s_max: int = S_MAX, guard: int = SIZE_GUARD) -> PowerMembershipVerdict:
    if m < 1 or E.n % m:
        raise NotDivisor(f"{m} does not divide n = {E.n}")
    return mth_power_in_units(lifting_unit(E), m, E.R, s_max, guard)


@dataclass(frozen=True)
class TateRestrictionReport:
    n: int
    p: int
    d: int
    p_valuation: int
    lifting_exponent: int | None
    status: str
    verdicts: tuple[tuple[int, PowerMembershipVerdict], ...]
    certificate: str
    witnesses: dict = dc_field(default_factory=dict, compare=False)

    @property
    def has_split_reduction(self) -> bool:
        return self.status == SPLIT

    @property
    def dimensions(self) -> dict:
        return {"dim_A": self.d, "toric_rank": 1, "unipotent_dim": self.d - 1}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "d": self.d,
            "component_group": f"Z/{self.n}Z",
            "v_p_n": self.p_valuation,
            "lifting_exponent": self.lifting_exponent,
            "status": self.status,
            "has_split_reduction": self.has_split_reduction,
            "certificate": self.certificate,
            "dimensions": self.dimensions,
            "verdicts": [
                {"m": m, **v.to_json(), "witness": self.witnesses.get(m)} for m, v in self.verdicts
            ],
        }


def status_from_exponent(r: int, j_star: int | None) -> str:
    if j_star is None:
        return STATUS_INCONCLUSIVE
    if j_star == r:
        return SPLIT
    if j_star == 0:
        return TOTALLY_NOT_SPLIT
    return NOT_SPLIT


def split_status(E: TateCurve, s_max: int = S_MAX, guard: int = SIZE_GUARD) -> TateRestrictionReport:
    p = E.p
    r = _vp(E.n, p)
    verdicts = []
    witnesses = {}
    j_star = 0
    certificate = "PrimeToP" if r == 0 else None
    for j in range(1, r + 1):
        m = p**j
        v = lifts_order_m(E, m, s_max, guard)
        verdicts.append((m, v))
        witnesses[m] = E.R.witness_expr(v)
        if v.answer == YES:
            j_star = j
            certificate = v.certificate
            continue
        certificate = v.certificate or "Inconclusive"
        if v.answer == INCONCLUSIVE:
            j_star = None
        break
    status = status_from_exponent(r, j_star)
    return TateRestrictionReport(
        n=E.n,
        p=p,
        d=E.d,
        p_valuation=r,
        lifting_exponent=j_star,
        status=status,
        verdicts=tuple(verdicts),
        certificate=certificate,
        witnesses=witnesses,
    )


__all__ = [
    "NOT_SPLIT",
    "NO",
    "SPLIT",
    "STATUS_INCONCLUSIVE",
    "TOTALLY_NOT_SPLIT",
    "TateCurve",
    "TateRestrictionReport",
    "component_group_order",
    "component_of_point",
    "lifting_unit",
    "lifts_order_m",
    "split_status",
    "status_from_exponent",
]
