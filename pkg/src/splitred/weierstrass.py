"""Weierstrass curves over a tower level, point arithmetic and two valuation analyses.

The analyses follow one point per non-trivial component: for type IV (p = 3)
the point P = (0, sqrt(a6)) and the valuation of z(3P); for type I0* (p = 2)
the three points (x_i, 0) on the roots of the cubic and the valuations of
z(2P_i). Both are cross-checked against direct group-law computation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    PrecisionExhausted,
    ResidueCollision,
    TableViolation,
    TorsionDegenerate,
    UnknownType,
)
from .localfield import Level, RingElem

MARGIN = 10
INFINITY = "Infinity"


# -- Kodaira types ------------------------------------------------------------
@dataclass(frozen=True)
class KodairaType:
    """``family`` is one of I, I*, II, III, IV, IV*, III*, II*; ``n`` only for I and I*."""

    family: str
    n: int = 0

    @property
    def additive(self) -> bool:
        return self.family != "I"

    @property
    def components(self) -> int:
        return {
            "I": self.n if self.n else 1,
            "I*": self.n + 5,
            "II": 1,
            "III": 2,
            "IV": 3,
            "IV*": 7,
            "III*": 8,
            "II*": 9,
        }[self.family]

    def __str__(self):
        if self.family == "I":
            return f"I{self.n}"
        if self.family == "I*":
            return f"I{self.n}*"
        return self.family


_TYPE_RE = re.compile(r"^I_?\{?(\d+)\}?(\^?\*)?$")


def parse_kodaira(text: str | KodairaType) -> KodairaType:
    if isinstance(text, KodairaType):
        return text
    s = str(text).strip().replace(" ", "")
    if s.lower() == "good":
        return KodairaType("I", 0)
    m = _TYPE_RE.match(s)
    if m:
        return KodairaType("I*" if m.group(2) else "I", int(m.group(1)))
    star = s.endswith("*")
    core = s.rstrip("*").rstrip("^")
    if core in ("II", "III", "IV"):
        return KodairaType(core + ("*" if star else ""))
    raise UnknownType(f"unknown Kodaira type {text!r}")


def ogg_discriminant(kind, delta: int, n: int | None = None) -> int:
    """v(Delta) = 2 + delta + (components - 1) for additive reduction."""
    t = parse_kodaira(kind)
    if n is not None and t.family == "I*":
        t = KodairaType("I*", n)
    if not t.additive:
        raise UnknownType(f"type {t} is not additive")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return 2 + delta + t.components - 1


# -- curves and points --------------------------------------------------------------
@dataclass(frozen=True)
class CurvePoint:
    x: RingElem | None
    y: RingElem | None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(O)"
        return f"CurvePoint({self.x.to_expr()}, {self.y.to_expr()})"


O = CurvePoint(None, None)


class WeierstrassCurve:
    def __init__(self, level: Level, a1=0, a2=0, a3=0, a4=0, a6=0, margin: int = MARGIN):
        self.level = level

        def conv(a):
            if isinstance(a, str):
                return level.tower.element(a, level)
            return level.coerce(a)

        self.a1, self.a2, self.a3, self.a4, self.a6 = (conv(a) for a in (a1, a2, a3, a4, a6))
        self.margin = margin
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        self.discriminant = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if self.discriminant.is_zero:
            raise PrecisionExhausted("discriminant is 0 at working precision")

    def __repr__(self):
        coeffs = ", ".join(f"{n}={getattr(self, n).to_expr()}" for n in ("a1", "a2", "a3", "a4", "a6"))
        return f"WeierstrassCurve({coeffs})"

    def equation_residual(self, P: CurvePoint) -> RingElem:
        x, y = P.x, P.y
        return y * y + self.a1 * x * y + self.a3 * y - (x**3 + self.a2 * x * x + self.a4 * x + self.a6)

    def contains(self, P: CurvePoint) -> bool:
        return P.is_infinity or self.equation_residual(P).is_zero

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(self.level.coerce(x), self.level.coerce(y))
        if not self.contains(P):
            raise ValueError("point does not satisfy the curve equation")
        return P

    # -- group law ------------------------------------------------------------
    def negate(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def _check(self, t: RingElem, what: str) -> RingElem:
        if not t.is_zero and t.relprec < self.margin:
            raise PrecisionExhausted(f"{what} keeps only {t.relprec} digits (margin {self.margin})")
        return t

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        dx = x2 - x1
        if dx.is_zero:
            if (y1 + y2 + a1 * x2 + a3).is_zero:
                return O
            if not (y1 - y2).is_zero:
                raise PrecisionExhausted("cannot decide whether the points are equal or opposite")
            den = 2 * y1 + a1 * x1 + a3
            if den.is_zero:
                return O
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
            nu = (-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1) / den
        else:
            lam = (y2 - y1) / dx
            nu = (y1 * x2 - y2 * x1) / dx
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(self._check(x3, "x"), self._check(y3, "y"))

    def multiply(self, P: CurvePoint, n: int) -> CurvePoint:
        if n < 0:
            return self.multiply(self.negate(P), -n)
        R = O
        while n:
            if n & 1:
                R = self.add(R, P)
            n >>= 1
            if n:
                P = self.add(P, P)
        return R

    def double_x(self, x: RingElem) -> RingElem:
        """x(2P) = (x^4 - b4 x^2 - 2 b6 x - b8) / (4 x^3 + b2 x^2 + 2 b4 x + b6)."""
        num = x**4 - self.b4 * x * x - 2 * self.b6 * x - self.b8
        den = 4 * x**3 + self.b2 * x * x + 2 * self.b4 * x + self.b6
        return num / den

    def is_short_b8(self) -> bool:
        """With a1 = a3 = 0, b8 = 4 a2 a6 - a4^2."""
        return self.b8 == 4 * self.a2 * self.a6 - self.a4 * self.a4


def add_points(E: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return E.add(P, Q)


def z_parameter(P: CurvePoint) -> RingElem:
    if P.is_infinity:
        raise ValueError("z is not defined at the point at infinity")
    if P.y.is_zero:
        raise PrecisionExhausted("y(P) is 0 at working precision")
    return -P.x / P.y


def z_valuation(P: CurvePoint) -> int:
    z = z_parameter(P)
    if z.is_zero:
        raise PrecisionExhausted(f"z(P) is 0 modulo pi^{z.prec}")
    return z.valuation()


def en_membership(P: CurvePoint, n: int) -> bool:
    """Is P in E^n(L), i.e. v(x/y) >= n?"""
    if P.is_infinity:
        return True
    z = z_parameter(P)
    if z.is_zero:
        if z.prec >= n:
            return True
        raise PrecisionExhausted(f"z(P) is 0 modulo pi^{z.prec} < pi^{n}")
    return z.valuation() >= n


def _v(a: RingElem) -> float:
    return float("inf") if a.is_zero else a.valuation()


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise TableViolation(message)


def hensel_sqrt(a: RingElem) -> RingElem:
    """Square root in an odd residue characteristic, by Newton iteration on the unit part."""
    lv = a.level
    F = lv.tower.residue_field
    if F.p == 2:
        raise ValueError("Hensel square roots need p odd")
    if a.is_zero:
        raise PrecisionExhausted("cannot take the square root of 0 at this precision")
    v = a.valuation()
    if v % 2:
        raise TableViolation("odd valuation: not a square")
    u = a / lv.pi**v
    r = F.sqrt(u.residue())
    if r is None:
        raise TableViolation("residue is not a square in the residue field")
    y = lv.lift(r)
    steps = 0
    while not (y * y - u).is_zero:
        y = (y + u / y) / 2
        steps += 1
        if steps > 64:
            raise PrecisionExhausted("Hensel iteration did not converge")
    return lv.pi ** (v // 2) * y


# -- type IV -------------------------------------------------------------------
@dataclass(frozen=True)
class TypeIVReport:
    v_b8: int
    m: int
    split_E: bool
    d: int | None
    res_split: bool | None
    z3_valuation: int
    x3_valuation: int
    consistent: bool
    point: str

    def res_split_at(self, d: int) -> bool:
        return self.m >= d

    def to_json(self) -> dict:
        return {
            "type": "IV",
            "v_b8": self.v_b8,
            "m": self.m,
            "split_E": self.split_E,
            "d": self.d,
            "res_split": self.res_split,
            "z_3P_valuation": self.z3_valuation,
            "x_3P_valuation": self.x3_valuation,
            "closed_form_matches": self.consistent,
            "point": self.point,
        }


def analyze_type_IV(E: WeierstrassCurve, d: int | None = None) -> TypeIVReport:
    tower = E.level.tower
    if tower.p != 3:
        raise TableViolation("type IV analysis needs p = 3")
    _require(E.a1.is_zero and E.a3.is_zero, "a1 = a3 = 0")
    _require(_v(E.a2) >= 1, "v(a2) >= 1")
    _require(_v(E.a4) >= 2, "v(a4) >= 2")
    _require(_v(E.a6) == 2, "v(a6) = 2")
    if not E.is_short_b8():
        raise ArithmeticError("b8 differs from 4 a2 a6 - a4^2")
    if E.b8.is_zero:
        raise TorsionDegenerate("b8 = 0: P = (0, sqrt(a6)) is 3-torsion")
    v_b8 = E.b8.valuation()
    m = v_b8 - 3
    y0 = hensel_sqrt(E.a6)
    P = CurvePoint(E.level.zero(E.level.cap + 1), y0)
    P2 = E.add(P, P)
    A = E.add(P2, P)
    B = E.add(P, P2)
    if A.is_infinity or B.is_infinity:
        raise TorsionDegenerate("3P = O")
    if not ((A.x - B.x).is_zero and (A.y - B.y).is_zero):
        raise ArithmeticError("2P + P and P + 2P disagree")
    z3 = z_valuation(A)
    x3 = A.x.valuation()
    consistent = z3 == m and x3 == 6 - 2 * v_b8
    return TypeIVReport(
        v_b8=v_b8,
        m=m,
        split_E=m >= 1,
        d=d,
        res_split=None if d is None else m >= d,
        z3_valuation=z3,
        x3_valuation=x3,
        consistent=consistent,
        point=f"(0, {y0.to_expr()})",
    )


# -- type I0* ---------------------------------------------------------------------
@dataclass(frozen=True)
class TypeI0StarReport:
    m: tuple  # int or INFINITY per point
    direct: tuple  # v(z(2P_i)) or INFINITY
    consistent: bool
    status_E: str
    d: int | None
    status_Res: str | None
    roots: tuple[str, ...]

    def status_res_at(self, d: int) -> str:
        return threshold_status(self.m, d)

    def to_json(self) -> dict:
        return {
            "type": "I0*",
            "m": [str(x) if x == INFINITY else x for x in self.m],
            "z_2P_valuations": [str(x) if x == INFINITY else x for x in self.direct],
            "closed_form_matches": self.consistent,
            "status_E": self.status_E,
            "d": self.d,
            "status_Res": self.status_Res,
            "component_group": "Z/2Z x Z/2Z",
            "roots": list(self.roots),
        }


def threshold_status(ms, t: int) -> str:
    """Split iff every m_i >= t, TotallyNotSplit iff every m_i < t, else NotSplit."""
    vals = [float("inf") if x == INFINITY else x for x in ms]
    if min(vals) >= t:
        return "Split"
    if max(vals) < t:
        return "TotallyNotSplit"
    return "NotSplit"


def _cubic_roots(E: WeierstrassCurve):
    """Roots x_i = pi * alpha_i of x^3 + a2 x^2 + a4 x + a6, alphas with distinct residues."""
    lv = E.level
    F = lv.tower.residue_field
    pi = lv.pi
    c2 = E.a2 / pi
    c1 = E.a4 / pi**2
    c0 = E.a6 / pi**3
    red = [c.residue() for c in (c0, c1, c2)]

    def g_res(a):
        acc = 1
        for c in (red[2], red[1], red[0]):
            acc = F.add(F.mul(acc, a), c)
        return acc

    roots = [a for a in range(F.q) if g_res(a) == 0]
    # check multiplicity via the derivative: a repeated residue root is a collision
    def dg_res(a):
        return F.add(F.add(F.mul(3 % F.p, F.mul(a, a)), F.mul(F.mul(2 % F.p, red[2]), a)), red[1])

    if len(roots) < 3 or any(dg_res(a) == 0 for a in roots):
        if len(roots) == 0 or any(dg_res(a) == 0 for a in roots):
            raise ResidueCollision("the reduced cubic has a repeated root")
        raise TableViolation("the reduced cubic does not split over the residue field")
    out = []
    for r in roots:
        alpha = lv.lift(r)
        for _ in range(64):
            g = alpha**3 + c2 * alpha * alpha + c1 * alpha + c0
            if g.is_zero:
                break
            dg = 3 * alpha * alpha + 2 * c2 * alpha + c1
            alpha = alpha - g / dg
        else:
            raise PrecisionExhausted("Newton iteration for a cubic root did not converge")
        out.append(pi * alpha)
    return out


def analyze_type_I0star(E: WeierstrassCurve, d: int | None = None) -> TypeI0StarReport:
    tower = E.level.tower
    if tower.p != 2:
        raise TableViolation("type I0* analysis needs p = 2")
    for name, bound in (("a1", 1), ("a2", 1), ("a3", 2), ("a4", 2), ("a6", 3),
                        ("b2", 2), ("b4", 3), ("b6", 4), ("b8", 4)):
        _require(_v(getattr(E, name)) >= bound, f"v({name}) >= {bound}")
    roots = _cubic_roots(E)
    ms, direct = [], []
    for x in roots:
        P = CurvePoint(x, E.level.zero(E.level.cap + 1))
        t = E.a1 * x + E.a3
        if t.is_zero:
            ms.append(INFINITY)
        else:
            ms.append(t.valuation() - 2)
        Q = E.add(P, P)
        direct.append(INFINITY if Q.is_infinity else z_valuation(Q))
    consistent = ms == direct
    return TypeI0StarReport(
        m=tuple(ms),
        direct=tuple(direct),
        consistent=consistent,
        status_E=threshold_status(ms, 1),
        d=d,
        status_Res=None if d is None else threshold_status(ms, d),
        roots=tuple(x.to_expr() for x in roots),
    )
