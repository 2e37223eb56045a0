"""Truncated towers of complete discrete valuation rings.

A tower is an unramified base (``W(F_q)`` truncated at ``p^M`` in mixed
characteristic, ``F_q[[T]]`` truncated at ``T^M`` in equal characteristic)
followed by Eisenstein extensions. Elements carry capped-relative precision:
a nonzero element is ``pi^val * unit`` with the unit known modulo
``pi^(prec - val)``; an element whose known digits all vanish is
*indistinguishable from zero* and only remembers ``prec``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import expr as _expr
from ._rings import EisensteinLayer, UnramifiedEqual, UnramifiedMixed
from .errors import (
    DivisionByIndistinguishableZero,
    IndistinguishableFromZero,
    InsufficientPrecision,
    NonEisenstein,
    NonUnit,
    PrecisionExhausted,
    UnsupportedExtensionShape,
)
from .finite_field import FiniteField

DEFAULT_PRECISION = 40


@dataclass(frozen=True)
class LevelSpec:
    name: str
    poly: str | None = None
    coeffs: tuple[str, ...] | None = None  # low to high, leading coefficient included

    def text(self) -> str:
        if self.poly is not None:
            return self.poly
        if not self.coeffs:
            raise ValueError(f"level {self.name!r} has neither poly nor coeffs")
        return " + ".join(f"({c})*t^{i}" for i, c in enumerate(self.coeffs))


@dataclass(frozen=True)
class TowerSpec:
    characteristic: int
    p: int
    residue_degree: int = 1
    residue_poly: tuple[int, ...] | None = None
    precision: int = DEFAULT_PRECISION
    base_name: str = "base"
    levels: tuple[LevelSpec, ...] = dc_field(default_factory=tuple)

    @classmethod
    def from_dict(cls, d: dict) -> "TowerSpec":
        levels = []
        for lv in d.get("levels", []):
            coeffs = lv.get("coeffs")
            levels.append(LevelSpec(lv["name"], lv.get("poly"), tuple(coeffs) if coeffs is not None else None))
        rp = d.get("residue_poly")
        return cls(
            characteristic=int(d["characteristic"]),
            p=int(d["p"]),
            residue_degree=int(d.get("residue_degree", 1)),
            residue_poly=tuple(int(c) for c in rp) if rp is not None else None,
            precision=int(d.get("precision", DEFAULT_PRECISION)),
            base_name=d.get("base_name", "base"),
            levels=tuple(levels),
        )

    def with_precision(self, precision: int) -> "TowerSpec":
        return TowerSpec(
            self.characteristic, self.p, self.residue_degree, self.residue_poly,
            precision, self.base_name, self.levels,
        )


class Level:
    """One ring of the tower; level 0 is the unramified base."""

    def __init__(self, tower, index, name, ring, degree, prev=None, poly=None):
        self.tower = tower
        self.index = index
        self.name = name
        self.ring = ring
        self.degree = degree
        self.prev = prev
        self.poly = poly  # RingElem coefficients at prev, low to high, monic
        self.cap = ring.cap
        self.ramification = degree * (prev.ramification if prev is not None else 1)
        self.pi = RingElem(self, 1, ring.one, 1 + ring.cap)
        self.one = RingElem(self, 0, ring.one, ring.cap)
        # eps = pi_prev / pi^e as a raw unit; p_unit = p / pi^e_abs (mixed characteristic)
        self._eps = self._eps_inv = None
        self._p_unit = ring.one
        if prev is not None:
            self._init_units()

    def _init_units(self):
        # pi^e = -(a_0 + ... + a_{e-1} pi^{e-1}) with a_j = pi_prev * u_j gives
        # pi_prev / pi^e = -1 / (u_0 + u_1 pi + ... + u_{e-1} pi^{e-1})
        ring, prev = self.ring, self.prev
        s = ring.zero
        pij = ring.one
        for a in self.poly[: self.degree]:
            u = a / prev.pi
            if not u.is_zero:
                s = ring.add(s, ring.mul(ring.embed(u.raw()), pij))
            pij = ring.mul_pi(pij, 1)
        self._eps_inv = ring.neg(s)
        self._eps = ring.unit_inverse(self._eps_inv)
        if prev.e_abs is not None:
            self._p_unit = ring.mul(ring.embed(prev._p_unit), ring.pow(self._eps, prev.e_abs))

    def __repr__(self):
        return f"Level({self.name!r}, degree={self.degree})"

    @property
    def e_abs(self) -> int | None:
        """v(p) at this level in mixed characteristic, None in equal characteristic."""
        return self.ring.e_abs

    def zero(self, prec: int | None = None) -> "RingElem":
        return RingElem(self, 0, None, self.cap if prec is None else prec)

    def from_raw(self, raw, prec: int | None = None) -> "RingElem":
        """Element from an integral raw value known modulo pi^prec."""
        prec = self.cap if prec is None else min(prec, self.cap)
        v = self.ring.valuation(raw)
        if v is None or v >= prec:
            return RingElem(self, 0, None, prec)
        return RingElem(self, v, self.ring.shift(raw, v), prec)

    def from_int(self, n: int) -> "RingElem":
        """Exact image of an integer: p^k u becomes pi^(k e_abs) * (p_unit^k u)."""
        e_abs = self.e_abs
        if n == 0 or e_abs is None:
            return self.from_raw(self.ring.scalar(n))
        p = self.tower.p
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        val = k * e_abs
        unit = self.ring.scalar(n)
        if k:
            unit = self.ring.mul(unit, self.ring.pow(self._p_unit, k))
        return RingElem(self, val, unit, val + self.cap)

    def lift(self, c: int) -> "RingElem":
        """Naive lift of a residue-field element (coordinates as small integers)."""
        return self.from_raw(self.ring.lift(c))

    def z(self) -> "RingElem":
        return teichmuller_lift(self.tower.residue_field.gen, self)

    def coerce(self, x) -> "RingElem":
        if isinstance(x, RingElem):
            if x.level is self:
                return x
            if x.level.tower is not self.tower:
                raise ValueError("elements belong to different towers")
            if x.level.index > self.index:
                raise ValueError(f"cannot view an element of {x.level.name!r} inside {self.name!r}")
            return x.embed(self)
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to a tower element")

    def below(self) -> list["Level"]:
        out, lv = [], self
        while lv is not None:
            out.append(lv)
            lv = lv.prev
        return out[::-1]


class Tower:
    def __init__(self, spec: TowerSpec, field: FiniteField, levels: list[Level]):
        self.spec = spec
        self.characteristic = spec.characteristic
        self.p = spec.p
        self.residue_field = field
        self.precision = spec.precision
        self.levels = levels
        self.levels_by_name = {lv.name: lv for lv in levels}
        self._teich: dict[tuple[int, int], RingElem] = {}

    def __repr__(self):
        names = " < ".join(lv.name for lv in self.levels)
        return f"Tower(char={self.characteristic}, p={self.p}, q={self.residue_field.q}, {names})"

    @property
    def mixed(self) -> bool:
        return self.characteristic == 0

    @property
    def base(self) -> Level:
        return self.levels[0]

    @property
    def top(self) -> Level:
        return self.levels[-1]

    def level(self, key) -> Level:
        if isinstance(key, Level):
            return key
        if isinstance(key, int):
            return self.levels[key]
        try:
            return self.levels_by_name[key]
        except KeyError:
            raise KeyError(f"no level named {key!r}") from None

    def element(self, text: str, level=None) -> "RingElem":
        return parse_element(text, self, self.top if level is None else level)


class RingElem:
    """Element ``pi^val * unit`` of a tower level, exact modulo ``pi^prec``.

    ``unit`` is None when the element is indistinguishable from zero.
    ``==`` means the difference is indistinguishable from zero.
    """

    __slots__ = ("level", "val", "unit", "prec")

    def __init__(self, level: Level, val: int, unit, prec: int):
        self.level = level
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- inspection -------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.unit is None

    @property
    def relprec(self) -> int:
        return 0 if self.unit is None else self.prec - self.val

    def valuation(self) -> int:
        if self.unit is None:
            raise IndistinguishableFromZero(f"element is 0 modulo pi_{self.level.name}^{self.prec}")
        return self.val

    def raw(self):
        """Integral raw value (meaningful modulo pi^prec)."""
        ring = self.level.ring
        if self.unit is None:
            return ring.zero
        if self.val < 0:
            raise NonUnit("element is not integral")
        return ring.mul_pi(self.unit, self.val)

    def residue(self) -> int:
        if self.unit is None:
            if self.prec < 1:
                raise IndistinguishableFromZero("residue unknown at this precision")
            return 0
        if self.val < 0:
            raise NonUnit("element is not integral")
        if self.val > 0:
            return 0
        return self.level.ring.residue(self.unit)

    def with_precision(self, prec: int) -> "RingElem":
        """Truncate to absolute precision ``prec`` (never increases it)."""
        if prec >= self.prec:
            return self
        if self.unit is None or self.val >= prec:
            return RingElem(self.level, 0, None, prec)
        return RingElem(self.level, self.val, self.unit, prec)

    def embed(self, target: Level) -> "RingElem":
        chain = target.below()[self.level.index + 1 :]
        val, unit, prec = self.val, self.unit, self.prec
        for lv in chain:
            e = lv.degree
            if unit is None:
                prec *= e
                continue
            rel = prec - val
            ring = lv.ring
            unit = ring.embed(unit)
            if val:
                unit = ring.mul(unit, ring.pow(lv._eps if val > 0 else lv._eps_inv, abs(val)))
            val *= e
            prec = val + min(e * rel, lv.cap)
        return RingElem(target, val, unit, prec)

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.level is self.level:
                return self, other
            if other.level.index < self.level.index:
                return self, self.level.coerce(other)
            return other.level.coerce(self), other
        if isinstance(other, int):
            return self, self.level.from_int(other)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._add(b)

    __radd__ = __add__

    def _add(self, b):
        lv = self.level
        ring = lv.ring
        prec = min(self.prec, b.prec)
        if self.unit is None or b.unit is None:
            x = b if self.unit is None else self
            if x.unit is None or x.val >= prec:
                return RingElem(lv, 0, None, prec)
            return RingElem(lv, x.val, x.unit, prec)
        m = min(self.val, b.val)
        prec = min(prec, m + lv.cap)
        x = ring.add(ring.mul_pi(self.unit, self.val - m), ring.mul_pi(b.unit, b.val - m))
        r = ring.valuation(x)
        if r is None or r >= prec - m:
            return RingElem(lv, 0, None, prec)
        return RingElem(lv, m + r, ring.shift(x, r), prec)

    def __neg__(self):
        if self.unit is None:
            return self
        return RingElem(self.level, self.val, self.level.ring.neg(self.unit), self.prec)

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._add(-b)

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b._add(-a)

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._mul(b)

    __rmul__ = __mul__

    def _mul(self, b):
        lv = self.level
        if self.unit is None and b.unit is None:
            return RingElem(lv, 0, None, self.prec + b.prec)
        if self.unit is None:
            return RingElem(lv, 0, None, self.prec + b.val)
        if b.unit is None:
            return RingElem(lv, 0, None, b.prec + self.val)
        val = self.val + b.val
        rel = min(self.relprec, b.relprec)
        return RingElem(lv, val, lv.ring.mul(self.unit, b.unit), val + rel)

    def inverse(self) -> "RingElem":
        if self.unit is None:
            raise DivisionByIndistinguishableZero(f"division by 0 modulo pi_{self.level.name}^{self.prec}")
        inv = self.level.ring.unit_inverse(self.unit)
        return RingElem(self.level, -self.val, inv, -self.val + self.relprec)

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a._mul(b.inverse())

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b._mul(a.inverse())

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        lv = self.level
        if n == 0:
            return lv.one
        if self.unit is None:
            if n < 0:
                raise DivisionByIndistinguishableZero("negative power of an element indistinguishable from 0")
            return RingElem(lv, 0, None, self.prec * n)
        base = self if n > 0 else self.inverse()
        n = abs(n)
        val = base.val * n
        return RingElem(lv, val, lv.ring.pow(base.unit, n), val + base.relprec)

    def __eq__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return (a - b).is_zero

    __hash__ = None

    # -- printing -------------------------------------------------------------
    def to_expr(self) -> str:
        if self.unit is None:
            return "0"
        lv = self.level
        if self.val >= 0:
            return _format_raw(lv, lv.ring.mul_pi(self.unit, self.val), self.prec)
        body = _format_raw(lv, self.unit, self.relprec)
        return f"pi_{lv.name}^({self.val})*({body})"

    __str__ = to_expr

    def __repr__(self):
        return f"RingElem({self.to_expr()} @ {self.level.name}, prec={self.prec})"


def _balanced(x: int, mod: int) -> int:
    x %= mod
    return x - mod if 2 * x > mod else x


def _term(coef: str, mono: str) -> str:
    if not mono:
        return coef
    if coef == "1":
        return mono
    if coef == "-1":
        return f"-{mono}"
    if any(ch in coef for ch in "+-") and not coef.lstrip("-").isdigit():
        coef = f"({coef})"
    return f"{coef}*{mono}"


def _format_raw(lv: Level, raw, prec: int) -> str:
    """Expression for an integral raw value, keeping only digits below ``prec``."""
    terms = _raw_terms(lv, raw, prec)
    return _join(terms) if terms else "0"


def _join(terms: list[str]) -> str:
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _raw_terms(lv: Level, raw, prec: int) -> list[str]:
    tower = lv.tower
    ring = lv.ring
    if lv.prev is None:
        F = tower.residue_field
        if tower.mixed:
            # digits of p-adic integers below p^ceil(prec)
            mod = tower.p ** min(prec, ring.M)
            terms = []
            for k, x in enumerate(raw):
                c = _balanced(x, mod)
                if c:
                    mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                    terms.append(_term(str(c), mono))
            return terms
        terms = []
        for k, c in enumerate(raw[: min(prec, ring.M)]):
            if c:
                mono = "" if k == 0 else (f"pi_{lv.name}" if k == 1 else f"pi_{lv.name}^{k}")
                terms.append(_term(F.format(c), mono))
        return terms
    e = lv.degree
    terms = []
    for j, c in enumerate(raw):
        # coefficient c_j contributes digits e*v + j; keep those below prec
        sub_prec = -(-(prec - j) // e)
        if sub_prec <= 0:
            continue
        inner = _raw_terms(lv.prev, c, sub_prec)
        if not inner:
            continue
        coef = _join(inner)
        mono = "" if j == 0 else (f"pi_{lv.name}" if j == 1 else f"pi_{lv.name}^{j}")
        if not mono and len(inner) > 1:
            terms.extend(inner)
        else:
            terms.append(_term(coef, mono))
    return terms


# -- construction ---------------------------------------------------------------
def _residue_field(spec: TowerSpec) -> FiniteField:
    if spec.residue_poly is not None:
        return FiniteField(spec.p, spec.residue_poly, spec.residue_degree)
    return FiniteField(spec.p, degree=spec.residue_degree)


def _reduced_degrees(spec: TowerSpec, field: FiniteField) -> list[int]:
    names = [spec.base_name]
    degrees = []
    for lv in spec.levels:
        node = _expr.parse(lv.text())
        red = _expr.reduced_polynomial(node, field, names)
        while len(red) > 1 and red[-1] == 0:
            red.pop()
        deg = len(red) - 1
        if deg < 1 or red[-1] == 0:
            raise NonEisenstein(lv.name, 0, "polynomial vanishes modulo the maximal ideal")
        for j in range(deg):
            if red[j] != 0:
                raise NonEisenstein(lv.name, j, "coefficient is a unit (valuation 0)")
        degrees.append(deg)
        names.append(lv.name)
    return degrees


def make_tower(spec: TowerSpec | dict) -> Tower:
    """Build and validate a tower. Raises NonEisenstein or InsufficientPrecision."""
    if isinstance(spec, dict):
        spec = TowerSpec.from_dict(spec)
    if spec.characteristic not in (0, spec.p):
        raise ValueError("characteristic must be 0 or p")
    if spec.precision < 1:
        raise ValueError("precision must be positive")
    names = [spec.base_name] + [lv.name for lv in spec.levels]
    if len(set(names)) != len(names):
        raise ValueError("level names must be distinct")
    field = _residue_field(spec)
    degrees = _reduced_degrees(spec, field)
    E = 1
    for d in degrees:
        E *= d
    M = max(1, -(-spec.precision // E))
    base_ring = UnramifiedMixed(field, M) if spec.characteristic == 0 else UnramifiedEqual(field, M)
    tower = Tower(spec, field, [])
    base = Level(tower, 0, spec.base_name, base_ring, 1)
    tower.levels.append(base)
    tower.levels_by_name[base.name] = base
    prev = base
    for i, (lvspec, deg) in enumerate(zip(spec.levels, degrees), start=1):
        coeffs = _expr.parse_polynomial(lvspec.text(), prev)
        _check_eisenstein(lvspec.name, coeffs, deg)
        ring = EisensteinLayer(prev.ring, [c.raw() for c in coeffs[:deg]])
        lv = Level(tower, i, lvspec.name, ring, deg, prev, tuple(coeffs))
        tower.levels.append(lv)
        tower.levels_by_name[lv.name] = lv
        prev = lv
    return tower


def _check_eisenstein(name: str, coeffs: Sequence[RingElem], deg: int) -> None:
    if len(coeffs) - 1 != deg:
        raise NonEisenstein(name, len(coeffs) - 1, "leading coefficient is not a unit")
    lead = coeffs[-1] - 1
    if not lead.is_zero:
        raise NonEisenstein(name, deg, "polynomial is not monic")
    for j in range(deg):
        c = coeffs[j]
        if c.is_zero:
            if c.prec < 1 or (j == 0 and c.prec < 2):
                raise InsufficientPrecision(f"level {name!r}: coefficient of t^{j} is 0 at precision {c.prec}")
            if j == 0:
                raise NonEisenstein(name, 0, "constant term has valuation >= 2")
            continue
        v = c.valuation()
        if v < 1:
            raise NonEisenstein(name, j, f"valuation {v}, need >= 1")
        if j == 0 and v != 1:
            raise NonEisenstein(name, 0, f"constant term has valuation {v}, need exactly 1")


# -- operations -----------------------------------------------------------------
def val(a: RingElem) -> int:
    return a.valuation()


def residue(a: RingElem) -> int:
    return a.residue()


def teichmuller_lift(c: int, level: Level) -> RingElem:
    """The (q-1)-th root of unity (or 0) lifting residue ``c``, viewed at ``level``."""
    tower = level.tower
    key = (c, level.index)
    hit = tower._teich.get(key)
    if hit is not None:
        return hit
    base = tower.base
    ring = base.ring
    q = tower.residue_field.q
    x = ring.lift(c)
    for _ in range(ring.cap + 2):
        y = ring.pow(x, q)
        if y == x:
            break
        x = y
    out = level.coerce(base.from_raw(x))
    tower._teich[key] = out
    return out


def different_valuation(tower: Tower, level) -> int:
    """v(f'(pi)) for the Eisenstein polynomial f defining ``level`` over its predecessor."""
    lv = tower.level(level)
    if lv.prev is None:
        raise ValueError("the base level has no defining polynomial")
    e = lv.degree
    pi = lv.pi
    total = lv.zero(lv.cap + 1)
    for j in range(1, e + 1):
        c = lv.coerce(lv.poly[j]) * j
        total = total + c * pi ** (j - 1)
    if total.is_zero:
        raise PrecisionExhausted(f"f'(pi_{lv.name}) is 0 at precision {total.prec}")
    return total.valuation()


def _is_binomial(lv: Level) -> bool:
    return all(c.is_zero for c in lv.poly[1:-1])


def conjugate(a: RingElem, zeta: RingElem) -> RingElem:
    """Apply the automorphism pi -> zeta*pi of a binomial extension t^e - c."""
    lv = a.level
    if lv.prev is None or not _is_binomial(lv):
        raise UnsupportedExtensionShape(f"level {lv.name!r} is not defined by a binomial polynomial")
    zeta = lv.prev.coerce(zeta)
    if not (zeta ** lv.degree - 1).is_zero or zeta.is_zero or zeta.val != 0:
        raise ValueError("zeta^e != 1 at working precision")
    if a.unit is None:
        return a
    P = lv.prev.ring
    zraw = zeta.raw()
    coords = []
    zj = P.one
    for c in a.unit:
        coords.append(P.mul(c, zj))
        zj = P.mul(zj, zraw)
    unit = RingElem(lv, 0, tuple(coords), a.relprec)
    return unit * lv.coerce(zeta) ** a.val * RingElem(lv, a.val, lv.ring.one, a.val + lv.cap)


@dataclass(frozen=True)
class RootOfUnityResult:
    answer: str  # "Yes" or "NoWithinModel"
    order: int | None
    searched_p_power: int


def max_p_power_roots(level: Level) -> int:
    """Largest a such that a primitive p^a-th root of unity can lie in ``level``."""
    tower = level.tower
    if not tower.mixed:
        return 0
    e_abs = level.e_abs
    p = tower.p
    a = 0
    while e_abs % (p ** a * (p - 1)) == 0:
        a += 1
    return a


def is_root_of_unity_heuristic(u: RingElem, max_p_power: int | None = None) -> RootOfUnityResult:
    """Test u^((q-1) p^a) == 1 for a <= A at working precision."""
    if u.is_zero or u.val != 0:
        raise NonUnit("root-of-unity test needs a unit")
    lv = u.level
    q = lv.tower.residue_field.q
    p = lv.tower.p
    A = max_p_power_roots(lv)
    if max_p_power is not None:
        A = min(A, max_p_power)
    e = lv.e_abs
    for a in range(A + 1):
        N = (q - 1) * p**a
        x = u**N - 1
        if x.is_zero:
            return RootOfUnityResult("Yes", _minimal_order(u, N), A)
        # past v > e/(p-1) the logarithm is injective, so no further p-power can reach 1
        if e is not None and x.valuation() * (p - 1) > e:
            break
    return RootOfUnityResult("NoWithinModel", None, A)


def _minimal_order(u: RingElem, N: int) -> int:
    from .finite_field import prime_factors

    n = N
    for ell in prime_factors(N):
        while n % ell == 0 and (u ** (n // ell) - 1).is_zero:
            n //= ell
    return n


def parse_element(text: str, tower: Tower, level=None) -> RingElem:
    lv = tower.top if level is None else tower.level(level)
    return _expr.parse_element(text, lv)


__all__ = [
    "DEFAULT_PRECISION",
    "Level",
    "LevelSpec",
    "RingElem",
    "RootOfUnityResult",
    "Tower",
    "TowerSpec",
    "conjugate",
    "different_valuation",
    "is_root_of_unity_heuristic",
    "make_tower",
    "max_p_power_roots",
    "parse_element",
    "residue",
    "teichmuller_lift",
    "val",
]
