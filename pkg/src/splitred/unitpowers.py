"""Power membership in the unit group of R = O_L / pi_K O_L.

R is a ring of characteristic p isomorphic to k[t]/(t^d) (t the image of
pi_L), so all decisions happen on coefficient vectors of length d over the
residue field. Answers use algebraically-closed-residue-field semantics:
``Yes`` means u is an m-th power after extending the residue field.

Decision layers for principal units w and exponent p^j:

* j = 0: trivially Yes.
* equal characteristic: support criterion (w - 1 supported on multiples of p^j).
* mixed characteristic: a weight screen on v((1+y)^(p^j) - 1), peeling leading
  terms while they are reachable, with tied weight minima treated only as a
  lower bound for what is reachable.
* exhaustive search over residue extensions.
* otherwise Inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from . import _kernels
from .errors import InsufficientPrecision, NonUnit, TooLarge
from .finite_field import MAX_ORDER, FiniteField
from .localfield import Level, RingElem, Tower, teichmuller_lift

S_MAX = 4
SIZE_GUARD = 2**24

YES, NO, INCONCLUSIVE = "Yes", "No", "Inconclusive"
EQUAL_CHAR_SUPPORT = "EqualCharSupport"
VALUATION_SCREEN = "ValuationScreen"
EXHAUSTIVE_SEARCH = "ExhaustiveSearch"
SOLVER = "Solver"


# -- vectors in F[t]/(t^d) ---------------------------------------------------------
def rone(d):
    return (1,) + (0,) * (d - 1)


def rmul(F: FiniteField, a, b):
    d = len(a)
    out = [0] * d
    for i, x in enumerate(a):
        if x:
            for j in range(d - i):
                y = b[j]
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return tuple(out)


def rpow(F: FiniteField, a, n: int):
    if n < 0:
        a, n = rinv(F, a), -n
    r = rone(len(a))
    while n:
        if n & 1:
            r = rmul(F, r, a)
        n >>= 1
        if n:
            a = rmul(F, a, a)
    return r


def rinv(F: FiniteField, a):
    d = len(a)
    if a[0] == 0:
        raise NonUnit("not a unit of R")
    inv0 = F.inv(a[0])
    b = [0] * d
    b[0] = inv0
    for k in range(1, d):
        acc = 0
        for i in range(1, k + 1):
            if a[i] and b[k - i]:
                acc = F.add(acc, F.mul(a[i], b[k - i]))
        b[k] = F.neg(F.mul(inv0, acc))
    return tuple(b)


def rscale(F: FiniteField, a, c):
    return tuple(F.mul(x, c) for x in a)


def rembed(table, a):
    return tuple(table[x] for x in a)


def rencode(a, q: int) -> int:
    v = 0
    for c in reversed(a):
        v = v * q + c
    return v


def rdecode(idx: int, q: int, d: int):
    out = []
    for _ in range(d):
        idx, r = divmod(idx, q)
        out.append(r)
    return tuple(out)


def rformat(F: FiniteField, a, var: str = "t") -> str:
    terms = []
    for i, c in enumerate(a):
        if not c:
            continue
        coef = F.format(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(coef)
        elif coef == "1":
            terms.append(mono)
        else:
            terms.append(f"({coef})*{mono}" if "+" in coef else f"{coef}*{mono}")
    return " + ".join(terms) if terms else "0"


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def principal_exponent(p: int, d: int) -> int:
    """Smallest p^k >= d; it kills 1 + tR because (1+y)^(p^k) = 1 + y^(p^k)."""
    P = 1
    while P < d:
        P *= p
    return P


# -- verdicts -------------------------------------------------------------------
@dataclass(frozen=True)
class PowerMembershipVerdict:
    answer: str
    certificate: str | None
    witness: tuple | None = None
    witness_field: FiniteField | None = None
    searched_s: tuple[int, ...] = ()
    data: dict = dc_field(default_factory=dict, compare=False)

    @property
    def is_yes(self) -> bool:
        return self.answer == YES

    def witness_expr(self, var: str = "t") -> str | None:
        if self.witness is None:
            return None
        return rformat(self.witness_field, self.witness, var)

    def to_json(self, var: str = "t") -> dict:
        out = {
            "answer": self.answer,
            "certificate": self.certificate,
            "witness": self.witness_expr(var),
            "searched_s": list(self.searched_s),
        }
        if self.witness_field is not None and self.witness is not None:
            out["witness_field_degree"] = self.witness_field.degree
        if self.data:
            out["data"] = dict(self.data)
        return out


# -- layer helpers ----------------------------------------------------------------
def weight_screen(d: int, p: int, j: int, e_abs: int | None):
    """Reachable leading valuations of (1+y)^(p^j) - 1 in R.

    Returns ``(exact, floor)``: ``exact`` maps a valuation v < d to the list of
    (a, i) with v(y) = a whose unique minimal weight is v, achieved by the
    binomial term y^i. ``floor`` is the smallest tied minimum below d (or d):
    when weights tie the leading terms may cancel, so such an a only tells us
    the valuation is at least the tie value.
    """
    P = p**j
    exact: dict[int, list[tuple[int, int]]] = {}
    floor = d
    for a in range(1, d):
        weights = {}
        for i in range(1, P + 1):
            if i < P and e_abs is None:
                continue  # binomial coefficient vanishes in characteristic p
            lead = (j - _vp(i, p)) * (e_abs or 0) + i * a
            weights[i] = lead
        m = min(weights.values())
        if m >= d:
            continue
        achievers = [i for i, w in weights.items() if w == m]
        if len(achievers) == 1:
            exact.setdefault(m, []).append((a, achievers[0]))
        else:
            floor = min(floor, m)
    return exact, floor


def _leading(a):
    for i in range(1, len(a)):
        if a[i]:
            return i
    return None


def exhaustive_principal_search(F: FiniteField, d: int, p: int, j: int, w, s_max: int = S_MAX,
                                guard: int = SIZE_GUARD):
    """Search 1 + tR over residue extensions F_{q^r}, r = 1..s_max.

    Returns ``(witness, field, searched_degrees, blocked)``.
    """
    P = p**j
    searched = []
    blocked = False
    for r in range(1, s_max + 1):
        try:
            big = F if r == 1 else F.extension(r)
        except ValueError:
            blocked = True
            break
        size = big.q ** (d - 1)
        if size > guard:
            blocked = True
            break
        table = F.embedding_into(big) if r > 1 else list(range(F.q))
        target = rencode(rembed(table, w), big.q)
        add, mul = big.np_tables
        idx = _kernels.principal_indices(big.q, d)
        powers = _kernels.power_all(idx, P, big.q, d, add, mul)
        searched.append(big.degree)
        hits = np.nonzero(powers == target)[0]
        if hits.size:
            return rdecode(int(idx[hits[0]]), big.q, d), big, tuple(searched), False
    return None, None, tuple(searched), blocked


def principal_membership_vec(F: FiniteField, d: int, p: int, j: int, w, e_abs: int | None,
                             s_max: int = S_MAX, guard: int = SIZE_GUARD) -> PowerMembershipVerdict:
    """Is the principal unit ``w`` (vector over F) a p^j-th power in 1 + tR over k-bar?"""
    w = tuple(w)
    if len(w) != d or w[0] != 1:
        raise NonUnit("principal unit must have residue 1")
    if j == 0:
        return PowerMembershipVerdict(YES, SOLVER, w, F, data={"layer": "trivial"})
    P = p**j
    if e_abs is None:
        for i in range(1, d):
            if w[i] and i % P:
                return PowerMembershipVerdict(NO, EQUAL_CHAR_SUPPORT, data={"exponent": i, "modulus": P})
        x = [0] * d
        x[0] = 1
        for i in range(P, d, P):
            x[i // P] = F.frobenius(w[i], -j)
        return PowerMembershipVerdict(YES, EQUAL_CHAR_SUPPORT, tuple(x), F)

    exact, floor = weight_screen(d, p, j, e_abs)
    one = rone(d)
    x = one
    cur = w
    while True:
        v = _leading(cur)
        if v is None:
            return PowerMembershipVerdict(YES, SOLVER, x, F, data={"layer": "peeling"})
        if v >= floor:
            break
        cands = exact.get(v)
        if cands is None:
            return PowerMembershipVerdict(
                NO,
                VALUATION_SCREEN,
                data={"valuation": v, "reachable": sorted(exact), "tie_floor": floor},
            )
        pure = [a for a, i in cands if i == P]
        if not pure:
            break
        a = pure[0]
        y = list(one)
        y[a] = F.frobenius(cur[v], -j)
        y = tuple(y)
        cur = rmul(F, cur, rinv(F, rpow(F, y, P)))
        x = rmul(F, x, y)

    wit, big, searched, blocked = exhaustive_principal_search(F, d, p, j, w, s_max, guard)
    if wit is not None:
        return PowerMembershipVerdict(YES, EXHAUSTIVE_SEARCH, wit, big, searched)
    return PowerMembershipVerdict(INCONCLUSIVE, None, searched_s=searched, data={"blocked": blocked})


def _split_m(m: int, p: int):
    j = 0
    while m % p == 0:
        m //= p
        j += 1
    return j, m


def _torus_root(F: FiniteField, c: int, m: int):
    """(rho, field) with rho^m = c in the smallest extension of F that has one."""
    r = 1
    while F.q**r <= MAX_ORDER:
        big = F if r == 1 else F.extension(r)
        cb = c if r == 1 else F.embedding_into(big)[c]
        # rho^m = c solvable iff c^((Q-1)/g) = 1 with g = gcd(m, Q-1)
        Q = big.q
        g = gcd(m, Q - 1)
        if big.pow(cb, (Q - 1) // g) == 1:
            for x in range(1, Q):
                if big.pow(x, m) == cb:
                    return x, big
        r += 1
    return None, None


def mth_power_vec(F: FiniteField, d: int, p: int, u, m: int, e_abs: int | None,
                  s_max: int = S_MAX, guard: int = SIZE_GUARD) -> PowerMembershipVerdict:
    u = tuple(u)
    if m < 1:
        raise ValueError("m must be a positive integer")
    if u[0] == 0:
        raise NonUnit("not a unit of R")
    j, m_prime = _split_m(m, p)
    c0 = u[0]
    w = rscale(F, u, F.inv(c0))
    pv = principal_membership_vec(F, d, p, j, w, e_abs, s_max, guard)
    info = {"m": m, "j": j, "m_prime": m_prime}
    if pv.answer != YES:
        return PowerMembershipVerdict(pv.answer, pv.certificate, searched_s=pv.searched_s,
                                      data={**info, **pv.data})
    # m'-th powering is a bijection on the p-group 1 + tR.
    Fw = pv.witness_field
    xw = pv.witness
    k = pow(m_prime, -1, principal_exponent(p, d))
    xw = rpow(Fw, xw, k)
    rho, big = _torus_root(Fw, c0 if Fw is F else F.embedding_into(Fw)[c0], m)
    if rho is None:
        return PowerMembershipVerdict(YES, pv.certificate, None, None, pv.searched_s,
                                      {**info, **pv.data, "torus_root": "outside modeled fields"})
    if big is not Fw:
        xw = rembed(Fw.embedding_into(big), xw)
    witness = rscale(big, xw, rho)
    return PowerMembershipVerdict(YES, pv.certificate, witness, big, pv.searched_s, {**info, **pv.data})


def verify_witness(verdict: PowerMembershipVerdict, F: FiniteField, u, m: int) -> bool:
    """Re-check x^m == u by direct powering (u given over F)."""
    if verdict.witness is None:
        return False
    big = verdict.witness_field
    target = tuple(u) if big is F or big == F else rembed(F.embedding_into(big), u)
    return rpow(big, verdict.witness, m) == target


# -- the ring R -------------------------------------------------------------------
class TruncatedUnitRing:
    """R = O_L / pi_K O_L for a level L directly above K."""

    def __init__(self, tower: Tower, K=None, L=None):
        L = tower.top if L is None else tower.level(L)
        if L.prev is None:
            raise ValueError("L must be a ramified level")
        K = L.prev if K is None else tower.level(K)
        if L.prev is not K:
            raise ValueError(f"level {L.name!r} must lie directly above {K.name!r}")
        self.tower = tower
        self.K = K
        self.L = L
        self.d = L.degree
        self.field = tower.residue_field
        self.p = tower.p
        self.e_abs = L.e_abs
        if L.coerce(K.pi).valuation() != self.d:
            raise ValueError("pi_K and pi_L^d do not generate the same ideal")

    def __repr__(self):
        return f"TruncatedUnitRing({self.L.name}/{self.K.name}, d={self.d})"

    def reduce(self, x: RingElem):
        x = self.L.coerce(x)
        if x.is_zero:
            if x.prec < self.d:
                raise InsufficientPrecision("element not known modulo pi_K")
            return (0,) * self.d
        if x.val < 0:
            raise NonUnit("element is not integral")
        if x.prec < self.d:
            raise InsufficientPrecision("element not known modulo pi_K")
        raw = x.raw()
        return tuple(self.K.ring.residue(c) for c in raw)

    def lift(self, vec) -> RingElem:
        raw = tuple(self.K.ring.lift(c) for c in vec)
        return self.L.from_raw(raw)

    def mul(self, a, b):
        return rmul(self.field, a, b)

    def pow(self, a, n):
        return rpow(self.field, a, n)

    def witness_element(self, verdict: PowerMembershipVerdict) -> RingElem | None:
        if verdict.witness is None or verdict.witness_field != self.field:
            return None
        return self.lift(verdict.witness)

    def witness_expr(self, verdict: PowerMembershipVerdict) -> str | None:
        el = self.witness_element(verdict)
        if el is not None:
            return el.to_expr()
        return verdict.witness_expr(f"pi_{self.L.name}")


def unit_decompose(u: RingElem, R: TruncatedUnitRing):
    """u = tau * w with tau a Teichmuller lift and w a principal unit."""
    vec = R.reduce(u)
    if vec[0] == 0:
        raise NonUnit("element is not a unit of R")
    tau = teichmuller_lift(vec[0], R.L)
    w = R.L.coerce(u) / tau
    return tau, w


def principal_power_membership(w, j: int, R: TruncatedUnitRing, s_max: int = S_MAX,
                               guard: int = SIZE_GUARD) -> PowerMembershipVerdict:
    vec = R.reduce(w) if isinstance(w, RingElem) else tuple(w)
    if vec[0] != 1:
        raise NonUnit("principal unit must have residue 1")
    return principal_membership_vec(R.field, R.d, R.p, j, vec, R.e_abs, s_max, guard)


def mth_power_in_units(u, m: int, R: TruncatedUnitRing, s_max: int = S_MAX,
                       guard: int = SIZE_GUARD) -> PowerMembershipVerdict:
    vec = R.reduce(u) if isinstance(u, RingElem) else tuple(u)
    return mth_power_vec(R.field, R.d, R.p, vec, m, R.e_abs, s_max, guard)


# -- brute-force oracle ---------------------------------------------------------
_ORACLE_CACHE: dict = {}


def oracle_power_set(F: FiniteField, d: int, m: int, principal: bool = False, guard: int = SIZE_GUARD):
    """Sorted encodings of {x^m : x in R^x} (or x in 1 + tR) over F."""
    key = (F.p, F.modulus, d, m, principal)
    hit = _ORACLE_CACHE.get(key)
    if hit is not None:
        return hit
    size = F.q ** (d - 1) * (1 if principal else F.q - 1)
    if size > guard:
        raise TooLarge(f"{size} elements exceed the enumeration guard {guard}")
    idx = _kernels.principal_indices(F.q, d) if principal else _kernels.unit_indices(F.q, d)
    add, mul = F.np_tables
    out = np.unique(_kernels.power_all(idx, m, F.q, d, add, mul))
    _ORACLE_CACHE[key] = out
    return out


def oracle_field(F: FiniteField, s: int) -> FiniteField:
    """The field F_{p^s} containing F (s must be a multiple of F's degree)."""
    if s % F.degree:
        raise ValueError(f"F_{F.p}^{s} does not contain the residue field")
    return F if s == F.degree else F.extension(s // F.degree)


def power_membership_oracle_vec(F: FiniteField, d: int, w, m: int, s: int | None = None,
                                guard: int = SIZE_GUARD) -> bool:
    big = oracle_field(F, F.degree if s is None else s)
    target = tuple(w) if big is F else rembed(F.embedding_into(big), w)
    powers = oracle_power_set(big, d, m, guard=guard)
    code = rencode(target, big.q)
    pos = np.searchsorted(powers, code)
    return bool(pos < powers.size and powers[pos] == code)


def power_membership_oracle(w, m: int, R: TruncatedUnitRing, s: int | None = None,
                            guard: int = SIZE_GUARD) -> bool:
    """Ground truth over F_{p^s}: is w an m-th power of a unit of R?"""
    vec = R.reduce(w) if isinstance(w, RingElem) else tuple(w)
    return power_membership_oracle_vec(R.field, R.d, vec, m, s, guard)
