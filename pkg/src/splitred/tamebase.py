"""Tame base change: stabilization indices and split-reduction certificates."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm

from .errors import DenominatorNotPrimeToP, InconsistentWithE, InputInconsistent, NotDivisor, NotTame
from .weierstrass import KodairaType, ogg_discriminant, parse_kodaira

SPLIT_GUARANTEED = "SplitGuaranteed"
NO_GUARANTEE = "NoGuarantee"
SPLIT = "Split"


def elliptic_stabilization_index(kind) -> int:
    """Tame semistability degree of an elliptic Kodaira type (at most 6)."""
    t = parse_kodaira(kind)
    return {
        "I": 1,
        "I*": 2,
        "IV": 3,
        "IV*": 3,
        "III": 4,
        "III*": 4,
        "II": 6,
        "II*": 6,
    }[t.family]


def component_group_exponent(kind) -> int:
    t = parse_kodaira(kind)
    if t.family == "I":
        return max(t.n, 1)
    if t.family == "I*":
        return 4 if t.n % 2 else 2
    return {"II": 1, "III": 2, "IV": 3, "IV*": 3, "III*": 2, "II*": 1}[t.family]


def potentially_good(kind) -> bool:
    t = parse_kodaira(kind)
    if t.family == "I":
        return t.n == 0
    if t.family == "I*":
        return t.n == 0
    return True


def _check_tame(d: int, p: int) -> None:
    if d < 1 or (p > 1 and d % p == 0):
        raise NotTame(f"degree {d} is not prime to p = {p}")


def stabilization_rescale(e: int, a: int, p: int = 1) -> int:
    if a < 1 or e % a:
        raise NotDivisor(f"{a} does not divide {e}")
    if p > 1 and a % p == 0:
        raise NotTame(f"{a} is not prime to p = {p}")
    return e // a


def tame_phi_order(phi_a: int, t_a: int, ratio: int, p: int = 1) -> int:
    """|Phi| after a further tame extension of degree ``ratio``: ratio^t * |Phi|."""
    if ratio < 1:
        raise ValueError("ratio must be a positive integer")
    if p > 1 and ratio % p == 0:
        raise NotTame(f"{ratio} is not prime to p = {p}")
    return ratio**t_a * phi_a


def jacobian_split_certificate(e: int, d: int, p: int) -> str:
    _check_tame(d, p)
    if e < 1:
        raise ValueError("stabilization index must be >= 1")
    return SPLIT_GUARANTEED if d > e else NO_GUARANTEE


@dataclass(frozen=True)
class Decision:
    result: str  # Split or NoGuarantee
    branch: str
    trace: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"result": self.result, "branch": self.branch, "trace": list(self.trace)}


def elliptic_split_after(kind, L_degree: int, delta: int | None, v_disc: int | None, d: int, p: int) -> Decision:
    """Does E acquire split reduction over the tame extension K(d) of degree d?

    ``L_degree`` is the degree of the minimal extension giving semi-abelian reduction.
    """
    _check_tame(d, p)
    t = parse_kodaira(kind)
    trace = [f"type {t}, [L:K] = {L_degree}, d = {d}"]
    if L_degree < 1:
        raise InputInconsistent("[L:K] must be >= 1")
    if not t.additive:
        if L_degree != 1:
            raise InputInconsistent(f"type {t} is already semi-abelian, so [L:K] = 1")
    else:
        if L_degree == 1:
            raise InputInconsistent(f"additive type {t} needs [L:K] > 1")
        if delta is not None and v_disc is not None and ogg_discriminant(t, delta) != v_disc:
            raise InputInconsistent(
                f"Ogg's formula gives v(Delta) = {ogg_discriminant(t, delta)} for type {t} and delta = {delta}"
            )
        if potentially_good(t) and L_degree % component_group_exponent(t):
            raise InputInconsistent(
                f"the component group of type {t} has exponent {component_group_exponent(t)}, "
                f"which must divide [L:K] = {L_degree}"
            )
    if L_degree == 1:
        trace.append("semi-abelian reduction: split already")
        return Decision(SPLIT, "semi_abelian", tuple(trace))
    if d <= L_degree:
        trace.append("d <= [L:K]: outside the statement")
        return Decision(NO_GUARANTEE, "d_not_above_L", tuple(trace))
    if d >= 4:
        trace.append("tame degree >= 4 gives split reduction")
        return Decision(SPLIT, "degree_at_least_4", tuple(trace))
    # remaining: [L:K] = 2, d = 3
    trace.append("[L:K] = 2 and d = 3")
    if t.family in ("IV", "IV*"):
        raise InputInconsistent(f"type {t} has a component group of order 3, not killed by [L:K] = 2")
    if t.family == "I*":
        trace.append("stabilization index 2 < d")
        return Decision(SPLIT, "stabilization_index", tuple(trace))
    if delta is None:
        raise InputInconsistent(f"type {t} with d = 3 needs delta")
    if delta == 1:
        raise InputInconsistent(
            "delta = 1 forces v(Delta) in {3, 4, 10, 11}, which is impossible with [L:K] = 2"
        )
    trace.append(f"delta(E_K(3)) = 3 * {delta} = {3 * delta} is not in [1, 3]")
    return Decision(SPLIT, "tame_delta", tuple(trace))


@dataclass(frozen=True)
class JumpSummary:
    u: int
    lcm_denominator: int

    def to_json(self) -> dict:
        return {"u": self.u, "lcm_denominator": self.lcm_denominator}


def jumps_summary(jumps, p: int, e: int | None = None) -> JumpSummary:
    fr = [Fraction(j) for j in jumps]
    for j in fr:
        if not (0 <= j < 1):
            raise ValueError(f"jump {j} is outside [0, 1)")
        if p > 1 and j.denominator % p == 0:
            raise DenominatorNotPrimeToP(f"jump {j} has a denominator divisible by p = {p}")
    den = 1
    for j in fr:
        den = lcm(den, j.denominator)
    nonzero = [j for j in fr if j]
    if e is not None:
        if e % den:
            raise InconsistentWithE(f"lcm of denominators {den} does not divide e = {e}")
        if nonzero and min(nonzero) < Fraction(1, e):
            raise InconsistentWithE(f"smallest nonzero jump {min(nonzero)} is below 1/{e}")
    return JumpSummary(len(nonzero), den)


@dataclass(frozen=True)
class ReductionDatum:
    p: int
    genus: int = 1
    stabilization_index: int | None = None
    toric_rank: int | None = None
    abelian_toric_rank: int | None = None
    phi_order: int | None = None
    kodaira: str | None = None
    delta: int | None = None
    v_disc: int | None = None
    jumps: tuple = ()
    L_degree: int | None = None
    semi_abelian: bool | None = None
    tame: bool | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ReductionDatum":
        known = {f for f in cls.__dataclass_fields__}
        kw = {k: v for k, v in d.items() if k in known}
        if "jumps" in kw:
            kw["jumps"] = tuple(kw["jumps"])
        return cls(**kw)


@dataclass(frozen=True)
class Certificate:
    name: str
    hypotheses: tuple[str, ...]
    source: str = ""

    def to_json(self) -> dict:
        return {"certificate": self.name, "hypotheses": list(self.hypotheses)}


def tame_split_certificates(datum: ReductionDatum) -> list[Certificate]:
    """Every split-reduction guarantee whose hypotheses the datum meets."""
    out = []
    p = datum.p
    if p == 1:
        out.append(Certificate("residue_characteristic_zero", ("p = 1",)))
    if datum.phi_order is not None and gcd(datum.phi_order, p) == 1:
        out.append(Certificate("phi_prime_to_p", (f"|Phi| = {datum.phi_order} prime to p = {p}",)))
    if datum.semi_abelian:
        out.append(Certificate("semi_abelian_reduction", ("reduction is semi-abelian",)))
    tame = datum.tame
    if tame is None and datum.L_degree is not None:
        tame = p == 1 or datum.L_degree % p != 0
    if tame and datum.abelian_toric_rank == 0:
        out.append(Certificate("tame_toric_rank_zero",
                               ("minimal semi-abelian extension is tame", "abelian part has toric rank 0")))
    if tame and datum.genus == 1 and datum.kodaira is not None:
        out.append(Certificate("elliptic_tame", ("elliptic curve", "minimal semi-abelian extension is tame")))
    return out


def max_elliptic_stabilization_index() -> int:
    types = [KodairaType("I", 0), KodairaType("I", 1), KodairaType("I*", 0), KodairaType("I*", 1)]
    types += [KodairaType(f) for f in ("II", "III", "IV", "IV*", "III*", "II*")]
    return max(elliptic_stabilization_index(t) for t in types)
