"""Swan-conductor identities, the Brumer-Kramer bound and bound validators.

Nothing here computes a Swan conductor from a Galois representation: the
functions evaluate closed formulas on supplied or pipeline-computed inputs
and check consistency against the published inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import DegreeGuard, NegativeResult, NonIntegralBound, NotTame
from .localfield import Tower, different_valuation
from .weierstrass import parse_kodaira


def lambda_p(n: int, p: int) -> int:
    """sum(i * r_i * p^i) over the base-p digits r_i of n."""
    if n < 0:
        raise ValueError("lambda_p needs n >= 0")
    total, i, pi = 0, 0, 1
    while n:
        n, r = divmod(n, p)
        total += i * r * pi
        i += 1
        pi *= p
    return total


def bk_bound(p: int, vKp: int, d_t: int, two_da) -> int:
    """2(d_t + d_a) p v + (p-1)(2 lambda_p(d_t) + lambda_p(2 d_a)) v, with 2 d_a passed in."""
    if isinstance(two_da, float):
        if not two_da.is_integer():
            raise NonIntegralBound(f"2*d_a = {two_da} is not an integer")
        two_da = int(two_da)
    if d_t < 0 or two_da < 0:
        raise ValueError("d_t and 2*d_a must be non-negative")
    return (2 * d_t + two_da) * p * vKp + (p - 1) * (2 * lambda_p(d_t, p) + lambda_p(two_da, p)) * vKp


def swan_weil_restriction(delta_E: int, v_different: int, p: int, degree: int | None = None,
                          unsafe_degree: bool = False) -> int:
    """delta(Res_{L/K} E) = delta(E/L) + 2 (v_L(D_{L/K}) - (p - 1)); guarded to [L:K] = p."""
    if degree is not None and degree != p and not unsafe_degree:
        raise DegreeGuard(f"formula applied only to degree-p extensions (got degree {degree})")
    if delta_E < 0:
        raise ValueError("delta_E must be non-negative")
    out = delta_E + 2 * (v_different - (p - 1))
    if out < 0:
        raise NegativeResult(f"Swan conductor would be {out}")
    return out


def swan_norm_torus(v_different: int) -> int:
    """Swan conductor of the norm-one torus of a quadratic extension: v(D) - 1."""
    if v_different < 1:
        raise ValueError("different valuation must be >= 1")
    return v_different - 1


def swan_tate_from_norm_torus(delta_torus: int) -> int:
    if delta_torus < 0:
        raise ValueError("delta must be non-negative")
    return 2 * delta_torus


def swan_tame_scaling(delta: int, d: int, p: int) -> int:
    if d < 1 or d % p == 0:
        raise NotTame(f"degree {d} is not prime to p = {p}")
    return d * delta


def equal_char_swan_family(delta_E: int, p: int, v_a: int) -> int:
    """delta(A/K) = delta(E/L) + 2 p v_K(a_{p-1}) - (p - 1)."""
    if v_a < 1:
        raise ValueError("v_K(a_{p-1}) must be >= 1")
    out = delta_E + 2 * p * v_a - (p - 1)
    if out < 0:
        raise NegativeResult(f"Swan conductor would be {out}")
    return out


# -- validators -----------------------------------------------------------------
@dataclass(frozen=True)
class BoundVerdict:
    passed: bool
    checks: tuple[tuple[str, bool], ...] = ()

    @property
    def violated(self) -> list[str]:
        return [name for name, ok in self.checks if not ok]

    def to_json(self) -> dict:
        return {
            "verdict": "Pass" if self.passed else "Fail",
            "checks": [{"inequality": name, "holds": ok} for name, ok in self.checks],
        }


def _verdict(checks) -> BoundVerdict:
    checks = tuple(checks)
    return BoundVerdict(all(ok for _, ok in checks), checks)


def validate_elliptic_bounds(status: str, delta: int, kind=None) -> BoundVerdict:
    """Elliptic curves: totally not split => 1 <= delta <= 3; not split (not totally) => I_{2n}^* and 1 <= delta <= 2n+3."""
    if status == "TotallyNotSplit":
        return _verdict([("1 <= delta", delta >= 1), ("delta <= 3", delta <= 3)])
    if status == "NotSplit":
        if kind is None:
            return _verdict([("type is I_{2n}^*", False)])
        t = parse_kodaira(kind)
        is_even_star = t.family == "I*" and t.n % 2 == 0
        checks = [("type is I_{2n}^*", is_even_star), ("1 <= delta", delta >= 1)]
        if is_even_star:
            checks.append((f"delta <= {t.n + 3}", delta <= t.n + 3))
        return _verdict(checks)
    if status == "Split":
        return _verdict([("delta >= 0", delta >= 0)])
    raise ValueError(f"unknown status {status!r}")


def _ord(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def quotient_torus_threshold(dimS: int, vKp: int, p: int) -> int:
    return (dimS + 1) * _ord(dimS + 1, p) * vKp


def validate_quotient_torus(dimS: int, delta: int, status: str, vKp: int, p: int) -> BoundVerdict:
    """Quotient tori: totally not split iff 1 <= delta <= dim S; delta >= threshold forces Split."""
    if dimS < 1:
        raise ValueError("dim S must be >= 1")
    in_range = 1 <= delta <= dimS
    checks = [(f"totally not split iff 1 <= delta <= {dimS}", in_range == (status == "TotallyNotSplit"))]
    thr = quotient_torus_threshold(dimS, vKp, p)
    if delta >= thr:
        checks.append((f"delta >= {thr} implies Split", status == "Split"))
    return _verdict(checks)


# -- pipelines over towers ------------------------------------------------------------
@dataclass(frozen=True)
class ConductorReport:
    values: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return dict(self.values)


def weil_restriction_pipeline(tower: Tower, level, delta_E: int | None = None, norm_torus_level=None,
                              d_t: int | None = None, two_da: int | None = None,
                              unsafe_degree: bool = False) -> ConductorReport:
    """delta of Res_{L/K} E for E/L, with delta(E/L) given or obtained from a quadratic M/L.

    When ``norm_torus_level`` names M, delta(E/L) = 2 * (v_M(D_{M/L}) - 1).
    When d_t and 2 d_a are given, the Brumer-Kramer bound is evaluated with v_K(p).
    """
    L = tower.level(level)
    if L.prev is None:
        raise ValueError("the level must be a ramified extension")
    K = L.prev
    p = tower.p
    out: dict = {"level": L.name, "base_level": K.name, "p": p, "degree": L.degree}
    vD = different_valuation(tower, L)
    out["v_different"] = vD
    if norm_torus_level is not None:
        M = tower.level(norm_torus_level)
        if M.prev is not L or M.degree != 2:
            raise ValueError("the norm-torus level must be a quadratic extension of the level")
        vM = different_valuation(tower, M)
        dt = swan_norm_torus(vM)
        out["v_different_norm_torus"] = vM
        out["delta_norm_torus"] = dt
        delta_E = swan_tate_from_norm_torus(dt)
    if delta_E is None:
        raise ValueError("delta_E or a norm-torus level is required")
    out["delta_E"] = delta_E
    out["delta_A"] = swan_weil_restriction(delta_E, vD, p, L.degree, unsafe_degree)
    if d_t is not None and two_da is not None:
        vKp = K.e_abs
        if vKp is None:
            raise ValueError("the bound needs characteristic 0")
        out["v_K_p"] = vKp
        out["lambda_p_d_t"] = lambda_p(d_t, p)
        out["lambda_p_2d_a"] = lambda_p(two_da, p)
        out["bk_bound"] = bk_bound(p, vKp, d_t, two_da)
        out["bound_attained"] = out["delta_A"] == out["bk_bound"]
        out["bound_respected"] = out["delta_A"] <= out["bk_bound"]
    return ConductorReport(out)
