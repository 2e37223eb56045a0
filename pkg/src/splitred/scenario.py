"""Scenario files: schema, validation and execution into JSON-ready reports."""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass

import jsonschema

from . import conductor, tamebase
from .errors import ParseError, SplitRedError
from .localfield import TowerSpec, make_tower
from .tatesplit import STATUS_INCONCLUSIVE, TateCurve, split_status
from .unitpowers import S_MAX
from .weierstrass import WeierstrassCurve, analyze_type_I0star, analyze_type_IV

SCHEMA_VERSION = "1"

_INT_OR_STR = {"type": ["integer", "string"]}
_EXPR = {"type": "string", "minLength": 1}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "splitred scenario",
    "type": "object",
    "required": ["schema_version", "tower", "analysis"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "id": {"type": "string"},
        "description": {"type": "string"},
        "params": {"type": "object"},
        "tower": {
            "type": "object",
            "required": ["characteristic", "p", "levels"],
            "additionalProperties": False,
            "properties": {
                "characteristic": _INT_OR_STR,
                "p": _INT_OR_STR,
                "residue_degree": _INT_OR_STR,
                "residue_poly": {"type": "array", "items": {"type": "integer"}},
                "precision": _INT_OR_STR,
                "base_name": {"type": "string", "pattern": "^[A-Za-z][A-Za-z0-9_]*$"},
                "levels": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["name"],
                        "additionalProperties": False,
                        "properties": {
                            "name": {"type": "string", "pattern": "^[A-Za-z][A-Za-z0-9_]*$"},
                            "poly": _EXPR,
                            "coeffs": {"type": "array", "items": _EXPR, "minItems": 2},
                        },
                        "oneOf": [{"required": ["poly"]}, {"required": ["coeffs"]}],
                    },
                },
            },
        },
        "analysis": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["tate_restriction", "type_iv", "type_i0star", "conductor", "tame_base"]},
            },
            "allOf": [
                {
                    "if": {"properties": {"kind": {"const": "tate_restriction"}}},
                    "then": {
                        "required": ["q"],
                        "properties": {
                            "q": _EXPR,
                            "K": {"type": "string"},
                            "L": {"type": "string"},
                            "s_max": _INT_OR_STR,
                        },
                    },
                },
                {
                    "if": {"properties": {"kind": {"enum": ["type_iv", "type_i0star"]}}},
                    "then": {
                        "properties": {
                            "level": {"type": "string"},
                            "a1": _EXPR,
                            "a2": _EXPR,
                            "a3": _EXPR,
                            "a4": _EXPR,
                            "a6": _EXPR,
                            "d": _INT_OR_STR,
                        },
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "type_iv"}}},
                    "then": {"required": ["a6"]},
                },
                {
                    "if": {"properties": {"kind": {"const": "conductor"}}},
                    "then": {
                        "required": ["level"],
                        "properties": {
                            "level": {"type": "string"},
                            "delta_E": _INT_OR_STR,
                            "norm_torus_level": {"type": "string"},
                            "d_t": _INT_OR_STR,
                            "two_da": _INT_OR_STR,
                            "unsafe_degree": {"type": "boolean"},
                        },
                    },
                },
                {
                    "if": {"properties": {"kind": {"const": "tame_base"}}},
                    "then": {
                        "properties": {
                            "p": _INT_OR_STR,
                            "genus": _INT_OR_STR,
                            "kodaira": {"type": "string"},
                            "L_degree": _INT_OR_STR,
                            "delta": _INT_OR_STR,
                            "v_disc": _INT_OR_STR,
                            "stabilization_index": _INT_OR_STR,
                            "toric_rank": _INT_OR_STR,
                            "abelian_toric_rank": _INT_OR_STR,
                            "phi_order": _INT_OR_STR,
                            "semi_abelian": {"type": "boolean"},
                            "tame": {"type": "boolean"},
                            "jumps": {"type": "array", "items": {"type": "string"}},
                            "d": {"type": "array", "items": _INT_OR_STR},
                        },
                    },
                },
            ],
        },
    },
}


class ScenarioError(SplitRedError, ValueError):
    """Malformed scenario: JSON syntax, schema or expression parse failure."""

    def __init__(self, message, position=None):
        self.position = position
        super().__init__(message if position is None else f"{position}: {message}")


def load_json(text: str, source: str = "<scenario>") -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def validate(doc: dict) -> None:
    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(x) for x in err.absolute_path) or "<root>"
        raise ScenarioError(err.message, path)


def _int(x, where: str) -> int:
    if isinstance(x, bool):
        raise ScenarioError("expected an integer", where)
    if isinstance(x, int):
        return x
    try:
        return int(str(x).strip())
    except ValueError:
        raise ScenarioError(f"expected an integer, got {x!r}", where) from None


# -- templates -----------------------------------------------------------------
_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


def instantiate(template: dict, values: dict) -> dict:
    """Substitute ``{name}`` placeholders from ``params`` overridden by ``values``."""
    params = dict(template.get("params", {}))
    params.update(values)

    def sub(obj):
        if isinstance(obj, str):
            whole = _PLACEHOLDER.fullmatch(obj)
            if whole and whole.group(1) in params:
                return params[whole.group(1)]
            return _PLACEHOLDER.sub(lambda m: str(params[m.group(1)]) if m.group(1) in params else m.group(0), obj)
        if isinstance(obj, list):
            return [sub(x) for x in obj]
        if isinstance(obj, dict):
            return {k: sub(v) for k, v in obj.items() if k != "params"}
        return obj

    out = sub(copy.deepcopy(template))
    out["params"] = params
    return out


# -- execution -------------------------------------------------------------------
@dataclass
class Outcome:
    report: dict
    row: dict
    inconclusive: bool


def _tower(doc: dict, precision: int | None):
    t = doc["tower"]
    spec = TowerSpec.from_dict(
        {
            **t,
            "characteristic": _int(t["characteristic"], "tower/characteristic"),
            "p": _int(t["p"], "tower/p"),
            "residue_degree": _int(t.get("residue_degree", 1), "tower/residue_degree"),
            "precision": _int(t.get("precision", 40), "tower/precision"),
        }
    )
    if precision is not None:
        spec = spec.with_precision(precision)
    try:
        return make_tower(spec)
    except ParseError as exc:
        raise ScenarioError(str(exc), "tower/levels") from None


def _elem(tower, text: str, level, where: str):
    try:
        return tower.element(text, level)
    except ParseError as exc:
        raise ScenarioError(str(exc), where) from None


def run_scenario(doc: dict, precision: int | None = None) -> Outcome:
    validate(doc)
    tower = _tower(doc, precision)
    a = doc["analysis"]
    kind = a["kind"]
    sid = doc.get("id", kind)
    row = {
        "scenario_id": sid,
        "p": tower.p,
        "d": tower.top.degree if tower.top.prev is not None else 1,
        "n": None,
        "v_p_n": None,
        "lifting_exponent": None,
        "status": None,
        "delta_swan": None,
        "bk_bound": None,
        "certificate": None,
    }
    inconclusive = False
    if kind == "tate_restriction":
        L = tower.level(a.get("L", tower.top.name))
        E = TateCurve(tower, _elem(tower, a["q"], L, "analysis/q"), a.get("K"), L)
        rep = split_status(E, _int(a.get("s_max", S_MAX), "analysis/s_max"))
        result = rep.to_json()
        row.update(
            d=rep.d, n=rep.n, v_p_n=rep.p_valuation, lifting_exponent=rep.lifting_exponent,
            status=rep.status, certificate=rep.certificate,
        )
        inconclusive = rep.status == STATUS_INCONCLUSIVE
    elif kind in ("type_iv", "type_i0star"):
        lv = tower.level(a.get("level", tower.top.name))
        coeffs = {n: _elem(tower, a.get(n, "0"), lv, f"analysis/{n}") for n in ("a1", "a2", "a3", "a4", "a6")}
        E = WeierstrassCurve(lv, **coeffs)
        d = _int(a["d"], "analysis/d") if "d" in a else None
        if kind == "type_iv":
            rep = analyze_type_IV(E, d)
            status = "Split" if rep.split_E else "NotSplit"
        else:
            rep = analyze_type_I0star(E, d)
            status = rep.status_E
        result = rep.to_json()
        row.update(status=status, d=d if d is not None else row["d"], certificate="ClosedForm" if rep.consistent else "Mismatch")
    elif kind == "conductor":
        rep = conductor.weil_restriction_pipeline(
            tower,
            a["level"],
            delta_E=_int(a["delta_E"], "analysis/delta_E") if "delta_E" in a else None,
            norm_torus_level=a.get("norm_torus_level"),
            d_t=_int(a["d_t"], "analysis/d_t") if "d_t" in a else None,
            two_da=_int(a["two_da"], "analysis/two_da") if "two_da" in a else None,
            unsafe_degree=bool(a.get("unsafe_degree", False)),
        )
        result = rep.to_json()
        row.update(d=result["degree"], delta_swan=result["delta_A"], bk_bound=result.get("bk_bound"),
                   certificate="SwanIdentity")
    elif kind == "tame_base":
        result = _run_tame(a, tower.p)
        decisions = result.get("elliptic_split_after", [])
        if decisions:
            row.update(d=decisions[-1]["d"], status=decisions[-1]["result"], certificate=decisions[-1]["branch"])
        else:
            certs = result.get("certificates", [])
            row.update(certificate=certs[0]["certificate"] if certs else None)
    else:  # pragma: no cover - excluded by the schema
        raise ScenarioError(f"unknown kind {kind!r}", "analysis/kind")
    report = {
        "schema_version": SCHEMA_VERSION,
        "scenario_id": sid,
        "kind": kind,
        "tower": {
            "characteristic": tower.characteristic,
            "p": tower.p,
            "residue_degree": tower.residue_field.degree,
            "precision": tower.precision,
            "levels": [{"name": lv.name, "degree": lv.degree} for lv in tower.levels],
        },
        "result": result,
    }
    return Outcome(report, row, inconclusive)


def _run_tame(a: dict, tower_p: int) -> dict:
    fields = {k: v for k, v in a.items() if k not in ("kind", "d")}
    for k in ("p", "genus", "L_degree", "delta", "v_disc", "stabilization_index", "toric_rank",
              "abelian_toric_rank", "phi_order"):
        if k in fields:
            fields[k] = _int(fields[k], f"analysis/{k}")
    fields.setdefault("p", tower_p)
    datum = tamebase.ReductionDatum.from_dict(fields)
    out: dict = {"certificates": [c.to_json() for c in tamebase.tame_split_certificates(datum)]}
    if datum.kodaira is not None:
        out["stabilization_index"] = tamebase.elliptic_stabilization_index(datum.kodaira)
    if datum.jumps:
        out["jumps"] = tamebase.jumps_summary(datum.jumps, datum.p, datum.stabilization_index).to_json()
    ds = [_int(x, "analysis/d") for x in a.get("d", [])]
    if ds:
        if datum.kodaira is not None and datum.L_degree is not None:
            rows = []
            for d in ds:
                dec = tamebase.elliptic_split_after(datum.kodaira, datum.L_degree, datum.delta, datum.v_disc, d, datum.p)
                rows.append({"d": d, **dec.to_json()})
            out["elliptic_split_after"] = rows
        if datum.stabilization_index is not None:
            out["jacobian_split_certificate"] = [
                {"d": d, "result": tamebase.jacobian_split_certificate(datum.stabilization_index, d, datum.p)}
                for d in ds
            ]
    return out


def stringify(obj):
    """Numbers become decimal strings; structure and booleans are kept."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [stringify(x) for x in obj]
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(stringify(report), indent=2, ensure_ascii=False)
