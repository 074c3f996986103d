"""Command-line front end.

Exit codes: 0 ok, 1 domain error, 2 usage error, 3 inconsistent Cobham
verdict, 4 malformed JSON, 5 schema violation, 6 inadmissible Parry data.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Union

import jsonschema

from . import polys
from .algebraic import AlgebraicInterval, dominant_eigenvalue
from .automata import AutomatonError, DigitDFA, dfa_boolean, reverse_determinize
from .matrices import IntMatrix, char_poly
from .numeration import (InadmissibleParryData, NumerationSystem, ParryData, beta_expansion,
                         beta_number, bertrand_system_from_parry, detect_linear_recurrence,
                         digits_value, greedy_representation, is_greedy_word, omega_substitution)
from .recognizers import (APUnion, CobhamParams, DFASet, FiniteSet, PowersSet, ap_recognizer,
                          cobham_experiment, finite_set_recognizer, msd_ap_recognizer, run_membership)
from .returns import (derived_sequence, derived_substitution, detect_primitive_substitutive,
                      linrec_survey, return_words)
from .spectra import (block_form_violations, condition_C_power, dependence_report, frequency_vector,
                      is_primitive, primitive_decomposition)
from .substitutions import (Substitution, block_substitution, fixed_point, incidence_matrix,
                            projects_onto, validate)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3
EXIT_JSON, EXIT_SCHEMA, EXIT_PARRY = 4, 5, 6

DEFAULT_WINDOW = 10_000
DEFAULT_MAX_EXP = 12
DEFAULT_PREFIX_CAP = 100_000

_DIGITS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_PARRY = {"type": "object", "required": ["preperiod"], "additionalProperties": False,
          "properties": {"preperiod": {**_DIGITS, "minItems": 1}, "period": _DIGITS}}
SCHEMAS: dict[str, dict] = {
    "substitution": {
        "type": "object", "required": ["rules"], "additionalProperties": False,
        "properties": {
            "alphabet": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
            "rules": {"type": "object", "minProperties": 1, "additionalProperties": {
                "oneOf": [{"type": "string"}, {"type": "array", "items": {"type": "string"}}]}},
            "start": {"type": "string"},
        },
    },
    "matrix": {
        "type": "object", "required": ["rows"],
        "properties": {"size": {"type": "integer", "minimum": 1},
                       "rows": {"type": "array", "minItems": 1,
                                "items": {"type": "array", "items": {"type": "integer"}}}},
    },
    "parry": _PARRY,
    "system": {
        "oneOf": [
            {"type": "object", "required": ["recurrence", "initial"], "additionalProperties": False,
             "properties": {"recurrence": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
                            "initial": {"type": "array", "items": {"type": "integer", "minimum": 1},
                                        "minItems": 1}}},
            {"type": "object", "required": ["parry"], "additionalProperties": False,
             "properties": {"parry": _PARRY}},
        ],
    },
    "dfa": {
        "type": "object", "required": ["alphabet", "states", "start", "accepting", "delta"],
        "properties": {
            "alphabet": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
            "states": {"type": "integer", "minimum": 1},
            "start": {"type": "integer", "minimum": 0},
            "accepting": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            "order": {"enum": ["msd", "lsd"]},
            "delta": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        },
    },
    "set": {
        "type": "object", "required": ["kind"],
        "oneOf": [
            {"properties": {"kind": {"const": "ap"},
                            "progressions": {"type": "array", "items": {
                                "type": "array", "items": {"type": "integer", "minimum": 0},
                                "minItems": 2, "maxItems": 2}},
                            "include": _DIGITS, "exclude": _DIGITS},
             "required": ["progressions"]},
            {"properties": {"kind": {"const": "finite"}, "values": _DIGITS}, "required": ["values"]},
            {"properties": {"kind": {"const": "powers"}, "base": {"type": "integer", "minimum": 2}},
             "required": ["base"]},
            {"properties": {"kind": {"const": "dfa"}, "dfa": {"type": "object"}, "system": {"type": "object"}},
             "required": ["dfa", "system"]},
        ],
    },
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- input parsing -------------------------------------------------------------------

def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def load_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"{path}: {e.strerror}", EXIT_USAGE) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}", EXIT_JSON) from None


def check_schema(obj: Any, kind: str, where: str = "") -> None:
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{where}{_pointer(e.absolute_path)}: {e.message}" for e in errors]
        raise CliError(f"{kind} schema violation:\n  " + "\n  ".join(lines), EXIT_SCHEMA)


def parse_inputs(path: Union[str, Sequence[str]], kind: str) -> Any:
    """Read, schema-check and build the domain object of the given kind.

    A list of paths gives a list of objects; every file is checked before
    any is built.
    """
    if not isinstance(path, (str, os.PathLike)):
        objs = [load_json(p) for p in path]
        for p, obj in zip(path, objs):
            check_schema(obj, kind, p)
        return [build(obj, kind) for obj in objs]
    obj = load_json(path)
    check_schema(obj, kind, path)
    return build(obj, kind)


def build(obj: Any, kind: str) -> Any:
    try:
        if kind == "substitution":
            return Substitution.from_json(obj)
        if kind == "matrix":
            return IntMatrix.from_json(obj)
        if kind == "parry":
            return ParryData.from_json(obj)
        if kind == "system":
            if "parry" in obj:
                return bertrand_system_from_parry(ParryData.from_json(obj["parry"]))
            return NumerationSystem.from_recurrence(obj["recurrence"], obj["initial"])
        if kind == "dfa":
            return DigitDFA.from_json(obj)
        if kind == "set":
            return build_set(obj)
    except InadmissibleParryData as e:
        raise CliError(f"inadmissible Parry data: {e}", EXIT_PARRY) from None
    except (ValueError, KeyError, AutomatonError) as e:
        raise CliError(f"invalid {kind}: {e}", EXIT_SCHEMA) from None
    raise ValueError(kind)


def build_set(obj: dict):
    kind = obj["kind"]
    if kind == "ap":
        return APUnion(tuple(tuple(p) for p in obj["progressions"]), obj.get("include", ()), obj.get("exclude", ()))
    if kind == "finite":
        return FiniteSet(obj["values"])
    if kind == "powers":
        return PowersSet(obj["base"])
    check_schema(obj["dfa"], "dfa", "/dfa")
    check_schema(obj["system"], "system", "/system")
    return DFASet(build(obj["dfa"], "dfa"), build(obj["system"], "system"))


def _parry_shorthand(text: str) -> ParryData:
    pre, _, per = text.partition("/")
    try:
        return ParryData(tuple(int(a) for a in pre.split(",")), tuple(int(a) for a in per.split(",") if a))
    except InadmissibleParryData as e:
        raise CliError(f"inadmissible Parry data: {e}", EXIT_PARRY) from None
    except ValueError:
        raise CliError(f"bad Parry shorthand {text!r}", EXIT_USAGE) from None


def parry_arg(text: str) -> ParryData:
    """A Parry file, or ``parry:2/1`` (preperiod 2, period 1)."""
    if text.startswith("parry:"):
        return _parry_shorthand(text[6:])
    return parse_inputs(text, "parry")


def system_arg(text: str) -> NumerationSystem:
    """A system file, ``parry:1,1`` or ``base:b``."""
    if text.startswith("parry:"):
        return _guard_parry(lambda: bertrand_system_from_parry(_parry_shorthand(text[6:])))
    if text.startswith("base:"):
        return NumerationSystem.base(int(text[5:]))
    return parse_inputs(text, "system")


def _guard_parry(f: Callable):
    try:
        return f()
    except InadmissibleParryData as e:
        raise CliError(f"inadmissible Parry data: {e}", EXIT_PARRY) from None


def set_arg(text: str):
    """``ap:m:r`` (join several with +), ``finite:1,2,3``, ``powers:b`` or a set file."""
    if text.startswith("ap:"):
        progs = []
        for part in text.split("+"):
            fields = part.split(":")
            if len(fields) != 3 or fields[0] != "ap":
                raise CliError(f"bad progression shorthand {part!r}", EXIT_USAGE)
            progs.append((int(fields[1]), int(fields[2])))
        return APUnion(tuple(progs))
    if text.startswith("finite:"):
        return FiniteSet(int(v) for v in text[7:].split(",") if v)
    if text.startswith("powers:"):
        return PowersSet(int(text[7:]))
    return parse_inputs(text, "set")


def algebraic_arg(text: str) -> AlgebraicInterval:
    """``poly:x^2-x-1`` (largest real root), an integer, or a substitution/matrix file."""
    if text.startswith("poly:"):
        return AlgebraicInterval.from_poly_string(text[5:])
    if text.lstrip("-").isdigit():
        return AlgebraicInterval.from_int(int(text))
    return dominant_eigenvalue(matrix_arg(text))


def matrix_arg(path: str) -> IntMatrix:
    obj = load_json(path)
    if isinstance(obj, dict) and "rules" in obj:
        check_schema(obj, "substitution", path)
        return incidence_matrix(build(obj, "substitution").morphism)
    check_schema(obj, "matrix", path)
    return build(obj, "matrix")


def word_arg(s: Substitution, text: str):
    try:
        if " " in text or "," in text:
            index = {n: i for i, n in enumerate(s.names)}
            return tuple(index[p] for p in text.replace(",", " ").split())
        return s.word(text)
    except KeyError as e:
        raise CliError(f"unknown letter {e.args[0]!r}", EXIT_USAGE) from None


def digits_arg(text: str) -> tuple[int, ...]:
    if not text.isdigit():
        raise CliError("digit words are written as strings of decimal digits", EXIT_USAGE)
    return tuple(int(c) for c in text)


# -- prefix cache ------------------------------------------------------------------------

def cached_prefix(s: Substitution, n: int) -> tuple[int, ...]:
    """Fixed-point prefix, memoized under COBHAMLAB_CACHE_DIR when set."""
    root = os.environ.get("COBHAMLAB_CACHE_DIR")
    if not root:
        return fixed_point(s).prefix(n)
    key = hashlib.sha256(json.dumps(s.to_json(), sort_keys=True).encode()).hexdigest()[:32]
    path = Path(root) / f"{key}.json"
    try:
        stored = json.loads(path.read_text())
        if len(stored) >= n:
            return tuple(stored[:n])
    except (OSError, ValueError):
        pass
    w = fixed_point(s).prefix(n)
    Path(root).mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(list(w)))
    tmp.replace(path)
    return w


# -- command handlers --------------------------------------------------------------------
# Each handler returns (payload, text, exit code).

def _subst(a) -> Substitution:
    return parse_inputs(a.file, "substitution")


def cmd_subst_expand(a):
    s = _subst(a)
    n = a.length
    if n > a.prefix_cap:
        raise CliError(f"length {n} exceeds the prefix cap {a.prefix_cap}", EXIT_USAGE)
    report = validate(s)
    if not report:
        raise CliError("invalid substitution: " + "; ".join(report.describe(s.names)), EXIT_DOMAIN)
    w = cached_prefix(s, n)
    text = s.show_word(w, "" if all(len(x) == 1 for x in s.names) else " ")
    return {"length": n, "prefix": text}, text, EXIT_OK


def cmd_subst_matrix(a):
    s = _subst(a)
    m = incidence_matrix(s.morphism)
    text = "\n".join(" ".join(f"{v:>3}" for v in row) for row in m.rows)
    return {"alphabet": list(s.names), "matrix": m.to_json()}, text, EXIT_OK


def cmd_subst_validate(a):
    s = _subst(a)
    r = validate(s)
    lines = r.describe(s.names)
    payload = {"valid": r.ok, "failures": lines}
    return payload, "valid" if r.ok else "invalid:\n  " + "\n  ".join(lines), EXIT_OK if r.ok else EXIT_DOMAIN


def cmd_subst_primitive(a):
    s = _subst(a)
    p = is_primitive(incidence_matrix(s.morphism))
    return {"primitive": p}, "primitive" if p else "not primitive", EXIT_OK


def cmd_subst_decompose(a):
    s = _subst(a)
    m = incidence_matrix(s.morphism)
    dec = primitive_decomposition(m)
    payload = dec.to_json(s.names)
    payload["block_form_ok"] = not block_form_violations(m, dec)
    try:
        k, _ = condition_C_power(s)
        payload["condition_C_power"] = k
    except ValueError as e:
        payload["condition_C_power"] = None
        payload["condition_C_error"] = str(e)
    comps = " ".join("{" + ",".join(s.names[x] for x in c) + "}" + ("*" if pr else "")
                     for c, pr in zip(dec.partition, dec.principal))
    text = f"p = {dec.p}; components {comps} (* principal); condition (C) at power {payload['condition_C_power']}"
    return payload, text, EXIT_OK


def cmd_subst_blocks(a):
    s = _subst(a)
    sigma, rho = block_substitution(s, a.n)
    text = sigma.show() + "\nrho: " + ", ".join(
        f"{sigma.names[i]}->{s.names[r[0]]}" for i, r in enumerate(rho.rules))
    return {"substitution": sigma.to_json(),
            "rho": {sigma.names[i]: s.names[r[0]] for i, r in enumerate(rho.rules)}}, text, EXIT_OK


def cmd_subst_project(a):
    s = _subst(a)
    t = parse_inputs(a.target, "substitution")
    w = projects_onto(s, t)
    prim = {"source_primitive": is_primitive(incidence_matrix(s.morphism)),
            "target_primitive": is_primitive(incidence_matrix(t.morphism))}
    if w is None:
        return {"witness": None, **prim}, "no letter-to-letter projection", EXIT_OK
    mapping = {s.names[x]: t.names[y] for x, y in enumerate(w.mapping)}
    return {"witness": mapping, **prim}, w.show(s, t), EXIT_OK


def cmd_subst_derive(a):
    s = _subst(a)
    tv, table = derived_substitution(s, word_arg(s, a.prefix), a.window)
    payload = {"substitution": tv.to_json(), "table": table.to_json(s.names)}
    text = tv.show() + "\n" + "\n".join(f"Θ({k}) = {v}" for k, v in payload["table"]["theta"].items())
    return payload, text, EXIT_OK


def cmd_spectra_charpoly(a):
    p = char_poly(matrix_arg(a.file))
    return {"polynomial": polys.to_str(p), "coefficients": list(p)}, polys.to_str(p), EXIT_OK


def cmd_spectra_eig(a):
    x = algebraic_arg(a.source)
    if a.width:
        x.refine(a.width)
    payload = {"polynomial": polys.to_str(x.poly), "lo": str(x.lo), "hi": str(x.hi),
               "approx": float(x)}
    return payload, f"root of {payload['polynomial']} in ({x.lo}, {x.hi}] ≈ {float(x):.15g}", EXIT_OK


def cmd_spectra_depend(a):
    r = dependence_report(algebraic_arg(a.a), algebraic_arg(a.b), a.max_exp)
    text = f"({r.exponents[0]},{r.exponents[1]})" if r.exponents else r.status
    return r.to_json(), text, EXIT_OK


def cmd_spectra_freq(a):
    s = _subst(a)
    iv = frequency_vector(s, a.tolerance)
    payload = {s.names[i]: {"lo": str(lo), "hi": str(hi), "approx": float((lo + hi) / 2)}
               for i, (lo, hi) in enumerate(iv)}
    text = "\n".join(f"{k}: {v['approx']:.9f}" for k, v in payload.items())
    return payload, text, EXIT_OK


def cmd_returns_table(a):
    s = _subst(a)
    t = return_words(fixed_point(s), word_arg(s, a.prefix), a.window)
    payload = t.to_json(s.names)
    return payload, "\n".join(f"Θ({k}) = {v}" for k, v in payload["theta"].items()), EXIT_OK


def cmd_returns_derive(a):
    s = _subst(a)
    d = derived_sequence(fixed_point(s), word_arg(s, a.prefix), a.window)
    w = d.sequence.prefix(a.length)
    text = "".join(str(k + 1) for k in w) if d.table.card < 10 else " ".join(str(k + 1) for k in w)
    return {"prefix": [k + 1 for k in w], "table": d.table.to_json(s.names)}, text, EXIT_OK


def cmd_returns_detect(a):
    s = _subst(a)
    r = detect_primitive_substitutive(fixed_point(s), a.max_prefixes)
    if r is None:
        return {"found": False}, "inconclusive", EXIT_OK
    payload = {"found": True, "substitution": r.substitution.to_json(),
               "prefixes_examined": r.prefixes_examined,
               "bases": [s.show_word(t.base) for t in r.tables]}
    return payload, r.substitution.show(), EXIT_OK


def cmd_returns_linrec(a):
    r = linrec_survey(_subst(a), a.count)
    payload = r.to_json()
    payload["bounds_hold"] = r.holds()
    return payload, f"K = {r.K} ≈ {float(r.K):.6g}; bounds hold: {r.holds()}", EXIT_OK


def cmd_num_build(a):
    U = system_arg(a.system)
    vals = U.values(a.count)
    rec = U.recurrence
    payload = {"values": vals, "digits": U.digits,
               "recurrence": rec.to_json() if rec else None}
    return payload, " ".join(map(str, vals)), EXIT_OK


def cmd_num_repr(a):
    w = greedy_representation(a.n, system_arg(a.system))
    text = "".join(map(str, w))
    return {"n": a.n, "representation": text}, text, EXIT_OK


def cmd_num_value(a):
    v = digits_value(digits_arg(a.word), system_arg(a.system))
    return {"word": a.word, "value": v}, str(v), EXIT_OK


def cmd_num_member(a):
    r = is_greedy_word(digits_arg(a.word), system_arg(a.system))
    return {"word": a.word, "member": r.ok, "reason": r.reason}, (
        "yes" if r.ok else f"no: {r.reason}"), EXIT_OK


def cmd_num_recur(a):
    r = detect_linear_recurrence(system_arg(a.system), a.max_order, a.sample)
    if r is None:
        return {"recurrence": None}, "no recurrence found", EXIT_OK
    return r.to_json(), f"{tuple(r.coefficients)}  {polys.to_str(r.polynomial)}", EXIT_OK


def cmd_num_beta(a):
    p = parry_arg(a.parry)
    b = _guard_parry(lambda: beta_number(p))
    digits = beta_expansion(1, b, a.count)
    return {"alpha": {"polynomial": polys.to_str(b.alpha.poly), "approx": float(b.alpha)},
            "digits": digits}, ",".join(map(str, digits)), EXIT_OK


def cmd_num_omega(a):
    p = parry_arg(a.parry)
    s = _guard_parry(lambda: omega_substitution(p))
    return s.to_json(), s.show(), EXIT_OK


def _dfa_out(d: DigitDFA):
    return d.to_json(), f"{d.size} states, order {d.order}, accepting {sorted(d.accepting)}", EXIT_OK


def cmd_dfa_ap(a):
    U = system_arg(a.system)
    if a.order == "lsd":
        return _dfa_out(ap_recognizer(a.modulus, a.residue, U))
    return _dfa_out(msd_ap_recognizer(a.modulus, a.residue, U))


def cmd_dfa_finite(a):
    values = [int(v) for v in a.values.split(",") if v]
    return _dfa_out(finite_set_recognizer(values, system_arg(a.system)))


def cmd_dfa_bool(a):
    return _dfa_out(dfa_boolean(a.op, parse_inputs(a.left, "dfa"), parse_inputs(a.right, "dfa")))


def cmd_dfa_reverse(a):
    return _dfa_out(reverse_determinize(parse_inputs(a.file, "dfa")))


def cmd_dfa_member(a):
    ok = run_membership(parse_inputs(a.file, "dfa"), a.n, system_arg(a.system))
    return {"n": a.n, "accepted": ok}, "accepted" if ok else "rejected", EXIT_OK


def cmd_cobham_run(a):
    E = set_arg(a.set)
    pu, pv = parry_arg(a.u), parry_arg(a.v)
    params = CobhamParams(window=a.window, max_exp=a.max_exp,
                          dfa_u=parse_inputs(a.dfa_u, "dfa") if a.dfa_u else None,
                          dfa_v=parse_inputs(a.dfa_v, "dfa") if a.dfa_v else None)
    r = _guard_parry(lambda: cobham_experiment(E, pu, pv, params))
    code = EXIT_INCONSISTENT if r.verdict == "inconsistent" else EXIT_OK
    return r.to_json(), r.text(), code


# -- argument parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE")
    common.add_argument("--window", type=int, default=None, metavar="N")
    common.add_argument("--max-exp", type=int, default=DEFAULT_MAX_EXP, metavar="N")
    common.add_argument("--prefix-cap", type=int, default=DEFAULT_PREFIX_CAP, metavar="N")

    parser = argparse.ArgumentParser(prog="cobhamlab", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def add(group, name, handler, help_text, args=()):
        sp = group.add_parser(name, parents=[common], help=help_text)
        for flags, kw in args:
            sp.add_argument(*flags, **kw)
        sp.set_defaults(handler=handler)
        return sp

    subst_file = (("file",), {"help": "substitution JSON"})
    g = groups.add_parser("subst", help="substitutions").add_subparsers(dest="cmd", required=True)
    add(g, "expand", cmd_subst_expand, "prefix of the fixed point",
        [subst_file, (("--length",), {"type": int, "default": 40})])
    add(g, "matrix", cmd_subst_matrix, "incidence matrix", [subst_file])
    add(g, "validate", cmd_subst_validate, "check the substitution conditions", [subst_file])
    add(g, "primitive", cmd_subst_primitive, "primitivity test", [subst_file])
    add(g, "decompose", cmd_subst_decompose, "primitive components and condition (C)", [subst_file])
    add(g, "blocks", cmd_subst_blocks, "n-block substitution",
        [subst_file, (("--n",), {"type": int, "default": 2})])
    add(g, "project", cmd_subst_project, "letter-to-letter projection onto a target",
        [subst_file, (("target",), {"help": "target substitution JSON"})])
    add(g, "derive", cmd_subst_derive, "derived substitution on a prefix",
        [subst_file, (("--prefix",), {"required": True})])

    g = groups.add_parser("spectra", help="eigenvalues and dependence").add_subparsers(dest="cmd", required=True)
    add(g, "charpoly", cmd_spectra_charpoly, "characteristic polynomial",
        [(("file",), {"help": "substitution or matrix JSON"})])
    add(g, "eig", cmd_spectra_eig, "dominant eigenvalue / largest real root",
        [(("source",), {"help": "poly:..., integer, substitution or matrix JSON"}),
         (("--width",), {"type": float, "default": None})])
    add(g, "depend", cmd_spectra_depend, "multiplicative dependence",
        [(("--a",), {"required": True}), (("--b",), {"required": True}),
         (("--max",), {"type": int, "dest": "max_exp_alias", "default": None})])
    add(g, "freq", cmd_spectra_freq, "letter frequency enclosures",
        [subst_file, (("--tolerance",), {"type": float, "default": 1e-6})])

    g = groups.add_parser("returns", help="return words").add_subparsers(dest="cmd", required=True)
    add(g, "table", cmd_returns_table, "return words on a prefix",
        [subst_file, (("--prefix",), {"required": True})])
    add(g, "derive", cmd_returns_derive, "derived sequence prefix",
        [subst_file, (("--prefix",), {"required": True}), (("--length",), {"type": int, "default": 40})])
    add(g, "detect", cmd_returns_detect, "search for a self-derived presentation",
        [subst_file, (("--max-prefixes",), {"type": int, "default": 8})])
    add(g, "linrec", cmd_returns_linrec, "linear recurrence survey",
        [subst_file, (("--count",), {"type": int, "default": 8})])

    sys_arg = (("system",), {"help": "system JSON, parry:PRE/PER or base:b"})
    g = groups.add_parser("num", help="numeration systems").add_subparsers(dest="cmd", required=True)
    add(g, "build", cmd_num_build, "first values of U", [sys_arg, (("--count",), {"type": int, "default": 12})])
    add(g, "repr", cmd_num_repr, "greedy representation", [sys_arg, (("n",), {"type": int})])
    add(g, "value", cmd_num_value, "value of a digit word", [sys_arg, (("word",), {})])
    add(g, "member", cmd_num_member, "is the word in L(U)", [sys_arg, (("word",), {})])
    add(g, "recur", cmd_num_recur, "detect a linear recurrence",
        [sys_arg, (("--max-order",), {"type": int, "default": 6}), (("--sample",), {"type": int, "default": 40})])
    parry = (("parry",), {"help": "Parry JSON or parry:PRE/PER"})
    add(g, "beta", cmd_num_beta, "digits of d_alpha(1)", [parry, (("--count",), {"type": int, "default": 12})])
    add(g, "omega", cmd_num_omega, "the omega substitution of Parry data", [parry])

    g = groups.add_parser("dfa", help="digit automata").add_subparsers(dest="cmd", required=True)
    add(g, "ap", cmd_dfa_ap, "arithmetic progression recognizer",
        [(("--system",), {"required": True}), (("--modulus",), {"type": int, "required": True}),
         (("--residue",), {"type": int, "required": True}),
         (("--order",), {"choices": ["msd", "lsd"], "default": "msd"})])
    add(g, "finite", cmd_dfa_finite, "finite set recognizer",
        [(("--system",), {"required": True}), (("--values",), {"required": True})])
    add(g, "bool", cmd_dfa_bool, "boolean combination",
        [(("op",), {"choices": ["union", "intersection", "difference"]}), (("left",), {}), (("right",), {})])
    add(g, "reverse", cmd_dfa_reverse, "mirror automaton", [(("file",), {})])
    add(g, "member", cmd_dfa_member, "membership of n",
        [(("file",), {}), (("n",), {"type": int}), (("--system",), {"required": True})])

    g = groups.add_parser("cobham", help="Cobham experiment").add_subparsers(dest="cmd", required=True)
    add(g, "run", cmd_cobham_run, "run the experiment on a set",
        [(("--set",), {"required": True}), (("--u",), {"required": True}), (("--v",), {"required": True}),
         (("--dfa-u",), {"default": None}), (("--dfa-v",), {"default": None})])
    return parser


def _emit(args, payload, text) -> None:
    out = json.dumps(payload, sort_keys=True, indent=2, default=str) if args.json else text
    if args.out:
        Path(args.out).write_text(out + "\n")
    else:
        sys.stdout.write(out + "\n")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "max_exp_alias", None):
        args.max_exp = args.max_exp_alias
    if args.window is None:
        args.window = DEFAULT_WINDOW if args.group == "cobham" else 4096
    try:
        payload, text, code = args.handler(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (ValueError, ArithmeticError, AutomatonError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(args, payload, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
