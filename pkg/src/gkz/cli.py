"""Command-line front end.

    gkz COMMAND [PROBLEM.json] [--budget N] [--order Q] [--window LO:HI] [--verify]

The problem file (or standard input) is a JSON object with keys ``A``,
``beta``, optional ``beta2``, ``w`` and ``options``.  Rationals are written
as strings such as "1/2" or "-3".  Column indices in the output are 1-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

from .errors import BudgetExceeded, GKZError, InternalInconsistency, PreconditionError
from .formulas import (
    dim_log_free,
    exceptional_sweep,
    is_cohen_macaulay,
    is_exceptional,
    rank_breakdown,
    single_cell_triangulation,
)
from .geometry import (
    Configuration,
    Face,
    configuration_volume,
    cone_faces,
    is_simplex,
    make_configuration,
    normalized_volume,
    regular_triangulation,
)
from .monoid import DEFAULT_BUDGET
from .params import e_tau, fingerprint, minface
from .series import minex, phi_series, verify_annihilation

COMMANDS = ("triangulate", "faces", "etau", "dim", "rank", "exceptional", "sweep", "cm",
            "series", "iso", "verify")

# 4: a self-check failed (verify command, or two independent routes disagreed)
EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_BUDGET, EXIT_VERIFY_FAILED = 0, 1, 2, 3, 4


class ParseError(Exception):
    pass


def q(x) -> str:
    return str(Fraction(x))


def qvec(v) -> list[str]:
    return [q(x) for x in v]


def parse_rational(x, what: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"{what}: write rationals as strings like \"1/2\", got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{what}: cannot parse {x!r} as a rational") from exc
    raise ParseError(f"{what}: unexpected value {x!r}")


def parse_vector(x, what: str, length: int | None = None) -> tuple[Fraction, ...]:
    if not isinstance(x, list):
        raise ParseError(f"{what} must be a list")
    v = tuple(parse_rational(t, what) for t in x)
    if length is not None and len(v) != length:
        raise ParseError(f"{what} has length {len(v)}, expected {length}")
    return v


def parse_problem(doc: Any) -> dict:
    if not isinstance(doc, dict):
        raise ParseError("problem must be a JSON object")
    if "A" not in doc:
        raise ParseError("missing key A")
    A = doc["A"]
    if not isinstance(A, list) or not A or not all(isinstance(r, list) for r in A):
        raise ParseError("A must be a nonempty list of rows")
    rows = []
    for r in A:
        row = []
        for x in r:
            f = parse_rational(x, "A")
            if f.denominator != 1:
                raise ParseError("A must have integer entries")
            row.append(int(f))
        rows.append(row)
    if len({len(r) for r in rows}) != 1 or not rows[0]:
        raise ParseError("A must be a rectangular nonempty matrix")
    d, n = len(rows), len(rows[0])
    options = doc.get("options", {}) or {}
    if not isinstance(options, dict):
        raise ParseError("options must be an object")
    out = {"A": rows, "options": dict(options)}
    if "beta" in doc:
        out["beta"] = parse_vector(doc["beta"], "beta", d)
    if "beta2" in doc:
        out["beta2"] = parse_vector(doc["beta2"], "beta2", d)
    if doc.get("w") is not None:
        out["w"] = parse_vector(doc["w"], "w", n)
    return out


def echo(problem: dict) -> dict:
    out = {"A": problem["A"], "options": problem["options"]}
    for key in ("beta", "beta2", "w"):
        if key in problem:
            out[key] = qvec(problem[key])
    return out


def face_json(f: Face, cfg: Configuration | None = None) -> dict:
    out = {"vertices": [j + 1 for j in f.vertices], "members": [j + 1 for j in f.members],
           "dim": f.span_dim}
    if cfg is not None:
        out["volume"] = normalized_volume(cfg, f)
    return out


def require(problem: dict, key: str, command: str):
    if key not in problem:
        raise ParseError(f"command {command} needs {key}")
    return problem[key]


def _triangulation(cfg, problem):
    w = require(problem, "w", "this command")
    return regular_triangulation(cfg, w, bool(problem["options"].get("perturb", False)))


def cmd_triangulate(cfg, problem, opts):
    T = _triangulation(cfg, problem)
    res = {"cells": [face_json(c, cfg) for c in T.cells], "volume": configuration_volume(cfg)}
    if opts.verify:
        from .oracle import oracle_lower_hull

        res["oracle_agrees"] = oracle_lower_hull(cfg, T.weight.values, T.weight.perturb).cells == T.cells
    return res


def cmd_faces(cfg, problem, opts):
    return {"faces": [face_json(f, cfg) for f in cone_faces(cfg)], "simplex": is_simplex(cfg),
            "volume": configuration_volume(cfg)}


def cmd_etau(cfg, problem, opts):
    beta = require(problem, "beta", "etau")
    faces = []
    agree = True
    for f in cone_faces(cfg):
        classes = e_tau(cfg, f, beta, opts.budget)
        entry = face_json(f)
        entry["classes"] = [qvec(c.rep) for c in classes]
        faces.append(entry)
        if opts.verify:
            from .oracle import oracle_e_tau

            bound = int(problem["options"].get("degree_bound", 6))
            agree &= {c.rep for c in oracle_e_tau(cfg, f, beta, bound)} <= {c.rep for c in classes}
    res = {"faces": faces, "minface": [face_json(f) for f in minface(cfg, beta, opts.budget)]}
    if opts.verify:
        res["oracle_agrees"] = agree
    return res


def _breakdown_json(b):
    return [
        {"face": face_json(c.face), "class": qvec(c.eclass.rep), "volume": c.volume,
         "value": c.value, "formula": c.formula()}
        for c in b.contributions
    ]


def cmd_dim(cfg, problem, opts):
    beta = require(problem, "beta", "dim")
    T = _triangulation(cfg, problem)
    b = dim_log_free(cfg, beta, T, opts.budget)
    exps = minex(cfg, beta, T, budget=opts.budget)
    return {"dimension": b.total, "breakdown": _breakdown_json(b), "formula": b.formula(),
            "exponents": [{"v": qvec(e.v), "face": face_json(e.face)} for e in exps]}


def cmd_rank(cfg, problem, opts):
    beta = require(problem, "beta", "rank")
    b = rank_breakdown(cfg, beta, opts.budget)
    vol = configuration_volume(cfg)
    return {"rank": b.total, "volume": vol, "exceptional": b.total > vol,
            "breakdown": _breakdown_json(b), "by_dimension": {str(k): v for k, v in sorted(b.by_dimension().items())}}


def cmd_exceptional(cfg, problem, opts):
    beta = require(problem, "beta", "exceptional")
    r = is_exceptional(cfg, beta, opts.budget)
    wit = None
    if r.witness is not None:
        wit = {"face1": face_json(r.witness.face1), "face2": face_json(r.witness.face2),
               "meet": face_json(r.witness.meet), "lambda": qvec(r.witness.lam)}
    return {"exceptional": r.exceptional, "rank": r.rank, "volume": r.volume, "witness": wit}


def _window(problem, opts):
    raw = opts.window or problem["options"].get("window")
    if raw is None:
        return (0, 6)
    if isinstance(raw, str):
        lo, _, hi = raw.partition(":")
        try:
            return (int(lo), int(hi))
        except ValueError as exc:
            raise ParseError(f"window must look like LO:HI, got {raw!r}") from exc
    if isinstance(raw, list) and len(raw) == 2:
        return (int(raw[0]), int(raw[1]))
    raise ParseError(f"bad window {raw!r}")


def cmd_sweep(cfg, problem, opts):
    window = _window(problem, opts)
    return {"window": list(window), "exceptional": [qvec(b) for b in exceptional_sweep(cfg, window, opts.budget)]}


def cmd_cm(cfg, problem, opts):
    bound = int(problem["options"].get("search_bound", 8))
    r = is_cohen_macaulay(cfg, bound)
    wit = None
    if r.witness is not None:
        beta, m1, m2 = r.witness
        wit = {"beta": qvec(beta), "m1": list(m1), "m2": list(m2)}
    return {"cohen_macaulay": r.is_cm, "verdict": r.verdict, "witness": wit,
            "holes": [qvec(h) for h in r.holes], "apery_set": [qvec(a) for a in r.apery],
            "search_bound": bound}


def cmd_series(cfg, problem, opts):
    beta = require(problem, "beta", "series")
    if "w" in problem:
        T = _triangulation(cfg, problem)
    else:
        T = single_cell_triangulation(cfg)
    order = opts.order if opts.order is not None else parse_rational(problem["options"].get("order", 10), "order")
    out = []
    for e in minex(cfg, beta, T, budget=opts.budget):
        s = phi_series(cfg, e, T.weight, order, T)
        entry = {"exponent": qvec(e.v), "face": face_json(e.face),
                 "terms": [{"u": list(u), "coeff": q(c)} for u, c in s.terms]}
        if opts.verify:
            from .oracle import oracle_series_check

            rep = verify_annihilation(s, cfg, beta, int(problem["options"].get("degree_bound", 4)))
            entry["annihilated"] = rep.ok
            entry["oracle_agrees"] = oracle_series_check(cfg, e.v, T.weight, order, terms=s.terms)
        out.append(entry)
    return {"order": q(order), "weight": qvec(T.weight.values), "series": out}


def cmd_iso(cfg, problem, opts):
    b1 = require(problem, "beta", "iso")
    b2 = require(problem, "beta2", "iso")
    f1, f2 = fingerprint(cfg, b1, opts.budget), fingerprint(cfg, b2, opts.budget)
    return {"isomorphic": f1 == f2, "differ_at": [face_json(f) for f in f1.differences(f2)]}


def cmd_verify(opts):
    from .worked import all_checks

    checks = all_checks()
    return {"checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
            "passed": all(c.passed for c in checks)}


HANDLERS = {
    "triangulate": cmd_triangulate, "faces": cmd_faces, "etau": cmd_etau, "dim": cmd_dim,
    "rank": cmd_rank, "exceptional": cmd_exceptional, "sweep": cmd_sweep, "cm": cmd_cm,
    "series": cmd_series, "iso": cmd_iso,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gkz", description="Exact computations for A-hypergeometric systems.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("problem", nargs="?", help="JSON problem file (default: standard input)")
    p.add_argument("--budget", type=int, default=None, help="search budget (total degree)")
    p.add_argument("--order", default=None, help="series truncation in w-weight (default 10)")
    p.add_argument("--window", default=None, help="degree window LO:HI for sweep")
    p.add_argument("--verify", action="store_true", help="also run the brute-force oracles")
    return p


def _self_check_failed(doc) -> bool:
    """Whether any oracle or annihilation flag in a result is false."""
    if isinstance(doc, dict):
        return any((k in ("oracle_agrees", "annihilated") and v is False) or _self_check_failed(v)
                   for k, v in doc.items())
    if isinstance(doc, list):
        return any(_self_check_failed(x) for x in doc)
    return False


def _emit_error(kind: str, message: str, code: int) -> int:
    json.dump({"error": kind, "message": message}, sys.stderr, sort_keys=True)
    sys.stderr.write("\n")
    return code


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        if opts.order is not None:
            opts.order = parse_rational(opts.order, "--order")
        if opts.command == "verify":
            result = cmd_verify(opts)
            doc = {"command": "verify", "result": result}
            json.dump(doc, sys.stdout, sort_keys=True, indent=2)
            sys.stdout.write("\n")
            return EXIT_OK if result["passed"] else EXIT_VERIFY_FAILED
        if opts.problem:
            with open(opts.problem, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        problem = parse_problem(raw)
        if opts.budget is None:
            opts.budget = int(problem["options"].get("budget", DEFAULT_BUDGET))
        cfg = make_configuration(problem["A"])
        result = HANDLERS[opts.command](cfg, problem, opts)
    except (ParseError, OSError, ValueError) as exc:
        return _emit_error(type(exc).__name__, str(exc), EXIT_PARSE)
    except PreconditionError as exc:
        return _emit_error(type(exc).__name__, str(exc), EXIT_PRECONDITION)
    except BudgetExceeded as exc:
        return _emit_error(type(exc).__name__, str(exc), EXIT_BUDGET)
    except (InternalInconsistency, GKZError) as exc:
        return _emit_error(type(exc).__name__, str(exc), EXIT_VERIFY_FAILED)
    doc = {"command": opts.command, "input": echo(problem), "result": result}
    json.dump(doc, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    return EXIT_VERIFY_FAILED if _self_check_failed(result) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
