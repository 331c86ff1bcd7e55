"""Command-line front end.

Exit codes: 0 pass, 1 mathematical failure, 2 input error, 3 resource cap.
Every report is JSON with sorted keys and echoes the tolerances in effect.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures
from .canonical import (
    DEFAULT_COMMUTE_TOL,
    factorization_triples,
    meet_witness,
    pair_witness_candidates,
    pair_witness_search,
    product_factorization_check,
    product_witness,
)
from .effects import IntervalEffectAlgebra, algebra_from_json, effect_from_json
from .errors import CoexError, DocumentError, NotCommuting, NotMV, SizeExceeded, UnsupportedCarrier
from .groups import DEFAULT_PSD_TOL, HermitianGroup, element_from_json
from .observables import certify_coexistent
from .oracle import OracleConfig, theoremmain_harness
from .witness import beta_from_json, ground_from_json, indices, structural_properties, verify_witness

DOC_VERSION = 1

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def _read_json(source: str):
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {source}: {exc}") from exc


def _tolerances(args) -> dict:
    return {"psd_tolerance": args.psd_tol, "eq_tolerance": args.eq_tol}


def _echo(args) -> dict:
    return {
        "psd_tol": args.psd_tol,
        "eq_tol": args.psd_tol if args.eq_tol is None else args.eq_tol,
        "commute_tol": getattr(args, "commute_tol", DEFAULT_COMMUTE_TOL),
    }


def load_algebra(ref: str, args) -> tuple[IntervalEffectAlgebra, dict]:
    """Resolve a fixture name or a path; returns the algebra and the full document."""
    if ref in fixtures.ALGEBRAS:
        doc = fixtures.fixture_document(ref)
    else:
        doc = _read_json(ref)
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    alg = doc.get("algebra", doc)
    if isinstance(alg, str):
        if alg not in fixtures.ALGEBRAS:
            raise InputError(f"unknown fixture {alg!r}")
        alg = fixtures.fixture_document(alg)
    return algebra_from_json(alg, **_tolerances(args)), doc


def load_beta(ref: str, args):
    E, doc = load_algebra(ref, args)
    if "ground" not in doc or "beta" not in doc:
        raise InputError("beta document needs 'ground' and 'beta'")
    ground = ground_from_json(E, doc["ground"])
    beta, implied = beta_from_json(E, ground, doc["beta"])
    return beta, implied


def beta_document(beta) -> dict:
    doc = beta.to_json()
    doc["version"] = DOC_VERSION
    return doc


# -- subcommands ------------------------------------------------------------

def cmd_verify(args) -> tuple[int, dict]:
    beta, implied = load_beta(args.document, args)
    report = verify_witness(beta, args.max_ground)
    out = {"verification": report.to_json(), "implied": [indices(m) for m in implied],
           "tolerances": _echo(args)}
    if report.passed:
        out["structural"] = structural_properties(beta).to_json()
    return (EXIT_PASS if report.passed else EXIT_FAIL), out


def cmd_certify(args) -> tuple[int, dict]:
    beta, implied = load_beta(args.document, args)
    result = certify_coexistent(beta, args.max_ground)
    out = result.to_json()
    out["implied"] = [indices(m) for m in implied]
    out["tolerances"] = _echo(args)
    return (EXIT_PASS if result.passed else EXIT_FAIL), out


def cmd_oracle(args) -> tuple[int, dict]:
    E, _ = load_algebra(args.algebra, args)
    if not E.is_finite:
        raise UnsupportedCarrier("the oracle harness needs a finite integer carrier")
    cfg = OracleConfig(max_parts=args.max_parts, max_ground=args.max_ground,
                       time_budget=args.time_budget, prune=not args.no_prune)
    try:
        report = theoremmain_harness(E, cfg)
    except SizeExceeded as exc:
        partial = getattr(exc, "partial", None)
        out = partial.to_json() if partial is not None else {}
        out["error"] = str(exc)
        return EXIT_CAP, out
    return (EXIT_PASS if report.agree else EXIT_FAIL), report.to_json()


def _parse_effect(E, raw: str):
    try:
        return effect_from_json(E, json.loads(raw))
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed effect {raw!r}") from exc


def cmd_pair(args) -> tuple[int, dict]:
    E, _ = load_algebra(args.algebra, args)
    a, b = _parse_effect(E, args.a), _parse_effect(E, args.b)
    if args.candidates is not None:
        try:
            raw = json.loads(args.candidates)
        except json.JSONDecodeError as exc:
            raise InputError("malformed candidate list") from exc
        cands = [element_from_json(E.group, c) for c in raw]
        result = pair_witness_candidates(E, a, b, cands)
    else:
        result = pair_witness_search(E, a, b)
    out = result.to_json()
    out["tolerances"] = _echo(args)
    return (EXIT_PASS if result.witnesses else EXIT_FAIL), out


def cmd_product(args) -> tuple[int, dict]:
    E, doc = load_algebra(args.document, args)
    if not isinstance(E.group, HermitianGroup):
        raise UnsupportedCarrier("product witness needs a Hermitian carrier")
    ground = ground_from_json(E, doc.get("ground", doc.get("effects", [])))
    try:
        beta = product_witness(ground, commute_tol=args.commute_tol)
    except NotCommuting as exc:
        return EXIT_FAIL, {"error": str(exc), "pair": list(exc.pair), "residual": exc.residual,
                           "tolerances": _echo(args)}
    report = verify_witness(beta, args.max_ground)
    residuals = [product_factorization_check(beta, x, a, c).residual
                 for x, a, c in factorization_triples(len(ground))]
    worst = max(residuals, default=0.0)
    out = {
        "verification": report.to_json(),
        "factorization": {"checks": len(residuals), "max_residual": worst, "tolerance": 1e-12,
                          "passed": worst <= 1e-12},
        "beta": beta_document(beta),
        "tolerances": _echo(args),
    }
    ok = report.passed and worst <= 1e-12
    return (EXIT_PASS if ok else EXIT_FAIL), out


def cmd_meet(args) -> tuple[int, dict]:
    E, doc = load_algebra(args.algebra, args)
    if args.ground is not None:
        try:
            raw = json.loads(args.ground)
        except json.JSONDecodeError as exc:
            raise InputError("malformed ground list") from exc
    elif "ground" in doc:
        raw = doc["ground"]
    else:
        raise InputError("meet needs a ground set (--ground or a 'ground' entry)")
    ground = ground_from_json(E, raw)
    try:
        beta = meet_witness(E, ground)
    except NotMV as exc:
        return EXIT_FAIL, {"error": str(exc)}
    return EXIT_PASS, beta_document(beta)


def cmd_fixtures(args) -> tuple[int, dict]:
    listing = []
    for name in fixtures.ALGEBRAS:
        E = fixtures.load(name)
        entry = {"name": name, "kind": E.group.kind, "document": E.to_json()}
        if E.is_finite:
            entry["size"] = len(E.elements())
        listing.append(entry)
    return EXIT_PASS, {"fixtures": listing}


# -- parser -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--psd-tol", type=float, default=DEFAULT_PSD_TOL,
                   help="eigenvalue cutoff for positivity on Hermitian carriers")
    p.add_argument("--eq-tol", type=float, default=None,
                   help="entrywise equality tolerance (defaults to --psd-tol)")
    p.add_argument("--max-ground", type=int, default=None,
                   help="ground-set cap (default: $COEX_MAX_GROUND or 12)")
    p.add_argument("-o", "--output", help="write the JSON report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coexist",
                                     description="Witness mappings and coexistence of effects.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check (A1)-(A3) for a beta document")
    p.add_argument("document")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", help="emit a coexistence certificate for a beta document")
    p.add_argument("document")
    _common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("oracle", help="compare witness search and coexistence search")
    p.add_argument("algebra", help="fixture name or algebra document")
    _common(p)
    p.set_defaults(max_ground=3)
    p.add_argument("--max-parts", type=int, default=None)
    p.add_argument("--time-budget", type=float, default=None, help="seconds")
    p.add_argument("--no-prune", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("pair", help="witness elements for a pair a, b")
    p.add_argument("algebra")
    p.add_argument("a", help="effect as JSON")
    p.add_argument("b", help="effect as JSON")
    p.add_argument("--candidates", help="JSON list of candidate effects (Hermitian carriers)")
    _common(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("product", help="product witness for commuting Hermitian effects")
    p.add_argument("document", help="document with 'algebra' and 'ground'")
    p.add_argument("--commute-tol", type=float, default=DEFAULT_COMMUTE_TOL)
    _common(p)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("meet", help="meet witness on an MV fixture, as a beta document")
    p.add_argument("algebra")
    p.add_argument("--ground", help="JSON list of effects")
    _common(p)
    p.set_defaults(func=cmd_meet)

    p = sub.add_parser("fixtures", help="list bundled algebras")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fixtures, psd_tol=DEFAULT_PSD_TOL, eq_tol=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, out = args.func(args)
    except (InputError, DocumentError, UnsupportedCarrier) as exc:
        code, out = EXIT_INPUT, {"error": f"{type(exc).__name__}: {exc}"}
    except SizeExceeded as exc:
        code, out = EXIT_CAP, {"error": f"{type(exc).__name__}: {exc}"}
    except CoexError as exc:
        code, out = EXIT_INPUT, {"error": f"{type(exc).__name__}: {exc}"}
    text = dump(out)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
