"""Command-line front end.

    gaussbinom <check|generators|verify|scheme|structure> <path|builtin> [options]

The JSON report goes to standard output; a short summary goes to standard
error unless ``--json`` is given.  Exit codes: 0 success or binomial, 1 a
definitive negative decision, 2 bad input, 3 an oracle disagreement.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path as FsPath
from typing import Optional

from . import __version__
from .blocks import is_block_graph
from .corpus import resolve
from .graphs import ColoredGraph, GraphError, connected_components, parse_graph, serialize_graph
from .ideal import (
    NotBinomialError,
    decide_binomial,
    generators_document,
    kernel_membership,
    linear_generators,
    psi_image,
    quadratic_generators,
)
from .oracle import (
    DEFAULT_SEED,
    fundamental_identity,
    jordan_closure,
    model_dimension,
    vanish_report,
    witness_nonbinomial,
    witness_partners,
)
from .flows import lift, talaska_minor
from .regularity import regularity_report
from .schemes import (
    PartitionError,
    RelationPartition,
    is_association_scheme,
    is_coherent_configuration,
    is_jordan_scheme,
    is_rcop,
    is_strongly_regular,
    j15,
    parse_partition,
    partition_of_graph,
    shrikhande_colored,
    shrikhande_graph,
    symmetrization_obstruction,
    trivial_partition,
)
from .series import SigmaPolynomial, evaluate_sigma_poly
from .structure import StructureError, depth_function, lemma_checks

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_ORACLE = 0, 1, 2, 3
SEED_ENV = ("GAUSSBINOM_SEED", "TOOL_SEED")


class InputError(Exception):
    pass


def default_seed() -> int:
    for name in SEED_ENV:
        raw = os.environ.get(name)
        if raw:
            try:
                return int(raw)
            except ValueError:
                raise InputError(f"{name} must be an integer, got {raw!r}") from None
    return DEFAULT_SEED


def load_graph(source: str) -> ColoredGraph:
    bundled = resolve(source)
    if bundled is not None:
        return bundled
    try:
        text = FsPath(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return parse_graph(text)
    except GraphError as exc:
        raise InputError(str(exc)) from None


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# -- commands -----------------------------------------------------------------


def cmd_check(g: ColoredGraph, args) -> tuple[int, dict, str]:
    comps = connected_components(g)
    block = all(is_block_graph(c) for c in comps)
    reg = regularity_report(g)
    dec = decide_binomial(g)
    result = {
        "block_graph": block,
        "connected": len(comps) <= 1,
        "regularity": reg.as_dict(),
        "triangle_regular": reg.triangle_regular,
        "decision": dec.as_dict(),
        "binomial": dec.binomial,
        "rcop": is_rcop(g),
    }
    summary = f"binomial={dec.binomial} block_graph={block} triangle_regular={reg.triangle_regular} rcop={result['rcop']}"
    if not dec.binomial:
        summary += f" ({dec.reason})"
    return (EXIT_OK if dec.binomial else EXIT_NEGATIVE), result, summary


def cmd_generators(g: ColoredGraph, args) -> tuple[int, dict, str]:
    try:
        doc = generators_document(g, all_pairs=args.all_pairs)
    except NotBinomialError:
        dec = decide_binomial(g)
        return EXIT_NEGATIVE, {"binomial": False, "decision": dec.as_dict()}, f"not binomial ({dec.reason})"
    summary = f"{len(doc['linear'])} linear, {len(doc['quadratic'])} quadratic generators"
    return EXIT_OK, {"binomial": True, "generators": doc}, summary


def _check_entry(name: str, ok: bool, **extra) -> dict:
    return {"name": name, "status": "pass" if ok else "fail", **extra}


def _verify_binomial(g: ColoredGraph, args, seed: int) -> list[dict]:
    checks = []
    gens = linear_generators(g) + quadratic_generators(g)
    polys = [SigmaPolynomial.from_binomial(b) for b in gens]

    psi_ok = all(psi_image(g, b.lhs) == psi_image(g, b.rhs) for b in gens)
    checks.append(_check_entry("psi_images", psi_ok, generators=len(gens)))

    reports = vanish_report(g, polys, trials=args.trials, seed=seed, rational=args.rational)
    bad = [str(b) for b, r in zip(gens, reports) if not r.vanishes]
    worst = max((max(r.residuals) for r in reports), default=0)
    checks.append(
        _check_entry("numeric_vanish", not bad, rational=args.rational, trials=args.trials, seed=seed,
                     max_residual=str(worst), failures=bad[:10])
    )

    series_bad = [str(b) for b, p in zip(gens, polys) if not evaluate_sigma_poly(g, p, args.degree).is_zero()]
    checks.append(_check_entry("series_zero", not series_bad, degree=args.degree, failures=series_bad[:10]))

    cert_bad, moves = [], 0
    for b in gens:
        try:
            cert = kernel_membership(g, b)
        except Exception as exc:  # any failure here is an oracle disagreement
            cert_bad.append(f"{b}: {exc}")
            continue
        if not cert.in_kernel:
            cert_bad.append(str(b))
        elif cert.trace is not None:
            moves += len(cert.trace)
    checks.append(_check_entry("rewrite_certificates", not cert_bad, moves=moves, failures=cert_bad[:10]))
    return checks


def _verify_nonbinomial(g: ColoredGraph, args, seed: int) -> list[dict]:
    w = witness_nonbinomial(g)
    comp = g.induced(decide_binomial(g).component)
    rep = vanish_report(comp, [w.polynomial], trials=args.trials, seed=seed, rational=args.rational)[0]
    partners = witness_partners(comp, w)
    return [
        _check_entry("witness_vanishes", rep.vanishes, rational=args.rational, trials=args.trials, seed=seed,
                     max_residual=str(max(rep.residuals))),
        _check_entry("witness_isolated", not partners, degree_bound=w.degree_bound,
                     partners=[str(m) for m in partners], witness=w.as_dict()),
    ]


def _verify_common(g: ColoredGraph, args, seed: int) -> list[dict]:
    checks = []
    for comp in connected_components(g):
        dim = model_dimension(comp, seed)
        checks.append(_check_entry("model_dimension", dim == len(comp.colors), dimension=dim, colors=len(comp.colors)))
        if len(comp) > 16:
            continue
        k = min(2, len(comp))
        A, B = list(comp.vertices[:k]), list(comp.vertices[-k:])
        lhs, rhs = fundamental_identity(comp, A, B, seed)
        ok = abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
        checks.append(_check_entry("fundamental_identity", ok, rows=A, cols=B, residual=abs(lhs - rhs)))
        # keep the lift's arc matrix well inside the unit disc
        maxdeg = max((len(comp.neighbors(v)) for v in comp.vertices), default=0)
        y = {c: 0.1 for c in comp.colors}
        y.update({comp.edge_color(a, b): 0.4 / (maxdeg + 1) for a, b in comp.edges})
        dg = lift(comp, y)
        ia = [comp.index[a] for a in A]
        ib = [comp.index[b] for b in B]
        flow, minor = talaska_minor(dg, ia, ib)
        ok = abs(flow - minor) <= 1e-10 * max(1.0, abs(minor))
        checks.append(_check_entry("talaska", ok, residual=abs(flow - minor)))
    return checks


def cmd_verify(g: ColoredGraph, args) -> tuple[int, dict, str]:
    seed = args.seed
    dec = decide_binomial(g)
    checks = _verify_binomial(g, args, seed) if dec.binomial else _verify_nonbinomial(g, args, seed)
    checks += _verify_common(g, args, seed)
    if dec.binomial and g.is_complete() and len(g) > 1:
        checks.append(_check_entry("jordan_closure", jordan_closure(g)))
    failed = [c["name"] for c in checks if c["status"] != "pass"]
    result = {"binomial": dec.binomial, "seed": seed, "degree": args.degree, "checks": checks}
    if failed:
        return EXIT_ORACLE, result, "oracle disagreement: " + ", ".join(failed)
    summary = f"all {len(checks)} checks pass (binomial={dec.binomial})"
    return (EXIT_OK if dec.binomial else EXIT_NEGATIVE), result, summary


def _scheme_source(source: str) -> tuple[RelationPartition, Optional[ColoredGraph], Optional[ColoredGraph]]:
    """(partition, colored complete graph, underlying graph for srg parameters)."""
    if source == "shrikhande":
        return partition_of_graph(shrikhande_colored()), shrikhande_colored(), shrikhande_graph()
    if source == "j15":
        return partition_of_graph(j15()), j15(), None
    if source.startswith("trivial:"):
        try:
            n = int(source.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad builtin {source!r}") from None
        return trivial_partition(n), None, None
    try:
        text = FsPath(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None
    return parse_partition(text), None, None


def cmd_scheme(source: str, args) -> tuple[int, dict, str]:
    P, colored, plain = _scheme_source(source)
    table = is_coherent_configuration(P)
    result: dict = {
        "size": P.size,
        "classes": len(P.classes),
        "coherent": table is not None,
        "association_scheme": is_association_scheme(P),
        "symmetric": P.is_symmetric(),
    }
    if table is not None:
        result["intersection_numbers"] = [[i, j, k, c] for (i, j, k), c in sorted(table.p.items())]
    try:
        q = is_jordan_scheme(P)
        result["jordan"] = q is not None
        if q is not None:
            result["q_table"] = [[i, j, k, c] for (i, j, k), c in sorted(q.items())]
    except PartitionError as exc:
        result["jordan"] = False
        result["jordan_note"] = str(exc)
    if colored is not None:
        obs = symmetrization_obstruction(colored)
        result["symmetrization_obstruction"] = (
            {"status": "violated", "edges": [list(obs[0]), list(obs[1])]} if obs else {"status": "none"}
        )
    if plain is not None:
        srg = is_strongly_regular(plain)
        result["srg"] = list(srg) if srg else None
    summary = f"coherent={result['coherent']} association={result['association_scheme']} jordan={result['jordan']}"
    return EXIT_OK, result, summary


def cmd_structure(g: ColoredGraph, args) -> tuple[int, dict, str]:
    d = depth_function(g)
    checks = lemma_checks(g, d)
    result = {
        "peel_sequence": [step.as_dict(g) for step in d.peel_sequence],
        "depth": d.as_dict(g),
        "levels": max(d.kappa.values(), default=0),
        "lemma_checks": checks,
    }
    ok = all(checks.values())
    summary = f"{len(d.peel_sequence)} peel steps, depth {result['levels']}, lemma checks {'pass' if ok else 'FAIL'}"
    return (EXIT_OK if ok else EXIT_ORACLE), result, summary


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaussbinom", description="Binomiality of colored Gaussian graphical models.")
    p.add_argument("command", choices=["check", "generators", "verify", "scheme", "structure"])
    p.add_argument("target", help="graph JSON file, corpus/<name>.json, or a scheme builtin")
    p.add_argument("--degree", type=int, default=6, help="series truncation degree (default 6)")
    p.add_argument("--trials", type=int, default=5, help="numeric samples per check (default 5)")
    p.add_argument("--seed", type=int, default=None, help="sampling seed; else GAUSSBINOM_SEED or a fixed default")
    p.add_argument("--rational", action="store_true", help="exact rational sampling")
    p.add_argument("--all-pairs", action="store_true", help="emit every linear pair, not a spanning set")
    p.add_argument("--json", action="store_true", help="JSON only, no summary on stderr")
    return p


COMMANDS = {
    "check": cmd_check,
    "generators": cmd_generators,
    "verify": cmd_verify,
    "structure": cmd_structure,
}


def run(argv=None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    report = {"command": args.command, "input": args.target, "version": __version__}
    try:
        if args.seed is None:
            args.seed = default_seed()
        if args.degree < 0 or args.trials < 1:
            raise InputError("--degree must be >= 0 and --trials >= 1")
        report["seed"] = args.seed
        if args.command == "scheme":
            report["input_digest"] = digest(args.target)
            code, result, summary = cmd_scheme(args.target, args)
        else:
            g = load_graph(args.target)
            report["input_digest"] = digest(serialize_graph(g))
            code, result, summary = COMMANDS[args.command](g, args)
    except (InputError, GraphError) as exc:
        code, result, summary = EXIT_INPUT, {"error": str(exc), "kind": type(exc).__name__}, f"error: {exc}"
        if isinstance(exc, StructureError):
            result["precondition"] = str(exc)
    report["result"] = result
    report["exit_code"] = code
    report["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    if not args.json:
        print(f"{args.command}: {summary}", file=sys.stderr)
    return code, report


def main(argv=None) -> int:
    code, report = run(argv)
    json.dump(report, sys.stdout, indent=2, sort_keys=True, default=str)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
