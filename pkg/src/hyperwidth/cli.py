"""Command-line front end.

Reports are JSON with sorted keys.  Exact rationals appear as ``"p/q"``
strings in lowest terms and integers as plain numbers.  Vertex, hyperedge
and node numbers in reports are 1-based, matching the file formats.

Exit codes: 0 success, 1 validation failure, 2 parse error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import formats, generators
from .brambles import Bramble, grid_bramble, order_lower_bound
from .core import Graph, Hypergraph, ILabeledGraph, InvalidInstance, LimitExceeded, incidence_graph, primal_graph
from .decomp import (FW_EXACT_LIMIT, TW_EXACT_LIMIT, exact_fwidth, exact_treewidth,
                     heuristic_treewidth, lemma1_convert, sandwich_report, validate_htd, validate_td)
from .games import extract_decomposition, marshal_width, marshals_win, monotonize
from .planarity import planarity_check

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_LIMIT = 0, 1, 2, 3


class _Inputs:
    """Reads input files once and remembers their digests."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def read(self, role: str, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise formats.ParseError(f"cannot read {path}: {exc.strerror}") from exc
        self.digests[role] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise formats.ParseError(f"{path} is not UTF-8 text") from exc


def _jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else formats.fmt_frac(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items) if isinstance(x, (set, frozenset)) else items
    return x


def _emit(report: dict, stream=None) -> None:
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    (stream or sys.stdout).write(text)


def _report(args, inputs: _Inputs, results: dict, verdict: str = "pass") -> dict:
    return {"command": args.echo, "inputs": inputs.digests, "results": results, "verdict": verdict}


def _header_kind(text: str) -> str:
    for raw in text.splitlines():
        toks = raw.split()
        if toks and toks[0] != "c" and not raw.strip().startswith("c"):
            return " ".join(toks[:2])
    return ""


def _load_instance(text: str):
    kind = _header_kind(text)
    if kind == "p hg":
        return formats.parse_hypergraph(text)
    if kind == "p edge":
        return formats.parse_graph(text)
    if kind == "p ilg":
        return formats.parse_ilg(text)
    raise formats.ParseError("expected a 'p hg', 'p edge' or 'p ilg' header", 1, 1)


def _load_hypergraph(text: str) -> Hypergraph:
    if _header_kind(text) != "p hg":
        raise formats.ParseError("expected a 'p hg' hypergraph file", 1, 1)
    return formats.parse_hypergraph(text)


_ID = re.compile(r"\b(node|vertex|edge|set|sets|and) (\d+)")


def _one_based_text(reason: str | None) -> str | None:
    return reason and _ID.sub(lambda m: f"{m.group(1)} {int(m.group(2)) + 1}", reason)


def _one_based(details: dict) -> dict:
    out = {}
    for key, val in details.items():
        if key in ("node", "vertex", "edge", "set"):
            out[key] = val + 1
        elif key == "pair":
            out[key] = [x + 1 for x in val]
        else:
            out[key] = val
    return out


# -- subcommands ---------------------------------------------------------------


def cmd_compute(args, inputs: _Inputs) -> int:
    inst = _load_instance(inputs.read("input", args.input))
    results: dict = {"parameter": args.parameter}
    if args.parameter == "tw":
        g = inst if isinstance(inst, Graph) else (
            incidence_graph(inst).graph if isinstance(inst, Hypergraph) else inst.graph)
        results["graph"] = "input" if isinstance(inst, Graph) else "incidence"
        limit = TW_EXACT_LIMIT if args.exact_limit is None else args.exact_limit
        try:
            width, td = exact_treewidth(g, limit=limit)
            results.update(value=width, exact=True)
        except LimitExceeded:
            if not args.allow_bounds:
                raise
            width, td = heuristic_treewidth(g)
            results.update(upper_bound=width, exact=False)
        if args.witness:
            Path(args.witness).write_text(formats.serialize_td(td))
    else:
        if not isinstance(inst, Hypergraph):
            raise InvalidInstance(f"{args.parameter} needs a hypergraph instance")
        cost = "fractional" if args.parameter == "fhw" else "integral"
        limit = FW_EXACT_LIMIT if args.exact_limit is None else args.exact_limit
        try:
            width, d = exact_fwidth(inst, cost, limit=limit)
            results.update(value=width, exact=True)
        except LimitExceeded:
            if not args.allow_bounds:
                raise
            rep = sandwich_report(inst, fw_limit=0)
            width = rep.fhw if cost == "fractional" else rep.ghw
            results.update(upper_bound=width, exact=False)
            d = None
        if args.witness and d is not None:
            Path(args.witness).write_text(formats.serialize_htd(d))
    _emit(_report(args, inputs, results))
    return EXIT_OK


def cmd_validate(args, inputs: _Inputs) -> int:
    inst = _load_instance(inputs.read("instance", args.instance))
    text = inputs.read("decomposition", args.decomposition)
    results: dict = {"kind": args.kind}
    if args.kind == "td":
        dec = formats.parse_td(text)
        host = inst
        if isinstance(inst, Hypergraph) and args.incidence:
            host = incidence_graph(inst).graph
        elif isinstance(inst, ILabeledGraph):
            host = inst.graph
        check = validate_td(host, dec.decomposition)
    else:
        if not isinstance(inst, Hypergraph):
            raise InvalidInstance("htd validation needs a hypergraph instance")
        dec = formats.parse_htd(text, inst.m)
        check = validate_htd(inst, dec.decomposition)
    width = dec.decomposition.width
    if check and width != dec.declared_width:
        results.update(valid=False, reason=f"declared width {formats.fmt_frac(dec.declared_width)} "
                                              f"differs from actual width {formats.fmt_frac(width)}")
    else:
        results.update(valid=check.ok)
        if not check:
            results.update(reason=_one_based_text(check.reason), offending=_one_based(check.details))
    results["width"] = width
    if args.kind == "htd":
        results["generalized"] = dec.decomposition.generalized
    ok = results["valid"]
    _emit(_report(args, inputs, results, "pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_convert(args, inputs: _Inputs) -> int:
    h = _load_hypergraph(inputs.read("instance", args.instance))
    dec = formats.parse_td(inputs.read("td", args.td))
    d = lemma1_convert(h, dec.decomposition)
    check = validate_htd(h, d)
    bound_ok = d.width <= dec.decomposition.width + 1
    text = formats.serialize_htd(d)
    _write_output(args.output, text)
    if args.report:
        results = {"input_width": dec.decomposition.width, "output_width": d.width,
                   "valid": check.ok, "within_bound": bound_ok, "generalized": d.generalized}
        with open(args.report, "w") as fh:
            _emit(_report(args, inputs, results, "pass" if check and bound_ok else "fail"), fh)
    return EXIT_OK if check and bound_ok else EXIT_INVALID


def _write_output(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _certificate(b: Bramble, exact: bool) -> tuple[dict, bool]:
    cert = order_lower_bound(b, with_exact=exact)
    results = {"sets": cert.size, "influence": cert.influence, "valency": cert.valency,
               "lower_bound": cert.lower_bound, "exact_order": cert.exact_order,
               "recheck": cert.recheck()}
    return results, cert.recheck()


def cmd_certify(args, inputs: _Inputs) -> int:
    if args.grid_spec:
        spec = formats.parse_grid_spec(inputs.read("grid_spec", args.grid_spec))
        b = grid_bramble(spec)
        exact = args.exact if args.exact is not None else spec.k <= 5
        results, ok = _certificate(b, exact)
        results.update(k=spec.k, labeling="bipartition" if b.host.n_set != frozenset(b.host.graph.vertices)
                       else "cover")
        if not spec.additional:
            results["valency_formula"] = 2 * spec.k - 5
            ok = ok and results["valency"] == 2 * spec.k - 5
    else:
        if not args.instance:
            raise InvalidInstance("--bramble needs --instance")
        host = _load_instance(inputs.read("instance", args.instance))
        if isinstance(host, Graph):
            raise InvalidInstance("bramble hosts are hypergraphs or labeled graphs")
        b = formats.parse_bramble(inputs.read("bramble", args.bramble), host)
        results, ok = _certificate(b, bool(args.exact))
        results["hyper"] = b.is_hyper
    _emit(_report(args, inputs, results, "pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_game(args, inputs: _Inputs) -> int:
    h = _load_hypergraph(inputs.read("input", args.input))
    k = marshal_width(h)
    _, strat = marshals_win(h, k)
    results: dict = {"mw": k, "strategy_monotone": strat.monotone, "strategy_states": len(strat.moves)}
    if args.action == "mw":
        if args.strategy_out:
            Path(args.strategy_out).write_text(formats.serialize_strategy(strat))
        _emit(_report(args, inputs, results))
        return EXIT_OK
    mono = monotonize(strat)
    d = extract_decomposition(h, mono)
    check = validate_htd(h, d)
    bound = 3 * mono.cost + 1
    ok = check.ok and d.width <= bound
    results.update(monotone_cost=mono.cost, width=d.width, width_bound=bound, valid=check.ok,
                   generalized=d.generalized)
    _write_output(args.output, formats.serialize_htd(d))
    if args.report:
        with open(args.report, "w") as fh:
            _emit(_report(args, inputs, results, "pass" if ok else "fail"), fh)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_sandwich(args, inputs: _Inputs) -> int:
    h = _load_hypergraph(inputs.read("input", args.input))
    tw_limit = TW_EXACT_LIMIT if args.tw_limit is None else args.tw_limit
    fw_limit = FW_EXACT_LIMIT if args.exact_limit is None else args.exact_limit
    rep = sandwich_report(h, tw_limit=tw_limit, fw_limit=fw_limit)
    inc = planarity_check(incidence_graph(h).graph)
    results = {"fhw": rep.fhw, "ghw": rep.ghw, "tw_incidence": rep.tw_incidence,
               "tw_plus_one": rep.tw_plus_one, "fhw_exact": rep.fhw_exact, "ghw_exact": rep.ghw_exact,
               "tw_exact": rep.tw_exact, "chain": "pass" if rep.chain_ok else "fail",
               "planar": inc.planar, "primal_planar": planarity_check(primal_graph(h)).planar}
    if not inc.planar:
        results["kuratowski"] = inc.kind
    _emit(_report(args, inputs, results, "pass" if rep.chain_ok else "fail"))
    return EXIT_OK if rep.chain_ok else EXIT_INVALID


def cmd_gen(args, inputs: _Inputs) -> int:
    if args.kind == "gadget":
        g = _load_instance(inputs.read("input", args.input))
        if not isinstance(g, Graph):
            raise InvalidInstance("gadget needs a 'p edge' graph file")
        text = formats.serialize_hypergraph(generators.gadget(g))
    elif args.kind == "universal":
        h = _load_hypergraph(inputs.read("input", args.input))
        text = formats.serialize_hypergraph(generators.universal(h))
    elif args.kind == "grid":
        spec = generators.grid_spec(args.k, triangulate=args.triangulate, gridoid=args.gridoid or 0,
                                    augment=args.augment, seed=args.seed)
        if args.spec:
            text = formats.serialize_grid_spec(spec)
        else:
            from .brambles import build_grid
            text = formats.serialize_ilg(build_grid(spec))
    else:
        text = formats.serialize_hypergraph(generators.random_hypergraph(args.n, args.m, args.max_arity, args.seed))
    _write_output(args.output, text)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperwidth", description="Exact hypergraph width parameters and certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="exact tw, ghw or fhw")
    c.add_argument("parameter", choices=["tw", "ghw", "fhw"])
    c.add_argument("--input", required=True)
    c.add_argument("--exact-limit", type=int)
    c.add_argument("--allow-bounds", action="store_true", help="report heuristic bounds above the limit")
    c.add_argument("--witness", help="write the optimal decomposition here")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("validate", help="check a decomposition file")
    v.add_argument("kind", choices=["td", "htd"])
    v.add_argument("--instance", required=True)
    v.add_argument("--decomposition", required=True)
    v.add_argument("--incidence", action="store_true", help="check a td against the incidence graph")
    v.set_defaults(func=cmd_validate)

    cv = sub.add_parser("convert", help="incidence-graph td to generalized htd")
    cv.add_argument("--instance", required=True)
    cv.add_argument("--td", required=True)
    cv.add_argument("--output")
    cv.add_argument("--report")
    cv.set_defaults(func=cmd_convert)

    ce = sub.add_parser("certify", help="bramble order certificate")
    src = ce.add_mutually_exclusive_group(required=True)
    src.add_argument("--grid-spec")
    src.add_argument("--bramble")
    ce.add_argument("--instance")
    ce.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None,
                    help="also compute the exact order (default: only for grids with k <= 5)")
    ce.set_defaults(func=cmd_certify)

    gm = sub.add_parser("game", help="marshals and robber")
    gm.add_argument("action", choices=["mw", "extract"])
    gm.add_argument("--input", required=True)
    gm.add_argument("--output")
    gm.add_argument("--report")
    gm.add_argument("--strategy-out")
    gm.set_defaults(func=cmd_game)

    sw = sub.add_parser("sandwich", help="fhw <= ghw <= tw(I)+1 with planarity")
    sw.add_argument("--input", required=True)
    sw.add_argument("--exact-limit", type=int)
    sw.add_argument("--tw-limit", type=int)
    sw.set_defaults(func=cmd_sandwich)

    gen = sub.add_parser("gen", help="generate instances")
    gsub = gen.add_subparsers(dest="kind", required=True)
    g1 = gsub.add_parser("gadget")
    g1.add_argument("--input", required=True)
    g2 = gsub.add_parser("universal")
    g2.add_argument("--input", required=True)
    g3 = gsub.add_parser("grid")
    g3.add_argument("k", type=int)
    variant = g3.add_mutually_exclusive_group()
    variant.add_argument("--triangulate", action="store_true")
    variant.add_argument("--gridoid", type=int)
    variant.add_argument("--augment", type=int)
    g3.add_argument("--seed", type=int, default=0)
    g3.add_argument("--spec", action="store_true", help="emit the grid spec instead of the labeled graph")
    g4 = gsub.add_parser("random")
    g4.add_argument("n", type=int)
    g4.add_argument("m", type=int)
    g4.add_argument("max_arity", type=int)
    g4.add_argument("seed", type=int)
    for g in (g1, g2, g3, g4):
        g.add_argument("--output")
    gen.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.echo = ["hyperwidth", *argv]
    inputs = _Inputs()
    try:
        return args.func(args, inputs)
    except formats.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InvalidInstance as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
