"""Command-line interface: ``faultspan {build,gen,verify,bench}``.

Exit codes: 0 success (verified / certified), 1 counterexample or
uncertified core, 2 invalid input or refused request.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

from faultspan.graph import FaultMode, Graph, GraphFormatError, read_graph, write_graph
from faultspan.lowerbounds import (
    LbInstance,
    gen_dw1ft,
    gen_sh,
    gen_shq,
    gen_sxt,
    gen_th_tree,
    gen_w1ft_pairs,
    gen_w2ft,
)
from faultspan.randgraph import gnm_graph, gnp_graph, random_tree
from faultspan.sourcewise import BuildParams, build_sourcewise_preserver
from faultspan.spanner import SpannerConfig, build_additive_spanner
from faultspan.verify import DEFAULT_BUDGET, BudgetExceeded, certify_core, verify_preserver
from faultspan.weighted import build_1ft_st_directed, build_1ft_st_undirected

log = logging.getLogger("faultspan")

EXIT_OK, EXIT_FAIL, EXIT_REFUSED = 0, 1, 2
BUILD_KINDS = ("sourcewise", "spanner", "w1ft-undirected", "w1ft-directed")
FAMILIES = ("th", "sh", "shq", "sxt", "w2ft", "w1ft-pairs", "dw1ft")
BENCH_FIELDS = ("n", "m", "f", "|S|", "build_ms", "preserver_edges", "bound_ratio")


class UsageError(Exception):
    """Bad flags or inputs; reported with exit code 2."""


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _pair_list(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        if not item.strip():
            continue
        a, sep, b = item.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"pairs look like 'a:b,c:d', got {item!r}")
        out.append((int(a), int(b)))
    return out


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("FAULTSPAN_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"FAULTSPAN_SEED must be an integer, got {env!r}") from exc


def _emit(text: str, dest: str | None) -> None:
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


# ---- build ---------------------------------------------------------------


def cmd_build(args) -> int:
    g = read_graph(_need(args.input, "--input"))
    f = _need(args.faults, "--faults")
    seed = resolve_seed(args.seed)
    if args.kind == "sourcewise":
        sources = _need(args.sources, "--sources")
        params = BuildParams(f, FaultMode.parse(args.mode), seed)
        pre = build_sourcewise_preserver(g, sources, params, threads=args.threads)
        stats = pre.metadata(include_rounds=True)
    elif args.kind == "spanner":
        cfg = SpannerConfig(f, args.override_L, seed=seed)
        pre = build_additive_spanner(g, cfg, threads=args.threads)
        stats = pre.metadata(include_rounds=False)
    else:
        if g.directed != (args.kind == "w1ft-directed"):
            raise UsageError(f"{args.kind} needs a {'directed' if args.kind == 'w1ft-directed' else 'undirected'} graph")
        if f != 1:
            raise UsageError(f"{args.kind} tolerates exactly one fault (--faults 1)")
        pair = _need(args.sources, "--sources")
        if len(pair) != 2:
            raise UsageError("--sources must name exactly two nodes s,t")
        for v in pair:
            if not 0 <= v < g.n:
                raise UsageError(f"node {v} out of range")
        build = build_1ft_st_directed if g.directed else build_1ft_st_undirected
        pre = build(g, *pair)
        stats = pre.metadata(include_rounds=False)
    stats = {"kind": args.kind, **stats}
    out = pre.graph()
    if args.output:
        write_graph(out, args.output)
    stats_text = _dump(stats)
    stats_path = args.stats or (f"{args.output}.stats.json" if args.output else None)
    if stats_path:
        Path(stats_path).write_text(stats_text)
    if args.json or not args.output:
        sys.stdout.write(stats_text)
    return EXIT_OK


# ---- gen -----------------------------------------------------------------


def _th_manifest(h: int, d: int) -> tuple[Graph, dict]:
    tree = gen_th_tree(h, d)
    doc = {
        "family": "th",
        "params": {"h": h, "d": d},
        "n": tree.graph.n,
        "m": tree.graph.m,
        "root": tree.root,
        "height": tree.height,
        "leaves": tree.leaves,
        "leaf_faults": [sorted(fs) for fs in tree.fault_sets],
        "pairs": [[tree.root, leaf] for leaf in tree.leaves],
        "core_edges": [],
        "witnesses": {},
        "margin": 2,
        "budget": h,
        "mode": "edge",
    }
    return tree.graph, doc


def build_instance(args) -> tuple[Graph, dict]:
    fam = args.family
    if fam == "th":
        return _th_manifest(_need(args.h, "--h"), args.d if args.d is not None else 1)
    if fam == "sh":
        inst = gen_sh(_need(args.h, "--h"), _need(args.d, "--d"))
    elif fam == "shq":
        if args.d is None and args.n_budget is None:
            raise UsageError("shq needs --d or --n-budget")
        inst = gen_shq(_need(args.h, "--h"), args.d, args.q or 1, args.n_budget)
    elif fam == "sxt":
        f = args.faults if args.faults is not None else _need(args.h, "--faults (or --h)")
        if (args.d is None) and args.n_budget is None:
            raise UsageError("sxt needs --d (or --d-s/--d-t) or --n-budget")
        inst = gen_sxt(
            f,
            args.n_sources or 1,
            args.n_targets or 1,
            args.n_budget,
            d_s=args.d_s or args.d,
            d_t=args.d_t or args.d,
        )
    elif fam == "w2ft":
        inst = gen_w2ft(_need(args.n, "--n"), args.drop or ())
    elif fam == "w1ft-pairs":
        inst = gen_w1ft_pairs(_need(args.n, "--n"), _need(args.p, "--p"))
    else:
        inner = read_graph(_need(args.input, "--input (inner graph K)"))
        pairs = _need(args.pairs, "--pairs")
        inst = gen_dw1ft(inner, pairs, args.npairs)
    return inst.graph, inst.manifest()


def cmd_gen(args) -> int:
    g, manifest = build_instance(args)
    out = _need(args.output, "--output")
    write_graph(g, out)
    text = _dump(manifest)
    Path(args.manifest or f"{out}.manifest.json").write_text(text)
    if args.json:
        sys.stdout.write(text)
    return EXIT_OK


# ---- verify --------------------------------------------------------------


def _default_pairs(g: Graph, sources: list[int] | None) -> list[tuple[int, int]]:
    if sources is not None:
        return [(s, v) for s in sources for v in range(g.n) if v != s]
    if g.directed:
        return [(a, b) for a in range(g.n) for b in range(g.n) if a != b]
    return [(a, b) for a in range(g.n) for b in range(a + 1, g.n)]


def cmd_verify(args) -> int:
    g = read_graph(_need(args.input, "--input"))
    manifest = json.loads(Path(args.manifest).read_text()) if args.manifest else None
    if args.subgraph is None:
        if manifest is None:
            raise UsageError("verify needs --subgraph and/or --manifest")
        inst = LbInstance.from_manifest(g, manifest)
        inst.budget = inst.budget if args.faults is None else args.faults
        report = certify_core(inst)
        _emit(report.to_json(), args.output)
        return EXIT_OK if report.ok else EXIT_FAIL
    h = read_graph(args.subgraph)
    if manifest is not None:
        pairs = [tuple(p) for p in manifest["pairs"]]
        f = args.faults if args.faults is not None else int(manifest["budget"])
        beta = args.beta if args.beta is not None else int(manifest["margin"]) - 1
        mode = args.mode or manifest.get("mode", "edge")
    else:
        pairs = args.pairs if args.pairs is not None else _default_pairs(g, args.sources)
        f = _need(args.faults, "--faults")
        beta = args.beta or 0
        mode = args.mode or "edge"
    verdict = verify_preserver(g, h, pairs, f, beta, mode, budget=args.budget)
    _emit(_dump(verdict.to_dict()), args.output)
    return EXIT_OK if verdict.ok else EXIT_FAIL


# ---- bench ---------------------------------------------------------------


def bound_ratio(edges: int, n: int, f: int, s: int) -> float:
    if n < 2 or f < 1 or s < 1:
        return float("nan")
    p = 2**f
    return edges / (f * s ** (1 / p) * n ** (2 - 1 / p) * math.log(n))


def _bench_graph(entry: dict, seed: int) -> Graph:
    if "graph" in entry:
        return read_graph(entry["graph"])
    kind = entry.get("kind", "gnm")
    n = int(entry["n"])
    directed = bool(entry.get("directed", False))
    if kind == "tree":
        return random_tree(n, seed=seed)
    if kind == "gnp":
        return gnp_graph(n, float(entry["p"]), directed=directed, seed=seed)
    return gnm_graph(n, int(entry["m"]), directed=directed, seed=seed)


def run_bench(corpus: list, *, seed: int, threads: int = 1) -> list[dict]:
    rows = []
    for k, entry in enumerate(corpus):
        entry_seed = int(entry.get("seed", seed + k))
        g = _bench_graph(entry, entry_seed)
        f = int(entry.get("f", 1))
        count = int(entry.get("sources", 1))
        sources = entry.get("source_ids") or list(range(min(count, g.n)))
        params = BuildParams(f, FaultMode.parse(entry.get("mode", "edge")), entry_seed)
        t0 = time.perf_counter()
        pre = build_sourcewise_preserver(g, sources, params, threads=threads)
        ms = (time.perf_counter() - t0) * 1000
        rows.append({
            "n": g.n,
            "m": g.m,
            "f": f,
            "|S|": len(sources),
            "build_ms": f"{ms:.1f}",
            "preserver_edges": len(pre),
            "bound_ratio": f"{bound_ratio(len(pre), g.n, f, len(sources)):.6g}",
        })
    return rows


def cmd_bench(args) -> int:
    corpus = json.loads(Path(_need(args.input, "--input")).read_text())
    if isinstance(corpus, dict):
        corpus = corpus.get("graphs", [])
    if not isinstance(corpus, list):
        raise UsageError("bench corpus must be a JSON list of graph entries")
    rows = run_bench(corpus, seed=resolve_seed(args.seed), threads=args.threads)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


# ---- parser --------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="faultspan", description="Fault-tolerant preservers, spanners and lower-bound instances.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input graph file")
    common.add_argument("--output", help="output file (default: stdout where applicable)")
    common.add_argument("--faults", type=int, help="fault budget f")
    common.add_argument("--seed", type=int, help="random seed (falls back to $FAULTSPAN_SEED, then 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("--json", action="store_true", help="also print the JSON result to stdout")
    common.add_argument("--sources", type=_int_list, help="comma-separated node ids")

    b = sub.add_parser("build", parents=[common], help="build a preserver or spanner")
    b.add_argument("kind", choices=BUILD_KINDS)
    b.add_argument("--mode", choices=("edge", "vertex"), default="edge")
    b.add_argument("--override-L", dest="override_L", type=int, help="degree threshold for the spanner")
    b.add_argument("--stats", help="stats JSON path (default: <output>.stats.json)")
    b.set_defaults(run=cmd_build)

    g = sub.add_parser("gen", parents=[common], help="generate a lower-bound instance")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--h", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--n", type=int, help="size parameter of the weighted gadgets")
    g.add_argument("--p", type=int, help="number of spoke nodes (w1ft-pairs)")
    g.add_argument("--n-budget", dest="n_budget", type=int)
    g.add_argument("--n-sources", dest="n_sources", type=int)
    g.add_argument("--n-targets", dest="n_targets", type=int)
    g.add_argument("--d-s", dest="d_s", type=int)
    g.add_argument("--d-t", dest="d_t", type=int)
    g.add_argument("--npairs", type=int)
    g.add_argument("--pairs", type=_pair_list, help="inner pairs for dw1ft, e.g. 0:3,1:4")
    g.add_argument("--drop", type=_pair_list, help="w2ft core edges (i:j) to omit")
    g.add_argument("--manifest", help="manifest path (default: <output>.manifest.json)")
    g.set_defaults(run=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="verify a subgraph or certify a core")
    v.add_argument("--subgraph", help="candidate subgraph file")
    v.add_argument("--manifest", help="lower-bound manifest")
    v.add_argument("--pairs", type=_pair_list, help="demand pairs a:b,... (default: sources x V, else all pairs)")
    v.add_argument("--beta", type=int)
    v.add_argument("--mode", choices=("edge", "vertex"))
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    v.set_defaults(run=cmd_verify)

    bn = sub.add_parser("bench", parents=[common], help="time sourcewise builds over a JSON corpus")
    bn.set_defaults(run=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_REFUSED if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("faultspan: --threads must be >= 1", file=sys.stderr)
        return EXIT_REFUSED
    try:
        return args.run(args)
    except BudgetExceeded as exc:
        print(f"faultspan: refused: {exc}", file=sys.stderr)
    except (UsageError, GraphFormatError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"faultspan: error: {exc}", file=sys.stderr)
    return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
