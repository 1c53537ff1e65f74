"""Command-line surface for reproducible experiments.

Every command emits one JSON payload (stdout or --out) and writes a run
manifest recording the command, resolved parameters, seed, library version,
and sha256 digests of all outputs; re-running the same invocation
reproduces the digests byte for byte.

Graph literals: K3 (clique), A4 (anticlique), P5 (path), C5 (cycle), or
@file holding an edge list.  Oracle literals: canonical-ufin[:size],
complement:<oracle>, uniform:<p>:<seed>, clique, anticlique, or @file.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import secrets
import sys
from pathlib import Path

from . import __version__
from .constructions import (BasisExtraction, CanonicalUfinOracle,
                            basis_extract, ramsey_graph, verify_ramsey)
from .graphcore import (CallableOracle, ComplementOracle, FiniteGraph,
                        FiniteGraphOracle, GraphOracle, components,
                        degree_census, dot_text, edge_list_text, named_graph,
                        parse_edge_list, rado_witness_stats,
                        weak_universality_scan)
from .measure import (NullCover, RationalPoint, cover_mass, cover_text,
                      empirical_density, hits, kakutani, parse_cover,
                      tail_closure, translate_cover)
from .probseq import classify, parse as parse_seq, partial_sums
from .sampler import UniformOracle, trial_harness
from .schedules import (EdgeSchedule, closure_schedule, replicate_schedule,
                        schedule_from_json, star_schedule,
                        sum_with_fixed_schedule, suspended_schedule,
                        theta_schedule, ufin_schedule, uniform_schedule)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def parse_graph(spec: str) -> FiniteGraph:
    if spec.startswith("@"):
        return parse_edge_list(Path(spec[1:]).read_text())
    return named_graph(spec)


def parse_oracle(spec: str) -> GraphOracle:
    if spec.startswith("@"):
        return FiniteGraphOracle(parse_graph(spec))
    if spec.startswith("complement:"):
        return ComplementOracle(parse_oracle(spec[len("complement:"):]))
    if spec == "clique":
        return CallableOracle(lambda a, b: True, kind="clique")
    if spec == "anticlique":
        return CallableOracle(lambda a, b: False, kind="anticlique")
    if spec.startswith("canonical-ufin"):
        parts = spec.split(":")
        size = int(parts[1]) if len(parts) > 1 else 4
        return CanonicalUfinOracle(size)
    if spec.startswith("uniform:"):
        _, p, seed = spec.split(":")
        return UniformOracle(float(p), int(seed))
    raise ValueError(f"unrecognised oracle literal: {spec!r}")


def _graph_list(spec: str):
    return [parse_graph(s) for s in spec.split(",") if s]


# --- handlers: each returns (payload, extra_outputs) -------------------------------

def _cmd_classify(args):
    seq = parse_seq(args.seq)
    return {"schema": "graphdraw/seq-class/v1", "seq": seq.text(),
            "flags": classify(seq).sorted()}, {}


def _cmd_sums(args):
    seq = parse_seq(args.seq)
    sp, sq = partial_sums(seq, args.k, args.n)
    return {"schema": "graphdraw/partial-sums/v1", "seq": seq.text(),
            "k": args.k, "n": args.n, "sum_p": sp, "sum_q": sq}, {}


def _cmd_schedule(args):
    builder = args.builder
    if builder == "uniform":
        sched = uniform_schedule(float(args.p), args.vertices)
    elif builder == "replicate":
        sched = replicate_schedule(parse_oracle(args.target), args.vertices)
    elif builder == "ufin":
        sched = ufin_schedule(parse_seq(args.seq), args.vertices, args.catalog,
                              divergence_target=args.divergence_target,
                              index_budget=args.index_budget)
    elif builder == "suspended":
        sched = suspended_schedule(parse_seq(args.seq), args.vertices,
                                   args.catalog,
                                   divergence_target=args.divergence_target,
                                   index_budget=args.index_budget)
    elif builder == "closure":
        sched = closure_schedule(_graph_list(args.members),
                                 parse_seq(args.seq), args.vertices,
                                 eps=args.eps, index_budget=args.index_budget)
    elif builder == "sum":
        g_sched = schedule_from_json(Path(args.g_schedule).read_text())
        sched = sum_with_fixed_schedule(g_sched, parse_graph(args.h),
                                        parse_seq(args.seq), eps=args.eps,
                                        index_budget=args.index_budget)
    elif builder == "star":
        sched = star_schedule(parse_seq(args.seq), args.count, args.vertices,
                              eps=args.eps, index_budget=args.index_budget)
    elif builder == "theta":
        sched = theta_schedule(args.depth, args.vertices,
                               cross_eps=args.cross_eps,
                               block_eps=args.block_eps)
    else:
        raise ValueError(f"unknown builder {builder!r}")
    return sched.to_json_dict(), {}


def _cmd_sample(args):
    sched = schedule_from_json(Path(args.schedule).read_text())
    analyzers = [a for a in args.analyzers.split(",") if a]
    extra = {}
    if args.emit_graphs:
        report, graphs = trial_harness(sched, args.n, args.trials, analyzers,
                                       args.seed, keep_graphs=True)
        outdir = Path(args.emit_graphs)
        outdir.mkdir(parents=True, exist_ok=True)
        for t, g in enumerate(graphs):
            text = dot_text(g) if args.format == "dot" else edge_list_text(g)
            suffix = "dot" if args.format == "dot" else "edges"
            path = outdir / f"trial{t:05d}.{suffix}"
            path.write_text(text)
            extra[str(path)] = _sha256(text)
    else:
        report = trial_harness(sched, args.n, args.trials, analyzers, args.seed)
    return report.as_dict(), extra


def _cmd_analyze(args):
    g = parse_graph(args.graph)
    payload = {"schema": "graphdraw/analysis/v1", "n": g.n,
               "edges": len(g.edges)}
    if args.ds:
        payload["degree_census"] = {str(k): v
                                    for k, v in degree_census(g).as_dict().items()}
    if args.components:
        payload["components"] = [list(c) for c in components(g)]
    if args.universality is not None:
        level, missing = weak_universality_scan(g, args.universality)
        payload["universality"] = {
            "level": level,
            "missing": edge_list_text(missing) if missing else None}
    if args.witness is not None:
        stats = rado_witness_stats(g, args.witness)
        payload["witness"] = {"found": stats.found, "total": stats.total,
                              "fraction": stats.fraction}
    return payload, {}


def _cmd_ramsey(args):
    h = parse_graph(args.h)
    x = ramsey_graph(h, args.k)
    payload = {"schema": "graphdraw/ramsey/v1", "target": args.h,
               "parts": args.k, "vertices": x.n, "edges": len(x.edges),
               "edge_list": edge_list_text(x)}
    if args.verify:
        ok, certificate = verify_ramsey(x, h, args.k)
        payload["verified"] = ok
        payload["certificate"] = list(certificate) if certificate else None
    extra = {}
    if args.emit:
        Path(args.emit).write_text(edge_list_text(x))
        extra[args.emit] = _sha256(edge_list_text(x))
    if args.emit_dot:
        Path(args.emit_dot).write_text(dot_text(x))
        extra[args.emit_dot] = _sha256(dot_text(x))
    return payload, extra


def _cmd_basis_extract(args):
    oracle = parse_oracle(args.oracle)
    targets = _graph_list(args.targets)
    result = basis_extract(oracle, args.budget, targets)
    payload = result.as_dict()
    payload["oracle"] = oracle.kind
    return payload, {}


def _cmd_kakutani(args):
    p, q = parse_seq(args.p), parse_seq(args.q)
    verdict = kakutani(p, q, args.n)
    payload = verdict.as_dict()
    payload["p"] = p.text()
    payload["q"] = q.text()
    return payload, {}


def _load_cover(path: str) -> NullCover:
    return parse_cover(Path(path).read_text())


def _cmd_cover(args):
    seq = parse_seq(args.seq) if args.seq else None
    cover = _load_cover(args.cover)
    if args.cover_cmd == "mass":
        return {"schema": "graphdraw/cover/v1", "op": "mass",
                "mass": cover_mass(cover, seq)}, {}
    if args.cover_cmd == "translate":
        support = [int(x) for x in args.support.split(",") if x]
        shifted, factor = translate_cover(cover, RationalPoint.of(support), seq)
        return {"schema": "graphdraw/cover/v1", "op": "translate",
                "support": support, "bound_factor": factor,
                "mass": cover_mass(shifted, seq),
                "cover": cover_text(shifted)}, {}
    if args.cover_cmd == "tail":
        closed, bound = tail_closure(cover, args.s, seq)
        return {"schema": "graphdraw/cover/v1", "op": "tail", "s": args.s,
                "bound": bound, "mass": cover_mass(closed, seq),
                "cover": cover_text(closed)}, {}
    if args.cover_cmd == "hits":
        return {"schema": "graphdraw/cover/v1", "op": "hits",
                "count": hits(cover, args.x, args.upto)}, {}
    raise ValueError(f"unknown cover subcommand {args.cover_cmd!r}")


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="graphdraw")
    sub = top.add_subparsers(dest="command", required=True)

    def leaf(parser):
        parser.add_argument("--manifest", help="run manifest path")
        return parser

    p = leaf(sub.add_parser("classify", help="sequence class flags"))
    p.add_argument("seq")
    p.set_defaults(func=_cmd_classify)

    p = leaf(sub.add_parser("sums", help="truncated partial sums"))
    p.add_argument("seq")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_sums)

    p = sub.add_parser("schedule", help="build an edge schedule")
    bs = p.add_subparsers(dest="builder", required=True)
    for name in ("uniform", "replicate", "ufin", "suspended", "closure",
                 "sum", "star", "theta"):
        b = leaf(bs.add_parser(name))
        b.add_argument("--out")
        b.add_argument("--vertices", type=int, default=64)
        b.add_argument("--index-budget", type=int, default=None)
        if name == "uniform":
            b.add_argument("--p", required=True)
        if name == "replicate":
            b.add_argument("--target", required=True)
        if name in ("ufin", "suspended"):
            b.add_argument("--seq", required=True)
            b.add_argument("--catalog", type=int, default=3)
            b.add_argument("--divergence-target", type=float, default=2.0)
        if name == "closure":
            b.add_argument("--seq", required=True)
            b.add_argument("--members", required=True)
            b.add_argument("--eps", type=float, default=0.01)
        if name == "sum":
            b.add_argument("--seq", required=True)
            b.add_argument("--g-schedule", required=True)
            b.add_argument("--h", required=True)
            b.add_argument("--eps", type=float, default=0.01)
        if name == "star":
            b.add_argument("--seq", required=True)
            b.add_argument("--count", type=int, required=True)
            b.add_argument("--eps", type=float, default=0.01)
        if name == "theta":
            b.add_argument("--depth", type=int, required=True)
            b.add_argument("--cross-eps", type=float, default=0.01)
            b.add_argument("--block-eps", type=float, default=0.01)
        b.set_defaults(func=_cmd_schedule)

    p = leaf(sub.add_parser("sample", help="seeded Monte-Carlo trials"))
    p.add_argument("--schedule", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--analyzers", default="deviations,components")
    p.add_argument("--emit-graphs", default=None)
    p.add_argument("--format", choices=("edges", "dot"), default="edges")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    p = leaf(sub.add_parser("analyze", help="censuses and scans of a graph"))
    p.add_argument("graph")
    p.add_argument("--ds", action="store_true")
    p.add_argument("--components", action="store_true")
    p.add_argument("--universality", type=int, default=None)
    p.add_argument("--witness", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_analyze)

    p = leaf(sub.add_parser("ramsey", help="partition-hereditary graph build"))
    p.add_argument("h")
    p.add_argument("k", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--emit")
    p.add_argument("--emit-dot")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ramsey)

    p = leaf(sub.add_parser("basis-extract", help="two-sided extraction from an oracle"))
    p.add_argument("--oracle", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_basis_extract)

    p = leaf(sub.add_parser("kakutani", help="product-measure dichotomy verdict"))
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_kakutani)

    p = sub.add_parser("cover", help="summable-level cover operations")
    cs = p.add_subparsers(dest="cover_cmd", required=True)
    for name in ("mass", "translate", "tail", "hits"):
        c = leaf(cs.add_parser(name))
        c.add_argument("--cover", required=True)
        c.add_argument("--seq", required=name != "hits")
        if name == "translate":
            c.add_argument("--support", required=True)
        if name == "tail":
            c.add_argument("--s", type=int, required=True)
        if name == "hits":
            c.add_argument("--x", required=True)
            c.add_argument("--upto", type=int, required=True)
        c.add_argument("--out")
        c.set_defaults(func=_cmd_cover)

    return top


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    seed = None
    if getattr(args, "seed", "absent") is None:
        seed = secrets.randbits(32)
        args.seed = seed
        argv = argv + ["--seed", str(seed)]
    elif getattr(args, "seed", None) is not None:
        seed = args.seed

    try:
        payload, extra_outputs = args.func(args)
    except ValueError as exc:
        err = {"schema": "graphdraw/error/v1", "type": type(exc).__name__,
               "error": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 2
    except OSError as exc:
        err = {"schema": "graphdraw/error/v1", "type": type(exc).__name__,
               "error": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 2

    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    outputs = dict(extra_outputs)
    out_path = getattr(args, "out", None)
    if out_path:
        Path(out_path).write_text(text)
        outputs[out_path] = _sha256(text)
    else:
        sys.stdout.write(text)
        outputs["stdout"] = _sha256(text)

    manifest = {
        "schema": "graphdraw/run-manifest/v1",
        "command": args.command,
        "argv": argv,
        "version": __version__,
        "seed": seed,
        "outputs": outputs,
    }
    manifest_path = args.manifest or (
        f"{out_path}.manifest.json" if out_path else "graphdraw-manifest.json")
    Path(manifest_path).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
