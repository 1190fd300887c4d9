"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 generation or I/O failure,
3 state budget exceeded.

Replica ``r`` of a run with master seed ``s`` uses the substream
``(s, r)``; a coupled pair uses ``(s, r, 0)`` and ``(s, r, 1)`` for the two
chains and ``(s, r, 2)`` for the shared stream.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

from . import diagnostics, exact, glauber
from .hypergraph import (
    FailedToGenerate,
    generate_blocked_instance,
    generate_random_simple,
    is_proper,
    max_degree,
    validate_simple,
)
from .io import ParseError, RangeError, read_colouring, read_hypergraph, write_colouring, write_hypergraph
from .rng import substream_seed

EXIT_OK, EXIT_CONFIG, EXIT_GENERATION, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="master seed (64-bit)")
    p.add_argument("--out", help="result file (default stdout); directory for gen-* (default .)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=1, help="worker processes for replicas")
    p.add_argument("--budget", type=int, default=exact.DEFAULT_BUDGET, help="max q^n for exact commands")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    return p


def _instance_args(p):
    p.add_argument("--hypergraph", required=True, help="hypergraph file")
    p.add_argument("--q", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="hypercolour", description="Glauber dynamics for hypergraph colourings")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-random", parents=[common], help="random simple k-uniform hypergraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--max-deg", type=int, required=True)

    p = sub.add_parser("gen-blocked", parents=[common], help="instance with a frozen proper colouring")
    p.add_argument("--m", type=int, required=True, help="block size")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--augment", type=float, help="density scale for the extra cross-block edges")
    p.add_argument("--eps-k", type=float, default=0.1)

    p = sub.add_parser("sample", parents=[common], help="run independent replicas")
    _instance_args(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--start", help="colouring file (default: uniform random)")
    p.add_argument("--emit-colourings", action="store_true")

    p = sub.add_parser("couple", parents=[common], help="coupled pairs until coalescence")
    _instance_args(p)
    p.add_argument("--steps", type=int, required=True, help="max coupled steps per pair")
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--record-every", type=int, default=0, help="hamming series spacing (0 = off)")

    p = sub.add_parser("trace", parents=[common], help="goodness persistence trace")
    _instance_args(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--checkpoints", type=int, default=100, help="checkpoint spacing")
    p.add_argument("--start", help="colouring file (default: uniform random)")

    p = sub.add_parser("mix-exact", parents=[common], help="exact TV profile from uniform start")
    _instance_args(p)
    p.add_argument("--steps", type=int, required=True)

    p = sub.add_parser("components", parents=[common], help="components of the move graph")
    _instance_args(p)

    p = sub.add_parser("check-conditions", parents=[common], help="regime checks and run lengths")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-deg", type=int, required=True)
    p.add_argument("--K", default="1")
    p.add_argument("--delta", type=float, default=0.05)

    p = sub.add_parser("diagnose", parents=[common], help="goodness report for a colouring")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--colouring", required=True)
    p.add_argument("--scale", type=int, choices=(1, 2), default=1)
    return parser


# -- output -------------------------------------------------------------------


def _envelope(args, inputs: dict, result: dict) -> dict:
    doc = {"command": args.command, "inputs": inputs}
    if not args.no_timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    doc.update(result)
    return doc


def _emit_json(args, doc: dict) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    _write_text(args, text)


def _emit_csv(args, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write_text(args, buf.getvalue())


def _write_text(args, text: str) -> None:
    if args.out and args.command not in ("gen-random", "gen-blocked"):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _colour_hash(colours) -> str:
    return hashlib.sha256(",".join(map(str, colours)).encode()).hexdigest()[:16]


def _parallel_map(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _load_instance(args):
    H = read_hypergraph(args.hypergraph)
    if args.q < 2:
        raise ConfigError("--q must be at least 2")
    return H


def _load_start(args, H):
    if getattr(args, "start", None):
        X = read_colouring(args.start, n=H.n)
        if X.q != args.q:
            raise ConfigError(f"start colouring uses q={X.q}, --q is {args.q}")
        return X
    return glauber.UNIFORM_RANDOM


def _need(cond, message):
    if not cond:
        raise ConfigError(message)


# -- commands -----------------------------------------------------------------


def cmd_gen_random(args):
    _need(args.k >= 2 and args.n >= args.k, "need n >= k >= 2")
    _need(args.edges >= 0 and args.max_deg >= 0, "--edges and --max-deg must be non-negative")
    H = generate_random_simple(args.n, args.k, args.edges, args.max_deg, args.seed)
    path = _target_path(args.out or os.curdir, "hypergraph.hg")
    write_hypergraph(H, path)
    rep = validate_simple(H)
    inputs = {"n": args.n, "k": args.k, "edges": args.edges, "max_deg": args.max_deg, "seed": args.seed}
    result = {"simple": rep.is_simple, "m": H.m, "max_degree": max_degree(H), "files": [path]}
    _emit_json(args, _envelope(args, inputs, result))


def _target_path(out, default_name):
    if out.endswith(os.sep) or os.path.isdir(out):
        os.makedirs(out, exist_ok=True)
        return os.path.join(out, default_name)
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return out


def cmd_gen_blocked(args):
    _need(args.q >= 2 and args.k >= 3 and args.m >= 1, "need q >= 2, k >= 3, m >= 1")
    inst = generate_blocked_instance(args.m, args.q, args.k, args.seed, augment=args.augment, eps_k=args.eps_k)
    out = args.out or os.curdir
    os.makedirs(out, exist_ok=True)
    hp = os.path.join(out, "hypergraph.hg")
    cp = os.path.join(out, "colouring.col")
    write_hypergraph(inst.hypergraph, hp)
    write_colouring(inst.colouring, cp)
    files = [hp, cp]
    H, X = inst.hypergraph, inst.colouring
    state = glauber.init_chain(H, X.q, X, seed=0)
    blocked = all(state.available(v) == [X[v]] for v in range(H.n))
    inputs = {"m": args.m, "q": args.q, "k": args.k, "augment": args.augment, "eps_k": args.eps_k, "seed": args.seed}
    result = {
        "blocked": blocked,
        "simple": validate_simple(H).is_simple,
        "proper": is_proper(H, X),
        "n": H.n,
        "m": H.m,
        "f2_edges": len(inst.f2_edges),
        "rho": inst.rho,
        "max_degree": max_degree(H),
        "files": files,
    }
    _emit_json(args, _envelope(args, inputs, result))


def _sample_replica(job):
    H, q, start, steps, seed, emit = job
    state = glauber.init_chain(H, q, start, seed)
    summary = glauber.run(state, steps)
    out = {
        "proper": state.is_proper(),
        "hash": _colour_hash(state.colours),
        "moves": summary.moves,
        "self_loops": summary.self_loops,
    }
    if H.k >= 3:
        out["eps_good"] = diagnostics.goodness(state, 1).is_good
        out["eps2_good"] = diagnostics.goodness(state, 2).is_good
    if emit:
        out["colouring"] = list(state.colours)
    return out


def cmd_sample(args):
    _need(args.steps >= 0 and args.replicas >= 1, "--steps >= 0 and --replicas >= 1 required")
    H = _load_instance(args)
    start = _load_start(args, H)
    jobs = [
        (H, args.q, start, args.steps, substream_seed(args.seed, r), args.emit_colourings)
        for r in range(args.replicas)
    ]
    reps = _parallel_map(_sample_replica, jobs, args.threads)
    for r, rep in enumerate(reps):
        rep["replica"] = r
    inputs = {"hypergraph": args.hypergraph, "q": args.q, "steps": args.steps,
              "replicas": args.replicas, "start": args.start, "seed": args.seed}
    if args.format == "csv":
        header = ["replica", "proper", "eps_good", "eps2_good", "moves", "self_loops", "hash"]
        rows = [[r["replica"], int(r["proper"]), int(r.get("eps_good", 0)), int(r.get("eps2_good", 0)),
                 r["moves"], r["self_loops"], r["hash"]] for r in reps]
        return _emit_csv(args, header, rows)
    result = {
        "proper_rate": sum(r["proper"] for r in reps) / len(reps),
        "replicas": reps,
    }
    if H.k >= 3:
        result["eps_good_rate"] = sum(r["eps_good"] for r in reps) / len(reps)
        result["eps2_good_rate"] = sum(r["eps2_good"] for r in reps) / len(reps)
    _emit_json(args, _envelope(args, inputs, result))


def _couple_replica(job):
    H, q, steps, seed, r, every = job
    res = glauber.coalescence_run(
        H, q,
        substream_seed(seed, r, 0), substream_seed(seed, r, 1), substream_seed(seed, r, 2),
        steps, record_every=every or None,
    )
    return {"replica": r, "coalesced": res.coalesced, "time": res.time, "hamming": list(res.hamming_series)}


def cmd_couple(args):
    _need(args.steps >= 0 and args.replicas >= 1, "--steps >= 0 and --replicas >= 1 required")
    _need(0 < args.delta < 1, "--delta must lie in (0, 1)")
    H = _load_instance(args)
    t_delta = diagnostics.mixing_time_bound(H.n, args.delta) if H.n else 0
    jobs = [(H, args.q, args.steps, args.seed, r, args.record_every) for r in range(args.replicas)]
    reps = sorted(_parallel_map(_couple_replica, jobs, args.threads), key=lambda r: r["replica"])
    if args.format == "csv":
        rows = [[r["replica"], int(r["coalesced"]), "" if r["time"] is None else r["time"]] for r in reps]
        return _emit_csv(args, ["replica", "coalesced", "time"], rows)
    within = sum(1 for r in reps if r["coalesced"] and r["time"] <= t_delta)
    inputs = {"hypergraph": args.hypergraph, "q": args.q, "steps": args.steps,
              "replicas": args.replicas, "delta": args.delta, "seed": args.seed}
    result = {
        "t_delta": t_delta,
        "coalesced_fraction": sum(r["coalesced"] for r in reps) / len(reps),
        "fraction_within_t_delta": within / len(reps),
        "times": [r["time"] for r in reps],
        "pairs": reps,
    }
    _emit_json(args, _envelope(args, inputs, result))


def cmd_trace(args):
    _need(args.steps >= 1 and args.checkpoints >= 1, "--steps and --checkpoints must be positive")
    H = _load_instance(args)
    _need(H.k >= 3, "goodness traces need k >= 3")
    start = _load_start(args, H)
    trace = diagnostics.goodness_trace(H, args.q, start, args.steps, args.checkpoints, args.seed)
    if args.format == "csv":
        k2 = H.k - 2
        header = ["t"] + [f"z_increase_{i}" for i in range(1, k2 + 1)] + ["good2", "breach"]
        rows = [[t, *z, int(g), int(b)] for t, z, g, b in
                zip(trace.times, trace.z_increase, trace.good2, trace.breaches)]
        return _emit_csv(args, header, rows)
    inputs = {"hypergraph": args.hypergraph, "q": args.q, "steps": args.steps,
              "checkpoints": args.checkpoints, "start": args.start, "seed": args.seed}
    _emit_json(args, _envelope(args, inputs, trace.to_dict()))


def cmd_mix_exact(args):
    _need(args.steps >= 0, "--steps must be non-negative")
    H = _load_instance(args)
    profile = exact.mixing_profile(H, args.q, args.steps, budget=args.budget)
    if args.format == "csv":
        return _emit_csv(args, ["t", "tv"], [[t, repr(tv)] for t, tv in profile])
    inputs = {"hypergraph": args.hypergraph, "q": args.q, "steps": args.steps}
    _emit_json(args, _envelope(args, inputs, {"profile": [{"t": t, "tv": tv} for t, tv in profile]}))


def cmd_components(args):
    H = _load_instance(args)
    rep = exact.gamma_q_components(H, args.q, budget=args.budget)
    if args.format == "csv":
        return _emit_csv(args, ["component", "size"], list(enumerate(rep.sizes)))
    inputs = {"hypergraph": args.hypergraph, "q": args.q}
    _emit_json(args, _envelope(args, inputs, rep.to_dict()))


def cmd_check_conditions(args):
    _need(min(args.n, args.k, args.q) > 0 and args.max_deg >= 0, "n, k, q must be positive")
    _need(0 < args.delta < 1, "--delta must lie in (0, 1)")
    try:
        rep = diagnostics.check_conditions(args.n, args.k, args.q, args.max_deg, args.K, args.delta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    doc = rep.to_dict()
    inputs = doc.pop("inputs")
    if args.format == "csv":
        rows = [[name, int(c["passed"]), c["lhs"], c["rhs"]] for name, c in doc["checks"].items()]
        return _emit_csv(args, ["check", "passed", "lhs", "rhs"], rows)
    _emit_json(args, _envelope(args, inputs, doc))


def cmd_diagnose(args):
    H = read_hypergraph(args.hypergraph)
    X = read_colouring(args.colouring, n=H.n)
    _need(H.k >= 3, "goodness needs k >= 3")
    _need(X.q >= 2, "q must be at least 2")
    rep = diagnostics.colouring_goodness(H, X, args.scale)
    doc = rep.to_dict()
    doc["proper"] = is_proper(H, X)
    inputs = {"hypergraph": args.hypergraph, "colouring": args.colouring, "scale": args.scale}
    _emit_json(args, _envelope(args, inputs, doc))


COMMANDS = {
    "gen-random": cmd_gen_random,
    "gen-blocked": cmd_gen_blocked,
    "sample": cmd_sample,
    "couple": cmd_couple,
    "trace": cmd_trace,
    "mix-exact": cmd_mix_exact,
    "components": cmd_components,
    "check-conditions": cmd_check_conditions,
    "diagnose": cmd_diagnose,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except exact.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FailedToGenerate, ParseError, RangeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
