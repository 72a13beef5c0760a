"""Command-line front end.

Subcommands: spectral, walk profile|exit, transport wasserstein|chain,
iso profile|radial, window stats, harmonic probe|divergence|witness.
Outputs are CSV (header row plus a provenance comment) or JSON with
stable key order; identical configs and seeds give byte-identical files.

Exit codes: 0 success, 2 invalid configuration, 3 budget exceeded,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import (BallTooLarge, DenseBudgetExceeded,
                     EnumerationBudgetExceeded, GraphTooLargeForExact,
                     HarmlabError, IoError)
from . import cayley, graphs, harmonic, isoperimetry, spectral, transport
from . import walk as walkmod
from . import window as windowmod

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_NUMERIC = 4

BUDGET_ERRORS = (BallTooLarge, EnumerationBudgetExceeded,
                 DenseBudgetExceeded, GraphTooLargeForExact)


def _fmt(x):
    if isinstance(x, float) or isinstance(x, np.floating):
        if np.isnan(x):
            raise FloatingPointError("NaN in output")
        if x == 0:
            x = 0.0  # avoid "-0"
        return f"{x:.12g}"
    return str(x)


def emit_csv(rows, path, header, config_hash):
    lines = [f"# harmlab {__version__} config {config_hash}",
             ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row[h]) for h in header))
    text = "\n".join(lines) + "\n"
    try:
        if path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(path, "w") as fh:
                fh.write(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def emit_json(report, path, config_hash):
    obj = {"tool": f"harmlab {__version__}", "config_hash": config_hash,
           "report": report}
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    try:
        if path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(path, "w") as fh:
                fh.write(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _ball_cap(args):
    cap = os.environ.get("HARMLAB_BUDGET")
    if cap:
        return int(cap)
    return getattr(args, "ball_cap", None) or cayley.DEFAULT_BALL_CAP


def load_graph_spec(spec):
    """Builtin graph spec (cycle:n, complete:n, hypercube:d, grid:w,h,
    tree:d,depth) or a path to a JSON graph file."""
    head, _, rest = spec.partition(":")
    try:
        if head == "cycle":
            return graphs.cycle_graph(int(rest))
        if head == "complete":
            return graphs.complete_graph(int(rest))
        if head == "hypercube":
            return graphs.hypercube_graph(int(rest))
        if head == "grid":
            w, h = (int(a) for a in rest.split(","))
            return graphs.torus_grid(w, h)
        if head == "tree":
            d, depth = (int(a) for a in rest.split(","))
            return graphs.regular_tree(d, depth)
    except ValueError as exc:
        raise IoError(f"bad graph spec {spec!r}: {exc}") from exc
    if os.path.exists(spec):
        return graphs.load_graph(spec)
    raise IoError(f"unknown graph spec or missing file: {spec}")


def _parse_radii(text):
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


# -- command implementations ----------------------------------------------


def cmd_spectral(args, chash):
    G = load_graph_spec(args.graph)
    p_list = [float(p) for p in args.p.split(",") if float(p) not in (1.0, 2.0)]
    rep = spectral.verify_gap_chain(G, p_list=p_list or (1.5, 3.0))
    report = {
        "graph": args.graph,
        "d": rep.d,
        "kappa1": rep.kappa1,
        "kappa1_direction": rep.kappa1_direction,
        "kappa1_witness": [int(v) for v in rep.kappa1_witness],
        "lambda2": rep.lambda2,
        "entries": [vars(e) for e in rep.entries],
        "inequalities": [vars(q) for q in rep.inequalities],
    }
    emit_json(report, args.out, chash)
    return EXIT_OK


def cmd_walk_profile(args, chash):
    group = cayley.build_group(args.group)
    b = cayley.cayley_ball(group, args.radius, cap=_ball_cap(args))
    rows = walkmod.entropy_profile(b, args.steps, laziness=args.laziness)
    emit_csv(rows, args.out,
             ["n", "H0", "H1", "H2", "Hinf", "speed", "grad_l1",
              "return_prob"], chash)
    return EXIT_OK


def cmd_walk_exit(args, chash):
    group = cayley.build_group(args.group)
    r = args.region
    b = cayley.cayley_ball(group, r + 1, cap=_ball_cap(args))
    A = graphs.ball(b.graph, b.identity_vertex, r)
    v = b.identity_vertex
    w = b.vertex_of[group.evaluate(group.word([args.to]))] \
        if args.to else v
    exv = walkmod.exit_distribution(b.graph, A, v)
    exw = walkmod.exit_distribution(b.graph, A, w)
    rows = []
    for x in np.flatnonzero(exv.a + exw.a):
        rows.append({"vertex": int(x),
                     "element": repr(b.elements[int(x)]).replace(",", " "),
                     "exit_from_origin": float(exv.a[x]),
                     "exit_from_target": float(exw.a[x])})
    emit_csv(rows, args.out,
             ["vertex", "element", "exit_from_origin", "exit_from_target"],
             chash)
    return EXIT_OK


def cmd_transport_wasserstein(args, chash):
    G = load_graph_spec(args.graph)
    src = _load_measure(G, args.src)
    dst = _load_measure(G, args.dst)
    cost, pat = transport.wasserstein1(G, src, dst)
    report = {"cost": cost, "residual": pat.residual,
              "support": len(pat.tau.support)}
    emit_json(report, args.out, chash)
    return EXIT_OK


def _load_measure(G, path):
    vals = np.zeros(G.n)
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("vertex"):
                continue
            v, m = line.split(",")
            vals[int(v)] = float(m)
    return graphs.VertexField(G, vals)


def cmd_transport_chain(args, chash):
    group = cayley.build_group(args.group)
    levels = _parse_radii(args.levels)
    R = max(levels) + 2
    b = cayley.cayley_ball(group, R, cap=_ball_cap(args))
    v = b.identity_vertex
    w = int(b.graph.neighbors(v)[0])
    regions = [graphs.ball(b.graph, v, r) for r in levels]
    rows = transport.exit_transport_chain(b.graph, v, w, regions, p=args.p)
    for row, r in zip(rows, levels):
        row["r"] = r
        row.pop("pattern")
    emit_csv(rows, args.out,
             ["r", "interior_size", "norm_p", "norm_inf", "exit_diff_l1",
              "exit_diff_inf", "residual"], chash)
    return EXIT_OK


def cmd_iso_profile(args, chash):
    G = load_graph_spec(args.graph)
    prof = isoperimetry.profile(G, args.max_size, budget=args.budget)
    rows = []
    env = prof.envelope()
    for s in sorted(prof.table):
        b, wit = prof.table[s]
        rows.append({"size": s, "boundary": b, "ratio": b / s,
                     "envelope": env[s],
                     "witness": " ".join(str(v) for v in wit)})
    emit_csv(rows, args.out,
             ["size", "boundary", "ratio", "envelope", "witness"], chash)
    return EXIT_OK


def cmd_iso_radial(args, chash):
    G = load_graph_spec(args.graph)
    with open(args.set) as fh:
        members = json.load(fh)
    res = isoperimetry.radial_iso_check(G, members, K=args.K, k=args.k)
    emit_json(res, args.out, chash)
    return EXIT_OK


def cmd_window_stats(args, chash):
    group = cayley.build_group(args.group)
    n = args.square
    b = cayley.cayley_ball(group, 2 * n + 2, cap=_ball_cap(args))
    lo = -(n // 2)
    sq = [b.vertex_of[(i, j)] for i in range(lo, lo + n)
          for j in range(lo, lo + n)]
    st = windowmod.window_projection_stats(b, sq, args.label)
    report = {k: (v.tolist() if isinstance(v, np.ndarray) else v)
              for k, v in st.items() if k != "window"}
    emit_json(report, args.out, chash)
    return EXIT_OK


def cmd_harmonic_probe(args, chash):
    group = cayley.build_group(args.group)
    radii = _parse_radii(args.radii)
    b = cayley.cayley_ball(group, max(radii) + 1, cap=_ball_cap(args))
    v = b.identity_vertex
    w = int(b.graph.neighbors(v)[0])
    rows = harmonic.liouville_probe(b.graph, v, v, w, radii)
    emit_csv(rows, args.out, ["r", "l1", "linf"], chash)
    return EXIT_OK


def cmd_harmonic_divergence(args, chash):
    group = cayley.build_group(args.group)
    b = cayley.cayley_ball(group, args.K * args.n + 2, cap=_ball_cap(args))
    rows = harmonic.divergence_profile(b.graph, b.identity_vertex,
                                       args.K, args.n)
    for row in rows:
        if not np.isfinite(row["D"]):
            row["D"] = -1  # unreachable pair classes
    emit_csv(rows, args.out, ["n", "S_size", "S_out_size", "D"], chash)
    return EXIT_OK


def cmd_harmonic_witness(args, chash):
    group = cayley.build_group(args.group)
    b = cayley.cayley_ball(group, args.n + 2, cap=_ball_cap(args))
    rows = []
    for n in range(1, args.n + 1):
        _, c0 = harmonic.laplacian_witness(b, "c0", n,
                                           center=b.identity_vertex)
        _, l1 = harmonic.laplacian_witness(b, "l1", n,
                                           center=b.identity_vertex)
        rows.append({"n": n, "c0_ratio": c0, "c0_bound": 1.0 / (n + 1),
                     "l1_ratio": l1, "l1_bound": 2.0 / (n + 1)})
    emit_csv(rows, args.out,
             ["n", "c0_ratio", "c0_bound", "l1_ratio", "l1_bound"], chash)
    return EXIT_OK


# -- argument plumbing -----------------------------------------------------


def build_parser():
    top = argparse.ArgumentParser(
        prog="harmlab",
        description="numerical laboratory for discrete calculus, spectral "
                    "gaps, random walks, transport and isoperimetry")
    top.add_argument("--config", help="JSON file with default option values")
    sub = top.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--ball-cap", type=int, default=None)
        p.add_argument("--dry-run", action="store_true")

    p = sub.add_parser("spectral")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", default="1.5,3,4")
    p.add_argument("--exact-limit", type=int, default=spectral.BITMASK_LIMIT)
    common(p)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("walk")
    wsub = p.add_subparsers(dest="subcommand")
    q = wsub.add_parser("profile")
    q.add_argument("--group", required=True)
    q.add_argument("--radius", type=int, required=True)
    q.add_argument("--steps", type=int, required=True)
    q.add_argument("--laziness", type=float, default=0.5)
    common(q)
    q.set_defaults(func=cmd_walk_profile)
    q = wsub.add_parser("exit")
    q.add_argument("--group", required=True)
    q.add_argument("--region", type=int, required=True,
                   help="ball radius for the stopping region")
    q.add_argument("--to", default=None,
                   help="generator name for the second origin")
    common(q)
    q.set_defaults(func=cmd_walk_exit)

    p = sub.add_parser("transport")
    tsub = p.add_subparsers(dest="subcommand")
    q = tsub.add_parser("wasserstein")
    q.add_argument("--graph", required=True)
    q.add_argument("--src", required=True)
    q.add_argument("--dst", required=True)
    common(q)
    q.set_defaults(func=cmd_transport_wasserstein)
    q = tsub.add_parser("chain")
    q.add_argument("--group", required=True)
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--levels", required=True)
    common(q)
    q.set_defaults(func=cmd_transport_chain)

    p = sub.add_parser("iso")
    isub = p.add_subparsers(dest="subcommand")
    q = isub.add_parser("profile")
    q.add_argument("--graph", required=True)
    q.add_argument("--max-size", type=int, required=True)
    q.add_argument("--budget", type=int, default=isoperimetry.ENUM_BUDGET)
    common(q)
    q.set_defaults(func=cmd_iso_profile)
    q = isub.add_parser("radial")
    q.add_argument("--graph", required=True)
    q.add_argument("--set", required=True, help="JSON list of vertices")
    q.add_argument("--K", type=float, default=1.0)
    q.add_argument("--k", type=float, default=1.0)
    common(q)
    q.set_defaults(func=cmd_iso_radial)

    p = sub.add_parser("window")
    wsub2 = p.add_subparsers(dest="subcommand")
    q = wsub2.add_parser("stats")
    q.add_argument("--group", default="zd:2")
    q.add_argument("--square", type=int, required=True)
    q.add_argument("--label", default="s1")
    common(q)
    q.set_defaults(func=cmd_window_stats)

    p = sub.add_parser("harmonic")
    hsub = p.add_subparsers(dest="subcommand")
    q = hsub.add_parser("probe")
    q.add_argument("--group", required=True)
    q.add_argument("--radii", required=True, help="e.g. 5..40 or 5,10,20")
    common(q)
    q.set_defaults(func=cmd_harmonic_probe)
    q = hsub.add_parser("divergence")
    q.add_argument("--group", required=True)
    q.add_argument("--K", type=int, default=2)
    q.add_argument("--n", type=int, required=True)
    common(q)
    q.set_defaults(func=cmd_harmonic_divergence)
    q = hsub.add_parser("witness")
    q.add_argument("--group", required=True)
    q.add_argument("--n", type=int, required=True)
    common(q)
    q.set_defaults(func=cmd_harmonic_witness)
    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    if args.config:
        try:
            with open(args.config) as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"bad config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for key, val in overrides.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr):
                setattr(args, attr, val)
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("func", "config", "out", "dry_run")}
    chash = hashlib.sha256(
        json.dumps(cfg, sort_keys=True, default=str).encode()).hexdigest()[:12]
    if getattr(args, "dry_run", False):
        print(f"config ok ({chash})")
        return EXIT_OK
    try:
        return args.func(args, chash)
    except BUDGET_ERRORS as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except IoError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (HarmlabError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
