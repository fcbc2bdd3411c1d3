"""Command-line entry point.

Subcommands: build, mutate, weyl, explore, tables, dosp-graph, dosp, verify.
Exit codes: 0 success, 1 verification failure, 2 usage error.  Outputs are
deterministic for fixed inputs and --rng-seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import dospgraph, explorer, oracle, surfaces, weyl
from .cluster import (PSeed, Seed, apply_sequence, script_from_json,
                      seed_from_json, seed_to_json)
from .laurent import LaurentPoly
from .weights import parse_dosp


def _out(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_assembled(args):
    spec = surfaces.preset_spec(args.preset)
    if args.decoration == "fg":
        return surfaces.assemble_fg(spec, args.k)
    return surfaces.assemble_gr(spec, args.k)


def cmd_build(args):
    asm = _build_assembled(args)
    rows = weyl.row_data(asm).to_json()
    data = seed_to_json(asm.quiver, asm.k, asm.punctures, weights=asm.weights,
                        vars_=list(asm.names), rows=rows)
    _out(args, json.dumps(data, indent=1, sort_keys=True) + "\n")
    return 0


def _load_seed(path):
    with open(path) as fh:
        data = json.load(fh)
    quiver, k, punctures, weights, vars_ = seed_from_json(data)
    seed = Seed.initial(quiver, vars_)
    pseed = PSeed(quiver, weights) if weights is not None else None
    rows = weyl.RowData.from_json(data["rows"]) if "rows" in data else None
    return seed, pseed, k, punctures, rows


def cmd_mutate(args):
    seed, pseed, k, punctures, rows = _load_seed(args.seed)
    with open(args.script) as fh:
        script = script_from_json(json.load(fh), seed.quiver.n)
    out_seed = apply_sequence(seed, script)
    out_pseed = apply_sequence(pseed, script) if pseed is not None else None
    data = seed_to_json(out_seed.quiver, k, punctures,
                        weights=out_pseed.weights if out_pseed else None)
    data["vars"] = {str(v): str(out_seed.x[v]) for v in range(out_seed.quiver.n)}
    _out(args, json.dumps(data, indent=1, sort_keys=True) + "\n")
    return 0


def cmd_weyl(args):
    if args.seed:
        seed, pseed, k, punctures, rows = _load_seed(args.seed)
        if rows is None:
            print("seed file carries no row metadata; rebuild with `build`",
                  file=sys.stderr)
            return 2
        source = rows
    else:
        asm = _build_assembled(args)
        seed, pseed = asm.seed(), asm.pseed()
        k, punctures, source = asm.k, asm.punctures, asm
    try:
        if args.sg1:
            out_seed, out_pseed, report = weyl.apply_weyl_sg1(seed, source, args.row, pseed)
        else:
            out_seed, out_pseed, report = weyl.apply_weyl(seed, source, args.puncture,
                                                          args.row, pseed)
    except weyl.VerificationFailed as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    lines = ["before:"]
    lines += [f"  x{v} = {seed.x[v]}" for v in range(seed.quiver.n)]
    lines.append("after:")
    lines += [f"  x{v} = {out_seed.x[v]}" for v in range(out_seed.quiver.n)]
    lines.append(str(report))
    _out(args, "\n".join(lines) + "\n")
    return 0


def cmd_explore(args):
    pr = explorer.preset(args.preset)
    asm = pr.assembled
    limits = {}
    if args.max_nodes:
        limits["max_nodes"] = args.max_nodes
    elif args.preset == "torus-s11-k4":
        limits["max_nodes"] = 200  # infinite exchange graph; bounded by default
    if args.mode == "cluster":
        g = explorer.explore(asm.seed(), asm.pseed(), mode="cluster",
                             good_filter=args.good, **limits)
    else:
        g = explorer.explore(asm.pseed(), mode="pseed", good_filter=args.good, **limits)
    if args.output == "dot":
        _out(args, g.to_dot())
    elif args.output == "json":
        _out(args, json.dumps(g.to_json(), indent=1, sort_keys=True) + "\n")
    else:
        lines = [f"nodes={g.n}",
                 f"edges={explorer.undirected_edge_count(g)}",
                 f"complete={'yes' if g.complete else 'partial'}",
                 f"violations={len(g.violations)}"]
        if args.mode == "cluster":
            lines.append(f"variables={len(g.distinct_variables())}")
        _out(args, "\n".join(lines) + "\n")
    return 0


def cmd_tables(args):
    pr = explorer.preset(args.case)
    g = explorer.explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
    if not g.complete:
        print("exploration incomplete", file=sys.stderr)
        return 1
    rows = explorer.pcluster_table(g, pr.assembled.punctures[0])
    lines = ["pcluster,dosp"]
    for rep, dosp in rows:
        mult = " ".join(w.multiplicative() for w in rep)
        lines.append(f'"{mult}","{dosp}"')
    _out(args, "\n".join(lines) + "\n")
    return 0


def cmd_dosp_graph(args):
    g = dospgraph.build_hdosp(args.k)
    if args.power > 1:
        g = dospgraph.cartesian_power(g, args.power)
    if args.quotient:
        g = dospgraph.quotient_by_relabeling(g)
    if args.counts:
        _out(args, f"vertices={g.n}\nedges={len(g.edges)}\n")
        return 0
    if args.output == "csv":
        _out(args, g.degree_csv())
    elif args.output == "dot":
        _out(args, g.to_dot())
    else:
        _out(args, "\n".join(g.vertices) + "\n")
    return 0


def cmd_dosp(args):
    d = parse_dosp(args.dosp, args.k)
    if args.orbit:
        from .weights import dosp_orbit_key
        _out(args, dosp_orbit_key(d) + "\n")
        return 0
    neighbors = dospgraph.dosp_mutations(d)
    _out(args, "\n".join(str(m) for m in neighbors) + "\n")
    return 0


def cmd_verify(args):
    rng = random.Random(args.rng_seed)
    k = args.k
    passed = failed = 0
    first_bad = None

    def note(ok, detail):
        nonlocal passed, failed, first_bad
        if ok:
            passed += 1
        else:
            failed += 1
            if first_bad is None:
                first_bad = detail

    if args.identity == "flattening":
        for _ in range(args.trials):
            flag = oracle.Flag.random(rng, k)
            u = oracle.random_unipotent(rng, flag)
            for a in range(0, k + 1):
                for b in range(0, k + 1 - a):
                    for c in range(0, k + 1 - a - b):
                        eta = oracle.random_tensor(rng, k, k - a - b)
                        zeta = oracle.random_tensor(rng, k, k - a - c)
                        try:
                            ok = oracle.check_flattenproduct(flag, u, a, b, c, eta, zeta)
                        except oracle.Degenerate:
                            continue
                        note(ok, f"(a,b,c)=({a},{b},{c})")
    elif args.identity == "spiral":
        for _ in range(args.trials):
            flag = oracle.Flag.random(rng, k)
            u = oracle.random_unipotent(rng, flag)
            for a in range(0, k):
                for r in range(1, k + 1 - a):
                    try:
                        ok = oracle.check_flattensplit(flag, u, a, r,
                                                       oracle.random_tensor(rng, k, k - a - 1))
                        note(ok, f"(a,r)=({a},{r})")
                    except oracle.Degenerate:
                        pass
                    try:
                        ok = oracle.check_flattensplit_dual(
                            flag, u, a, r, oracle.random_tensor(rng, k, k - a - r + 1))
                        note(ok, f"dual (a,r)=({a},{r})")
                    except oracle.Degenerate:
                        pass
    elif args.identity == "killeq":
        import itertools
        from .coxeter import all_subsets
        for _ in range(args.trials):
            flag = oracle.Flag.random(rng, k)
            u = oracle.random_unipotent(rng, flag)
            for s in all_subsets(k):
                if not s:
                    continue
                for t in itertools.combinations(range(1, k + 1), len(s)):
                    if not all(x <= y for x, y in zip(t, s)):
                        continue
                    try:
                        ok = oracle.check_killeq(flag, u, s, t, k)
                    except oracle.Degenerate:
                        continue
                    note(ok, f"S={s} T={t}")
    total = passed + failed
    if failed:
        _out(args, f"FAIL {passed}/{total}\nfirst counterexample: {first_bad}\n")
        return 1
    _out(args, f"PASS {passed}/{total}\n")
    return 0


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rng-seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for CI compatibility; execution is sequential")
    common.add_argument("--output", choices=["json", "dot", "csv", "text"], default="text")
    common.add_argument("--out", help="write output to a file instead of stdout")
    p = argparse.ArgumentParser(prog="seedmut", parents=[common],
                                description="exact seed-mutation engine and checks")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    b = add("build", help="assemble an initial seed from a preset")
    b.add_argument("--preset", required=True,
                   help="digon | punctured-ngon(N) | torus-s11")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--decoration", choices=["fg", "gr"], default="fg",
                   help="flag decorations everywhere, or vectors on the boundary")
    b.set_defaults(func=cmd_build)

    m = add("mutate", help="apply a mutation/permutation script")
    m.add_argument("--seed", required=True)
    m.add_argument("--script", required=True)
    m.set_defaults(func=cmd_mutate)

    w = add("weyl", help="apply a reflection at a puncture")
    w.add_argument("--seed")
    w.add_argument("--preset")
    w.add_argument("--k", type=int)
    w.add_argument("--decoration", choices=["fg", "gr"], default="fg")
    w.add_argument("--puncture", default="p")
    w.add_argument("--row", type=int, required=True)
    w.add_argument("--sg1", action="store_true")
    w.set_defaults(func=cmd_weyl)

    e = add("explore", help="enumerate the exchange graph")
    e.add_argument("--preset", required=True,
                   choices=["sl3-d21", "sl3-d31", "sl4-d21", "torus-s11-k4"])
    e.add_argument("--mode", choices=["cluster", "pseed"], default="cluster")
    e.add_argument("--good", action="store_true")
    e.add_argument("--max-nodes", type=int)
    e.set_defaults(func=cmd_explore)

    t = add("tables", help="weight multisets up to relabeling, with dosps")
    t.add_argument("--case", required=True, choices=["sl3-d21", "sl3-d31", "sl4-d21"])
    t.set_defaults(func=cmd_tables)

    dg = add("dosp-graph", help="the mutation graph on dosps")
    dg.add_argument("--k", type=int, required=True)
    dg.add_argument("--counts", action="store_true")
    dg.add_argument("--quotient", action="store_true")
    dg.add_argument("--power", type=int, default=1)
    dg.set_defaults(func=cmd_dosp_graph)

    d = add("dosp", help="mutate or canonicalize one dosp")
    d.add_argument("dosp")
    d.add_argument("--k", type=int)
    d.add_argument("--orbit", action="store_true")
    d.set_defaults(func=cmd_dosp)

    v = add("verify", help="randomized exact identity checks")
    v.add_argument("identity", choices=["flattening", "spiral", "killeq"])
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--trials", type=int, default=20)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
