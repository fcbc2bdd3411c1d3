"""Exchange-graph exploration with exact deduplication, weight-table
extraction, dosp labeling and edge-contraction checks, quasi-automorphism
script verification, and the seed-reduction checks between decoration styles.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .cluster import (Mutate, Permute, PSeed, Quiver, Seed, apply_sequence,
                      canonical_pseed_key, cycles_to_perm, mutate_pseed,
                      mutate_seed, permute_pseed, pseeds_isomorphic,
                      symmetrical_vertices)
from .dospgraph import DospGraph, build_hdosp, cartesian_power
from .surfaces import (Assembled, assemble_fg, assemble_gr, digon_spec,
                       glue_sigma, punctured_ngon_spec, torus_spec)
from .weights import (ROOT_CONJUGATE, MultiWeight, is_basic_compatible,
                      is_compatible, normalize, pcluster_dosp, pcluster_osp,
                      w_act)


class LimitExceeded(RuntimeError):
    pass


class QuiverNotRestored(AssertionError):
    pass


class WeightMismatch(AssertionError):
    pass


@dataclass
class ExchangeGraph:
    mode: str                      # "cluster" | "pseed"
    keys: list                     # canonical node keys in discovery order
    nodes: dict                    # key -> representative (Seed or PSeed)
    pseeds: dict                   # key -> PSeed (cluster mode with weights)
    edges: list                    # (key a, key b, mutated vertex in a's rep)
    punctures: tuple
    complete: bool = True
    violations: list = field(default_factory=list)

    @property
    def n(self):
        return len(self.keys)

    def pcluster(self, key, p):
        ps = self.pseeds.get(key)
        return None if ps is None else ps.pcluster_at(p)

    def dosps(self, key) -> tuple:
        ps = self.pseeds[key]
        return tuple(str(pcluster_dosp(ps.pcluster_at(p))) for p in self.punctures)

    def distinct_variables(self):
        out = set()
        for key, node in self.nodes.items():
            if isinstance(node, Seed):
                for v in node.quiver.mutable():
                    out.add(str(node.x[v]))
        return sorted(out)

    def to_dot(self) -> str:
        index = {k: i for i, k in enumerate(self.keys)}
        lines = ["graph exchange {"]
        for i, _ in enumerate(self.keys):
            lines.append(f'  n{i};')
        seen = set()
        for a, b, _ in self.edges:
            e = tuple(sorted((index[a], index[b])))
            if e not in seen:
                seen.add(e)
                lines.append(f"  n{e[0]} -- n{e[1]};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        index = {k: i for i, k in enumerate(self.keys)}
        edges = sorted({tuple(sorted((index[a], index[b]))) for a, b, _ in self.edges})
        data = {"mode": self.mode, "nodes": self.n,
                "edges": [list(e) for e in edges], "complete": self.complete,
                "violations": len(self.violations)}
        if self.pseeds:
            data["pclusters"] = {
                str(index[k]): {p: [list(w.coords) for w in self.pseeds[k].pcluster_at(p)]
                                for p in self.punctures}
                for k in self.keys}
        return data


def _good(ps: PSeed):
    """Punctures at which the weight multiset fails basic compatibility."""
    bad = []
    for p in ps.punctures:
        if not is_basic_compatible(ps.pcluster_at(p)):
            bad.append(p)
    return bad


def explore(seed, pseed: PSeed | None = None, mode: str = "cluster",
            max_nodes: int | None = None, max_depth: int | None = None,
            good_filter: bool = False) -> ExchangeGraph:
    """Breadth-first exchange-graph enumeration with canonical deduplication.

    In cluster mode nodes are unordered clusters of Laurent variables (the
    weight data rides along when given); in pseed mode nodes are weight-graded
    seeds up to vertex relabeling.  With ``good_filter`` children whose weight
    multiset is not basic compatible are recorded as violations and pruned.
    """
    if mode == "pseed":
        ps = seed if isinstance(seed, PSeed) else pseed
        ps = ps.drop_vertices(sorted(ps.quiver.frozen))
        key0 = canonical_pseed_key(ps)
        nodes = {key0: ps}
        pseeds = {key0: ps}
    else:
        key0 = seed.cluster_key()
        nodes = {key0: seed}
        pseeds = {} if pseed is None else {key0: pseed}
    punctures = tuple(pseed.punctures) if pseed is not None else \
        (tuple(seed.punctures) if isinstance(seed, PSeed) else ())
    keys = [key0]
    edges = []
    violations = []
    complete = True
    queue = deque([(key0, 0)])
    while queue:
        key, depth = queue.popleft()
        if max_depth is not None and depth >= max_depth:
            complete = False
            continue
        node = nodes[key]
        for v in node.quiver.mutable():
            if mode == "pseed":
                child = mutate_pseed(node, v)
                child_ps = child
                ck = canonical_pseed_key(child)
            else:
                child = mutate_seed(node, v)
                ck = child.cluster_key()
                child_ps = mutate_pseed(pseeds[key], v) if pseeds else None
            if ck not in nodes:
                if good_filter and child_ps is not None:
                    bad = _good(child_ps)
                    if bad:
                        violations.append((key, v, tuple(bad)))
                        continue
                if max_nodes is not None and len(nodes) >= max_nodes:
                    complete = False
                    continue
                nodes[ck] = child
                if child_ps is not None:
                    pseeds[ck] = child_ps
                keys.append(ck)
                queue.append((ck, depth + 1))
            edges.append((key, ck, v))
    return ExchangeGraph(mode, keys, nodes, pseeds, edges, punctures,
                         complete, violations)


def undirected_edge_count(g: ExchangeGraph) -> int:
    index = {k: i for i, k in enumerate(g.keys)}
    return len({tuple(sorted((index[a], index[b]))) for a, b, _ in g.edges})


# ---------------------------------------------------------------------------
# weight tables up to relabeling


def orbit_pair(pcluster, k: int):
    """Joint lexicographic minimum over relabelings of (multiset, dosp)."""
    best = None
    for perm in itertools.permutations(range(1, k + 1)):
        cand = tuple(sorted(w_act(perm, w).coords for w in pcluster))
        if best is None or cand < best[0]:
            rep = [normalize(c, k) for c in cand]
            best = (cand, str(pcluster_dosp(rep)))
    return best


def pcluster_table(g: ExchangeGraph, p: str) -> list:
    """Distinct weight multisets at p up to the relabeling action, each with
    its dosp; rows sorted by the canonical representative."""
    k = None
    rows = {}
    for key in g.keys:
        pc = g.pseeds[key].pcluster_at(p)
        k = pc[0].k
        cand, dosp = orbit_pair(pc, k)
        rows[cand] = dosp
    out = []
    for cand in sorted(rows):
        rep = [normalize(c, k) for c in cand]
        out.append((rep, rows[cand]))
    return out


# ---------------------------------------------------------------------------
# dosp labeling along edges, and edge contraction


def dosp_labeling_check(g: ExchangeGraph) -> list:
    """Violations of: adjacent nodes' dosps agree or differ by one mutation,
    and disagree at most at one puncture."""
    from .dospgraph import dosp_mutations
    from .weights import parse_dosp
    problems = []
    for a, b, v in g.edges:
        da, db = g.dosps(a), g.dosps(b)
        changed = [i for i, (x, y) in enumerate(zip(da, db)) if x != y]
        if len(changed) > 1:
            problems.append((a, b, "changes at more than one puncture"))
            continue
        for i in changed:
            x = parse_dosp(da[i])
            if db[i] not in {str(m) for m in dosp_mutations(x)}:
                problems.append((a, b, f"{da[i]} and {db[i]} are not one move apart"))
    return problems


def edge_contraction_check(g: ExchangeGraph, h: DospGraph) -> dict:
    """Check the node map onto the dosp graph (or its product over punctures)
    is simplicial, and report which target edges are covered."""
    if len(g.punctures) == 1:
        target = h
        def label(key):
            return g.dosps(key)[0]
    else:
        target = cartesian_power(h, len(g.punctures))
        def label(key):
            return "(" + ",".join(g.dosps(key)) + ")"
    index = target.index
    adj = set()
    for i, j in target.edges:
        adj.add((i, j))
        adj.add((j, i))
    covered = set()
    simplicial = True
    for a, b, _ in g.edges:
        ia, ib = index[label(a)], index[label(b)]
        if ia == ib:
            continue
        if (ia, ib) not in adj:
            simplicial = False
        covered.add((min(ia, ib), max(ia, ib)))
    vertex_image = {label(k) for k in g.keys}
    return {
        "simplicial": simplicial,
        "covered_edges": len(covered),
        "target_edges": len(target.edges),
        "surjective_on_edges": covered == set(target.edges),
        "vertices_hit": len(vertex_image),
        "target_vertices": target.n,
    }


# ---------------------------------------------------------------------------
# good-seed structure checks


def good_seed_report(ps: PSeed) -> list:
    """Violations of the structural facts that hold on good seeds:
    root-conjugate pairs sit at symmetrical vertices and agree at the other
    punctures; every exchange weight lies in the closed region of the seed's
    osp; every global inequality is strict at least twice or is broken by a
    root-conjugate pair."""
    problems = []
    mutable = ps.quiver.mutable()
    k = ps.weights[0].vectors[0].k
    for p in ps.punctures:
        pc = [ps.weights[v].at(p) for v in mutable]
        # symmetrical vertices + agreement elsewhere
        for i, j in itertools.combinations(range(len(mutable)), 2):
            kind, _ = is_compatible(pc[i], pc[j])
            if kind == ROOT_CONJUGATE:
                v, w = mutable[i], mutable[j]
                if not symmetrical_vertices(ps.quiver, v, w):
                    problems.append((p, "root-conjugate pair not symmetrical", v, w))
                for q in ps.punctures:
                    if q != p and ps.weights[v].at(q) != ps.weights[w].at(q):
                        problems.append((p, "pair differs at another puncture", v, w))
        # exchange weights inside the closed region
        osp = pcluster_osp(pc)
        for v in mutable:
            kap = ps.kappa(v).at(p)
            for bi, bj in itertools.combinations(range(len(osp.blocks)), 2):
                for a in osp.blocks[bi]:
                    for b in osp.blocks[bj]:
                        if kap.coords[a - 1] < kap.coords[b - 1]:
                            problems.append((p, "exchange weight leaves the region", v))
        # every weak global inequality strict at least twice
        for a in range(1, k + 1):
            for b in range(1, k + 1):
                if a == b:
                    continue
                if any(is_compatible(x, y) == (ROOT_CONJUGATE, (a, b))
                       for x, y in itertools.permutations(pc, 2)):
                    continue
                diffs = [w.coords[a - 1] - w.coords[b - 1] for w in pc]
                if all(d >= 0 for d in diffs):
                    if sum(1 for d in diffs if d > 0) < 2:
                        problems.append((p, "inequality strict fewer than twice", a, b))
    return problems


# ---------------------------------------------------------------------------
# quasi-automorphism scripts


def check_script_automorphism(ps: PSeed, script, expected_weight_map=None) -> PSeed:
    """Apply a permutation-mutation script; require the quiver back and the
    weights transformed by the given per-puncture permutations (identity when
    None).  Returns the final P-seed."""
    out = apply_sequence(ps, script)
    if out.quiver != ps.quiver:
        raise QuiverNotRestored()
    expected_weight_map = expected_weight_map or {}
    for v in range(ps.quiver.n):
        want = ps.weights[v]
        for p, perm in expected_weight_map.items():
            want = want.act(p, perm)
        if out.weights[v] != want:
            raise WeightMismatch(f"vertex {v}")
    return out


# ---------------------------------------------------------------------------
# presets


@dataclass
class Preset:
    name: str
    assembled: Assembled
    labels: dict   # script labels -> vertex index in the full seed

    def mutable_labels(self) -> dict:
        asm = self.assembled
        keep = [v for v in range(asm.quiver.n) if v not in asm.quiver.frozen]
        remap = {v: i for i, v in enumerate(keep)}
        return {a: remap[v] for a, v in self.labels.items()}


def _arc_vertex(asm: Assembled, t: int, d: int) -> int:
    """The weight-depth-d vertex on the arc carried by side 0 of triangle t."""
    frag = asm.fragments[t]
    idx = frag.class_index((d, asm.k - d, 0))
    return asm.vertex_of[(t, idx)]


def preset(name: str) -> Preset:
    """Initial data for the named case, with the vertex labels the
    quasi-automorphism scripts are written in."""
    if name == "sl3-d21":
        asm = assemble_gr(digon_spec(), 3)
        labels = {2 * t + d: _arc_vertex(asm, t, d) for t in (0, 1) for d in (1, 2)}
    elif name == "sl3-d31":
        asm = assemble_gr(punctured_ngon_spec(3), 3)
        # 1,3,5 the depth-1 arc vertices; 2,4,6 the depth-2 ones
        labels = {}
        for t in range(3):
            labels[2 * t + 1] = _arc_vertex(asm, t, 1)
            labels[2 * t + 2] = _arc_vertex(asm, t, 2)
    elif name == "sl4-d21":
        asm = assemble_gr(digon_spec(), 4)
        # arc 1 labels 1,2,3 by depth; arc 2 labels 4,5,6 by decreasing depth
        labels = {d: _arc_vertex(asm, 0, d) for d in (1, 2, 3)}
        labels.update({7 - d: _arc_vertex(asm, 1, d) for d in (1, 2, 3)})
    elif name == "torus-s11-k4":
        asm = assemble_fg(torus_spec(), 4)
        return Preset(name, asm, {})
    else:
        raise ValueError(f"unknown preset {name!r}")
    return Preset(name, asm, labels)


def sigma_script(name: str, ps: PSeed, labels: dict) -> list:
    """The quasi-automorphism scripts realized by permutation-mutation."""
    n = ps.quiver.n

    def perm(mapping):
        img = list(range(n))
        for a, b in mapping.items():
            img[labels[a]] = labels[b]
        return Permute(tuple(img))

    # juxtaposed mutations compose right to left (rightmost acts first)
    if name == "sl3-d31":
        return [Mutate(labels[3]), Mutate(labels[2]),
                perm({2: 5, 5: 3, 3: 4, 4: 2})]
    if name == "sl4-d21":
        return [Mutate(labels[3]), Mutate(labels[5]), Mutate(labels[6]), Mutate(labels[3]),
                perm({1: 6, 6: 5, 5: 1, 3: 4, 4: 3})]
    raise ValueError(name)


# ---------------------------------------------------------------------------
# reductions between the two decoration styles


def check_flag_to_vector_reduction(k: int) -> dict:
    """Mutations carrying the flag-decorated digon seed to the fan seed of the
    vector-decorated (k)-gon, after removing weight-0 vertices.

    Hard-coded sequence for k=5; breadth-first search for k=3.
    """
    from .cluster import quiver_isomorphism
    from .weights import fundamental
    src = assemble_fg(digon_spec(), k).mutable_pseed()
    target = assemble_gr(punctured_ngon_spec(k), k).mutable_pseed()
    tkey = canonical_pseed_key(target)
    if k == 5:
        figq = Quiver.from_arrows(20, [(a - 1, b - 1) for a, b in _DIGON_K5_ARROWS])
        weights = tuple(MultiWeight(("p",), (fundamental(_DIGON_K5_ROWS[v + 1], 5),))
                        for v in range(20))
        ref = PSeed(figq, weights)
        cols_a = [str(src.weights[v].at("p")) for v in range(20)]
        cols_b = [str(w.at("p")) for w in weights]
        iso = quiver_isomorphism(src.quiver, figq, cols_a, cols_b)
        if iso is None:
            return {"ok": False, "reason": "assembled seed does not match the reference"}
        inv = {iso[v]: v for v in range(20)}
        sequence = [inv[lab - 1] for lab in _DIGON_K5_SEQUENCE]
        cur = src
        for v in sequence:
            cur = mutate_pseed(cur, v)
        ok = canonical_pseed_key(cur.positive_part()) == tkey
        return {"ok": ok, "k": k, "mutations": sequence}
    if k == 3:
        seen = {canonical_pseed_key(src): []}
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            trace = seen[canonical_pseed_key(cur)]
            if len(trace) > 6:
                continue
            for v in cur.quiver.mutable():
                child = mutate_pseed(cur, v)
                if _good(child):
                    continue
                ck = canonical_pseed_key(child)
                if ck == tkey:
                    return {"ok": True, "k": k, "mutations": trace + [v]}
                if ck not in seen:
                    seen[ck] = trace + [v]
                    queue.append(child)
        return {"ok": False, "reason": "no sequence found"}
    raise ValueError("supported for k in {3, 5}")


def lowering_vertices(ps: PSeed, p: str):
    """Vertices whose mutation lowers the weight one fundamental step."""
    from .weights import fundamental
    k = ps.weights[0].vectors[0].k
    out = []
    for v in ps.quiver.mutable():
        wt = ps.weights[v].at(p)
        r = next((i for i in range(1, k) if wt == fundamental(i, k)), None)
        if r is None:
            continue
        if ps.kappa(v).at(p) == fundamental(r, k) + fundamental(r - 1, k):
            out.append((v, r))
    return out


def check_arch_reduction(k: int, s: int) -> dict:
    """One step of peeling the arch: the glued (s,1) seed reaches the glued
    (s-1,1) seed by weight-lowering column mutations and weight-0 deletions."""
    if not (2 <= s <= k - 1):
        raise ValueError("s must be in [2, k-1]")
    src = glue_sigma(k, s, 1).pseed().positive_part()
    target = canonical_pseed_key(glue_sigma(k, s - 1, 1).pseed().positive_part())
    budget = (k - s) * (k - s + 1) // 2

    def dfs(state, depth, prev, col_rows, trace):
        if not col_rows and canonical_pseed_key(state.positive_part()) == target:
            return trace
        if depth >= budget and col_rows:
            return None
        cands = lowering_vertices(state, "p")
        ordered = []
        if prev is not None:
            pv, pr = prev
            ordered += [cand for cand in cands if cand[1] == pr - 1
                        and state.quiver.b[pv][cand[0]] != 0]
        if not ordered and col_rows:
            ordered = [cand for cand in cands if cand[1] == col_rows[0]]
        for v, r in ordered:
            nxt = mutate_pseed(state, v)
            if nxt.weights[v].at("p").is_zero():
                res = dfs(nxt.drop_vertices([v]), depth + 1, None,
                          col_rows[1:], trace + [(r, v, "deleted")])
            else:
                res = dfs(nxt, depth + 1, (v, r), col_rows, trace + [(r, v)])
            if res is not None:
                return res
        return None

    trace = dfs(src, 0, None, list(range(k - s, 0, -1)), [])
    return {"ok": trace is not None, "k": k, "s": s, "trace": trace or []}


# reference arrow data for the k=5 flag-decorated digon (mutable part);
# vertex labels 1..20, rows give the weight depth of each label
_DIGON_K5_ARROWS = [(4, 1), (1, 6), (2, 4), (6, 2), (3, 4), (6, 3), (8, 3), (3, 12),
                    (4, 5), (4, 8), (9, 4), (5, 6), (5, 9), (11, 5), (6, 11), (12, 6),
                    (7, 8), (12, 7), (14, 7), (7, 20), (8, 9), (8, 14), (15, 8),
                    (9, 10), (9, 15), (16, 9), (10, 11), (10, 16), (18, 10), (11, 12),
                    (11, 18), (19, 11), (12, 19), (20, 12), (13, 14), (20, 13),
                    (14, 15), (15, 16), (16, 17), (17, 18), (18, 19), (19, 20)]
_DIGON_K5_ROWS = {**{i: 4 for i in (1, 2)}, **{i: 3 for i in (3, 4, 5, 6)},
                  **{i: 2 for i in range(7, 13)}, **{i: 1 for i in range(13, 21)}}
_DIGON_K5_SEQUENCE = [19, 12, 11, 6, 14, 16, 9, 4, 8, 9]
