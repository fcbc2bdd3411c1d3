"""The acceptance suite: one test per numbered criterion, each printing an
explicit pass/fail line.  Run with ``pytest -s tests/test_acceptance.py``.
"""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from seedmut.cluster import (Mutate, PSeed, Quiver, Seed, apply_sequence,
                             mutate_pseed, mutate_seed, pseeds_isomorphic,
                             quiver_isomorphism)
from seedmut.coxeter import all_subsets, coxeter_length, f_lambda, \
    grassmannian_perm, young_diagram
from seedmut.dospgraph import (build_hdosp, cartesian_power, dosp_mutations,
                               enumerate_dosps, quotient_by_relabeling)
from seedmut.explorer import (check_arch_reduction, check_flag_to_vector_reduction,
                              check_script_automorphism, dosp_labeling_check,
                              edge_contraction_check, explore, good_seed_report,
                              pcluster_table, preset, sigma_script,
                              undirected_edge_count, _arc_vertex, orbit_pair)
from seedmut.laurent import LaurentPoly
from seedmut.oracle import (Degenerate, ExtAction, Flag, check_flattenproduct,
                            check_flattensplit, check_flattensplit_dual,
                            check_killeq, random_tensor, random_unipotent,
                            w_s_via_flag, w_s_via_word)
from seedmut.surfaces import (TriangulationSpec, assemble_fg, assemble_gr,
                              digon_spec, dim_fg, dim_gr, glue_fragments,
                              punctured_ngon_spec, q_fragment, q_fragment_s,
                              torus_spec)
from seedmut.weights import dosp_orbit_key, parse_dosp, pcluster_dosp
from seedmut.weyl import apply_weyl, apply_weyl_sg1

from refdata import (FLIP_K4_ARROWS, FLIP_K4_DEPTH, FLIP_K4_NAMES,
                     FLIP_K4_SEQUENCE, HDOSP4_QUOTIENT_EDGES, TABLE_SL3_D21,
                     TABLE_SL3_D31, TABLE_SL4_D21, TORUS_K4_LEFT,
                     TORUS_K4_LHS_TERMS, TORUS_K4_MIDPOINTS, TORUS_K4_RHS_TERMS,
                     TORUS_K4_RIGHT, TORUS_K4_ROW3, parse_table_row)


@contextmanager
def criterion(number, title):
    start = time.time()
    try:
        yield
    except BaseException:
        print(f"FAIL criterion {number}: {title}")
        raise
    print(f"PASS criterion {number}: {title} ({time.time() - start:.1f}s)")


def test_criterion_01_finite_type_enumeration():
    with criterion(1, "finite-type enumeration: 50 clusters, 100 edges, 16 variables"):
        start = time.time()
        pr = preset("sl3-d21")
        g = explore(pr.assembled.seed(), pr.assembled.pseed(), mode="cluster",
                    good_filter=True)
        assert g.n == 50
        assert undirected_edge_count(g) == 100
        assert len(g.distinct_variables()) == 16
        assert len(pr.assembled.quiver.frozen) == 2
        assert g.complete and not g.violations
        assert time.time() - start < 5.0


def _check_table(name, expected, k):
    pr = preset(name)
    start = time.time()
    g = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
    rows = pcluster_table(g, "p")
    assert g.complete and not g.violations
    assert len(rows) == len(expected)
    got = {orbit_pair(rep, k)[0]: dosp for rep, dosp in rows}
    for text, dosp in expected:
        rep = parse_table_row(text, k)
        key, canon_dosp = orbit_pair(rep, k)
        assert str(pcluster_dosp(rep)) == dosp, (text, dosp)
        assert key in got and got[key] == canon_dosp, text
    assert time.time() - start < 60.0


def test_criterion_02_weight_tables():
    with criterion(2, "weight tables: 7 + 16 + 27 orbit rows with their dosps"):
        _check_table("sl3-d21", TABLE_SL3_D21, 3)
        _check_table("sl3-d31", TABLE_SL3_D31, 3)
        _check_table("sl4-d21", TABLE_SL4_D21, 4)


def test_criterion_03_dosp_graph_counts():
    with criterion(3, "dosp graph counts 3/14/84, 11-vertex quotient, 3x3 grid"):
        start = time.time()
        g2 = build_hdosp(2)
        assert g2.n == 3 and len(g2.edges) == 2
        assert g2.degree_sequence() == [1, 1, 2]
        g3 = build_hdosp(3)
        assert g3.n == 14 and len(g3.edges) == 24
        g4 = build_hdosp(4)
        assert g4.n == 84
        q = quotient_by_relabeling(g4)
        assert q.n == 11
        drawn = {frozenset(dosp_orbit_key(parse_dosp(v)) for v in e)
                 for e in HDOSP4_QUOTIENT_EDGES}
        built = {frozenset((q.vertices[i], q.vertices[j])) for i, j in q.edges}
        assert built == drawn
        grid = cartesian_power(g2, 2)
        assert grid.n == 9 and len(grid.edges) == 12
        assert time.time() - start < 1.0


def test_criterion_04_neighbor_list():
    with criterion(4, "the 9 mutation neighbors of 12|345^+|6 in 4 orbit groups"):
        got = {str(m) for m in dosp_mutations(parse_dosp("12|345^+|6"))}
        assert got == {"12|3456^+", "1|2|345^+|6", "2|1|345^+|6",
                       "12|34|56", "12|35|46", "12|45|36",
                       "12|34|5|6", "12|35|4|6", "12|45|3|6"}
        groups = {}
        for m in got:
            groups.setdefault(dosp_orbit_key(parse_dosp(m)), []).append(m)
        assert len(groups) == 4
        assert sorted(len(v) for v in groups.values()) == [1, 2, 3, 3]


def test_criterion_05_edge_contraction():
    with criterion(5, "the finite exchange graph contracts onto the dosp graph"):
        pr = preset("sl3-d21")
        g = explore(pr.assembled.seed(), pr.assembled.pseed(), mode="cluster",
                    good_filter=True)
        report = edge_contraction_check(g, build_hdosp(3))
        assert report["simplicial"]
        assert report["surjective_on_edges"]
        assert report["vertices_hit"] == report["target_vertices"] == 14
        assert dosp_labeling_check(g) == []


def test_criterion_06_flattening():
    with criterion(6, "flattening identity, >=100 exact trials per degree triple"):
        start = time.time()
        rng = random.Random(2026)
        for k in (3, 4, 5):
            cells = [(a, b, c)
                     for a in range(k + 1)
                     for b in range(k + 1 - a)
                     for c in range(k + 1 - a - b)]
            counts = {cell: 0 for cell in cells}
            while min(counts.values()) < 100:
                flag = Flag.random(rng, k)
                u = ExtAction(random_unipotent(rng, flag))
                for (a, b, c) in cells:
                    if counts[(a, b, c)] >= 100:
                        continue
                    eta = random_tensor(rng, k, k - a - b)
                    zeta = random_tensor(rng, k, k - a - c)
                    try:
                        assert check_flattenproduct(flag, u, a, b, c, eta, zeta), \
                            (k, a, b, c)
                    except Degenerate:
                        continue
                    counts[(a, b, c)] += 1
        # the (1,2,2) expansion at k=5: binomial numerators over two tableaux
        from math import comb
        s = (1, 4, 5)
        ell = coxeter_length(grassmannian_perm(s, 5))
        assert ell == 4
        assert [(-1) ** (ell - j) * comb(ell, j) for j in range(ell + 1)] == \
            [1, -4, 6, -4, 1]
        assert f_lambda(young_diagram(s, 5)) == 2
        elapsed = time.time() - start
        assert elapsed < 120.0, f"{elapsed:.0f}s"


def test_criterion_07_kill_identity():
    with criterion(7, "kill identity for all nested pairs, flag/word agreement"):
        rng = random.Random(7)
        for k in (3, 4, 5):
            pairs = []
            for s in all_subsets(k):
                if not s:
                    continue
                for t in itertools.combinations(range(1, k + 1), len(s)):
                    if all(x <= y for x, y in zip(t, s)):
                        pairs.append((s, t))
            for _ in range(20):
                flag = Flag.random(rng, k)
                u = ExtAction(random_unipotent(rng, flag))
                for s, t in pairs:
                    try:
                        assert check_killeq(flag, u, s, t, k), (k, s, t)
                    except Degenerate:
                        continue
        done = 0
        while done < 100:
            k = rng.choice((3, 4, 5))
            flag = Flag.random(rng, k)
            u = random_unipotent(rng, flag)
            s = tuple(sorted(rng.sample(range(1, k + 1), rng.randint(1, k))))
            try:
                assert w_s_via_flag(flag, u, s, k) == w_s_via_word(flag, u, s, k)
            except Degenerate:
                continue
            done += 1


def test_criterion_08_spiral():
    with criterion(8, "spiral identities, both signs, 50 exact trials per (a,r)"):
        rng = random.Random(8)
        for k in (3, 4, 5):
            for a in range(0, k):
                for r in range(1, k + 1 - a):
                    done = 0
                    while done < 50:
                        flag = Flag.random(rng, k)
                        u = ExtAction(random_unipotent(rng, flag))
                        try:
                            assert check_flattensplit(
                                flag, u, a, r, random_tensor(rng, k, k - a - 1)), (k, a, r)
                            assert check_flattensplit_dual(
                                flag, u, a, r, random_tensor(rng, k, k - a - r + 1)), \
                                (k, a, r)
                        except Degenerate:
                            continue
                        done += 1


def test_criterion_09_weyl_as_mutation():
    with criterion(9, "reflection action on fan seeds: exact rescaling + involution"):
        start = time.time()
        for n in (2, 3, 4):
            for k in (2, 3, 4):
                asm = assemble_gr(punctured_ngon_spec(n), k)
                seed, ps = asm.seed(), asm.pseed()
                for i in range(1, k):
                    s2, p2, rep = apply_weyl(seed, asm, "p", i, ps)
                    assert rep.factor is not None  # verified as a Laurent identity
                    s3, p3, _ = apply_weyl(s2, asm, "p", i, p2)
                    assert s3 == seed and p3 == ps
        assert time.time() - start < 30.0


def _torus_vars():
    return tuple(f"x{v}" for v in range(15))


def test_criterion_10_once_punctured_torus():
    with criterion(10, "torus k=4: midpoint mutation figure, regrouped identity, involution"):
        # the displayed quiver mutates onto the displayed image
        fig = Quiver.from_arrows(15, TORUS_K4_LEFT)
        cur = fig
        for v in sorted(TORUS_K4_MIDPOINTS):
            cur = mutate_quiver_local(cur, v)
        assert cur == Quiver.from_arrows(15, TORUS_K4_RIGHT)

        # the assembled seed is the displayed quiver (weights and rows match)
        asm = assemble_fg(torus_spec(), 4)
        from seedmut.weights import normalize
        mid = str(normalize([2, 2, 0, 0], 4))
        side = str(normalize([2, 1, 1, 0], 4))
        interior = str(normalize([3, 1, 0, 0], 4))
        cols_a = [str(asm.weights[v].at("p")) for v in range(15)]
        cols_b = [mid if v in TORUS_K4_MIDPOINTS else
                  side if v in TORUS_K4_ROW3 else interior for v in range(15)]
        assert quiver_isomorphism(asm.quiver, fig, cols_a, cols_b) is not None

        # the twelve-term rhombus sum equals the six-term regrouped sum
        vars_ = _torus_vars()
        seed = Seed.initial(fig, list(vars_))
        mutated = seed
        for v in sorted(TORUS_K4_MIDPOINTS):
            mutated = mutate_seed(mutated, v)

        def mono(idxs, primed=()):
            out = LaurentPoly.one(vars_)
            for t in idxs:
                if isinstance(t, str) and t.endswith("p"):
                    out = out * mutated.x[int(t[:-1])]
                else:
                    out = out * seed.x[t]
            return out

        lhs = LaurentPoly.zero(vars_)
        for num, den in TORUS_K4_LHS_TERMS:
            lhs = lhs + mono(num).exact_div(mono(den))
        rhs_num = LaurentPoly.zero(vars_)
        rhs_den = LaurentPoly.one(vars_)
        dens = [mono(den) for _, den in TORUS_K4_RHS_TERMS]
        for d in dens:
            rhs_den = rhs_den * d
        for (num, _), j in zip(TORUS_K4_RHS_TERMS, range(6)):
            term = mono(num)
            for t, d in enumerate(dens):
                if t != j:
                    term = term * d
            rhs_num = rhs_num + term
        assert lhs * rhs_den == rhs_num

        # the engine run: verified application and involution at the midpoint row
        seed0, ps0 = asm.seed(), asm.pseed()
        s2, p2, rep = apply_weyl_sg1(seed0, asm, 2, ps0)
        assert len(rep.midpoints) == 3
        s3, p3, _ = apply_weyl_sg1(s2, asm, 2, p2)
        assert s3 == seed0 and p3 == ps0


def mutate_quiver_local(q, v):
    from seedmut.cluster import mutate_quiver
    return mutate_quiver(q, v)


def test_criterion_11_seed_reductions():
    with criterion(11, "digon-to-fan reduction (k=5) and arch peeling (k=8, s=7..2)"):
        assert check_flag_to_vector_reduction(5)["ok"]
        for s in range(7, 1, -1):
            assert check_arch_reduction(8, s)["ok"], s


def test_criterion_12_dosp_walk():
    with criterion(12, "the k=7 ladder walk grows 23456^+ and peels to 23456^-"):
        asm = assemble_gr(digon_spec(), 7)
        keep = [v for v in range(asm.quiver.n) if v not in asm.quiver.frozen]
        remap = {v: i for i, v in enumerate(keep)}
        lab = {}
        for d in range(1, 7):
            lab[2 * d - 1] = remap[_arc_vertex(asm, 0, d)]
            lab[2 * d] = remap[_arc_vertex(asm, 1, d)]
        ps = asm.pseed().drop_vertices(sorted(asm.quiver.frozen))
        walk = [str(pcluster_dosp(ps.pcluster_at("p")))]
        for step in ([4], [6, 5], [8, 7, 6], [10, 9, 8, 7]):
            for m in step:
                ps = mutate_pseed(ps, lab[m])
            walk.append(str(pcluster_dosp(ps.pcluster_at("p"))))
        assert walk == ["1|2|3|4|5|6|7", "1|23|4|5|6|7", "1|234^+|5|6|7",
                        "1|2345^+|6|7", "1|23456^+|7"]
        for m in (7, 6, 5, 4, 3):
            ps = mutate_pseed(ps, lab[m])
            walk.append(str(pcluster_dosp(ps.pcluster_at("p"))))
        assert walk[-1] == "1|23456^-|7"
        assert walk[5:] == ["1|2345^+|6|7", "1|234^+|56|7", "1|23|456^-|7",
                            "1|2|3456^-|7", "1|23456^-|7"]


def test_criterion_13_property_suites():
    with criterion(13, "balancing/involution en masse, good-seed structure, dimensions"):
        rng = random.Random(13)
        builders = [assemble_gr(digon_spec(), 3), assemble_gr(digon_spec(), 4),
                    assemble_gr(digon_spec(), 7),
                    assemble_gr(punctured_ngon_spec(3), 3),
                    assemble_gr(punctured_ngon_spec(4), 4),
                    assemble_fg(digon_spec(), 3), assemble_fg(digon_spec(), 5),
                    assemble_fg(punctured_ngon_spec(4), 3),
                    assemble_fg(torus_spec(), 4)]
        total = 0
        while total < 10_000:
            asm = rng.choice(builders)
            cur = asm.pseed()
            for _ in range(rng.randint(5, 25)):
                v = rng.choice(cur.quiver.mutable())
                nxt = mutate_pseed(cur, v)
                assert nxt.is_balanced()
                total += 1
                if total % 10 == 0:
                    assert mutate_pseed(nxt, v) == cur
                    total += 1
                cur = nxt

        for name in ("sl3-d21", "sl3-d31", "sl4-d21"):
            pr = preset(name)
            g = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
            assert not g.violations
            for key in g.keys:
                assert good_seed_report(g.pseeds[key]) == [], name
        pr = preset("sl3-d21")
        g = explore(pr.assembled.seed(), pr.assembled.pseed(), mode="cluster",
                    good_filter=True)
        for key in g.keys:
            assert good_seed_report(g.pseeds[key]) == []

        for k in range(2, 7):
            assert assemble_fg(digon_spec(), k).quiver.n == dim_fg(0, 1, 3, 2, k)
            assert assemble_gr(digon_spec(), k).quiver.n == dim_gr(0, 1, 1, 2, k)
            assert assemble_fg(torus_spec(), k).quiver.n == dim_fg(1, 0, 1, 0, k)
            for n in (3, 4, 5):
                assert assemble_fg(punctured_ngon_spec(n), k).quiver.n == \
                    dim_fg(0, 1, n + 1, n, k)
                assert assemble_gr(punctured_ngon_spec(n), k).quiver.n == \
                    dim_gr(0, 1, 1, n, k)


def _flip_reference_pseed():
    from seedmut.weights import MultiWeight, fundamental
    index = {name: i for i, name in enumerate(FLIP_K4_NAMES)}
    q = Quiver.from_arrows(len(FLIP_K4_NAMES),
                           [(index[a], index[b]) for a, b in FLIP_K4_ARROWS])
    weights = tuple(MultiWeight(("p",), (fundamental(FLIP_K4_DEPTH[name], 4),))
                    for name in FLIP_K4_NAMES)
    return PSeed(q, weights), index


def test_criterion_14_flip_is_mutation():
    with criterion(14, "flips realized by mutation: boundary case k=4 and interior case k=3"):
        # boundary case: the six-step sequence on the drawn quadrilateral
        ref, index = _flip_reference_pseed()
        original = glue_fragments(
            [q_fragment_s(4, 1), q_fragment(4)],
            [("p", "b2", "b1"), ("p", "b1", "q")],
            [((0, 2), (1, 0))], ("p",))
        cols_a = [str(original.weights[v].at("p")) for v in range(original.quiver.n)]
        cols_b = [str(ref.weights[index[name]].at("p")) for name in FLIP_K4_NAMES]
        iso = quiver_isomorphism(original.quiver, ref.quiver, cols_a, cols_b)
        assert iso is not None

        cur = ref
        for name in FLIP_K4_SEQUENCE:
            cur = mutate_pseed(cur, index[name], check=False)
        flipped = glue_fragments(
            [q_fragment_s(4, 1), q_fragment(4)],
            [("q", "b2", "b1"), ("p", "b2", "q")],
            [((0, 0), (1, 1))], ("p",))
        assert quiver_isomorphism(cur.quiver, flipped.quiver) is not None
        # the weight data flips along too
        assert pseeds_isomorphic(cur, flipped.pseed())

        # interior case: flipping one fan arc of the once-punctured square
        before = assemble_fg(punctured_ngon_spec(4), 3)
        arc = [before.vertex_of[(1, before.fragments[1].class_index((d, 3 - d, 0)))]
               for d in (1, 2)]
        ps = before.pseed()
        for v in arc:
            ps = mutate_pseed(ps, v)
        points = {"p": "puncture", **{f"b{i}": "boundary" for i in range(1, 5)}}
        flipped_spec = TriangulationSpec(points, [
            {"corners": ["b1", "b2", "b3"],
             "sides": [{"glue": None, "boundary": True},
                       {"glue": None, "boundary": True}, {"glue": [1, 1]}]},
            {"corners": ["p", "b1", "b3"],
             "sides": [{"glue": [3, 2]}, {"glue": [0, 2]}, {"glue": [2, 0]}]},
            {"corners": ["p", "b3", "b4"],
             "sides": [{"glue": [1, 2]}, {"glue": None, "boundary": True},
                       {"glue": [3, 0]}]},
            {"corners": ["p", "b4", "b1"],
             "sides": [{"glue": [2, 2]}, {"glue": None, "boundary": True},
                       {"glue": [1, 0]}]},
        ])
        after = assemble_fg(flipped_spec, 3)
        assert pseeds_isomorphic(ps, after.pseed())


def test_criterion_15_quasi_automorphism_scripts():
    with criterion(15, "quasi-automorphism scripts restore the quiver"):
        for name in ("sl3-d31", "sl4-d21"):
            pr = preset(name)
            ps = pr.assembled.pseed().drop_vertices(sorted(pr.assembled.quiver.frozen))
            out = check_script_automorphism(ps, sigma_script(name, ps, pr.mutable_labels()))
            assert out.quiver == ps.quiver
