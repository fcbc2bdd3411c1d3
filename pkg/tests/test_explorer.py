import itertools

import pytest

from seedmut.cluster import (Mutate, PSeed, Quiver, mutate_pseed,
                             canonical_pseed_key, pseeds_isomorphic)
from seedmut.dospgraph import build_hdosp
from seedmut.explorer import (QuiverNotRestored, check_arch_reduction,
                              check_flag_to_vector_reduction,
                              check_script_automorphism, dosp_labeling_check,
                              edge_contraction_check, explore, good_seed_report,
                              orbit_pair, pcluster_table, preset, sigma_script,
                              undirected_edge_count, _arc_vertex)
from seedmut.surfaces import assemble_gr, digon_spec
from seedmut.weights import parse_multiplicative, pcluster_dosp

from refdata import (TABLE_SL3_D21, TABLE_SL3_D31, TABLE_SL4_D21,
                     parse_table_row)


def test_cluster_exploration_counts():
    pr = preset("sl3-d21")
    g = explore(pr.assembled.seed(), pr.assembled.pseed(), mode="cluster",
                good_filter=True)
    assert g.n == 50
    assert undirected_edge_count(g) == 100
    assert len(g.distinct_variables()) == 16
    assert len(pr.assembled.quiver.frozen) == 2
    assert g.complete and not g.violations


def test_pentagon_count():
    q = Quiver.from_arrows(2, [(0, 1)])
    from seedmut.cluster import Seed
    g = explore(Seed.initial(q, ["x", "y"]), mode="cluster")
    assert g.n == 5


def test_exploration_deterministic():
    pr = preset("sl3-d21")
    g1 = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
    g2 = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
    assert g1.keys == g2.keys and g1.edges == g2.edges


def test_pseed_graph_sizes():
    for name, nodes in (("sl3-d21", 28), ("sl3-d31", 88), ("sl4-d21", 228)):
        pr = preset(name)
        g = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
        assert (g.n, g.complete, len(g.violations)) == (nodes, True, 0), name


def _table_matches(rows, expected, k):
    got = {}
    for rep, dosp in rows:
        key, dd = orbit_pair(rep, k)
        got[key] = dd
    want = {}
    for text, dosp in expected:
        rep = parse_table_row(text, k)
        key, dd = orbit_pair(rep, k)
        assert str(pcluster_dosp(rep)) == dosp, (text, dosp)
        want[key] = dd
    assert got == want


def test_tables_match_printed_rows():
    cases = [("sl3-d21", TABLE_SL3_D21, 3), ("sl3-d31", TABLE_SL3_D31, 3),
             ("sl4-d21", TABLE_SL4_D21, 4)]
    for name, expected, k in cases:
        pr = preset(name)
        g = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
        rows = pcluster_table(g, "p")
        assert len(rows) == len(expected), name
        _table_matches(rows, expected, k)


def test_dosp_labeling_on_cluster_graph():
    pr = preset("sl3-d21")
    g = explore(pr.assembled.seed(), pr.assembled.pseed(), mode="cluster",
                good_filter=True)
    assert dosp_labeling_check(g) == []


def test_edge_contraction_onto_dosp_graph():
    pr = preset("sl3-d21")
    g = explore(pr.assembled.seed(), pr.assembled.pseed(), mode="cluster",
                good_filter=True)
    report = edge_contraction_check(g, build_hdosp(3))
    assert report["simplicial"] and report["surjective_on_edges"]
    assert report["vertices_hit"] == report["target_vertices"] == 14
    gp = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
    report = edge_contraction_check(gp, build_hdosp(3))
    assert report["surjective_on_edges"]


def test_good_seed_reports_empty():
    for name in ("sl3-d21", "sl3-d31", "sl4-d21"):
        pr = preset(name)
        g = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
        for key in g.keys:
            assert good_seed_report(g.pseeds[key]) == [], name


def test_sigma_scripts_restore_quiver():
    for name in ("sl3-d31", "sl4-d21"):
        pr = preset(name)
        ps = pr.assembled.pseed().drop_vertices(sorted(pr.assembled.quiver.frozen))
        script = sigma_script(name, ps, pr.mutable_labels())
        out = check_script_automorphism(ps, script)
        assert out.quiver == ps.quiver


def test_empty_script_trivially_passes():
    pr = preset("sl3-d21")
    ps = pr.assembled.pseed().drop_vertices(sorted(pr.assembled.quiver.frozen))
    check_script_automorphism(ps, [])


def test_bad_script_raises():
    pr = preset("sl3-d21")
    ps = pr.assembled.pseed().drop_vertices(sorted(pr.assembled.quiver.frozen))
    with pytest.raises(QuiverNotRestored):
        check_script_automorphism(ps, [Mutate(0)])


def test_table_scripts_for_reflections():
    """The tabulated reflection realizations at the puncture: mutate at the
    digit string left to right, then permute."""
    from seedmut.cluster import Permute, apply_sequence
    pr = preset("sl3-d31")
    ps = pr.assembled.pseed().drop_vertices(sorted(pr.assembled.quiver.frozen))
    lab = pr.mutable_labels()
    n = ps.quiver.n

    def perm(swaps):
        img = list(range(n))
        for a, b in swaps:
            img[lab[a]], img[lab[b]] = lab[b], lab[a]
        return Permute(tuple(img))

    s1 = [Mutate(lab[1]), Mutate(lab[3]), Mutate(lab[5]), Mutate(lab[1]), perm([(3, 5)])]
    out = check_script_automorphism(ps, s1, {"p": (2, 1, 3)})
    assert out.quiver == ps.quiver
    s2 = [Mutate(lab[2]), Mutate(lab[4]), Mutate(lab[6]), Mutate(lab[2]), perm([(4, 6)])]
    check_script_automorphism(ps, s2, {"p": (1, 3, 2)})


def test_reflection_table_script_matches_weyl_action():
    from seedmut.cluster import Permute, apply_sequence
    from seedmut.weyl import apply_weyl
    pr = preset("sl3-d31")
    asm = pr.assembled
    seed, ps = asm.seed(), asm.pseed()
    lab = pr.labels
    n = seed.quiver.n
    img = list(range(n))
    img[lab[4]], img[lab[6]] = lab[6], lab[4]
    script = [Mutate(lab[2]), Mutate(lab[4]), Mutate(lab[6]), Mutate(lab[2]),
              Permute(tuple(img))]
    from seedmut.cluster import apply_sequence as run
    via_script = run(seed, script)
    via_weyl, _, _ = apply_weyl(seed, asm, "p", 2, ps)
    assert via_script == via_weyl


def test_flag_to_vector_reductions():
    assert check_flag_to_vector_reduction(3)["ok"]
    assert check_flag_to_vector_reduction(5)["ok"]
    with pytest.raises(ValueError):
        check_flag_to_vector_reduction(4)


def test_arch_reductions_all_steps():
    for k in (3, 4, 5):
        for s in range(k - 1, 1, -1):
            assert check_arch_reduction(k, s)["ok"], (k, s)


def test_dosp_walk_on_the_wide_ladder():
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
    assert walk[5:] == ["1|2345^+|6|7", "1|234^+|56|7", "1|23|456^-|7",
                        "1|2|3456^-|7", "1|23456^-|7"]


def test_limits_flag_partial():
    pr = preset("torus-s11-k4")
    g = explore(pr.assembled.pseed(), mode="pseed", max_nodes=30)
    assert not g.complete and g.n == 30


def test_graph_outputs():
    pr = preset("sl3-d21")
    g = explore(pr.assembled.pseed(), mode="pseed", good_filter=True)
    dot = g.to_dot()
    assert dot.startswith("graph") and "--" in dot
    data = g.to_json()
    assert data["nodes"] == 28 and data["complete"]
