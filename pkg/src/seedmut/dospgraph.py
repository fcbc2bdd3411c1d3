"""Enumeration and mutation of decorated ordered set partitions, the mutation
graph on them, Cartesian powers over several punctures, and the quotient by
relabeling of the ground set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .weights import Dosp, Osp, dosp_orbit_key, parse_dosp


@dataclass
class DospGraph:
    vertices: list            # canonical labels (strings), sorted
    edges: list               # sorted (i, j) index pairs, i < j
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {v: i for i, v in enumerate(self.vertices)}

    @property
    def n(self):
        return len(self.vertices)

    def degree_sequence(self):
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return sorted(deg)

    def neighbors(self, label: str) -> list:
        i = self.index[label]
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(self.vertices[b])
            elif b == i:
                out.append(self.vertices[a])
        return sorted(out)

    def to_dot(self) -> str:
        lines = ["graph dosps {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for i, j in self.edges:
            lines.append(f'  "{self.vertices[i]}" -- "{self.vertices[j]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def degree_csv(self) -> str:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        lines = ["vertex,degree"]
        for v, d in zip(self.vertices, deg):
            lines.append(f'"{v}",{d}')
        return "\n".join(lines) + "\n"


def _osps(k: int):
    """All ordered set partitions of 1..k, as tuples of frozensets."""
    def rec_all(rest: frozenset):
        if not rest:
            yield ()
            return
        items = sorted(rest)
        for r in range(1, len(items) + 1):
            for block in itertools.combinations(items, r):
                fs = frozenset(block)
                for tail in rec_all(rest - fs):
                    yield (fs,) + tail
    yield from rec_all(frozenset(range(1, k + 1)))


def enumerate_dosps(k: int) -> list:
    """All dosps of 1..k: each osp expanded by sign choices on big blocks."""
    if k < 1:
        raise ValueError("k must be positive")
    out = []
    for blocks in _osps(k):
        osp = Osp(blocks)
        big = [i for i, b in enumerate(blocks) if len(b) >= 3]
        for signs in itertools.product((1, -1), repeat=len(big)):
            out.append(Dosp(osp, signs))
    out.sort(key=str)
    return out


def dosp_mutations(d: Dosp) -> list:
    """All dosps one local move away from d.

    The move takes an element a out of a block into an adjacent block (or a
    new singleton next to it).  A source block of size >= 3 releases a
    rightward (leftward) only when its sign is + (-); a target block of size
    >= 3 absorbs from the left (right) only when its sign is - (+).  The new
    big blocks are signed + on the left of the move and - on the right.
    Blocks of size <= 2 match either sign.
    """
    blocks = list(d.osp.blocks)
    sign = {i: d.sign_of_block(i) for i in range(len(blocks))}
    results = set()

    def ok_source_right(i):
        return len(blocks[i]) < 3 or sign[i] == 1

    def ok_source_left(i):
        return len(blocks[i]) < 3 or sign[i] == -1

    def ok_target_from_left(j):
        # element arrives from the left: target plays R^-
        return len(blocks[j]) < 3 or sign[j] == -1

    def ok_target_from_right(j):
        # element arrives from the right: target plays the (L u {a})^+ side
        return len(blocks[j]) < 3 or sign[j] == 1

    def build(new_blocks, new_signs):
        filtered = []
        signs_by_idx = {}
        for b, s in zip(new_blocks, new_signs):
            if not b:
                continue
            if len(b) >= 3:
                signs_by_idx[len(filtered)] = s
            filtered.append(frozenset(b))
        out = Dosp.of(Osp(tuple(filtered)), signs_by_idx)
        if out != d:
            results.add(out)

    n = len(blocks)
    for i in range(n):
        for a in sorted(blocks[i]):
            src_minus = blocks[i] - {a}
            # rightward into the next block
            if i + 1 < n and ok_source_right(i) and ok_target_from_left(i + 1):
                nb = blocks[:i] + [src_minus, blocks[i + 1] | {a}] + blocks[i + 2:]
                ns = [sign[t] for t in range(i)] + [1, -1] + [sign[t] for t in range(i + 2, n)]
                build(nb, ns)
            # rightward into a fresh singleton
            if ok_source_right(i) and len(blocks[i]) > 1:
                nb = blocks[:i] + [src_minus, {a}] + blocks[i + 1:]
                ns = [sign[t] for t in range(i)] + [1, -1] + [sign[t] for t in range(i + 1, n)]
                build(nb, ns)
            # leftward into the previous block
            if i > 0 and ok_source_left(i) and ok_target_from_right(i - 1):
                nb = blocks[:i - 1] + [blocks[i - 1] | {a}, src_minus] + blocks[i + 1:]
                ns = [sign[t] for t in range(i - 1)] + [1, -1] + [sign[t] for t in range(i + 1, n)]
                build(nb, ns)
            # leftward into a fresh singleton
            if ok_source_left(i) and len(blocks[i]) > 1:
                nb = blocks[:i] + [{a}, src_minus] + blocks[i + 1:]
                ns = [sign[t] for t in range(i)] + [1, -1] + [sign[t] for t in range(i + 1, n)]
                build(nb, ns)
    return sorted(results, key=str)


def build_hdosp(k: int) -> DospGraph:
    if k < 2:
        raise ValueError("k must be at least 2")
    vertices = [str(d) for d in enumerate_dosps(k)]
    index = {v: i for i, v in enumerate(vertices)}
    edges = set()
    for v in vertices:
        d = parse_dosp(v, k)
        for m in dosp_mutations(d):
            i, j = index[v], index[str(m)]
            edges.add((min(i, j), max(i, j)))
    return DospGraph(vertices, sorted(edges), index)


def cartesian_power(g: DospGraph, h: int) -> DospGraph:
    """Cartesian product of h copies: edges change exactly one coordinate."""
    if h < 1:
        raise ValueError("h must be positive")
    verts = ["(" + ",".join(t) + ")" for t in itertools.product(g.vertices, repeat=h)]
    index = {v: i for i, v in enumerate(verts)}
    base = {v: i for i, v in enumerate(g.vertices)}
    adj = {i: set() for i in range(g.n)}
    for i, j in g.edges:
        adj[i].add(j)
        adj[j].add(i)
    edges = set()
    for t in itertools.product(range(g.n), repeat=h):
        label = "(" + ",".join(g.vertices[c] for c in t) + ")"
        me = index[label]
        for pos in range(h):
            for nb in adj[t[pos]]:
                other = t[:pos] + (nb,) + t[pos + 1:]
                olabel = "(" + ",".join(g.vertices[c] for c in other) + ")"
                oi = index[olabel]
                edges.add((min(me, oi), max(me, oi)))
    return DospGraph(verts, sorted(edges), index)


def quotient_by_relabeling(g: DospGraph) -> DospGraph:
    """Identify vertices in the same orbit of the ground-set relabeling action."""
    k = None
    orbit = {}
    for v in g.vertices:
        d = parse_dosp(v)
        k = d.k
        orbit[v] = dosp_orbit_key(d)
    verts = sorted(set(orbit.values()))
    index = {v: i for i, v in enumerate(verts)}
    edges = set()
    for i, j in g.edges:
        a, b = index[orbit[g.vertices[i]]], index[orbit[g.vertices[j]]]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return DospGraph(verts, sorted(edges), index)
