"""Initial seeds from combinatorial triangulation data.

A triangle contributes a lattice fragment on {(a,b,c) : a+b+c=k} minus the
corners, with small-triangle 3-cycles as arrows (arrows lying inside one side
of the big triangle are dropped; gluing restores them with opposite signs so
they cancel).  Boundary triangles in the vector-decorated (Grassmannian)
version use the folded fragment with s=1.

Triangulations here are pure gluing data: named marked points, corner triples,
and side identifications.  No topology is represented.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

from .cluster import PSeed, Quiver, Seed
from .laurent import LaurentPoly
from .weights import MultiWeight, WeightVector, fundamental, zero


class NonRegularTriangulation(ValueError):
    pass


class NotTaut(ValueError):
    pass


# ---------------------------------------------------------------------------
# fragments


@dataclass(frozen=True)
class Fragment:
    """A quiver fragment on folded lattice classes.

    ``classes`` are frozensets of (a,b,c) triples; ``arrows`` index pairs into
    classes; side r (r = 0,1,2) runs from corner r to corner r+1 and lists the
    k-1 class indices at distance 1..k-1 from corner r (None when shorter).
    """
    k: int
    s: int
    classes: tuple
    arrows: tuple          # (i, j, mult)
    sides: tuple           # 3 tuples of class indices (or None entries)
    bottom: tuple          # class indices on side 1 not part of a full side

    def class_index(self, triple) -> int:
        for i, c in enumerate(self.classes):
            if triple in c:
                return i
        raise KeyError(triple)

    def corner_coordinate(self, i: int, corner: int) -> int:
        """Common coordinate of class i at the given corner (0=a,1=b,2=c).

        Raises if the members disagree (only possible at non-a corners of
        folded classes, which callers never treat as punctures).
        """
        vals = {t[corner] for t in self.classes[i]}
        if len(vals) != 1:
            raise ValueError("coordinate not constant on a folded class")
        return vals.pop()


def _hk(k: int):
    out = []
    for a in range(k + 1):
        for b in range(k - a + 1):
            c = k - a - b
            out.append((a, b, c))
    corners = {(k, 0, 0), (0, k, 0), (0, 0, k)}
    return [t for t in out if t not in corners]


def _qk_arrows(k: int):
    """Small-triangle 3-cycles; arrows inside one side of the big triangle and
    arrows touching a corner are dropped."""
    corners = {(k, 0, 0), (0, k, 0), (0, 0, k)}

    def keep(u, v):
        if u in corners or v in corners:
            return False
        for pos in range(3):
            if u[pos] == 0 and v[pos] == 0:
                return False
        return True

    arrows = set()
    # downward small triangles
    for x in range(k - 1):
        for y in range(k - 1 - x):
            z = k - 2 - x - y
            a, b, c = (x + 1, y, z + 1), (x, y + 1, z + 1), (x + 1, y + 1, z)
            for u, v in ((a, b), (b, c), (c, a)):
                if keep(u, v):
                    arrows.add((u, v))
    # upward small triangles
    for x in range(k):
        for y in range(k - x):
            z = k - 1 - x - y
            p, q, r = (x + 1, y, z), (x, y + 1, z), (x, y, z + 1)
            for u, v in ((r, p), (p, q), (q, r)):
                if keep(u, v):
                    arrows.add((u, v))
    return arrows


def q_fragment(k: int) -> Fragment:
    return q_fragment_s(k, k - 1)


def q_fragment_s(k: int, s: int) -> Fragment:
    """The fragment with the b-side folded onto the bottom at depth s."""
    if not (1 <= s <= k - 1):
        raise ValueError(f"s must be in 1..{k - 1}")
    verts = _hk(k)
    # fold (a, s, c) ~ (a, s+c, 0) for a != 0, c > 0; then delete untouched
    # vertices with b in [s+1, k-1]
    cls_of = {}
    classes = []
    for t in verts:
        cls_of[t] = None
    for t in verts:
        a, b, c = t
        if b == s and a != 0 and c > 0:
            mate = (a, b + c, 0)
            classes.append(frozenset((t, mate)))
            cls_of[t] = cls_of[mate] = len(classes) - 1
    for t in verts:
        a, b, c = t
        if cls_of[t] is None:
            if s + 1 <= b <= k - 1:
                continue  # deleted
            classes.append(frozenset((t,)))
            cls_of[t] = len(classes) - 1

    arrows: dict[tuple, int] = {}
    for u, v in _qk_arrows(k):
        iu, iv = cls_of.get(u), cls_of.get(v)
        if iu is None or iv is None or iu == iv:
            continue
        arrows[(iu, iv)] = arrows.get((iu, iv), 0) + 1
    # net opposite pairs
    net = {}
    for i, j in {(min(i, j), max(i, j)) for (i, j) in arrows}:
        d = arrows.get((i, j), 0) - arrows.get((j, i), 0)
        if d > 0:
            net[(i, j)] = d
        elif d < 0:
            net[(j, i)] = -d
    arrow_list = tuple(sorted((i, j, m) for (i, j), m in net.items()))

    # sides: side 0 = corner0->corner1 (c = 0), side 1 = corner1->corner2
    # (a = 0), side 2 = corner2->corner0 (b = 0)
    def side_entry(triple):
        return cls_of.get(triple)

    side0 = tuple(side_entry((k - j, j, 0)) for j in range(1, k))
    side1 = tuple(side_entry((0, k - j, j)) for j in range(1, k))
    side2 = tuple(side_entry((j, 0, k - j)) for j in range(1, k))
    bottom = tuple(sorted({i for i in (side_entry((0, b, k - b)) for b in range(1, k))
                           if i is not None}))
    classes_t = tuple(classes)
    return Fragment(k, s, classes_t, arrow_list, (side0, side1, side2), bottom)


def fragment_row(frag: Fragment, corner: int, i: int) -> list:
    """Class indices whose corner-coordinate is i, walked from the side
    entering the corner to the side leaving it."""
    found = []
    for idx, cls in enumerate(frag.classes):
        vals = {t[corner] for t in cls}
        if vals == {i}:
            found.append(idx)
    # order along the row: decreasing next coordinate (cyclically after corner)
    nxt = (corner + 1) % 3

    def key(idx):
        return -max(t[nxt] for t in frag.classes[idx])

    return sorted(found, key=key)


# ---------------------------------------------------------------------------
# assembled complexes


@dataclass
class Assembled:
    """A glued collection of fragments upgraded to a weight-graded seed."""
    k: int
    punctures: tuple
    quiver: Quiver
    weights: tuple                 # MultiWeight per vertex
    fragments: tuple               # Fragment per triangle
    corner_points: tuple           # per triangle: 3 marked-point names
    vertex_of: dict = field(repr=False)   # (tri, class index) -> vertex
    names: tuple = ()              # variable names per vertex

    def pseed(self) -> PSeed:
        return PSeed(self.quiver, self.weights)

    def seed(self) -> Seed:
        return Seed.initial(self.quiver, list(self.names))

    def mutable_pseed(self) -> PSeed:
        return self.pseed().drop_vertices(sorted(self.quiver.frozen))

    def rows_json(self) -> dict:
        out: dict = {}
        for p in self.punctures:
            out[p] = {}
            for i in range(1, self.k):
                segs = [[self.vertex_of[(t, c)] for c in fragment_row(self.fragments[t], corner, i)]
                        for t, corner in self.corner_incidences(p)]
                out[p][str(i)] = segs
        return out

    def corner_incidences(self, point: str) -> list:
        out = []
        for t, corners in enumerate(self.corner_points):
            for c in range(3):
                if corners[c] == point:
                    out.append((t, c))
        return out


def glue_fragments(fragments: Sequence[Fragment], corner_points: Sequence[tuple],
                   gluings: Sequence[tuple], punctures: Sequence[str],
                   frozen_classes: Sequence[tuple] = (),
                   names_hint: str = "x") -> Assembled:
    """Glue fragment sides.

    ``gluings`` entries are ((t1, side1), (t2, side2)); the j-th side vertex of
    one matches the (k-1-j)-th of the other (the triangles induce opposite
    orientations on a shared side).  ``frozen_classes`` lists (tri, class
    index) pairs to freeze.
    """
    k = fragments[0].k
    # union-find over (tri, class)
    nodes = [(t, i) for t, f in enumerate(fragments) for i in range(len(f.classes))]
    parent = {nd: nd for nd in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for (t1, s1), (t2, s2) in gluings:
        a = fragments[t1].sides[s1]
        b = fragments[t2].sides[s2]
        if len(a) != k - 1 or len(b) != k - 1 or None in a or None in b:
            raise ValueError("can only glue full sides")
        for j in range(k - 1):
            union((t1, a[j]), (t2, b[k - 2 - j]))

    reps = sorted({find(nd) for nd in nodes})
    vertex_of = {}
    for nd in nodes:
        vertex_of[nd] = reps.index(find(nd))
    n = len(reps)

    arrows = []
    for t, f in enumerate(fragments):
        for i, j, m in f.arrows:
            arrows.append((vertex_of[(t, i)], vertex_of[(t, j)], m))

    frozen = {vertex_of[nd] for nd in frozen_classes}
    quiver = Quiver.from_arrows(n, arrows, frozen)

    # weights: one contribution per glued class, computed from any one member
    # triangle (corner contributions agree across a gluing)
    weights = []
    rep_member: dict[int, tuple] = {}
    for nd in nodes:
        weights_v = vertex_of[nd]
        rep_member.setdefault(weights_v, nd)
    for v in range(n):
        t, i = rep_member[v]
        frag = fragments[t]
        total = MultiWeight.zero(tuple(punctures), k)
        for corner in range(3):
            point = corner_points[t][corner]
            if point in punctures:
                a = frag.corner_coordinate(i, corner)
                total = total + MultiWeight(tuple(punctures),
                                            tuple(fundamental(a, k) if p == point else zero(k)
                                                  for p in punctures))
        weights.append(total)

    names = tuple(f"{names_hint}{v}" for v in range(n))
    return Assembled(k, tuple(punctures), quiver, tuple(weights),
                     tuple(fragments), tuple(corner_points), vertex_of, names)


# ---------------------------------------------------------------------------
# triangulation specs


@dataclass
class TriangulationSpec:
    points: dict        # name -> "puncture" | "boundary"
    triangles: list     # [{"corners": [p,q,r], "sides": [side, side, side]}]
                        # side = {"glue": None | [tri, side], "boundary": bool}

    @staticmethod
    def from_json(data) -> "TriangulationSpec":
        points = {p["name"]: p["kind"] for p in data["points"]}
        return TriangulationSpec(points, data["triangles"])

    def to_json(self) -> dict:
        return {
            "points": [{"name": n, "kind": kind} for n, kind in self.points.items()],
            "triangles": self.triangles,
        }

    def punctures(self) -> tuple:
        return tuple(sorted(n for n, kind in self.points.items() if kind == "puncture"))

    def validate(self):
        for t, tri in enumerate(self.triangles):
            for c in tri["corners"]:
                if c not in self.points:
                    raise NonRegularTriangulation(f"unknown marked point {c!r}")
            for s, side in enumerate(tri["sides"]):
                glue = side.get("glue")
                if glue is not None:
                    t2, s2 = glue
                    if (t2, s2) == (t, s):
                        raise NonRegularTriangulation("side glued to itself")
                    if t2 == t:
                        raise NonRegularTriangulation("self-folded triangle")
                    back = self.triangles[t2]["sides"][s2].get("glue")
                    if list(back or ()) != [t, s]:
                        raise NonRegularTriangulation("gluing is not symmetric")
                    if side.get("boundary"):
                        raise NonRegularTriangulation("glued side marked boundary")

    def boundary_count(self, t: int) -> int:
        return sum(1 for side in self.triangles[t]["sides"] if side.get("boundary"))


def assemble_fg(spec: TriangulationSpec, k: int) -> Assembled:
    """Flag-decorated version: every triangle carries the full fragment;
    boundary-side vertices are frozen (weight zero)."""
    spec.validate()
    fragments = [q_fragment(k) for _ in spec.triangles]
    corner_points = [tuple(tri["corners"]) for tri in spec.triangles]
    gluings = []
    seen = set()
    frozen = []
    for t, tri in enumerate(spec.triangles):
        for s, side in enumerate(tri["sides"]):
            glue = side.get("glue")
            if glue is None:
                if not side.get("boundary"):
                    continue
                for idx in fragments[t].sides[s]:
                    frozen.append((t, idx))
            else:
                pair = tuple(sorted([(t, s), (glue[0], glue[1])]))
                if pair not in seen:
                    seen.add(pair)
                    gluings.append(((t, s), (glue[0], glue[1])))
    return glue_fragments(fragments, corner_points, gluings, spec.punctures(),
                          frozen_classes=frozen)


def assemble_gr(spec: TriangulationSpec, k: int) -> Assembled:
    """Vector-decorated version: boundary triangles use the s=1 fragment with
    the single bottom vertex frozen; at most one boundary side per triangle."""
    spec.validate()
    fragments = []
    rotations = []
    for t, tri in enumerate(spec.triangles):
        nb = spec.boundary_count(t)
        if nb > 1:
            raise NotTaut(f"triangle {t} has {nb} boundary sides")
        if nb == 0:
            fragments.append(q_fragment(k))
            rotations.append(0)
        else:
            bside = next(s for s, side in enumerate(tri["sides"]) if side.get("boundary"))
            # the folded fragment has its bottom on side 1 (corner1 -> corner2);
            # rotate corner labels so the boundary side lands there
            fragments.append(q_fragment_s(k, 1))
            rotations.append((bside - 1) % 3)
    corner_points = []
    for t, tri in enumerate(spec.triangles):
        r = rotations[t]
        corner_points.append(tuple(tri["corners"][(c + r) % 3] for c in range(3)))
    gluings = []
    seen = set()
    frozen = []
    for t, tri in enumerate(spec.triangles):
        r = rotations[t]
        for s, side in enumerate(tri["sides"]):
            local = (s - r) % 3
            glue = side.get("glue")
            if glue is None:
                if side.get("boundary"):
                    for idx in fragments[t].bottom:
                        frozen.append((t, idx))
                continue
            t2, s2 = glue
            local2 = (s2 - rotations[t2]) % 3
            pair = tuple(sorted([(t, local), (t2, local2)]))
            if pair not in seen:
                seen.add(pair)
                gluings.append(((t, local), (t2, local2)))
    return glue_fragments(fragments, corner_points, gluings, spec.punctures(),
                          frozen_classes=frozen)


# ---------------------------------------------------------------------------
# the two-fragment gluing and dimension formulas


def glue_sigma(k: int, s: int, t: int) -> Assembled:
    """Glue the s- and t-fragments along their left and right sides (a digon
    around one puncture); row-a vertices weigh omega_a at the puncture."""
    f1, f2 = q_fragment_s(k, s), q_fragment_s(k, t)
    corner_points = [("p", "b1", "b2"), ("p", "b2", "b1")]
    gluings = [((0, 0), (1, 2)), ((0, 2), (1, 0))]
    return glue_fragments([f1, f2], corner_points, gluings, ("p",))


def dim_fg(g: int, b: int, m_total: int, m_boundary: int, k: int) -> int:
    dim_g = k * k - 1
    dim_u = k * (k - 1) // 2
    return (2 * g - 2 + b + m_total) * dim_g - m_boundary * dim_u


def dim_gr(g: int, b: int, m_punct: int, m_boundary: int, k: int) -> int:
    dim_g = k * k - 1
    return (2 * g - 2 + b + m_punct) * dim_g + k * m_boundary


# ---------------------------------------------------------------------------
# preset triangulations


def digon_spec() -> TriangulationSpec:
    points = {"p": "puncture", "b1": "boundary", "b2": "boundary"}
    triangles = [
        {"corners": ["p", "b1", "b2"],
         "sides": [{"glue": [1, 2]}, {"boundary": True, "glue": None}, {"glue": [1, 0]}]},
        {"corners": ["p", "b2", "b1"],
         "sides": [{"glue": [0, 2]}, {"boundary": True, "glue": None}, {"glue": [0, 0]}]},
    ]
    return TriangulationSpec(points, triangles)


def punctured_ngon_spec(n: int) -> TriangulationSpec:
    """The fan triangulation of the once-punctured n-gon (n >= 2)."""
    if n < 2:
        raise ValueError("need at least 2 boundary points")
    if n == 2:
        return digon_spec()
    points = {"p": "puncture"}
    for i in range(1, n + 1):
        points[f"b{i}"] = "boundary"
    triangles = []
    for t in range(n):
        nxt = (t + 1) % n
        prv = (t - 1) % n
        triangles.append({
            "corners": ["p", f"b{t + 1}", f"b{(t + 1) % n + 1}"],
            "sides": [{"glue": [prv, 2]}, {"boundary": True, "glue": None},
                      {"glue": [nxt, 0]}],
        })
    return TriangulationSpec(points, triangles)


def torus_spec() -> TriangulationSpec:
    """The two-triangle triangulation of the once-punctured torus."""
    points = {"p": "puncture"}
    triangles = [
        {"corners": ["p", "p", "p"],
         "sides": [{"glue": [1, 0]}, {"glue": [1, 1]}, {"glue": [1, 2]}]},
        {"corners": ["p", "p", "p"],
         "sides": [{"glue": [0, 0]}, {"glue": [0, 1]}, {"glue": [0, 2]}]},
    ]
    return TriangulationSpec(points, triangles)


PRESETS = {
    "digon": lambda: digon_spec(),
    "torus-s11": lambda: torus_spec(),
}


def preset_spec(name: str) -> TriangulationSpec:
    if name in PRESETS:
        return PRESETS[name]()
    if name.startswith("punctured-ngon(") and name.endswith(")"):
        return punctured_ngon_spec(int(name[len("punctured-ngon("):-1]))
    raise ValueError(f"unknown preset {name!r}")
