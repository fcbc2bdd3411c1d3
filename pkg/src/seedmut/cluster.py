"""Quivers, seeds with exact Laurent variables, weight-graded seeds, their
mutations, permutation-mutation scripts, and canonical keys for deduplication.

The exchange matrix b is skew-symmetric with b[i][j] the net number of arrows
i -> j; arrow multiplicities enter exchange products as exponents.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Sequence

from .laurent import LaurentPoly
from .weights import MultiWeight, WeightVector, normalize


class FrozenVertex(ValueError):
    pass


class BalancingViolated(ValueError):
    pass


# ---------------------------------------------------------------------------
# quivers


@dataclass(frozen=True)
class Quiver:
    n: int
    frozen: frozenset
    b: tuple  # tuple of tuples, skew-symmetric

    def __post_init__(self):
        if len(self.b) != self.n or any(len(r) != self.n for r in self.b):
            raise ValueError("b must be n x n")
        for i in range(self.n):
            for j in range(self.n):
                if self.b[i][j] != -self.b[j][i]:
                    raise ValueError("b must be skew-symmetric")

    @staticmethod
    def from_arrows(n: int, arrows: Sequence[tuple], frozen=()) -> "Quiver":
        """Arrows as (i, j[, mult]) pairs; opposite arrows cancel."""
        m = [[0] * n for _ in range(n)]
        for a in arrows:
            i, j = a[0], a[1]
            w = a[2] if len(a) > 2 else 1
            m[i][j] += w
            m[j][i] -= w
        fr = frozenset(frozen)
        for i in fr:
            for j in fr:
                m[i][j] = 0
        return Quiver(n, fr, tuple(tuple(r) for r in m))

    def arrows(self) -> list:
        """Positive entries as (i, j, multiplicity)."""
        return [(i, j, self.b[i][j]) for i in range(self.n) for j in range(self.n)
                if self.b[i][j] > 0]

    def mutable(self) -> list:
        return [v for v in range(self.n) if v not in self.frozen]

    def in_neighbors(self, v: int) -> list:
        return [(u, self.b[u][v]) for u in range(self.n) if self.b[u][v] > 0]

    def out_neighbors(self, v: int) -> list:
        return [(u, self.b[v][u]) for u in range(self.n) if self.b[v][u] > 0]

    def is_isomorphic(self, other: "Quiver") -> bool:
        return quiver_isomorphism(self, other) is not None


def mutate_quiver(q: Quiver, v: int) -> Quiver:
    if v in q.frozen:
        raise FrozenVertex(v)
    n = q.n
    b = [list(r) for r in q.b]
    new = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == v or j == v:
                new[i][j] = -b[i][j]
            else:
                new[i][j] = b[i][j] + (abs(b[i][v]) * b[v][j] + b[i][v] * abs(b[v][j])) // 2
    for i in q.frozen:
        for j in q.frozen:
            new[i][j] = 0
    return Quiver(n, q.frozen, tuple(tuple(r) for r in new))


def permute_quiver(q: Quiver, perm: Sequence[int]) -> Quiver:
    """Relabel: the content of vertex i moves to vertex perm[i] (0-indexed)."""
    n = q.n
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            b[perm[i]][perm[j]] = q.b[i][j]
    frozen = frozenset(perm[i] for i in q.frozen)
    return Quiver(n, frozen, tuple(tuple(r) for r in b))


def symmetrical_vertices(q: Quiver, v: int, w: int) -> bool:
    """True iff swapping v and w is a quiver automorphism."""
    if v == w:
        return True
    perm = list(range(q.n))
    perm[v], perm[w] = w, v
    return permute_quiver(q, perm) == q


def quiver_isomorphism(a: Quiver, b: Quiver, colors_a=None, colors_b=None):
    """A vertex bijection carrying a onto b and matching optional colors.

    Returns the mapping as a list (image of each vertex of a) or None.
    Backtracking with degree/color pruning; fine for the sizes used here.
    """
    if a.n != b.n or len(a.frozen) != len(b.frozen):
        return None
    n = a.n
    colors_a = list(colors_a) if colors_a is not None else [None] * n
    colors_b = list(colors_b) if colors_b is not None else [None] * n

    def sig(q: Quiver, v: int, colors):
        ins = sorted((q.b[u][v], colors[u] is None) for u in range(n) if q.b[u][v] > 0)
        outs = sorted((q.b[v][u], colors[u] is None) for u in range(n) if q.b[v][u] > 0)
        return (v in q.frozen, colors[v], tuple(ins), tuple(outs))

    sig_a = [sig(a, v, colors_a) for v in range(n)]
    sig_b = [sig(b, v, colors_b) for v in range(n)]
    if sorted(map(str, sig_a)) != sorted(map(str, sig_b)):
        return None
    candidates = [[w for w in range(n) if str(sig_b[w]) == str(sig_a[v])] for v in range(n)]
    order = sorted(range(n), key=lambda v: len(candidates[v]))
    image = [-1] * n
    used = [False] * n

    def extend(idx):
        if idx == n:
            return True
        v = order[idx]
        for w in candidates[v]:
            if used[w]:
                continue
            good = True
            for u in range(n):
                if image[u] != -1 and (a.b[v][u] != b.b[w][image[u]]
                                       or a.b[u][v] != b.b[image[u]][w]):
                    good = False
                    break
            if good:
                image[v] = w
                used[w] = True
                if extend(idx + 1):
                    return True
                image[v] = -1
                used[w] = False
        return False

    return image if extend(0) else None


# ---------------------------------------------------------------------------
# weight-graded seeds


@dataclass(frozen=True)
class PSeed:
    quiver: Quiver
    weights: tuple  # MultiWeight per vertex

    def __post_init__(self):
        if len(self.weights) != self.quiver.n:
            raise ValueError("one weight per vertex")

    @property
    def punctures(self):
        return self.weights[0].punctures if self.weights else ()

    def kappa(self, v: int) -> MultiWeight:
        """Sum of in-weights with multiplicity (the exchange weight at v)."""
        total = MultiWeight.zero(self.punctures, self.weights[0].vectors[0].k)
        for u, m in self.quiver.in_neighbors(v):
            for _ in range(m):
                total = total + self.weights[u]
        return total

    def kappa_out(self, v: int) -> MultiWeight:
        total = MultiWeight.zero(self.punctures, self.weights[0].vectors[0].k)
        for u, m in self.quiver.out_neighbors(v):
            for _ in range(m):
                total = total + self.weights[u]
        return total

    def is_balanced(self) -> bool:
        return all(self.kappa(v) == self.kappa_out(v) for v in self.quiver.mutable())

    def pcluster_at(self, p: str) -> list:
        """Weights at p over mutable vertices, sorted."""
        ws = [self.weights[v].at(p) for v in self.quiver.mutable()]
        return sorted(ws, key=lambda w: w.coords)

    def drop_vertices(self, dead) -> "PSeed":
        keep = [v for v in range(self.quiver.n) if v not in set(dead)]
        remap = {v: i for i, v in enumerate(keep)}
        n = len(keep)
        b = tuple(tuple(self.quiver.b[u][v] for v in keep) for u in keep)
        frozen = frozenset(remap[v] for v in self.quiver.frozen if v in remap)
        return PSeed(Quiver(n, frozen, b), tuple(self.weights[v] for v in keep))

    def positive_part(self) -> "PSeed":
        return self.drop_vertices([v for v in range(self.quiver.n)
                                   if self.weights[v].is_zero()])


def mutate_pseed(s: PSeed, v: int, check: bool = True) -> PSeed:
    if v in s.quiver.frozen:
        raise FrozenVertex(v)
    if check and s.kappa(v) != s.kappa_out(v):
        raise BalancingViolated(f"vertex {v}")
    weights = list(s.weights)
    weights[v] = -s.weights[v] + s.kappa(v)
    return PSeed(mutate_quiver(s.quiver, v), tuple(weights))


def permute_pseed(s: PSeed, perm: Sequence[int]) -> PSeed:
    weights = [None] * s.quiver.n
    for i in range(s.quiver.n):
        weights[perm[i]] = s.weights[i]
    return PSeed(permute_quiver(s.quiver, perm), tuple(weights))


# ---------------------------------------------------------------------------
# seeds with Laurent variables


@dataclass(frozen=True)
class Seed:
    quiver: Quiver
    x: tuple  # LaurentPoly per vertex (frozen vertices carry their generator)

    def __post_init__(self):
        if len(self.x) != self.quiver.n:
            raise ValueError("one variable per vertex")

    @staticmethod
    def initial(quiver: Quiver, names: Sequence[str] | None = None) -> "Seed":
        names = list(names) if names else [f"x{i}" for i in range(quiver.n)]
        return Seed(quiver, tuple(LaurentPoly.gen(names, nm) for nm in names))

    def cluster_key(self) -> tuple:
        """Canonical key of the unordered mutable cluster."""
        return tuple(sorted(str(self.x[v]) for v in self.quiver.mutable()))


def exchange_monomials(s: Seed, v: int):
    vars_ = s.x[v].vars
    left = LaurentPoly.one(vars_)
    for u, m in s.quiver.in_neighbors(v):
        left = left * s.x[u] ** m
    right = LaurentPoly.one(vars_)
    for u, m in s.quiver.out_neighbors(v):
        right = right * s.x[u] ** m
    return left, right


def mutate_seed(s: Seed, v: int) -> Seed:
    if v in s.quiver.frozen:
        raise FrozenVertex(v)
    left, right = exchange_monomials(s, v)
    new_x = (left + right).exact_div(s.x[v])
    xs = list(s.x)
    xs[v] = new_x
    return Seed(mutate_quiver(s.quiver, v), tuple(xs))


def permute_seed(s: Seed, perm: Sequence[int]) -> Seed:
    xs = [None] * s.quiver.n
    for i in range(s.quiver.n):
        xs[perm[i]] = s.x[i]
    return Seed(permute_quiver(s.quiver, perm), tuple(xs))


# ---------------------------------------------------------------------------
# scripts


@dataclass(frozen=True)
class Mutate:
    vertex: int


@dataclass(frozen=True)
class Permute:
    perm: tuple  # image list, 0-indexed: content of i moves to perm[i]


def cycles_to_perm(cycles: Sequence[Sequence[int]], n: int) -> tuple:
    """Cycle notation (0-indexed entries) to an image tuple."""
    img = list(range(n))
    for cyc in cycles:
        for t, x in enumerate(cyc):
            img[x] = cyc[(t + 1) % len(cyc)]
    return tuple(img)


def apply_sequence(obj, script, check: bool = True):
    """Apply Mutate/Permute steps left to right to a Seed or PSeed."""
    for step in script:
        if isinstance(step, Mutate):
            if isinstance(obj, Seed):
                obj = mutate_seed(obj, step.vertex)
            else:
                obj = mutate_pseed(obj, step.vertex, check=check)
        elif isinstance(step, Permute):
            if isinstance(obj, Seed):
                obj = permute_seed(obj, step.perm)
            else:
                obj = permute_pseed(obj, step.perm)
        else:
            raise TypeError(f"bad script step {step!r}")
    return obj


def script_from_json(data, n: int) -> list:
    out = []
    for item in data:
        if "mutate" in item:
            out.append(Mutate(item["mutate"]))
        elif "permute" in item:
            perm = item["permute"]
            if len(perm) != n:
                raise ValueError("permutation length mismatch")
            out.append(Permute(tuple(perm)))
        else:
            raise ValueError(f"bad script item {item}")
    return out


# ---------------------------------------------------------------------------
# canonical keys


def canonical_pseed_key(s: PSeed) -> tuple:
    """Canonical form of (quiver, weights) under vertex relabeling.

    Individualization-refinement: iterated partition refinement on
    (frozen flag, weight, in/out neighbor signatures); ties are broken by
    individualizing each member of the first non-singleton class in turn and
    taking the lexicographically least resulting key.
    """
    n = s.quiver.n
    base = [str((v in s.quiver.frozen, str(s.weights[v]))) for v in range(n)]
    best: list = [None]

    def search(color):
        color = _refine(s.quiver, color)
        classes = _classes(color, n)
        first_big = next((c for c in classes if len(c) > 1), None)
        if first_big is None:
            order = [v for c in classes for v in c]
            key = _relabeled_key(s, order)
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        for v in first_big:
            branched = list(color)
            branched[v] = color[v] + f"!{0}"
            search(branched)

    search(base)
    return best[0]


def _refine(q: Quiver, color):
    n = q.n
    color = list(color)
    while True:
        sig = []
        for v in range(n):
            ins = sorted((q.b[u][v], color[u]) for u in range(n) if q.b[u][v] > 0)
            outs = sorted((q.b[v][u], color[u]) for u in range(n) if q.b[v][u] > 0)
            sig.append(str((color[v], ins, outs)))
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [f"{rank[sig[v]]:04d}" for v in range(n)]
        if new == color:
            return color
        color = new


def _classes(color, n):
    groups: dict[str, list] = {}
    for v in range(n):
        groups.setdefault(color[v], []).append(v)
    return [groups[c] for c in sorted(groups)]


def _relabeled_key(s: PSeed, order):
    pos = {v: i for i, v in enumerate(order)}
    n = s.quiver.n
    b = tuple(tuple(s.quiver.b[order[i]][order[j]] for j in range(n)) for i in range(n))
    weights = tuple(str(s.weights[v]) for v in order)
    frozen = tuple(sorted(pos[v] for v in s.quiver.frozen))
    return (frozen, weights, b)


def pseeds_isomorphic(a: PSeed, b: PSeed) -> bool:
    return canonical_pseed_key(a) == canonical_pseed_key(b)


# ---------------------------------------------------------------------------
# JSON seed format


def seed_to_json(quiver: Quiver, k: int, punctures, weights=None, vars_=None,
                 rows=None) -> dict:
    data = {
        "k": k,
        "punctures": list(punctures),
        "n": quiver.n,
        "frozen": sorted(quiver.frozen),
        "b": [list(r) for r in quiver.b],
    }
    if weights is not None:
        data["weights"] = {
            str(v): {p: list(weights[v].at(p).coords) for p in punctures}
            for v in range(quiver.n)
        }
    if vars_ is not None:
        data["vars"] = {str(v): vars_[v] for v in range(quiver.n)}
    if rows is not None:
        data["rows"] = rows
    return data


def seed_from_json(data):
    """Returns (quiver, k, punctures, weights or None, var names or None)."""
    n = data["n"]
    quiver = Quiver(n, frozenset(data.get("frozen", [])),
                    tuple(tuple(r) for r in data["b"]))
    k = data["k"]
    punctures = tuple(data.get("punctures", []))
    weights = None
    if "weights" in data:
        weights = tuple(
            MultiWeight(punctures,
                        tuple(normalize(data["weights"][str(v)][p], k) for p in punctures))
            for v in range(n))
    vars_ = None
    if "vars" in data:
        vars_ = [data["vars"].get(str(v), f"x{v}") for v in range(n)]
    return quiver, k, punctures, weights, vars_


def dump_seed(path_or_file, **kwargs):
    data = seed_to_json(**kwargs)
    if hasattr(path_or_file, "write"):
        json.dump(data, path_or_file, indent=1, sort_keys=True)
    else:
        with open(path_or_file, "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
