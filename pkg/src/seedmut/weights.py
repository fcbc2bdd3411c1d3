"""Weight vectors modulo the all-ones line, their symmetric-group action,
pairwise compatibility, root-conjugacy classes, and ordered set partitions.

Weight vectors are stored as canonical representatives (minimum coordinate 0)
so that equality and hashing are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence


class NoUpperBound(ValueError):
    """The ordered set partitions admit no common refinement."""


class NotPairwiseCompatible(ValueError):
    pass


class MalformedClass(ValueError):
    """A root-conjugacy class does not have the forced {nu + eps*e_a} shape."""


class MissingConjugacyClass(ValueError):
    """A large block has no matching root-conjugacy class."""


class NotDominant(ValueError):
    """The indicator-vector sum is not weakly decreasing."""


AMBIGUOUS = "ambiguous"


# ---------------------------------------------------------------------------
# weight vectors


@dataclass(frozen=True)
class WeightVector:
    k: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.k:
            raise ValueError("coordinate length mismatch")

    @staticmethod
    def of(v: Sequence[int]) -> "WeightVector":
        return normalize(v, len(v))

    def __add__(self, other: "WeightVector") -> "WeightVector":
        return normalize([a + b for a, b in zip(self.coords, other.coords)], self.k)

    def __neg__(self) -> "WeightVector":
        return normalize([-a for a in self.coords], self.k)

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        return normalize([a - b for a, b in zip(self.coords, other.coords)], self.k)

    def scale(self, c: int) -> "WeightVector":
        return normalize([c * a for a in self.coords], self.k)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"

    def multiplicative(self) -> str:
        """Monomial string in letters a,b,c,... ("1" for the zero weight)."""
        letters = "abcdefghijklmnopqrstuvwxyz"
        parts = []
        for i, e in enumerate(self.coords):
            if e == 0:
                continue
            parts.append(letters[i] if e == 1 else f"{letters[i]}^{e}")
        return "".join(parts) or "1"


def normalize(v: Sequence[int], k: int) -> WeightVector:
    """Canonical representative modulo the all-ones vector (min coordinate 0)."""
    v = list(v)
    if len(v) != k:
        raise ValueError(f"expected length {k}, got {len(v)}")
    m = min(v)
    return WeightVector(k, tuple(a - m for a in v))


def zero(k: int) -> WeightVector:
    return WeightVector(k, (0,) * k)


def e(i: int, k: int) -> WeightVector:
    """Standard basis vector e_i, 1-indexed."""
    v = [0] * k
    v[i - 1] = 1
    return WeightVector(k, tuple(v))


def fundamental(a: int, k: int) -> WeightVector:
    """omega_a = e_1 + ... + e_a (omega_0 = omega_k = 0)."""
    a %= k
    return normalize([1] * a + [0] * (k - a), k)


def indicator(s: Iterable[int], k: int) -> WeightVector:
    v = [0] * k
    for x in s:
        v[x - 1] += 1
    return normalize(v, k)


def w_act(perm: Sequence[int], lam: WeightVector) -> WeightVector:
    """Coordinate permutation: result_i = lam_{perm(i)} (perm in one-line, 1-indexed)."""
    if sorted(perm) != list(range(1, lam.k + 1)):
        raise ValueError("not a permutation of 1..k")
    return normalize([lam.coords[perm[i] - 1] for i in range(lam.k)], lam.k)


def parse_multiplicative(word: str, k: int) -> WeightVector:
    """Inverse of WeightVector.multiplicative for words like 'a^2bc' or '1'."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    v = [0] * k
    i = 0
    if word == "1":
        return normalize(v, k)
    while i < len(word):
        idx = letters.index(word[i])
        i += 1
        p = 1
        if i < len(word) and word[i] == "^":
            j = i + 1
            while j < len(word) and word[j].isdigit():
                j += 1
            p = int(word[i + 1:j])
            i = j
        v[idx] += p
    return normalize(v, k)


# ---------------------------------------------------------------------------
# ordered set partitions


@dataclass(frozen=True)
class Osp:
    blocks: tuple  # tuple of frozensets, nonempty, disjoint, union [k]

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if seen & b:
                raise ValueError("repeated element")
            seen |= b
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks must partition 1..k")

    @staticmethod
    def of(*blocks: Iterable[int]) -> "Osp":
        return Osp(tuple(frozenset(b) for b in blocks))

    @property
    def k(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise KeyError(x)

    def coarsens(self, finer: "Osp") -> bool:
        """True if every block of self is a union of consecutive blocks of finer."""
        i = 0
        for b in self.blocks:
            acc = set()
            while acc != set(b):
                if i >= len(finer.blocks) or not finer.blocks[i] <= b:
                    return False
                acc |= finer.blocks[i]
                i += 1
        return i == len(finer.blocks)

    def __str__(self):
        k = self.k
        out = []
        for b in self.blocks:
            xs = sorted(b)
            out.append("".join(map(str, xs)) if k <= 9 else ",".join(map(str, xs)))
        return "|".join(out)


def osp_of(lam: WeightVector) -> Osp:
    """Blocks of equal coordinates, ordered by strictly decreasing value."""
    values = sorted(set(lam.coords), reverse=True)
    blocks = tuple(frozenset(i + 1 for i, c in enumerate(lam.coords) if c == v)
                   for v in values)
    return Osp(blocks)


def rank_vector(p: Osp) -> WeightVector:
    """A weight vector in the open region of p (block rank, decreasing)."""
    n = len(p.blocks)
    v = [0] * p.k
    for i, b in enumerate(p.blocks):
        for x in b:
            v[x - 1] = n - 1 - i
    return normalize(v, p.k)


def join(osps: Sequence[Osp]) -> Osp:
    """Least upper bound in the refinement order.

    Raises NoUpperBound when the strict constraints conflict.
    """
    osps = list(osps)
    if not osps:
        raise ValueError("empty join")
    k = osps[0].k
    total = [0] * k
    for p in osps:
        if p.k != k:
            raise ValueError("osps on different ground sets")
        rv = rank_vector(p)
        total = [a + b for a, b in zip(total, rv.coords)]
    candidate = osp_of(normalize(total, k))
    for p in osps:
        if not p.coarsens(candidate):
            raise NoUpperBound(f"{p} does not coarsen {candidate}")
    return candidate


# ---------------------------------------------------------------------------
# decorated ordered set partitions


@dataclass(frozen=True)
class Dosp:
    osp: Osp
    signs: tuple  # one entry (+1/-1) per block of size >= 3, in block order... see note

    def __post_init__(self):
        big = [i for i, b in enumerate(self.osp.blocks) if len(b) >= 3]
        if len(self.signs) != len(big) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("need exactly one sign in {+1,-1} per block of size >= 3")

    @staticmethod
    def of(osp: Osp, signs_by_block: dict | None = None) -> "Dosp":
        signs_by_block = signs_by_block or {}
        signs = tuple(signs_by_block[i] for i, b in enumerate(osp.blocks) if len(b) >= 3)
        return Dosp(osp, signs)

    @property
    def k(self) -> int:
        return self.osp.k

    def sign_of_block(self, i: int):
        """Sign of block i, or None for blocks of size <= 2."""
        j = 0
        for idx, b in enumerate(self.osp.blocks):
            if len(b) >= 3:
                if idx == i:
                    return self.signs[j]
                j += 1
        return None

    def __str__(self):
        k = self.k
        out = []
        for i, b in enumerate(self.osp.blocks):
            xs = sorted(b)
            s = "".join(map(str, xs)) if k <= 9 else ",".join(map(str, xs))
            sg = self.sign_of_block(i)
            if sg is not None:
                s += "^+" if sg == 1 else "^-"
            out.append(s)
        return "|".join(out)


def _parse_block(raw: str, comma_mode: bool) -> frozenset:
    if comma_mode:
        return frozenset(int(t) for t in raw.split(","))
    return frozenset(int(ch) for ch in raw)


def parse_osp(text: str, k: int | None = None) -> Osp:
    """Parse "13|245|67", or comma-separated blocks for ground sets past 9."""
    comma = "," in text or (k is not None and k > 9)
    blocks = [_parse_block(raw, comma) for raw in text.split("|")]
    osp = Osp(tuple(blocks))
    if k is not None and osp.k != k:
        raise ValueError(f"expected a partition of 1..{k}")
    return osp


def parse_dosp(text: str, k: int | None = None) -> Dosp:
    """Parse the text form, e.g. "12|345^+|6" or "1,10^-|2,...,9"."""
    comma = "," in text or (k is not None and k > 9)
    blocks = []
    signs = {}
    for i, raw in enumerate(text.split("|")):
        sign = None
        if raw.endswith("^+"):
            sign, raw = 1, raw[:-2]
        elif raw.endswith("^-"):
            sign, raw = -1, raw[:-2]
        blocks.append(_parse_block(raw, comma))
        if sign is not None:
            signs[i] = sign
    osp = Osp(tuple(blocks))
    if k is not None and osp.k != k:
        raise ValueError(f"expected a partition of 1..{k}")
    return Dosp.of(osp, signs)


def relabel_dosp(d: Dosp, perm: Sequence[int]) -> Dosp:
    """Rename ground elements: x -> perm[x-1] (one-line, 1-indexed)."""
    blocks = tuple(frozenset(perm[x - 1] for x in b) for b in d.osp.blocks)
    return Dosp(Osp(blocks), d.signs)


def dosp_orbit_key(d: Dosp) -> str:
    """Canonical string of the relabeling orbit of d."""
    k = d.k
    return min(str(relabel_dosp(d, p)) for p in itertools.permutations(range(1, k + 1)))


# ---------------------------------------------------------------------------
# compatibility


SORTABLE = "sortable"
ROOT_CONJUGATE = "root-conjugate"
INCOMPATIBLE = "incompatible"


def _rc_pair(lam: WeightVector, mu: WeightVector):
    """The (a, b) with lam - mu = e_a - e_b and (ab).lam == mu, or None.

    Canonical representatives related by a coordinate swap are equal as
    tuples away from the swapped positions, so a two-position scan suffices.
    """
    if lam == mu or lam.k != mu.k:
        return None
    moved = [i for i in range(lam.k) if lam.coords[i] != mu.coords[i]]
    if len(moved) != 2:
        return None
    a, b = moved
    if (lam.coords[a] == mu.coords[b] and lam.coords[b] == mu.coords[a]
            and abs(lam.coords[a] - lam.coords[b]) == 1):
        if lam.coords[a] > lam.coords[b]:
            return (a + 1, b + 1)
        return (b + 1, a + 1)
    return None


def is_compatible(lam: WeightVector, mu: WeightVector):
    """Classify a pair: (SORTABLE, None), (ROOT_CONJUGATE, (a,b)) or (INCOMPATIBLE, None).

    Two vectors are sortable iff no coordinate pair is strictly ordered
    oppositely by the two vectors (common closed chamber).
    """
    if lam.k != mu.k:
        raise ValueError("different k")
    pair = _rc_pair(lam, mu)
    if pair is not None:
        return (ROOT_CONJUGATE, pair)
    for a in range(lam.k):
        for b in range(lam.k):
            if (lam.coords[a] - lam.coords[b]) > 0 and (mu.coords[a] - mu.coords[b]) < 0:
                return (INCOMPATIBLE, None)
    return (SORTABLE, None)


def pairwise_compatible(vectors: Sequence[WeightVector]) -> bool:
    return all(is_compatible(a, b)[0] != INCOMPATIBLE
               for a, b in itertools.combinations(vectors, 2))


def is_basic_compatible(vectors: Sequence[WeightVector]) -> bool:
    """Pairwise compatible, and every root-conjugate vector has multiplicity one."""
    vs = list(vectors)
    for a, b in itertools.combinations(vs, 2):
        if is_compatible(a, b)[0] == INCOMPATIBLE:
            return False
    for i, v in enumerate(vs):
        if vs.count(v) > 1:
            if any(is_compatible(v, w)[0] == ROOT_CONJUGATE for w in vs):
                return False
    return True


# ---------------------------------------------------------------------------
# conjugacy classes, class sums, osp/dosp extraction


@dataclass(frozen=True)
class ConjClass:
    members: tuple           # WeightVectors with multiplicity
    ground_set: frozenset    # coordinates moved within the class
    nu: WeightVector | None  # class == {nu + eps*e_a : a in ground_set} when |class| >= 2
    eps: object              # +1, -1, AMBIGUOUS (size-2 classes) or None (singletons)

    @property
    def sum(self) -> WeightVector:
        total = [0] * self.members[0].k
        for m in self.members:
            total = [a + b for a, b in zip(total, m.coords)]
        return normalize(total, self.members[0].k)


def class_sum(members: Sequence[WeightVector]) -> WeightVector:
    if not members:
        raise ValueError("empty class")
    total = [0] * members[0].k
    for m in members:
        total = [a + b for a, b in zip(total, m.coords)]
    return normalize(total, members[0].k)


def conjugacy_classes(vectors: Sequence[WeightVector]) -> list:
    """Partition a pairwise-compatible multiset into root-conjugacy classes.

    Each class of size >= 2 reports its ground set and the unique (nu, eps)
    with class == {nu + eps*e_a}; for classes of size exactly 2 the sign is
    reported as AMBIGUOUS.
    """
    vs = list(vectors)
    if not pairwise_compatible(vs):
        raise NotPairwiseCompatible(str([str(v) for v in vs]))
    distinct = sorted(set(vs), key=lambda w: w.coords)
    # union-find on distinct vectors under root-conjugacy
    parent = list(range(len(distinct)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    pair_dir = {}
    for i, j in itertools.combinations(range(len(distinct)), 2):
        pair = _rc_pair(distinct[i], distinct[j])
        if pair is not None:
            pair_dir[(i, j)] = pair
            pi, pj = find(i), find(j)
            if pi != pj:
                parent[pi] = pj
    groups: dict[int, list] = {}
    for i in range(len(distinct)):
        groups.setdefault(find(i), []).append(i)

    out = []
    for idxs in groups.values():
        members = []
        for i in idxs:
            members.extend([distinct[i]] * vs.count(distinct[i]))
        members = tuple(sorted(members, key=lambda w: w.coords))
        if len(idxs) == 1 and len(members) != 1:
            # duplicated sortable vector: each copy is its own singleton class
            for m in members:
                out.append(ConjClass((m,), frozenset(), None, None))
            continue
        if len(idxs) == 1:
            out.append(ConjClass(members, frozenset(), None, None))
            continue
        ground = set()
        for i, j in itertools.combinations(sorted(idxs), 2):
            pair = pair_dir.get((i, j))
            if pair is None:
                raise MalformedClass("class is not pairwise root-conjugate")
            ground.update(pair)
        nu, eps = _class_nu_eps(members, frozenset(ground))
        out.append(ConjClass(members, frozenset(ground), nu, eps))
    out.sort(key=lambda c: tuple(m.coords for m in c.members))
    return out


def _class_nu_eps(members, ground):
    """Solve class == {nu + eps*e_a : a in ground} for (nu, eps)."""
    k = members[0].k
    if len(members) != len(ground):
        raise MalformedClass("class size differs from ground-set size")
    for eps in (1, -1):
        nus = {members[0] - e(a, k).scale(eps) for a in ground}
        for nu in nus:
            if all(nu.coords[a - 1] == nu.coords[b - 1]
                   for a in ground for b in ground):
                expect = sorted((nu + e(a, k).scale(eps) for a in ground),
                                key=lambda w: w.coords)
                if tuple(expect) == tuple(members):
                    if len(members) == 2:
                        # either sign works for a pair; neither is canonical
                        return None, AMBIGUOUS
                    return nu, eps
    raise MalformedClass("no (nu, eps) reproduces the class")


def pcluster_osp(vectors: Sequence[WeightVector]) -> Osp:
    """Join of the osps of all class sums of a basic compatible multiset."""
    classes = conjugacy_classes(vectors)
    return join([osp_of(c.sum) for c in classes])


def pcluster_dosp(vectors: Sequence[WeightVector]) -> Dosp:
    """The osp of the multiset with each block of size >= 3 carrying the sign
    of the conjugacy class whose ground set is that block."""
    classes = conjugacy_classes(vectors)
    osp = join([osp_of(c.sum) for c in classes])
    by_ground = {c.ground_set: c for c in classes if len(c.members) >= 2}
    signs = {}
    for i, b in enumerate(osp.blocks):
        if len(b) < 3:
            continue
        c = by_ground.get(frozenset(b))
        if c is None or c.eps in (None, AMBIGUOUS):
            raise MissingConjugacyClass(f"block {sorted(b)} has no signed class")
        signs[i] = c.eps
    return Dosp.of(osp, signs)


# ---------------------------------------------------------------------------
# multi-puncture weights


@dataclass(frozen=True)
class MultiWeight:
    punctures: tuple  # ordered puncture names
    vectors: tuple    # one WeightVector per puncture, same k

    def __post_init__(self):
        if len(self.punctures) != len(self.vectors):
            raise ValueError("one vector per puncture required")
        ks = {v.k for v in self.vectors}
        if len(ks) > 1:
            raise ValueError("mixed k")

    @staticmethod
    def zero(punctures: Sequence[str], k: int) -> "MultiWeight":
        punctures = tuple(punctures)
        return MultiWeight(punctures, tuple(zero(k) for _ in punctures))

    def at(self, p: str) -> WeightVector:
        return self.vectors[self.punctures.index(p)]

    def with_at(self, p: str, v: WeightVector) -> "MultiWeight":
        i = self.punctures.index(p)
        vs = list(self.vectors)
        vs[i] = v
        return MultiWeight(self.punctures, tuple(vs))

    def __add__(self, other: "MultiWeight") -> "MultiWeight":
        if self.punctures != other.punctures:
            raise ValueError("puncture mismatch")
        return MultiWeight(self.punctures,
                           tuple(a + b for a, b in zip(self.vectors, other.vectors)))

    def __neg__(self) -> "MultiWeight":
        return MultiWeight(self.punctures, tuple(-v for v in self.vectors))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.vectors)

    def act(self, p: str, perm: Sequence[int]) -> "MultiWeight":
        return self.with_at(p, w_act(perm, self.at(p)))

    def __str__(self):
        return ";".join(f"{p}:{v}" for p, v in zip(self.punctures, self.vectors))


# ---------------------------------------------------------------------------
# rewriting multisets of subsets into initial intervals


def rewrite_to_fundamentals(subsets: Sequence[Iterable[int]], k: int):
    """Repeated {S,T} -> {S+T intersection, union} rewriting.

    The indicator sum must be weakly decreasing (closed dominant chamber).
    Returns (sorted list of initial intervals as frozensets, move trace).
    """
    sets = [frozenset(s) for s in subsets]
    total = [0] * k
    for s in sets:
        for x in s:
            total[x - 1] += 1
    if any(total[i] < total[i + 1] for i in range(k - 1)):
        raise NotDominant(str(total))
    sets = [s for s in sets if s]
    trace = []
    while True:
        for i, j in itertools.combinations(range(len(sets)), 2):
            a, b = sets[i], sets[j]
            if a <= b or b <= a:
                continue
            inter, union = a & b, a | b
            trace.append(((a, b), (inter, union)))
            rest = [sets[t] for t in range(len(sets)) if t not in (i, j)]
            sets = rest + [s for s in (inter, union) if s]
            break
        else:
            break
    sets.sort(key=lambda s: (len(s), sorted(s)))
    for s in sets:
        if s != frozenset(range(1, len(s) + 1)):
            raise AssertionError(f"terminal set {sorted(s)} is not an initial interval")
    return sets, trace
