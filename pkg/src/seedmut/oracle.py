"""Exact exterior algebra over the rationals: multivectors, the meet
operation, flag data with a stabilizing unipotent, the reflection action on
flags, and randomized exact verification of the flattening, kill, and spiral
identities.

All checks are exact rational equalities; degenerate samples raise
``Degenerate`` and callers resample.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coxeter import f_lambda, grassmannian_perm, coxeter_length, young_diagram, reduced_words


class Degenerate(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# multivectors


@dataclass(frozen=True)
class ExtTensor:
    k: int
    degree: int
    coeffs: tuple  # sorted tuple of (ascending index tuple, Fraction), nonzero

    @staticmethod
    def make(k: int, degree: int, data: dict) -> "ExtTensor":
        clean = []
        for key, c in data.items():
            key = tuple(key)
            if len(key) != degree or list(key) != sorted(key):
                raise ValueError(f"bad basis key {key}")
            c = Fraction(c)
            if c:
                clean.append((key, c))
        return ExtTensor(k, degree, tuple(sorted(clean)))

    @staticmethod
    def zero(k: int, degree: int) -> "ExtTensor":
        return ExtTensor(k, degree, ())

    @staticmethod
    def basis(k: int, key) -> "ExtTensor":
        return ExtTensor.make(k, len(tuple(key)), {tuple(key): 1})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "ExtTensor") -> "ExtTensor":
        assert self.k == other.k and self.degree == other.degree
        data = self.as_dict()
        for key, c in other.coeffs:
            s = data.get(key, Fraction(0)) + c
            if s:
                data[key] = s
            else:
                data.pop(key, None)
        return ExtTensor(self.k, self.degree, tuple(sorted(data.items())))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ExtTensor":
        c = Fraction(c)
        if not c:
            return ExtTensor.zero(self.k, self.degree)
        return ExtTensor(self.k, self.degree,
                         tuple((key, v * c) for key, v in self.coeffs))


def _merge_sign(a: Sequence[int], b: Sequence[int]):
    """Sign of sorting the concatenation of two ascending disjoint tuples."""
    sign = 1
    for x in a:
        sign *= (-1) ** sum(1 for y in b if y < x)
    return sign


def wedge(x: ExtTensor, y: ExtTensor) -> ExtTensor:
    if x.degree + y.degree > x.k:
        raise ValueError("degree overflow")
    data: dict[tuple, Fraction] = {}
    for a, ca in x.coeffs:
        sa = set(a)
        for b, cb in y.coeffs:
            if sa & set(b):
                continue
            key = tuple(sorted(a + b))
            c = ca * cb * _merge_sign(a, b)
            s = data.get(key, Fraction(0)) + c
            if s:
                data[key] = s
            else:
                data.pop(key, None)
    return ExtTensor(x.k, x.degree + y.degree, tuple(sorted(data.items())))


def wedge_vectors(k: int, vectors) -> ExtTensor:
    out = ExtTensor.make(k, 0, {(): 1})
    for v in vectors:
        t = ExtTensor.make(k, 1, {(i + 1,): v[i] for i in range(k) if v[i]})
        out = wedge(out, t)
    return out


def evaluate(x: ExtTensor) -> Fraction:
    """The coefficient of the full volume basis vector (degree k only)."""
    assert x.degree == x.k
    return x.as_dict().get(tuple(range(1, x.k + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# matrices acting on multivectors


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(m)) for j in range(p)] for i in range(n)]


def mat_inv(a):
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise Degenerate("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_det(a):
    n = len(a)
    m = [[Fraction(v) for v in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def apply_matrix(u, x: ExtTensor) -> ExtTensor:
    """Extend a k x k matrix to the exterior power by minors."""
    k = x.k
    data: dict[tuple, Fraction] = {}
    for key, c in x.coeffs:
        cols = [[u[r][j - 1] for r in range(k)] for j in key]
        for target in itertools.combinations(range(1, k + 1), x.degree):
            minor = mat_det([[cols[t][r - 1] for t in range(x.degree)] for r in target])
            if minor:
                s = data.get(target, Fraction(0)) + c * minor
                if s:
                    data[target] = s
                else:
                    data.pop(target, None)
    return ExtTensor(k, x.degree, tuple(sorted(data.items())))


class ExtAction:
    """A matrix together with cached actions on each exterior power.

    The per-degree expansion of basis multivectors is computed once and then
    reused, which matters in the randomized identity sweeps.
    """

    def __init__(self, matrix):
        self.matrix = matrix
        self._inverse = None
        self._tables: dict = {}

    def inverse(self):
        if self._inverse is None:
            self._inverse = mat_inv(self.matrix)
        return self._inverse

    def _table(self, k: int, degree: int, inverse: bool):
        key = (k, degree, inverse)
        if key not in self._tables:
            mat = self.inverse() if inverse else self.matrix
            table = {}
            for basis in itertools.combinations(range(1, k + 1), degree):
                table[basis] = apply_matrix(mat, ExtTensor.basis(k, basis)).as_dict()
            self._tables[key] = table
        return self._tables[key]

    def apply(self, x: ExtTensor, inverse: bool = False) -> ExtTensor:
        table = self._table(x.k, x.degree, inverse)
        data: dict[tuple, Fraction] = {}
        for key, c in x.coeffs:
            for target, m in table[key].items():
                s = data.get(target, Fraction(0)) + c * m
                if s:
                    data[target] = s
                else:
                    data.pop(target, None)
        return ExtTensor(x.k, x.degree, tuple(sorted(data.items())))


def _as_action(u) -> ExtAction:
    return u if isinstance(u, ExtAction) else ExtAction(u)


def group_algebra_power(u, m: int, x: ExtTensor, inverse: bool = False) -> ExtTensor:
    """(u - 1)^m (or (u^{-1} - 1)^m) applied to x, by the binomial theorem."""
    from math import comb
    action = _as_action(u)
    out = ExtTensor.zero(x.k, x.degree)
    cur = x
    for j in range(m + 1):
        out = out + cur.scale((-1) ** (m - j) * comb(m, j))
        if j < m:
            cur = action.apply(cur, inverse=inverse)
    return out


# ---------------------------------------------------------------------------
# the meet


def cap(x: ExtTensor, y: ExtTensor) -> ExtTensor:
    """The meet: shuffle complementary vectors from x onto y, evaluate, keep
    the leftovers.  x has degree k-a, y degree k-b, the result degree k-a-b."""
    k = x.k
    b = k - y.degree
    out_degree = x.degree - b
    if out_degree < 0:
        raise ValueError("degree mismatch")
    data: dict[tuple, Fraction] = {}
    for bkey, cb in y.coeffs:
        t = tuple(sorted(set(range(1, k + 1)) - set(bkey)))  # forced shuffle
        ts = set(t)
        for akey, ca in x.coeffs:
            if not ts <= set(akey):
                continue
            rest = tuple(i for i in akey if i not in ts)
            # split off the shuffled block to the LEFT, then wedge it onto y;
            # this normalization makes the flattening identity hold with +1/f
            sign = _merge_sign(t, rest) * _merge_sign(t, bkey)
            s = data.get(rest, Fraction(0)) + ca * cb * sign
            if s:
                data[rest] = s
            else:
                data.pop(rest, None)
    return ExtTensor(k, out_degree, tuple(sorted(data.items())))


def dual_split(x: ExtTensor, second: int):
    """The two-factor dual exterior coproduct: pairs (first, key of second).

    Splitting off ``second`` vectors to the right factor carries the shuffle
    sign normalized so that taking the last ``second`` indices is unsigned.
    """
    out = []
    for key, c in x.coeffs:
        for t in itertools.combinations(range(len(key)), second):
            tkey = tuple(key[i] for i in t)
            rest = tuple(key[i] for i in range(len(key)) if i not in t)
            sign = _merge_sign(tkey, rest)
            out.append((rest, tkey, c * sign))
    return out


def cap_via_coproduct(x: ExtTensor, y: ExtTensor) -> ExtTensor:
    """The meet computed through the dual exterior coproduct (cross-check)."""
    k = x.k
    b = k - y.degree
    data: dict[tuple, Fraction] = {}
    for rest, tkey, c in dual_split(x, b):
        val = evaluate(wedge(ExtTensor.basis(k, tkey), y)) * c
        if not val:
            continue
        s = data.get(rest, Fraction(0)) + val
        if s:
            data[rest] = s
        else:
            data.pop(rest, None)
    return ExtTensor(k, x.degree - b, tuple(sorted(data.items())))


# ---------------------------------------------------------------------------
# flags, unipotents, the reflection action


@dataclass
class Flag:
    k: int
    vectors: list  # k vectors, each a list of Fractions

    @staticmethod
    def random(rng: random.Random, k: int, span: int = 5) -> "Flag":
        while True:
            vecs = [[Fraction(rng.randint(-span, span)) for _ in range(k)] for _ in range(k)]
            if mat_det(vecs):
                return Flag(k, vecs)

    def copy(self) -> "Flag":
        return Flag(self.k, [list(v) for v in self.vectors])

    def matrix(self):
        """Columns are the flag vectors."""
        return [[self.vectors[j][i] for j in range(self.k)] for i in range(self.k)]

    def step(self, a: int) -> ExtTensor:
        return wedge_vectors(self.k, self.vectors[:a])


def random_unipotent(rng: random.Random, flag: Flag, span: int = 3):
    """A matrix stabilizing every step of the flag: V U V^{-1} with U
    unitriangular (nonzero superdiagonal, so generic steps exist)."""
    k = flag.k
    while True:
        uu = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                uu[i][j] = Fraction(rng.randint(-span, span))
        if all(uu[i][i + 1] for i in range(k - 1)):
            break
    v = flag.matrix()
    return mat_mul(mat_mul(v, uu), mat_inv(v))


def in_flag_basis(u, flag: Flag):
    """The matrix of u in the ordered basis of flag vectors."""
    if isinstance(u, ExtAction):
        u = u.matrix
    v = flag.matrix()
    return mat_mul(mat_mul(mat_inv(v), u), v)


def mat_vec(u, vec):
    return [sum(u[i][j] * vec[j] for j in range(len(vec))) for i in range(len(u))]


def weyl_flag_step(flag: Flag, u, i: int) -> Fraction:
    """Apply the reflection s_i in place; returns the rescaling scalar.

    The i-th step picks up the subdiagonal coefficient w of u in the flag
    basis; representatives are updated as v_i -> w v_i, v_{i+1} -> v_{i+1}/w.
    """
    if isinstance(u, ExtAction):
        u = u.matrix
    z = in_flag_basis(u, flag)
    w = z[i - 1][i]
    if not w:
        raise Degenerate(f"zero rescaling at step {i}")
    flag.vectors[i - 1] = [w * c for c in flag.vectors[i - 1]]
    flag.vectors[i] = [c / w for c in flag.vectors[i]]
    return w


def act_word(flag: Flag, u, word) -> Fraction:
    """Apply the letters left to right; returns the product of scalars.

    The matrix of u in the evolving flag basis is maintained incrementally:
    each step only rescales two basis vectors, a diagonal conjugation.
    """
    word = list(word)
    if not word:
        return Fraction(1)
    z = [row[:] for row in in_flag_basis(u, flag)]
    k = flag.k
    total = Fraction(1)
    for i in word:
        w = z[i - 1][i]
        if not w:
            raise Degenerate(f"zero rescaling at step {i}")
        total *= w
        flag.vectors[i - 1] = [w * c for c in flag.vectors[i - 1]]
        flag.vectors[i] = [c / w for c in flag.vectors[i]]
        # conjugate by diag(..., w, 1/w, ...): z[a][b] *= d_b / d_a
        for a in range(k):
            if a != i - 1:
                z[a][i - 1] *= w
            if a != i:
                z[a][i] /= w
        for b in range(k):
            if b != i - 1:
                z[i - 1][b] /= w
            if b != i:
                z[i][b] *= w
    return total


def w_s_via_flag(flag: Flag, u, s, k: int) -> Fraction:
    """The scalar relating (w_S . F)_(|S|) to F_(|S|), via the flag action."""
    a = len(set(s))
    word = _word_for_grassmannian(s, k)
    g = flag.copy()
    act_word(g, u, word)
    before = flag.step(a)
    after = g.step(a)
    return _proportionality(after, before)


def _word_for_grassmannian(s, k: int):
    """Flag-action word: per ascending element x_j, swap its value leftward
    into position j (letters x_j-1 down to j), blocks in ascending order."""
    word = []
    for j, x in enumerate(sorted(set(s)), start=1):
        word.extend(range(x - 1, j - 1, -1))
    return word


def _proportionality(after: ExtTensor, before: ExtTensor) -> Fraction:
    if before.is_zero():
        raise Degenerate("zero reference tensor")
    bd = before.as_dict()
    key, cb = before.coeffs[0]
    ratio = after.as_dict().get(key, Fraction(0)) / cb
    if after != before.scale(ratio):
        raise AssertionError("tensors are not proportional")
    return ratio


def w_s_via_word(flag: Flag, u, s, k: int) -> Fraction:
    """The product of consecutive subdiagonal entries in the flag basis."""
    z = in_flag_basis(u, flag)
    total = Fraction(1)
    for j, x in enumerate(sorted(set(s)), start=1):
        for t in range(j, x):
            total *= z[t - 1][t]
    if not total:
        raise Degenerate("vanishing subdiagonal product")
    return total


# ---------------------------------------------------------------------------
# identity checks


def random_tensor(rng: random.Random, k: int, degree: int, span: int = 4) -> ExtTensor:
    data = {}
    for key in itertools.combinations(range(1, k + 1), degree):
        data[key] = Fraction(rng.randint(-span, span))
    t = ExtTensor.make(k, degree, data)
    if t.is_zero():
        return ExtTensor.basis(k, tuple(range(1, degree + 1)))
    return t


def check_killeq(flag: Flag, u, s, t, k: int) -> bool:
    """(u-1)^{l(S)} v_T equals f^{lambda(S)} W_S F_(|S|) for T = S and
    vanishes for T strictly below S in the termwise order."""
    action = _as_action(u)
    s = tuple(sorted(set(s)))
    t = tuple(sorted(set(t)))
    assert len(s) == len(t) and all(x <= y for x, y in zip(t, s))
    ell = coxeter_length(grassmannian_perm(s, k))
    v_t = wedge_vectors(k, [flag.vectors[i - 1] for i in t])
    lhs = group_algebra_power(action, ell, v_t)
    if t != s:
        return lhs.is_zero()
    ws = w_s_via_word(flag, action, s, k)
    f = f_lambda(young_diagram(s, k))
    rhs = flag.step(len(s)).scale(f * ws)
    return lhs == rhs


def check_flattenproduct(flag: Flag, u, a: int, b: int, c: int,
                         eta: ExtTensor, zeta: ExtTensor) -> bool:
    """(F_(a+b) ^ eta) ((w_S.F)_(a+c) ^ zeta) ==
    (1/f) (F_(a+b+c) cap (F_(a) ^ eta) cap (u^{-1}-1)^l zeta)
    with S = [a] u [a+b+1, a+b+c]."""
    action = _as_action(u)
    k = flag.k
    s = tuple(range(1, a + 1)) + tuple(range(a + b + 1, a + b + c + 1))
    ell = coxeter_length(grassmannian_perm(s, k))
    f = f_lambda(young_diagram(s, k))
    g = flag.copy()
    act_word(g, action, _word_for_grassmannian(s, k))
    lhs = evaluate(wedge(flag.step(a + b), eta)) * evaluate(wedge(g.step(a + c), zeta))
    rhs_t = cap(cap(flag.step(a + b + c), wedge(flag.step(a), eta)),
                group_algebra_power(action, ell, zeta, inverse=True))
    assert rhs_t.degree == 0
    rhs = rhs_t.as_dict().get((), Fraction(0))
    return lhs * f == rhs


def check_flattensplit(flag: Flag, u, a: int, r: int, eta: ExtTensor) -> bool:
    """prod_j ((s_{a+1}..s_j . F)_(a+1) ^ eta) equals the nested-meet form."""
    action = _as_action(u)
    lhs = Fraction(1)
    for j in range(a, a + r):
        g = flag.copy()
        act_word(g, action, list(range(j, a, -1)))
        lhs *= evaluate(wedge(g.step(a + 1), eta))
    acc = flag.step(a + r)
    power = eta
    for t in range(r - 1):
        acc = cap(acc, wedge(flag.step(a), power))
        power = action.apply(power, inverse=True)
    final = cap(acc, power)
    assert final.degree == 0
    rhs = final.as_dict().get((), Fraction(0))
    return lhs == rhs


def check_flattensplit_dual(flag: Flag, u, a: int, r: int, eta: ExtTensor) -> bool:
    """The opposite-sign family: products of (a+r-1)-step factors equal a
    wedge of nested meets."""
    action = _as_action(u)
    k = flag.k
    lhs = Fraction(1)
    for j in range(a + 1, a + r + 1):
        g = flag.copy()
        act_word(g, action, list(range(j, a + r)))
        lhs *= evaluate(wedge(g.step(a + r - 1), eta))
    acc = flag.step(a)
    power = eta
    for t in range(r - 1):
        acc = wedge(acc, cap(flag.step(a + r), power))
        power = action.apply(power, inverse=True)
    final = wedge(acc, power)
    assert final.degree == k
    return lhs == evaluate(final)
