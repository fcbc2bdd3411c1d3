import itertools

from seedmut.coxeter import (all_subsets, commutation_classes, count_syt_brute,
                             coxeter_length, f_lambda, grassmannian_perm,
                             identity, reduced_words, simple, young_diagram)


def test_grassmannian_examples():
    assert grassmannian_perm({1, 2}, 4) == identity(4)
    w = grassmannian_perm({3}, 3)
    assert w == (3, 1, 2) and coxeter_length(w) == 2


def test_interval_union_length_is_rectangle():
    for a in range(0, 4):
        for b in range(1, 4):
            for c in range(1, 4):
                k = a + b + c
                s = set(range(1, a + 1)) | set(range(a + b + 1, a + b + c + 1))
                assert coxeter_length(grassmannian_perm(s, k)) == b * c
                assert young_diagram(s, k) == (b,) * c


def test_length_examples():
    assert coxeter_length(identity(5)) == 0
    assert coxeter_length((3, 2, 1)) == 3


def test_young_diagram_examples():
    assert young_diagram({1, 2, 3}, 5) == ()
    assert young_diagram({1, 4, 5}, 5) == (2, 2)
    assert young_diagram({3}, 3) == (2,)


def test_shape_size_equals_length():
    for k in range(1, 8):
        for s in all_subsets(k):
            assert sum(young_diagram(s, k)) == coxeter_length(grassmannian_perm(s, k))


def test_f_lambda_examples():
    assert f_lambda((2, 2)) == 2
    assert f_lambda((5,)) == 1
    assert f_lambda((2, 1)) == 2


def partitions(n, cap=None):
    cap = cap or n
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def test_hook_length_matches_enumeration():
    for n in range(0, 11):
        for shape in partitions(n):
            assert f_lambda(shape) == count_syt_brute(shape), shape


def test_reduced_words_examples():
    assert reduced_words(identity(4)) == [[]]
    assert len(reduced_words(grassmannian_perm({1, 4, 5}, 5))) == 2
    assert len(reduced_words((3, 2, 1))) == 2


def test_reduced_word_count_equals_f_lambda():
    for k in range(2, 7):
        for s in all_subsets(k):
            w = grassmannian_perm(s, k)
            assert len(reduced_words(w)) == f_lambda(young_diagram(s, k)), s


def test_words_multiply_back():
    for k in (3, 4):
        for s in all_subsets(k):
            w = grassmannian_perm(s, k)
            for word in reduced_words(w):
                cur = identity(k)
                for i in word:  # each letter multiplies on the right
                    cur = tuple(cur[simple(i, k)[t] - 1] for t in range(k))
                assert cur == w


def test_grassmannian_words_connected_by_commutations():
    for k in range(2, 6):
        for s in all_subsets(k):
            words = reduced_words(grassmannian_perm(s, k))
            assert commutation_classes(words) == 1, s


def test_longest_element_not_commutation_connected():
    # the braid move is genuinely needed for the longest element
    assert commutation_classes(reduced_words((3, 2, 1))) == 2
