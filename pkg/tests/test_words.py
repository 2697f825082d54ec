from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasirandom import kernels
from quasirandom.characters import conjugacy_classes
from quasirandom.errors import InputError
from quasirandom.groups import matrix_group
from quasirandom.words import (
    Word, WordSyntaxError, evaluate_batch, evaluate_word, is_regular_semisimple, parse_word,
    random_pair_generates, rs_fraction, sparse_size, waring_check, word_value_set,
)

from conftest import group


# parsing --------------------------------------------------------------------


@pytest.mark.parametrize("text,arity,letters", [
    ("x1^2", 1, ((1, 2),)),
    ("[x1,x2]", 2, ((1, -1), (2, -1), (1, 1), (2, 1))),
    ("x1 x2 x2^-1 x1", 2, ((1, 2),)),
    ("a^-1 b a", 2, ((1, -1), (2, 1), (1, 1))),
    ("(x1 x2)^2", 2, ((1, 1), (2, 1), (1, 1), (2, 1))),
    ("(x1 x2)^-1", 2, ((2, -1), (1, -1))),
    ("x1*x3", 3, ((1, 1), (3, 1))),
    ("[[x1,x2],x3]", 3, None),
    ("x2^+3", 2, ((2, 3),)),
])
def test_parse_examples(text, arity, letters):
    w = parse_word(text)
    assert w.arity == arity
    if letters is not None:
        assert w.letters == letters
    assert all(a[0] != b[0] for a, b in zip(w.letters, w.letters[1:]))
    assert all(e != 0 for _, e in w.letters)


@pytest.mark.parametrize("text,pos", [
    ("x1 ^", 4), ("x0", 1), ("x12", 2), ("[x1 x2]", 6), ("x1 )", 3), ("x1 + x2", 3),
    ("[,x1]", 0), ("", 0),
])
def test_parse_errors_have_positions(text, pos):
    with pytest.raises(WordSyntaxError) as err:
        parse_word(text)
    assert err.value.pos == pos


def test_trivial_and_mixed_words():
    with pytest.raises(InputError):
        parse_word("x1 x1^-1")
    assert parse_word("x1 x1^-1", allow_trivial=True).is_trivial
    with pytest.raises(InputError):
        parse_word("x1 a")


letters = st.lists(st.tuples(st.integers(1, 3), st.integers(-3, 3).filter(bool)), min_size=1, max_size=6)


@given(letters)
def test_print_parse_roundtrip(pairs):
    text = " ".join(f"x{i}^{e}" for i, e in pairs)
    w = parse_word(text, allow_trivial=True)
    assert parse_word(str(w), allow_trivial=True).letters == w.letters
    assert parse_word(str(w.inverse()), allow_trivial=True).letters == w.inverse().letters


# evaluation ---------------------------------------------------------------------


def test_evaluation_examples():
    G = group("Alt", 5)
    assert all(evaluate_word(G, "x1", [g]) == g for g in range(G.n))
    C5 = group("C", 5)
    assert all(evaluate_word(C5, "x1^2", [g]) == C5.multiply(g, g) for g in range(5))
    C5g = C5.gens[0]
    assert evaluate_word(C5, "[x1,x2]", [C5g, C5.multiply(C5g, C5g)]) == 0
    with pytest.raises(InputError):
        evaluate_word(G, "[x1,x2]", [1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 167), st.integers(0, 167), st.integers(0, 167))
def test_evaluation_matches_manual_products(a, b, c):
    G = group("PSL", 2, 7)
    m, i = G.multiply, G.inverse
    assert evaluate_word(G, "[x1,x2]", [a, b]) == m(m(m(i(a), i(b)), a), b)
    assert evaluate_word(G, "x1^-2 x3 x2", [a, b, c]) == m(m(i(m(a, a)), c), b)
    assert evaluate_word(G, "(x1 x2)^3", [a, b]) == G.power(m(a, b), 3)


# value sets -------------------------------------------------------------------


def _brute_values(G, text):
    w = parse_word(text)
    n = G.n
    grids = np.meshgrid(*[np.arange(n)] * w.arity, indexing="ij")
    return set(evaluate_batch(G, w, [g.ravel() for g in grids]).tolist())


@pytest.mark.parametrize("spec,words,size", [
    (("Alt", 5), ["x1^2"], 45),
    (("Alt", 5), ["x1^2", "[x1,x2]"], 45),
    (("PSL", 2, 7), ["x1^2"], 126),
    (("Alt", 5), ["x1"], 60),
    (("Sym", 4), ["[x1,x2]"], 12),
    (("Sym", 4), ["x1^2"], 12),
])
def test_exact_value_sets(spec, words, size):
    G = group(*spec)
    vs = word_value_set(G, words, mode="exact")
    assert vs.size == size
    expected = set(range(G.n))
    for w in words:
        expected &= _brute_values(G, w)
    assert set(vs.mask.indices().tolist()) == expected


@pytest.mark.parametrize("spec,word", [(("PSL", 2, 7), "x1^3"), (("Sym", 4), "x1^2"),
                                       (("Alt", 5), "[x1,x2]"), (("Q8",), "x1^2 x2^2")])
def test_value_sets_are_conjugation_closed(spec, word):
    G = group(*spec)
    S = word_value_set(G, [word], mode="exact").mask
    assert 0 in S
    cc = conjugacy_classes(G)
    for members in cc.members:
        hits = S.mask[members]
        assert hits.all() or not hits.any()
    if parse_word(word).arity == 1:
        assert S.inverse() == S


@pytest.mark.parametrize("spec,words", [(("PSL", 2, 7), ["x1^2"]), (("Alt", 5), ["x1^2", "[x1,x2]"]),
                                        (("Sym", 4), ["x1^3"]), (("PSL", 2, 11), ["x1^5"])])
def test_sampled_density_within_three_sigma(spec, words):
    G = group(*spec)
    exact = word_value_set(G, words, mode="exact")
    est = word_value_set(G, words, mode="sampled", samples=20_000, rng=np.random.default_rng(8))
    assert abs(est.density - exact.density) <= est.radius
    assert est.size is None and est.classes_found >= 1


def test_unknown_mode():
    with pytest.raises(InputError):
        word_value_set(group("C", 3), ["x1"], mode="magic")


# Waring ------------------------------------------------------------------------


def test_waring_full_sets():
    for spec in [("Alt", 5), ("PSL", 2, 7)]:
        rep = waring_check(group(*spec), ["x1^2"])
        assert rep.full_covers and not rep.full_missing
    assert waring_check(group("Alt", 5), ["x1"]).full_covers


def test_sparse_waring_psl27():
    L = group("PSL", 2, 7)
    assert sparse_size(L, 126) == 109
    rep = waring_check(L, ["x1^2"], sparse_trials=10, distinct=True, rng=np.random.default_rng(1))
    assert rep.sparse["size"] == 109 and 0 <= rep.sparse["covered"] <= 10
    assert rep.distinct["all_covered"]
    with pytest.raises(InputError):
        waring_check(group("Alt", 5), ["x1^2"], sparse_trials=2)


# regular semisimple elements -------------------------------------------------------


def _sl2_rs_count(q):
    """Elements of SL(2, q) with trace t such that x^2 - t x + 1 is squarefree."""
    if q % 2:
        split, nonsplit = (q - 3) // 2, (q - 1) // 2
    else:
        split, nonsplit = (q - 2) // 2, q // 2
    return split * q * (q + 1) + nonsplit * q * (q - 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_rs_fraction_sl2_formula(q):
    G = group("SL", 2, q)
    rep = rs_fraction(G, mode="exact")
    assert Fraction(rep.exact) == Fraction(_sl2_rs_count(q), G.n)


@pytest.mark.parametrize("q,frac", [(2, "1/3"), (3, "1/4"), (5, "7/12"), (7, "17/24")])
def test_rs_fraction_regression(q, frac):
    assert rs_fraction(group("SL", 2, q), mode="exact").exact == frac


def test_rs_fraction_trend_for_odd_q():
    fr = [Fraction(rs_fraction(group("SL", 2, q), mode="exact").exact) for q in (3, 5, 7)]
    assert fr == sorted(fr)


def test_is_regular_semisimple_examples():
    G = group("SL", 4, 2)
    assert not is_regular_semisimple(G, 0)
    # companion matrix of x^4 + x + 1, irreducible over GF(2)
    C = np.array([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0]])
    H = matrix_group(2, [C])
    assert H.n == 15
    assert is_regular_semisimple(H, H.gens[0])


def test_is_regular_semisimple_class_function():
    G = group("SL", 2, 7)
    rng = np.random.default_rng(6)
    for g, h in rng.integers(G.n, size=(50, 2)):
        assert is_regular_semisimple(G, int(g)) == is_regular_semisimple(G, G.conjugate(int(g), int(h)))


def test_rs_sampled_matches_exact():
    G = group("SL", 2, 5)
    est = rs_fraction(G, mode="sampled", samples=20_000, rng=np.random.default_rng(2))
    assert abs(est.fraction - 7 / 12) <= est.radius


def test_rs_requires_matrix_group():
    with pytest.raises(InputError):
        rs_fraction(group("Alt", 5))


# generation ---------------------------------------------------------------------


def test_generation_identity_word_and_prime_cyclic():
    A5 = group("Alt", 5)
    a = random_pair_generates(A5, ["x1"], trials=200, rng=np.random.default_rng(3))
    # the same draws without the word layer
    rng = np.random.default_rng(3)
    pairs = np.arange(A5.n)[rng.integers(A5.n, size=(200, 2))]
    plain = sum(kernels.closure(A5.table, p)[1] == A5.n for p in pairs)
    assert a.generated == plain
    C5 = group("C", 5)
    rep = random_pair_generates(C5, ["x1"], trials=300, rng=np.random.default_rng(4))
    rng = np.random.default_rng(4)
    draws = rng.integers(5, size=(300, 2))
    nonid = int(np.sum(np.any(draws != 0, axis=1)))
    assert rep.generated == nonid


def test_generation_psl27_against_exact_pair_count():
    L = group("PSL", 2, 7)
    rep = random_pair_generates(L, ["x1^2"], trials=200, rng=np.random.default_rng(0))
    W = word_value_set(L, ["x1^2"], mode="exact").mask.indices()
    good = sum(kernels.closure(L.table, np.array([a, b]))[1] == L.n for a in W for b in W)
    p = good / W.size**2
    sigma = np.sqrt(p * (1 - p) / 200)
    assert abs(rep.frequency - p) <= 4 * sigma
    again = random_pair_generates(L, ["x1^2"], trials=200, rng=np.random.default_rng(0), workers=3)
    assert again == rep
