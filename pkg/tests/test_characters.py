from collections import Counter
from math import factorial

import numpy as np
import pytest

from quasirandom.characters import (
    character_table, conjugacy_classes, dixon_prime, min_nontrivial_degree,
)
from quasirandom.errors import InputError
from quasirandom.groups import direct_product

from conftest import group

TABLE_GROUPS = [("C", 3), ("C", 7), ("D", 7), ("Q8",), ("Sym", 3), ("Sym", 4), ("Sym", 5),
                ("Alt", 4), ("Alt", 5), ("Alt", 6), ("PSL", 2, 5), ("PSL", 2, 7),
                ("PSL", 2, 11), ("PSL", 2, 13), ("SL", 2, 5), ("PSL", 3, 3)]


def _partitions(m, largest=None):
    largest = m if largest is None else largest
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in _partitions(m - first, first):
            yield (first,) + rest


def _hook_degree(shape):
    m = sum(shape)
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])]
    hooks = 1
    for i, r in enumerate(shape):
        for j in range(r):
            hooks *= (r - j - 1) + (conj[j] - i - 1) + 1
    return factorial(m) // hooks


@pytest.mark.parametrize("spec", TABLE_GROUPS, ids=str)
def test_table_invariants(spec):
    G = group(*spec)
    cc = conjugacy_classes(G)
    assert cc.sizes.sum() == G.n and np.all(G.n % cc.sizes == 0) and cc.sizes[0] == 1
    tab = character_table(G)
    assert int((tab.degrees**2).sum()) == G.n
    assert tab.row_residual() < 1e-8 and tab.column_residual() < 1e-8
    assert np.allclose(tab.values[:, 0], tab.degrees)
    assert np.allclose(tab.values[0], 1)
    assert np.all(np.abs(tab.values) <= tab.degrees[:, None] + 1e-9)
    # degree-1 characters count the abelianisation
    linear = int(np.sum(tab.degrees == 1))
    assert linear == G.n // int(G.commutator_subgroup().sum())


@pytest.mark.parametrize("spec", [("Sym", 4), ("Alt", 5), ("Alt", 6), ("D", 7)], ids=str)
def test_permutation_character_decomposes(spec):
    G = group(*spec)
    tab = character_table(G)
    cc = tab.classes
    m = G.elements.shape[1]
    fix = np.sum(G.elements[cc.reps] == np.arange(m), axis=1)
    mult = (tab.values.conj() * cc.sizes) @ fix / G.n
    assert np.allclose(mult.imag, 0, atol=1e-9)
    assert np.allclose(mult.real, np.round(mult.real), atol=1e-9)
    assert np.all(np.round(mult.real) >= 0) and round(mult[0].real) >= 1


@pytest.mark.parametrize("m", [3, 4, 5])
def test_symmetric_degrees_match_hook_lengths(m):
    expected = Counter(_hook_degree(p) for p in _partitions(m))
    assert Counter(character_table(group("Sym", m)).degrees.tolist()) == expected


def test_cyclic_table_is_dft():
    G = group("C", 7)
    tab = character_table(G)
    assert np.all(tab.degrees == 1)
    g = G.gens[0]
    powers = [0]
    for _ in range(6):
        powers.append(G.multiply(powers[-1], g))
    col = {int(x): j for j, x in enumerate(tab.classes.reps)}
    w = np.exp(2j * np.pi / 7)
    rows = {tuple(np.round(r, 8)) for r in tab.values}
    for j in range(7):
        row = np.zeros(7, dtype=complex)
        for e, x in enumerate(powers):
            row[col[x]] = w ** (j * e)
        assert tuple(np.round(row, 8)) in rows


@pytest.mark.parametrize("spec,degrees", [
    (("C", 3), [1, 1, 1]),
    (("Alt", 5), [1, 3, 3, 4, 5]),
    (("PSL", 2, 7), [1, 3, 3, 6, 7, 8]),
])
def test_degree_examples(spec, degrees):
    assert sorted(character_table(group(*spec)).degrees.tolist()) == degrees


@pytest.mark.parametrize("spec,classes", [(("Sym", 3), [1, 2, 3]), (("PSL", 2, 7), None),
                                          (("C", 6), [1] * 6)])
def test_class_examples(spec, classes):
    cc = conjugacy_classes(group(*spec))
    if classes is None:
        assert cc.count == 6
    else:
        assert sorted(cc.sizes.tolist()) == classes


@pytest.mark.parametrize("spec,k", [(("C", 6), 1), (("PSL", 2, 7), 3), (("PSL", 2, 11), 5),
                                    (("PSL", 2, 13), 7), (("PSL", 2, 5), 3), (("Alt", 6), 5),
                                    (("SL", 2, 5), 2), (("Q8",), 1)])
def test_min_degree(spec, k):
    assert min_nontrivial_degree(group(*spec)) == k


@pytest.mark.parametrize("q", [5, 7, 11, 13])
def test_psl2_degree_lower_bound(q):
    assert min_nontrivial_degree(group("PSL", 2, q)) >= (q - 1) / 2


def test_direct_product_takes_minimum():
    A, P = group("C", 2), group("PSL", 2, 5)
    G = direct_product(A, P)
    assert min_nontrivial_degree(G) == min(min_nontrivial_degree(A), min_nontrivial_degree(P))
    H = direct_product(group("Alt", 5), P)
    assert min_nontrivial_degree(H) == 3
    assert sorted(character_table(H).degrees.tolist()) == sorted(
        a * b for a in [1, 3, 3, 4, 5] for b in [1, 3, 3, 4, 5])


def test_trivial_group_rejected():
    with pytest.raises(InputError):
        min_nontrivial_degree(group("C", 1))


@pytest.mark.parametrize("n,e", [(1, 1), (168, 84), (60, 30), (8, 4)])
def test_dixon_prime(n, e):
    p = dixon_prime(n, e)
    assert (p - 1) % e == 0 and p * p > 4 * n


def test_tsv_shape():
    tab = character_table(group("Alt", 5))
    lines = tab.to_tsv().splitlines()
    assert len(lines) == 6 and all(len(l.split("\t")) == 6 for l in lines)
