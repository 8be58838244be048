from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nzpolytope.rootdata import (
    cartan_matrix,
    fundamental_weight,
    is_longest_word,
    is_reduced_word,
    parse_int_list,
    parse_type,
    positive_roots,
    rho,
    root_datum,
    weyl_act,
    weyl_dimension,
    word_indexing,
)

LONGEST = {
    ("A", 1): [(1,)],
    ("A", 2): [(1, 2, 1), (2, 1, 2)],
    ("A", 3): [(1, 2, 1, 3, 2, 1), (2, 1, 2, 3, 2, 1), (3, 2, 1, 3, 2, 3)],
    ("B", 2): [(2, 1, 2, 1), (1, 2, 1, 2)],
    ("C", 2): [(2, 1, 2, 1), (1, 2, 1, 2)],
    ("B", 3): [(3, 2, 1) * 3],
    ("C", 3): [(3, 2, 1) * 3],
    ("D", 4): [(4, 3, 2, 1) * 3],
    ("G", 2): [(1, 2) * 3, (2, 1) * 3],
}


def test_cartan_a2_and_a1():
    assert cartan_matrix("A", 2) == ((2, -1), (-1, 2))
    assert cartan_matrix("A", 1) == ((2,),)


def test_cartan_b_c_are_transposes():
    b, c = cartan_matrix("B", 3), cartan_matrix("C", 3)
    assert b == tuple(zip(*c))
    # alpha_n short in B: <alpha_{n-1}, h_n> = -2
    assert b[2][1] == -2 and b[1][2] == -1


def test_cartan_g2_orientations():
    g = cartan_matrix("G", 2)
    assert {g[0][1], g[1][0]} == {-1, -3}
    assert cartan_matrix("G", 2, g2_long_first=True) == tuple(zip(*g))


def test_unsupported_types_raise():
    for t, n in (("H", 3), ("E", 5), ("G", 3), ("B", 1), ("F", 3)):
        with pytest.raises(ValueError):
            cartan_matrix(t, n)


@pytest.mark.parametrize("t,n,count", [("A", 3, 6), ("B", 3, 9), ("C", 2, 4), ("D", 4, 12), ("G", 2, 6), ("F", 4, 24), ("E", 6, 36)])
def test_positive_root_count_matches_closure(t, n, count):
    d = root_datum(t, n)
    assert d.num_positive_roots == count
    assert len(positive_roots(d)) == count


def test_reducedness_examples():
    a2, a3 = root_datum("A", 2), root_datum("A", 3)
    assert is_reduced_word(a2, (1, 2, 1))
    assert not is_reduced_word(a2, (1, 1, 2))
    assert is_reduced_word(a3, (2, 1, 2, 3, 2, 1))
    assert is_longest_word(a2, (1, 2, 1))
    assert not is_longest_word(a2, (1, 2))
    assert is_longest_word(root_datum("C", 2), (2, 1, 2, 1))
    with pytest.raises(ValueError):
        is_reduced_word(a2, (1, 3))


@pytest.mark.parametrize("key", sorted(LONGEST))
def test_suite_longest_words(key):
    d = root_datum(*key)
    for w in LONGEST[key]:
        assert is_longest_word(d, w)


def test_both_g2_words_reduced_in_default_orientation():
    d = root_datum("G", 2)
    assert is_longest_word(d, (1, 2, 1, 2, 1, 2)) and is_longest_word(d, (2, 1, 2, 1, 2, 1))


def test_weyl_act_examples():
    a2 = root_datum("A", 2)
    assert weyl_act(a2, (), (1, 0)) == (1, 0)
    assert weyl_act(a2, (1, 2, 1), (1, 0)) == (0, -1)
    a1 = root_datum("A", 1)
    assert weyl_act(a1, (1,), (5,)) == (-5,)


def test_weyl_act_rightmost_letter_first():
    a2 = root_datum("A", 2)
    # s_1 s_2 varpi_1: s_2 fixes varpi_1, then s_1 gives varpi_1 - alpha_1 = (-1, 1)
    assert weyl_act(a2, (1, 2), (1, 0)) == (-1, 1)


def test_word_indexing_examples():
    idx = word_indexing((2, 1, 2, 3, 2, 1))
    assert idx.d == (2, 3, 1)
    assert idx.positions == ((2, 6), (1, 3, 5), (4,))
    idx = word_indexing((1, 2, 1))
    assert idx.d == (2, 1) and idx.m_of == (1, 1, 2)
    idx = word_indexing((1,))
    assert idx.d == (1,) and idx.m_of == (1,)


def test_color_blocks_round_trip():
    idx = word_indexing((2, 1, 2, 3, 2, 1))
    v = (10, 20, 30, 40, 50, 60)
    blocks = idx.to_color_blocks(v)
    assert blocks == (20, 60, 10, 30, 50, 40)
    assert idx.from_color_blocks(blocks) == v
    for i in (1, 2, 3):
        assert idx.assemble(i, idx.complement(v, i), idx.color_block(v, i)) == v


@pytest.mark.parametrize(
    "t,n,lam,dim",
    [
        ("A", 2, (1, 0), 3),
        ("A", 2, (1, 1), 8),
        ("A", 3, (1, 1, 1), 64),
        ("B", 2, (0, 1), 4),
        ("B", 2, (1, 0), 5),
        ("C", 2, (1, 0), 4),
        ("C", 2, (0, 1), 5),
        ("G", 2, (1, 0), 7),
        ("G", 2, (0, 1), 14),
        ("G", 2, (1, 1), 64),
        ("D", 4, (1, 0, 0, 0), 8),
        ("D", 4, (0, 1, 0, 0), 28),
        ("E", 6, (1, 0, 0, 0, 0, 0), 27),
        ("F", 4, (0, 0, 0, 1), 26),
    ],
)
def test_weyl_dimension_table(t, n, lam, dim):
    assert weyl_dimension(root_datum(t, n), lam) == dim


def test_symmetrizer_symmetrizes():
    for t, n in (("B", 3), ("C", 3), ("G", 2), ("F", 4)):
        d = root_datum(t, n)
        s = d.symmetrizer
        for i in range(n):
            for j in range(n):
                assert s[i] * d.cartan[i][j] == s[j] * d.cartan[j][i]


def test_parsers():
    assert parse_type("C3").name == "C3"
    assert parse_int_list("1, 2,3") == (1, 2, 3)
    assert parse_int_list("") == ()
    with pytest.raises(ValueError):
        parse_type("X2")
    assert fundamental_weight(root_datum("A", 3), 2) == (0, 1, 0)
    assert rho(root_datum("G", 2)) == (1, 1)


# ---------------------------------------------------------------- properties

_key = st.sampled_from(sorted(LONGEST))


@given(_key, st.data())
def test_w0_maps_dominant_to_antidominant(key, data):
    d = root_datum(*key)
    lam = tuple(data.draw(st.lists(st.integers(0, 5), min_size=d.rank, max_size=d.rank)))
    images = {weyl_act(d, w, lam) for w in LONGEST[key]}
    assert len(images) == 1  # every reduced word gives the same w0
    (mu,) = images
    assert all(x <= 0 for x in mu)
    assert sorted(-x for x in mu) == sorted(lam)  # -w0 permutes the fundamental weights


@given(_key, st.data())
def test_word_indexing_partitions_positions(key, data):
    d = root_datum(*key)
    word = data.draw(st.sampled_from(LONGEST[key]))
    idx = word_indexing(word, d.rank)
    assert sum(idx.d) == len(word)
    flat = sorted(p for pos in idx.positions for p in pos)
    assert flat == list(range(1, len(word) + 1))
    for k, letter in enumerate(word, start=1):
        assert idx.positions[letter - 1][idx.m_of[k - 1] - 1] == k


@given(st.sampled_from([("A", 2), ("B", 3), ("C", 2), ("G", 2), ("D", 4)]), st.data())
def test_weyl_dimension_is_a_positive_integer_and_monotone(key, data):
    d = root_datum(*key)
    lam = data.draw(st.lists(st.integers(0, 3), min_size=d.rank, max_size=d.rank))
    i = data.draw(st.integers(0, d.rank - 1))
    bigger = list(lam)
    bigger[i] += 1
    assert weyl_dimension(d, lam) >= 1
    assert weyl_dimension(d, bigger) > weyl_dimension(d, lam)


def test_simple_root_is_cartan_column():
    d = root_datum("B", 2)
    assert d.simple_root(1) == (2, -2)
    assert d.simple_root(2) == (-1, 2)
    assert Fraction(d.symmetrizer[0]) == 2 * d.symmetrizer[1]
