import numpy as np
import pytest

from permcode.codes import DecodeFailure, DecodeStats, add_errors
from permcode.perms import Permutation, Word, hamming_distance, random_permutation
from permcode.wreath import WreathElement, lehmer_rank, lehmer_unrank, wreath_code


def test_lehmer_code_round_trip():
    seen = set()
    for i in range(24):
        sigma = lehmer_unrank(i, 4)
        assert lehmer_rank(sigma) == i
        seen.add(sigma)
    assert len(seen) == 24


def test_element_layout():
    code = wreath_code(3, 2)
    e = WreathElement((1, 0), Permutation.from_cycles(2, [(0, 1)]))
    g = code.to_permutation(e)
    # column 0 moves to column 1 with shift h_1 = 0; column 1 moves to column 0 rotated by h_0 = 1
    assert g.to_list() == [4, 5, 6, 2, 3, 1]
    assert code.from_permutation(g) == e
    assert code.chain.contains(g)


def test_from_permutation_rejects_non_members():
    code = wreath_code(3, 2)
    assert code.from_permutation(Permutation.from_cycles(6, [(0, 1)])) is None


def test_message_encoding_is_a_bijection():
    code = wreath_code(2, 3)
    elements = [code.encode_message(i) for i in range(code.order)]
    assert len(set(elements)) == code.order == 48
    for i, g in enumerate(elements):
        assert code.decode_message(g) == i
    with pytest.raises(ValueError):
        code.encode_message(code.order)


def test_minimal_degree_is_m():
    code = wreath_code(5, 3)
    rotation = code.to_permutation(WreathElement((1, 0, 0), Permutation.identity(3)))
    assert hamming_distance(rotation, Permutation.identity(15)) == 5
    assert code.capacity == 2


def test_majority_decoder_corrects_capacity_errors(rng):
    code = wreath_code(5, 6)
    for _ in range(100):
        g = code.encode_message(int(rng.integers(code.order)))
        assert code.decode_majority(add_errors(g, code.capacity, rng)) == g


def test_majority_decoder_tolerates_r_errors_in_every_column(rng):
    code = wreath_code(5, 4)
    g = code.to_permutation(WreathElement((1, 2, 3, 4), random_permutation(4, rng)))
    symbols = g.images.copy()
    for j in range(4):
        for i in range(2):
            p = code.point(i, j)
            symbols[p] = (symbols[p] + 7) % 20
    assert code.decode_majority(Word(symbols)) == g


def test_ubb_decoder_agrees_with_majority(rng):
    code = wreath_code(3, 4)
    for _ in range(30):
        g = code.chain.random_element(rng)
        w = add_errors(g, code.capacity, rng)
        assert code.decode_ubb(w) == code.decode_majority(w) == g


def test_plurality_tie_fails():
    code = wreath_code(3, 2)
    with pytest.raises(DecodeFailure):
        code.decode_majority(Word([0, 2, 1, 3, 4, 5]))


def _shapes(max_points):
    return [(m, n) for m in range(2, max_points + 1) for n in range(1, max_points // m + 1)]


def _fixed_point_masks(code):
    elements = code.chain.elements_array()
    fixed = elements == np.arange(code.degree)[None, :]
    return (fixed.astype(np.int64) << np.arange(code.degree, dtype=np.int64)).sum(axis=1)


@pytest.mark.parametrize("m, n", _shapes(12))
def test_minimal_degree_by_brute_force(m, n):
    code = wreath_code(m, n)
    moved = (code.chain.elements_array() != np.arange(code.degree)[None, :]).sum(axis=1)
    assert len(moved) == code.order
    assert int(moved[moved > 0].min()) == code.minimal_degree == m


@pytest.mark.parametrize("m, n", _shapes(12))
def test_minimal_bases_are_one_point_per_column(m, n):
    code = wreath_code(m, n)
    masks = _fixed_point_masks(code)
    size = 1 << code.degree
    is_base = np.zeros(size, dtype=bool)
    for s in range(size):
        # only the identity fixes every point of a base
        is_base[s] = int(((masks & s) == s).sum()) == 1
    for s in range(size):
        points = [p for p in range(code.degree) if s >> p & 1]
        minimal = is_base[s] and not any(is_base[s & ~(1 << p)] for p in points)
        columns = [code.coordinates(p)[1] for p in points]
        assert minimal == (len(columns) == n and len(set(columns)) == n)


@pytest.mark.parametrize("m, n", _shapes(20))
def test_row_ubb_avoids_every_error_set(m, n):
    code = wreath_code(m, n)
    ubb = code.row_ubb()
    assert len(ubb) == code.capacity + 1
    assert ubb.find_uncovered_exhaustive(code.degree, code.capacity) is None
    for base in ubb.bases:
        assert code.chain.is_base(base)


@pytest.mark.parametrize("m, n", [(7, 3), (5, 6), (3, 12)])
def test_majority_decoder_operation_count(m, n, rng):
    code = wreath_code(m, n)
    for _ in range(20):
        g = code.chain.random_element(rng)
        stats = DecodeStats()
        assert code.decode_majority(add_errors(g, code.capacity, rng), stats) == g
        assert stats.votes == 2 * m * n
        assert stats.votes + stats.tallies <= 3 * m * n + n * n
        assert stats.reconstructions == 0


def test_ubb_decoder_reconstruction_budget(rng):
    code = wreath_code(5, 4)
    for _ in range(30):
        g = code.chain.random_element(rng)
        stats = DecodeStats()
        assert code.decode_ubb(add_errors(g, code.capacity, rng), stats) == g
        assert stats.reconstructions <= stats.bases_tried <= len(code.ubb())
