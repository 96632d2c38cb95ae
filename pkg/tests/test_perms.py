import numpy as np
import pytest

from permcode.perms import (
    DegreeMismatchError,
    InvalidPermutationError,
    Permutation,
    Word,
    apply_to_word,
    compose,
    conjugate,
    cycle_type,
    hamming_distance,
    inverse,
    order_of,
    power,
    random_permutation,
    support,
)


def test_right_action_composition():
    g = Permutation.from_cycles(3, [(0, 1)])
    h = Permutation.from_cycles(3, [(1, 2)])
    gh = compose(g, h)
    # 0·g = 1, 1·h = 2
    assert gh(0) == 2
    for x in range(3):
        assert gh(x) == h(g(x))
    assert g * h == gh


def test_inverse_and_power(rng):
    g = random_permutation(9, rng)
    assert compose(g, inverse(g)).is_identity()
    assert power(g, order_of(g)).is_identity()
    assert power(g, -1) == inverse(g)
    assert power(g, 3) == g * g * g


def test_conjugate_matches_definition(rng):
    h = random_permutation(7, rng)
    g = random_permutation(7, rng)
    assert conjugate(h, g) == inverse(g) * h * g
    assert cycle_type(conjugate(h, g)) == cycle_type(h)


def test_one_based_list_form():
    g = Permutation.from_list([2, 3, 1])
    assert g(0) == 1 and g(2) == 0
    assert g.to_list() == [2, 3, 1]
    w = Word.from_list([1, 1, 3])
    assert w.to_list() == [1, 1, 3]
    assert not w.is_permutation()


def test_invalid_inputs():
    with pytest.raises(InvalidPermutationError):
        Permutation([0, 0, 1])
    with pytest.raises(InvalidPermutationError):
        Permutation([0, 3, 1])
    with pytest.raises(ValueError):
        Word([0, 5])
    with pytest.raises(DegreeMismatchError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_hamming_distance_and_support():
    g = Permutation.from_cycles(5, [(0, 1, 2)])
    assert hamming_distance(g, Permutation.identity(5)) == 3
    assert support(g) == {0, 1, 2}
    w = Word([1, 2, 2, 3, 4])
    assert hamming_distance(w, g) == 1


def test_cycle_type_and_order():
    g = Permutation.from_cycles(7, [(0, 1), (2, 3, 4)])
    assert cycle_type(g) == (3, 2, 1, 1)
    assert order_of(g) == 6


def test_apply_to_word_is_symbolwise():
    g = Permutation.from_cycles(4, [(0, 3)])
    w = Word([0, 0, 1, 3])
    assert apply_to_word(w, g).to_list() == [4, 4, 2, 1]


def test_images_are_read_only():
    g = Permutation.identity(4)
    with pytest.raises(ValueError):
        g.images[0] = 2
    assert np.array_equal(g.images, np.arange(4))


def test_hamming_metric_axioms(rng):
    for _ in range(50):
        g, h, k = (random_permutation(8, rng) for _ in range(3))
        assert hamming_distance(g, g) == 0
        assert hamming_distance(g, h) == hamming_distance(h, g)
        assert hamming_distance(g, k) <= hamming_distance(g, h) + hamming_distance(h, k)
        if g != h:
            assert hamming_distance(g, h) >= 2


def test_hamming_distance_is_right_invariant(rng):
    for _ in range(50):
        g, h, k = (random_permutation(10, rng) for _ in range(3))
        assert hamming_distance(compose(g, k), compose(h, k)) == hamming_distance(g, h)
        assert hamming_distance(conjugate(g, k), conjugate(h, k)) == hamming_distance(g, h)


def test_random_permutation_is_seeded():
    a = [random_permutation(12, np.random.default_rng(5)) for _ in range(3)]
    assert a[0] == a[1] == a[2]
    assert random_permutation(12, np.random.default_rng(6)) != a[0]


def test_random_permutation_is_uniform_on_s3(rng):
    draws = 6000
    counts = {}
    for _ in range(draws):
        key = tuple(random_permutation(3, rng).to_list())
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 6
    expected = draws / 6
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # 5 degrees of freedom, p = 0.001
    assert chi2 < 20.52
