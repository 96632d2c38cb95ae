import itertools
from math import factorial

import numpy as np
import pytest
from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup

from permcode.perms import Permutation, compose, conjugate, inverse, random_permutation
from permcode.stab_chain import (
    IncompleteChainError,
    build_chain,
    centralizer_elements,
    centralizer_order,
    find_conjugating_element,
    minimal_block_system,
    sift,
)
from permcode.two_subsets import two_subset_code
from permcode.wreath import wreath_code


def _sympy_order(gens):
    return PermutationGroup([SymPermutation(g.images.tolist()) for g in gens]).order()


def test_order_matches_sympy_on_random_generators(rng):
    for degree in (4, 6, 8):
        for count in (1, 2, 3):
            gens = [random_permutation(degree, rng) for _ in range(count)]
            if all(g.is_identity() for g in gens):
                continue
            assert build_chain(gens).order() == _sympy_order(gens)


def test_known_order_completion_is_exact(rng):
    code = wreath_code(3, 4)
    chain = build_chain(list(code.generators), rng=rng, known_order=code.order)
    assert chain.order() == 3**4 * 24
    assert chain.order() == _sympy_order(code.generators)


def test_wrong_known_order_stalls(rng):
    gens = [Permutation.from_cycles(3, [(0, 1)]), Permutation.from_cycles(3, [(0, 1, 2)])]
    with pytest.raises(IncompleteChainError):
        build_chain(gens, rng=rng, known_order=12, stall_limit=16)


def test_membership_and_reconstruction(rng):
    chain = two_subset_code(5).chain
    for _ in range(20):
        g = chain.random_element(rng)
        assert chain.contains(g)
        assert chain.element_reconstruction(chain.base_images(g)) == g
    odd = Permutation.from_cycles(10, [(0, 1)])
    assert not chain.contains(odd)


def test_index_map_is_a_bijection():
    chain = wreath_code(2, 3).chain
    elements = [chain.index_to_element(i) for i in range(chain.order())]
    assert len(set(elements)) == chain.order() == 48
    for i, g in enumerate(elements):
        assert chain.element_to_index(g) == i
    assert chain.element_to_index(Permutation.from_cycles(6, [(0, 2)])) is None


def test_elements_array_enumerates_the_group():
    chain = wreath_code(2, 3).chain
    arr = chain.elements_array()
    assert arr.shape == (48, 6)
    assert len({row.tobytes() for row in arr}) == 48


def test_rebuild_respects_preferred_base(rng):
    chain = wreath_code(3, 3).chain
    fresh = chain.rebuild(rng, preferred_base=[8, 5, 2])
    assert fresh.order() == chain.order()
    assert fresh.base[:3] == (8, 5, 2)
    assert chain.is_base([0, 3, 6])
    assert not chain.is_base([0, 3])


def test_block_systems():
    blocks = minimal_block_system(list(wreath_code(3, 4).generators))
    assert blocks.block_size == 3
    assert sorted(blocks.blocks) == [(0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11)]
    assert minimal_block_system(list(two_subset_code(5).generators)).is_trivial()


def test_centralizer_enumeration_matches_order():
    h = Permutation.from_cycles(6, [(0, 1, 2), (3, 4)])
    assert centralizer_order(h) == 6
    elements = list(centralizer_elements(None, h))
    assert len(elements) == centralizer_order(h)
    for z in elements:
        assert compose(z, h) == compose(h, z)


def test_find_conjugating_element(rng):
    a = random_permutation(8, rng)
    g = random_permutation(8, rng)
    b = conjugate(a, g)
    z = find_conjugating_element(a, b)
    assert z is not None
    assert compose(compose(inverse(z), a), z) == b
    three_cycle = Permutation.from_cycles(8, [(0, 1, 2)])
    assert find_conjugating_element(three_cycle, Permutation.from_cycles(8, [(0, 1)])) is None


def test_element_digits_round_trip(rng):
    chain = two_subset_code(5).chain
    for _ in range(10):
        g = chain.random_element(rng)
        digits = chain.digits_of(g)
        assert digits is not None
        assert chain.element_from_digits(digits) == g
    assert np.prod(chain.radices) == 120


def _closure(gens):
    seen = {Permutation.identity(gens[0].degree)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@pytest.mark.parametrize(
    "cycles",
    [
        [[(0, 1, 2, 3)], [(0, 2)]],
        [[(0, 1)], [(2, 3, 4)]],
        [[(0, 1, 2)], [(1, 2, 3)]],
        [[(0, 1), (2, 3)], [(0, 2), (1, 3)]],
    ],
)
def test_sift_accepts_exactly_the_closure(cycles):
    gens = [Permutation.from_cycles(5, c) for c in cycles]
    chain = build_chain(gens)
    group = _closure(gens)
    assert chain.order() == len(group)
    for images in itertools.permutations(range(5)):
        g = Permutation(images)
        result = sift(chain, g)
        assert result.member == (g in group)
        if result.member:
            assert result.residue.is_identity()


def test_centralizer_times_class_is_group_order(rng):
    n = 5
    everything = [Permutation(p) for p in itertools.permutations(range(n))]
    for _ in range(10):
        h = random_permutation(n, rng)
        conjugacy_class = {conjugate(h, g) for g in everything}
        assert centralizer_order(h) * len(conjugacy_class) == factorial(n)
        assert len(list(centralizer_elements(None, h))) == centralizer_order(h)


def test_block_systems_follow_conjugation(rng):
    gens = list(wreath_code(3, 4).generators)
    columns = {frozenset(b) for b in minimal_block_system(gens).blocks}
    for _ in range(5):
        g = random_permutation(12, rng)
        moved = minimal_block_system([conjugate(h, g) for h in gens])
        expected = {frozenset(int(g.images[x]) for x in b) for b in columns}
        assert {frozenset(b) for b in moved.blocks} == expected
