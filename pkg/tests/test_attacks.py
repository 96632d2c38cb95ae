import json
import math

import pytest

from permcode import analysis, attacks
from permcode.cryptosystem import encrypt, keygen
from permcode.perms import Permutation, conjugate, cycle_type
from permcode.two_subsets import induced_action, two_subset_code


def _isd_hits(pk, rng, iterations):
    c = encrypt(pk, analysis.random_index(pk.message_space_size, rng), rng)
    hits = 0
    for _ in range(iterations):
        hits += attacks.isd_iteration(pk.chain, c.word, pk.r, rng) is not None
    return hits


def _isd_rate(pk, rng, iterations):
    return _isd_hits(pk, rng, iterations) / iterations


def _two_proportion_z(hits_a, hits_b, trials):
    pooled = (hits_a + hits_b) / (2 * trials)
    spread = math.sqrt(pooled * (1 - pooled) * 2 / trials)
    return (hits_a - hits_b) / (trials * spread)


def _isd_floor(iterations):
    bound = float(analysis.isd_success_bound(50, 10, 2))
    return bound - 2.576 * math.sqrt(bound * (1 - bound) / iterations)


def _assert_isd_bound(pk, rng, iterations):
    assert _isd_rate(pk, rng, iterations) >= _isd_floor(iterations)


def test_isd_iteration_meets_success_bound(rng):
    _, pk = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2)
    _assert_isd_bound(pk, rng, 400)


def _compare_hidden_and_plain(rng, iterations):
    _, hidden = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2)
    identity = Permutation.identity(50)
    _, plain = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2, conjugator=identity)
    hidden_hits = _isd_hits(hidden, rng, iterations)
    plain_hits = _isd_hits(plain, rng, iterations)
    assert min(hidden_hits, plain_hits) / iterations >= _isd_floor(iterations)
    # two-sided, 1% level
    assert abs(_two_proportion_z(hidden_hits, plain_hits, iterations)) < 2.576


def test_isd_rate_does_not_depend_on_the_conjugator(rng):
    _compare_hidden_and_plain(rng, 1000)


@pytest.mark.slow
def test_isd_rate_does_not_depend_on_the_conjugator_at_scale(rng):
    _compare_hidden_and_plain(rng, 10**4)


@pytest.mark.slow
def test_isd_iteration_meets_success_bound_at_scale(rng):
    _, pk = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2)
    _assert_isd_bound(pk, rng, 10**4)


def test_isd_attack_recovers_and_is_reproducible(rng):
    _, pk = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2)
    index = analysis.random_index(pk.message_space_size, rng)
    c = encrypt(pk, index, rng)
    first = attacks.isd_attack(pk, c, seed=11, max_iterations=300)
    second = attacks.isd_attack(pk, c, seed=11, max_iterations=300)
    assert first.success and first.recovered["message_index"] == index
    assert first.iterations == second.iterations
    threaded = attacks.isd_attack(pk, c, seed=11, max_iterations=300, threads=3)
    assert threaded.success and threaded.recovered["message_index"] == index


def test_isd_attack_respects_budget(rng):
    _, pk = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2)
    c = encrypt(pk, 0, rng)
    report = attacks.isd_attack(pk, c, seed=1, max_iterations=0)
    assert not report.success and report.iterations == 0


def test_block_attack_breaks_the_wreath_family(rng):
    _, pk = keygen("wreath", {"m": 5, "n": 20}, rng, errors=2)
    structure = attacks.analyze_block_structure(pk)
    assert structure.block_count == 20 and structure.block_size == 5
    for _ in range(500):
        index = analysis.random_index(pk.message_space_size, rng)
        report = attacks.block_system_attack(pk, encrypt(pk, index, rng), structure)
        assert report.success
        assert report.recovered["message_index"] == index


def test_block_attack_needs_imprimitivity(rng):
    _, pk = keygen("two_subsets", {"m": 5}, rng)
    with pytest.raises(attacks.AttackInapplicable):
        attacks.analyze_block_structure(pk)


def test_cycle_type_pullbacks():
    h = induced_action(5, Permutation.from_cycles(5, [(0, 1)]))
    reps = attacks.cycle_type_pullbacks(5, h)
    assert any(cycle_type(r) == (2, 1, 1, 1) for r in reps)
    for r in reps:
        assert cycle_type(induced_action(5, r)) == cycle_type(h)


def test_conjugator_search_recovers_an_equivalent_key(rng):
    _, pk = keygen("two_subsets", {"m": 5}, rng)
    index = analysis.random_index(pk.message_space_size, rng)
    c = encrypt(pk, index, rng)
    report = attacks.conjugator_search_attack(pk, ciphertext=c)
    assert report.success
    assert report.recovered["message_index"] == index
    g = Permutation.from_list(report.recovered["conjugator"])
    ambient = two_subset_code(5).chain
    for h, p in zip(report.recovered["generators"], pk.generators):
        private = Permutation.from_list(h)
        assert ambient.contains(private)
        assert conjugate(private, g) == p
    assert report.recovered["order"] == 120


def test_conjugator_search_with_identity_key(rng):
    _, pk = keygen("two_subsets", {"m": 5}, rng, conjugator=Permutation.identity(10))
    report = attacks.conjugator_search_attack(pk)
    assert report.success
    assert report.iterations == 1


def test_conjugator_search_limits(rng):
    _, wreath_pk = keygen("wreath", {"m": 3, "n": 3}, rng)
    with pytest.raises(attacks.AttackInapplicable):
        attacks.conjugator_search_attack(wreath_pk)
    _, big = keygen("two_subsets", {"m": 6}, rng)
    with pytest.raises(attacks.GroupTooLargeError):
        attacks.conjugator_search_attack(big)


def test_brute_force_attacks(rng):
    _, pk = keygen("two_subsets", {"m": 5}, rng)
    index = analysis.random_index(pk.message_space_size, rng)
    c = encrypt(pk, index, rng)
    enum = attacks.brute_force_enumerate(pk, c)
    assert enum.success and enum.recovered["message_index"] == index
    assert enum.recovered["min_distance"] == pk.r
    assert enum.iterations == 120
    ball = attacks.brute_force_ball(pk, c)
    assert ball.success and ball.recovered["message_index"] == index
    assert ball.iterations <= attacks.ball_size(10, 2)


def test_brute_force_limits(rng):
    _, pk = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2)
    c = encrypt(pk, 0, rng)
    with pytest.raises(attacks.GroupTooLargeError):
        attacks.brute_force_enumerate(pk, c)


def test_run_attack_dispatch_and_report(rng):
    _, pk = keygen("wreath", {"m": 3, "n": 4}, rng)
    c = encrypt(pk, 5, rng)
    report = attacks.run_attack("block", pk, c, seed=3)
    assert report.seed == 3 and report.success
    data = json.loads(report.to_json())
    assert set(data) == {"attack", "success", "iterations", "seed", "elapsed_ms", "recovered"}
    with pytest.raises(ValueError):
        attacks.run_attack("isd", pk, None, seed=0)
    with pytest.raises(ValueError):
        attacks.run_attack("psychic", pk, c, seed=0)


def test_cost_estimates(rng):
    _, pk = keygen("wreath", {"m": 5, "n": 10}, rng, errors=2)
    est = attacks.estimate_isd_cost(pk)
    assert est.n == 50 and est.k_max == 10.0 and est.bits > 0
    assert attacks.estimate_conjugator_search_cost(pk) > 0
