from fractions import Fraction
from math import comb

import pandas as pd
import pytest

from permcode import analysis


@pytest.mark.parametrize("level, expected", [(0.95, 19), (0.90, 24), (0.80, 31), (0.50, 46)])
def test_decoding_thresholds_for_m5_n100(level, expected):
    assert analysis.decoding_threshold(5, 100, level) == expected


def _pattern_shapes(max_points, quick_limit=50_000):
    """Every wreath shape with mn <= max_points; large enumerations run as slow tests."""
    shapes = []
    for m in range(2, max_points + 1):
        for n in range(1, max_points // m + 1):
            r = (m - 1) // 2
            work = sum(comb(m * n, k) for k in range(n * r + 1))
            marks = [pytest.mark.slow] if work > quick_limit else []
            shapes.append(pytest.param(m, n, marks=marks, id=f"m{m}-n{n}"))
    return shapes


@pytest.mark.parametrize("m, n", _pattern_shapes(20))
def test_pattern_count_matches_exhaustive_count(m, n):
    r = (m - 1) // 2
    for k in range(0, n * r + 1):
        expected = analysis.correctable_pattern_count(m, n, r, k)
        assert expected == analysis.brute_force_pattern_count(m, n, k)


def test_pattern_count_edge_cases():
    assert analysis.correctable_pattern_count(5, 10, 2, 0) == 1
    # every single error is correctable
    assert analysis.correctable_pattern_count(5, 10, 2, 1) == 50
    assert analysis.correctable_pattern_count(5, 10, 2, 21) == 0
    assert analysis.success_probability(5, 10, 2, 2) == Fraction(comb(50, 2), comb(50, 2))


def test_partitions_respect_bounds():
    parts = list(analysis.enumerate_partitions(5, 3, 2))
    assert {p.multiplicities for p in parts} == {(1, 2)}
    for p in analysis.enumerate_partitions(6, 4, 3):
        assert p.total == 6 and p.part_count <= 4


def test_isd_exponent():
    assert analysis.isd_exponent(100, 10, 0) == 0.0
    alpha = analysis.isd_exponent(500, 100, 19)
    assert 0 < alpha < analysis.binary_entropy(19 / 500)
    # more errors than positions outside the base saturates
    assert analysis.isd_exponent(20, 15, 8) == pytest.approx(analysis.binary_entropy(8 / 20))
    assert analysis.isd_success_bound(50, 10, 2) == Fraction(comb(40, 2), comb(50, 2))


def test_two_subsets_security_stays_small():
    worst = max(analysis.security_bits_two_subsets(m) for m in range(5, 1001))
    assert worst < 80


def test_wreath_security_grows_faster_for_larger_m():
    ns = list(range(10, 101, 10))
    df = analysis.security_wreath_curve([5, 7], ns, [0.95])
    for bits in df[df["m"] == 5]["bits"]:
        assert analysis.first_n_reaching(df, 7, bits) <= analysis.first_n_reaching(df, 5, bits)


def test_parse_range():
    assert analysis.parse_range("5") == [5]
    assert analysis.parse_range("3:6") == [3, 4, 5, 6]
    assert analysis.parse_range("10:50:20") == [10, 30, 50]
    with pytest.raises(ValueError):
        analysis.parse_range("1:5:0")


@pytest.mark.parametrize("kind", sorted(analysis.CURVES))
def test_emit_curves_writes_header(kind, tmp_path, rng):
    out = tmp_path / analysis.CURVES[kind]
    df = analysis.emit_security_curves(
        kind, out, ms=[5], ns=[2, 3], levels=[0.9], trials=5, rng=rng
    )
    written = pd.read_csv(out)
    assert list(written.columns) == list(df.columns)
    assert len(written) == len(df) > 0


def test_emit_rejects_unknown_kind(tmp_path):
    with pytest.raises(ValueError):
        analysis.emit_security_curves("nope", tmp_path / "x.csv")


def test_simulation_agrees_within_capacity(rng):
    assert analysis.simulate_decoding_rate(5, 6, 2, 50, rng) == 50


def test_key_size_comparison():
    row = analysis.key_size_comparison(5, 100)
    assert row["public_bits"] == 5 * 500 * 9
    assert row["linear_bits"] > row["public_bits"]


def test_random_index_in_range(rng):
    big = 10**40
    for _ in range(100):
        assert 0 <= analysis.random_index(big, rng) < big
