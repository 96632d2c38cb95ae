"""Desk-scale self checks behind ``permcode verify``."""

from __future__ import annotations

import logging
import math
from itertools import combinations
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from . import analysis, attacks, cryptosystem, linear_embed, reduction
from .codes import DecodeFailure
from .config import Settings
from .perms import hamming_distance
from .stab_chain import IncompleteChainError
from .two_subsets import build_ubb, two_subset_code
from .wreath import wreath_code

logger = logging.getLogger(__name__)

Check = Tuple[bool, str]

KNOWN_THRESHOLDS = {0.95: 19, 0.90: 24, 0.80: 31, 0.50: 46}


def check_thresholds(rng: np.random.Generator, settings: Settings) -> Check:
    got = {level: analysis.decoding_threshold(5, 100, level) for level in KNOWN_THRESHOLDS}
    return got == KNOWN_THRESHOLDS, f"m=5 n=100 thresholds {got}"


def check_pattern_counts(rng: np.random.Generator, settings: Settings) -> Check:
    bad = []
    for m, n in [(3, 2), (3, 3), (5, 2)]:
        r = (m - 1) // 2
        for k in range(n * r + 1):
            expected = analysis.correctable_pattern_count(m, n, r, k)
            if expected != analysis.brute_force_pattern_count(m, n, k):
                bad.append((m, n, k))
    return not bad, f"mismatches {bad}" if bad else "E matches exhaustive counts for mn <= 10"


def _minimal_degree(code) -> int:
    elements = code.chain.elements_array()
    moved = np.count_nonzero(elements != np.arange(code.degree)[None, :], axis=1)
    return int(moved[moved > 0].min())


def check_minimal_degrees(rng: np.random.Generator, settings: Settings) -> Check:
    two = _minimal_degree(two_subset_code(5))
    wr = _minimal_degree(wreath_code(3, 3))
    return two == 6 and wr == 3, f"two-subsets m=5: {two}, wreath 3x3: {wr}"


def check_ubb(rng: np.random.Generator, settings: Settings) -> Check:
    limits = {"exhaustive_max_m": settings.ubb_exhaustive_max_m, "samples": settings.ubb_samples}
    sizes = {m: len(build_ubb(m, **limits)) for m in (5, 6, 7)}
    code = wreath_code(3, 4)
    witness = code.row_ubb().find_uncovered_exhaustive(code.degree, code.capacity)
    return witness is None, f"two-subsets UBB sizes {sizes}; wreath row UBB uncovered: {witness}"


def check_round_trips(rng: np.random.Generator, settings: Settings) -> Check:
    failures = 0
    trials = 0
    for family, params in [("wreath", {"m": 5, "n": 4}), ("two_subsets", {"m": 6})]:
        sk, pk = cryptosystem.keygen(family, params, rng, settings=settings)
        for _ in range(25):
            index = analysis.random_index(pk.message_space_size, rng)
            c = cryptosystem.encrypt(pk, index, rng, settings)
            trials += 1
            try:
                if cryptosystem.decrypt(sk, pk, c) != index:
                    failures += 1
            except DecodeFailure:
                failures += 1
    return failures == 0, f"{trials - failures}/{trials} round trips"


def check_isd_rate(rng: np.random.Generator, settings: Settings) -> Check:
    m, n, r, iterations = 5, 10, 2, 500
    _, pk = cryptosystem.keygen("wreath", {"m": m, "n": n}, rng, errors=r, settings=settings)
    c = cryptosystem.encrypt(pk, 0, rng, settings)
    hits = sum(
        1 for _ in range(iterations) if attacks.isd_iteration(pk.chain, c.word, r, rng) is not None
    )
    bound = float(analysis.isd_success_bound(m * n, n, r))
    margin = 2.576 * math.sqrt(bound * (1 - bound) / iterations)
    return hits / iterations >= bound - margin, f"rate {hits / iterations:.3f} vs bound {bound:.3f}"


def check_block_attack(rng: np.random.Generator, settings: Settings) -> Check:
    _, pk = cryptosystem.keygen("wreath", {"m": 5, "n": 20}, rng, errors=2, settings=settings)
    structure = attacks.analyze_block_structure(pk)
    wins = 0
    for _ in range(20):
        index = analysis.random_index(pk.message_space_size, rng)
        c = cryptosystem.encrypt(pk, index, rng, settings)
        report = attacks.block_system_attack(pk, c, structure)
        wins += report.success and report.recovered.get("message_index") == index
    return wins == 20, f"{wins}/20 plaintexts recovered from public data"


def check_reduction(rng: np.random.Generator, settings: Settings) -> Check:
    bad = 0
    for _ in range(10):
        inst = reduction.random_instance(int(rng.integers(2, 7)), int(rng.integers(1, 8)), rng)
        check = reduction.verify_reduction(inst)
        used = {v for clause in inst.clauses for v, _ in clause}
        bad += not check.ok or check.group_order != 2 ** len(used)
    return bad == 0, f"{10 - bad}/10 instances satisfy the 4k correspondence"


def check_security_curves(rng: np.random.Generator, settings: Settings) -> Check:
    worst = max(analysis.security_bits_two_subsets(m) for m in range(5, 1001))
    ns = list(range(10, 101, 10))
    df = analysis.security_wreath_curve([5, 7], ns, [0.95])
    earlier = True
    for b in df[df["m"] == 5]["bits"]:
        n7 = analysis.first_n_reaching(df, 7, b)
        earlier = earlier and n7 is not None and n7 <= analysis.first_n_reaching(df, 5, b)
    detail = f"two-subsets max {worst:.1f} bits; m=7 first to every level: {earlier}"
    return worst < 80 and earlier, detail


def check_embedding(rng: np.random.Generator, settings: Settings) -> Check:
    spec = linear_embed.LinearCodeSpec(2, 3, ((1, 1, 1),))
    words = spec.codewords()
    expanded = all(
        hamming_distance(linear_embed.embed_qary_vector(2, u), linear_embed.embed_qary_vector(2, v))
        == 2 * int(np.count_nonzero(u != v))
        for u, v in combinations(words, 2)
    )
    demo = linear_embed.demo_error_pattern_caveat(spec, rng)
    ok = expanded and demo.structured_decoded and not demo.unstructured_pullback_defined
    detail = f"distance expansion {expanded}; structured decoded {demo.structured_decoded}"
    return ok, detail + f"; unstructured pullback {demo.unstructured_pullback_defined}"


CHECKS: Dict[str, Callable[[np.random.Generator, Settings], Check]] = {
    "decoding thresholds": check_thresholds,
    "pattern count oracle": check_pattern_counts,
    "minimal degrees": check_minimal_degrees,
    "UBB avoidance": check_ubb,
    "cryptosystem round trip": check_round_trips,
    "ISD success bound": check_isd_rate,
    "block-system break": check_block_attack,
    "reduction correspondence": check_reduction,
    "security curves": check_security_curves,
    "linear embedding": check_embedding,
}


def run_verification(seed: int = 0, settings: Optional[Settings] = None) -> pd.DataFrame:
    settings = settings or Settings()
    rows: List[Dict[str, object]] = []
    streams = np.random.SeedSequence(seed).spawn(len(CHECKS))
    for (name, check), stream in zip(CHECKS.items(), streams):
        rng = np.random.default_rng(stream)
        try:
            passed, detail = check(rng, settings)
        except (DecodeFailure, IncompleteChainError, ValueError, RuntimeError) as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        logger.info("%s: %s (%s)", name, "PASS" if passed else "FAIL", detail)
        rows.append({"check": name, "result": "PASS" if passed else "FAIL", "detail": detail})
    return pd.DataFrame(rows, columns=["check", "result", "detail"])
