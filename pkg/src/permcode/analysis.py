"""
Combinatorial security analysis.

- Counting the error patterns the majority decoder of C_m ≀ S_n corrects:
  ``E_{n,r}(k) = Σ_π Π_i C(n - c_i, f_i) · C(m, i)^{f_i}`` over partitions ``π``
  of ``k`` into at most ``n`` parts of size at most ``r``.
- Information-set-decoding cost exponent
  ``α(k, r) = H2(r/n) - (1 - k/n) · H2(r/(n-k))`` and bit-security estimates.
- CSV emission of decoding, threshold and security curves.

Counts and ratios are exact (``int`` / ``Fraction``); floats only appear in
emitted tables.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from sympy.utilities.iterables import partitions as sympy_partitions

from .codes import DecodeFailure, add_errors
from .perms import Permutation, Word
from .wreath import WreathElement, wreath_code

logger = logging.getLogger(__name__)

DECODING_CURVE_COLUMNS = ["m", "n", "k", "E_numerator_digits", "ratio"]
THRESHOLD_CURVE_COLUMNS = ["m", "n", "prob_level", "max_k", "error_rate"]
SECURITY_WREATH_COLUMNS = ["m", "n", "prob_level", "r_star", "alpha", "bits"]
SECURITY_TWO_SUBSETS_COLUMNS = ["m", "bits"]
SIMULATION_COLUMNS = ["m", "n", "k", "trials", "successes", "rate"]
KEY_SIZE_COLUMNS = ["m", "n", "public_bits", "linear_bits"]


@dataclass(frozen=True)
class Partition:
    """Multiplicities ``f_1..f_r``: ``f_i`` parts of size ``i``."""

    multiplicities: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(i * f for i, f in enumerate(self.multiplicities, start=1))

    @property
    def part_count(self) -> int:
        return sum(self.multiplicities)

    def offsets(self) -> Tuple[int, ...]:
        """``c_i = Σ_{j<i} f_j`` for each part size ``i``."""
        out = []
        acc = 0
        for f in self.multiplicities:
            out.append(acc)
            acc += f
        return tuple(out)

    def parts(self) -> List[int]:
        sizes = range(len(self.multiplicities), 0, -1)
        return [i for i in sizes for _ in range(self.multiplicities[i - 1])]


@dataclass(frozen=True)
class SecurityEstimate:
    n: int
    k_max: float
    r: int
    alpha: float
    bits: float
    saturated: bool = False


@lru_cache(maxsize=None)
def _partitions(k: int, n: int, r: int) -> Tuple[Partition, ...]:
    if k == 0:
        return (Partition((0,) * r),)
    if n < 1 or r < 1 or k > n * r:
        return ()
    out = []
    for p in sympy_partitions(k, m=n, k=r):
        out.append(Partition(tuple(p.get(i, 0) for i in range(1, r + 1))))
    return tuple(out)


def enumerate_partitions(k: int, n: int, r: int) -> Iterator[Partition]:
    """Partitions of ``k`` into at most ``n`` parts, each of size at most ``r``."""
    if min(k, n, r) < 0:
        raise ValueError(f"k, n, r must be nonnegative, got {(k, n, r)}")
    return iter(_partitions(k, n, r))


def correctable_pattern_count(m: int, n: int, r: int, k: int) -> int:
    if k > n * r:
        logger.warning("k=%d exceeds n·r=%d; no pattern is correctable", k, n * r)
        return 0
    total = 0
    for p in enumerate_partitions(k, n, r):
        term = 1
        for i, (f, c) in enumerate(zip(p.multiplicities, p.offsets()), start=1):
            term *= comb(n - c, f) * comb(m, i) ** f
        total += term
    return total


def brute_force_pattern_count(m: int, n: int, k: int) -> int:
    """
    Error position sets of size ``k`` the majority decoder survives when every
    error pushes its symbol one row down inside its own column. That assignment
    makes all errors in a column agree, so it is the worst case and the count
    matches :func:`correctable_pattern_count`.
    """
    code = wreath_code(m, n)
    identity = code.to_permutation(WreathElement((0,) * n, Permutation.identity(n)))
    points = np.arange(m * n)
    bumped = (points // m) * m + (points % m + 1) % m
    successes = 0
    for positions in combinations(range(m * n), k):
        symbols = points.copy()
        idx = list(positions)
        symbols[idx] = bumped[idx]
        try:
            if code.decode_majority(Word(symbols)) == identity:
                successes += 1
        except DecodeFailure:
            pass
    return successes


def success_probability(m: int, n: int, r: int, k: int) -> Fraction:
    if not 0 <= k <= m * n:
        raise ValueError(f"k={k} outside [0, {m * n}]")
    return Fraction(correctable_pattern_count(m, n, r, k), comb(m * n, k))


def _level(level: Union[float, str, Fraction]) -> Fraction:
    return level if isinstance(level, Fraction) else Fraction(str(level))


def decoding_threshold(
    m: int, n: int, level: Union[float, str, Fraction], r: Optional[int] = None
) -> int:
    """Largest ``k`` such that every ``k' <= k`` decodes with probability ``>= level``."""
    r = (m - 1) // 2 if r is None else r
    target = _level(level)
    k = 0
    while k < m * n and success_probability(m, n, r, k + 1) >= target:
        k += 1
    return k


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def isd_saturated(n: int, k: float, r: int) -> bool:
    return r > n - k


def isd_exponent(n: int, k: float, r: int) -> float:
    """
    ``α(k, r)``; when ``r > n - k`` no base can avoid the errors and the value
    saturates at ``H2(r/n)``.
    """
    if r == 0 or k <= 0:
        return 0.0
    if isd_saturated(n, k, r):
        logger.warning("ISD exponent saturated: r=%d > n-k=%.3f", r, n - k)
        return binary_entropy(r / n)
    return binary_entropy(r / n) - (1 - k / n) * binary_entropy(r / (n - k))


def isd_success_bound(n: int, k_max: int, r: int) -> Fraction:
    """Lower bound ``C(n - k_max, r) / C(n, r)`` on one ISD iteration succeeding."""
    return Fraction(comb(n - k_max, r), comb(n, r))


def security_estimate(n: int, k_max: float, r: int) -> SecurityEstimate:
    alpha = isd_exponent(n, k_max, r)
    saturated = isd_saturated(n, k_max, r)
    return SecurityEstimate(n=n, k_max=k_max, r=r, alpha=alpha, bits=alpha * n, saturated=saturated)


def security_bits_two_subsets(m: int) -> float:
    if m < 5:
        raise ValueError(f"two-subsets security needs m >= 5, got {m}")
    n = m * (m - 1) // 2
    return security_estimate(n, m * math.log2(m), m - 3).bits


def security_wreath(
    m: int, n: int, level: Union[float, str, Fraction]
) -> Tuple[int, SecurityEstimate]:
    """Errors decodable at ``level`` and the ISD estimate with ``k_max = n``."""
    r_star = decoding_threshold(m, n, level)
    return r_star, security_estimate(m * n, n, r_star)


def simulate_decoding_rate(m: int, n: int, k: int, trials: int, rng: np.random.Generator) -> int:
    """Successful majority decodes out of ``trials`` random codewords with ``k`` random errors."""
    code = wreath_code(m, n)
    successes = 0
    for _ in range(trials):
        g = code.encode_message(random_index(code.order, rng))
        try:
            if code.decode_majority(add_errors(g, k, rng)) == g:
                successes += 1
        except DecodeFailure:
            pass
    return successes


def random_index(bound: int, rng: np.random.Generator) -> int:
    """Uniform integer in ``[0, bound)`` for arbitrarily large ``bound``."""
    bits = bound.bit_length()
    while True:
        value = int.from_bytes(rng.bytes((bits + 7) // 8), "big") >> (8 * ((bits + 7) // 8) - bits)
        if value < bound:
            return value


def key_size_comparison(m: int, n: int, generators: int = 5) -> Dict[str, int]:
    """
    Public key bits of the wreath scheme (``generators`` permutations of degree
    ``mn``) against a systematic binary generator matrix carrying the same
    number of message bits over words of the same bit length.
    """
    degree = m * n
    symbol_bits = max(1, math.ceil(math.log2(degree)))
    length = degree * symbol_bits
    dimension = int(math.floor(n * math.log2(m) + math.lgamma(n + 1) / math.log(2)))
    return {
        "m": m,
        "n": n,
        "public_bits": generators * length,
        "linear_bits": dimension * max(0, length - dimension),
    }


def parse_range(spec: str) -> List[int]:
    """``"a:b:step"`` (inclusive), ``"a:b"`` or ``"a"``."""
    parts = [int(x) for x in spec.split(":")]
    if len(parts) == 1:
        return parts
    start, stop = parts[0], parts[1]
    step = parts[2] if len(parts) > 2 else 1
    if step <= 0:
        raise ValueError(f"range step must be positive, got {step}")
    return list(range(start, stop + 1, step))


def decoding_curve(ms: Sequence[int], ns: Sequence[int]) -> pd.DataFrame:
    rows = []
    for m in ms:
        r = (m - 1) // 2
        for n in ns:
            for k in range(0, n * r + 1):
                e = correctable_pattern_count(m, n, r, k)
                ratio = float(Fraction(e, comb(m * n, k)))
                rows.append({"m": m, "n": n, "k": k, "E_numerator_digits": str(e), "ratio": ratio})
    return pd.DataFrame(rows, columns=DECODING_CURVE_COLUMNS)


def threshold_curve(ms: Sequence[int], ns: Sequence[int], levels: Sequence[float]) -> pd.DataFrame:
    rows = []
    for m in ms:
        for n in ns:
            for level in levels:
                max_k = decoding_threshold(m, n, level)
                rate = max_k / (m * n)
                rows.append(
                    {"m": m, "n": n, "prob_level": level, "max_k": max_k, "error_rate": rate}
                )
    return pd.DataFrame(rows, columns=THRESHOLD_CURVE_COLUMNS)


def security_wreath_curve(
    ms: Sequence[int], ns: Sequence[int], levels: Sequence[float]
) -> pd.DataFrame:
    rows = []
    for m in ms:
        for n in ns:
            for level in levels:
                r_star, est = security_wreath(m, n, level)
                rows.append(
                    {
                        "m": m,
                        "n": n,
                        "prob_level": level,
                        "r_star": r_star,
                        "alpha": est.alpha,
                        "bits": est.bits,
                    }
                )
    return pd.DataFrame(rows, columns=SECURITY_WREATH_COLUMNS)


def security_two_subsets_curve(ms: Iterable[int]) -> pd.DataFrame:
    rows = [{"m": m, "bits": security_bits_two_subsets(m)} for m in ms]
    return pd.DataFrame(rows, columns=SECURITY_TWO_SUBSETS_COLUMNS)


def simulated_curve(
    ms: Sequence[int], ns: Sequence[int], trials: int, rng: np.random.Generator
) -> pd.DataFrame:
    rows = []
    for m in ms:
        r = (m - 1) // 2
        for n in ns:
            for k in range(0, n * r + 1):
                ok = simulate_decoding_rate(m, n, k, trials, rng)
                rows.append(
                    {"m": m, "n": n, "k": k, "trials": trials, "successes": ok, "rate": ok / trials}
                )
    return pd.DataFrame(rows, columns=SIMULATION_COLUMNS)


def key_size_curve(ms: Sequence[int], ns: Sequence[int]) -> pd.DataFrame:
    rows = [key_size_comparison(m, n) for m in ms for n in ns]
    return pd.DataFrame(rows, columns=KEY_SIZE_COLUMNS)


CURVES = {
    "decoding-curve": "decoding_curve.csv",
    "threshold-curve": "threshold_curve.csv",
    "security-wreath": "security_wreath.csv",
    "security-two-subsets": "security_two_subsets.csv",
    "simulated-curve": "decoding_simulation.csv",
    "key-size": "key_size.csv",
}


def emit_security_curves(
    kind: str,
    out_path: Union[str, Path],
    ms: Sequence[int] = (),
    ns: Sequence[int] = (),
    levels: Sequence[float] = (0.95,),
    trials: int = 200,
    rng: Optional[np.random.Generator] = None,
) -> pd.DataFrame:
    """Compute one curve family and write it as CSV (header always present)."""
    if kind == "decoding-curve":
        df = decoding_curve(ms, ns)
    elif kind == "threshold-curve":
        df = threshold_curve(ms, ns, levels)
    elif kind == "security-wreath":
        df = security_wreath_curve(ms, ns, levels)
    elif kind == "security-two-subsets":
        df = security_two_subsets_curve(ms)
    elif kind == "simulated-curve":
        df = simulated_curve(ms, ns, trials, rng if rng is not None else np.random.default_rng(0))
    elif kind == "key-size":
        df = key_size_curve(ms, ns)
    else:
        raise ValueError(f"unknown curve kind {kind!r}; expected one of {sorted(CURVES)}")
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(out, index=False, lineterminator="\n")
    logger.info("wrote %d rows to %s", len(df), out)
    return df


def first_n_reaching(df: pd.DataFrame, m: int, bits: float) -> Optional[int]:
    """Smallest ``n`` in a security-wreath table whose estimate for ``m`` reaches ``bits``."""
    rows = df[(df["m"] == m) & (df["bits"] >= bits)]
    return int(rows["n"].min()) if len(rows) else None
