"""
Linear codes embedded as permutation codes.

A vector ``v`` over ``Z_q`` (``q`` prime) of length ``n`` maps to the
block-diagonal permutation of degree ``qn`` that shifts block ``i``
(points ``qi .. qi+q-1``) cyclically by ``v[i]`` steps. The map is an injective
homomorphism and multiplies Hamming distances by ``q``. Errors on the
permutation side need not come from vectors, so a linear decoder cannot always
be pulled back: :func:`demo_error_pattern_caveat` shows both cases.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

from .perms import DTYPE, Permutation, Word, compose, hamming_distance

logger = logging.getLogger(__name__)

MAX_CODEWORDS = 1 << 16


class UnsupportedAlphabetError(ValueError):
    pass


def _check_alphabet(q: int) -> None:
    if not isprime(int(q)):
        raise UnsupportedAlphabetError(f"alphabet size {q} is not prime")


def _vector(q: int, v: Sequence[int]) -> np.ndarray:
    arr = np.asarray(v, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError(f"vector must be one-dimensional, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise ValueError(f"vector entries must lie in 0..{q - 1}: {arr.tolist()}")
    return arr


def embed_qary_vector(q: int, v: Sequence[int]) -> Permutation:
    """Block ``i`` shifted by ``v[i]``: point ``qi + t`` goes to ``qi + (t + v[i]) mod q``."""
    _check_alphabet(q)
    arr = _vector(q, v)
    t = np.arange(q, dtype=np.int64)
    images = q * np.arange(arr.size, dtype=np.int64)[:, None] + (t[None, :] + arr[:, None]) % q
    return Permutation._wrap(images.reshape(-1).astype(DTYPE))


def embed_binary_vector(v: Sequence[int]) -> Permutation:
    """Set bit ``i`` becomes the transposition ``(2i, 2i+1)``."""
    return embed_qary_vector(2, v)


def unembed(q: int, w: Union[Permutation, Word]) -> Optional[np.ndarray]:
    """Inverse of the embedding, or None if ``w`` is not a block-wise shift."""
    arr = w.images if isinstance(w, Permutation) else w.symbols
    if arr.size % q:
        return None
    blocks = arr.astype(np.int64).reshape(-1, q)
    base = q * np.arange(blocks.shape[0], dtype=np.int64)[:, None]
    local = blocks - base
    if ((local < 0) | (local >= q)).any():
        return None
    shifts = (local - np.arange(q)[None, :]) % q
    if (shifts != shifts[:, :1]).any():
        return None
    return shifts[:, 0].copy()


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    if not len(rows):
        return 0
    a = np.array(rows, dtype=np.int64) % p
    rank = 0
    for col in range(a.shape[1]):
        hits = np.flatnonzero(a[rank:, col]) + rank
        if hits.size == 0:
            continue
        a[[rank, hits[0]]] = a[[hits[0], rank]]
        a[rank] = (a[rank] * pow(int(a[rank, col]), -1, p)) % p
        for r in range(a.shape[0]):
            if r != rank and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[rank]) % p
        rank += 1
        if rank == a.shape[0]:
            break
    return rank


@dataclass(frozen=True)
class LinearCodeSpec:
    q: int
    n: int
    basis: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        _check_alphabet(self.q)
        for b in self.basis:
            if len(b) != self.n:
                raise ValueError(f"basis vector {list(b)} has length {len(b)}, expected {self.n}")
            _vector(self.q, b)
        if rank_mod_p(self.basis, self.q) != len(self.basis):
            raise ValueError(f"basis vectors are dependent over Z_{self.q}")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def codewords(self) -> np.ndarray:
        count = self.q**self.dimension
        if count > MAX_CODEWORDS:
            raise ValueError(f"{count} codewords exceed the enumeration limit {MAX_CODEWORDS}")
        if not self.basis:
            return np.zeros((1, self.n), dtype=np.int64)
        combos = itertools.product(range(self.q), repeat=self.dimension)
        coeffs = np.array(list(combos), dtype=np.int64)
        return (coeffs @ np.array(self.basis, dtype=np.int64)) % self.q

    def minimum_weight(self) -> Optional[int]:
        words = self.codewords()
        weights = np.count_nonzero(words, axis=1)
        nonzero = weights[weights > 0]
        return int(nonzero.min()) if nonzero.size else None

    def nearest_codeword(self, v: Sequence[int]) -> np.ndarray:
        words = self.codewords()
        distances = np.count_nonzero(words != np.asarray(v, dtype=np.int64)[None, :], axis=1)
        return words[int(distances.argmin())]


def code_spec_from_dict(data: Dict[str, Any]) -> LinearCodeSpec:
    basis = tuple(tuple(int(x) for x in b) for b in data.get("basis", []))
    return LinearCodeSpec(int(data["q"]), int(data["n"]), basis)


def read_code_spec(path: Union[str, Path]) -> LinearCodeSpec:
    with Path(path).open("r", encoding="utf-8") as fh:
        return code_spec_from_dict(json.load(fh))


def embed_code(spec: LinearCodeSpec) -> List[Permutation]:
    """Images of the basis vectors; they generate a group of order ``q^dimension``."""
    return [embed_qary_vector(spec.q, b) for b in spec.basis]


def embedded_minimal_degree(spec: LinearCodeSpec) -> Optional[int]:
    """Smallest support over the images of nonzero codewords (None for the zero code)."""
    best: Optional[int] = None
    for word in spec.codewords():
        if not word.any():
            continue
        g = embed_qary_vector(spec.q, word)
        moved = int(np.count_nonzero(g.images != np.arange(g.degree)))
        best = moved if best is None else min(best, moved)
    return best


@dataclass
class CaveatReport:
    codeword: List[int]
    structured_errors: List[int]
    structured_distance: int
    structured_decoded: bool
    unstructured_positions: List[int]
    unstructured_distance: int
    unstructured_pullback_defined: bool


def demo_error_pattern_caveat(
    spec: LinearCodeSpec, rng: np.random.Generator, errors: Optional[int] = None
) -> CaveatReport:
    """
    (a) A codeword hit by an embedded error vector of weight ``t``: pull back,
    decode linearly, re-embed; (b) the same codeword with one symbol moved into
    a foreign block: within the permutation code's capacity but outside the
    embedded group, so pulling back is undefined.
    """
    d = spec.minimum_weight()
    if d is None:
        raise ValueError("the zero code has no errors to correct")
    t = (d - 1) // 2 if errors is None else int(errors)
    q, n = spec.q, spec.n
    coeffs = rng.integers(0, q, size=spec.dimension)
    u = (coeffs @ np.array(spec.basis, dtype=np.int64)) % q
    g = embed_qary_vector(q, u)

    e = np.zeros(n, dtype=np.int64)
    if t:
        positions = rng.choice(n, size=t, replace=False)
        e[positions] = rng.integers(1, q, size=t)
    received = compose(g, embed_qary_vector(q, e))
    pulled = unembed(q, received)
    decoded = pulled is not None and np.array_equal(spec.nearest_codeword(pulled), u)
    if decoded and embed_qary_vector(q, spec.nearest_codeword(pulled)) != g:
        decoded = False

    symbols = g.images.copy()
    block = int(rng.integers(n))
    point = q * block + int(rng.integers(q))
    foreign = (block + 1) % n if n > 1 else block
    symbols[point] = q * foreign + int(rng.integers(q))
    if symbols[point] == g.images[point]:
        symbols[point] = q * foreign + (int(symbols[point]) - q * foreign + 1) % q
    witness = Word._wrap(symbols.astype(DTYPE))
    report = CaveatReport(
        codeword=u.tolist(),
        structured_errors=e.tolist(),
        structured_distance=hamming_distance(received, g),
        structured_decoded=bool(decoded),
        unstructured_positions=[point],
        unstructured_distance=hamming_distance(witness, g),
        unstructured_pullback_defined=unembed(q, witness) is not None,
    )
    logger.debug("caveat demo: %s", report)
    return report
