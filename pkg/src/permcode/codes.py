"""
Permutation codes: a permutation group used as an error-correcting code.

``PermutationCode`` is the strategy interface shared by the code families
(:mod:`permcode.two_subsets`, :mod:`permcode.wreath`). It provides the generic
uncovering-by-bases decoder; families supply generators, order, minimal degree,
a UBB and their preferred decoder.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .perms import DTYPE, DegreeMismatchError, Permutation, Word, hamming_distance
from .stab_chain import StabilizerChain, build_chain

logger = logging.getLogger(__name__)


class DecodeFailure(RuntimeError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def add_errors(g: Permutation, r: int, rng: np.random.Generator) -> Word:
    """Replace ``r`` distinct uniformly chosen positions with a different uniform symbol."""
    n = g.degree
    symbols = g.images.copy()
    if r:
        if n < 2:
            raise ValueError("cannot introduce errors into a word of length < 2")
        positions = rng.choice(n, size=r, replace=False)
        symbols[positions] = (symbols[positions] + rng.integers(1, n, size=r)) % n
    return Word._wrap(symbols.astype(DTYPE))


@dataclass
class DecodeStats:
    """Operation counts for decoder audits."""

    bases_tried: int = 0
    reconstructions: int = 0
    votes: int = 0
    tallies: int = 0


@dataclass(frozen=True)
class UBB:
    """Uncovering-by-bases: every r-subset of positions misses some base."""

    bases: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.bases)

    def _masks(self) -> List[int]:
        return [sum(1 << p for p in base) for base in self.bases]

    def avoids(self, positions: Sequence[int]) -> bool:
        mask = sum(1 << p for p in set(positions))
        return any(b & mask == 0 for b in self._masks())

    def find_uncovered_exhaustive(self, degree: int, r: int) -> Optional[Tuple[int, ...]]:
        """First r-subset hit by every base, or None if the UBB property holds."""
        masks = self._masks()
        for subset in combinations(range(degree), r):
            mask = 0
            for p in subset:
                mask |= 1 << p
            if all(b & mask for b in masks):
                return subset
        return None

    def find_uncovered_sampled(
        self, degree: int, r: int, samples: int, rng: np.random.Generator
    ) -> Optional[Tuple[int, ...]]:
        masks = self._masks()
        for _ in range(samples):
            subset = tuple(sorted(int(p) for p in rng.choice(degree, size=r, replace=False)))
            mask = sum(1 << p for p in subset)
            if all(b & mask for b in masks):
                return subset
        return None


class PermutationCode:
    """
    Strategy interface for a permutation code.

    Subclasses set ``family``, ``degree``, ``generators``, ``order`` and
    ``minimal_degree`` and implement :meth:`ubb`. :meth:`decode` defaults to the
    UBB decoder and raises :class:`DecodeFailure` when it finds nothing.
    """

    family: str = ""

    def __init__(
        self, degree: int, generators: Sequence[Permutation], order: int, minimal_degree: int
    ):
        self.degree = degree
        self.generators = tuple(generators)
        self.order = order
        self.minimal_degree = minimal_degree

    @property
    def capacity(self) -> int:
        return (self.minimal_degree - 1) // 2

    def params(self) -> dict:
        raise NotImplementedError

    def ubb(self) -> UBB:
        raise NotImplementedError

    @cached_property
    def chain(self) -> StabilizerChain:
        rng = np.random.default_rng(0)
        return build_chain(list(self.generators), rng=rng, known_order=self.order)

    @cached_property
    def base_chains(self) -> Tuple[StabilizerChain, ...]:
        rng = np.random.default_rng(0)
        return tuple(self.chain.rebuild(rng, preferred_base=base) for base in self.ubb().bases)

    def contains(self, g: Permutation) -> bool:
        return self.chain.contains(g)

    def decode_ubb(self, word: Word, stats: Optional[DecodeStats] = None) -> Optional[Permutation]:
        """Uncovering-by-bases decoding: the unique codeword within ``capacity`` of ``word``."""
        if word.degree != self.degree:
            raise DegreeMismatchError(
                f"word length {word.degree} does not match degree {self.degree}"
            )
        stats = stats if stats is not None else DecodeStats()
        symbols = word.symbols
        for base, chain in zip(self.ubb().bases, self.base_chains):
            stats.bases_tried += 1
            if np.unique(symbols[list(base)]).size != len(base):
                continue
            stats.reconstructions += 1
            g = chain.element_reconstruction([int(symbols[b]) for b in chain.base])
            if g is not None and hamming_distance(g, word) <= self.capacity:
                return g
        return None

    def decode(self, word: Word, stats: Optional[DecodeStats] = None) -> Permutation:
        g = self.decode_ubb(word, stats)
        if g is None:
            raise DecodeFailure(f"no {self.family} codeword within distance {self.capacity}")
        return g
