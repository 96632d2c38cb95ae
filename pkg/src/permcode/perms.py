"""
List-form permutations and words with the Hamming metric.

Conventions
-----------
Permutations act on the right: ``x·(gh) = (x·g)·h``. Points are 0-based inside
the library; the 1-based list form only appears at the serialization boundary
(:meth:`Permutation.to_list`, :meth:`Permutation.from_list`).
"""

from __future__ import annotations

import logging
from collections import Counter
from math import gcd
from typing import Iterable, List, Sequence, Set, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

DTYPE = np.int32

CycleType = Tuple[int, ...]


class DegreeMismatchError(ValueError):
    pass


class InvalidPermutationError(ValueError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class Permutation:
    """Immutable bijection of ``{0..n-1}`` stored as its image array."""

    __slots__ = ("_images",)

    def __init__(self, images: Iterable[int], *, check: bool = True):
        arr = np.array(list(images) if not isinstance(images, np.ndarray) else images, dtype=DTYPE)
        if arr.ndim != 1:
            raise InvalidPermutationError(f"images must be one-dimensional, got shape {arr.shape}")
        if check:
            n = arr.size
            seen = np.zeros(n, dtype=bool)
            if n and (arr.min() < 0 or arr.max() >= n):
                raise InvalidPermutationError(f"images out of range 0..{n - 1}: {arr.tolist()}")
            seen[arr] = True
            if not seen.all():
                raise InvalidPermutationError(f"images are not a bijection: {arr.tolist()}")
        self._images = _frozen(arr)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Permutation":
        obj = cls.__new__(cls)
        obj._images = _frozen(arr.astype(DTYPE, copy=False))
        return obj

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._wrap(np.arange(n, dtype=DTYPE))

    @classmethod
    def from_list(cls, images: Sequence[int]) -> "Permutation":
        """Parse the 1-based list form ``[1·g, 2·g, ..., n·g]``."""
        return cls(np.asarray(images, dtype=np.int64) - 1)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 0-based disjoint cycles, e.g. ``[(0, 1), (2, 3)]``."""
        arr = np.arange(n, dtype=DTYPE)
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                arr[a] = b
        return cls(arr)

    @property
    def images(self) -> np.ndarray:
        return self._images

    @property
    def degree(self) -> int:
        return int(self._images.size)

    def __call__(self, x: int) -> int:
        return int(self._images[x])

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, e: int) -> "Permutation":
        return power(self, e)

    def inverse(self) -> "Permutation":
        return inverse(self)

    def is_identity(self) -> bool:
        return bool((self._images == np.arange(self.degree)).all())

    def to_list(self) -> List[int]:
        return (self._images.astype(np.int64) + 1).tolist()

    def as_word(self) -> "Word":
        return Word._wrap(self._images)

    def cycles(self) -> List[List[int]]:
        return cycles(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and bool(np.array_equal(self._images, other._images))

    def __hash__(self) -> int:
        return hash(self._images.tobytes())

    def __repr__(self) -> str:
        cyc = [c for c in cycles(self) if len(c) > 1]
        if not cyc:
            return f"Permutation(id, degree={self.degree})"
        body = "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)
        return f"Permutation({body}, degree={self.degree})"


class Word:
    """A length-n list of symbols from ``{0..n-1}``; repeats allowed."""

    __slots__ = ("_symbols",)

    def __init__(self, symbols: Iterable[int]):
        if not isinstance(symbols, np.ndarray):
            symbols = list(symbols)
        arr = np.array(symbols, dtype=DTYPE)
        n = arr.size
        if arr.ndim != 1:
            raise ValueError(f"symbols must be one-dimensional, got shape {arr.shape}")
        if n and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"word symbols out of range 0..{n - 1}: {arr.tolist()}")
        self._symbols = _frozen(arr)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Word":
        obj = cls.__new__(cls)
        obj._symbols = _frozen(np.array(arr, dtype=DTYPE))
        return obj

    @classmethod
    def from_list(cls, symbols: Sequence[int]) -> "Word":
        return cls(np.asarray(symbols, dtype=np.int64) - 1)

    @property
    def symbols(self) -> np.ndarray:
        return self._symbols

    @property
    def degree(self) -> int:
        return int(self._symbols.size)

    def __len__(self) -> int:
        return self.degree

    def __getitem__(self, x: int) -> int:
        return int(self._symbols[x])

    def to_list(self) -> List[int]:
        return (self._symbols.astype(np.int64) + 1).tolist()

    def is_permutation(self) -> bool:
        return np.unique(self._symbols).size == self.degree

    def to_permutation(self) -> Permutation:
        return Permutation(self._symbols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return bool(np.array_equal(self._symbols, other._symbols))

    def __hash__(self) -> int:
        return hash(self._symbols.tobytes())

    def __repr__(self) -> str:
        return f"Word({self.to_list()})"


PointList = Union[Permutation, Word]


def _array(x: PointList) -> np.ndarray:
    return x.images if isinstance(x, Permutation) else x.symbols


def _check_degrees(g: PointList, h: PointList) -> None:
    if g.degree != h.degree:
        raise DegreeMismatchError(f"degree mismatch: {g.degree} vs {h.degree}")


def compose(g: Permutation, h: Permutation) -> Permutation:
    """Product ``gh`` with ``x·(gh) = (x·g)·h``."""
    _check_degrees(g, h)
    return Permutation._wrap(h.images[g.images])


def inverse(g: Permutation) -> Permutation:
    inv = np.empty_like(g.images)
    inv[g.images] = np.arange(g.degree, dtype=DTYPE)
    return Permutation._wrap(inv)


def power(g: Permutation, e: int) -> Permutation:
    base = g if e >= 0 else inverse(g)
    e = abs(e)
    result = Permutation.identity(g.degree)
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def conjugate(h: Permutation, g: Permutation) -> Permutation:
    """Return ``g^{-1} h g``."""
    return compose(compose(inverse(g), h), g)


def apply_to_word(w: Word, g: Permutation) -> Word:
    """Symbol-wise image ``[w[0]·g, ..., w[n-1]·g]``."""
    _check_degrees(w, g)
    return Word._wrap(g.images[w.symbols])


def hamming_distance(a: PointList, b: PointList) -> int:
    _check_degrees(a, b)
    return int(np.count_nonzero(_array(a) != _array(b)))


def support(g: Permutation) -> Set[int]:
    return set(np.flatnonzero(g.images != np.arange(g.degree)).tolist())


def fixed_points(g: Permutation) -> Set[int]:
    return set(np.flatnonzero(g.images == np.arange(g.degree)).tolist())


def cycles(g: Permutation) -> List[List[int]]:
    """Disjoint cycles including fixed points, each starting at its smallest point."""
    seen = [False] * g.degree
    imgs = g.images.tolist()
    out = []
    for start in range(g.degree):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = imgs[x]
        out.append(cyc)
    return out


def cycle_type(g: Permutation) -> CycleType:
    """Cycle lengths in nonincreasing order, fixed points counted as 1s."""
    return tuple(sorted((len(c) for c in cycles(g)), reverse=True))


def cycle_type_counts(g: Permutation) -> Counter:
    return Counter(len(c) for c in cycles(g))


def order_of(g: Permutation) -> int:
    result = 1
    for length in set(cycle_type(g)):
        result = result * length // gcd(result, length)
    return result


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    return Permutation._wrap(rng.permutation(n).astype(DTYPE))
