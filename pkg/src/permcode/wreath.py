"""
The wreath product C_m ≀ S_n acting on an m×n grid.

Point ``(i, j)`` (row ``i``, column ``j``, both 0-based) has index ``j·m + i``.
An element ``(h_0..h_{n-1}; σ)`` sends ``(i, j)`` to ``(i + h_{j·σ} mod m, j·σ)``:
column ``j`` moves to column ``j·σ`` and is rotated by the shift attached to
the destination column.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial
from typing import Dict, List, Optional, Tuple

import numpy as np

from .codes import UBB, DecodeFailure, DecodeStats, PermutationCode
from .perms import DTYPE, DegreeMismatchError, Permutation, Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WreathElement:
    shifts: Tuple[int, ...]
    column_perm: Permutation

    def __post_init__(self):
        if len(self.shifts) != self.column_perm.degree:
            raise ValueError(
                f"{len(self.shifts)} shifts for a column permutation "
                f"of degree {self.column_perm.degree}"
            )


def lehmer_unrank(index: int, n: int) -> Permutation:
    available = list(range(n))
    images = []
    for i in range(n):
        d, index = divmod(index, factorial(n - 1 - i))
        images.append(available.pop(d))
    return Permutation(images)


def lehmer_rank(sigma: Permutation) -> int:
    available = list(range(sigma.degree))
    index = 0
    for i, x in enumerate(sigma.images.tolist()):
        d = available.index(x)
        available.pop(d)
        index += d * factorial(sigma.degree - 1 - i)
    return index


class WreathCode(PermutationCode):
    family = "wreath"

    def __init__(self, m: int, n: int):
        if m < 2 or n < 1:
            raise ValueError(f"wreath code needs m >= 2 and n >= 1, got m={m}, n={n}")
        self.m = m
        self.n = n
        gens = [WreathElement((1,) + (0,) * (n - 1), Permutation.identity(n))]
        if n >= 2:
            gens.append(WreathElement((0,) * n, Permutation.from_cycles(n, [(0, 1)])))
        if n >= 3:
            gens.append(WreathElement((0,) * n, Permutation.from_cycles(n, [tuple(range(n))])))
        super().__init__(
            degree=m * n,
            generators=[self.to_permutation(e) for e in gens],
            order=m**n * factorial(n),
            minimal_degree=m,
        )

    def params(self) -> Dict[str, int]:
        return {"m": self.m, "n": self.n}

    def point(self, i: int, j: int) -> int:
        return j * self.m + i

    def coordinates(self, x: int) -> Tuple[int, int]:
        j, i = divmod(x, self.m)
        return i, j

    def to_permutation(self, e: WreathElement) -> Permutation:
        m, n = self.m, self.n
        if len(e.shifts) != n:
            raise ValueError(f"element has {len(e.shifts)} shifts, code has {n} columns")
        dest = e.column_perm.images.astype(np.int64)
        shift = np.asarray(e.shifts, dtype=np.int64)[dest] % m
        rows = np.arange(m)
        images = dest[:, None] * m + (rows[None, :] + shift[:, None]) % m
        return Permutation._wrap(images.reshape(-1).astype(DTYPE))

    def from_permutation(self, g: Permutation) -> Optional[WreathElement]:
        m, n = self.m, self.n
        if g.degree != m * n:
            raise DegreeMismatchError(f"degree {g.degree} does not match {m * n}")
        grid = g.images.astype(np.int64).reshape(n, m)
        dest = grid // m
        shift = (grid % m - np.arange(m)[None, :]) % m
        if (dest != dest[:, :1]).any() or (shift != shift[:, :1]).any():
            return None
        column_map = dest[:, 0]
        if np.unique(column_map).size != n:
            return None
        shifts = [0] * n
        for j in range(n):
            shifts[int(column_map[j])] = int(shift[j, 0])
        return WreathElement(tuple(shifts), Permutation(column_map))

    def row_ubb(self) -> UBB:
        """``r+1`` rows, each one point per column."""
        rows = range(self.capacity + 1)
        return UBB(tuple(tuple(self.point(t, j) for j in range(self.n)) for t in rows))

    @cached_property
    def _ubb(self) -> UBB:
        return self.row_ubb()

    def ubb(self) -> UBB:
        return self._ubb

    def decode_majority(self, word: Word, stats: Optional[DecodeStats] = None) -> Permutation:
        """
        Per column, vote for the cyclic shift and the destination column; the
        plurality of each must be strict and the destinations a permutation.
        """
        m, n = self.m, self.n
        if word.degree != m * n:
            raise DegreeMismatchError(f"word length {word.degree} does not match {m * n}")
        grid = word.symbols.astype(np.int64).reshape(n, m)
        shift_votes = (grid % m - np.arange(m)[None, :]) % m
        dest_votes = grid // m
        shifts = [0] * n
        column_map: List[int] = []
        for j in range(n):
            s = plurality(np.bincount(shift_votes[j], minlength=m))
            q = plurality(np.bincount(dest_votes[j], minlength=n))
            if stats is not None:
                stats.votes += 2 * m
                stats.tallies += m + n
            if s is None or q is None:
                raise DecodeFailure(f"plurality tie in column {j}")
            column_map.append(q)
            shifts[q] = s
        if len(set(column_map)) != n:
            raise DecodeFailure(f"columns claim the same destination: {column_map}")
        return self.to_permutation(WreathElement(tuple(shifts), Permutation(column_map)))

    def decode(self, word: Word, stats: Optional[DecodeStats] = None) -> Permutation:
        return self.decode_majority(word, stats)

    def encode_message(self, index: int) -> Permutation:
        """Shifts as ``n`` base-m digits, then the column permutation by Lehmer code."""
        if not 0 <= index < self.order:
            raise ValueError(f"message index {index} outside [0, {self.order})")
        shifts = []
        for _ in range(self.n):
            index, d = divmod(index, self.m)
            shifts.append(d)
        return self.to_permutation(WreathElement(tuple(shifts), lehmer_unrank(index, self.n)))

    def decode_message(self, g: Permutation) -> int:
        e = self.from_permutation(g)
        if e is None:
            raise ValueError("permutation is not an element of the wreath product")
        index = lehmer_rank(e.column_perm)
        for d in reversed(e.shifts):
            index = index * self.m + d
        return index


def plurality(counts: np.ndarray) -> Optional[int]:
    top = int(counts.argmax())
    if int((counts == counts[top]).sum()) > 1:
        return None
    return top


@lru_cache(maxsize=None)
def wreath_code(m: int, n: int) -> WreathCode:
    return WreathCode(m, n)


def to_permutation(code: WreathCode, e: WreathElement) -> Permutation:
    return code.to_permutation(e)


def from_permutation(code: WreathCode, g: Permutation) -> Optional[WreathElement]:
    return code.from_permutation(g)


def row_ubb(code: WreathCode) -> UBB:
    return code.row_ubb()


def decode_ubb(
    code: WreathCode, w: Word, stats: Optional[DecodeStats] = None
) -> Optional[Permutation]:
    return code.decode_ubb(w, stats)


def decode_majority(code: WreathCode, w: Word, stats: Optional[DecodeStats] = None) -> Permutation:
    return code.decode_majority(w, stats)
