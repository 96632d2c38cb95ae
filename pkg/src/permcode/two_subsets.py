"""
The symmetric group S_m acting on the 2-subsets of ``{0..m-1}``.

Points are the ``n = m(m-1)/2`` pairs ``{i, j}``, ``i < j``, indexed in
lexicographic order. The induced group has minimal degree ``2(m-2)`` and
corrects ``m-3`` errors. Its UBB is built from V-graphs: spanning subgraphs of
the Hamiltonian cycles of a Walecki decomposition of K_m with every third edge
removed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .codes import UBB, DecodeStats, PermutationCode
from .perms import DTYPE, Permutation, Word
from .stab_chain import StabilizerChain, build_chain

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def pair_count(m: int) -> int:
    return m * (m - 1) // 2


@lru_cache(maxsize=None)
def pairs(m: int) -> Tuple[Edge, ...]:
    return tuple(combinations(range(m), 2))


@lru_cache(maxsize=None)
def _index_table(m: int) -> np.ndarray:
    table = np.full((m, m), -1, dtype=DTYPE)
    for k, (i, j) in enumerate(pairs(m)):
        table[i, j] = table[j, i] = k
    table.setflags(write=False)
    return table


def point_index(m: int, i: int, j: int) -> int:
    if i == j:
        raise ValueError(f"a 2-subset needs distinct points, got {{{i}, {j}}}")
    return int(_index_table(m)[i, j])


def induced_action(m: int, g: Permutation) -> Permutation:
    """Setwise action ``{i, j}·g = {i·g, j·g}`` on the indexed 2-subsets."""
    if g.degree != m:
        raise ValueError(f"natural permutation has degree {g.degree}, expected {m}")
    ij = np.array(pairs(m), dtype=DTYPE).reshape(-1, 2)
    return Permutation._wrap(_index_table(m)[g.images[ij[:, 0]], g.images[ij[:, 1]]])


@dataclass(frozen=True)
class HamiltonianDecomposition:
    cycles: Tuple[Tuple[int, ...], ...]
    matching: Tuple[Edge, ...] = ()

    def edges(self) -> List[Edge]:
        out = [tuple(sorted(e)) for c in self.cycles for e in cycle_edges(c)]
        return out + [tuple(sorted(e)) for e in self.matching]


def cycle_edges(cycle: Sequence[int]) -> List[Edge]:
    return [(cycle[t], cycle[(t + 1) % len(cycle)]) for t in range(len(cycle))]


def _zigzag(i: int, size: int) -> List[int]:
    path = [i % size]
    t = 1
    while len(path) < size:
        path.append((i + t) % size)
        if len(path) < size:
            path.append((i - t) % size)
        t += 1
    return path


def walecki_decomposition(m: int) -> HamiltonianDecomposition:
    """
    Edge-disjoint Hamiltonian cycles of K_m (zig-zag construction).

    Odd m: ``(m-1)/2`` cycles through the hub ``m-1``. Even m: the odd
    decomposition of K_{m-1} with vertex ``m-1`` spliced into the middle edge of
    every zig-zag path; the spliced-out edges plus ``{m-2, m-1}`` form the
    perfect matching.
    """
    if m < 3:
        raise ValueError(f"Walecki decomposition needs m >= 3, got {m}")
    if m % 2 == 1:
        size = m - 1
        hub = m - 1
        cycles = tuple((hub, *_zigzag(i, size)) for i in range(size // 2))
        return HamiltonianDecomposition(cycles)
    size = m - 2
    hub, extra = m - 2, m - 1
    half = size // 2
    cycles = []
    matching: List[Edge] = [(hub, extra)]
    for i in range(half):
        path = _zigzag(i, size)
        matching.append((path[half - 1], path[half]))
        cycles.append((hub, *path[:half], extra, *path[half:]))
    return HamiltonianDecomposition(tuple(cycles), tuple(matching))


def _is_vgraph(m: int, edges: Sequence[Edge]) -> bool:
    deg = [0] * m
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    if sum(1 for d in deg if d == 0) > 1:
        return False
    return not any(deg[a] == 1 and deg[b] == 1 for a, b in edges)


def vgraph_bases(
    m: int, cycle: Sequence[int], chain: Optional[StabilizerChain] = None
) -> List[Tuple[int, ...]]:
    """
    Bases obtained from a Hamiltonian cycle by deleting every third edge.

    Deletion starts at offsets 0, 1, 2 and, when ``m`` is not a multiple of 3,
    also at the trailing positions so that every cycle edge is deleted by some
    V-graph. Each candidate is checked as a V-graph and as a base of the
    induced group.
    """
    if len(cycle) != m or sorted(cycle) != list(range(m)):
        raise ValueError(f"not a Hamiltonian cycle of K_{m}: {list(cycle)}")
    chain = chain if chain is not None else two_subset_code(m).chain
    edges = cycle_edges(cycle)
    q = m // 3
    out: List[Tuple[int, ...]] = []
    for offset in [0, 1, 2] + list(range(3 * q, m)):
        if offset >= m:
            continue
        deleted = {(offset + 3 * j) % m for j in range(q)}
        kept = [e for t, e in enumerate(edges) if t not in deleted]
        if not _is_vgraph(m, kept):
            continue
        base = tuple(sorted(point_index(m, a, b) for a, b in kept))
        if base in out:
            continue
        if not chain.is_base(base):
            logger.debug("V-graph %s is not a base; skipped", kept)
            continue
        out.append(base)
    return out


def build_ubb(
    m: int,
    chain: Optional[StabilizerChain] = None,
    exhaustive_max_m: int = 8,
    samples: int = 10**5,
) -> UBB:
    """V-graph UBB correcting ``m-3`` errors; the avoidance property is verified."""
    if m < 5:
        raise ValueError(f"UBB construction needs m >= 5, got {m}")
    chain = chain if chain is not None else two_subset_code(m).chain
    bases: List[Tuple[int, ...]] = []
    for cycle in walecki_decomposition(m).cycles:
        for base in vgraph_bases(m, cycle, chain):
            if base not in bases:
                bases.append(base)
    ubb = UBB(tuple(bases))
    r = m - 3
    n = pair_count(m)
    if m <= exhaustive_max_m:
        witness = ubb.find_uncovered_exhaustive(n, r)
    else:
        witness = ubb.find_uncovered_sampled(n, r, samples, np.random.default_rng(m))
    if witness is not None:
        raise RuntimeError(f"UBB for m={m} fails to avoid the {r}-subset {witness}")
    logger.debug("UBB for m=%d: %d bases", m, len(ubb))
    return ubb


def standard_generators(m: int) -> Tuple[Permutation, Permutation]:
    transposition = Permutation.from_cycles(m, [(0, 1)])
    long_cycle = Permutation.from_cycles(m, [tuple(range(m))])
    return transposition, long_cycle


class TwoSubsetCode(PermutationCode):
    family = "two_subsets"

    def __init__(self, m: int, natural_generators: Optional[Sequence[Permutation]] = None):
        if m < 5:
            raise ValueError(f"two-subsets code needs m >= 5 to have a UBB decoder, got {m}")
        self.m = m
        natural = tuple(natural_generators) if natural_generators else standard_generators(m)
        if natural_generators:
            group_order = build_chain(list(natural)).order()
        else:
            group_order = factorial(m)
        self.natural_generators = natural
        super().__init__(
            degree=pair_count(m),
            generators=[induced_action(m, g) for g in natural],
            order=group_order,
            minimal_degree=2 * (m - 2),
        )

    def params(self) -> Dict[str, int]:
        return {"m": self.m}

    @cached_property
    def _ubb(self) -> UBB:
        return build_ubb(self.m, chain=self.chain)

    def ubb(self) -> UBB:
        return self._ubb

    def pair(self, point: int) -> Tuple[int, int]:
        return pairs(self.m)[point]


@lru_cache(maxsize=None)
def two_subset_code(
    m: int, natural_generators: Optional[Tuple[Permutation, ...]] = None
) -> TwoSubsetCode:
    return TwoSubsetCode(m, natural_generators)


def decode_ubb(
    code: TwoSubsetCode, w: Word, stats: Optional[DecodeStats] = None
) -> Optional[Permutation]:
    return code.decode_ubb(w, stats)
