"""
Schreier-Sims stabilizer chains and related permutation-group routines.

A chain for ``G`` stores a base ``b_0..b_{k-1}``, and per level ``i`` the
fundamental orbit ``O_i = b_i·G^[i]`` with an explicit transversal mapping each
orbit point ``x`` to a representative ``u`` with ``b_i·u = x``.

Two construction modes are provided:

- deterministic Schreier-Sims (default), used whenever the order is unknown;
- completion by sifting random elements when the group order is known in
  advance. Reaching the known order proves the chain complete, so the result
  is exact; stalling raises :class:`IncompleteChainError`.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from math import factorial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .perms import (
    DTYPE,
    DegreeMismatchError,
    Permutation,
    compose,
    cycle_type,
    cycle_type_counts,
    cycles,
    inverse,
)

logger = logging.getLogger(__name__)


class IntransitiveGroupError(ValueError):
    pass


class EnumerationLimitError(RuntimeError):
    pass


class IncompleteChainError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ChainLevel:
    point: int
    orbit: Tuple[int, ...]
    transversal: Dict[int, Permutation]
    generators: Tuple[Permutation, ...]

    @property
    def orbit_array(self) -> np.ndarray:
        return np.fromiter(self.orbit, dtype=DTYPE, count=len(self.orbit))


@dataclass(frozen=True)
class SiftResult:
    member: bool
    residue: Permutation
    level: int


class _ProductReplacement:
    """Product-replacement random elements of ``<generators>``."""

    def __init__(
        self, generators: Sequence[Permutation], rng: np.random.Generator, scramble: int = 50
    ):
        self.rng = rng
        gens = list(generators)
        self.state = [gens[i % len(gens)] for i in range(max(10, len(gens)))]
        self.acc = Permutation.identity(gens[0].degree)
        for _ in range(scramble):
            self()

    def __call__(self) -> Permutation:
        k = len(self.state)
        i, j = self.rng.choice(k, size=2, replace=False)
        other = self.state[j] if self.rng.random() < 0.5 else inverse(self.state[j])
        if self.rng.random() < 0.5:
            self.state[i] = compose(self.state[i], other)
        else:
            self.state[i] = compose(other, self.state[i])
        self.acc = compose(self.acc, self.state[i])
        return self.acc


class _ChainBuilder:
    def __init__(self, degree: int, point_order: Sequence[int]):
        self.degree = degree
        self.point_order = list(point_order)
        self.identity = Permutation.identity(degree)
        self.points: List[int] = []
        self.gens: List[List[Permutation]] = []
        self.trans: List[Dict[int, Permutation]] = []
        self.checked: List[set] = []

    def add_level(self, point: int) -> None:
        self.points.append(point)
        self.gens.append([])
        self.trans.append({point: self.identity})
        self.checked.append(set())

    def new_base_point(self, g: Permutation) -> int:
        imgs = g.images
        for p in self.point_order:
            if imgs[p] != p:
                return p
        raise ValueError("identity has no moved point")

    def add_generator(self, level: int, g: Permutation) -> None:
        self.gens[level].append(g)
        trans = self.trans[level]
        gens = self.gens[level]
        frontier = []
        imgs = g.images
        for x, u in list(trans.items()):
            y = int(imgs[x])
            if y not in trans:
                trans[y] = compose(u, g)
                frontier.append(y)
        while frontier:
            x = frontier.pop()
            u = trans[x]
            for s in gens:
                y = int(s.images[x])
                if y not in trans:
                    trans[y] = compose(u, s)
                    frontier.append(y)

    def strip(self, g: Permutation, start: int = 0) -> Tuple[Permutation, int]:
        for i in range(start, len(self.points)):
            u = self.trans[i].get(int(g.images[self.points[i]]))
            if u is None:
                return g, i
            g = compose(g, inverse(u))
        return g, len(self.points)

    def order(self) -> int:
        result = 1
        for t in self.trans:
            result *= len(t)
        return result

    def _place(self, residue: Permutation, first: int, j: int) -> None:
        if j == len(self.points):
            self.add_level(self.new_base_point(residue))
        for level in range(first, j + 1):
            self.add_generator(level, residue)

    def schreier_sims(self, generators: Sequence[Permutation]) -> None:
        for g in generators:
            if all(g.images[b] == b for b in self.points):
                self.add_level(self.new_base_point(g))
        for g in generators:
            for level, b in enumerate(self.points):
                self.add_generator(level, g)
                if g.images[b] != b:
                    break
        i = len(self.points) - 1
        while i >= 0:
            j = self._check_level(i)
            i = i - 1 if j is None else j

    def _check_level(self, i: int) -> Optional[int]:
        trans = self.trans[i]
        done = self.checked[i]
        for x, u in list(trans.items()):
            for k, s in enumerate(self.gens[i]):
                if (x, k) in done:
                    continue
                y = int(s.images[x])
                h = compose(compose(u, s), inverse(trans[y]))
                if not h.is_identity():
                    residue, j = self.strip(h, i + 1)
                    if not residue.is_identity():
                        self._place(residue, i + 1, j)
                        return j
                done.add((x, k))
        return None

    def random_fill(self, sample: Callable[[], Permutation], target: int, stall_limit: int) -> None:
        stall = 0
        while self.order() < target:
            residue, j = self.strip(sample())
            if residue.is_identity():
                stall += 1
                if stall >= stall_limit:
                    raise IncompleteChainError(
                        f"chain stalled at order {self.order()} below expected {target}"
                    )
                continue
            stall = 0
            self._place(residue, 0, j)
        if self.order() != target:
            raise ValueError(f"group order {self.order()} exceeds the declared order {target}")

    def finish(self) -> "StabilizerChain":
        levels = []
        strong: Dict[bytes, Permutation] = {}
        for point, gens, trans in zip(self.points, self.gens, self.trans):
            for g in gens:
                strong.setdefault(g.images.tobytes(), g)
            if len(trans) == 1:
                continue
            levels.append(
                ChainLevel(
                    point=point,
                    orbit=tuple(trans.keys()),
                    transversal=dict(trans),
                    generators=tuple(gens),
                )
            )
        return StabilizerChain(
            degree=self.degree, levels=tuple(levels), strong_generators=tuple(strong.values())
        )


def _point_order(degree: int, preferred_base: Optional[Sequence[int]], rng) -> List[int]:
    preferred: List[int] = []
    for p in preferred_base or ():
        p = int(p)
        if not 0 <= p < degree:
            raise ValueError(f"base point {p} outside 0..{degree - 1}")
        if p not in preferred:
            preferred.append(p)
    rest = [p for p in range(degree) if p not in set(preferred)]
    if rng is not None:
        rest = [rest[i] for i in rng.permutation(len(rest))]
    return preferred + rest


def _build(
    generators: Sequence[Permutation],
    preferred_base: Optional[Sequence[int]],
    rng: Optional[np.random.Generator],
    known_order: Optional[int],
    sampler: Optional[Callable[[], Permutation]],
    stall_limit: int,
) -> "StabilizerChain":
    if not generators:
        raise ValueError("build_chain needs at least one generator")
    degree = generators[0].degree
    for g in generators:
        if g.degree != degree:
            raise DegreeMismatchError(f"generator degrees differ: {g.degree} vs {degree}")
    unique = dict((g.images.tobytes(), g) for g in generators)
    gens = [g for g in unique.values() if not g.is_identity()]
    builder = _ChainBuilder(degree, _point_order(degree, preferred_base, rng))
    for p in builder.point_order[: len(set(preferred_base or ()))]:
        builder.add_level(p)
    if gens:
        if known_order is not None:
            if sampler is None:
                sampler = _ProductReplacement(
                    gens, rng if rng is not None else np.random.default_rng(0)
                )
            builder.random_fill(sampler, known_order, stall_limit)
        else:
            builder.schreier_sims(gens)
    elif known_order not in (None, 1):
        raise IncompleteChainError(f"trivial generators cannot reach order {known_order}")
    chain = builder.finish()
    logger.debug("built chain: degree=%d base=%s order=%d", degree, list(chain.base), chain.order())
    return chain


def build_chain(
    generators: Sequence[Permutation],
    preferred_base: Optional[Sequence[int]] = None,
    rng: Optional[np.random.Generator] = None,
    known_order: Optional[int] = None,
    stall_limit: int = 64,
) -> "StabilizerChain":
    """
    Build a stabilizer chain for ``<generators>``.

    Parameters
    ----------
    preferred_base:
        Points that start the base, in order; redundant ones are dropped.
    rng:
        Shuffles the order in which further base points are chosen, and drives
        random sifting when ``known_order`` is given. ``None`` keeps natural order.
    known_order:
        Exact order of the group, if known. Enables completion by random sifting.
    """
    return _build(generators, preferred_base, rng, known_order, None, stall_limit)


@dataclass(frozen=True, eq=False)
class StabilizerChain:
    degree: int
    levels: Tuple[ChainLevel, ...]
    strong_generators: Tuple[Permutation, ...]

    @property
    def base(self) -> Tuple[int, ...]:
        return tuple(level.point for level in self.levels)

    @property
    def radices(self) -> Tuple[int, ...]:
        return tuple(len(level.orbit) for level in self.levels)

    def order(self) -> int:
        result = 1
        for r in self.radices:
            result *= r
        return result

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def sift(self, g: Permutation) -> SiftResult:
        if g.degree != self.degree:
            raise DegreeMismatchError(f"degree mismatch: {g.degree} vs {self.degree}")
        for i, level in enumerate(self.levels):
            u = level.transversal.get(int(g.images[level.point]))
            if u is None:
                return SiftResult(False, g, i)
            g = compose(g, inverse(u))
        return SiftResult(g.is_identity(), g, len(self.levels))

    def contains(self, g: Permutation) -> bool:
        return self.sift(g).member

    def base_images(self, g: Permutation) -> List[int]:
        return [int(g.images[b]) for b in self.base]

    def element_reconstruction(self, images: Sequence[int]) -> Optional[Permutation]:
        """The unique ``g`` with ``b_i·g = images[i]``, or ``None`` if there is none."""
        if len(images) != len(self.levels):
            raise ValueError(f"expected {len(self.levels)} images, got {len(images)}")
        xs = [int(x) for x in images]
        g = self.identity()
        for i, level in enumerate(self.levels):
            u = level.transversal.get(xs[i])
            if u is None:
                return None
            uinv = inverse(u).images
            for j in range(i + 1, len(xs)):
                xs[j] = int(uinv[xs[j]])
            g = compose(u, g)
        return g

    def random_element(self, rng: np.random.Generator) -> Permutation:
        g = self.identity()
        for level in self.levels:
            u = level.transversal[level.orbit[int(rng.integers(len(level.orbit)))]]
            g = compose(u, g)
        return g

    def rebuild(
        self, rng: np.random.Generator, preferred_base: Optional[Sequence[int]] = None
    ) -> "StabilizerChain":
        """Same group on a fresh base: ``preferred_base`` first, then rng-shuffled points."""
        if not self.levels:
            return self
        return _build(
            list(self.strong_generators),
            preferred_base,
            rng,
            self.order(),
            lambda: self.random_element(rng),
            stall_limit=64,
        )

    def is_base(self, points: Sequence[int]) -> bool:
        """True if the pointwise stabilizer of ``points`` is trivial."""
        if not self.levels:
            return True
        rebuilt = self.rebuild(np.random.default_rng(0), preferred_base=points)
        return set(rebuilt.base) <= {int(p) for p in points}

    def element_from_digits(self, digits: Sequence[int]) -> Permutation:
        """
        Canonical element for a digit tuple: digit ``i`` picks the image of ``b_i``
        by rank among its admissible images, given the earlier choices.
        """
        if len(digits) != len(self.levels):
            raise ValueError(f"expected {len(self.levels)} digits, got {len(digits)}")
        u = self.identity()
        images = []
        for level, d in zip(self.levels, digits):
            cand = np.sort(u.images[level.orbit_array])
            if not 0 <= d < cand.size:
                raise ValueError(f"digit {d} out of range for orbit of size {cand.size}")
            x = int(cand[d])
            images.append(x)
            u = compose(level.transversal[int(inverse(u).images[x])], u)
        g = self.element_reconstruction(images)
        assert g is not None
        return g

    def digits_of(self, g: Permutation) -> Optional[List[int]]:
        u = self.identity()
        digits = []
        for level in self.levels:
            x = int(g.images[level.point])
            cand = np.sort(u.images[level.orbit_array])
            d = int(np.searchsorted(cand, x))
            if d >= cand.size or cand[d] != x:
                return None
            digits.append(d)
            u = compose(level.transversal[int(inverse(u).images[x])], u)
        return digits if u == g else None

    def index_to_element(self, index: int) -> Permutation:
        if not 0 <= index < self.order():
            raise ValueError(f"index {index} outside [0, {self.order()})")
        digits = []
        for r in self.radices:
            index, d = divmod(index, r)
            digits.append(d)
        return self.element_from_digits(digits)

    def element_to_index(self, g: Permutation) -> Optional[int]:
        digits = self.digits_of(g)
        if digits is None:
            return None
        index = 0
        for d, r in zip(reversed(digits), reversed(self.radices)):
            index = index * r + d
        return index

    def elements_array(self, limit: int = 10**7) -> np.ndarray:
        """All group elements as rows of image arrays."""
        if self.order() > limit:
            raise EnumerationLimitError(f"group order {self.order()} exceeds limit {limit}")
        arr = np.arange(self.degree, dtype=DTYPE)[None, :]
        for level in reversed(self.levels):
            arr = np.concatenate([u.images[arr] for u in level.transversal.values()])
        return arr

    def elements(self, limit: int = 10**7) -> Iterator[Permutation]:
        for row in self.elements_array(limit):
            yield Permutation._wrap(row)


def order(chain: StabilizerChain) -> int:
    return chain.order()


def sift(chain: StabilizerChain, g: Permutation) -> SiftResult:
    return chain.sift(g)


def element_reconstruction(chain: StabilizerChain, images: Sequence[int]) -> Optional[Permutation]:
    return chain.element_reconstruction(images)


def orbit(generators: Sequence[Permutation], point: int) -> List[int]:
    seen = {point}
    todo = [point]
    imgs = [g.images for g in generators]
    while todo:
        x = todo.pop()
        for im in imgs:
            y = int(im[x])
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return sorted(seen)


@dataclass(frozen=True)
class BlockSystem:
    blocks: Tuple[Tuple[int, ...], ...]

    @property
    def block_size(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0

    def is_trivial(self) -> bool:
        return len(self.blocks) <= 1 or self.block_size == 1

    def block_index(self) -> Dict[int, int]:
        return {x: i for i, block in enumerate(self.blocks) for x in block}


def _finest_joining(images: List[List[int]], a: int, b: int, n: int) -> List[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parent[find(b)] = find(a)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        for im in images:
            u, v = find(im[x]), find(im[y])
            if u != v:
                parent[v] = u
                queue.append((u, v))
    return [find(x) for x in range(n)]


def _as_blocks(labels: Sequence[int]) -> BlockSystem:
    groups: Dict[int, List[int]] = defaultdict(list)
    for x, lab in enumerate(labels):
        groups[lab].append(x)
    return BlockSystem(tuple(sorted(tuple(v) for v in groups.values())))


def minimal_block_system(generators: Sequence[Permutation]) -> BlockSystem:
    """
    Coarsest nontrivial block system of a transitive group, found by seeding
    every pair ``{0, y}`` and keeping the largest resulting block. Primitive
    groups get the all-singletons system.
    """
    n = generators[0].degree
    if len(orbit(generators, 0)) != n:
        raise IntransitiveGroupError("block systems are only computed for transitive groups")
    images = [g.images.tolist() for g in generators]
    best: Optional[List[int]] = None
    best_size = 1
    for y in range(1, n):
        if best is not None and best[y] == best[0]:
            continue
        labels = _finest_joining(images, 0, y, n)
        size = labels.count(labels[0])
        if size < n and size > best_size:
            best, best_size = labels, size
    if best is None:
        return BlockSystem(tuple((x,) for x in range(n)))
    return _as_blocks(best)


def centralizer_order(h: Permutation) -> int:
    """Size of the centralizer of ``h`` in the full symmetric group."""
    result = 1
    for length, count in cycle_type_counts(h).items():
        result *= length**count * factorial(count)
    return result


def _length_class_maps(cycs: List[List[int]]) -> Iterator[Tuple[List[int], List[int]]]:
    length = len(cycs[0])
    for perm in itertools.permutations(range(len(cycs))):
        for rots in itertools.product(range(length), repeat=len(cycs)):
            src: List[int] = []
            dst: List[int] = []
            for t, (target, rot) in enumerate(zip(perm, rots)):
                src.extend(cycs[t])
                dst.extend(cycs[target][(s + rot) % length] for s in range(length))
            yield src, dst


def centralizer_elements(
    chain: Optional[StabilizerChain], h: Permutation, limit: int = 12
) -> Iterator[Permutation]:
    """
    Lazily yield ``{z : z^{-1} h z = h}`` inside the ambient group of ``chain``
    (the full symmetric group when ``chain`` is None), walking cycle-structure
    preserving maps.
    """
    if h.degree > limit:
        raise EnumerationLimitError(
            f"degree {h.degree} exceeds centralizer enumeration limit {limit}"
        )
    by_length: Dict[int, List[List[int]]] = defaultdict(list)
    for c in cycles(h):
        by_length[len(c)].append(c)
    classes = [by_length[k] for k in sorted(by_length)]
    z = np.arange(h.degree, dtype=DTYPE)

    def walk(idx: int) -> Iterator[Permutation]:
        if idx == len(classes):
            yield Permutation._wrap(z.copy())
            return
        for src, dst in _length_class_maps(classes[idx]):
            z[src] = dst
            yield from walk(idx + 1)

    for candidate in walk(0):
        if chain is None or chain.contains(candidate):
            yield candidate


def find_conjugating_element(a: Permutation, b: Permutation) -> Optional[Permutation]:
    """Some ``z`` with ``z^{-1} a z = b``, or ``None`` when cycle types differ."""
    if a.degree != b.degree:
        raise DegreeMismatchError(f"degree mismatch: {a.degree} vs {b.degree}")
    if cycle_type(a) != cycle_type(b):
        return None
    ca = sorted(cycles(a), key=len)
    cb = sorted(cycles(b), key=len)
    z = np.empty(a.degree, dtype=DTYPE)
    for x, y in zip(ca, cb):
        z[x] = y
    return Permutation._wrap(z)
