"""
Attacks on the conjugation cryptosystem using public data only.

- ``brute_force_enumerate``: nearest element of ``Ĥ`` by full enumeration.
- ``brute_force_ball``: sift every permutation within distance ``r`` of the ciphertext.
- ``isd_attack``: information set decoding; random bases until one avoids the errors.
- ``block_system_attack``: relabel ``Ĥ`` through its block system and majority-decode
  as the private key holder would (breaks the wreath family).
- ``conjugator_search_attack``: recover a conjugator into the induced ``S_m`` image
  by walking the centralizer of one public generator (two-subsets family).

Every report's ``success`` is decided by :func:`verify_recovery`, never by the
attack itself.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from sympy.utilities.iterables import partitions as sympy_partitions

from .analysis import SecurityEstimate, security_estimate
from .codes import DecodeFailure
from .config import Settings
from .cryptosystem import Ciphertext, PublicKey, pull_back_word, verify_plaintext
from .perms import (
    DTYPE,
    Permutation,
    Word,
    compose,
    conjugate,
    cycle_type,
    hamming_distance,
    inverse,
    support,
)
from .stab_chain import (
    BlockSystem,
    EnumerationLimitError,
    StabilizerChain,
    build_chain,
    centralizer_elements,
    centralizer_order,
    find_conjugating_element,
    minimal_block_system,
)
from .two_subsets import induced_action, two_subset_code
from .wreath import plurality

logger = logging.getLogger(__name__)


class AttackInapplicable(RuntimeError):
    pass


class GroupTooLargeError(RuntimeError):
    pass


@dataclass
class AttackReport:
    attack: str
    success: bool
    iterations: int
    seed: Optional[int] = None
    elapsed_ms: float = 0.0
    recovered: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _Timer:
    def __enter__(self) -> "_Timer":
        self.start = time.perf_counter()
        self.ms = 0.0
        return self

    def __exit__(self, *exc) -> None:
        self.ms = (time.perf_counter() - self.start) * 1000.0


def verify_recovery(pk: PublicKey, h: Permutation, c: Ciphertext) -> Optional[int]:
    """Message index when ``h ∈ Ĥ``, ``d(h, c) ≤ r`` and the checksum matches."""
    if hamming_distance(h, c.word) > pk.r:
        return None
    return verify_plaintext(pk, h, c)


def _plaintext(pk: PublicKey, h: Permutation, c: Ciphertext) -> Tuple[bool, Dict[str, Any]]:
    index = verify_recovery(pk, h, c)
    payload: Dict[str, Any] = {"distance": hamming_distance(h, c.word), "plaintext": h.to_list()}
    if index is not None:
        payload["message_index"] = index
    return index is not None, payload


def brute_force_enumerate(
    pk: PublicKey, c: Ciphertext, settings: Optional[Settings] = None
) -> AttackReport:
    """Nearest element(s) of ``Ĥ`` to the ciphertext by exhaustive enumeration."""
    settings = settings or Settings()
    size = pk.message_space_size
    limit = settings.brute_force_order_limit
    if size > limit:
        raise GroupTooLargeError(f"|Ĥ| = {size} exceeds the enumeration limit {limit}")
    with _Timer() as timer:
        elements = pk.chain.elements_array(settings.brute_force_order_limit)
        distances = np.count_nonzero(elements != c.word.symbols[None, :], axis=1)
        best = int(distances.argmin())
        nearest = Permutation._wrap(elements[best].copy())
        success, recovered = _plaintext(pk, nearest, c)
        recovered["min_distance"] = int(distances[best])
        recovered["nearest_count"] = int(np.count_nonzero(distances == distances[best]))
    return AttackReport("brute-enum", success, int(elements.shape[0]), None, timer.ms, recovered)


def ball_size(n: int, r: int) -> int:
    return comb(n, r) * (n - 1) ** r


def brute_force_ball(
    pk: PublicKey, c: Ciphertext, settings: Optional[Settings] = None
) -> AttackReport:
    """
    Sift the permutations that agree with the ciphertext off some ``r`` positions.

    A permutation at distance at most ``r`` keeps the ciphertext symbols off a
    set ``P`` of ``r`` positions and carries the missing symbols on ``P``, so only
    those fillings are tried.
    """
    settings = settings or Settings()
    n, r = pk.degree, pk.r
    bound = ball_size(n, r)
    limit = settings.brute_force_ball_limit
    if bound > limit:
        raise GroupTooLargeError(f"ball of {bound} candidates exceeds the limit {limit}")
    symbols = c.word.symbols
    chain = pk.chain
    iterations = 0
    with _Timer() as timer:
        found: Optional[Permutation] = None
        for positions in itertools.combinations(range(n), r):
            keep = np.ones(n, dtype=bool)
            keep[list(positions)] = False
            kept = symbols[keep]
            if np.unique(kept).size != kept.size:
                continue
            present = np.zeros(n, dtype=bool)
            present[kept] = True
            missing = np.flatnonzero(~present)
            for filling in itertools.permutations(missing.tolist()):
                iterations += 1
                images = symbols.copy()
                images[list(positions)] = filling
                candidate = Permutation._wrap(images.astype(DTYPE))
                if chain.contains(candidate):
                    found = candidate
                    break
            if found is not None:
                break
    assert iterations <= bound, f"ball enumeration used {iterations} sifts, above the bound {bound}"
    if found is None:
        return AttackReport("brute-ball", False, iterations, None, timer.ms, {"bound": bound})
    success, recovered = _plaintext(pk, found, c)
    recovered["bound"] = bound
    return AttackReport("brute-ball", success, iterations, None, timer.ms, recovered)


def isd_iteration(
    chain: StabilizerChain, word: Word, r: int, rng: np.random.Generator
) -> Optional[Permutation]:
    """One guess: a fresh random base, reconstruct from the word on it, accept if within ``r``."""
    fresh = chain.rebuild(rng)
    images = word.symbols[list(fresh.base)]
    if np.unique(images).size != images.size:
        return None
    g = fresh.element_reconstruction(images.tolist())
    if g is not None and hamming_distance(g, word) <= r:
        return g
    return None


def isd_attack(
    pk: PublicKey,
    c: Ciphertext,
    seed: int,
    max_iterations: Optional[int] = None,
    threads: int = 1,
    settings: Optional[Settings] = None,
) -> AttackReport:
    """
    Information set decoding. Iterations are spread over ``threads`` workers,
    each on its own child stream of ``SeedSequence(seed)``; the first verified
    success stops the others.
    """
    settings = settings or Settings()
    budget = settings.isd_max_iterations if max_iterations is None else int(max_iterations)
    threads = max(1, int(threads))
    streams = np.random.SeedSequence(seed).spawn(threads)
    chain = pk.chain
    stop = threading.Event()
    lock = threading.Lock()
    state: Dict[str, Any] = {"iterations": 0, "winner": None}

    def worker(stream: int) -> None:
        rng = np.random.default_rng(streams[stream])
        while not stop.is_set():
            with lock:
                if state["iterations"] >= budget:
                    return
                state["iterations"] += 1
            g = isd_iteration(chain, c.word, pk.r, rng)
            if g is not None and verify_recovery(pk, g, c) is not None:
                with lock:
                    if state["winner"] is None:
                        state["winner"] = (stream, g)
                stop.set()
                return

    with _Timer() as timer:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            futs = [ex.submit(worker, i) for i in range(threads)]
            for fut in as_completed(futs):
                fut.result()
    iterations = state["iterations"]
    if state["winner"] is None:
        logger.info("isd: budget of %d iterations exhausted", budget)
        return AttackReport("isd", False, iterations, seed, timer.ms, {"budget": budget})
    stream, g = state["winner"]
    success, recovered = _plaintext(pk, g, c)
    recovered["stream"] = stream
    logger.debug("isd: success after %d iterations on stream %d", iterations, stream)
    return AttackReport("isd", success, iterations, seed, timer.ms, recovered)


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """
    Coordinates for ``Ĥ`` read off its block system.

    Point ``p_0·k^e·t_j`` gets label ``(j, e)`` where ``p_0`` represents block 0,
    ``k`` generates the regular kernel on block 0 and ``t_j`` carries block 0 to
    block ``j``. Every group element then acts as ``(j, e) ↦ (j·π, e + s_j)``.
    """

    blocks: BlockSystem
    block_of: np.ndarray
    label: np.ndarray
    point_of: np.ndarray

    @property
    def block_count(self) -> int:
        return len(self.blocks.blocks)

    @property
    def block_size(self) -> int:
        return self.blocks.block_size


def _affine_shifts(
    structure: BlockStructure, g: Permutation
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Block destinations and label shifts of ``g``, or None if ``g`` is not label-affine."""
    nb, bs = structure.block_count, structure.block_size
    src = structure.point_of
    dst = g.images[src]
    dest_blocks = structure.block_of[dst]
    shifts = (structure.label[dst] - structure.label[src]) % bs
    if (dest_blocks != dest_blocks[:, :1]).any() or (shifts != shifts[:, :1]).any():
        return None
    return dest_blocks[:, 0], shifts[:, 0]


def analyze_block_structure(pk: PublicKey) -> BlockStructure:
    """Derive block coordinates for ``Ĥ`` from the public generators alone."""
    gens = list(pk.generators)
    blocks = minimal_block_system(gens)
    if blocks.is_trivial():
        raise AttackInapplicable("public group has no nontrivial block system")
    nb, bs = len(blocks.blocks), blocks.block_size
    reps = [block[0] for block in blocks.blocks]
    chain = build_chain(
        gens, preferred_base=reps, rng=np.random.default_rng(0), known_order=pk.message_space_size
    )
    if not set(chain.base) <= set(reps) or chain.base[0] != reps[0]:
        raise AttackInapplicable("block representatives do not form a base; kernel is not regular")
    kernel: List[Permutation] = []
    for q in blocks.blocks[0]:
        images = [q if p == reps[0] else p for p in chain.base]
        k = chain.element_reconstruction(images)
        if k is None:
            raise AttackInapplicable(
                f"kernel does not act transitively on block 0 (no element sends {reps[0]} to {q})"
            )
        kernel.append(k)
    k1 = next((k for k in kernel if _cycle_on(k, reps[0], bs)), None)
    if k1 is None:
        raise AttackInapplicable("kernel acts on block 0 regularly but not cyclically")

    transversal = chain.levels[0].transversal
    point_of = np.empty((nb, bs), dtype=DTYPE)
    ring = [reps[0]]
    for _ in range(bs - 1):
        ring.append(int(k1.images[ring[-1]]))
    for j, rep in enumerate(reps):
        t = transversal[rep]
        point_of[j] = t.images[np.asarray(ring, dtype=DTYPE)]
    block_of = np.empty(pk.degree, dtype=DTYPE)
    label = np.empty(pk.degree, dtype=DTYPE)
    block_index = blocks.block_index()
    for j in range(nb):
        for e in range(bs):
            x = int(point_of[j, e])
            if block_index[x] != j:
                raise AttackInapplicable(f"transport of block 0 does not land on block {j}")
            block_of[x] = j
            label[x] = e
    if np.unique(point_of).size != pk.degree:
        raise AttackInapplicable("block labels are not a bijection")
    structure = BlockStructure(blocks, block_of, label, point_of)
    for g in gens:
        if _affine_shifts(structure, g) is None:
            raise AttackInapplicable("block action is not a regular cyclic action on labels")
    logger.debug("block structure: %d blocks of size %d", nb, bs)
    return structure


def _cycle_on(k: Permutation, start: int, length: int) -> bool:
    x, steps = start, 0
    while True:
        x = int(k.images[x])
        steps += 1
        if x == start:
            return steps == length


def _block_majority(structure: BlockStructure, word: Word) -> Permutation:
    nb, bs = structure.block_count, structure.block_size
    src = structure.point_of
    dst = word.symbols[src]
    dest_votes = structure.block_of[dst]
    shift_votes = (structure.label[dst] - structure.label[src]) % bs
    images = np.empty(structure.block_of.size, dtype=DTYPE)
    claimed = set()
    for j in range(nb):
        q = plurality(np.bincount(dest_votes[j], minlength=nb))
        s = plurality(np.bincount(shift_votes[j], minlength=bs))
        if q is None or s is None:
            raise DecodeFailure(f"plurality tie in block {j}")
        if q in claimed:
            raise DecodeFailure(f"block {q} claimed twice")
        claimed.add(q)
        images[src[j]] = structure.point_of[q, (np.arange(bs) + s) % bs]
    return Permutation._wrap(images)


def block_system_attack(
    pk: PublicKey, c: Ciphertext, structure: Optional[BlockStructure] = None
) -> AttackReport:
    """Majority-decode the ciphertext in block coordinates; no private key involved."""
    with _Timer() as timer:
        structure = structure or analyze_block_structure(pk)
        try:
            h = _block_majority(structure, c.word)
            success, recovered = _plaintext(pk, h, c)
        except DecodeFailure as exc:
            success, recovered = False, {"reason": exc.reason}
    return AttackReport("block", success, structure.block_count, None, timer.ms, recovered)


def _pair_count_inverse(n: int) -> Optional[int]:
    m = int((1 + math.isqrt(1 + 8 * n)) // 2)
    return m if m * (m - 1) // 2 == n else None


def _partition_representative(m: int, parts: Dict[int, int]) -> Permutation:
    cycles, start = [], 0
    for length in sorted(parts, reverse=True):
        for _ in range(parts[length]):
            cycles.append(tuple(range(start, start + length)))
            start += length
    return Permutation.from_cycles(m, [c for c in cycles if len(c) > 1])


def cycle_type_pullbacks(m: int, h: Permutation) -> List[Permutation]:
    """Representatives of the ``S_m`` classes whose pair action has the cycle type of ``h``."""
    target = cycle_type(h)
    out = []
    for parts in sympy_partitions(m):
        rep = _partition_representative(m, dict(parts))
        if cycle_type(induced_action(m, rep)) == target:
            out.append(rep)
    return out


def conjugator_search_attack(
    pk: PublicKey,
    budget: Optional[int] = None,
    ciphertext: Optional[Ciphertext] = None,
    pivot: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> AttackReport:
    """
    Find ``g'`` with ``g' ĥ_i g'^{-1}`` inside the induced ``S_m`` image for every
    public generator. The pivot defaults to the generator with the smallest
    centralizer in ``S_n``; solutions are ``c·z`` for ``z`` one conjugator of the
    pivot onto a pulled-back class representative and ``c`` in its centralizer.
    """
    settings = settings or Settings()
    budget = settings.conjugator_budget if budget is None else int(budget)
    if pk.family != "two_subsets":
        raise AttackInapplicable(
            f"conjugator search targets the two-subsets family, not {pk.family}"
        )
    m = _pair_count_inverse(pk.degree)
    if m is None:
        raise AttackInapplicable(f"degree {pk.degree} is not a pair count m(m-1)/2")
    limit = settings.centralizer_degree_limit
    if pk.degree > limit:
        raise GroupTooLargeError(
            f"degree {pk.degree} exceeds the centralizer enumeration limit {limit}"
        )
    ambient = two_subset_code(m).chain
    gens = [h for h in pk.generators if not h.is_identity()]
    with _Timer() as timer:
        if all(ambient.contains(h) for h in gens):
            x: Optional[Permutation] = Permutation.identity(pk.degree)
            iterations = 1
            pivot_index = pivot if pivot is not None else 0
            centralizer_size = 1
        else:
            pullbacks = [cycle_type_pullbacks(m, h) for h in gens]
            for i, reps in enumerate(pullbacks):
                if not reps:
                    raise AttackInapplicable(
                        f"public generator {i} has no cycle-type pullback in S_{m}"
                    )
            if pivot is None:
                pivot = min(range(len(gens)), key=lambda i: centralizer_order(gens[i]))
            pivot_index = pivot
            hp = gens[pivot_index]
            others = sorted(
                (h for i, h in enumerate(gens) if i != pivot_index), key=lambda h: len(support(h))
            )
            centralizer_size = centralizer_order(hp)
            x, iterations = None, 0
            for rep in pullbacks[pivot_index]:
                z = find_conjugating_element(hp, induced_action(m, rep))
                if z is None:
                    continue
                try:
                    for cent in centralizer_elements(None, hp, limit=limit):
                        if iterations >= budget:
                            break
                        iterations += 1
                        candidate = compose(cent, z)
                        if all(ambient.contains(conjugate(h, candidate)) for h in others):
                            x = candidate
                            break
                except EnumerationLimitError as exc:
                    raise GroupTooLargeError(str(exc)) from None
                if x is not None or iterations >= budget:
                    break
            assert iterations <= centralizer_size * len(pullbacks[pivot_index]), iterations
        recovered: Dict[str, Any] = {"pivot": pivot_index, "centralizer_order": centralizer_size}
        success = False
        if x is not None:
            conjugator = inverse(x)
            private_gens = [conjugate(h, x) for h in pk.generators]
            recovered_order = build_chain(private_gens).order()
            success = (
                all(ambient.contains(h) for h in private_gens)
                and all(conjugate(h, conjugator) == p for h, p in zip(private_gens, pk.generators))
                and recovered_order == pk.message_space_size
            )
            recovered.update(
                {
                    "conjugator": conjugator.to_list(),
                    "generators": [h.to_list() for h in private_gens],
                    "order": recovered_order,
                }
            )
            if success and ciphertext is not None:
                try:
                    h = two_subset_code(m).decode(pull_back_word(ciphertext.word, conjugator))
                    plain_ok, plain = _plaintext(pk, conjugate(h, conjugator), ciphertext)
                except DecodeFailure as exc:
                    plain_ok, plain = False, {"reason": exc.reason}
                recovered.update(plain)
                success = plain_ok
    return AttackReport("conjugator", success, iterations, None, timer.ms, recovered)


def _k_max(pk: PublicKey) -> float:
    if pk.family == "wreath":
        return float(pk.params["n"])
    m = pk.params.get("m") or _pair_count_inverse(pk.degree)
    return m * math.log2(m)


def estimate_isd_cost(pk: PublicKey) -> SecurityEstimate:
    return security_estimate(pk.degree, _k_max(pk), pk.r)


def estimate_conjugator_search_cost(pk: PublicKey) -> float:
    """``log2`` of the smallest public-generator centralizer in ``S_n``."""
    sizes = [centralizer_order(h) for h in pk.generators if not h.is_identity()]
    return math.log2(min(sizes)) if sizes else 0.0


ATTACK_KINDS = ("brute-enum", "brute-ball", "isd", "block", "conjugator")


def run_attack(
    kind: str,
    pk: PublicKey,
    c: Optional[Ciphertext],
    seed: int,
    budget: Optional[int] = None,
    threads: int = 1,
    settings: Optional[Settings] = None,
) -> AttackReport:
    settings = settings or Settings()
    if kind != "conjugator" and c is None:
        raise ValueError(f"attack {kind!r} needs a ciphertext")
    if kind == "brute-enum":
        report = brute_force_enumerate(pk, c, settings)
    elif kind == "brute-ball":
        report = brute_force_ball(pk, c, settings)
    elif kind == "isd":
        report = isd_attack(pk, c, seed, budget, threads, settings)
    elif kind == "block":
        report = block_system_attack(pk, c)
    elif kind == "conjugator":
        report = conjugator_search_attack(pk, budget, c, settings=settings)
    else:
        raise ValueError(f"unknown attack {kind!r}; expected one of {', '.join(ATTACK_KINDS)}")
    report.seed = seed
    return report
