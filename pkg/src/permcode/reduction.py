"""
Max-2-SAT to subgroup distance.

Clause ``j`` owns the gadget points ``6j .. 6j+5``. Variable ``u_i`` becomes the
involution ``π_i`` that, for every clause it occurs in, swaps the first two
gadget points and also the middle pair (first position) or the last pair
(second position). The target ``σ`` on each gadget depends on the clause's
negation pattern, and a clause is satisfied exactly when ``Π_{u_i true} π_i``
agrees with ``σ`` on four of its six points (otherwise on none), so the
threshold is ``4k``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .perms import Permutation, compose
from .stab_chain import build_chain

logger = logging.getLogger(__name__)

Literal = Tuple[int, bool]  # (variable, negated)
Clause = Tuple[Literal, Literal]

MAX_BRUTE_VARIABLES = 24
_GADGET = 6
_SLOTS = ((0, 1), (2, 3), (4, 5))


class DimacsParseError(ValueError):
    pass


class BruteForceLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class Max2SatInstance:
    num_vars: int
    clauses: Tuple[Clause, ...]
    k: int

    def __post_init__(self):
        for j, ((a, _), (b, _)) in enumerate(self.clauses):
            if a == b:
                raise ValueError(f"clause {j} uses variable {a + 1} twice")
            for v in (a, b):
                if not 0 <= v < self.num_vars:
                    raise ValueError(f"clause {j} uses variable {v + 1} outside 1..{self.num_vars}")
        if not 0 <= self.k <= len(self.clauses):
            raise ValueError(f"target {self.k} outside [0, {len(self.clauses)}]")

    def satisfied(self, assignment: Sequence[bool]) -> int:
        return sum(
            1 for (a, na), (b, nb) in self.clauses if (assignment[a] != na) or (assignment[b] != nb)
        )


@dataclass(frozen=True, eq=False)
class SubgroupDistanceInstance:
    degree: int
    generators: Tuple[Permutation, ...]
    sigma: Permutation
    threshold: int

    def agreement(self, g: Permutation) -> int:
        return int(np.count_nonzero(g.images == self.sigma.images))

    def to_dict(self) -> Dict[str, object]:
        return {
            "degree": self.degree,
            "generators": [g.to_list() for g in self.generators],
            "sigma": self.sigma.to_list(),
            "threshold": self.threshold,
        }


def _swaps(degree: int, pairs: Sequence[Tuple[int, int]]) -> Permutation:
    return Permutation.from_cycles(degree, list(pairs))


def reduce(inst: Max2SatInstance) -> SubgroupDistanceInstance:
    degree = _GADGET * len(inst.clauses)
    swaps: List[List[Tuple[int, int]]] = [[] for _ in range(inst.num_vars)]
    sigma_swaps: List[Tuple[int, int]] = []
    for j, ((a, neg_a), (b, neg_b)) in enumerate(inst.clauses):
        x = [_GADGET * j + t for t in range(_GADGET)]
        swaps[a] += [(x[0], x[1]), (x[2], x[3])]
        swaps[b] += [(x[0], x[1]), (x[4], x[5])]
        if not neg_a and not neg_b:
            sigma_swaps += [(x[0], x[1]), (x[2], x[3]), (x[4], x[5])]
        elif neg_a and neg_b:
            sigma_swaps.append((x[0], x[1]))
        elif neg_a:
            sigma_swaps.append((x[4], x[5]))
        else:
            sigma_swaps.append((x[2], x[3]))
    unused = [i + 1 for i, s in enumerate(swaps) if not s]
    # an unused variable adds the identity as generator, so |G| = 2^(variables in clauses)
    # rather than 2^num_vars
    if unused:
        logger.warning("variables %s occur in no clause; their generators are trivial", unused)
    return SubgroupDistanceInstance(
        degree=degree,
        generators=tuple(_swaps(degree, s) for s in swaps),
        sigma=_swaps(degree, sigma_swaps),
        threshold=4 * inst.k,
    )


def group_order(sd: SubgroupDistanceInstance) -> int:
    gens = list(sd.generators) or [Permutation.identity(sd.degree)]
    return build_chain(gens).order()


def commuting_involutions(sd: SubgroupDistanceInstance) -> bool:
    gens = sd.generators
    for i, g in enumerate(gens):
        if not compose(g, g).is_identity():
            return False
        for h in gens[i + 1 :]:
            if compose(g, h) != compose(h, g):
                return False
    return True


def assignment_to_element(sd: SubgroupDistanceInstance, assignment: Sequence[bool]) -> Permutation:
    g = Permutation.identity(sd.degree)
    for value, pi in zip(assignment, sd.generators):
        if value:
            g = compose(g, pi)
    return g


def _slot_vector(degree: int, g: Permutation) -> Optional[np.ndarray]:
    """Which gadget pairs ``g`` swaps, or None if it is not a product of gadget swaps."""
    gadgets = degree // _GADGET
    offsets = _GADGET * np.arange(gadgets)[:, None]
    local = g.images.reshape(gadgets, _GADGET).astype(np.int64) - offsets
    vec = np.zeros((gadgets, len(_SLOTS)), dtype=np.uint8)
    for t, (p, q) in enumerate(_SLOTS):
        swapped = (local[:, p] == q) & (local[:, q] == p)
        fixed = (local[:, p] == p) & (local[:, q] == q)
        if not (swapped | fixed).all():
            return None
        vec[:, t] = swapped
    return vec.reshape(-1)


def element_to_assignment(sd: SubgroupDistanceInstance, g: Permutation) -> Optional[List[bool]]:
    """Solve ``g = Π π_i^{x_i}`` over GF(2); free variables are set False."""
    target = _slot_vector(sd.degree, g)
    if target is None:
        return None
    rows = []
    for pi in sd.generators:
        vec = _slot_vector(sd.degree, pi)
        if vec is None:
            raise ValueError("generator is not a product of gadget swaps")
        rows.append(vec)
    nvars = len(rows)
    a = np.column_stack(rows + [target]).astype(np.uint8)
    pivots: List[int] = []
    row = 0
    for col in range(nvars):
        hits = np.flatnonzero(a[row:, col]) + row
        if hits.size == 0:
            continue
        a[[row, hits[0]]] = a[[hits[0], row]]
        others = np.flatnonzero(a[:, col])
        others = others[others != row]
        a[others] ^= a[row]
        pivots.append(col)
        row += 1
        if row == a.shape[0]:
            break
    if a[row:, nvars].any():
        return None
    solution = [False] * nvars
    for r, col in enumerate(pivots):
        solution[col] = bool(a[r, nvars])
    return solution


def clause_agreements(sd: SubgroupDistanceInstance, g: Permutation) -> List[int]:
    agree = (g.images == sd.sigma.images).reshape(-1, _GADGET)
    return agree.sum(axis=1).astype(int).tolist()


def solve_max2sat_brute(inst: Max2SatInstance) -> Tuple[int, List[bool]]:
    """Exact optimum over all ``2^n`` assignments; bit ``i`` of the index is ``u_{i+1}``."""
    n = inst.num_vars
    if n > MAX_BRUTE_VARIABLES:
        raise BruteForceLimitError(
            f"{n} variables exceed the brute-force limit {MAX_BRUTE_VARIABLES}"
        )
    if not inst.clauses:
        return 0, [False] * n
    best, witness = -1, 0
    chunk = 1 << 20
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        count = np.zeros(idx.size, dtype=np.int32)
        for (a, na), (b, nb) in inst.clauses:
            lit_a = ((idx >> a) & 1).astype(bool) != na
            lit_b = ((idx >> b) & 1).astype(bool) != nb
            count += lit_a | lit_b
        top = int(count.argmax())
        if int(count[top]) > best:
            best, witness = int(count[top]), int(idx[top])
    return best, [bool((witness >> i) & 1) for i in range(n)]


def solve_subgroup_distance_brute(sd: SubgroupDistanceInstance) -> Tuple[int, Permutation]:
    """Maximum agreement with ``σ`` over the group, visiting subsets in Gray-code order."""
    s = len(sd.generators)
    if s > MAX_BRUTE_VARIABLES:
        raise BruteForceLimitError(
            f"{s} generators exceed the brute-force limit {MAX_BRUTE_VARIABLES}"
        )
    current = Permutation.identity(sd.degree)
    best, witness = sd.agreement(current), current
    for i in range(1, 1 << s):
        bit = (i & -i).bit_length() - 1
        current = compose(current, sd.generators[bit])
        value = sd.agreement(current)
        if value > best:
            best, witness = value, current
    return best, witness


@dataclass(frozen=True)
class ReductionCheck:
    max2sat_optimum: int
    distance_optimum: int
    group_order: int
    commuting_involutions: bool
    witnesses_translate: bool

    @property
    def ok(self) -> bool:
        return (
            self.distance_optimum == 4 * self.max2sat_optimum
            and self.commuting_involutions
            and self.witnesses_translate
        )


def verify_reduction(inst: Max2SatInstance) -> ReductionCheck:
    """Solve both sides by brute force and translate each witness to the other side."""
    sd = reduce(inst)
    sat, assignment = solve_max2sat_brute(inst)
    dist, witness = solve_subgroup_distance_brute(sd)
    forward = sd.agreement(assignment_to_element(sd, assignment)) == 4 * sat
    back = element_to_assignment(sd, witness)
    backward = back is not None and 4 * inst.satisfied(back) == dist
    if not (forward and backward):
        logger.warning("witness translation failed: forward=%s backward=%s", forward, backward)
    return ReductionCheck(
        sat, dist, group_order(sd), commuting_involutions(sd), forward and backward
    )


def random_instance(
    num_vars: int, num_clauses: int, rng: np.random.Generator, k: Optional[int] = None
) -> Max2SatInstance:
    if num_vars < 2 and num_clauses:
        raise ValueError("clauses need two distinct variables")
    clauses = []
    for _ in range(num_clauses):
        a, b = rng.choice(num_vars, size=2, replace=False)
        neg = rng.integers(0, 2, size=2).astype(bool)
        clauses.append(((int(a), bool(neg[0])), (int(b), bool(neg[1]))))
    if k is None:
        k = (3 * num_clauses) // 4
    return Max2SatInstance(num_vars, tuple(clauses), k)


def parse_dimacs(text: str, k: int) -> Max2SatInstance:
    """DIMACS CNF with exactly two literals per clause; literal order is preserved."""
    header: Optional[Tuple[int, int]] = None
    clauses: List[Clause] = []
    pending: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"line {lineno}: malformed header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise DimacsParseError(f"line {lineno}: clause before the 'p cnf' header")
        try:
            tokens = [int(t) for t in line.split()]
        except ValueError:
            raise DimacsParseError(f"line {lineno}: non-integer literal in {line!r}") from None
        for lit in tokens:
            if lit != 0:
                pending.append(lit)
                continue
            if len(pending) != 2:
                raise DimacsParseError(
                    f"line {lineno}: clause has {len(pending)} literals, expected 2"
                )
            (x, y) = pending
            if abs(x) == abs(y):
                raise DimacsParseError(f"line {lineno}: variable {abs(x)} repeated in a clause")
            for lit_ in (x, y):
                if abs(lit_) > header[0]:
                    raise DimacsParseError(
                        f"line {lineno}: variable {abs(lit_)} above declared {header[0]}"
                    )
            clauses.append(((abs(x) - 1, x < 0), (abs(y) - 1, y < 0)))
            pending = []
    if header is None:
        raise DimacsParseError("missing 'p cnf' header")
    if pending:
        raise DimacsParseError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise DimacsParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    if not 0 <= k <= len(clauses):
        raise DimacsParseError(f"target k={k} outside [0, {len(clauses)}]")
    return Max2SatInstance(header[0], tuple(clauses), k)


def format_dimacs(inst: Max2SatInstance) -> str:
    lines = [f"p cnf {inst.num_vars} {len(inst.clauses)}"]
    for (a, na), (b, nb) in inst.clauses:
        lines.append(f"{-(a + 1) if na else a + 1} {-(b + 1) if nb else b + 1} 0")
    return "\n".join(lines) + "\n"


def read_dimacs(path: Union[str, Path], k: int) -> Max2SatInstance:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"Formula file not found: {p}")
    return parse_dimacs(p.read_text(encoding="utf-8"), k)


def write_instance(path: Union[str, Path], sd: SubgroupDistanceInstance) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(sd.to_dict(), fh, indent=2)
        fh.write("\n")
    return p
