"""
McEliece-style cryptosystem over permutation codes.

The private key is a generating set of a code group ``H`` together with a
conjugator ``g``; the public key is a randomized generating set of
``Ĥ = g^{-1} H g`` plus a base for it. A plaintext is an element of ``Ĥ``
(addressed by an integer index through the public chain) and a ciphertext is
that element with ``r`` symbols replaced at random.

The checksum carried in a ciphertext only detects wrong decodes. It is not a
MAC and gives no integrity against an adversary.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .codes import DecodeFailure, DecodeStats, PermutationCode, add_errors
from .config import Settings
from .perms import (
    DegreeMismatchError,
    Permutation,
    Word,
    compose,
    conjugate,
    inverse,
    order_of,
    power,
    random_permutation,
)
from .stab_chain import IncompleteChainError, StabilizerChain, build_chain
from .two_subsets import two_subset_code
from .wreath import wreath_code

logger = logging.getLogger(__name__)

FAMILIES = ("wreath", "two_subsets")


class KeyGenerationError(RuntimeError):
    pass


class MessageRangeError(ValueError):
    pass


def normalize_family(family: str) -> str:
    name = family.replace("-", "_").lower()
    if name not in FAMILIES:
        raise ValueError(f"unknown code family {family!r}; expected one of {', '.join(FAMILIES)}")
    return name


def make_code(family: str, params: Dict[str, int]) -> PermutationCode:
    family = normalize_family(family)
    try:
        if family == "wreath":
            return wreath_code(int(params["m"]), int(params["n"]))
        return two_subset_code(int(params["m"]))
    except KeyError as exc:
        raise ValueError(f"{family} parameters missing {exc.args[0]!r}: {params}") from None


@dataclass(frozen=True, eq=False)
class PrivateKey:
    family: str
    params: Dict[str, int]
    private_generators: Tuple[Permutation, ...]
    conjugator: Permutation

    def __post_init__(self):
        if self.conjugator.degree != self.code.degree:
            raise DegreeMismatchError(
                f"conjugator degree {self.conjugator.degree} "
                f"does not match code degree {self.code.degree}"
            )

    @property
    def code(self) -> PermutationCode:
        return make_code(self.family, self.params)


@dataclass(frozen=True, eq=False)
class PublicKey:
    family: str
    params: Dict[str, int]
    generators: Tuple[Permutation, ...]
    base: Tuple[int, ...]
    degree: int
    r: int
    message_space_size: int

    @cached_property
    def chain(self) -> StabilizerChain:
        """Public stabilizer chain on ``base``; rebuilt identically from public data alone."""
        return build_chain(
            list(self.generators),
            preferred_base=self.base,
            rng=np.random.default_rng(0),
            known_order=self.message_space_size,
        )

    def element(self, message_index: int) -> Permutation:
        if not 0 <= message_index < self.message_space_size:
            raise MessageRangeError(
                f"message index {message_index} outside [0, {self.message_space_size})"
            )
        return self.chain.index_to_element(message_index)

    def index_of(self, h: Permutation) -> Optional[int]:
        return self.chain.element_to_index(h)


@dataclass(frozen=True, eq=False)
class Ciphertext:
    word: Word
    checksum: str


def checksum(h: Permutation, nbytes: int = 8) -> str:
    """Truncated SHA-256 of the 1-based list form."""
    payload = json.dumps(h.to_list(), separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[: 2 * nbytes]


def _random_product(
    gens: Sequence[Permutation], orders: Sequence[int], length: int, rng: np.random.Generator
) -> Permutation:
    out = Permutation.identity(gens[0].degree)
    for _ in range(length):
        i = int(rng.integers(len(gens)))
        e = int(rng.integers(1, orders[i])) if orders[i] > 1 else 1
        out = compose(out, power(gens[i], e))
    return out


def keygen(
    family: str,
    params: Dict[str, int],
    rng: np.random.Generator,
    errors: Optional[int] = None,
    conjugator: Optional[Permutation] = None,
    public_generator_count: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> Tuple[PrivateKey, PublicKey]:
    """
    Generate a keypair.

    ``errors`` defaults to the code's correction capacity; ``conjugator``
    overrides the uniform random choice of ``g`` (the identity yields ``Ĥ = H``).
    """
    settings = settings or Settings()
    family = normalize_family(family)
    code = make_code(family, params)
    r = code.capacity if errors is None else int(errors)
    if not 0 <= r <= code.degree:
        raise ValueError(f"error count {r} outside [0, {code.degree}]")
    g = conjugator if conjugator is not None else random_permutation(code.degree, rng)
    sk = PrivateKey(family, dict(code.params()), tuple(code.generators), g)

    conjugated = [conjugate(h, g) for h in sk.private_generators]
    orders = [order_of(h) for h in conjugated]
    t = public_generator_count or len(conjugated) + settings.public_generator_extra
    low, high = settings.product_length
    for attempt in range(1, settings.keygen_retries + 1):
        lengths = rng.integers(low, high + 1, size=t)
        public = [_random_product(conjugated, orders, int(k), rng) for k in lengths]
        if all(p.is_identity() for p in public):
            logger.debug("keygen attempt %d: all public generators trivial", attempt)
            continue
        try:
            chain = build_chain(
                public, rng=rng, known_order=code.order, stall_limit=settings.chain_stall_limit
            )
        except IncompleteChainError as exc:
            logger.debug("keygen attempt %d: %s", attempt, exc)
            continue
        pk = PublicKey(
            family=family,
            params=dict(code.params()),
            generators=tuple(public),
            base=chain.base,
            degree=code.degree,
            r=r,
            message_space_size=code.order,
        )
        logger.debug(
            "keygen: %s %s with %d public generators after %d attempt(s)",
            family,
            sk.params,
            t,
            attempt,
        )
        return sk, pk
    raise KeyGenerationError(
        f"public generators failed the order check {settings.keygen_retries} times "
        f"for {family} {sk.params}"
    )


def encrypt(
    pk: PublicKey, message_index: int, rng: np.random.Generator, settings: Optional[Settings] = None
) -> Ciphertext:
    settings = settings or Settings()
    h = pk.element(message_index)
    return Ciphertext(add_errors(h, pk.r, rng), checksum(h, settings.checksum_bytes))


def pull_back_word(word: Word, g: Permutation) -> Word:
    """Image of ``word`` under ``x ↦ g x g^{-1}``: ``w'[y] = c[y·g]·g^{-1}``."""
    if word.degree != g.degree:
        raise DegreeMismatchError(
            f"word length {word.degree} does not match conjugator degree {g.degree}"
        )
    return Word._wrap(inverse(g).images[word.symbols[g.images]])


def verify_plaintext(pk: PublicKey, h: Permutation, c: Ciphertext) -> Optional[int]:
    """Message index of ``h`` if it is in ``Ĥ`` and matches a non-empty checksum, else None."""
    if not c.checksum or checksum(h, len(c.checksum) // 2) != c.checksum:
        return None
    return pk.index_of(h)


def decrypt(
    sk: PrivateKey, pk: PublicKey, c: Ciphertext, stats: Optional[DecodeStats] = None
) -> int:
    if c.word.degree != pk.degree:
        raise DegreeMismatchError(
            f"ciphertext length {c.word.degree} does not match key degree {pk.degree}"
        )
    h = sk.code.decode(pull_back_word(c.word, sk.conjugator), stats)
    plain = conjugate(h, sk.conjugator)
    index = verify_plaintext(pk, plain, c)
    if index is None:
        raise DecodeFailure("decoded element fails the checksum or lies outside the public group")
    return index
