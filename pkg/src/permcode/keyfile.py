"""JSON key and ciphertext files. Permutations and points are written 1-based."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from .cryptosystem import Ciphertext, PrivateKey, PublicKey, normalize_family
from .perms import Permutation, Word

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

PathLike = Union[str, Path]


class FormatVersionError(ValueError):
    pass


def _check_version(data: Dict[str, Any], what: str) -> None:
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise FormatVersionError(
            f"{what} has format version {version!r}, expected {FORMAT_VERSION}"
        )


def _field(data: Dict[str, Any], key: str, what: str) -> Any:
    if key not in data:
        raise ValueError(f"{what} is missing {key!r}")
    return data[key]


def private_key_to_dict(sk: PrivateKey) -> Dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "family": sk.family,
        "params": dict(sk.params),
        "generators": [h.to_list() for h in sk.private_generators],
        "conjugator": sk.conjugator.to_list(),
    }


def private_key_from_dict(data: Dict[str, Any]) -> PrivateKey:
    _check_version(data, "private key")
    generators = _field(data, "generators", "private key")
    return PrivateKey(
        family=normalize_family(_field(data, "family", "private key")),
        params={k: int(v) for k, v in _field(data, "params", "private key").items()},
        private_generators=tuple(Permutation.from_list(h) for h in generators),
        conjugator=Permutation.from_list(_field(data, "conjugator", "private key")),
    )


def public_key_to_dict(pk: PublicKey) -> Dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "family_degree": {"family": pk.family, "params": dict(pk.params), "degree": pk.degree},
        "generators": [h.to_list() for h in pk.generators],
        "base": [b + 1 for b in pk.base],
        "r": pk.r,
        "message_space_size": str(pk.message_space_size),
    }


def public_key_from_dict(data: Dict[str, Any]) -> PublicKey:
    _check_version(data, "public key")
    fd = _field(data, "family_degree", "public key")
    generators = tuple(Permutation.from_list(h) for h in _field(data, "generators", "public key"))
    degree = int(fd["degree"])
    for h in generators:
        if h.degree != degree:
            raise ValueError(f"public generator of degree {h.degree} in a degree-{degree} key")
    return PublicKey(
        family=normalize_family(fd["family"]),
        params={k: int(v) for k, v in fd.get("params", {}).items()},
        generators=generators,
        base=tuple(int(b) - 1 for b in _field(data, "base", "public key")),
        degree=degree,
        r=int(_field(data, "r", "public key")),
        message_space_size=int(_field(data, "message_space_size", "public key")),
    )


def ciphertext_to_dict(c: Ciphertext) -> Dict[str, Any]:
    return {"version": FORMAT_VERSION, "word": c.word.to_list(), "checksum": c.checksum}


def ciphertext_from_dict(data: Dict[str, Any]) -> Ciphertext:
    _check_version(data, "ciphertext")
    word = Word.from_list(_field(data, "word", "ciphertext"))
    digest = str(_field(data, "checksum", "ciphertext")).lower()
    if not digest or len(digest) % 2 or any(ch not in "0123456789abcdef" for ch in digest):
        raise ValueError(f"ciphertext checksum {digest!r} is not a non-empty hex digest")
    return Ciphertext(word, digest)


def _write(path: PathLike, payload: Dict[str, Any]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    logger.debug("wrote %s", p)
    return p


def _read(path: PathLike) -> Dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"File not found: {p}")
    with p.open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{p}: expected a JSON object")
    return data


def write_private_key(path: PathLike, sk: PrivateKey) -> Path:
    return _write(path, private_key_to_dict(sk))


def read_private_key(path: PathLike) -> PrivateKey:
    return private_key_from_dict(_read(path))


def write_public_key(path: PathLike, pk: PublicKey) -> Path:
    return _write(path, public_key_to_dict(pk))


def read_public_key(path: PathLike) -> PublicKey:
    return public_key_from_dict(_read(path))


def write_ciphertext(path: PathLike, c: Ciphertext) -> Path:
    return _write(path, ciphertext_to_dict(c))


def read_ciphertext(path: PathLike) -> Ciphertext:
    return ciphertext_from_dict(_read(path))
