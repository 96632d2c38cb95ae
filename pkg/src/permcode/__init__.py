"""
Permutation codes and a McEliece-style cryptosystem built on them.

Exposes key abstractions:
- Permutation, Word: list-form permutations and words with the Hamming metric
- PermutationCode: strategy interface shared by the wreath and two-subsets families
- keygen / encrypt / decrypt: the conjugation cryptosystem
- run_attack: public-data attacks (brute force, ISD, block system, conjugator search)
"""

from .attacks import AttackReport, run_attack
from .codes import DecodeFailure, PermutationCode
from .cryptosystem import Ciphertext, PrivateKey, PublicKey, decrypt, encrypt, keygen
from .perms import Permutation, Word

__all__ = [
    "AttackReport",
    "Ciphertext",
    "DecodeFailure",
    "Permutation",
    "PermutationCode",
    "PrivateKey",
    "PublicKey",
    "Word",
    "decrypt",
    "encrypt",
    "keygen",
    "run_attack",
]
