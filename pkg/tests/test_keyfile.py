import json

import pytest

from permcode import keyfile
from permcode.cryptosystem import decrypt, encrypt, keygen


def test_keys_and_ciphertext_survive_files(tmp_path, rng):
    sk, pk = keygen("wreath", {"m": 3, "n": 4}, rng)
    c = encrypt(pk, 1234, rng)
    keyfile.write_private_key(tmp_path / "sk.json", sk)
    keyfile.write_public_key(tmp_path / "pk.json", pk)
    keyfile.write_ciphertext(tmp_path / "c.json", c)

    sk2 = keyfile.read_private_key(tmp_path / "sk.json")
    pk2 = keyfile.read_public_key(tmp_path / "pk.json")
    c2 = keyfile.read_ciphertext(tmp_path / "c.json")
    assert sk2.conjugator == sk.conjugator
    assert pk2.generators == pk.generators and pk2.base == pk.base
    assert c2.word == c.word and c2.checksum == c.checksum
    assert decrypt(sk2, pk2, c2) == 1234


def test_public_key_layout_is_one_based(tmp_path, rng):
    _, pk = keygen("two_subsets", {"m": 5}, rng)
    path = keyfile.write_public_key(tmp_path / "pk.json", pk)
    text = path.read_text(encoding="utf-8")
    assert "\r\n" not in text
    data = json.loads(text)
    assert data["version"] == keyfile.FORMAT_VERSION
    assert data["family_degree"] == {"family": "two_subsets", "params": {"m": 5}, "degree": 10}
    assert data["message_space_size"] == "120"
    assert data["base"] == [b + 1 for b in pk.base]
    for gen in data["generators"]:
        assert sorted(gen) == list(range(1, 11))


def test_version_mismatch_is_rejected(tmp_path, rng):
    _, pk = keygen("wreath", {"m": 3, "n": 2}, rng)
    data = keyfile.public_key_to_dict(pk)
    data["version"] = 99
    with pytest.raises(keyfile.FormatVersionError):
        keyfile.public_key_from_dict(data)


def test_missing_fields_and_files(tmp_path):
    with pytest.raises(ValueError):
        keyfile.ciphertext_from_dict({"version": keyfile.FORMAT_VERSION})
    with pytest.raises(FileNotFoundError):
        keyfile.read_private_key(tmp_path / "absent.json")


def test_degree_mismatch_in_public_key(rng):
    _, pk = keygen("wreath", {"m": 3, "n": 2}, rng)
    data = keyfile.public_key_to_dict(pk)
    data["family_degree"]["degree"] = 9
    with pytest.raises(ValueError):
        keyfile.public_key_from_dict(data)


@pytest.mark.parametrize("digest", [None, "", "abc", "zz" * 8])
def test_ciphertext_checksum_is_required(digest):
    data = {"version": keyfile.FORMAT_VERSION, "word": [1, 2, 3]}
    if digest is not None:
        data["checksum"] = digest
    with pytest.raises(ValueError):
        keyfile.ciphertext_from_dict(data)
    data["checksum"] = "0A" * 8
    assert keyfile.ciphertext_from_dict(data).checksum == "0a" * 8
