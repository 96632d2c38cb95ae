from pathlib import Path

import pytest

from permcode.config import Settings, load_settings

DEFAULT_YAML = Path(__file__).resolve().parents[1] / "configs" / "default.yaml"


def test_defaults_without_file():
    s = load_settings()
    assert s == Settings()
    assert s.product_length == (3, 7)


def test_shipped_defaults_match_dataclass():
    assert load_settings(DEFAULT_YAML) == Settings()


def test_sectioned_override(tmp_path):
    p = tmp_path / "s.yaml"
    p.write_text("attacks:\n  isd_max_iterations: 50\nkeygen:\n  product_length: [2, 4]\n")
    s = load_settings(p)
    assert s.isd_max_iterations == 50
    assert s.product_length == (2, 4)
    assert s.to_dict()["product_length"] == [2, 4]


def test_unknown_key_is_rejected(tmp_path):
    p = tmp_path / "s.yaml"
    p.write_text("isd_budget: 3\n")
    with pytest.raises(ValueError):
        load_settings(p)


def test_bad_product_length(tmp_path):
    p = tmp_path / "s.yaml"
    p.write_text("product_length: [5, 2]\n")
    with pytest.raises(ValueError):
        load_settings(p)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_settings(tmp_path / "nope.yaml")
