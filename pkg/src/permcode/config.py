from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml

logger = logging.getLogger(__name__)


@dataclass
class Settings:
    # enumeration guards
    centralizer_degree_limit: int = 12
    brute_force_order_limit: int = 10**7
    brute_force_ball_limit: int = 10**7
    # attack budgets
    isd_max_iterations: int = 10**5
    conjugator_budget: int = 10**6
    # key generation
    keygen_retries: int = 16
    public_generator_extra: int = 2
    product_length: Tuple[int, int] = (3, 7)
    chain_stall_limit: int = 64
    checksum_bytes: int = 8
    # UBB verification
    ubb_exhaustive_max_m: int = 8
    ubb_samples: int = 10**5

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["product_length"] = list(self.product_length)
        return out


def _flatten(data: Dict[str, Any]) -> Dict[str, Any]:
    """YAML files may group keys under section headings; only leaves matter."""
    known = {f.name for f in fields(Settings)}
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, dict) and key not in known:
            flat.update(_flatten(value))
        else:
            flat[key] = value
    return flat


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """Defaults, overridden by the mapping in a YAML file when given."""
    settings = Settings()
    if path is None:
        return settings
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"Settings file not found: {p}")
    with p.open("r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{p}: expected a mapping at top level")
    known = {f.name for f in fields(Settings)}
    for key, value in _flatten(data).items():
        if key not in known:
            raise ValueError(f"{p}: unknown setting {key!r}")
        if key == "product_length":
            value = tuple(int(v) for v in value)
            if len(value) != 2 or not 1 <= value[0] <= value[1]:
                raise ValueError(f"{p}: product_length must be [low, high] with 1 <= low <= high")
        setattr(settings, key, value)
    logger.debug("loaded settings from %s: %s", p, settings)
    return settings
