"""JSON helpers shared by the config parser and the report writer."""

from __future__ import annotations

import math
from typing import Any


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending field."""


def parse_complex(value: Any, field: str = "value") -> complex:
    """Accept ``[re, im]``, ``{"re":..,"im":..}`` or a bare real number."""
    if isinstance(value, bool):
        raise ConfigError(f"{field}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            return complex(re, im)
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(value.get("re", 0.0), value.get("im", 0.0))
    raise ConfigError(f"{field}: expected a number or [re, im], got {value!r}")


def dump_complex(z: complex, digits: int = 15) -> list[float]:
    z = complex(z)
    re, im = round(z.real, digits), round(z.imag, digits)
    # avoid -0.0 in reports so diffs stay stable
    return [re + 0.0, im + 0.0]


def dump_float(x: float) -> float | None:
    return None if math.isnan(x) else float(x)
