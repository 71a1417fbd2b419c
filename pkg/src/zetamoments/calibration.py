"""Access to the pinned calibration constants shipped in ``calibration.txt``."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources


def parse(text: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"calibration line {lineno}: expected key=value, got {raw!r}")
        out[key.strip()] = float(value)
    return out


@lru_cache(maxsize=None)
def constants() -> dict[str, float]:
    text = resources.files("zetamoments").joinpath("calibration.txt").read_text()
    return parse(text)


def get(key: str) -> float:
    return constants()[key]
