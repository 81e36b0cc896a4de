# src/qgeo/config.py

"""Global configuration: Planck's constant.

hbar is carried symbolically throughout the library.  Every operation that
depends on it accepts an explicit ``hbar`` keyword; when omitted, the value
falls back to the process-wide default, which is 1.0 unless overridden by the
QGEO_HBAR environment variable or by :func:`set_hbar`.
"""

from __future__ import annotations

import os

_DEFAULT_HBAR = 1.0


def _env_hbar() -> float | None:
    raw = os.environ.get("QGEO_HBAR")
    if raw is None:
        return None
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"QGEO_HBAR is not a number: {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"QGEO_HBAR must be positive, got {value}")
    return value


_hbar = _env_hbar() or _DEFAULT_HBAR


def get_hbar() -> float:
    """Current process-wide default for hbar."""
    return _hbar


def set_hbar(value: float) -> None:
    """Set the process-wide default for hbar (must be positive)."""
    global _hbar
    value = float(value)
    if value <= 0:
        raise ValueError(f"hbar must be positive, got {value}")
    _hbar = value


def resolve_hbar(hbar: float | None) -> float:
    """Return ``hbar`` if given, else the process-wide default."""
    if hbar is None:
        return get_hbar()
    hbar = float(hbar)
    if hbar <= 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    return hbar
