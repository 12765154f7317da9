"""Global numerical configuration: comparison tolerance and tool version.

All equality checks in the library are of the form |x| <= tol * max(1, scale),
where `scale` is a magnitude representative of the operands.  The default
tolerance is 1e-9 and can be overridden either programmatically
(`set_tolerance`) or through the environment variable ``SKT_TOL``.
"""

from __future__ import annotations

import os

__version__ = "0.1.0"

DEFAULT_TOL = 1e-9

_tolerance: float | None = None


def tolerance() -> float:
    """Current comparison tolerance (SKT_TOL env var wins over the default)."""
    if _tolerance is not None:
        return _tolerance
    env = os.environ.get("SKT_TOL")
    if env is not None:
        try:
            val = float(env)
        except ValueError as exc:
            raise ValueError(f"SKT_TOL is not a parseable float: {env!r}") from exc
        if not (val > 0):
            raise ValueError(f"SKT_TOL must be positive, got {val}")
        return val
    return DEFAULT_TOL


def set_tolerance(tol: float | None) -> None:
    """Override the global tolerance (None restores env/default lookup)."""
    global _tolerance
    if tol is not None and not (tol > 0):
        raise ValueError(f"tolerance must be positive, got {tol}")
    _tolerance = tol


def is_zero(value: float, scale: float = 1.0, tol: float | None = None) -> bool:
    """Scale-aware zero test: |value| <= tol * max(1, scale)."""
    t = tolerance() if tol is None else tol
    return abs(value) <= t * max(1.0, abs(scale))
