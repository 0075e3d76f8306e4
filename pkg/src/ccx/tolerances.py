"""Global numerical tolerances.

The active set lives in a context variable so that overrides made by the CLI
(or by a test) stay local to the calling context.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace
from typing import Iterator


@dataclass(frozen=True)
class Tolerances:
    boundary: float = 1e-9   # half-width of the |root| = 1 band
    residual: float = 1e-12  # Horner residual target for root polishing
    pivot: float = 1e-12     # smallest admissible Schur-Cohn pivot
    plane: float = 1e-9      # hyperplane containment slack


DEFAULT = Tolerances()
_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar("ccx_tolerances", default=DEFAULT)


def current() -> Tolerances:
    return _current.get()


@contextlib.contextmanager
def override(**changes: float) -> Iterator[Tolerances]:
    """Temporarily replace some tolerances, e.g. ``override(boundary=1e-7)``."""
    tol = replace(current(), **changes)
    token = _current.set(tol)
    try:
        yield tol
    finally:
        _current.reset(token)
