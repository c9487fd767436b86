"""Runtime limits.

Limits live in a context variable so that a temporary override (``with
override(max_elements=...)``) is visible only to the current thread/task.
Environment variables ``BOOLINV_MAX_ELEMENTS`` and ``BOOLINV_HORIZON`` set the
process-wide defaults.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os

ENV_PREFIX = "BOOLINV_"


@dataclasses.dataclass(frozen=True)
class Config:
    # guards the O(n^3) table work on materialized monoids
    max_elements: int = 5000
    # largest stage size s_k a UHF tower may reach
    horizon: int = 4096

    @classmethod
    def from_env(cls, environ=None):
        environ = os.environ if environ is None else environ
        kwargs = {}
        for field in dataclasses.fields(cls):
            raw = environ.get(ENV_PREFIX + field.name.upper())
            if raw is not None:
                kwargs[field.name] = int(raw)
        return cls(**kwargs)


_current: contextvars.ContextVar[Config] = contextvars.ContextVar(
    "boolinv_config", default=Config.from_env()
)


def current() -> Config:
    return _current.get()


@contextlib.contextmanager
def override(**changes):
    token = _current.set(dataclasses.replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
