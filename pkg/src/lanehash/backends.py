"""Backend registry and one-time dispatch for HighwayHash.

Three interchangeable backends produce bit-identical digests:

* ``scalar`` -- the pure-Python reference, always available.
* ``numpy``  -- lane-vectorized batch arithmetic on uint64 arrays.
* ``jit``    -- numba-compiled scalar kernels, fastest per call.

The best available backend is selected once at import of the facade, not
inside any loop; a failed import of an accelerated backend silently
falls back down the list.
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

from . import highway as _scalar
from .highway import Key256


class ScalarBackend:
    """Reference backend; defines correct output for the others."""

    name = "scalar"

    @staticmethod
    def hash64(key: Key256, message: bytes, rounds: int = 4) -> int:
        return _scalar.hash64(key, message, rounds)

    @staticmethod
    def hash256(key: Key256, message: bytes, rounds: int = 4) -> Tuple[int, int, int, int]:
        return _scalar.hash256(key, message, rounds)


class NumpyBackend:
    """Vectorized backend; batch-oriented, one-shot goes through batch."""

    name = "numpy"

    def __init__(self):
        from . import _highway_np

        self._impl = _highway_np

    def hash64(self, key: Key256, message: bytes, rounds: int = 4) -> int:
        return self._impl.hash64(key, message, rounds)

    def hash256(self, key: Key256, message: bytes, rounds: int = 4):
        return self._impl.hash256(key, message, rounds)

    def hash64_batch(self, key: Key256, messages, rounds: int = 4):
        return self._impl.hash64_batch(key, messages, rounds)


class JitBackend:
    """numba-compiled backend."""

    name = "jit"

    def __init__(self):
        import numpy as np

        from . import _kernels

        self._np = np
        self._impl = _kernels

    def _lanes(self, key: Key256):
        return self._np.array(key.lanes, dtype=self._np.uint64)

    def _msg(self, message: bytes):
        return self._np.frombuffer(bytes(message), dtype=self._np.uint8)

    def hash64(self, key: Key256, message: bytes, rounds: int = 4) -> int:
        return int(self._impl.highway64(self._lanes(key), self._msg(message), rounds))

    def hash256(self, key: Key256, message: bytes, rounds: int = 4):
        out = self._impl.highway256(self._lanes(key), self._msg(message), rounds)
        return tuple(int(x) for x in out)


def available_backends() -> Dict[str, object]:
    """All backends importable in this environment, scalar always first."""
    found: Dict[str, object] = {"scalar": ScalarBackend()}
    try:
        found["numpy"] = NumpyBackend()
    except ImportError:
        pass
    try:
        found["jit"] = JitBackend()
    except ImportError:
        pass
    return found


_selected = None


def select_backend(name: Optional[str] = None):
    """Pick a backend (best available when name is None) and cache it."""
    global _selected
    backends = available_backends()
    if name is None:
        for candidate in ("jit", "numpy", "scalar"):
            if candidate in backends:
                _selected = backends[candidate]
                break
    else:
        if name not in backends:
            raise ValueError(f"unknown or unavailable backend: {name!r}")
        _selected = backends[name]
    return _selected


def get_backend():
    """Currently selected backend, choosing the best one on first use."""
    return _selected if _selected is not None else select_backend()
