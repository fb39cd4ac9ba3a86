"""Backends for the packet reception-decision sweep.

Both backends implement the same contract and produce bit-identical
outputs from identical pre-drawn randomness: the compiled sweep walks the
packet and collision-pair lists in C, the pure backend vectorizes the same
comparisons in numpy. The compiled one is preferred when the extension was
built; selection happens once at import.
"""

from __future__ import annotations

from types import ModuleType

from . import pure

try:
    from . import _sweep as compiled
except ImportError:  # extension not built; numpy path covers everything
    compiled = None  # type: ignore[assignment]

DEFAULT_BACKEND: str = "compiled" if compiled is not None else "pure"


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if compiled is not None else ("pure",)


def get_backend(name: str = "auto") -> ModuleType:
    if name == "auto":
        name = DEFAULT_BACKEND
    if name == "pure":
        return pure
    if name == "compiled":
        if compiled is None:
            raise ValueError(
                "compiled kernel unavailable; reinstall the package with a C toolchain"
            )
        return compiled
    raise ValueError(f"unknown kernel backend {name!r}")
