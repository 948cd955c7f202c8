"""Backend selection for the lifting kernels.

The compiled extension is used when it imports; otherwise the pure-Python
implementation.  ``use_backend`` switches explicitly (tests and benchmarks).
"""

from __future__ import annotations

from types import ModuleType

from divcw.engine import _kernels_py

try:
    from divcw.engine import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active: ModuleType = _compiled or _kernels_py


def available_backends() -> list[str]:
    return ["compiled", "python"] if _compiled is not None else ["python"]


def backend_name() -> str:
    return "compiled" if _active is _compiled and _compiled is not None else "python"


def use_backend(name: str) -> None:
    global _active
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif name == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")


def join_max(*args) -> None:
    _active.join_max(*args)


def unary_max(*args) -> None:
    _active.unary_max(*args)
