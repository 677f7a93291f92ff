"""Simulation-kernel backend selection.

The bench ships two interchangeable kernels: a compiled extension
(_kernel_cy, built from the Cython source at install time) and a pure
Python fallback (_kernel_py).  The compiled one is picked when the
import succeeds; WINDBENCH_KERNEL=py or =cy forces a choice, and
forcing the compiled kernel where it is not built is an error rather
than a silent fallback.

Both produce bit-identical trajectories; benchmarks/bench_kernels.py
measures the speed gap.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernel_py
from .errors import ConfigurationError

PARAMS_F_LEN = _kernel_py.PARAMS_F_LEN
PARAMS_I_LEN = _kernel_py.PARAMS_I_LEN
STATE_F_LEN = _kernel_py.STATE_F_LEN
STATE_I_LEN = _kernel_py.STATE_I_LEN
OUT_F_COLS = _kernel_py.OUT_F_COLS
OUT_I_COLS = _kernel_py.OUT_I_COLS


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernel_cy
    except ImportError:
        return None
    return _kernel_cy


def _select() -> tuple[str, ModuleType]:
    forced = os.environ.get("WINDBENCH_KERNEL", "").strip().lower()
    if forced not in ("", "py", "cy"):
        raise ConfigurationError(
            f"WINDBENCH_KERNEL must be 'py' or 'cy', got {forced!r}"
        )
    if forced == "py":
        return "py", _kernel_py
    compiled = _load_compiled()
    if forced == "cy":
        if compiled is None:
            raise ConfigurationError(
                "WINDBENCH_KERNEL=cy but the compiled kernel is not built"
            )
        return "cy", compiled
    if compiled is not None:
        return "cy", compiled
    return "py", _kernel_py


BACKEND, _impl = _select()


def backend_name() -> str:
    """Name of the kernel actually in use: 'py' or 'cy'."""
    return BACKEND


def available_backends() -> list[str]:
    """Kernels importable in this environment."""
    names = ["py"]
    if _load_compiled() is not None:
        names.append("cy")
    return names


def get_backend(name: str) -> ModuleType:
    """A specific kernel module, for parity tests and benchmarks."""
    if name == "py":
        return _kernel_py
    if name == "cy":
        compiled = _load_compiled()
        if compiled is None:
            raise ConfigurationError("the compiled kernel is not built")
        return compiled
    raise ConfigurationError(f"unknown kernel backend {name!r}")


def run_segment(*args):
    """Advance a simulation segment with the selected backend."""
    return _impl.run_segment(*args)
