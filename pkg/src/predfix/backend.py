"""Kernel backend selection.

``PREDFIX_BACKEND=numba`` forces the JIT kernels, ``PREDFIX_BACKEND=numpy``
forces the vectorized pure-numpy twins, and the default (``auto``) takes
numba when it imports and falls back to numpy otherwise.  Both backends
expose identical signatures; ``benchmarks/bench_kernels.py`` compares
them.
"""

from __future__ import annotations

import os

import numpy as np

from ._tables import KernelTables

_CHOICE = os.environ.get("PREDFIX_BACKEND", "auto").strip().lower() or "auto"

if _CHOICE == "auto":
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"
elif _CHOICE == "numba":
    from . import _kernels_numba as _impl

    BACKEND = "numba"
elif _CHOICE == "numpy":
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"
else:
    raise RuntimeError(
        f"PREDFIX_BACKEND={_CHOICE!r} not recognized (use numba, numpy, or auto)"
    )


def _batch(phis: np.ndarray) -> np.ndarray:
    phis = np.ascontiguousarray(phis, dtype=np.int64)
    if phis.ndim != 2:
        raise ValueError("expected a [batch, n_uncertainties] mask array")
    return phis


def refine_traces(phis: np.ndarray, t: KernelTables) -> np.ndarray:
    return _impl.refine_traces(
        _batch(phis), t.agree_mask, t.trace_class, t.class_members, t.class_count
    )


def refine_traces_excl(phis: np.ndarray, t: KernelTables) -> np.ndarray:
    return _impl.refine_traces_excl(
        _batch(phis), t.agree_mask, t.trace_class, t.class_members, t.class_count
    )


def refine_elements(phis: np.ndarray, t: KernelTables) -> np.ndarray:
    return _impl.refine_elements(_batch(phis), t.omega_agree, t.control_agree)


def na_implication(phis: np.ndarray, t: KernelTables) -> np.ndarray:
    return _impl.na_implication(_batch(phis), t.omega_agree, t.control_agree)


def na_implication_at(phis: np.ndarray, w: int, t: KernelTables) -> np.ndarray:
    return _impl.na_implication_at(_batch(phis), w, t.omega_agree, t.control_agree)


def na_trace_eq(phis: np.ndarray, t: KernelTables) -> np.ndarray:
    return _impl.na_trace_eq(
        _batch(phis), t.agree_mask, t.trace_class, t.class_count
    )


def na_trace_eq_at(phis: np.ndarray, w: int, t: KernelTables) -> np.ndarray:
    return _impl.na_trace_eq_at(
        _batch(phis), w, t.agree_mask, t.trace_class, t.class_count
    )


def na_symmetric(phis: np.ndarray, t: KernelTables) -> np.ndarray:
    return _impl.na_symmetric(_batch(phis), t.omega_agree, t.trace_class)


def feasible_masks(phis: np.ndarray, t: KernelTables) -> np.ndarray:
    return _impl.feasible_masks(
        _batch(phis),
        t.agree_mask,
        t.trace_class,
        t.class_members,
        t.class_count,
        t.full_control_mask,
    )


def stabilize(
    phis: np.ndarray, t: KernelTables, max_steps: int
) -> tuple[np.ndarray, np.ndarray]:
    return _impl.stabilize(
        _batch(phis),
        t.agree_mask,
        t.trace_class,
        t.class_members,
        t.class_count,
        max_steps,
    )
