"""Integer-encoded lookup tables driving the selection kernels.

Two independent encodings of the same restriction structure are built on
purpose: trace classes (controls grouped by equal restriction per
window) feed the trace-set kernels, while raw pairwise agreement
matrices feed the element-filter kernels.  The kernels implementing the
supposedly-equivalent formulas therefore do not share derived data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .instance import ControlInstance


@dataclass(frozen=True)
class KernelTables:
    n_windows: int
    n_uncertainties: int
    n_controls: int
    # bit v of agree_mask[a, w]: uncertainty v matches w on window a
    agree_mask: np.ndarray  # int64 [nA, nW]
    # trace grouping of controls per window
    trace_class: np.ndarray  # int64 [nA, nC]
    class_count: np.ndarray  # int64 [nA]
    class_members: np.ndarray  # int64 [nA, maxT], bitmask of controls per class
    # raw pairwise agreement, built by direct comparison
    omega_agree: np.ndarray  # bool [nA, nW, nW]
    control_agree: np.ndarray  # bool [nA, nC, nC]
    full_control_mask: int


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def build_tables(instance: "ControlInstance") -> KernelTables:
    ctrl_rows = instance.controls.rows
    unc_rows = instance.uncertainties.rows
    windows = instance.windows
    n_a = len(windows)
    n_c = len(ctrl_rows)
    n_w = len(unc_rows)

    trace_class = np.zeros((n_a, n_c), dtype=np.int64)
    class_count = np.zeros(n_a, dtype=np.int64)
    for a, win in enumerate(windows):
        ids: dict[tuple[str, ...], int] = {}
        for c, row in enumerate(ctrl_rows):
            key = tuple(row[t] for t in win)
            trace_class[a, c] = ids.setdefault(key, len(ids))
        class_count[a] = len(ids)
    max_t = int(class_count.max())
    class_members = np.zeros((n_a, max_t), dtype=np.int64)
    for a in range(n_a):
        for c in range(n_c):
            class_members[a, trace_class[a, c]] |= 1 << c

    control_agree = np.zeros((n_a, n_c, n_c), dtype=bool)
    for a, win in enumerate(windows):
        for c1, row1 in enumerate(ctrl_rows):
            for c2, row2 in enumerate(ctrl_rows):
                control_agree[a, c1, c2] = all(row1[t] == row2[t] for t in win)

    omega_agree = np.zeros((n_a, n_w, n_w), dtype=bool)
    for a, win in enumerate(windows):
        for w1, row1 in enumerate(unc_rows):
            for w2, row2 in enumerate(unc_rows):
                omega_agree[a, w1, w2] = all(row1[t] == row2[t] for t in win)

    agree_mask = np.zeros((n_a, n_w), dtype=np.int64)
    for a in range(n_a):
        for w in range(n_w):
            for v in range(n_w):
                if omega_agree[a, w, v]:
                    agree_mask[a, w] |= 1 << v

    return KernelTables(
        n_windows=n_a,
        n_uncertainties=n_w,
        n_controls=n_c,
        agree_mask=_freeze(agree_mask),
        trace_class=_freeze(trace_class),
        class_count=_freeze(class_count),
        class_members=_freeze(class_members),
        omega_agree=_freeze(omega_agree),
        control_agree=_freeze(control_agree),
        full_control_mask=(1 << n_c) - 1,
    )
