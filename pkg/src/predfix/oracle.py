"""Brute-force reference implementations, kept deliberately naive.

Everything here works from the raw definitions with plain Python data
(dicts, frozensets, literal loops) and shares no computation paths with
the bitmask kernels it certifies.  These paths are allowed to be
exponential; caps make refusal explicit instead of letting a call hang.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .core import Multifunction, Universe
from .errors import CapExceededError
from .instance import ControlInstance, SelectionMap


def _plain(instance: ControlInstance):
    """Strip an instance to plain dict-of-dict function tables."""
    times = list(instance.time_points)
    controls = {
        c: {t: row[i] for i, t in enumerate(times)}
        for c, row in zip(instance.controls.ids, instance.controls.rows)
    }
    uncertainties = {
        w: {t: row[i] for i, t in enumerate(times)}
        for w, row in zip(instance.uncertainties.ids, instance.uncertainties.rows)
    }
    windows = [[times[i] for i in win] for win in instance.windows]
    beta = {
        w: list(instance.controls_of_mask(int(m)))
        for w, m in zip(instance.uncertainties.ids, instance.beta_masks)
    }
    return times, controls, uncertainties, windows, beta


def _restriction(table: dict[str, str], window: list[str]) -> tuple:
    return tuple(sorted((t, table[t]) for t in window))


def is_nonanticipating_literal(phi: SelectionMap) -> bool:
    """Literal triple loop over windows and uncertainty pairs: whenever
    two uncertainties agree on a window, the first value's traces on that
    window must all appear among the second value's traces."""
    _, controls, uncertainties, windows, _ = _plain(phi.instance)
    values = {w: list(phi.value(w)) for w in uncertainties}
    for window in windows:
        for w1, table1 in uncertainties.items():
            for w2, table2 in uncertainties.items():
                if _restriction(table1, window) != _restriction(table2, window):
                    continue
                traces2 = {_restriction(controls[c], window) for c in values[w2]}
                for c in values[w1]:
                    if _restriction(controls[c], window) not in traces2:
                        return False
    return True


def all_selections(instance: ControlInstance, cap: int = 20) -> Iterator[SelectionMap]:
    """Every selection below the bound, exactly once, in canonical order:
    candidate k includes pair i iff bit i of k is set, pairs enumerated
    over (uncertainty, control) in canonical order."""
    _, _, uncertainties, _, beta = _plain(instance)
    pairs = [(w, c) for w in uncertainties for c in beta[w]]
    if len(pairs) > cap:
        raise CapExceededError(
            "all_selections", f"2**{len(pairs)} selections exceed cap 2**{cap}"
        )
    for k in range(1 << len(pairs)):
        chosen: dict[str, list[str]] = {w: [] for w in uncertainties}
        for i, (w, c) in enumerate(pairs):
            if k >> i & 1:
                chosen[w].append(c)
        yield SelectionMap.from_dict(instance, chosen)


def greatest_nonanticipating(instance: ControlInstance, cap: int = 20) -> SelectionMap:
    """Pointwise union of all accepted selections below the bound.

    The union qualifies because the accepted maps form a lattice whose
    top dominates and belongs; this is re-checked on every call.
    """
    _, _, uncertainties, _, _ = _plain(instance)
    union: dict[str, set[str]] = {w: set() for w in uncertainties}
    for phi in all_selections(instance, cap):
        if is_nonanticipating_literal(phi):
            for w in uncertainties:
                union[w].update(phi.value(w))
    top = SelectionMap.from_dict(instance, {w: sorted(s) for w, s in union.items()})
    if not is_nonanticipating_literal(top):
        raise AssertionError("union of accepted selections was not itself accepted")
    return top


def all_multifunctions(universe: Universe, cap: int = 4) -> Iterator[Multifunction]:
    """Every endo-multifunction on the universe, (2**n)**n of them."""
    n = universe.size
    if n > cap:
        raise CapExceededError(
            "all_multifunctions", f"universe size {n} exceeds cap {cap}"
        )
    for k in range(1 << (n * n)):
        matrix = np.zeros((n, n), dtype=bool)
        for bit in range(n * n):
            if k >> bit & 1:
                matrix[bit // n, bit % n] = True
        yield Multifunction(universe, universe, matrix)
