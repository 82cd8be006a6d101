"""Non-anticipation checks and the greatest-selection solver.

A selection map is non-anticipating when, on every window of the
family, its value traces coincide across uncertainties that are
indistinguishable on that window.  The refinement operator prunes each
value down to the traces common to all indistinguishable uncertainties;
it never grows a value and preserves the order between selection maps,
and its fixed points are exactly the non-anticipating selections.  The
greatest one below a bound is reached by iterating from the bound.

Every check here is computed in two or three provably equivalent forms
and the results are compared on each call; a disagreement raises
``InternalInvariantError``.  These are the executable counterparts of
the equivalences the test suite certifies at desk scale.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import backend
from .errors import InternalInvariantError
from .instance import ControlInstance, FunctionFamily, SelectionMap
from .order import IterationTrace

Trace = tuple[tuple[str, str], ...]


def agree_set(
    family: FunctionFamily, member: str, window: Iterable[str]
) -> tuple[str, ...]:
    """Members extensionally agreeing with ``member`` on the window
    (always includes the member itself)."""
    idx = _window_of(family, window)
    anchor = family.trace(member, idx)
    return tuple(m for m in family.ids if family.trace(m, idx) == anchor)


def agree_set_excluding(
    family: FunctionFamily, member: str, window: Iterable[str]
) -> tuple[str, ...]:
    """The agreement set with the anchoring member removed."""
    return tuple(m for m in agree_set(family, member, window) if m != member)


def _window_of(family: FunctionFamily, window: Iterable[str]) -> tuple[int, ...]:
    win = tuple(window)
    if not win:
        raise ValueError("window must be nonempty")
    if len(set(win)) != len(win):
        raise ValueError("duplicate time point in window")
    order = {t: i for i, t in enumerate(family.time_points)}
    try:
        return tuple(sorted(order[t] for t in win))
    except KeyError as e:
        raise ValueError(f"unknown time point {e.args[0]!r}") from None


def common_traces(
    phi: SelectionMap,
    member: str,
    window: Iterable[str],
    exclude_member: bool = False,
) -> frozenset[Trace]:
    """Intersection, over the uncertainties agreeing with ``member`` on
    the window, of the window-traces of phi's values.

    When ``exclude_member`` empties the agreement set the intersection
    runs over no sets at all; by convention the result is then the full
    trace universe (every control's window-trace), which is what makes
    the feasibility construction reproduce the per-uncertainty predicate.
    """
    inst = phi.instance
    idx = inst.window_index(window)
    unc = inst.uncertainties
    anchor = unc.trace(member, idx)
    members = tuple(m for m in unc.ids if unc.trace(m, idx) == anchor)
    if exclude_member:
        members = tuple(m for m in members if m != member)
    if not members:
        return frozenset(
            inst.controls.trace(c, idx) for c in inst.controls.ids
        )
    result: frozenset[Trace] | None = None
    for m in members:
        traces = frozenset(
            inst.controls.trace(c, idx) for c in phi.value(m)
        )
        result = traces if result is None else result & traces
    return result if result is not None else frozenset()


def _tables(phi: SelectionMap):
    return phi.instance.tables


def _row(phi: SelectionMap) -> np.ndarray:
    return phi.masks[None, :]


def is_nonanticipating_at(phi: SelectionMap, member: str) -> bool:
    """Single-uncertainty check, computed both as the literal implication
    over agreeing pairs and as equality of common traces with own traces."""
    w = phi.instance.uncertainties.index(member)
    t = _tables(phi)
    by_implication = bool(backend.na_implication_at(_row(phi), w, t)[0])
    by_trace_eq = bool(backend.na_trace_eq_at(_row(phi), w, t)[0])
    if by_implication != by_trace_eq:
        raise InternalInvariantError(
            f"per-uncertainty forms disagree at {member!r}: "
            f"implication={by_implication} trace-eq={by_trace_eq}"
        )
    return by_implication


def is_nonanticipating(phi: SelectionMap) -> bool:
    """Whole-map check; conjunction of the per-uncertainty checks, also
    computed in the symmetric equal-traces form."""
    t = _tables(phi)
    row = _row(phi)
    by_implication = bool(backend.na_implication(row, t)[0])
    by_trace_eq = bool(backend.na_trace_eq(row, t)[0])
    by_symmetry = bool(backend.na_symmetric(row, t)[0])
    if not (by_implication == by_trace_eq == by_symmetry):
        raise InternalInvariantError(
            f"non-anticipation forms disagree: implication={by_implication} "
            f"trace-eq={by_trace_eq} symmetric={by_symmetry}"
        )
    return by_implication


def feasible_controls(phi: SelectionMap, member: str) -> tuple[str, ...]:
    """Controls whose every window-trace lies in the common traces of the
    OTHER uncertainties agreeing there; any subset of these is an
    admissible value at ``member``."""
    inst = phi.instance
    w = inst.uncertainties.index(member)
    d = backend.feasible_masks(_row(phi), _tables(phi))[0, w]
    return inst.controls_of_mask(int(d))


def within_feasible(phi: SelectionMap) -> bool:
    """Whether every value sits inside its feasible control set, i.e. the
    map is a fixed point of the box-valued feasibility construction.
    Must coincide with the non-anticipation check, and the coincidence is
    verified on every call."""
    d = backend.feasible_masks(_row(phi), _tables(phi))[0]
    inside = bool(np.all((phi.masks & ~d) == 0))
    direct = is_nonanticipating(phi)
    if inside != direct:
        raise InternalInvariantError(
            f"feasibility fixed-point test ({inside}) disagrees with "
            f"the non-anticipation check ({direct})"
        )
    return inside


def refine(phi: SelectionMap) -> SelectionMap:
    """One refinement step.

    Three forms are evaluated and compared: the common-trace filter, the
    variant excluding the anchor from each agreement set (equivalent
    because a control's own trace is always present), and the literal
    element filter.  Never grows any value.
    """
    t = _tables(phi)
    row = _row(phi)
    by_traces = backend.refine_traces(row, t)[0]
    by_traces_excl = backend.refine_traces_excl(row, t)[0]
    by_elements = backend.refine_elements(row, t)[0]
    if not (
        np.array_equal(by_traces, by_traces_excl)
        and np.array_equal(by_traces, by_elements)
    ):
        raise InternalInvariantError("refinement forms disagree")
    if np.any(by_traces & ~phi.masks):
        raise InternalInvariantError("refinement grew a value")
    return SelectionMap(phi.instance, by_traces)


class Violation:
    """One witness against non-anticipation: on ``window`` the two
    uncertainties agree, yet ``trace`` occurs among the first value's
    window-traces and not among the second's."""

    __slots__ = ("window", "member", "other", "trace")

    def __init__(self, window: tuple[str, ...], member: str, other: str, trace: Trace):
        self.window = window
        self.member = member
        self.other = other
        self.trace = trace

    def __repr__(self) -> str:
        return (
            f"Violation(window={self.window}, pair=({self.member}, "
            f"{self.other}), trace={self.trace})"
        )


def first_violation(phi: SelectionMap) -> Violation | None:
    """Lexicographically least witness (window, member, other, trace) in
    canonical order, or None when the map is non-anticipating."""
    inst = phi.instance
    unc = inst.uncertainties
    ctl = inst.controls
    best: tuple | None = None
    for idx in sorted(inst.windows):
        for i1, w1 in enumerate(unc.ids):
            for i2, w2 in enumerate(unc.ids):
                if unc.trace(w1, idx) != unc.trace(w2, idx):
                    continue
                have = {ctl.trace(c, idx) for c in phi.value(w2)}
                missing = sorted(
                    ctl.trace(c, idx)
                    for c in phi.value(w1)
                    if ctl.trace(c, idx) not in have
                )
                if missing:
                    key = (idx, i1, i2, missing[0])
                    if best is None or key < best:
                        best = key
    if best is None:
        return None
    idx, i1, i2, trace = best
    return Violation(
        tuple(inst.time_points[t] for t in idx), unc.ids[i1], unc.ids[i2], trace
    )


def trivial_windows(instance: ControlInstance) -> tuple[int, ...]:
    """Indices of windows on which all uncertainties are pairwise
    distinguishable (every agreement set is a singleton)."""
    t = instance.tables
    n_w = t.n_uncertainties
    out = []
    for a in range(t.n_windows):
        if all(int(t.agree_mask[a, w]).bit_count() == 1 for w in range(n_w)):
            out.append(a)
    return tuple(out)


def is_vacuous(instance: ControlInstance) -> bool:
    """True when every window distinguishes all uncertainties, making
    every selection map trivially non-anticipating."""
    return len(trivial_windows(instance)) == len(instance.windows)


def greatest_selection(
    instance: ControlInstance,
) -> tuple[SelectionMap, IterationTrace]:
    """Iterate refinement from the bound until it reproduces its input.

    The limit is the greatest non-anticipating selection below the
    bound.  Each step is clipped to the bound and the clip is asserted
    to be a no-op (refinement never grows values).  Stabilization within
    size(bound)+1 steps is guaranteed; exceeding the bound is a bug.
    """
    beta = instance.beta_selection()
    bound = beta.size() + 1
    values: list[SelectionMap] = [beta]
    current = beta
    for _ in range(bound):
        nxt = refine(current)
        if not nxt.le(current):
            raise InternalInvariantError("refinement step moved upward")
        if nxt.meet(beta) != nxt:
            raise InternalInvariantError("refinement step left the bound")
        values.append(nxt)
        if nxt == current:
            result = nxt
            if not is_nonanticipating(result):
                raise InternalInvariantError(
                    "stabilized selection fails the non-anticipation check"
                )
            trace = IterationTrace(
                start=beta,
                values=tuple(values),
                steps=len(values) - 1,
                converged=True,
            )
            return result, trace
        current = nxt
    raise InternalInvariantError(
        f"refinement did not stabilize within {bound} steps"
    )


def selection_sizes(trace: IterationTrace) -> list[int]:
    """Total value sizes along an iteration trace of selection maps."""
    return [phi.size() for phi in trace.values]


def enumerate_selection_masks(
    beta_masks: np.ndarray | Sequence[int], cap: int = 20
) -> np.ndarray:
    """All per-uncertainty mask rows below the given bound, in canonical
    order: position bits run over (uncertainty, control) pairs in
    canonical order, least significant first."""
    from .errors import CapExceededError

    beta = np.asarray(beta_masks, dtype=np.int64)
    positions = [
        (w, c)
        for w in range(beta.shape[0])
        for c in range(64)
        if int(beta[w]) >> c & 1
    ]
    m = len(positions)
    if m > cap:
        raise CapExceededError(
            "enumerate_selections", f"2**{m} selections exceed cap 2**{cap}"
        )
    ks = np.arange(1 << m, dtype=np.int64)
    out = np.zeros((1 << m, beta.shape[0]), dtype=np.int64)
    for bit, (w, c) in enumerate(positions):
        out[:, w] |= ((ks >> bit) & 1) << c
    return out
