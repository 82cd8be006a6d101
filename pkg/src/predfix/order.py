"""Finite posets and fixed-point iteration of restrictive functions.

On a finite poset a restrictive function (one that never moves a point
upward, f(x) <= x) stabilizes from any start within |X| steps, so the
transfinite iteration of the general theory collapses to a bounded loop.
The step bound is asserted; exceeding it raises instead of spinning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .core import Multifunction, Predicate, Subset, Universe, is_unlocking
from .errors import InternalInvariantError
from .unlock import sub_universe


class Poset:
    """A universe with an explicit order relation matrix.

    ``leq[i, j]`` means element i is below-or-equal element j.  The
    axioms (reflexive, antisymmetric, transitive) are validated at
    construction over all pairs and triples.
    """

    __slots__ = ("universe", "leq")

    def __init__(self, universe: Universe, leq: np.ndarray):
        leq = np.ascontiguousarray(leq, dtype=bool)
        n = universe.size
        if leq.shape != (n, n):
            raise ValueError(f"order matrix shape {leq.shape} does not match size {n}")
        if not np.all(np.diagonal(leq)):
            raise ValueError("order relation is not reflexive")
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise ValueError("order relation is not antisymmetric")
        closure = leq @ leq
        if np.any(closure & ~leq):
            raise ValueError("order relation is not transitive")
        leq.flags.writeable = False
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "leq", leq)

    def __setattr__(self, name, value):
        raise AttributeError("Poset is immutable")

    @classmethod
    def from_pairs(
        cls,
        universe: Universe,
        pairs: Iterable[tuple[str, str]],
        close_transitively: bool = False,
    ) -> "Poset":
        n = universe.size
        leq = np.eye(n, dtype=bool)
        for lo, hi in pairs:
            leq[universe.index(lo), universe.index(hi)] = True
        if close_transitively:
            for _ in range(n):
                grown = leq | (leq @ leq)
                if np.array_equal(grown, leq):
                    break
                leq = grown
        return cls(universe, leq)

    @classmethod
    def chain(cls, universe: Universe) -> "Poset":
        """Total order following the universe's construction order."""
        n = universe.size
        return cls(universe, np.triu(np.ones((n, n), dtype=bool)))

    @classmethod
    def antichain(cls, universe: Universe) -> "Poset":
        return cls(universe, np.eye(universe.size, dtype=bool))

    def le(self, lo: str, hi: str) -> bool:
        return bool(self.leq[self.universe.index(lo), self.universe.index(hi)])

    def greatest_of(self, members: Subset) -> str | None:
        """Greatest element of a subset, or None when there isn't one."""
        if members.universe != self.universe:
            raise ValueError("subset lives in a different universe")
        idx = np.flatnonzero(members.mask)
        for i in idx:
            if np.all(self.leq[idx, i]):
                return self.universe.elements[i]
        return None

    def greatest(self) -> str | None:
        return self.greatest_of(Subset.full(self.universe))

    def restrict(self, y: Subset) -> "Poset":
        if y.universe != self.universe:
            raise ValueError("subset lives in a different universe")
        keep = np.flatnonzero(y.mask)
        return Poset(sub_universe(y), self.leq[np.ix_(keep, keep)].copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poset)
            and self.universe == other.universe
            and np.array_equal(self.leq, other.leq)
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.leq.tobytes()))

    def __repr__(self) -> str:
        return f"Poset(universe={list(self.universe.elements)!r})"


def is_chain_complete(poset: Poset) -> bool:
    """Every chain, the empty one included, has a greatest lower bound.

    For a finite poset that reduces to the existence of a greatest
    element: the empty chain's inf is the greatest element, and any
    nonempty finite chain already contains its minimum.  The reduction
    itself is exercised against the raw definition in the test suite.
    """
    return poset.greatest() is not None


def _as_index_map(f: Mapping[str, str], poset: Poset) -> np.ndarray:
    u = poset.universe
    out = np.empty(u.size, dtype=np.int64)
    for i, x in enumerate(u.elements):
        if x not in f:
            raise ValueError(f"function undefined at {x!r}")
        out[i] = u.index(f[x])
    return out


def is_restrictive(f: Mapping[str, str], poset: Poset) -> bool:
    """f never moves a point up: f(x) <= x everywhere."""
    g = _as_index_map(f, poset)
    n = poset.universe.size
    return bool(np.all(poset.leq[g, np.arange(n)]))


def is_isotone(f: Mapping[str, str], poset: Poset) -> bool:
    """f preserves the order: x <= y implies f(x) <= f(y)."""
    g = _as_index_map(f, poset)
    lo, hi = np.nonzero(poset.leq)
    return bool(np.all(poset.leq[g[lo], g[hi]]))


def downset_map(poset: Poset) -> Multifunction:
    """Map each point to its down-set {y | y <= x}; unlocks the
    always-true predicate, since every point lies in its own down-set."""
    return Multifunction(poset.universe, poset.universe, poset.leq.T.copy())


@dataclass(frozen=True)
class NarrowResult:
    """Outcome of narrowing a multivalued map to a single-valued one."""

    domain: Subset
    mapping: dict[str, str]
    # pairs (x, g(x)) where g(x) fell outside the narrowed domain; the
    # construction does not guarantee closure and we report rather than
    # assume (restrictiveness and the fixed-point set are unaffected)
    closure_violations: tuple[tuple[str, str], ...]

    def fixed_points(self) -> tuple[str, ...]:
        return tuple(x for x in self.domain.ids() if self.mapping[x] == x)


def narrow_to_function(
    f: Multifunction, p: Predicate, poset: Poset
) -> NarrowResult:
    """Pick from each down-set-trimmed value its greatest element (or the
    canonically first member when no greatest exists), producing a
    restrictive function whose fixed points are exactly p's truth set.

    Rejects maps that do not unlock p.
    """
    if poset.universe != p.universe:
        raise ValueError("poset and predicate live in different universes")
    if not is_unlocking(f, p):
        raise ValueError("map does not unlock the predicate")
    u = p.universe
    down = downset_map(poset)
    trimmed = down.matrix & f.matrix
    dom_mask = trimmed.any(axis=1)
    domain = Subset(u, dom_mask)
    mapping: dict[str, str] = {}
    for i in np.flatnonzero(dom_mask):
        members = Subset(u, trimmed[i].copy())
        pick = poset.greatest_of(members)
        if pick is None:
            pick = members.ids()[0]
        mapping[u.elements[i]] = pick
    violations = tuple(
        (x, gx) for x, gx in mapping.items() if not dom_mask[u.index(gx)]
    )
    return NarrowResult(domain, mapping, violations)


@dataclass(frozen=True)
class IterationTrace:
    """One orbit of an iterated map, kept for inspection and reporting."""

    start: object
    values: tuple
    steps: int
    converged: bool


def iterate_from(
    f: Mapping[str, str], poset: Poset, start: str, max_steps: int | None = None
) -> IterationTrace:
    bound = poset.universe.size if max_steps is None else max_steps
    values = [start]
    current = start
    for _ in range(bound):
        nxt = f[current]
        if nxt == current:
            return IterationTrace(start, tuple(values), len(values) - 1, True)
        values.append(nxt)
        current = nxt
    if f[current] == current:
        return IterationTrace(start, tuple(values), len(values) - 1, True)
    return IterationTrace(start, tuple(values), len(values) - 1, False)


def iterate_to_fixpoints(f: Mapping[str, str], poset: Poset) -> Subset:
    """Collect the stabilized value of iterating f from every start.

    Requires f restrictive on a chain-complete poset; the result is
    cross-checked against the literal fixed-point set {x | f(x) = x}.
    """
    if not is_restrictive(f, poset):
        raise ValueError("function is not restrictive; iteration may not stabilize")
    if not is_chain_complete(poset):
        raise ValueError("poset is not chain-complete (no greatest element)")
    u = poset.universe
    limits = set()
    for x in u.elements:
        trace = iterate_from(f, poset, x)
        if not trace.converged:
            raise InternalInvariantError(
                f"iteration from {x!r} did not stabilize within {u.size} steps"
            )
        limits.add(trace.values[-1])
    reached = Subset.from_ids(u, limits)
    literal = Subset.from_ids(u, [x for x in u.elements if f[x] == x])
    if reached != literal:
        raise InternalInvariantError(
            "stabilized iterates disagree with the literal fixed-point set"
        )
    return reached


def greatest_fixpoint_descent(f: Mapping[str, str], poset: Poset) -> str:
    """Iterate from the greatest element down to the greatest fixed point.

    Requires f restrictive and isotone; the claim that the limit
    dominates every fixed point is cross-checked on each call.
    """
    if not is_restrictive(f, poset):
        raise ValueError("function is not restrictive")
    if not is_isotone(f, poset):
        raise ValueError("function is not isotone")
    top = poset.greatest()
    if top is None:
        raise ValueError("poset has no greatest element")
    trace = iterate_from(f, poset, top)
    if not trace.converged:
        raise InternalInvariantError("descent from the top did not stabilize")
    result = trace.values[-1]
    for y in iterate_to_fixpoints(f, poset).ids():
        if not poset.le(y, result):
            raise InternalInvariantError(
                f"fixed point {y!r} is not below the descent limit {result!r}"
            )
    return result
