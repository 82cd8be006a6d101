"""The family of unlocking maps of a predicate.

A multifunction f unlocks a predicate p when its fixed-point set equals
p's truth set.  That family is an interval in the pointwise order: it
has explicit top and bottom maps, membership is a two-sided pointwise
comparison, and it is closed under the boolean combinators below.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import Multifunction, Predicate, Subset, Universe
from .errors import CapExceededError


def unlocking_top(p: Predicate) -> Multifunction:
    """Largest map unlocking p: the full codomain at true points, the
    full codomain minus the point itself elsewhere."""
    n = p.universe.size
    matrix = np.ones((n, n), dtype=bool)
    matrix[np.diag_indices(n)] = p.truth
    return Multifunction(p.universe, p.universe, matrix)


def unlocking_bottom(p: Predicate) -> Multifunction:
    """Smallest map unlocking p: the singleton {x} at true points, empty
    elsewhere."""
    n = p.universe.size
    matrix = np.zeros((n, n), dtype=bool)
    matrix[np.diag_indices(n)] = p.truth
    return Multifunction(p.universe, p.universe, matrix)


@dataclass(frozen=True)
class UnlockingBounds:
    predicate: Predicate
    top: Multifunction
    bottom: Multifunction


def unlocking_bounds(p: Predicate) -> UnlockingBounds:
    return UnlockingBounds(p, unlocking_top(p), unlocking_bottom(p))


def in_unlocking_family(f: Multifunction, p: Predicate) -> bool:
    """Sandwich membership test: bottom <= f <= top pointwise.

    Agreement with the direct fixed-point test is a theorem, exercised by
    the test suite rather than asserted here.
    """
    if not f.is_endo or f.domain != p.universe:
        raise ValueError("multifunction must be endo on the predicate's universe")
    return unlocking_bottom(p).le(f) and f.le(unlocking_top(p))


def complement_map(g: Multifunction) -> Multifunction:
    """Pointwise complement; sends an unlocking map of p to one of not-p."""
    return Multifunction(g.domain, g.codomain, ~g.matrix)


def intersect_maps(g: Multifunction, q: Multifunction) -> Multifunction:
    """Pointwise intersection; unlocks the conjunction of the operands'
    predicates."""
    g._check(q)
    return Multifunction(g.domain, g.codomain, g.matrix & q.matrix)


def union_maps(g: Multifunction, q: Multifunction) -> Multifunction:
    """Pointwise union; unlocks the disjunction of the operands' predicates."""
    g._check(q)
    return Multifunction(g.domain, g.codomain, g.matrix | q.matrix)


def sub_universe(y: Subset) -> Universe:
    if not y.ids():
        raise ValueError("cannot build a universe from the empty subset")
    return Universe(y.ids())


def restrict_map(phi: Multifunction, y: Subset) -> Multifunction:
    """Restrict an endo-multifunction to a nonempty subset: the value at
    each kept point is intersected with the subset."""
    if not phi.is_endo or phi.domain != y.universe:
        raise ValueError("restriction requires an endo map on the subset's universe")
    small = sub_universe(y)
    keep = np.flatnonzero(y.mask)
    return Multifunction(small, small, phi.matrix[np.ix_(keep, keep)].copy())


def restrict_predicate(p: Predicate, y: Subset) -> Predicate:
    if p.universe != y.universe:
        raise ValueError("predicate and subset live in different universes")
    return Predicate(sub_universe(y), p.truth[y.mask].copy())


def _free_rows(p: Predicate) -> tuple[np.ndarray, np.ndarray]:
    # Forced part is the diagonal (in iff p true); all off-diagonal bits
    # range freely between bottom and top.
    n = p.universe.size
    forced = np.zeros((n, n), dtype=bool)
    forced[np.diag_indices(n)] = p.truth
    free = ~np.eye(n, dtype=bool)
    return forced, free


def enumerate_unlocking(p: Predicate, cap: int = 4) -> Iterator[Multifunction]:
    """Yield every multifunction between the bottom and top unlocking
    maps: 2**(n*(n-1)) of them, so a cap guards the universe size."""
    n = p.universe.size
    if n > cap:
        raise CapExceededError(
            "enumerate_unlocking",
            f"universe size {n} exceeds cap {cap}",
        )
    forced, free = _free_rows(p)
    spots = np.argwhere(free)
    for bits in range(1 << len(spots)):
        matrix = forced.copy()
        for k, (i, j) in enumerate(spots):
            if bits >> k & 1:
                matrix[i, j] = True
        yield Multifunction(p.universe, p.universe, matrix)


def sample_unlocking(p: Predicate, rng: random.Random) -> Multifunction:
    """One uniform draw from the unlocking family: each free bit of the
    sandwich chosen independently."""
    n = p.universe.size
    forced, free = _free_rows(p)
    coins = np.array(
        [[rng.getrandbits(1) for _ in range(n)] for _ in range(n)], dtype=bool
    )
    return Multifunction(p.universe, p.universe, forced | (free & coins))
