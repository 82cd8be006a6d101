"""Unlocking a conjunction of predicates over a finite product space.

Each predicate in a family constrains one coordinate through its
feasibility set: the values that keep the predicate true when swapped
into a given tuple.  The per-coordinate sets assemble into a box-valued
map whose fixed points are exactly the tuples satisfying the whole
conjunction.  Boxes are never expanded to tuple sets; only their
per-coordinate generators and a membership test exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterator, Mapping

import numpy as np

from .core import Universe
from .errors import CapExceededError, InternalInvariantError


class ProductSpace:
    """An ordered list of named indices, each with its own finite factor."""

    __slots__ = ("indices", "factors", "_pos")

    def __init__(self, factors: Mapping[str, Universe]):
        if not factors:
            raise ValueError("product space needs at least one index")
        object.__setattr__(self, "indices", tuple(factors))
        object.__setattr__(self, "factors", tuple(factors.values()))
        object.__setattr__(
            self, "_pos", {name: k for k, name in enumerate(factors)}
        )

    def __setattr__(self, name, value):
        raise AttributeError("ProductSpace is immutable")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(u.size for u in self.factors)

    def position(self, index: str) -> int:
        try:
            return self._pos[index]
        except KeyError:
            raise KeyError(f"unknown index {index!r}") from None

    def factor(self, index: str) -> Universe:
        return self.factors[self.position(index)]

    def check_tuple(self, x: tuple[str, ...]) -> None:
        if len(x) != len(self.indices):
            raise ValueError(f"tuple arity {len(x)} != {len(self.indices)}")
        for coord, u in zip(x, self.factors):
            u.index(coord)

    def coords(self, x: tuple[str, ...]) -> tuple[int, ...]:
        return tuple(u.index(c) for c, u in zip(x, self.factors))

    def tuples(self) -> Iterator[tuple[str, ...]]:
        """All tuples in row-major canonical order."""
        for ix in np.ndindex(self.shape):
            yield tuple(u.elements[i] for u, i in zip(self.factors, ix))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProductSpace)
            and self.indices == other.indices
            and self.factors == other.factors
        )

    def __hash__(self) -> int:
        return hash((self.indices, self.factors))


def substitute(
    space: ProductSpace, x: tuple[str, ...], index: str, y: str
) -> tuple[str, ...]:
    """Replace one coordinate of a tuple, leaving the rest unchanged."""
    space.check_tuple(x)
    k = space.position(index)
    space.factors[k].index(y)
    return x[:k] + (y,) + x[k + 1 :]


class PredicateFamily:
    """Predicates over a product, each pinned to a coordinate by an
    injection of family members into indices (identity by default).

    Truth tables are materialized numpy arrays over the enumerated
    product, one per member.
    """

    __slots__ = ("space", "members", "tables", "pin")

    def __init__(
        self,
        space: ProductSpace,
        tables: Mapping[str, np.ndarray],
        pin: Mapping[str, str] | None = None,
    ):
        if len(tables) > len(space.indices):
            raise ValueError("family has more members than the product has indices")
        members = tuple(tables)
        if pin is None:
            pin = {j: j for j in members}
        if set(pin) != set(members):
            raise ValueError("pin must map exactly the family members")
        targets = [pin[j] for j in members]
        if len(set(targets)) != len(targets):
            raise ValueError("pin must be injective")
        fixed = {}
        for j in members:
            space.position(pin[j])
            t = np.ascontiguousarray(tables[j], dtype=bool)
            if t.shape != space.shape:
                raise ValueError(
                    f"table for {j!r} has shape {t.shape}, expected {space.shape}"
                )
            t.flags.writeable = False
            fixed[j] = t
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "tables", fixed)
        object.__setattr__(self, "pin", dict(pin))

    def __setattr__(self, name, value):
        raise AttributeError("PredicateFamily is immutable")

    def member_for_index(self, index: str) -> str | None:
        for j, i in self.pin.items():
            if i == index:
                return j
        return None

    def holds(self, j: str, x: tuple[str, ...]) -> bool:
        return bool(self.tables[j][self.space.coords(x)])

    def conjunction_holds(self, x: tuple[str, ...]) -> bool:
        c = self.space.coords(x)
        return all(bool(t[c]) for t in self.tables.values())


def feasible_coords(
    space: ProductSpace, table: np.ndarray, index: str, x: tuple[str, ...]
) -> tuple[str, ...]:
    """Values at one coordinate that keep the predicate true when
    substituted into x, other coordinates held fixed."""
    space.check_tuple(x)
    k = space.position(index)
    sel: list[object] = list(space.coords(x))
    sel[k] = slice(None)
    column = table[tuple(sel)]
    factor = space.factors[k]
    return tuple(factor.elements[i] for i in np.flatnonzero(column))


@dataclass(frozen=True)
class BoxValue:
    """One box: a per-index family of coordinate sets.  Membership of a
    tuple means coordinate-wise membership."""

    space: ProductSpace
    sets: tuple[tuple[str, ...], ...]

    def contains(self, z: tuple[str, ...]) -> bool:
        self.space.check_tuple(z)
        return all(c in s for c, s in zip(z, self.sets))

    def expand(self) -> Iterator[tuple[str, ...]]:
        """Enumerate the box's tuples (tests only; boxes grow fast)."""
        import itertools

        yield from itertools.product(*self.sets)


def box_value(family: PredicateFamily, x: tuple[str, ...]) -> BoxValue:
    """The box-valued map at x: for a pinned index, the feasibility set
    of its predicate; for unpinned indices, the whole factor."""
    space = family.space
    space.check_tuple(x)
    sets = []
    for index in space.indices:
        j = family.member_for_index(index)
        if j is None:
            sets.append(space.factor(index).elements)
        else:
            sets.append(feasible_coords(space, family.tables[j], index, x))
    return BoxValue(space, tuple(sets))


def fix_of_box(family: PredicateFamily, cap: int = 10**6) -> list[tuple[str, ...]]:
    """Tuples belonging to their own box; equals the truth set of the
    family's conjunction, and the two computations are compared on every
    call."""
    space = family.space
    if prod(space.shape) > cap:
        raise CapExceededError(
            "fix_of_box", f"product size {prod(space.shape)} exceeds cap {cap}"
        )
    fixed = [x for x in space.tuples() if box_value(family, x).contains(x)]
    direct = [x for x in space.tuples() if family.conjunction_holds(x)]
    if fixed != direct:
        raise InternalInvariantError(
            "box fixed points disagree with the direct conjunction"
        )
    return fixed
