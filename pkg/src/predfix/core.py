"""Finite universes, subsets, predicates, and multivalued maps.

Everything is dense: a subset is a boolean vector over an enumerated
universe, a multivalued map is a boolean incidence matrix.  Universes
here are intentionally small; exhaustive enumeration is the point.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping

import numpy as np


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=bool)
    a.flags.writeable = False
    return a


class Universe:
    """An enumerated finite set of named elements.

    Element order is fixed at construction and defines the canonical
    order of every set printed or emitted downstream.  Two universes
    compare equal iff they hold the same elements in the same order.
    """

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[str]):
        elems = tuple(elements)
        if not elems:
            raise ValueError("universe must be nonempty")
        index = {x: i for i, x in enumerate(elems)}
        if len(index) != len(elems):
            raise ValueError("universe elements must be pairwise distinct")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_index", index)

    def __setattr__(self, name, value):
        raise AttributeError("Universe is immutable")

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, element: str) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise KeyError(f"element {element!r} not in universe") from None

    def __contains__(self, element: str) -> bool:
        return element in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Universe) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"Universe({list(self.elements)!r})"


class Subset:
    """A subset of a universe as a dense boolean membership vector."""

    __slots__ = ("universe", "mask")

    def __init__(self, universe: Universe, mask: np.ndarray):
        mask = _frozen(mask)
        if mask.shape != (universe.size,):
            raise ValueError(
                f"mask length {mask.shape} does not match universe size {universe.size}"
            )
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("Subset is immutable")

    @classmethod
    def from_ids(cls, universe: Universe, ids: Iterable[str]) -> "Subset":
        mask = np.zeros(universe.size, dtype=bool)
        for x in ids:
            mask[universe.index(x)] = True
        return cls(universe, mask)

    @classmethod
    def full(cls, universe: Universe) -> "Subset":
        return cls(universe, np.ones(universe.size, dtype=bool))

    @classmethod
    def empty(cls, universe: Universe) -> "Subset":
        return cls(universe, np.zeros(universe.size, dtype=bool))

    def ids(self) -> tuple[str, ...]:
        """Members in canonical universe order."""
        return tuple(x for x, m in zip(self.universe.elements, self.mask) if m)

    def __iter__(self) -> Iterator[str]:
        return iter(self.ids())

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, element: str) -> bool:
        return bool(self.mask[self.universe.index(element)])

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.universe, self.mask & other.mask)

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.universe, self.mask | other.mask)

    def __invert__(self) -> "Subset":
        return Subset(self.universe, ~self.mask)

    def __le__(self, other: "Subset") -> bool:
        self._check(other)
        return bool(np.all(~self.mask | other.mask))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subset)
            and self.universe == other.universe
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.mask.tobytes()))

    def __repr__(self) -> str:
        return f"Subset({{{', '.join(self.ids())}}})"

    def _check(self, other: "Subset") -> None:
        if self.universe != other.universe:
            raise ValueError("subsets live in different universes")


class Predicate:
    """A {0,1}-valued function on a universe, stored as its truth vector."""

    __slots__ = ("universe", "truth")

    def __init__(self, universe: Universe, truth: np.ndarray):
        truth = _frozen(truth)
        if truth.shape != (universe.size,):
            raise ValueError(
                f"truth vector length {truth.shape} does not match universe size"
            )
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "truth", truth)

    def __setattr__(self, name, value):
        raise AttributeError("Predicate is immutable")

    @classmethod
    def from_true_ids(cls, universe: Universe, ids: Iterable[str]) -> "Predicate":
        return cls(universe, Subset.from_ids(universe, ids).mask)

    @classmethod
    def always_true(cls, universe: Universe) -> "Predicate":
        return cls(universe, np.ones(universe.size, dtype=bool))

    @classmethod
    def always_false(cls, universe: Universe) -> "Predicate":
        return cls(universe, np.zeros(universe.size, dtype=bool))

    def __call__(self, element: str) -> bool:
        return bool(self.truth[self.universe.index(element)])

    def truth_set(self) -> Subset:
        return Subset(self.universe, self.truth)

    def __invert__(self) -> "Predicate":
        return Predicate(self.universe, ~self.truth)

    def __and__(self, other: "Predicate") -> "Predicate":
        self._check(other)
        return Predicate(self.universe, self.truth & other.truth)

    def __or__(self, other: "Predicate") -> "Predicate":
        self._check(other)
        return Predicate(self.universe, self.truth | other.truth)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Predicate)
            and self.universe == other.universe
            and np.array_equal(self.truth, other.truth)
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.truth.tobytes()))

    def __repr__(self) -> str:
        return f"Predicate(true at {{{', '.join(self.truth_set().ids())}}})"

    def _check(self, other: "Predicate") -> None:
        if self.universe != other.universe:
            raise ValueError("predicates live in different universes")


class Multifunction:
    """A map assigning to each domain element a subset of the codomain.

    Stored as a boolean matrix: ``matrix[i, j]`` iff the j-th codomain
    element belongs to the image of the i-th domain element.  Values may
    be empty.
    """

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain: Universe, codomain: Universe, matrix: np.ndarray):
        matrix = _frozen(matrix)
        if matrix.shape != (domain.size, codomain.size):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match "
                f"({domain.size}, {codomain.size})"
            )
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("Multifunction is immutable")

    @classmethod
    def from_values(
        cls,
        domain: Universe,
        values: Mapping[str, Iterable[str]],
        codomain: Universe | None = None,
    ) -> "Multifunction":
        codomain = codomain if codomain is not None else domain
        matrix = np.zeros((domain.size, codomain.size), dtype=bool)
        for x, ys in values.items():
            i = domain.index(x)
            for y in ys:
                matrix[i, codomain.index(y)] = True
        return cls(domain, codomain, matrix)

    @classmethod
    def identity(cls, universe: Universe) -> "Multifunction":
        return cls(universe, universe, np.eye(universe.size, dtype=bool))

    @property
    def is_endo(self) -> bool:
        return self.domain == self.codomain

    def value(self, element: str) -> Subset:
        return Subset(self.codomain, self.matrix[self.domain.index(element)])

    def le(self, other: "Multifunction") -> bool:
        """Pointwise containment: every value of self inside other's."""
        self._check(other)
        return bool(np.all(~self.matrix | other.matrix))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Multifunction)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.matrix.tobytes()))

    def __repr__(self) -> str:
        rows = ", ".join(
            f"{x}->{{{','.join(self.value(x).ids())}}}" for x in self.domain
        )
        return f"Multifunction({rows})"

    def _check(self, other: "Multifunction") -> None:
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ValueError("multifunctions have different domain/codomain")


def fix_points(f: Multifunction) -> Subset:
    """Elements contained in their own image: {x | x in f(x)}."""
    if not f.is_endo:
        raise ValueError("fixed points require an endo-multifunction")
    return Subset(f.domain, np.diagonal(f.matrix).copy())


def inverse(f: Multifunction) -> Multifunction:
    """Transpose the incidence relation: b in f(a) iff a in inverse(f)(b)."""
    return Multifunction(f.codomain, f.domain, f.matrix.T.copy())


def is_unlocking(f: Multifunction, p: Predicate) -> bool:
    """True iff the fixed-point set of f is exactly the truth set of p."""
    if not f.is_endo:
        raise ValueError("unlocking test requires an endo-multifunction")
    if f.domain != p.universe:
        raise ValueError("multifunction and predicate live in different universes")
    return fix_points(f) == p.truth_set()


def lift_function(
    g: Mapping[str, str] | Callable[[str], str], universe: Universe
) -> Multifunction:
    """Represent an ordinary function as a singleton-valued multifunction."""
    lookup = g.__getitem__ if isinstance(g, Mapping) else g
    matrix = np.zeros((universe.size, universe.size), dtype=bool)
    for i, x in enumerate(universe.elements):
        matrix[i, universe.index(lookup(x))] = True
    return Multifunction(universe, universe, matrix)
