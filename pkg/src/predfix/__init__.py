"""predfix: finite fixed-point calculus for predicate truth sets, with a
greatest non-anticipating selection solver and brute-force oracles."""

from .backend import BACKEND
from .core import (
    Multifunction,
    Predicate,
    Subset,
    Universe,
    fix_points,
    inverse,
    is_unlocking,
    lift_function,
)
from .errors import CapExceededError, InternalInvariantError, ValidationError
from .instance import ControlInstance, FunctionFamily, SelectionMap
from .nonanticipation import (
    agree_set,
    agree_set_excluding,
    common_traces,
    feasible_controls,
    first_violation,
    greatest_selection,
    is_nonanticipating,
    is_nonanticipating_at,
    is_vacuous,
    refine,
    trivial_windows,
    within_feasible,
)
from .order import (
    IterationTrace,
    Poset,
    downset_map,
    greatest_fixpoint_descent,
    is_chain_complete,
    is_isotone,
    is_restrictive,
    iterate_to_fixpoints,
    narrow_to_function,
)
from .product import (
    BoxValue,
    PredicateFamily,
    ProductSpace,
    box_value,
    feasible_coords,
    fix_of_box,
    substitute,
)
from .unlock import (
    UnlockingBounds,
    complement_map,
    enumerate_unlocking,
    in_unlocking_family,
    intersect_maps,
    restrict_map,
    restrict_predicate,
    sample_unlocking,
    sub_universe,
    union_maps,
    unlocking_bottom,
    unlocking_bounds,
    unlocking_top,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoxValue",
    "CapExceededError",
    "ControlInstance",
    "FunctionFamily",
    "InternalInvariantError",
    "IterationTrace",
    "Multifunction",
    "Poset",
    "Predicate",
    "PredicateFamily",
    "ProductSpace",
    "SelectionMap",
    "Subset",
    "Universe",
    "UnlockingBounds",
    "ValidationError",
    "agree_set",
    "agree_set_excluding",
    "box_value",
    "common_traces",
    "complement_map",
    "downset_map",
    "enumerate_unlocking",
    "feasible_controls",
    "feasible_coords",
    "first_violation",
    "fix_of_box",
    "fix_points",
    "greatest_fixpoint_descent",
    "greatest_selection",
    "in_unlocking_family",
    "intersect_maps",
    "inverse",
    "is_chain_complete",
    "is_isotone",
    "is_nonanticipating",
    "is_nonanticipating_at",
    "is_restrictive",
    "is_unlocking",
    "is_vacuous",
    "iterate_to_fixpoints",
    "lift_function",
    "narrow_to_function",
    "refine",
    "restrict_map",
    "restrict_predicate",
    "sample_unlocking",
    "sub_universe",
    "substitute",
    "trivial_windows",
    "union_maps",
    "unlocking_bottom",
    "unlocking_bounds",
    "unlocking_top",
    "within_feasible",
]
