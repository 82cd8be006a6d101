"""JSON document formats: instances, solutions, and calculus demos.

Instances are small and hand-authored, so parsing is strict: unknown
keys, wrong shapes, dangling references, and duplicate function tables
are all rejected with stable error codes and document paths.  Printing
is canonical (declared-order keys, two-space indent, trailing newline)
so that parse(print(x)) is the identity and outputs diff cleanly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import Predicate, Subset, Universe
from .errors import ValidationError
from .instance import ControlInstance
from .order import Poset

FORMAT_VERSION = "1"

_INSTANCE_KEYS = {
    "format_version",
    "time_points",
    "control_alphabet",
    "uncertainty_alphabet",
    "controls",
    "uncertainties",
    "family",
    "beta",
}

_SOLUTION_KEYS = {"format_version", "selection", "iterations", "iteration_sizes", "vacuity"}

_UM_KEYS = {"format_version", "elements", "predicate", "predicate_q", "subset", "order"}


def _loads(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(
            "E_SYNTAX", f"line {e.lineno} column {e.colno}", e.msg
        ) from None


def _object(doc: object, path: str) -> dict:
    if not isinstance(doc, dict):
        raise ValidationError("E_SCHEMA", path, "expected an object")
    return doc


def _check_keys(doc: dict, allowed: set[str], required: set[str], path: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ValidationError(
            "E_SCHEMA", path, f"unknown keys: {', '.join(sorted(unknown))}"
        )
    missing = required - set(doc)
    if missing:
        raise ValidationError(
            "E_SCHEMA", path, f"missing keys: {', '.join(sorted(missing))}"
        )


def _version(doc: dict, path: str) -> None:
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValidationError(
            "E_SCHEMA",
            f"{path}.format_version",
            f"expected {FORMAT_VERSION!r}",
        )


def _str_list(value: object, path: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ValidationError("E_SCHEMA", path, "expected a list of strings")
    return value


def _str_map(value: object, path: str) -> dict[str, str]:
    if not isinstance(value, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in value.items()
    ):
        raise ValidationError("E_SCHEMA", path, "expected an object of strings")
    return value


# -- instances -------------------------------------------------------


def parse_instance(text: str) -> ControlInstance:
    doc = _object(_loads(text), "document")
    _check_keys(doc, _INSTANCE_KEYS, _INSTANCE_KEYS, "document")
    _version(doc, "document")
    times = _str_list(doc["time_points"], "time_points")
    xalpha = _str_list(doc["control_alphabet"], "control_alphabet")
    yalpha = _str_list(doc["uncertainty_alphabet"], "uncertainty_alphabet")

    def rows(key: str) -> dict[str, dict[str, str]]:
        block = _object(doc[key], key)
        return {name: _str_map(row, f"{key}.{name}") for name, row in block.items()}

    controls = rows("controls")
    uncertainties = rows("uncertainties")
    if not isinstance(doc["family"], list):
        raise ValidationError("E_SCHEMA", "family", "expected a list of windows")
    family = [
        _str_list(win, f"family[{k}]") for k, win in enumerate(doc["family"])
    ]
    beta_block = _object(doc["beta"], "beta")
    beta = {
        name: _str_list(ids, f"beta.{name}") for name, ids in beta_block.items()
    }
    return ControlInstance.build(
        times, xalpha, yalpha, controls, uncertainties, family, beta
    )


def instance_document(instance: ControlInstance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "time_points": list(instance.time_points),
        "control_alphabet": list(instance.control_alphabet),
        "uncertainty_alphabet": list(instance.uncertainty_alphabet),
        "controls": {
            c: dict(zip(instance.time_points, row))
            for c, row in zip(instance.controls.ids, instance.controls.rows)
        },
        "uncertainties": {
            w: dict(zip(instance.time_points, row))
            for w, row in zip(instance.uncertainties.ids, instance.uncertainties.rows)
        },
        "family": [
            [instance.time_points[t] for t in win] for win in instance.windows
        ],
        "beta": {
            w: list(instance.controls_of_mask(int(m)))
            for w, m in zip(instance.uncertainties.ids, instance.beta_masks)
        },
    }


def serialize_instance(instance: ControlInstance) -> str:
    return json.dumps(instance_document(instance), indent=2) + "\n"


# -- solutions -------------------------------------------------------


@dataclass
class SolutionDocument:
    selection: dict[str, list[str]]
    iterations: int
    vacuity: dict = field(default_factory=dict)
    iteration_sizes: list[int] | None = None


def parse_solution(text: str) -> SolutionDocument:
    doc = _object(_loads(text), "document")
    _check_keys(
        doc, _SOLUTION_KEYS, {"format_version", "selection", "iterations"}, "document"
    )
    _version(doc, "document")
    block = _object(doc["selection"], "selection")
    selection = {
        name: _str_list(ids, f"selection.{name}") for name, ids in block.items()
    }
    iterations = doc["iterations"]
    if not isinstance(iterations, int) or iterations < 0:
        raise ValidationError("E_SCHEMA", "iterations", "expected a nonnegative integer")
    sizes = doc.get("iteration_sizes")
    if sizes is not None:
        if not isinstance(sizes, list) or not all(
            isinstance(s, int) and s >= 0 for s in sizes
        ):
            raise ValidationError(
                "E_SCHEMA", "iteration_sizes", "expected a list of nonnegative integers"
            )
        if len(sizes) != iterations + 1:
            raise ValidationError(
                "E_SCHEMA",
                "iteration_sizes",
                "expected one entry per iterate, the start included",
            )
        body, last = sizes[:-1], sizes[-1]
        if any(a <= b for a, b in zip(body, body[1:])) or (body and last != body[-1]):
            raise ValidationError(
                "E_SCHEMA",
                "iteration_sizes",
                "sizes must decrease strictly until the final repeat",
            )
    vacuity = doc.get("vacuity", {})
    if not isinstance(vacuity, dict):
        raise ValidationError("E_SCHEMA", "vacuity", "expected an object")
    return SolutionDocument(
        selection=selection,
        iterations=iterations,
        vacuity=vacuity,
        iteration_sizes=sizes,
    )


def parse_selection_only(text: str) -> dict[str, list[str]]:
    """Accept either a full solution document or a bare selection
    document (format_version + selection)."""
    doc = _object(_loads(text), "document")
    _check_keys(doc, _SOLUTION_KEYS, {"format_version", "selection"}, "document")
    _version(doc, "document")
    block = _object(doc["selection"], "selection")
    return {name: _str_list(ids, f"selection.{name}") for name, ids in block.items()}


def solution_document(doc: SolutionDocument) -> dict:
    out: dict = {
        "format_version": FORMAT_VERSION,
        "selection": {w: list(ids) for w, ids in doc.selection.items()},
        "iterations": doc.iterations,
        "vacuity": doc.vacuity,
    }
    if doc.iteration_sizes is not None:
        out["iteration_sizes"] = list(doc.iteration_sizes)
    return out


def serialize_solution(doc: SolutionDocument) -> str:
    return json.dumps(solution_document(doc), indent=2) + "\n"


# -- calculus demo documents ------------------------------------------


@dataclass
class CalculusDocument:
    universe: Universe
    predicate: Predicate
    predicate_q: Predicate | None
    subset: Subset | None
    poset: Poset | None


def parse_calculus(text: str) -> CalculusDocument:
    doc = _object(_loads(text), "document")
    _check_keys(doc, _UM_KEYS, {"format_version", "elements", "predicate"}, "document")
    _version(doc, "document")
    elements = _str_list(doc["elements"], "elements")
    if not elements:
        raise ValidationError("E_EMPTY", "elements", "must be nonempty")
    if len(set(elements)) != len(elements):
        raise ValidationError("E_SCHEMA", "elements", "entries must be distinct")
    universe = Universe(elements)

    def truth(key: str) -> Predicate:
        ids = _str_list(doc[key], key)
        for x in ids:
            if x not in universe:
                raise ValidationError("E_DANGLING_REF", key, f"unknown element {x!r}")
        return Predicate.from_true_ids(universe, ids)

    predicate = truth("predicate")
    predicate_q = truth("predicate_q") if "predicate_q" in doc else None

    subset = None
    if "subset" in doc:
        ids = _str_list(doc["subset"], "subset")
        if not ids:
            raise ValidationError("E_EMPTY", "subset", "must be nonempty")
        for x in ids:
            if x not in universe:
                raise ValidationError("E_DANGLING_REF", "subset", f"unknown element {x!r}")
        subset = Subset.from_ids(universe, ids)

    poset = None
    if "order" in doc:
        if not isinstance(doc["order"], list):
            raise ValidationError("E_SCHEMA", "order", "expected a list of pairs")
        pairs = []
        for k, pair in enumerate(doc["order"]):
            entry = _str_list(pair, f"order[{k}]")
            if len(entry) != 2:
                raise ValidationError("E_SCHEMA", f"order[{k}]", "expected a pair")
            for x in entry:
                if x not in universe:
                    raise ValidationError(
                        "E_DANGLING_REF", f"order[{k}]", f"unknown element {x!r}"
                    )
            pairs.append((entry[0], entry[1]))
        try:
            poset = Poset.from_pairs(universe, pairs, close_transitively=True)
        except ValueError as e:
            raise ValidationError("E_SCHEMA", "order", str(e)) from None
    return CalculusDocument(universe, predicate, predicate_q, subset, poset)
