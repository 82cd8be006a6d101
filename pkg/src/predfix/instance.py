"""Control/uncertainty instances and selection maps.

An instance fixes a finite time set, two alphabets, a named set of
control realizations, a named set of uncertainty realizations, a family
of time windows, and a per-uncertainty bound on admissible controls.
Selection maps assign each uncertainty a subset of the controls; they
are stored as per-uncertainty bitmasks over the control list.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ValidationError

# Bitmask representation: one signed 64-bit word per value set.
MAX_FUNCTIONS = 62


class FunctionFamily:
    """A named set of total functions from the time points to an alphabet.

    Distinct ids must denote extensionally distinct functions; the family
    behaves like a set of functions with stable labels.
    """

    __slots__ = ("label", "time_points", "ids", "rows", "_index")

    def __init__(
        self,
        label: str,
        time_points: tuple[str, ...],
        ids: tuple[str, ...],
        rows: tuple[tuple[str, ...], ...],
    ):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "time_points", time_points)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(ids)})

    def __setattr__(self, name, value):
        raise AttributeError("FunctionFamily is immutable")

    def index(self, member: str) -> int:
        try:
            return self._index[member]
        except KeyError:
            raise KeyError(f"unknown {self.label} id {member!r}") from None

    def __contains__(self, member: str) -> bool:
        return member in self._index

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[str]:
        return iter(self.ids)

    def value(self, member: str, time_point: str) -> str:
        return self.rows[self.index(member)][self.time_points.index(time_point)]

    def trace(self, member: str, window: Sequence[int]) -> tuple[tuple[str, str], ...]:
        """Restriction of a member to a window of time indices, as
        (time, value) pairs in canonical time order."""
        row = self.rows[self.index(member)]
        return tuple((self.time_points[t], row[t]) for t in window)


def _check_rows(
    label: str,
    rows: Mapping[str, Mapping[str, str]],
    time_points: tuple[str, ...],
    alphabet: tuple[str, ...],
) -> FunctionFamily:
    if not rows:
        raise ValidationError("E_EMPTY", label, f"{label} must be nonempty")
    if len(rows) > MAX_FUNCTIONS:
        raise ValidationError(
            "E_CAP", label, f"{label} holds {len(rows)} functions; limit {MAX_FUNCTIONS}"
        )
    alpha = set(alphabet)
    times = set(time_points)
    ids = tuple(rows)
    table: list[tuple[str, ...]] = []
    seen: dict[tuple[str, ...], str] = {}
    for name, mapping in rows.items():
        path = f"{label}.{name}"
        if set(mapping) != times:
            raise ValidationError(
                "E_NOT_TOTAL", path, "function must be defined on exactly the time points"
            )
        for t, v in mapping.items():
            if v not in alpha:
                raise ValidationError(
                    "E_DANGLING_REF", f"{path}.{t}", f"value {v!r} not in alphabet"
                )
        row = tuple(mapping[t] for t in time_points)
        if row in seen:
            raise ValidationError(
                "E_DUPLICATE_FUNCTION",
                path,
                f"extensionally equal to {seen[row]!r}",
            )
        seen[row] = name
        table.append(row)
    return FunctionFamily(label, time_points, ids, tuple(table))


def _check_scalars(path: str, values: Sequence[str]) -> tuple[str, ...]:
    if not values:
        raise ValidationError("E_EMPTY", path, "must be nonempty")
    out = tuple(values)
    if len(set(out)) != len(out):
        raise ValidationError("E_SCHEMA", path, "entries must be distinct")
    return out


class ControlInstance:
    """Immutable, fully validated problem data.  Use :meth:`build`."""

    __slots__ = (
        "time_points",
        "control_alphabet",
        "uncertainty_alphabet",
        "controls",
        "uncertainties",
        "windows",
        "beta_masks",
        "__dict__",
    )

    def __init__(
        self,
        time_points: tuple[str, ...],
        control_alphabet: tuple[str, ...],
        uncertainty_alphabet: tuple[str, ...],
        controls: FunctionFamily,
        uncertainties: FunctionFamily,
        windows: tuple[tuple[int, ...], ...],
        beta_masks: np.ndarray,
    ):
        beta_masks = np.ascontiguousarray(beta_masks, dtype=np.int64)
        beta_masks.flags.writeable = False
        object.__setattr__(self, "time_points", time_points)
        object.__setattr__(self, "control_alphabet", control_alphabet)
        object.__setattr__(self, "uncertainty_alphabet", uncertainty_alphabet)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "uncertainties", uncertainties)
        object.__setattr__(self, "windows", windows)
        object.__setattr__(self, "beta_masks", beta_masks)

    def __setattr__(self, name, value):
        raise AttributeError("ControlInstance is immutable")

    @classmethod
    def build(
        cls,
        time_points: Sequence[str],
        control_alphabet: Sequence[str],
        uncertainty_alphabet: Sequence[str],
        controls: Mapping[str, Mapping[str, str]],
        uncertainties: Mapping[str, Mapping[str, str]],
        family: Sequence[Sequence[str]],
        beta: Mapping[str, Sequence[str]],
    ) -> "ControlInstance":
        times = _check_scalars("time_points", time_points)
        xalpha = _check_scalars("control_alphabet", control_alphabet)
        yalpha = _check_scalars("uncertainty_alphabet", uncertainty_alphabet)
        ctrl = _check_rows("controls", controls, times, xalpha)
        unc = _check_rows("uncertainties", uncertainties, times, yalpha)

        if not family:
            raise ValidationError("E_EMPTY", "family", "window family must be nonempty")
        windows: list[tuple[int, ...]] = []
        seen_windows: set[tuple[int, ...]] = set()
        tindex = {t: i for i, t in enumerate(times)}
        for k, win in enumerate(family):
            path = f"family[{k}]"
            if not win:
                raise ValidationError("E_EMPTY", path, "window must be nonempty")
            if len(set(win)) != len(win):
                raise ValidationError("E_SCHEMA", path, "duplicate time point in window")
            try:
                idx = tuple(sorted(tindex[t] for t in win))
            except KeyError as e:
                raise ValidationError(
                    "E_DANGLING_REF", path, f"unknown time point {e.args[0]!r}"
                ) from None
            if idx in seen_windows:
                raise ValidationError("E_DUPLICATE_WINDOW", path, "window repeated")
            seen_windows.add(idx)
            windows.append(idx)

        if set(beta) != set(unc.ids):
            raise ValidationError(
                "E_SCHEMA", "beta", "bound must be given for exactly the uncertainty ids"
            )
        masks = np.zeros(len(unc.ids), dtype=np.int64)
        for w_id in unc.ids:
            chosen = beta[w_id]
            if len(set(chosen)) != len(tuple(chosen)):
                raise ValidationError(
                    "E_SCHEMA", f"beta.{w_id}", "duplicate control id"
                )
            for c in chosen:
                if c not in ctrl:
                    raise ValidationError(
                        "E_DANGLING_REF", f"beta.{w_id}", f"unknown control id {c!r}"
                    )
                masks[unc.index(w_id)] |= 1 << ctrl.index(c)
        return cls(times, xalpha, yalpha, ctrl, unc, tuple(windows), masks)

    # -- conversions -------------------------------------------------

    def window_ids(self, k: int) -> tuple[str, ...]:
        return tuple(self.time_points[t] for t in self.windows[k])

    def window_index(self, window: Iterable[str]) -> tuple[int, ...]:
        """Resolve time-point ids to a canonical window (sorted indices)."""
        win = tuple(window)
        if not win:
            raise ValueError("window must be nonempty")
        if len(set(win)) != len(win):
            raise ValueError("duplicate time point in window")
        tindex = {t: i for i, t in enumerate(self.time_points)}
        try:
            return tuple(sorted(tindex[t] for t in win))
        except KeyError as e:
            raise ValueError(f"unknown time point {e.args[0]!r}") from None

    def controls_of_mask(self, mask: int) -> tuple[str, ...]:
        return tuple(
            c for i, c in enumerate(self.controls.ids) if mask >> i & 1
        )

    def mask_of_controls(self, ids: Iterable[str]) -> int:
        mask = 0
        for c in ids:
            mask |= 1 << self.controls.index(c)
        return mask

    @property
    def full_control_mask(self) -> int:
        return (1 << len(self.controls)) - 1

    def beta_selection(self) -> "SelectionMap":
        return SelectionMap(self, self.beta_masks.copy())

    @cached_property
    def tables(self):
        from ._tables import build_tables

        return build_tables(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ControlInstance)
            and self.time_points == other.time_points
            and self.control_alphabet == other.control_alphabet
            and self.uncertainty_alphabet == other.uncertainty_alphabet
            and self.controls.ids == other.controls.ids
            and self.controls.rows == other.controls.rows
            and self.uncertainties.ids == other.uncertainties.ids
            and self.uncertainties.rows == other.uncertainties.rows
            and self.windows == other.windows
            and np.array_equal(self.beta_masks, other.beta_masks)
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.time_points,
                self.controls.ids,
                self.uncertainties.ids,
                self.windows,
                self.beta_masks.tobytes(),
            )
        )

    def __repr__(self) -> str:
        return (
            f"ControlInstance(|I|={len(self.time_points)}, "
            f"|C|={len(self.controls)}, |W|={len(self.uncertainties)}, "
            f"windows={len(self.windows)})"
        )


class SelectionMap:
    """Per-uncertainty subset of the controls, as int64 bitmasks."""

    __slots__ = ("instance", "masks")

    def __init__(self, instance: ControlInstance, masks: np.ndarray):
        masks = np.ascontiguousarray(masks, dtype=np.int64)
        if masks.shape != (len(instance.uncertainties),):
            raise ValueError("one value per uncertainty required")
        if np.any(masks < 0) or np.any(masks > instance.full_control_mask):
            raise ValueError("mask out of range for the control set")
        masks.flags.writeable = False
        object.__setattr__(self, "instance", instance)
        object.__setattr__(self, "masks", masks)

    def __setattr__(self, name, value):
        raise AttributeError("SelectionMap is immutable")

    @classmethod
    def from_dict(
        cls, instance: ControlInstance, values: Mapping[str, Iterable[str]]
    ) -> "SelectionMap":
        unc = instance.uncertainties
        if set(values) != set(unc.ids):
            raise ValueError("selection must assign exactly the uncertainty ids")
        masks = np.zeros(len(unc), dtype=np.int64)
        for w_id, ids in values.items():
            masks[unc.index(w_id)] = instance.mask_of_controls(ids)
        return cls(instance, masks)

    @classmethod
    def constant(cls, instance: ControlInstance, ids: Iterable[str]) -> "SelectionMap":
        mask = instance.mask_of_controls(ids)
        return cls(instance, np.full(len(instance.uncertainties), mask, dtype=np.int64))

    def value(self, w_id: str) -> tuple[str, ...]:
        return self.instance.controls_of_mask(
            int(self.masks[self.instance.uncertainties.index(w_id)])
        )

    def to_dict(self) -> dict[str, list[str]]:
        return {w: list(self.value(w)) for w in self.instance.uncertainties.ids}

    def size(self) -> int:
        return sum(int(m).bit_count() for m in self.masks)

    def le(self, other: "SelectionMap") -> bool:
        self._check(other)
        return bool(np.all((self.masks & ~other.masks) == 0))

    def meet(self, other: "SelectionMap") -> "SelectionMap":
        self._check(other)
        return SelectionMap(self.instance, self.masks & other.masks)

    def join(self, other: "SelectionMap") -> "SelectionMap":
        self._check(other)
        return SelectionMap(self.instance, self.masks | other.masks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SelectionMap)
            and self.instance is other.instance
            and np.array_equal(self.masks, other.masks)
        )

    def __hash__(self) -> int:
        return hash((id(self.instance), self.masks.tobytes()))

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{w}->{{{','.join(self.value(w))}}}" for w in self.instance.uncertainties
        )
        return f"SelectionMap({parts})"

    def _check(self, other: "SelectionMap") -> None:
        if self.instance is not other.instance:
            raise ValueError("selection maps belong to different instances")
