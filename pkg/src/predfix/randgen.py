"""Deterministic random generators for desk-scale instances.

Built on ``random.Random`` so a fixed seed reproduces the same batch
byte-for-byte; used by the randomized test sweeps and the CLI's
self-check mode.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .instance import ControlInstance, SelectionMap


def random_instance(
    rng: random.Random,
    max_times: int = 3,
    max_alphabet: int = 2,
    max_controls: int = 4,
    max_uncertainties: int = 4,
    max_windows: int = 3,
    beta_pair_cap: int | None = None,
) -> ControlInstance:
    n_times = rng.randint(1, max_times)
    times = [f"t{i + 1}" for i in range(n_times)]
    n_x = rng.randint(1, max_alphabet)
    n_y = rng.randint(1, max_alphabet)
    xalpha = [str(v) for v in range(n_x)]
    yalpha = [str(v) for v in range(n_y)]

    def pick_rows(alphabet: list[str], at_most: int) -> list[tuple[str, ...]]:
        pool = list(itertools.product(alphabet, repeat=n_times))
        count = rng.randint(1, min(at_most, len(pool)))
        chosen = []
        for _ in range(count):
            row = pool.pop(rng.randrange(len(pool)))
            chosen.append(row)
        return chosen

    control_rows = pick_rows(xalpha, max_controls)
    unc_rows = pick_rows(yalpha, max_uncertainties)
    controls = {
        f"c{i + 1}": dict(zip(times, row)) for i, row in enumerate(control_rows)
    }
    uncertainties = {
        f"w{i + 1}": dict(zip(times, row)) for i, row in enumerate(unc_rows)
    }

    subsets = [
        list(win)
        for size in range(1, n_times + 1)
        for win in itertools.combinations(times, size)
    ]
    n_win = rng.randint(1, min(max_windows, len(subsets)))
    family = []
    for _ in range(n_win):
        family.append(subsets.pop(rng.randrange(len(subsets))))

    pairs = [(w, c) for w in uncertainties for c in controls]
    if beta_pair_cap is not None and beta_pair_cap < len(pairs):
        kept = set()
        budget = rng.randint(0, beta_pair_cap)
        order = list(range(len(pairs)))
        rng.shuffle(order)
        kept = {order[i] for i in range(budget)}
        chosen_pairs = [p for i, p in enumerate(pairs) if i in kept]
    else:
        chosen_pairs = [p for p in pairs if rng.random() < 0.7]
    beta: dict[str, list[str]] = {w: [] for w in uncertainties}
    for w, c in chosen_pairs:
        beta[w].append(c)

    return ControlInstance.build(
        times, xalpha, yalpha, controls, uncertainties, family, beta
    )


def random_selection(
    rng: random.Random, instance: ControlInstance, within_beta: bool = True
) -> SelectionMap:
    n_w = len(instance.uncertainties)
    masks = np.zeros(n_w, dtype=np.int64)
    for w in range(n_w):
        limit = (
            int(instance.beta_masks[w]) if within_beta else instance.full_control_mask
        )
        masks[w] = rng.getrandbits(62) & limit
    return SelectionMap(instance, masks)


def random_selection_below(rng: random.Random, phi: SelectionMap) -> SelectionMap:
    masks = np.array(
        [rng.getrandbits(62) & int(m) for m in phi.masks], dtype=np.int64
    )
    return SelectionMap(phi.instance, masks)
