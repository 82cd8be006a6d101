import itertools
from pathlib import Path

import numpy as np
import pytest

from predfix import ControlInstance, Poset, Predicate, Universe

INSTANCE_DIR = Path(__file__).resolve().parent.parent / "instances"


def d2_instance() -> ControlInstance:
    """Two time points, binary alphabets, one-window family; the worked
    example used throughout the suite."""
    return ControlInstance.build(
        time_points=["1", "2"],
        control_alphabet=["0", "1"],
        uncertainty_alphabet=["0", "1"],
        controls={
            "c00": {"1": "0", "2": "0"},
            "c01": {"1": "0", "2": "1"},
            "c10": {"1": "1", "2": "0"},
            "c11": {"1": "1", "2": "1"},
        },
        uncertainties={
            "w00": {"1": "0", "2": "0"},
            "w01": {"1": "0", "2": "1"},
        },
        family=[["1"]],
        beta={"w00": ["c00", "c10"], "w01": ["c00", "c01"]},
    )


@pytest.fixture
def d2() -> ControlInstance:
    return d2_instance()


def all_predicates(universe: Universe):
    n = universe.size
    for bits in range(1 << n):
        truth = np.array([(bits >> i) & 1 for i in range(n)], dtype=bool)
        yield Predicate(universe, truth)


def all_posets(n: int):
    """Every partial order on n labeled elements: choose one of three
    states per unordered pair, keep the transitive ones."""
    names = [f"x{i}" for i in range(n)]
    universe = Universe(names)
    pairs = list(itertools.combinations(range(n), 2))
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        leq = np.eye(n, dtype=bool)
        for (i, j), s in zip(pairs, states):
            if s == 1:
                leq[i, j] = True
            elif s == 2:
                leq[j, i] = True
        closed = leq @ leq
        if np.any(closed & ~leq):
            continue
        yield Poset(universe, leq)


def all_total_orders(n: int):
    names = [f"x{i}" for i in range(n)]
    universe = Universe(names)
    for perm in itertools.permutations(range(n)):
        leq = np.eye(n, dtype=bool)
        for a in range(n):
            for b in range(a + 1, n):
                leq[perm[a], perm[b]] = True
        yield Poset(universe, leq)
