"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line (run with ``pytest tests/test_acceptance.py -v -s``).  Time limits
are asserted where stated; the JIT warmup fixture keeps compilation out
of the timed sections.
"""

import random
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from predfix import (
    ControlInstance,
    Predicate,
    SelectionMap,
    Universe,
    complement_map,
    enumerate_unlocking,
    fix_points,
    greatest_selection,
    in_unlocking_family,
    intersect_maps,
    inverse,
    is_unlocking,
    narrow_to_function,
    refine,
    restrict_map,
    restrict_predicate,
    sample_unlocking,
    union_maps,
    unlocking_bottom,
    unlocking_top,
)
from predfix import backend
from predfix.cli import main as cli_main
from predfix.nonanticipation import enumerate_selection_masks
from predfix.oracle import (
    all_multifunctions,
    greatest_nonanticipating,
    is_nonanticipating_literal,
)
from predfix.randgen import random_instance, random_selection, random_selection_below

from conftest import INSTANCE_DIR, all_predicates, all_total_orders, d2_instance


@contextmanager
def criterion(num: int, name: str, limit: float | None = None):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        print(f"[acceptance] criterion {num:02d} {name}: FAIL ({elapsed:.2f}s)", flush=True)
        raise
    elapsed = time.perf_counter() - start
    if limit is not None:
        assert elapsed < limit, f"criterion {num} took {elapsed:.2f}s, limit {limit}s"
    print(f"[acceptance] criterion {num:02d} {name}: PASS ({elapsed:.2f}s)", flush=True)


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # pull JIT compilation out of the timed sections
    inst = d2_instance()
    phis = enumerate_selection_masks(inst.beta_masks)
    t = inst.tables
    backend.refine_traces(phis, t)
    backend.refine_traces_excl(phis, t)
    backend.refine_elements(phis, t)
    backend.na_implication(phis, t)
    backend.na_trace_eq(phis, t)
    backend.na_symmetric(phis, t)
    backend.feasible_masks(phis, t)
    backend.stabilize(phis, t, 32)
    backend.na_implication_at(phis, 0, t)
    backend.na_trace_eq_at(phis, 0, t)


def test_criterion_01_membership_three_ways():
    with criterion(1, "sandwich membership and inverse closure", limit=10.0):
        checked = 0
        for n in (1, 2, 3):
            u = Universe([f"e{i}" for i in range(n)])
            preds = list(all_predicates(u))
            maps = list(all_multifunctions(u))
            assert len(maps) == (1 << n) ** n
            for f in maps:
                inv = inverse(f)
                for p in preds:
                    direct = is_unlocking(f, p)
                    assert direct == in_unlocking_family(f, p)
                    assert direct == is_unlocking(inv, p)
                    checked += 1
        assert checked == sum((1 << n) ** n * (1 << n) for n in (1, 2, 3))


def test_criterion_02_restriction_family_equality():
    with criterion(2, "restricted family equals family of restriction", limit=60.0):
        u = Universe(["e0", "e1", "e2"])
        from predfix import Subset

        for p in all_predicates(u):
            members = list(enumerate_unlocking(p))
            for bits in range(1, 8):
                y = Subset(u, np.array([bits >> i & 1 for i in range(3)], dtype=bool))
                restricted = {restrict_map(f, y) for f in members}
                target = set(enumerate_unlocking(restrict_predicate(p, y)))
                assert restricted == target


def test_criterion_03_boolean_combinators():
    with criterion(3, "combinators unlock compound predicates"):
        # exhaustive family members for every predicate pair, |X| <= 3
        for n in (1, 2, 3):
            u = Universe([f"e{i}" for i in range(n)])
            preds = list(all_predicates(u))
            members = {p: list(enumerate_unlocking(p)) for p in preds}
            for p in preds:
                for g in members[p]:
                    assert fix_points(complement_map(g)) == (~p).truth_set()
            for p in preds:
                for q in preds:
                    meet_truth = (p & q).truth_set()
                    join_truth = (p | q).truth_set()
                    for g in members[p]:
                        for h in members[q]:
                            assert fix_points(intersect_maps(g, h)) == meet_truth
                            assert fix_points(union_maps(g, h)) == join_truth
        # randomized larger universes
        rng = random.Random(101)
        for _ in range(500):
            n = rng.randint(4, 6)
            u = Universe([f"e{i}" for i in range(n)])
            p = Predicate(u, np.array([rng.getrandbits(1) for _ in range(n)], bool))
            q = Predicate(u, np.array([rng.getrandbits(1) for _ in range(n)], bool))
            g = sample_unlocking(p, rng)
            h = sample_unlocking(q, rng)
            assert fix_points(complement_map(g)) == (~p).truth_set()
            assert fix_points(intersect_maps(g, h)) == (p & q).truth_set()
            assert fix_points(union_maps(g, h)) == (p | q).truth_set()


def test_criterion_04_narrowing():
    with criterion(4, "narrowed maps are restrictive with exact fixed points"):
        rng = random.Random(103)
        for n in (1, 2, 3):
            for poset in all_total_orders(n):
                for pred in all_predicates(poset.universe):
                    maps = [unlocking_bottom(pred), unlocking_top(pred)]
                    maps += [sample_unlocking(pred, rng) for _ in range(100)]
                    for f in maps:
                        result = narrow_to_function(f, pred, poset)
                        for x, gx in result.mapping.items():
                            assert poset.le(gx, x)
                        assert set(result.fixed_points()) == set(
                            pred.truth_set().ids()
                        )


def test_criterion_05_product_families():
    with criterion(5, "box fixed points equal conjunction truth sets", limit=30.0):
        from test_product import random_family
        from predfix import fix_of_box

        rng = random.Random(107)
        for _ in range(200):
            fam = random_family(rng)
            expected = [x for x in fam.space.tuples() if fam.conjunction_holds(x)]
            assert fix_of_box(fam) == expected


def test_criterion_06_form_equivalences():
    with criterion(6, "per-uncertainty and refinement forms coincide"):
        rng = random.Random(109)
        pairs = 0
        for _ in range(300):
            inst = random_instance(rng)
            t = inst.tables
            samples = [inst.beta_selection().masks]
            samples += [random_selection(rng, inst, within_beta=False).masks for _ in range(2)]
            samples += [random_selection(rng, inst).masks for _ in range(2)]
            phis = np.stack(samples)
            for w in range(len(inst.uncertainties)):
                impl = backend.na_implication_at(phis, w, t)
                trace_eq = backend.na_trace_eq_at(phis, w, t)
                assert np.array_equal(impl, trace_eq)
                pairs += len(samples)
            by_traces = backend.refine_traces(phis, t)
            by_elements = backend.refine_elements(phis, t)
            by_traces_excl = backend.refine_traces_excl(phis, t)
            assert np.array_equal(by_traces, by_elements)
            assert np.array_equal(by_traces, by_traces_excl)
        assert pairs >= 300


def _sweep_instances() -> list[ControlInstance]:
    instances = [d2_instance()]
    # full bound over all four controls and uncertainties: 2**16 selections
    full = {
        name: {"1": name[1], "2": name[2]}
        for name in ("f00", "f01", "f10", "f11")
    }
    instances.append(
        ControlInstance.build(
            ["1", "2"],
            ["0", "1"],
            ["0", "1"],
            full,
            {k.replace("f", "w"): v for k, v in full.items()},
            [["1"]],
            {w: list(full) for w in ("w00", "w01", "w10", "w11")},
        )
    )
    rng = random.Random(113)
    while len(instances) < 6:
        inst = random_instance(rng, beta_pair_cap=12)
        if len(inst.uncertainties) >= 2 and inst.beta_selection().size() >= 6:
            instances.append(inst)
    return instances


def test_criterion_07_unlocking_equivalence_exhaustive():
    with criterion(7, "fixedness = feasibility = check = brute force", limit=120.0):
        total = 0
        for inst in _sweep_instances():
            t = inst.tables
            phis = enumerate_selection_masks(inst.beta_masks)
            fixed_traces = np.all(backend.refine_traces(phis, t) == phis, axis=1)
            fixed_elements = np.all(backend.refine_elements(phis, t) == phis, axis=1)
            fixed_excl = np.all(backend.refine_traces_excl(phis, t) == phis, axis=1)
            accepted_impl = backend.na_implication(phis, t)
            accepted_eq = backend.na_trace_eq(phis, t)
            accepted_sym = backend.na_symmetric(phis, t)
            feasible = backend.feasible_masks(phis, t)
            inside = np.all((phis & ~feasible) == 0, axis=1)
            brute = np.fromiter(
                (
                    is_nonanticipating_literal(SelectionMap(inst, row))
                    for row in phis
                ),
                dtype=bool,
                count=len(phis),
            )
            for arr in (
                fixed_elements,
                fixed_excl,
                accepted_impl,
                accepted_eq,
                accepted_sym,
                inside,
                brute,
            ):
                assert np.array_equal(fixed_traces, arr)
            total += len(phis)
        # the crafted full-bound instance alone contributes 2**16 maps
        assert total >= (1 << 16) + 16


def test_criterion_08_greatest_selection_vs_oracle():
    with criterion(8, "solver equals pointwise-union brute force", limit=300.0):
        d2 = d2_instance()
        solved, _ = greatest_selection(d2)
        assert solved.to_dict() == {"w00": ["c00"], "w01": ["c00", "c01"]}
        assert solved == greatest_nonanticipating(d2)
        rng = random.Random(127)
        for _ in range(100):
            inst = random_instance(rng, beta_pair_cap=8)
            solved, trace = greatest_selection(inst)
            assert solved == greatest_nonanticipating(inst)
            assert trace.converged


def test_criterion_09_every_start_stabilizes_on_the_truth_set():
    with criterion(9, "iterates from all starts cover exactly the fixed points"):
        rng = random.Random(131)
        instances = [d2_instance()]
        while len(instances) < 4:
            inst = random_instance(rng, beta_pair_cap=10)
            if len(inst.uncertainties) >= 2:
                instances.append(inst)
        for inst in instances:
            t = inst.tables
            phis = enumerate_selection_masks(inst.beta_masks)
            bound = inst.beta_selection().size() + 1
            finals, steps = backend.stabilize(phis, t, bound)
            assert np.all(steps >= 1)
            sizes = np.zeros(len(phis), dtype=np.int64)
            for w in range(phis.shape[1]):
                for c in range(64):
                    sizes += (phis[:, w] >> c) & 1
            assert np.all(steps <= sizes + 1)
            accepted = backend.na_implication(phis, t)
            reached = {tuple(row) for row in finals.tolist()}
            fixed_set = {
                tuple(row) for row, ok in zip(phis.tolist(), accepted) if ok
            }
            assert reached == fixed_set


def test_criterion_10_refinement_laws():
    with criterion(10, "refinement is restrictive and isotone"):
        rng = random.Random(137)
        restrictive_checked = 0
        isotone_checked = 0
        for _ in range(100):
            inst = random_instance(rng)
            t = inst.tables
            upper = np.stack(
                [random_selection(rng, inst, within_beta=False).masks for _ in range(100)]
            )
            lower = np.stack(
                [
                    random_selection_below(rng, SelectionMap(inst, row)).masks
                    for row in upper
                ]
            )
            r_upper = backend.refine_traces(upper, t)
            r_lower = backend.refine_traces(lower, t)
            # the element form must agree everywhere it is evaluated
            assert np.array_equal(r_upper, backend.refine_elements(upper, t))
            assert np.all((r_upper & ~upper) == 0)
            assert np.all((r_lower & ~lower) == 0)
            restrictive_checked += 2 * len(upper)
            assert np.all((r_lower & ~r_upper) == 0)
            isotone_checked += len(upper)
            phi = SelectionMap(inst, upper[0])
            assert refine(phi).le(phi)
        assert restrictive_checked >= 10000
        assert isotone_checked >= 10000


def test_criterion_11_cli_round_trips(tmp_path, capsys):
    with criterion(11, "CLI byte-identical runs and oracle MATCH"):
        corpus = [
            "d2.json",
            "full_bound.json",
            "empty_component.json",
            "vacuous_window.json",
            "three_steps.json",
        ]
        for name in corpus:
            path = str(INSTANCE_DIR / name)
            transcripts = []
            solutions = []
            for run_id in (1, 2):
                out_file = tmp_path / f"{name}.{run_id}.solution.json"
                assert cli_main(["solve", path, "--trace", "--output", str(out_file)]) == 0
                solve_out = capsys.readouterr().out
                assert cli_main(["check", path, str(out_file)]) == 0
                check_out = capsys.readouterr().out
                assert "non-anticipating: yes" in check_out
                assert cli_main(["oracle", path]) == 0
                oracle_out = capsys.readouterr().out
                assert oracle_out.splitlines()[-1] == "MATCH"
                # drop the line carrying the per-run output path
                stable = "\n".join(
                    line
                    for line in (solve_out + check_out + oracle_out).splitlines()
                    if not line.startswith("wrote: ")
                )
                transcripts.append(stable)
                solutions.append(out_file.read_bytes())
            assert transcripts[0] == transcripts[1]
            assert solutions[0] == solutions[1]
        # a fresh process produces the same bytes as the golden copy
        out_file = tmp_path / "proc.solution.json"
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "predfix",
                "solve",
                str(INSTANCE_DIR / "d2.json"),
                "--trace",
                "--output",
                str(out_file),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert out_file.read_bytes() == (tmp_path / "d2.json.1.solution.json").read_bytes()
