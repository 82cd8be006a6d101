import json

import pytest

from predfix import ValidationError
from predfix.io import (
    SolutionDocument,
    parse_calculus,
    parse_instance,
    parse_selection_only,
    parse_solution,
    serialize_instance,
    serialize_solution,
)

from conftest import INSTANCE_DIR, d2_instance


def d2_text() -> str:
    return (INSTANCE_DIR / "d2.json").read_text()


def code_of(exc_info) -> str:
    return exc_info.value.code


class TestInstanceParsing:
    def test_d2_document(self):
        inst = parse_instance(d2_text())
        assert inst == d2_instance()
        assert len(inst.controls) == 4
        assert len(inst.uncertainties) == 2

    def test_round_trip(self):
        inst = parse_instance(d2_text())
        assert parse_instance(serialize_instance(inst)) == inst

    def test_round_trip_is_fixed_point_of_printing(self):
        inst = parse_instance(d2_text())
        once = serialize_instance(inst)
        assert serialize_instance(parse_instance(once)) == once

    def test_syntax_error_reports_position(self):
        with pytest.raises(ValidationError) as e:
            parse_instance("{not json")
        assert code_of(e) == "E_SYNTAX"
        assert "line 1" in e.value.path

    def test_unknown_key_rejected(self):
        doc = json.loads(d2_text())
        doc["extra"] = 1
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_SCHEMA"

    def test_missing_key_rejected(self):
        doc = json.loads(d2_text())
        del doc["family"]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_SCHEMA"

    def test_bad_version_rejected(self):
        doc = json.loads(d2_text())
        doc["format_version"] = "2"
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_SCHEMA"

    def test_dangling_beta_reference(self):
        doc = json.loads(d2_text())
        doc["beta"]["w00"] = ["nope"]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_DANGLING_REF"

    def test_duplicate_function_rejected(self):
        doc = json.loads(d2_text())
        doc["uncertainties"]["w_dup"] = {"1": "0", "2": "0"}
        doc["beta"]["w_dup"] = []
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_DUPLICATE_FUNCTION"

    def test_partial_function_rejected(self):
        doc = json.loads(d2_text())
        del doc["controls"]["c00"]["2"]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_NOT_TOTAL"

    def test_value_outside_alphabet_rejected(self):
        doc = json.loads(d2_text())
        doc["controls"]["c00"]["1"] = "7"
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_DANGLING_REF"

    def test_empty_family_rejected(self):
        doc = json.loads(d2_text())
        doc["family"] = []
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_EMPTY"

    def test_empty_window_rejected(self):
        doc = json.loads(d2_text())
        doc["family"] = [[]]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_EMPTY"

    def test_duplicate_window_rejected(self):
        doc = json.loads(d2_text())
        doc["family"] = [["1"], ["1"]]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_DUPLICATE_WINDOW"

    def test_unknown_window_time_point(self):
        doc = json.loads(d2_text())
        doc["family"] = [["9"]]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_DANGLING_REF"

    def test_beta_must_cover_every_uncertainty(self):
        doc = json.loads(d2_text())
        del doc["beta"]["w01"]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_SCHEMA"

    def test_non_string_entries_rejected(self):
        doc = json.loads(d2_text())
        doc["time_points"] = [1, 2]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_SCHEMA"

    def test_duplicate_control_in_beta_rejected(self):
        doc = json.loads(d2_text())
        doc["beta"]["w00"] = ["c00", "c00"]
        with pytest.raises(ValidationError) as e:
            parse_instance(json.dumps(doc))
        assert code_of(e) == "E_SCHEMA"


class TestSolutionDocuments:
    def doc(self) -> SolutionDocument:
        return SolutionDocument(
            selection={"w00": ["c00"], "w01": ["c00", "c01"]},
            iterations=2,
            vacuity={"vacuous": False, "trivial_windows": []},
            iteration_sizes=[4, 3, 3],
        )

    def test_round_trip(self):
        assert parse_solution(serialize_solution(self.doc())) == self.doc()

    def test_round_trip_without_sizes(self):
        doc = self.doc()
        doc.iteration_sizes = None
        assert parse_solution(serialize_solution(doc)) == doc

    def test_selection_only_accepts_solution_docs(self):
        got = parse_selection_only(serialize_solution(self.doc()))
        assert got == self.doc().selection

    def test_selection_only_accepts_bare_docs(self):
        text = json.dumps({"format_version": "1", "selection": {"w00": []}})
        assert parse_selection_only(text) == {"w00": []}

    def test_rejects_negative_iterations(self):
        text = json.dumps(
            {"format_version": "1", "selection": {}, "iterations": -1}
        )
        with pytest.raises(ValidationError) as e:
            parse_solution(text)
        assert code_of(e) == "E_SCHEMA"

    def test_rejects_unknown_keys(self):
        text = json.dumps(
            {"format_version": "1", "selection": {}, "iterations": 0, "x": 1}
        )
        with pytest.raises(ValidationError) as e:
            parse_solution(text)
        assert code_of(e) == "E_SCHEMA"

    def test_rejects_non_decreasing_sizes(self):
        text = json.dumps(
            {
                "format_version": "1",
                "selection": {},
                "iterations": 2,
                "iteration_sizes": [4, 4, 3],
            }
        )
        with pytest.raises(ValidationError) as e:
            parse_solution(text)
        assert code_of(e) == "E_SCHEMA"

    def test_rejects_size_count_mismatch(self):
        text = json.dumps(
            {
                "format_version": "1",
                "selection": {},
                "iterations": 1,
                "iteration_sizes": [4, 3, 3],
            }
        )
        with pytest.raises(ValidationError) as e:
            parse_solution(text)
        assert code_of(e) == "E_SCHEMA"


class TestCalculusDocuments:
    def test_demo_document(self):
        doc = parse_calculus((INSTANCE_DIR / "um_demo.json").read_text())
        assert doc.universe.elements == ("a", "b")
        assert doc.predicate.truth_set().ids() == ("a",)
        assert doc.predicate_q is not None
        assert doc.subset is not None and doc.subset.ids() == ("a",)
        assert doc.poset is None

    def test_order_document_closes_transitively(self):
        doc = parse_calculus((INSTANCE_DIR / "um_narrow.json").read_text())
        assert doc.poset is not None
        assert doc.poset.le("1", "3")

    def test_unknown_element_in_predicate(self):
        text = json.dumps(
            {"format_version": "1", "elements": ["a"], "predicate": ["z"]}
        )
        with pytest.raises(ValidationError) as e:
            parse_calculus(text)
        assert code_of(e) == "E_DANGLING_REF"

    def test_cyclic_order_rejected(self):
        text = json.dumps(
            {
                "format_version": "1",
                "elements": ["a", "b"],
                "predicate": [],
                "order": [["a", "b"], ["b", "a"]],
            }
        )
        with pytest.raises(ValidationError) as e:
            parse_calculus(text)
        assert code_of(e) == "E_SCHEMA"
