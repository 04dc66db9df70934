import json

import pytest

from orderaug.ingest import (
    DatasetFile,
    DatasetRecord,
    MalformedJson,
    MissingSolution,
    SchemaViolation,
    UnknownFormat,
    ValidationFailed,
    emit_dataset,
    emit_training_records,
    iter_records,
    parse_dataset,
    record_from_json,
    record_to_json,
    record_violations,
    render_solution_text,
    scan_dataset,
)
from orderaug.model import Permutation

from conftest import make_instance, make_solution, write_dataset


def make_record(iid="r1", n=4, **kwargs):
    return DatasetRecord(instance=make_instance(iid, n=n), **kwargs)


class TestRoundTrip:
    def test_label_only_record(self):
        rec = make_record()
        assert record_from_json(record_to_json(rec)) == rec

    def test_full_record(self):
        rec = DatasetRecord(
            instance=make_instance("r2", n=4, with_fol=True),
            solution=make_solution("r2"),
            lineage="condition_shuffled",
            source_id="orig",
            permutation=Permutation((2, 1, 3, 4)),
        )
        assert record_from_json(record_to_json(rec)) == rec

    def test_key_order_is_fixed(self):
        keys = list(record_to_json(make_record()).keys())
        assert keys == [
            "id",
            "premises",
            "premises_fol",
            "conclusion",
            "conclusion_fol",
            "label",
            "label_set",
            "solution",
            "lineage",
            "source_id",
            "permutation",
        ]

    def test_premises_fol_null_unless_any(self):
        assert record_to_json(make_record())["premises_fol"] is None
        rec = DatasetRecord(instance=make_instance("x", n=3, with_fol=True))
        assert record_to_json(rec)["premises_fol"] is not None

    def test_unknown_label_set_rejected(self):
        obj = record_to_json(make_record())
        obj["label_set"] = "Nope"
        with pytest.raises(SchemaViolation):
            record_from_json(obj)

    def test_unknown_lineage_rejected(self):
        obj = record_to_json(make_record())
        obj["lineage"] = "mystery"
        with pytest.raises(SchemaViolation):
            record_from_json(obj)

    def test_missing_field_reported_by_name(self):
        obj = record_to_json(make_record())
        del obj["conclusion"]
        with pytest.raises(SchemaViolation) as exc:
            record_from_json(obj, line=7)
        assert "conclusion" in str(exc.value)
        assert "line 7" in str(exc.value)


class TestEmission:
    def test_emit_is_byte_stable(self, tmp_path):
        records = [make_record(f"r{i}") for i in range(3)]
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert emit_dataset(records, a) == 3
        assert emit_dataset(records, b) == 3
        assert a.read_bytes() == b.read_bytes()

    def test_emit_keeps_unicode(self, tmp_path):
        rec = DatasetRecord(instance=make_instance("u", n=2, with_fol=True))
        out = tmp_path / "u.jsonl"
        emit_dataset([rec], out)
        raw = out.read_text(encoding="utf-8")
        assert "\\u" not in raw.split('"id"')[0]  # no escaping before payload
        assert "∀" in raw or "fol" in raw

    def test_file_round_trip(self, tmp_path):
        records = [
            DatasetRecord(
                instance=make_instance(f"r{i}", n=3),
                solution=make_solution(f"r{i}", deps={1: set(), 2: {1}, 3: {2}},
                                       premises={1: {1}, 2: {2}, 3: {3}}),
            )
            for i in range(4)
        ]
        path = tmp_path / "d.jsonl"
        emit_dataset(records, path)
        back = parse_dataset(DatasetFile(path))
        assert back == records


class TestScanAndErrors:
    def test_malformed_json_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        good = json.dumps(record_to_json(make_record()))
        path.write_text(good + "\n{oops\n" + good + "\n", encoding="utf-8")
        rows = list(scan_dataset(DatasetFile(path)))
        assert len(rows) == 3
        assert rows[0][2] is None
        assert isinstance(rows[1][2], MalformedJson)
        assert rows[1][0] == 2
        assert rows[2][2] is None

    def test_iter_records_fail_mode(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("{not json}\n", encoding="utf-8")
        with pytest.raises(MalformedJson):
            list(iter_records(DatasetFile(path)))

    def test_iter_records_skip_mode(self, tmp_path):
        path = tmp_path / "mixed.jsonl"
        good = json.dumps(record_to_json(make_record()))
        path.write_text("{bad\n" + good + "\n", encoding="utf-8")
        out = list(iter_records(DatasetFile(path), on_error="skip"))
        assert len(out) == 1

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "blank.jsonl"
        good = json.dumps(record_to_json(make_record()))
        path.write_text("\n" + good + "\n\n", encoding="utf-8")
        assert len(list(iter_records(DatasetFile(path)))) == 1

    def test_validation_failure_mentions_codes(self, tmp_path):
        obj = record_to_json(make_record())
        obj["label"] = "Banana"
        path = tmp_path / "v.jsonl"
        path.write_text(json.dumps(obj) + "\n", encoding="utf-8")
        with pytest.raises(ValidationFailed) as exc:
            list(iter_records(DatasetFile(path)))
        assert "LabelNotInSet" in str(exc.value)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(UnknownFormat):
            DatasetFile(tmp_path / "x.jsonl", format="csv")


class TestRecordViolations:
    def test_clean(self):
        rec = DatasetRecord(instance=make_instance("a"), solution=make_solution("a"))
        assert record_violations(rec) == []

    def test_forward_ref_flagged_normally(self):
        sol = make_solution("a", deps={1: {2}, 2: set(), 3: {1}, 4: {3}})
        rec = DatasetRecord(instance=make_instance("a"), solution=sol)
        assert any(v.code == "ForwardStepRef" for v in record_violations(rec))

    def test_forward_ref_allowed_for_random_lineage(self):
        sol = make_solution("a", deps={1: {2}, 2: set(), 3: {1}, 4: {3}})
        rec = DatasetRecord(
            instance=make_instance("a"), solution=sol, lineage="random_steps_shuffled"
        )
        assert record_violations(rec) == []

    def test_permutation_length_mismatch(self):
        rec = DatasetRecord(
            instance=make_instance("a", n=4), permutation=Permutation((2, 1, 3))
        )
        assert any(v.code == "PermutationLengthMismatch" for v in record_violations(rec))


class TestAdapters:
    def test_folio(self, tmp_path):
        native = {
            "example_id": 17,
            "premises": ["All cats are animals.", "Tom is a cat."],
            "premises-FOL": ["∀x (Cat(x) → Animal(x))", "Cat(tom)"],
            "conclusion": "Tom is an animal.",
            "conclusion-FOL": "Animal(tom)",
            "label": "Uncertain",
        }
        path = tmp_path / "folio.jsonl"
        path.write_text(json.dumps(native, ensure_ascii=False) + "\n", encoding="utf-8")
        [rec] = parse_dataset(DatasetFile(path, format="folio"))
        assert rec.instance.id == "17"
        assert rec.instance.label == "Unknown"
        assert rec.instance.label_set.name == "FOLIO"
        assert rec.instance.premises[0].fol == "∀x (Cat(x) → Animal(x))"
        assert rec.instance.conclusion_fol == "Animal(tom)"

    def test_ruletaker_bool_label(self, tmp_path):
        native = {
            "id": "rt1",
            "theory": "Tom is a cat. Cats purr.",
            "question": "Tom purrs.",
            "answer": True,
        }
        path = tmp_path / "rt.jsonl"
        path.write_text(json.dumps(native) + "\n", encoding="utf-8")
        [rec] = parse_dataset(DatasetFile(path, format="ruletaker"))
        assert rec.instance.label == "entailment"
        assert rec.instance.label_set.name == "RuleTaker"
        assert [p.text for p in rec.instance.premises] == [
            "Tom is a cat.",
            "Cats purr.",
        ]

    def test_ruletaker_string_false(self, tmp_path):
        native = {"id": "rt2", "theory": "A.", "question": "B.", "answer": "false"}
        path = tmp_path / "rt.jsonl"
        path.write_text(json.dumps(native) + "\n", encoding="utf-8")
        [rec] = parse_dataset(DatasetFile(path, format="ruletaker"))
        assert rec.instance.label == "not entailment"

    def test_logicnli(self, tmp_path):
        native = {
            "id": "ln1",
            "premise": ["Rhett is modest.", "Philip is lazy."],
            "hypothesis": "Ramon is real.",
            "label": "self_contradiction",
        }
        path = tmp_path / "ln.jsonl"
        path.write_text(json.dumps(native) + "\n", encoding="utf-8")
        [rec] = parse_dataset(DatasetFile(path, format="logicnli"))
        assert rec.instance.label == "self_contradiction"
        assert rec.instance.label_set.name == "LogicNLI"


class TestTrainingRecords:
    def test_label_only(self):
        [tr] = emit_training_records([make_record("a", n=2)])
        assert tr.response == "True"
        assert "Premises:" in tr.prompt
        assert "1. premise text 1" in tr.prompt or "1." in tr.prompt
        assert "true, False or Unknown" not in tr.prompt  # choices keep set casing

    def test_prompt_lists_choices(self):
        [tr] = emit_training_records([make_record("a", n=2)])
        assert "True, False or Unknown" in tr.prompt

    def test_cot_response(self):
        rec = DatasetRecord(
            instance=make_instance("a"),
            solution=make_solution("a"),
            lineage="answer_steps_shuffled",
        )
        [tr] = emit_training_records([rec])
        assert tr.response == render_solution_text(rec.solution)
        assert tr.response.endswith(rec.solution.final_answer)
        assert tr.meta["lineage"] == "answer_steps_shuffled"

    def test_cot_lineage_requires_solution(self):
        rec = DatasetRecord(
            instance=make_instance("a"), lineage="answer_steps_shuffled"
        )
        with pytest.raises(MissingSolution):
            emit_training_records([rec])

    def test_condition_lineage_stays_label_only(self):
        rec = DatasetRecord(instance=make_instance("a"), lineage="condition_shuffled")
        [tr] = emit_training_records([rec])
        assert tr.response == "True"

    def test_custom_template(self):
        [tr] = emit_training_records(
            [make_record("a", n=2)], template="{conclusion}|{label_choices}"
        )
        assert tr.prompt.count("|") == 1


class TestWriteDatasetHelper:
    def test_helper_matches_emitter(self, tmp_path):
        records = [make_record("h1"), make_record("h2")]
        p1 = tmp_path / "h1.jsonl"
        p2 = tmp_path / "h2.jsonl"
        write_dataset(p1, records)
        emit_dataset(records, p2)
        assert p1.read_bytes() == p2.read_bytes()
