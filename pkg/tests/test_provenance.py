import json
from fractions import Fraction

import numpy as np
import pytest

from leibniz_gsb.models import Report
from leibniz_gsb.provenance import canonical_json, emit_report, inputs_digest, jsonable, render_report


def test_jsonable_rationals_and_arrays():
    value = {1: (Fraction(3, 2), np.array([Fraction(2), Fraction(-1, 3)], dtype=object)), "n": np.int64(7)}
    assert jsonable(value) == {"1": ["3/2", ["2", "-1/3"]], "n": 7}


def test_digest_ignores_key_order():
    assert canonical_json({"b": 1, "a": Fraction(1, 2)}) == '{"a":"1/2","b":1}'
    assert inputs_digest({"b": 1, "a": 2}) == inputs_digest({"a": 2, "b": 1})
    assert inputs_digest({"a": 1}) != inputs_digest({"a": 2})


def test_render_report_is_sorted(tmp_path):
    report = Report(command="gsb", inputs_digest="abc", results={"ok": True, "coeff": Fraction(-2)})
    text = render_report(report)
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["command", "inputs_digest", "letter_order", "results", "warnings"]
    assert json.loads(text)["results"]["coeff"] == "-2"

    path = tmp_path / "report.json"
    assert emit_report(report, path) == text
    assert path.read_text() == text


def test_emit_report_to_a_directory_fails(tmp_path):
    with pytest.raises(OSError, match="cannot write report"):
        emit_report(Report(command="check", inputs_digest="x"), tmp_path)
