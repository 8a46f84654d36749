#!/usr/bin/env python3
import io
import math
from fractions import Fraction

import numpy as np

from unipotent.services.writer import dumps, emit_rows, to_jsonable, write_csv


def test_jsonable_values():
    assert to_jsonable(Fraction(6, 4)) == "3/2"
    assert to_jsonable(Fraction(5)) == "5/1"
    assert to_jsonable(np.int64(7)) == 7
    assert to_jsonable(math.inf) == "inf"
    assert to_jsonable({1: (np.bool_(True), None)}) == {"1": [True, None]}


def test_dumps_sorts_keys():
    assert dumps({"b": 1, "a": Fraction(1, 3)}) == '{"a": "1/3", "b": 1}'


def test_csv_uses_sorted_union_of_columns():
    stream = io.StringIO()
    write_csv([{"z": 1, "a": [1, 2]}, {"m": "x"}], stream)
    lines = stream.getvalue().split("\r\n")
    assert lines[0] == "a,m,z"
    assert lines[1] == '"[1, 2]",,1'


def test_rows_to_file(tmp_path):
    path = tmp_path / "nested" / "rows.jsonl"
    emit_rows([{"case_id": "x", "passed": True}], "json", str(path))
    assert path.read_text(encoding="utf-8") == '{"case_id": "x", "passed": true}\n'
