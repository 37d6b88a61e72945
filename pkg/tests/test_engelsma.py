import json
import time

import pytest

from mtsieve import engelsma
from mtsieve.engelsma import TupleFileError, load_and_verify, parse_tuple_file, shipped_path, verify_shipped


def write(tmp_path, text, name="t.json"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_shipped_tuple_verifies_quickly():
    assert shipped_path() is not None
    t = time.perf_counter()
    rec = verify_shipped()
    assert time.perf_counter() - t < 1.0
    assert rec.verified and rec.k == 105 and rec.diameter == 600
    assert rec.elements[0] == 0


def test_small_files(tmp_path):
    rec = load_and_verify(write(tmp_path, "[0,2,6]"))
    assert rec.verified and rec.diameter == 6 and rec.witness is None
    rec = load_and_verify(write(tmp_path, "[0,1]"))
    assert not rec.verified and rec.witness == 2
    assert rec.to_json()["witness"] == 2


def test_expected_diameter(tmp_path):
    p = write(tmp_path, "[0,2,6]")
    assert load_and_verify(p, expected_diameter=6).verified
    assert not load_and_verify(p, expected_diameter=8).verified


@pytest.mark.parametrize("text", ["", "{}", "[]", "[0, 2.5]", "[0, true]", "[2, 0]", "[0, 0]", "[0,"])
def test_parse_failures(text):
    with pytest.raises(TupleFileError):
        parse_tuple_file(text)


def test_missing_file(tmp_path):
    with pytest.raises(TupleFileError):
        load_and_verify(tmp_path / "nope.json")


def test_verification_is_idempotent(tmp_path):
    p = write(tmp_path, json.dumps([0, 4, 6, 10, 12, 16]))
    assert load_and_verify(p) == load_and_verify(p)
    assert verify_shipped() == verify_shipped()


def test_missing_shipped_data_reports_none(monkeypatch):
    monkeypatch.setattr(engelsma, "shipped_path", lambda: None)
    assert engelsma.verify_shipped() is None
