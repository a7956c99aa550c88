import json

import numpy as np
import pytest

from rkrd.errors import FormatError, InvalidInput
from rkrd.sample_io import emit_samples, infer_format, ingest_samples


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_csv_basic(tmp_path):
    s = ingest_samples(write(tmp_path, "a.csv", "1.0,2.0\n3.0,4.0"))
    assert (s.n, s.d) == (2, 2)
    assert np.array_equal(s.rows, [[1.0, 2.0], [3.0, 4.0]])


def test_csv_header_detected(tmp_path):
    s = ingest_samples(write(tmp_path, "a.csv", "x,y\n1,2\n3,4\n"))
    assert (s.n, s.d) == (2, 2)


def test_csv_numeric_first_line_is_data(tmp_path):
    s = ingest_samples(write(tmp_path, "a.csv", "1e3,-2\n3,4\n"))
    assert s.rows[0, 0] == 1000.0


def test_json_basic(tmp_path):
    s = ingest_samples(write(tmp_path, "a.json", '{"dim":1,"samples":[[0.5]]}'))
    assert (s.n, s.d) == (1, 1)
    assert s.rows[0, 0] == 0.5


def test_ragged_row_reports_line(tmp_path):
    with pytest.raises(FormatError) as info:
        ingest_samples(write(tmp_path, "a.csv", "1,2\n3,4\n5\n"))
    assert info.value.line == 3


def test_non_numeric_cell_reports_position(tmp_path):
    with pytest.raises(FormatError) as info:
        ingest_samples(write(tmp_path, "a.csv", "a,b\n1,2\n3,oops\n"))
    assert (info.value.line, info.value.column) == (3, 2)
    assert "line 3" in str(info.value)


@pytest.mark.parametrize("name,text", [("a.csv", ""), ("a.csv", "\n\n"), ("a.json", ""), ("a.csv", "x,y\n")])
def test_empty_file(tmp_path, name, text):
    with pytest.raises(InvalidInput):
        ingest_samples(write(tmp_path, name, text))


@pytest.mark.parametrize(
    "text",
    ['{"dim": 2, "samples": [[1, 2], [3]]}', '{"samples": [["a"]]}', "[1, 2]", '{"dim": 1, "samples": [[tru'],
)
def test_bad_json(tmp_path, text):
    with pytest.raises(FormatError):
        ingest_samples(write(tmp_path, "a.json", text))


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        ingest_samples(tmp_path / "missing.csv")


@pytest.mark.parametrize("ext", ["csv", "json"])
def test_round_trip_bit_exact(tmp_path, ext, rng):
    rows = rng.standard_normal((40, 3)) * 10.0 ** rng.integers(-300, 300, size=(40, 3))
    rows[0, 0] = np.nextafter(1.0, 2.0)
    rows[1, 1] = 5e-324
    path = emit_samples(rows, tmp_path / f"s.{ext}")
    back = ingest_samples(path)
    assert back.rows.tobytes() == np.ascontiguousarray(rows).tobytes()


def test_json_metadata_ignored_on_input(tmp_path):
    path = emit_samples(np.ones((2, 2)), tmp_path / "s.json", metadata={"sigma": 1.5})
    assert json.loads(path.read_text())["metadata"]["sigma"] == 1.5
    assert ingest_samples(path).n == 2


def test_format_inference():
    assert infer_format("x.JSON") == "json"
    assert infer_format("x.txt") == "csv"
    assert infer_format("x.json", "csv") == "csv"
