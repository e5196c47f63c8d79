"""Tests for CSV ingestion and dataset splitting."""

import numpy as np
import pytest

from knnn.core.errors import EmptyInput, LabelMismatch, ParseError
from knnn.core.models import FeatureMatrix
from knnn.data import (
    load_csv,
    load_labeled,
    load_labels,
    load_scores,
    split_half,
    write_csv,
    write_labels,
)


def test_load_csv_basic(tmp_path):
    """Rows load in order as float64."""
    p = tmp_path / "x.csv"
    p.write_text("1,2\n3.5,-4e-3\n")
    m = load_csv(p)
    np.testing.assert_array_equal(m.rows, [[1.0, 2.0], [3.5, -4e-3]])


def test_load_csv_header_crlf_blank(tmp_path):
    """Header skipped, CRLF accepted, blank lines ignored."""
    p = tmp_path / "x.csv"
    p.write_bytes(b"a,b\r\n1,2\r\n\r\n3,4\r\n")
    m = load_csv(p, has_header=True)
    assert m.n_rows == 2
    assert m.dim == 2


def test_load_csv_non_numeric_line_number(tmp_path):
    """A bad field reports its physical line."""
    p = tmp_path / "x.csv"
    p.write_text("1,2\n\n3,abc\n")
    with pytest.raises(ParseError, match="line 3") as exc:
        load_csv(p)
    assert exc.value.line == 3


def test_load_csv_ragged(tmp_path):
    """Rows of differing width are rejected."""
    p = tmp_path / "x.csv"
    p.write_text("1,2\n3,4,5\n")
    with pytest.raises(ParseError, match="expected 2 fields"):
        load_csv(p)


def test_load_csv_nan(tmp_path):
    """NaN and infinities are parse errors."""
    p = tmp_path / "x.csv"
    p.write_text("1,nan\n")
    with pytest.raises(ParseError, match="line 1"):
        load_csv(p)


@pytest.mark.parametrize("field", ["1_000", "infinity", "-inf", "0x10", "1e", ""])
def test_load_csv_rejects_non_plain_numbers(tmp_path, field):
    """Only plain decimal and exponent spellings parse."""
    p = tmp_path / "x.csv"
    p.write_text(f"1,2\n3,{field}\n")
    with pytest.raises(ParseError, match="line 2"):
        load_csv(p)


def test_load_csv_overflow(tmp_path):
    """A literal beyond the double range is a parse error."""
    p = tmp_path / "x.csv"
    p.write_text("1,1e999\n")
    with pytest.raises(ParseError, match="overflows"):
        load_csv(p)


def test_load_csv_invalid_utf8(tmp_path):
    """Undecodable bytes report the line they sit on."""
    p = tmp_path / "x.csv"
    p.write_bytes(b"1,2\n3,4\n1,\xff\n")
    with pytest.raises(ParseError, match="not valid UTF-8") as exc:
        load_csv(p)
    assert exc.value.line == 3


def test_load_csv_bom_and_spaces(tmp_path):
    """A UTF-8 BOM and spaces around fields are accepted."""
    p = tmp_path / "x.csv"
    p.write_bytes(b"\xef\xbb\xbf1, 2\n+.5,-3E+1\n")
    np.testing.assert_array_equal(load_csv(p).rows, [[1.0, 2.0], [0.5, -30.0]])


def test_load_csv_empty(tmp_path):
    """A file with no data rows is EmptyInput."""
    p = tmp_path / "x.csv"
    p.write_text("\n\n")
    with pytest.raises(EmptyInput):
        load_csv(p)


def test_write_csv_reload_exact(tmp_path, rng):
    """17 significant digits reload bit-exactly."""
    x = rng.normal(size=(7, 3)) * 1e3
    p = tmp_path / "out" / "x.csv"
    write_csv(FeatureMatrix(x), p)
    np.testing.assert_array_equal(load_csv(p).rows, x)


def test_load_labels(tmp_path):
    """0/1 labels load as int8."""
    p = tmp_path / "y.csv"
    write_labels(np.array([0, 1, 1]), p)
    labels = load_labels(p)
    assert labels.dtype == np.int8
    assert labels.tolist() == [0, 1, 1]


def test_load_labels_rejects_other_values(tmp_path):
    """Only 0 and 1 are labels."""
    p = tmp_path / "y.csv"
    p.write_text("0\n2\n")
    with pytest.raises(ParseError, match="line 2"):
        load_labels(p)


def test_load_labeled_mismatch(tmp_path):
    """Label count must match the feature rows."""
    x = tmp_path / "x.csv"
    y = tmp_path / "y.csv"
    x.write_text("1,2\n3,4\n")
    y.write_text("0\n")
    with pytest.raises(LabelMismatch, match="1 labels"):
        load_labeled(x, y)


def test_load_scores_single_column(tmp_path):
    """Score files have exactly one column."""
    p = tmp_path / "s.csv"
    p.write_text("1,2\n")
    with pytest.raises(ParseError, match="one column"):
        load_scores(p)


def test_split_half_sizes_and_disjoint():
    """First ceil(N/2) permuted rows train, the rest test, no overlap."""
    m = FeatureMatrix(np.arange(22.0).reshape(11, 2))
    train, test = split_half(m, seed=7)
    assert train.n_rows == 6
    assert test.n_rows == 5
    together = sorted(map(tuple, np.vstack([train.rows, test.rows])))
    assert together == sorted(map(tuple, m.rows))


def test_split_half_deterministic():
    """Same seed, same split."""
    m = FeatureMatrix(np.arange(40.0).reshape(20, 2))
    a, _ = split_half(m, seed=3)
    b, _ = split_half(m, seed=3)
    np.testing.assert_array_equal(a.rows, b.rows)


def test_split_half_too_small():
    """One row cannot be split."""
    with pytest.raises(EmptyInput):
        split_half(FeatureMatrix(np.zeros((1, 2))), seed=0)
