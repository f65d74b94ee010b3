"""
Tests for atomic writes, digests and CSV rendering.
"""

import hashlib
import io
import math

import pandas as pd
import pytest

from treecrit.utils.csv_utils import format_float, frame_to_csv
from treecrit.utils.file_utils import atomic_write_bytes, atomic_write_text, calculate_file_hash, hash_path


class TestAtomicWrite:
    """Destination holds old or new content, never a partial file."""

    def test_write_and_replace(self, tmp_path):
        target = tmp_path / "out" / "table.csv"
        atomic_write_text(target, "a\n")
        atomic_write_text(target, "b\n")
        assert target.read_text() == "b\n"
        assert [p.name for p in target.parent.iterdir()] == ["table.csv"]

    def test_failure_leaves_no_temp_file(self, tmp_path, mocker):
        target = tmp_path / "table.csv"
        target.write_text("old\n")
        mocker.patch("treecrit.utils.file_utils.os.replace", side_effect=OSError("disk full"))
        with pytest.raises(OSError):
            atomic_write_bytes(target, b"new\n")
        assert target.read_text() == "old\n"
        assert [p.name for p in tmp_path.iterdir()] == ["table.csv"]


class TestHashing:
    def test_hash_matches_hashlib(self, tmp_path):
        path = tmp_path / "data.bin"
        path.write_bytes(b"treecrit" * 5000)
        assert hash_path(path) == hashlib.sha256(b"treecrit" * 5000).hexdigest()

    def test_stream_is_rewound(self):
        buffer = io.BytesIO(b"abc")
        calculate_file_hash(buffer)
        assert buffer.read() == b"abc"


class TestCsv:
    @pytest.mark.parametrize(
        "value,text",
        [(math.inf, "+inf"), (-math.inf, "-inf"), (0.1, "0.1"), (1.0 / 3.0, "0.333333333333")],
    )
    def test_format_float(self, value, text):
        assert format_float(value) == text

    def test_frame_rendering(self):
        frame = pd.DataFrame({"z": [0.0, 1.5], "rate": [0.0, math.inf], "ok": [True, False]})
        text = frame_to_csv(frame, ["command=rate-function", "seed=1"])
        assert text == (
            "# command=rate-function\n"
            "# seed=1\n"
            "z,rate,ok\n"
            "0,0,true\n"
            "1.5,+inf,false\n"
        )
