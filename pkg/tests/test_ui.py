"""Tests for UI utilities module."""

import io
import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bidihedral_verify.utils.ui import (
    print_error,
    print_header,
    print_success,
    print_table,
    print_warning,
)


def test_messages_go_to_stderr(capsys):
    print_header("Manifest")
    print_success("12 passed")
    print_error("1 failed")
    print_warning("2 skipped")

    captured = capsys.readouterr()
    assert captured.out == ""
    assert "Manifest" in captured.err
    assert "=" * 50 in captured.err
    assert "✓ 12 passed" in captured.err
    assert "✗ 1 failed" in captured.err
    assert "! 2 skipped" in captured.err


def test_explicit_stream():
    buffer = io.StringIO()
    print_success("written", stream=buffer)
    assert "written" in buffer.getvalue()


def test_print_table_aligns_columns():
    buffer = io.StringIO()
    print_table(["vertices", "valency"], [[12, 5], [2184, 13]], stream=buffer)
    lines = buffer.getvalue().splitlines()
    assert len(lines) == 4
    assert "vertices | valency" in lines[0]
    assert "12       | 5" in lines[2]
    assert "2184     | 13" in lines[3]


def test_print_table_without_rows():
    buffer = io.StringIO()
    print_table(["id"], [], stream=buffer)
    assert len(buffer.getvalue().splitlines()) == 2
