"""Deterministic 17-digit text formatting used by every exporter."""

import json
import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

from transferspec._format import g17, json_g17


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_g17_round_trips_every_double(x):
    assert struct.pack("<d", float(g17(x))) == struct.pack("<d", x)


def test_g17_rejects_non_finite():
    with pytest.raises(ValueError):
        g17(float("nan"))
    with pytest.raises(ValueError):
        g17(float("inf"))


def test_json_g17_scalars():
    assert json_g17(None) == "null"
    assert json_g17(True) == "true"
    assert json_g17(False) == "false"
    assert json_g17(3) == "3"
    assert json_g17(0.1) == "0.10000000000000001"
    assert json_g17("a\"b") == '"a\\"b"'


def test_json_g17_numpy_scalars_become_native():
    assert json_g17(np.float64(0.5)) == "0.5"
    assert json_g17(np.int64(7)) == "7"
    assert json_g17(np.bool_(True)) == "true"


def test_json_g17_nested_parses_back():
    obj = {"a": [1, 2.5, None], "b": {"c": False, "d": "x"}}
    text = json_g17(obj)
    assert json.loads(text) == obj
    assert "\n" not in text


def test_json_g17_rejects_unknown_types():
    with pytest.raises(TypeError):
        json_g17(object())
    with pytest.raises(TypeError):
        json_g17(1 + 2j)
