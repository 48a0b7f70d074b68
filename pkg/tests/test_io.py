import json

import numpy as np
import pytest

from gabortauber import io
from gabortauber.errors import ConfigurationError
from gabortauber.model import CoefficientGrid, Lattice


@pytest.fixture
def grid():
    lat = Lattice(0.5, 0.25, (-2, 2), (-1, 1))
    rng = np.random.default_rng(3)
    vals = rng.normal(size=lat.shape) + 1j * rng.normal(size=lat.shape)
    return CoefficientGrid(lat, vals, "sig", "win")


def test_grid_roundtrip_is_exact(tmp_path, grid):
    p, side = io.write_grid(tmp_path / "g.csv", grid)
    back = io.read_grid(p)
    np.testing.assert_array_equal(back.values, grid.values)
    assert back.lattice.same_as(grid.lattice)
    meta = json.loads(side.read_text())
    assert meta["signal_id"] == "sig" and meta["k_range"] == [-2, 2]


def test_output_is_deterministic(tmp_path, grid):
    io.write_grid(tmp_path / "a.csv", grid)
    io.write_grid(tmp_path / "b.csv", grid)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "k,n,re,im"
    assert lines[1].startswith("-2,-1,") and lines[2].startswith("-2,0,")


def test_json_cleaning():
    s = io.dumps_json({"b": 1 + 2j, "a": float("inf"), "c": np.int64(3), "d": np.array([1.5])})
    assert json.loads(s) == {"a": "inf", "b": {"re": 1.0, "im": 2.0}, "c": 3, "d": [1.5]}
    assert s.index('"a"') < s.index('"b"')


@pytest.mark.parametrize("body,line", [
    ("k,n,re,im\n0,0,1,0\n0,1,x,0\n", ":3:"),
    ("k,n,re,im\n0,0,1\n", ":2:"),
    ("k,n,re,im\n0,0,1,0\n0,0,1,0\n", ":3:"),
    ("a,b,c,d\n", ":1:"),
    ("k,n,re,im\n0,0,nan,0\n", ":2:"),
])
def test_malformed_grid_reports_line(tmp_path, body, line):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(ConfigurationError, match=line):
        io.read_grid(p)


def test_missing_nodes_rejected(tmp_path):
    p = tmp_path / "g.csv"
    p.write_text("k,n,re,im\n0,0,1,0\n1,1,1,0\n")
    with pytest.raises(ConfigurationError, match="rows"):
        io.read_grid(p)


def test_atomic_write_leaves_no_temp(tmp_path):
    io.atomic_write(tmp_path / "x.txt", "hello")
    assert [q.name for q in tmp_path.iterdir()] == ["x.txt"]
