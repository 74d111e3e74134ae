from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ruled_ricci.export import (
    MeshBuffer,
    dump_curve_definition,
    load_curve_definition,
    read_obj_vertices,
    tomllib,
    write_csv,
    write_obj,
)
from ruled_ricci.gallery import ENTRIES, helicoid


def test_smallest_grid(tmp_path):
    mesh = MeshBuffer(2, 2, np.arange(12.0).reshape(4, 3))
    write_obj(mesh, tmp_path / "m.obj")
    lines = (tmp_path / "m.obj").read_text().splitlines()
    assert [l for l in lines if l.startswith("v ")] == [
        "v 0 1 2", "v 3 4 5", "v 6 7 8", "v 9 10 11"
    ]
    assert [l for l in lines if l.startswith("f ")] == ["f 1 2 4 3"]


def test_mesh_validation():
    with pytest.raises(ValueError):
        MeshBuffer(3, 3, np.zeros((8, 3)))
    with pytest.raises(ValueError):
        MeshBuffer(2, 2, np.zeros((4, 3)), {"K": np.zeros(3)})


def test_patch_mesh_counts_and_sidecar(tmp_path):
    p = helicoid(1.0)
    mesh = MeshBuffer.from_patch(p, 7, 5, {"K": np.arange(35.0)})
    assert len(mesh.vertices) == 35 and len(mesh.quads()) == 6 * 4
    write_obj(mesh, tmp_path / "h.obj")
    side = (tmp_path / "h.scalars.csv").read_text().splitlines()
    assert side[0] == "vertex,K" and side[1] == "1,0.0" and len(side) == 36
    assert mesh.vertices[mesh.index(0, 0)] == pytest.approx(p(-np.pi, -2.0))


@settings(max_examples=25)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=12, max_size=12))
def test_obj_round_trip_is_exact(tmp_path_factory, coords):
    path = tmp_path_factory.mktemp("obj") / "r.obj"
    mesh = MeshBuffer(2, 2, np.array(coords).reshape(4, 3))
    write_obj(mesh, path)
    assert np.array_equal(read_obj_vertices(path), mesh.vertices)


def test_csv_uses_shortest_repr(tmp_path):
    write_csv(tmp_path / "x.csv", ["a", "b"], [[0.1, 1], [1 / 3, np.float64(2.5)]])
    assert (tmp_path / "x.csv").read_text() == "a,b\n0.1,1\n0.3333333333333333,2.5\n"


@pytest.mark.parametrize("name", list(ENTRIES))
def test_curve_definition_round_trip(tmp_path, name):
    e = ENTRIES[name]()
    text = dump_curve_definition(e.curve_definition("B"))
    (tmp_path / "b.toml").write_text(text)
    B = load_curve_definition(tmp_path / "b.toml")
    t = 0.3 * (e.probe_domain[1] - e.probe_domain[0]) + e.probe_domain[0]
    assert np.allclose(B.jets(t), e.B.jets(t), atol=1e-13)
    assert tomllib.loads(text)["x"] == e.B_exprs[0]


def test_curve_definition_needs_components():
    with pytest.raises(ValueError):
        load_curve_definition({"x": "t", "y": "t"})
