import csv
import io

import numpy as np
import pytest

from oracles import regular_tetrahedron
from tensioncurv import shapes
from tensioncurv.curvature import curvature_cotangent, curvature_force_balance
from tensioncurv.mesh import MeshError, build_mesh
from tensioncurv.mesh_io import (
    MeshParseError,
    PolygonWarning,
    read_mesh,
    read_obj,
    read_off,
    report_string,
    write_mesh,
    write_obj,
    write_off,
)


def test_obj_minimal():
    pos, faces = read_obj(io.StringIO("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"))
    assert pos.shape == (3, 3) and faces.tolist() == [[0, 1, 2]]


def test_obj_suffixes_comments_and_unknown_directives():
    text = "# header\no thing\nv 0 0 0\nv 1 0 0\nvt 0 0\nvn 0 0 1\nv 0 1 0 # trailing\nf 1/1/1 2/2/2 3/3/3\nusemtl x\n"
    pos, faces = read_obj(io.StringIO(text))
    assert faces.tolist() == [[0, 1, 2]]
    assert len(pos) == 3
    _, faces = read_obj(io.StringIO("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1//1 2//1 3//1\n"))
    assert faces.tolist() == [[0, 1, 2]]


def test_obj_negative_indices():
    _, faces = read_obj(io.StringIO("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n"))
    assert faces.tolist() == [[0, 1, 2]]


def test_obj_quad_fan():
    text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n"
    with pytest.warns(PolygonWarning):
        _, faces = read_obj(io.StringIO(text))
    assert faces.tolist() == [[0, 1, 2], [0, 2, 3]]


def test_obj_malformed_number_has_line():
    with pytest.raises(MeshParseError, match="line 2") as err:
        read_obj(io.StringIO("v 0 0 0\nv 1 x 0\n"))
    assert err.value.line == 2


@pytest.mark.parametrize("face", ["f 0 1 2", "f 1 2 9"])
def test_obj_bad_face_index(face):
    with pytest.raises(MeshError):
        read_obj(io.StringIO(f"v 0 0 0\nv 1 0 0\nv 0 1 0\n{face}\n"))


OFF_TET = """OFF
4 4 6
1 1 1
1 -1 -1
-1 1 -1
-1 -1 1
3 0 1 2
3 0 3 1
3 0 2 3
3 1 3 2
"""


def test_off_tetrahedron():
    pos, faces = read_off(io.StringIO(OFF_TET))
    ref_pos, ref_faces = regular_tetrahedron()
    assert np.array_equal(pos, ref_pos)
    assert faces.tolist() == ref_faces.tolist()


def test_off_single_triangle_and_inline_counts():
    pos, faces = read_off(io.StringIO("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n"))
    assert len(pos) == 3 and faces.tolist() == [[0, 1, 2]]
    pos, faces = read_off(io.StringIO("OFF 3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n"))
    assert faces.tolist() == [[0, 1, 2]]


def test_off_polygon_fan():
    with pytest.warns(PolygonWarning):
        _, faces = read_off(io.StringIO("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n"))
    assert faces.tolist() == [[0, 1, 2], [0, 2, 3]]


def test_off_truncated_sections():
    lines = OFF_TET.splitlines()
    with pytest.raises(MeshError, match="face section.*expected 4 faces, found 2"):
        read_off(io.StringIO("\n".join(lines[:-2])))
    with pytest.raises(MeshError, match="vertex section.*expected 4 vertices, found 2"):
        read_off(io.StringIO("\n".join(lines[:4])))
    with pytest.raises(MeshParseError, match="header"):
        read_off(io.StringIO("PLY\n"))
    with pytest.raises(MeshParseError, match="counts"):
        read_off(io.StringIO("OFF\n"))


def test_off_face_count_mismatch():
    with pytest.raises(MeshParseError, match="declares 3"):
        read_off(io.StringIO("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1\n"))


ALL = [
    lambda: shapes.icosphere(3),
    lambda: shapes.uv_sphere(24, 12, radius=0.3),
    lambda: shapes.torus(64, 32),
    lambda: shapes.plane_grid(5, size=np.pi),
    lambda: shapes.open_cylinder(17, 3, radius=np.e, center=(-1e-300, 1e300, 1 / 3)),
]


@pytest.mark.parametrize("make", ALL)
@pytest.mark.parametrize("fmt", ["obj", "off"])
def test_round_trip_bit_exact(make, fmt, tmp_path):
    m = make().mesh
    path = tmp_path / f"mesh.{fmt}"
    write_mesh(m, path)
    pos, faces = read_mesh(path)
    assert np.array_equal(pos, m.positions)
    assert np.array_equal(faces, m.faces)


def test_round_trip_streams_random_bits(rng):
    pos = rng.normal(size=(50, 3)) * 10.0 ** rng.integers(-200, 200, size=(50, 1))
    faces = np.array([[0, 1, 2], [2, 3, 4]])
    for writer, reader in ((write_obj, read_obj), (write_off, read_off)):
        buf = io.StringIO()
        writer(pos, faces, buf)
        buf.seek(0)
        p2, f2 = reader(buf)
        assert np.array_equal(p2, pos) and np.array_equal(f2, faces)


def test_unsupported_extension(tmp_path):
    with pytest.raises(MeshError):
        read_mesh(tmp_path / "x.ply")


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_report_tetrahedron():
    m = build_mesh(*regular_tetrahedron())
    text = report_string(curvature_force_balance(m), m)
    lines = text.splitlines()
    assert len(lines) == 5
    assert lines[0] == "vertex,x,y,z,Hn_x,Hn_y,Hn_z,H,A_mixed,valid"
    rows = _rows(text)
    assert [r["vertex"] for r in rows] == ["0", "1", "2", "3"]
    assert all(r["valid"] == "true" for r in rows)
    assert float(rows[0]["x"]) == 1.0


def test_report_reference_and_other_columns():
    s = shapes.icosphere(2)
    a, b = curvature_force_balance(s.mesh), curvature_cotangent(s.mesh)
    rows = _rows(report_string(a, s.mesh, reference=s.H_ref, other=b))
    r = rows[5]
    assert float(r["H_ref"]) == 1.0
    assert float(r["abs_err"]) == pytest.approx(abs(a.H[5] - 1.0))
    assert float(r["rel_err"]) == pytest.approx(abs(a.H[5] - 1.0))
    assert float(r["discrepancy"]) < 1e-10
    assert float(r["Hn2_x"]) == pytest.approx(b.Hn[5, 0])
    # 17 significant digits reproduce the float exactly
    assert float(r["Hn_x"]) == a.Hn[5, 0]


def test_report_invalid_rows_empty():
    m = build_mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    s_ref = np.zeros(3)
    rows = _rows(report_string(curvature_force_balance(m), m, reference=s_ref))
    for r in rows:
        assert r["valid"] == "false"
        assert r["H"] == "" and r["Hn_x"] == "" and r["A_mixed"] == ""
        assert r["abs_err"] == "" and r["H_ref"] == "0"
