import numpy as np
import pytest

from tensioncurv import shapes
from tensioncurv.flow import enclosed_volume
from tensioncurv.mesh import VertexClass
from tensioncurv.shapes import ShapeSpec, ShapeSpecError, generate


def test_icosahedron_counts():
    m = generate(kind="icosphere", level=0).mesh
    assert (m.n_vertices, m.n_faces, m.n_edges, m.euler_characteristic) == (12, 20, 30, 2)


@pytest.mark.parametrize("level, nv", [(1, 42), (2, 162), (3, 642), (4, 2562)])
def test_icosphere_counts(level, nv):
    m = shapes.icosphere(level).mesh
    assert m.n_vertices == nv
    assert m.n_faces == 20 * 4**level


def test_torus_counts():
    m = shapes.torus(64, 32, radius=2.0, tube_radius=0.5).mesh
    assert (m.n_vertices, m.n_faces, m.euler_characteristic) == (2048, 4096, 0)


def test_plane_reference_zero():
    s = shapes.plane_grid(5)
    assert np.all(s.H_ref == 0)
    assert (s.mesh.vertex_class == VertexClass.BOUNDARY).sum() == 4 * 5
    assert (s.mesh.vertex_class == VertexClass.INTERIOR).sum() == 4 * 4


def test_cylinder_has_two_boundary_rings():
    s = shapes.open_cylinder(12, 3)
    assert (s.mesh.vertex_class == VertexClass.BOUNDARY).sum() == 24
    np.testing.assert_allclose(s.H_ref, 0.5)


ALL = [
    lambda: shapes.icosphere(3, radius=1.7, center=(0.3, -1, 2)),
    lambda: shapes.uv_sphere(20, 11, radius=0.4),
    lambda: shapes.torus(24, 12, radius=3.0, tube_radius=1.0),
    lambda: shapes.plane_grid(6, size=2.0),
    lambda: shapes.open_cylinder(16, 5, radius=2.0, height=3.0),
]


def implicit_residual(s):
    x = s.mesh.positions - np.asarray(s.spec.center)
    k = s.spec.kind
    if k in ("icosphere", "uv_sphere"):
        return np.linalg.norm(x, axis=1) - s.spec.radius
    if k == "torus":
        rho = np.hypot(x[:, 0], x[:, 1])
        return np.hypot(rho - s.spec.radius, x[:, 2]) - s.spec.tube_radius
    if k == "plane_grid":
        return x[:, 2]
    return np.hypot(x[:, 0], x[:, 1]) - s.spec.radius


@pytest.mark.parametrize("make", ALL)
def test_vertices_on_surface(make):
    s = make()
    assert np.abs(implicit_residual(s)).max() < 1e-12


@pytest.mark.parametrize("make", ALL)
def test_consistent_outward_orientation(make):
    s = make()
    m = s.mesh
    assert m.orientation_consistent
    # face normals agree with the analytic normals of their vertices
    n_face = m.geometry.normal
    n_ref = s.n_ref[m.faces].mean(axis=1)
    assert np.all(np.einsum("ij,ij->i", n_face, n_ref) > 0)
    np.testing.assert_allclose(np.linalg.norm(s.n_ref, axis=1), 1.0, atol=1e-15)


@pytest.mark.parametrize("make", ALL[:3])
def test_closed_shapes_positive_volume(make):
    s = make()
    assert s.mesh.is_closed
    assert enclosed_volume(s.mesh) > 0


def test_torus_reference_curvature():
    s = shapes.torus(8, 4, radius=2.0, tube_radius=0.5)
    v = s.params[:, 1]
    outer, inner = np.isclose(v, 0), np.isclose(v, np.pi)
    np.testing.assert_allclose(s.H_ref[outer], (2 + 1) / (2 * 0.5 * 2.5))
    np.testing.assert_allclose(s.H_ref[inner], (2 - 1) / (2 * 0.5 * 1.5))
    # outer equator vertices sit at distance R + r from the axis
    np.testing.assert_allclose(np.hypot(*s.mesh.positions[outer, :2].T), 2.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="cube"),
        dict(kind="icosphere", radius=0.0),
        dict(kind="icosphere", level=-1),
        dict(kind="torus", radius=1.0, tube_radius=1.0),
        dict(kind="torus", tube_radius=-0.1),
        dict(kind="uv_sphere", n_u=2),
        dict(kind="open_cylinder", height=0.0),
        dict(kind="plane_grid", n_u=0),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ShapeSpecError):
        ShapeSpec(**kwargs)


def test_generate_rejects_spec_and_kwargs():
    with pytest.raises(TypeError):
        generate(ShapeSpec("icosphere"), level=2)


def test_jitter_is_tangential_and_seeded():
    s = shapes.icosphere(2)
    a = shapes.tangential_jitter(s.mesh, s.n_ref, 0.1, seed=5)
    b = shapes.tangential_jitter(s.mesh, s.n_ref, 0.1, seed=5)
    c = shapes.tangential_jitter(s.mesh, s.n_ref, 0.1, seed=6)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    d = a - s.mesh.positions
    assert np.abs(np.einsum("ij,ij->i", d, s.n_ref)).max() < 1e-15
    x = s.mesh.positions
    e = s.mesh.edges
    min_edge = np.linalg.norm(x[e[:, 0]] - x[e[:, 1]], axis=1).min()
    assert np.linalg.norm(d, axis=1).max() <= 0.1 * np.sqrt(2) * np.linalg.norm(x[e[:, 0]] - x[e[:, 1]], axis=1).max()
    assert np.linalg.norm(d, axis=1).max() > 0.01 * min_edge


def test_jitter_requires_seed():
    s = shapes.icosphere(0)
    with pytest.raises(ValueError):
        shapes.tangential_jitter(s.mesh, s.n_ref, 0.1, seed=None)
