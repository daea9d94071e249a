"""Meshes of surfaces with known mean curvature.

Every generator returns a :class:`Shape`: the mesh plus, per vertex, the
analytic mean curvature ``H_ref`` and unit outward normal ``n_ref``.
Closed shapes are wound counterclockwise seen from outside.
"""

from dataclasses import dataclass, field

import numpy as np

from .mesh import build_mesh

KINDS = ("icosphere", "uv_sphere", "torus", "plane_grid", "open_cylinder")


class ShapeSpecError(ValueError):
    pass


@dataclass(frozen=True)
class ShapeSpec:
    """Parameters of an analytic test surface.

    ``level`` is the subdivision level for ``icosphere``. The grid shapes use
    ``n_u`` x ``n_v``: longitude x latitude bands (``uv_sphere``), around the
    axis x around the tube (``torus``), cells per side (``plane_grid``,
    ``n_u`` only) and around x along the axis (``open_cylinder``).
    """

    kind: str
    radius: float = 1.0
    tube_radius: float = 0.5
    level: int = 0
    n_u: int = 16
    n_v: int = 8
    height: float = 1.0
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ShapeSpecError(f"unknown shape kind {self.kind!r}; expected one of {KINDS}")
        if not self.radius > 0:
            raise ShapeSpecError(f"radius must be positive, got {self.radius}")
        if self.kind == "torus":
            if not self.tube_radius > 0:
                raise ShapeSpecError(f"tube_radius must be positive, got {self.tube_radius}")
            if not self.radius > self.tube_radius:
                raise ShapeSpecError("torus needs radius > tube_radius")
        if self.level < 0:
            raise ShapeSpecError(f"subdivision level must be >= 0, got {self.level}")
        min_u = {"uv_sphere": 3, "torus": 3, "open_cylinder": 3, "plane_grid": 1}.get(self.kind, 0)
        min_v = {"uv_sphere": 2, "torus": 3, "open_cylinder": 1}.get(self.kind, 0)
        if self.n_u < min_u or self.n_v < min_v:
            raise ShapeSpecError(f"{self.kind} needs n_u >= {min_u} and n_v >= {min_v}")
        if self.kind == "open_cylinder" and not self.height > 0:
            raise ShapeSpecError(f"height must be positive, got {self.height}")
        if len(self.center) != 3:
            raise ShapeSpecError("center must have 3 coordinates")


@dataclass(frozen=True)
class Shape:
    spec: ShapeSpec
    mesh: object
    H_ref: np.ndarray
    n_ref: np.ndarray
    params: np.ndarray = field(default=None, repr=False)


def _icosahedron():
    t = (1.0 + np.sqrt(5.0)) / 2.0
    v = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=float,
    )
    f = np.array(
        [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ],
        dtype=np.int64,
    )
    return v / np.linalg.norm(v, axis=1, keepdims=True), f


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def icosphere_arrays(level):
    """Unit icosphere by midpoint subdivision, projecting to the sphere each level."""
    verts, faces = _icosahedron()
    for _ in range(level):
        verts = list(verts)
        cache = {}

        def midpoint(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in cache:
                verts.append(_unit((verts[a] + verts[b]) / 2.0))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces.tolist():
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        verts, faces = np.array(verts), np.array(new, dtype=np.int64)
    return verts, faces


def _grid_faces(n_u, n_v, wrap_u, wrap_v):
    """Two triangles per cell of an (n_u, n_v) vertex grid, index = u * n_v + v.

    Winding follows the (u, v) parameter orientation.
    """
    cu = n_u if wrap_u else n_u - 1
    cv = n_v if wrap_v else n_v - 1
    u, v = np.meshgrid(np.arange(cu), np.arange(cv), indexing="ij")
    u, v = u.ravel(), v.ravel()
    u1, v1 = (u + 1) % n_u, (v + 1) % n_v
    a, b, c, d = u * n_v + v, u1 * n_v + v, u1 * n_v + v1, u * n_v + v1
    return np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)]).astype(np.int64)


def _icosphere(spec):
    unit, faces = icosphere_arrays(spec.level)
    pos = spec.radius * unit
    H = np.full(len(pos), 1.0 / spec.radius)
    return pos, faces, H, unit, None


def _uv_sphere(spec):
    n_lon, n_lat = spec.n_u, spec.n_v
    phi = 2 * np.pi * np.arange(n_lon) / n_lon
    theta = np.pi * np.arange(1, n_lat) / n_lat  # polar angle, poles excluded
    th, ph = np.meshgrid(theta, phi, indexing="ij")  # ring-major
    ring = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], -1).reshape(-1, 3)
    unit = np.vstack([[0, 0, 1.0], ring, [0, 0, -1.0]])
    north, south = 0, len(unit) - 1

    def idx(r, k):
        return 1 + r * n_lon + (k % n_lon)

    faces = []
    for k in range(n_lon):
        faces.append([north, idx(0, k), idx(0, k + 1)])
    for r in range(n_lat - 2):
        for k in range(n_lon):
            a, b = idx(r, k), idx(r, k + 1)
            c, d = idx(r + 1, k + 1), idx(r + 1, k)
            faces += [[a, d, c], [a, c, b]]
    for k in range(n_lon):
        faces.append([south, idx(n_lat - 2, k + 1), idx(n_lat - 2, k)])
    pos = spec.radius * unit
    H = np.full(len(pos), 1.0 / spec.radius)
    return pos, np.array(faces, np.int64), H, unit, None


def torus_mean_curvature(R, r, v):
    """Mean curvature of the torus at tube angle ``v`` (0 on the outer equator)."""
    return (R + 2 * r * np.cos(v)) / (2 * r * (R + r * np.cos(v)))


def _torus(spec):
    R, r = spec.radius, spec.tube_radius
    u = 2 * np.pi * np.arange(spec.n_u) / spec.n_u
    v = 2 * np.pi * np.arange(spec.n_v) / spec.n_v
    U, V = np.meshgrid(u, v, indexing="ij")
    U, V = U.ravel(), V.ravel()
    rho = R + r * np.cos(V)
    pos = np.stack([rho * np.cos(U), rho * np.sin(U), r * np.sin(V)], -1)
    n = np.stack([np.cos(V) * np.cos(U), np.cos(V) * np.sin(U), np.sin(V)], -1)
    faces = _grid_faces(spec.n_u, spec.n_v, True, True)
    return pos, faces, torus_mean_curvature(R, r, V), n, np.stack([U, V], -1)


def _plane_grid(spec):
    n = spec.n_u + 1
    s = np.linspace(0.0, spec.radius, n)
    X, Y = np.meshgrid(s, s, indexing="ij")
    pos = np.stack([X.ravel(), Y.ravel(), np.zeros(n * n)], -1)
    faces = _grid_faces(n, n, False, False)
    normal = np.tile([0.0, 0.0, 1.0], (n * n, 1))
    return pos, faces, np.zeros(n * n), normal, np.stack([X.ravel(), Y.ravel()], -1)


def _open_cylinder(spec):
    n_theta, n_z = spec.n_u, spec.n_v + 1
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = np.linspace(0.0, spec.height, n_z)
    T, Z = np.meshgrid(th, z, indexing="ij")
    T, Z = T.ravel(), Z.ravel()
    pos = np.stack([spec.radius * np.cos(T), spec.radius * np.sin(T), Z], -1)
    n = np.stack([np.cos(T), np.sin(T), np.zeros_like(T)], -1)
    faces = _grid_faces(n_theta, n_z, True, False)
    H = np.full(len(pos), 1.0 / (2 * spec.radius))
    return pos, faces, H, n, np.stack([T, Z], -1)


_GENERATORS = {
    "icosphere": _icosphere,
    "uv_sphere": _uv_sphere,
    "torus": _torus,
    "plane_grid": _plane_grid,
    "open_cylinder": _open_cylinder,
}


def generate(spec=None, **kwargs):
    """Build the mesh for ``spec`` (or ``ShapeSpec(**kwargs)``).

    >>> s = generate(kind="icosphere", level=0)
    >>> s.mesh.n_vertices, s.mesh.n_faces, s.mesh.euler_characteristic
    (12, 20, 2)
    """
    if spec is None:
        spec = ShapeSpec(**kwargs)
    elif kwargs:
        raise TypeError("pass either a ShapeSpec or keyword parameters, not both")
    pos, faces, H, n, params = _GENERATORS[spec.kind](spec)
    pos = pos + np.asarray(spec.center, dtype=float)
    return Shape(spec=spec, mesh=build_mesh(pos, faces), H_ref=H, n_ref=n, params=params)


def icosphere(level=3, radius=1.0, center=(0.0, 0.0, 0.0)):
    return generate(ShapeSpec("icosphere", radius=radius, level=level, center=center))


def uv_sphere(n_lon=32, n_lat=16, radius=1.0, center=(0.0, 0.0, 0.0)):
    return generate(ShapeSpec("uv_sphere", radius=radius, n_u=n_lon, n_v=n_lat, center=center))


def torus(n_u=64, n_v=32, radius=2.0, tube_radius=0.5, center=(0.0, 0.0, 0.0)):
    return generate(ShapeSpec("torus", radius=radius, tube_radius=tube_radius, n_u=n_u, n_v=n_v, center=center))


def plane_grid(n=8, size=1.0, center=(0.0, 0.0, 0.0)):
    return generate(ShapeSpec("plane_grid", radius=size, n_u=n, center=center))


def open_cylinder(n_theta=32, n_z=8, radius=1.0, height=1.0, center=(0.0, 0.0, 0.0)):
    return generate(ShapeSpec("open_cylinder", radius=radius, n_u=n_theta, n_v=n_z, height=height, center=center))


def tangential_jitter(mesh, normals, amplitude, seed):
    """Displace vertices within their tangent planes.

    Each vertex moves by ``amplitude * (local min edge length)`` times a
    vector whose two tangent components are uniform on [-1, 1].

    Parameters
    ----------
    mesh : Mesh
    normals : ndarray, shape (n, 3)
        Unit normals defining the tangent planes.
    amplitude : float
        Fraction of each vertex's shortest incident edge.
    seed : int
        Seed for ``numpy.random.default_rng``; required.

    Returns
    -------
    ndarray
        New positions.
    """
    if seed is None:
        raise ValueError("a seed is required for jitter")
    rng = np.random.default_rng(seed)
    x = mesh.positions
    e = mesh.edges
    lengths = np.linalg.norm(x[e[:, 0]] - x[e[:, 1]], axis=1)
    local = np.full(len(x), np.inf)
    np.minimum.at(local, e[:, 0], lengths)
    np.minimum.at(local, e[:, 1], lengths)
    local[~np.isfinite(local)] = 0.0

    n = _unit(np.asarray(normals, dtype=float))
    helper = np.where(np.abs(n[:, :1]) < 0.9, [[1.0, 0, 0]], [[0, 1.0, 0]])
    t1 = _unit(np.cross(n, helper))
    t2 = np.cross(n, t1)
    a, b = rng.uniform(-1.0, 1.0, size=(2, len(x)))
    shift = (a[:, None] * t1 + b[:, None] * t2) * (amplitude * local)[:, None]
    return x + shift
