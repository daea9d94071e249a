"""Slow, loop-based reference computations.

These use different constructions from the package: edge perpendiculars
from the foot of altitude, Voronoi areas from the circumcenter, angles from
the law of cosines, and per-face edge-end force lumping.
"""

import math

import numpy as np


def perp_from_foot(apex, a, b):
    """Unit vector in the plane of (apex, a, b), normal to ab, away from apex."""
    ab = b - a
    foot = a + np.dot(apex - a, ab) / np.dot(ab, ab) * ab
    d = foot - apex
    return d / np.linalg.norm(d)


def law_of_cosines_angles(x_i, x_j, x_k):
    a = np.linalg.norm(x_k - x_j)
    b = np.linalg.norm(x_i - x_k)
    c = np.linalg.norm(x_j - x_i)
    ai = math.acos(np.clip((b * b + c * c - a * a) / (2 * b * c), -1, 1))
    aj = math.acos(np.clip((a * a + c * c - b * b) / (2 * a * c), -1, 1))
    return ai, aj, math.pi - ai - aj


def tri_area(a, b, c):
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a))


def circumcenter(a, b, c):
    ab, ac = b - a, c - a
    n = np.cross(ab, ac)
    return a + (np.dot(ac, ac) * np.cross(n, ab) + np.dot(ab, ab) * np.cross(ac, n)) / (2 * np.dot(n, n))


def voronoi_piece(x_i, x_j, x_k):
    """Area of the part of the triangle closer to x_i (non-obtuse triangles)."""
    cc = circumcenter(x_i, x_j, x_k)
    m_ij, m_ik = (x_i + x_j) / 2, (x_i + x_k) / 2
    return tri_area(x_i, m_ij, cc) + tri_area(x_i, cc, m_ik)


def mixed_piece(x_i, x_j, x_k):
    ai, aj, ak = law_of_cosines_angles(x_i, x_j, x_k)
    A = tri_area(x_i, x_j, x_k)
    if ai > math.pi / 2:
        return A / 2
    if aj > math.pi / 2 or ak > math.pi / 2:
        return A / 4
    return voronoi_piece(x_i, x_j, x_k)


def edge_end_force(x_i, x_j, x_k, gamma=1.0):
    """Half of each adjacent edge's tension load, delivered to x_i."""
    f = np.zeros(3)
    for a, b, opp in ((x_i, x_j, x_k), (x_k, x_i, x_j)):
        f += gamma * np.linalg.norm(b - a) / 2 * perp_from_foot(opp, a, b)
    return f


def curvature_normals(positions, faces):
    """Hn = F / (2 A) per vertex with gamma = 1, boundary-agnostic."""
    x = np.asarray(positions, float)
    n = len(x)
    F = np.zeros((n, 3))
    A = np.zeros(n)
    for tri in np.asarray(faces):
        for c in range(3):
            i, j, k = tri[c], tri[(c + 1) % 3], tri[(c + 2) % 3]
            F[i] += edge_end_force(x[i], x[j], x[k])
            A[i] += mixed_piece(x[i], x[j], x[k])
    return F / (2 * A[:, None]), A, F


def regular_tetrahedron():
    pos = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    faces = np.array([[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
    return pos, faces


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_triangles(rng, n):
    """Uniform points in a cube, rejecting triangles below the degeneracy threshold."""
    out = []
    while len(out) < n:
        p = rng.uniform(-1.0, 1.0, size=(n, 3, 3))
        area = 0.5 * np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)
        longest = np.max(np.linalg.norm(p - np.roll(p, 1, axis=1), axis=2), axis=1)
        out.extend(p[area >= 1e-12 * longest**2])
    return np.array(out[:n])
