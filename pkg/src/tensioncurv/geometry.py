"""Per-triangle quantities: edge lengths, angles, cotangents, area and
outward edge perpendiculars.

Two entry points share one convention. :func:`triangle_frame` evaluates a
single triangle into a :class:`TriangleFrame`; :func:`face_geometry`
evaluates every face of a mesh at once, indexed by corner, for the
assembly loops in :mod:`tensioncurv.curvature`.

Corner ``c`` of face ``(v0, v1, v2)`` plays the role of ``i`` with
``j = v[c+1]`` and ``k = v[c+2]`` (indices mod 3), so the edge opposite
corner ``c`` runs from ``j`` to ``k``.
"""

from dataclasses import dataclass

import numpy as np

from .mesh import MeshError

#: a triangle is degenerate when area < DEGENERACY_TOL * (longest edge)**2
DEGENERACY_TOL = 1e-12


class DegenerateTriangleError(MeshError):
    def __init__(self, face=None, msg="degenerate triangle"):
        self.face = face
        where = f" (face {face})" if face is not None else ""
        super().__init__(msg + where)


def _norm(v):
    return np.sqrt(np.einsum("...i,...i->...", v, v))


@dataclass(frozen=True)
class TriangleFrame:
    """Geometry of one triangle ``(x_i, x_j, x_k)``.

    ``t_ab`` is the unit vector in the triangle plane, perpendicular to edge
    ``ab`` and pointing away from the third vertex.
    """

    l_ij: float
    l_jk: float
    l_ki: float
    alpha_i: float
    alpha_j: float
    alpha_k: float
    cot_i: float
    cot_j: float
    cot_k: float
    area: float
    t_ij: np.ndarray
    t_jk: np.ndarray
    t_ki: np.ndarray
    normal: np.ndarray

    def opposite(self, which):
        """``(length, outward perpendicular)`` of the edge opposite a vertex."""
        return {
            "i": (self.l_jk, self.t_jk),
            "j": (self.l_ki, self.t_ki),
            "k": (self.l_ij, self.t_ij),
        }[_vertex_name(which)]

    @property
    def perimeter(self):
        return self.l_ij + self.l_jk + self.l_ki


def _vertex_name(which):
    if which in (0, 1, 2):
        return "ijk"[which]
    if which in ("i", "j", "k"):
        return which
    raise ValueError(f"vertex must be one of 'i', 'j', 'k' or 0, 1, 2; got {which!r}")


def _angle(u, v):
    return np.arctan2(_norm(np.cross(u, v)), np.einsum("...i,...i->...", u, v))


def triangle_frame(x_i, x_j, x_k, face=None):
    """Evaluate a :class:`TriangleFrame`.

    Raises
    ------
    DegenerateTriangleError
        If the area falls below ``DEGENERACY_TOL`` times the squared
        longest edge. ``face`` is carried into the error.
    """
    x_i, x_j, x_k = (np.asarray(x, dtype=float) for x in (x_i, x_j, x_k))
    e_ij, e_jk, e_ki = x_j - x_i, x_k - x_j, x_i - x_k
    l_ij, l_jk, l_ki = float(_norm(e_ij)), float(_norm(e_jk)), float(_norm(e_ki))
    cross = np.cross(e_ij, -e_ki)
    twice_area = float(_norm(cross))
    longest = max(l_ij, l_jk, l_ki)
    if not 0.5 * twice_area >= DEGENERACY_TOL * longest**2 or longest == 0.0:
        raise DegenerateTriangleError(face)
    n = cross / twice_area

    return TriangleFrame(
        l_ij=l_ij,
        l_jk=l_jk,
        l_ki=l_ki,
        alpha_i=float(_angle(e_ij, -e_ki)),
        alpha_j=float(_angle(e_jk, -e_ij)),
        alpha_k=float(_angle(e_ki, -e_jk)),
        cot_i=float(np.dot(e_ij, -e_ki)) / twice_area,
        cot_j=float(np.dot(e_jk, -e_ij)) / twice_area,
        cot_k=float(np.dot(e_ki, -e_jk)) / twice_area,
        area=0.5 * twice_area,
        t_ij=np.cross(e_ij, n) / l_ij,
        t_jk=np.cross(e_jk, n) / l_jk,
        t_ki=np.cross(e_ki, n) / l_ki,
        normal=n,
    )


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def foot_of_altitude(x_i, x_j, x_k):
    """Orthogonal projection of ``x_i`` onto the line through ``x_j, x_k``.

    Written as the distance-weighted blend of the two base vertices; the
    weights are signed, so an obtuse base angle puts the foot outside the
    segment. Broadcasts over leading dimensions.
    """
    x_i, x_j, x_k = (np.asarray(x, dtype=float) for x in (x_i, x_j, x_k))
    base = x_k - x_j
    l_jk = _norm(base)
    reach = np.maximum(_norm(x_i - x_j), _norm(x_i - x_k))
    if np.any(~(l_jk > DEGENERACY_TOL * reach)):
        raise DegenerateTriangleError(msg="degenerate base edge")
    d_jf = _dot(x_i - x_j, base) / l_jk  # signed |x_f - x_j|
    d_fk = l_jk - d_jf  # signed |x_k - x_f|
    return (d_fk / l_jk)[..., None] * x_j + (d_jf / l_jk)[..., None] * x_k


def edge_perp_cotangent_form(frame, x_i, x_j, x_k):
    """Outward perpendicular of edge ``jk`` written with cotangents only:
    ``(cot_k (x_j - x_i) + cot_j (x_k - x_i)) / l_jk``.
    """
    x_i, x_j, x_k = (np.asarray(x, dtype=float) for x in (x_i, x_j, x_k))
    return (frame.cot_k * (x_j - x_i) + frame.cot_j * (x_k - x_i)) / frame.l_jk


def edge_perp_cotangent(x_i, x_j, x_k):
    """Array version of :func:`edge_perp_cotangent_form`; cotangents are
    computed from the points (dot over cross magnitude)."""
    x_i, x_j, x_k = (np.asarray(x, dtype=float) for x in (x_i, x_j, x_k))
    twice_area = _norm(np.cross(x_j - x_i, x_k - x_i))
    cot_j = _dot(x_k - x_j, x_i - x_j) / twice_area
    cot_k = _dot(x_i - x_k, x_j - x_k) / twice_area
    l_jk = _norm(x_k - x_j)
    return (cot_k[..., None] * (x_j - x_i) + cot_j[..., None] * (x_k - x_i)) / l_jk[..., None]


def edge_perp_from_foot(x_i, x_j, x_k):
    """Outward perpendicular of edge ``jk`` as the unit vector from ``x_i``
    to its foot of altitude."""
    d = foot_of_altitude(x_i, x_j, x_k) - np.asarray(x_i, dtype=float)
    return d / _norm(d)[..., None]


@dataclass(frozen=True)
class FaceGeometry:
    """Per-face, per-corner geometry arrays for a whole mesh.

    ``cot[f, c]`` and ``angle[f, c]`` are at corner ``c``;
    ``opp_len[f, c]`` and ``opp_perp[f, c]`` describe the edge opposite it.
    Degenerate faces carry zeros in ``cot``, ``opp_perp`` and ``normal``.
    """

    area: np.ndarray  # (m,)
    normal: np.ndarray  # (m, 3) unit
    cross: np.ndarray  # (m, 3), length 2 * area
    angle: np.ndarray  # (m, 3)
    cot: np.ndarray  # (m, 3)
    opp_len: np.ndarray  # (m, 3)
    opp_perp: np.ndarray  # (m, 3, 3)
    degenerate: np.ndarray  # (m,) bool

    @property
    def n_degenerate(self):
        return int(self.degenerate.sum())


def face_geometry(positions, faces):
    x = np.asarray(positions, dtype=float)[np.asarray(faces)]  # (m, 3 corners, 3)
    m = len(x)
    # edge opposite corner c: from corner c+1 to corner c+2
    e_opp = np.roll(x, -2, axis=1) - np.roll(x, -1, axis=1)
    opp_len = _norm(e_opp)
    cross = np.cross(x[:, 1] - x[:, 0], x[:, 2] - x[:, 0])
    twice_area = _norm(cross)
    area = 0.5 * twice_area
    longest = opp_len.max(axis=1) if m else np.zeros(0)
    degenerate = ~(area >= DEGENERACY_TOL * longest**2) | (longest == 0.0)

    # at corner c: u -> next vertex, v -> previous vertex
    u = np.roll(x, -1, axis=1) - x
    v = np.roll(x, -2, axis=1) - x
    dots = np.einsum("fci,fci->fc", u, v)
    angle = _angle(u, v)

    ok = ~degenerate
    safe = np.where(ok, twice_area, 1.0)
    normal = np.where(ok[:, None], cross / safe[:, None], 0.0)
    cot = np.where(ok[:, None], dots / safe[:, None], 0.0)
    safe_len = np.where(opp_len > 0, opp_len, 1.0)
    opp_perp = np.cross(e_opp, normal[:, None, :]) / safe_len[..., None]
    opp_perp[degenerate] = 0.0
    return FaceGeometry(
        area=area,
        normal=normal,
        cross=cross,
        angle=angle,
        cot=cot,
        opp_len=opp_len,
        opp_perp=opp_perp,
        degenerate=degenerate,
    )
