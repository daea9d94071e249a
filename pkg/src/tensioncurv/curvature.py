"""Nodal surface-tension forces, mixed areas and the two mean-curvature-normal
estimators.

Surface tension ``gamma`` pulls outward and perpendicular on every edge of a
triangle. Lumping each edge's load half-and-half onto its end points, the
force at vertex ``i`` from face ``ijk`` is

    F_i,ijk = gamma/2 * (l_ki t_ki + l_ij t_ij) = -gamma/2 * l_jk t_jk

(the second form follows because ``l t`` summed over a closed triangle is
zero). Summed over the one-ring, ``F_i`` balances the pressure load
``2 gamma H A_i n`` on the vertex's control area, giving

    Hn_i = -1/(4 A_i) * sum l_jk t_jk
         =  1/(4 A_i) * sum_j (cot beta_ij + cot theta_ij) (x_i - x_j).

Both sums are implemented independently: one over faces (opposite edges),
one over edges (opposite-angle cotangent weights).

Per-vertex sums are accumulated in one-ring (fan) order.
"""

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import DegenerateTriangleError, _vertex_name
from .mesh import MeshError, NonManifoldVertexError, VertexClass

logger = logging.getLogger(__name__)


class InvalidVertexError(MeshError):
    pass


@dataclass(frozen=True)
class Diagnostics:
    n_degenerate_faces: int
    degenerate_faces: np.ndarray
    n_invalid_vertices: int
    orientation_consistent: bool
    warnings: tuple = ()


@dataclass(frozen=True)
class NodalForceField:
    """Per-vertex force holding the mesh in place against tension ``gamma``.

    ``valid`` marks interior vertices, where ``F`` is a curvature proxy.
    Boundary vertices keep their force so that the global sum still closes;
    only vertices without a usable face get zero.
    """

    gamma: float
    F: np.ndarray
    valid: np.ndarray
    diagnostics: Diagnostics


@dataclass(frozen=True)
class CurvatureField:
    """Mean-curvature normal per vertex. Invalid vertices hold NaN."""

    Hn: np.ndarray
    A_mixed: np.ndarray
    H: np.ndarray
    valid: np.ndarray
    normals: np.ndarray
    estimator: str
    diagnostics: Diagnostics = field(repr=False)

    @property
    def orientation_consistent(self):
        return self.diagnostics.orientation_consistent


# element level ---------------------------------------------------------------


def element_nodal_force(frame, which_vertex, gamma=1.0):
    """Tension force at one vertex of a triangle, opposite-edge form.

    Returns ``-gamma/2 * l_opp * t_opp`` where ``opp`` is the edge not
    touching ``which_vertex`` (``'i'``, ``'j'``, ``'k'`` or 0, 1, 2).
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    length, perp = frame.opposite(which_vertex)
    return -0.5 * gamma * length * perp


def element_nodal_force_edge_ends(frame, which_vertex, gamma=1.0):
    """Same force, summed from the two half-edge loads at the vertex."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    name = _vertex_name(which_vertex)
    edges = {
        "i": ((frame.l_ki, frame.t_ki), (frame.l_ij, frame.t_ij)),
        "j": ((frame.l_ij, frame.t_ij), (frame.l_jk, frame.t_jk)),
        "k": ((frame.l_jk, frame.t_jk), (frame.l_ki, frame.t_ki)),
    }[name]
    return sum(0.5 * gamma * length * perp for length, perp in edges)


# mesh level --------------------------------------------------------------------


def _accumulate(n, index, values):
    """Sum rows of ``values`` into ``n`` slots, sequentially in the given order."""
    out = np.zeros((n,) + values.shape[1:])
    np.add.at(out, index, values)
    return out


def _ring_contributions(mesh, per_corner):
    """Gather a per-face-corner quantity in fan order, summed per vertex."""
    vals = per_corner[mesh._ring_face, mesh._ring_corner_flat]
    return _accumulate(mesh.n_vertices, mesh._ring_vertex, vals)


def _diagnostics(mesh, valid, extra=()):
    g = mesh.geometry
    msgs = list(extra)
    if g.n_degenerate:
        msgs.append(f"{g.n_degenerate} degenerate faces excluded")
    n_invalid = int((~valid).sum())
    if n_invalid:
        msgs.append(f"{n_invalid} vertices flagged invalid (boundary, non-manifold or degenerate ring)")
    if not mesh.orientation_consistent:
        msgs.append("inconsistent face orientation; signs unreliable")
    return Diagnostics(
        n_degenerate_faces=g.n_degenerate,
        degenerate_faces=np.nonzero(g.degenerate)[0],
        n_invalid_vertices=n_invalid,
        orientation_consistent=mesh.orientation_consistent,
        warnings=tuple(msgs),
    )


def _usable_face_count(mesh):
    ok = (~mesh.geometry.degenerate).astype(float)
    per_corner = np.repeat(ok[:, None], 3, axis=1)
    return _ring_contributions(mesh, per_corner)


def opposite_edge_sum(mesh):
    """``sum l_jk t_jk`` over non-degenerate faces of each one-ring."""
    g = mesh.geometry
    return _ring_contributions(mesh, g.opp_len[..., None] * g.opp_perp)


def nodal_forces(mesh, gamma=1.0):
    """Per-vertex tension force ``F_i = -gamma/2 * sum l_jk t_jk``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    F = -0.5 * gamma * opposite_edge_sum(mesh)
    valid = (mesh.vertex_class == VertexClass.INTERIOR) & (_usable_face_count(mesh) > 0)
    return NodalForceField(gamma=float(gamma), F=F, valid=valid, diagnostics=_diagnostics(mesh, valid))


def mixed_area_pieces(geom, positions, faces):
    """Per-corner share of each face's area (modified Voronoi rule).

    Non-obtuse face: Voronoi piece ``(cot_j |x_k-x_i|^2 + cot_k |x_j-x_i|^2) / 8``.
    Obtuse face: half the area to the obtuse corner, a quarter to each other.
    Degenerate faces give zero.
    """
    x = np.asarray(positions, dtype=float)[np.asarray(faces)]
    d2 = np.einsum("fci,fci->fc", x - np.roll(x, -1, axis=1), x - np.roll(x, -1, axis=1))
    # d2[:, c] = |x_c - x_{c+1}|^2
    cot = geom.cot
    cot_next, cot_prev = np.roll(cot, -1, axis=1), np.roll(cot, -2, axis=1)
    sq_to_prev = np.roll(d2, 1, axis=1)  # |x_c - x_{c-1}|^2, i.e. |x_i - x_k|^2
    voronoi = (cot_next * sq_to_prev + cot_prev * d2) / 8.0
    # dot < 0 <=> angle > pi/2, exactly
    obtuse_here = cot < 0
    obtuse_face = obtuse_here.any(axis=1)
    area = geom.area[:, None]
    pieces = np.where(obtuse_face[:, None], np.where(obtuse_here, area / 2, area / 4), voronoi)
    pieces[geom.degenerate] = 0.0
    return pieces


def mixed_areas(mesh):
    """Mixed area of every vertex; zero where no usable face is incident."""
    pieces = mixed_area_pieces(mesh.geometry, mesh.positions, mesh.faces)
    return _ring_contributions(mesh, pieces)


def mixed_area(mesh, i):
    """Mixed area of vertex ``i``.

    Raises
    ------
    InvalidVertexError
        If every incident face is degenerate (or there are none).
    """
    if mesh.vertex_class[i] == VertexClass.NON_MANIFOLD:
        raise NonManifoldVertexError(i)
    g = mesh.geometry
    ring, corner = mesh.one_ring[i], mesh._ring_corner[i]
    if len(ring) == 0 or g.degenerate[ring].all():
        raise InvalidVertexError(f"vertex {i}: no non-degenerate incident face")
    pieces = mixed_area_pieces(g, mesh.positions, mesh.faces)
    total = 0.0
    for f, c in zip(ring, corner):
        total += pieces[f, c]
    return float(total)


def vertex_normals(mesh):
    """Unit area-weighted vertex normals (sum of face cross products)."""
    g = mesh.geometry
    cross = np.where(g.degenerate[:, None], 0.0, g.cross)
    per_corner = np.repeat(cross[:, None, :], 3, axis=1)
    n = _ring_contributions(mesh, per_corner)
    length = np.linalg.norm(n, axis=1)
    return np.divide(n, length[:, None], out=np.zeros_like(n), where=length[:, None] > 0)


def _finish(mesh, S, estimator):
    """Turn a per-vertex numerator ``S`` (= 4 A Hn) into a CurvatureField."""
    A = mixed_areas(mesh)
    valid = (mesh.vertex_class == VertexClass.INTERIOR) & (A > 0)
    normals = vertex_normals(mesh)
    Hn = np.full_like(S, np.nan)
    Hn[valid] = S[valid] / (4.0 * A[valid, None])
    mag = np.linalg.norm(Hn, axis=1)
    sign = np.where(np.einsum("ij,ij->i", Hn, normals) < 0, -1.0, 1.0)
    H = np.where(valid, sign * mag, np.nan)
    A_out = np.where(valid, A, np.nan)
    diag = _diagnostics(mesh, valid)
    if not mesh.orientation_consistent:
        warnings.warn("mesh orientation inconsistent; curvature signs unreliable", stacklevel=3)
    return CurvatureField(Hn=Hn, A_mixed=A_out, H=H, valid=valid, normals=normals, estimator=estimator, diagnostics=diag)


def curvature_force_balance(mesh):
    """Mean-curvature normal from the one-ring tension balance.

    ``Hn_i = -sum(l_jk t_jk) / (4 A_i)``, which equals
    ``nodal_forces(mesh, 1).F / (2 A_i)``.
    """
    return _finish(mesh, -opposite_edge_sum(mesh), "force")


def edge_cot_weights(mesh):
    """``cot beta + cot theta`` for every edge in ``mesh.edges`` order.

    Each face adds the cotangent at a corner to the weight of the edge
    opposite that corner; degenerate faces add nothing.
    """
    g = mesh.geometry
    ok = ~g.degenerate
    return np.bincount(
        mesh._face_edge[ok].ravel(), weights=g.cot[ok].ravel(), minlength=mesh.n_edges
    ).astype(float)


def curvature_cotangent(mesh):
    """Mean-curvature normal from the edge-wise cotangent formula.

    ``Hn_i = sum_j (cot beta_ij + cot theta_ij)(x_i - x_j) / (4 A_i)``, one
    term per edge incident to ``i``.
    """
    w = edge_cot_weights(mesh)
    x = mesh.positions
    vi = mesh._nbr_vertex
    edges = mesh.edges[mesh._nbr_edge]
    vj = np.where(edges[:, 0] == vi, edges[:, 1], edges[:, 0])
    terms = w[mesh._nbr_edge, None] * (x[vi] - x[vj])
    S = _accumulate(mesh.n_vertices, vi, terms)
    return _finish(mesh, S, "cotangent")


def pressure_recovery(mesh, gamma=1.0):
    """Pressure jump ``P_in - P_out`` implied by the nodal forces.

    ``(F_i . n_i) / A_i`` with the unit area-weighted normal; about
    ``2 gamma H`` on a smooth closed surface. NaN at invalid vertices.
    """
    forces = nodal_forces(mesh, gamma)
    A = mixed_areas(mesh)
    valid = forces.valid & (A > 0)
    n = vertex_normals(mesh)
    p = np.full(mesh.n_vertices, np.nan)
    p[valid] = np.einsum("ij,ij->i", forces.F[valid], n[valid]) / A[valid]
    return p


def curvature(mesh, estimator="force"):
    """Dispatch on estimator name: ``'force'`` or ``'cotangent'``."""
    if estimator == "force":
        return curvature_force_balance(mesh)
    if estimator == "cotangent":
        return curvature_cotangent(mesh)
    raise ValueError(f"unknown estimator {estimator!r}; expected 'force' or 'cotangent'")


def relative_discrepancy(a, b, atol=0.0):
    """Per-vertex ``|a - b| / max(|a|, |b|)`` for two (n, 3) fields.

    Rows where both norms are at most ``atol`` report the absolute
    difference instead (used near zero curvature). NaN rows stay NaN.
    """
    diff = np.linalg.norm(a - b, axis=1)
    scale = np.maximum(np.linalg.norm(a, axis=1), np.linalg.norm(b, axis=1))
    small = scale <= atol
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(small, diff, diff / np.where(small, 1.0, scale))


__all__ = [
    "CurvatureField",
    "DegenerateTriangleError",
    "Diagnostics",
    "InvalidVertexError",
    "NodalForceField",
    "curvature",
    "curvature_cotangent",
    "curvature_force_balance",
    "edge_cot_weights",
    "element_nodal_force",
    "element_nodal_force_edge_ends",
    "mixed_area",
    "mixed_area_pieces",
    "mixed_areas",
    "nodal_forces",
    "opposite_edge_sum",
    "pressure_recovery",
    "relative_discrepancy",
    "vertex_normals",
]
