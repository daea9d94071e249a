"""Indexed triangle mesh with eagerly built adjacency.

A :class:`Mesh` is immutable once built. All adjacency (one-ring fans,
edge-to-face incidence, vertex classification, orientation check) is
constructed in ``__init__`` and only read afterwards.
"""

import enum
import logging
import warnings
from collections import defaultdict
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

logger = logging.getLogger(__name__)


class MeshError(ValueError):
    """Structural problem with mesh data."""


class NonManifoldVertexError(MeshError):
    def __init__(self, vertex, reason="non-manifold vertex"):
        self.vertex = int(vertex)
        super().__init__(f"vertex {self.vertex}: {reason}")


class OrientationWarning(UserWarning):
    pass


class VertexClass(enum.IntEnum):
    INTERIOR = 0
    BOUNDARY = 1
    NON_MANIFOLD = 2


def _readonly(a):
    a.setflags(write=False)
    return a


def _order_fan(items):
    """Order the faces around one vertex into a fan.

    ``items`` holds ``(face, j, k)`` with ``(i, j, k)`` in stored winding.
    Returns ``(order, connected, closed, max_share)``.
    """
    share = defaultdict(list)
    for idx, (_, j, k) in enumerate(items):
        share[j].append(idx)
        share[k].append(idx)
    max_share = max(len(s) for s in share.values())

    open_j = [idx for idx, (_, j, _) in enumerate(items) if len(share[j]) == 1]
    open_k = [idx for idx, (_, _, k) in enumerate(items) if len(share[k]) == 1]
    if open_j:
        start = min(open_j, key=lambda idx: items[idx][0])
        w = items[start][2]
    elif open_k:
        start = min(open_k, key=lambda idx: items[idx][0])
        w = items[start][1]
    else:
        start = min(range(len(items)), key=lambda idx: items[idx][0])
        w = items[start][2]

    order = [start]
    seen = {start}
    while True:
        nxt = [x for x in share[w] if x not in seen]
        if not nxt:
            break
        x = nxt[0]
        seen.add(x)
        order.append(x)
        _, fj, fk = items[x]
        w = fk if fj == w else fj
    closed = not open_j and not open_k
    return order, len(order) == len(items), closed, max_share


class Mesh:
    """Indexed triangle mesh.

    Parameters
    ----------
    positions : array_like, shape (n, 3)
        Vertex coordinates.
    faces : array_like of int, shape (m, 3)
        Vertex index triples, counterclockwise seen from outside.

    Attributes
    ----------
    positions, faces : ndarray
        Read-only copies of the inputs.
    one_ring : tuple of ndarray
        Incident face ids per vertex, in fan order.
    edge_map : dict
        ``(a, b)`` with ``a < b`` mapped to the tuple of incident face ids.
    vertex_class : ndarray of VertexClass values
    orientation_consistent : bool
        False if any interior edge appears with the same direction in both
        of its faces.
    inconsistent_components : list of int
        Connected face components that contain such an edge.
    """

    def __init__(self, positions, faces, *, _topology=None):
        pos = np.array(positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or len(pos) == 0:
            raise MeshError(f"positions must be a non-empty (n, 3) array, got shape {pos.shape}")
        self.positions = _readonly(pos)

        if _topology is not None:
            self.__dict__.update(_topology)
            return

        f = np.array(faces, dtype=np.int64).reshape(-1, 3) if len(faces) else np.zeros((0, 3), np.int64)
        n = len(pos)
        if f.size and (f.min() < 0 or f.max() >= n):
            bad = int(np.nonzero((f < 0) | (f >= n))[0][0])
            raise MeshError(f"face {bad} has vertex index out of range [0, {n})")
        dup = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 2] == f[:, 0])
        if dup.any():
            raise MeshError(f"face {int(np.nonzero(dup)[0][0])} repeats a vertex")
        self.faces = _readonly(f)
        self._build_adjacency()

    # construction ---------------------------------------------------------

    def _build_adjacency(self):
        n, f = len(self.positions), self.faces

        edge_map = defaultdict(list)
        directed = {}
        for fid, (a, b, c) in enumerate(f.tolist()):
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                edge_map[key].append(fid)
                directed.setdefault(key, []).append((u, v))
        self.edge_map = {k: tuple(v) for k, v in edge_map.items()}

        bad_edges = [k for k, d in directed.items() if len(d) == 2 and d[0] == d[1]]
        self.nonmanifold_edges = sorted(k for k, v in self.edge_map.items() if len(v) > 2)

        # face components for per-component orientation reporting
        if len(f):
            pairs = [v for v in self.edge_map.values() if len(v) >= 2]
            rows = [p[0] for p in pairs for _ in p[1:]]
            cols = [q for p in pairs for q in p[1:]]
            adj = sparse.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(f), len(f)))
            ncomp, labels = csgraph.connected_components(adj, directed=False)
        else:
            ncomp, labels = 0, np.zeros(0, int)
        self.n_components = int(ncomp)
        self.face_component = _readonly(labels.astype(np.int64))
        self.inconsistent_components = sorted({int(labels[self.edge_map[k][0]]) for k in bad_edges})
        self.orientation_consistent = not bad_edges
        if bad_edges:
            warnings.warn(
                f"inconsistent face winding on {len(bad_edges)} edges in components "
                f"{self.inconsistent_components}; curvature signs are unreliable",
                OrientationWarning,
                stacklevel=3,
            )

        incident = [[] for _ in range(n)]
        for fid, tri in enumerate(f.tolist()):
            for c in range(3):
                incident[tri[c]].append((fid, tri[(c + 1) % 3], tri[(c + 2) % 3], c))

        nm_vertices = {v for e in self.nonmanifold_edges for v in e}
        vclass = np.full(n, VertexClass.INTERIOR, dtype=np.int8)
        rings, corners = [], []
        for v in range(n):
            items = incident[v]
            if not items:
                vclass[v] = VertexClass.NON_MANIFOLD
                rings.append(np.zeros(0, np.int64))
                corners.append(np.zeros(0, np.int8))
                continue
            order, connected, closed, max_share = _order_fan([it[:3] for it in items])
            if v in nm_vertices or not connected or max_share > 2:
                vclass[v] = VertexClass.NON_MANIFOLD
                order = sorted(range(len(items)), key=lambda idx: items[idx][0])
            elif not closed:
                vclass[v] = VertexClass.BOUNDARY
            rings.append(np.array([items[o][0] for o in order], np.int64))
            corners.append(np.array([items[o][3] for o in order], np.int8))
        self.vertex_class = _readonly(vclass)
        self.one_ring = tuple(_readonly(r) for r in rings)
        self._ring_corner = tuple(_readonly(c) for c in corners)

        # flattened fan-order layout for ordered per-vertex accumulation
        counts = np.array([len(r) for r in rings], np.int64)
        self._ring_vertex = _readonly(np.repeat(np.arange(n), counts))
        self._ring_face = _readonly(np.concatenate(rings) if n else np.zeros(0, np.int64))
        self._ring_corner_flat = _readonly(
            np.concatenate(corners).astype(np.int64) if n else np.zeros(0, np.int64)
        )

        # undirected edges, ids in sorted key order
        keys = sorted(self.edge_map)
        self.edges = _readonly(np.array(keys, np.int64).reshape(-1, 2))
        edge_id = {k: e for e, k in enumerate(keys)}
        self._edge_id = edge_id
        face_edge = []
        for t in f.tolist():
            row = []
            for c in range(3):
                a, b = t[(c + 1) % 3], t[(c + 2) % 3]
                row.append(edge_id[(a, b) if a < b else (b, a)])
            face_edge.append(row)
        self._face_edge = _readonly(np.array(face_edge, np.int64).reshape(-1, 3))

        # neighbour edges per vertex, in fan order
        nbr_v, nbr_e = [], []
        for v in range(n):
            seen = []
            for fid, c in zip(rings[v], corners[v]):
                tri = f[fid]
                for w in (tri[(c + 1) % 3], tri[(c + 2) % 3]):
                    w = int(w)
                    if w not in seen:
                        seen.append(w)
            nbr_v.extend([v] * len(seen))
            nbr_e.extend(edge_id[(v, w) if v < w else (w, v)] for w in seen)
        self._nbr_vertex = _readonly(np.array(nbr_v, np.int64))
        self._nbr_edge = _readonly(np.array(nbr_e, np.int64))

    def _topology_state(self):
        skip = {"positions"}
        return {
            k: v
            for k, v in self.__dict__.items()
            if k not in skip and not isinstance(getattr(type(self), k, None), cached_property)
        }

    def with_positions(self, positions):
        """Same connectivity, new coordinates. Adjacency is shared, not rebuilt."""
        pos = np.asarray(positions, dtype=float)
        if pos.shape != self.positions.shape:
            raise MeshError(f"expected positions of shape {self.positions.shape}, got {pos.shape}")
        return Mesh(pos, None, _topology=self._topology_state())

    # queries ---------------------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.positions)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def is_closed(self):
        return bool(np.all(self.vertex_class == VertexClass.INTERIOR))

    @cached_property
    def geometry(self):
        from .geometry import face_geometry

        return face_geometry(self.positions, self.faces)

    def boundary_edges(self):
        return [k for k, v in self.edge_map.items() if len(v) == 1]

    def __repr__(self):
        return f"Mesh(n_vertices={self.n_vertices}, n_faces={self.n_faces})"


def build_mesh(positions, faces):
    """Build a :class:`Mesh` and its adjacency.

    Raises
    ------
    MeshError
        On empty positions, an out-of-range face index or a face that
        repeats a vertex.
    """
    return Mesh(positions, faces)


def one_ring_elements(mesh, i):
    """Opposite-edge pairs ``(j, k)`` of the faces around vertex ``i``.

    Each pair is ordered so that ``(i, j, k)`` follows the stored winding of
    its face, and pairs come in fan order. For an interior vertex the fan is
    closed, so the ``k`` of the last pair equals the ``j`` of the first.
    """
    if not 0 <= i < mesh.n_vertices:
        raise MeshError(f"vertex {i} out of range [0, {mesh.n_vertices})")
    if mesh.vertex_class[i] == VertexClass.NON_MANIFOLD:
        reason = "isolated vertex" if len(mesh.one_ring[i]) == 0 else "non-manifold vertex"
        raise NonManifoldVertexError(i, reason)
    out = []
    for fid, c in zip(mesh.one_ring[i], mesh._ring_corner[i]):
        tri = mesh.faces[fid]
        out.append((int(tri[(c + 1) % 3]), int(tri[(c + 2) % 3])))
    return out
