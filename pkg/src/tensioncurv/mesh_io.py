"""ASCII OBJ / OFF readers and writers, and the per-vertex CSV report.

Floats are written with 17 significant digits so that a write/read cycle
reproduces coordinates bit for bit.
"""

import csv
import io
import os
import warnings
from contextlib import contextmanager

import numpy as np

from .mesh import MeshError


class MeshParseError(MeshError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class PolygonWarning(UserWarning):
    pass


FLOAT_FMT = "{:.17g}"


@contextmanager
def _open(src, mode):
    if isinstance(src, (str, os.PathLike)):
        with open(src, mode, encoding="utf-8", newline="" if "w" in mode else None) as fh:
            yield fh
    else:
        yield src


def _fan(poly):
    return [(poly[0], poly[t], poly[t + 1]) for t in range(1, len(poly) - 1)]


def _check_faces(faces, n_vertices):
    f = np.array(faces, dtype=np.int64).reshape(-1, 3)
    if f.size and (f.min() < 0 or f.max() >= n_vertices):
        bad = int(np.nonzero(((f < 0) | (f >= n_vertices)).any(axis=1))[0][0])
        raise MeshError(f"face {bad} references a vertex outside [0, {n_vertices})")
    return f


def read_obj(src):
    """Read ``v`` and ``f`` records from an OBJ file or text stream.

    Face entries may carry ``/vt/vn`` suffixes, which are dropped. Negative
    (relative) indices are resolved. Polygons are split into a fan from
    their first vertex, with a :class:`PolygonWarning`.

    Returns
    -------
    positions : ndarray, shape (n, 3)
    faces : ndarray of int, shape (m, 3)
    """
    verts, faces = [], []
    n_poly = 0
    with _open(src, "r") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split("#", 1)[0].split()
            if not parts:
                continue
            tag = parts[0]
            if tag == "v":
                if len(parts) < 4:
                    raise MeshParseError("vertex needs 3 coordinates", lineno)
                try:
                    verts.append([float(p) for p in parts[1:4]])
                except ValueError as err:
                    raise MeshParseError(f"malformed number: {err}", lineno) from None
            elif tag == "f":
                if len(parts) < 4:
                    raise MeshParseError("face needs at least 3 vertices", lineno)
                idx = []
                for p in parts[1:]:
                    try:
                        k = int(p.split("/")[0])
                    except ValueError:
                        raise MeshParseError(f"malformed face index {p!r}", lineno) from None
                    if k == 0:
                        raise MeshParseError("face index 0 is invalid (OBJ is 1-based)", lineno)
                    k = k - 1 if k > 0 else len(verts) + k
                    if not 0 <= k < len(verts):
                        raise MeshParseError(f"face index {p} out of range", lineno)
                    idx.append(k)
                if len(idx) > 3:
                    n_poly += 1
                faces.extend(_fan(idx))
    if n_poly:
        warnings.warn(f"{n_poly} polygonal faces fan-triangulated", PolygonWarning, stacklevel=2)
    return np.array(verts, float).reshape(-1, 3), _check_faces(faces, len(verts))


def read_off(src):
    """Read an ASCII OFF file or text stream. Same return values as :func:`read_obj`."""
    with _open(src, "r") as fh:
        lines = [
            (no, ln.split("#", 1)[0].split()) for no, ln in enumerate(fh, 1)
        ]
    lines = [(no, p) for no, p in lines if p]
    if not lines or lines[0][1][0] != "OFF":
        raise MeshParseError("missing OFF header", lines[0][0] if lines else None)
    head = lines[0][1][1:]
    rest = lines[1:]
    if not head:
        if not rest:
            raise MeshParseError("missing counts line")
        head, rest = rest[0][1], rest[1:]
    try:
        n_v, n_f = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise MeshParseError("malformed counts line") from None

    if len(rest) < n_v:
        raise MeshError(f"OFF vertex section truncated: expected {n_v} vertices, found {len(rest)}")
    verts = []
    for no, p in rest[:n_v]:
        if len(p) < 3:
            raise MeshParseError("vertex needs 3 coordinates", no)
        try:
            verts.append([float(x) for x in p[:3]])
        except ValueError as err:
            raise MeshParseError(f"malformed number: {err}", no) from None
    face_lines = rest[n_v:]
    if len(face_lines) < n_f:
        raise MeshError(f"OFF face section truncated: expected {n_f} faces, found {len(face_lines)}")
    faces = []
    n_poly = 0
    for no, p in face_lines[:n_f]:
        try:
            k = int(p[0])
            idx = [int(x) for x in p[1 : 1 + k]]
        except ValueError:
            raise MeshParseError("malformed face record", no) from None
        if k < 3 or len(idx) != k:
            raise MeshParseError(f"face declares {k} vertices, has {len(idx)}", no)
        if k > 3:
            n_poly += 1
        faces.extend(_fan(idx))
    if n_poly:
        warnings.warn(f"{n_poly} polygonal faces fan-triangulated", PolygonWarning, stacklevel=2)
    return np.array(verts, float).reshape(-1, 3), _check_faces(faces, len(verts))


def read_mesh(path):
    """Read by file extension (``.obj`` or ``.off``)."""
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".obj":
        return read_obj(path)
    if ext == ".off":
        return read_off(path)
    raise MeshError(f"unsupported mesh format {ext!r}; expected .obj or .off")


def _fmt_vec(v):
    return " ".join(FLOAT_FMT.format(float(c)) for c in v)


def write_obj(positions, faces, dst):
    with _open(dst, "w") as fh:
        for p in np.asarray(positions, float):
            fh.write(f"v {_fmt_vec(p)}\n")
        for a, b, c in np.asarray(faces, np.int64).tolist():
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")


def write_off(positions, faces, dst):
    positions = np.asarray(positions, float)
    faces = np.asarray(faces, np.int64)
    with _open(dst, "w") as fh:
        fh.write(f"OFF\n{len(positions)} {len(faces)} 0\n")
        for p in positions:
            fh.write(f"{_fmt_vec(p)}\n")
        for a, b, c in faces.tolist():
            fh.write(f"3 {a} {b} {c}\n")


def write_mesh(mesh, path):
    ext = os.path.splitext(str(path))[1].lower()
    writer = {".obj": write_obj, ".off": write_off}.get(ext)
    if writer is None:
        raise MeshError(f"unsupported mesh format {ext!r}; expected .obj or .off")
    writer(mesh.positions, mesh.faces, path)


REPORT_COLUMNS = ["vertex", "x", "y", "z", "Hn_x", "Hn_y", "Hn_z", "H", "A_mixed", "valid"]


def _num(x):
    return "" if not np.isfinite(x) else FLOAT_FMT.format(float(x))


def write_report(field, mesh, dst, reference=None, other=None):
    """Per-vertex CSV, one row per vertex in index order.

    ``reference`` (analytic ``H_ref`` per vertex) adds ``H_ref``,
    ``abs_err`` and ``rel_err``. ``other`` (a second curvature field) adds
    its ``Hn`` and the relative discrepancy. Numeric cells of invalid rows
    are left empty.
    """
    from .curvature import relative_discrepancy

    header = list(REPORT_COLUMNS)
    if other is not None:
        header += ["Hn2_x", "Hn2_y", "Hn2_z", "discrepancy"]
        disc = relative_discrepancy(field.Hn, other.Hn)
    if reference is not None:
        header += ["H_ref", "abs_err", "rel_err"]
        ref = np.asarray(reference, float)
    with _open(dst, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i in range(mesh.n_vertices):
            ok = bool(field.valid[i])
            row = [i, *(FLOAT_FMT.format(c) for c in mesh.positions[i])]
            if ok:
                row += [_num(c) for c in field.Hn[i]] + [_num(field.H[i]), _num(field.A_mixed[i])]
            else:
                row += [""] * 5
            row.append("true" if ok else "false")
            if other is not None:
                if ok and other.valid[i]:
                    row += [_num(c) for c in other.Hn[i]] + [_num(disc[i])]
                else:
                    row += [""] * 4
            if reference is not None:
                row.append(_num(ref[i]))
                if ok:
                    err = abs(field.H[i] - ref[i])
                    rel = err / abs(ref[i]) if ref[i] != 0 else np.nan
                    row += [_num(err), _num(rel)]
                else:
                    row += ["", ""]
            w.writerow(row)


def report_string(field, mesh, **kwargs):
    buf = io.StringIO()
    write_report(field, mesh, buf, **kwargs)
    return buf.getvalue()
