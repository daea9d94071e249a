"""Command-line interface: ``tensioncurv {gen,compute,compare,convergence,flow}``.

Set ``TENSIONCURV_LOG_LEVEL`` (e.g. ``INFO``, ``DEBUG``) for more output.
"""

import argparse
import contextlib
import logging
import os
import sys
import warnings

import numpy as np

from . import flow as flow_mod
from . import mesh_io, shapes
from .curvature import curvature_cotangent, curvature_force_balance, relative_discrepancy, vertex_normals
from .mesh import MeshError, build_mesh

logger = logging.getLogger("tensioncurv")

EXIT_ERROR = 1
EXIT_STRICT = 3


class CLIError(Exception):
    pass


# input handling ----------------------------------------------------------------


def _add_input(p, positional=True):
    if positional:
        p.add_argument("input", nargs="?", help="mesh file (.obj or .off)")
    g = p.add_argument_group("generated shape")
    g.add_argument("--shape", choices=shapes.KINDS, help="generate an analytic shape instead of reading a file")
    g.add_argument("--level", type=int, default=3, help="icosphere subdivision level")
    g.add_argument("--radius", type=float, default=None, help="radius (torus: major radius; plane: side)")
    g.add_argument("--tube-radius", type=float, default=0.5)
    g.add_argument("--nu", type=int, default=None, help="grid resolution along u")
    g.add_argument("--nv", type=int, default=None, help="grid resolution along v")
    g.add_argument("--height", type=float, default=1.0, help="cylinder height")
    g.add_argument("--jitter", type=float, default=0.0, help="tangential jitter, fraction of local min edge")
    g.add_argument("--seed", type=int, default=None, help="RNG seed, required with --jitter")


_DEFAULT_RADIUS = {"torus": 2.0}
_DEFAULT_GRID = {
    "uv_sphere": (32, 16),
    "torus": (64, 32),
    "plane_grid": (8, 8),
    "open_cylinder": (32, 8),
}


def _spec_from_args(args, kind=None, **override):
    kind = kind or args.shape
    nu, nv = _DEFAULT_GRID.get(kind, (16, 8))
    params = dict(
        radius=args.radius if args.radius is not None else _DEFAULT_RADIUS.get(kind, 1.0),
        tube_radius=args.tube_radius,
        level=args.level,
        n_u=args.nu if args.nu is not None else nu,
        n_v=args.nv if args.nv is not None else nv,
        height=args.height,
    )
    params.update(override)
    return shapes.ShapeSpec(kind, **params)


def _check_jitter(args):
    if args.jitter < 0:
        raise CLIError("--jitter must be >= 0")
    if args.jitter > 0 and args.seed is None:
        raise CLIError("--seed is required when --jitter > 0")


def _jittered(mesh, normals, args):
    if args.jitter > 0:
        return mesh.with_positions(shapes.tangential_jitter(mesh, normals, args.jitter, args.seed))
    return mesh


def _load(args):
    """Return ``(mesh, H_ref or None)`` from a file xor a generated shape."""
    has_file = getattr(args, "input", None) is not None
    if has_file == (args.shape is not None):
        raise CLIError("give exactly one input: a mesh file or --shape")
    _check_jitter(args)
    if has_file:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            positions, faces = mesh_io.read_mesh(args.input)
            mesh = build_mesh(positions, faces)
        for w in caught:
            logger.warning("%s", w.message)
        if args.jitter > 0:
            mesh = _jittered(mesh, vertex_normals(mesh), args)
        return mesh, None
    shape = shapes.generate(_spec_from_args(args))
    return _jittered(shape.mesh, shape.n_ref, args), shape.H_ref


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _report_diagnostics(field, strict):
    d = field.diagnostics
    for msg in d.warnings:
        logger.warning("%s", msg)
    if strict and (d.n_degenerate_faces or d.n_invalid_vertices):
        logger.error(
            "strict mode: %d degenerate faces, %d invalid vertices", d.n_degenerate_faces, d.n_invalid_vertices
        )
        return EXIT_STRICT
    return 0


# subcommands -------------------------------------------------------------------


def cmd_gen(args):
    args.input = None
    mesh, _ = _load(args)
    if args.out is None or args.out == "-":
        writer = mesh_io.write_off if args.format == "off" else mesh_io.write_obj
        writer(mesh.positions, mesh.faces, sys.stdout)
    else:
        mesh_io.write_mesh(mesh, args.out)
    return 0


def cmd_compute(args):
    mesh, ref = _load(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if args.estimator == "cotangent":
            field, other = curvature_cotangent(mesh), None
        else:
            field = curvature_force_balance(mesh)
            other = curvature_cotangent(mesh) if args.estimator == "both" else None
    with _output(args.out) as fh:
        mesh_io.write_report(field, mesh, fh, reference=ref, other=other)
    return _report_diagnostics(field, args.strict)


def _discrepancy(mesh):
    a, b = curvature_force_balance(mesh), curvature_cotangent(mesh)
    valid = a.valid & b.valid
    scale = 1.0 / np.mean(np.linalg.norm(mesh.positions[mesh.edges[:, 0]] - mesh.positions[mesh.edges[:, 1]], axis=1))
    # below this |Hn| the relative measure is meaningless (flat regions)
    atol = 1e-12 * scale
    d = relative_discrepancy(a.Hn, b.Hn, atol=atol)
    return a, b, valid, d


def cmd_compare(args):
    mesh, _ = _load(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a, b, valid, d = _discrepancy(mesh)
    dv = d[valid]
    mx = float(dv.max()) if len(dv) else float("nan")
    med = float(np.median(dv)) if len(dv) else float("nan")
    print(f"n_valid={int(valid.sum())} max_rel_discrepancy={mx:.3e} median_rel_discrepancy={med:.3e}")
    if args.csv:
        with _output(args.csv) as fh:
            mesh_io.write_report(a, mesh, fh, other=b)
    return _report_diagnostics(a, args.strict)


def level_spec(kind, level, args):
    """Shape spec for one refinement level of a convergence study."""
    k = 2**level
    if kind == "icosphere":
        return _spec_from_args(args, kind, level=level)
    if kind == "uv_sphere":
        return _spec_from_args(args, kind, n_u=8 * k, n_v=4 * k)
    if kind == "torus":
        return _spec_from_args(args, kind, n_u=8 * k, n_v=4 * k)
    if kind == "plane_grid":
        return _spec_from_args(args, kind, n_u=2 * k)
    return _spec_from_args(args, kind, n_u=8 * k, n_v=2 * k)


CONVERGENCE_COLUMNS = [
    "level", "n_vertices", "mean_edge_length",
    "median_rel_err", "max_rel_err", "median_abs_err", "max_abs_err",
]


def convergence_rows(kind, levels, args):
    rows = []
    for level in levels:
        shape = shapes.generate(level_spec(kind, level, args))
        mesh = _jittered(shape.mesh, shape.n_ref, args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            field = curvature_force_balance(mesh)
        v = field.valid
        x = mesh.positions
        edge_len = np.linalg.norm(x[mesh.edges[:, 0]] - x[mesh.edges[:, 1]], axis=1)
        abs_err = np.abs(field.H[v] - shape.H_ref[v])
        nz = shape.H_ref[v] != 0
        rel_err = abs_err[nz] / np.abs(shape.H_ref[v][nz])
        rows.append(
            dict(
                level=level,
                n_vertices=mesh.n_vertices,
                mean_edge_length=float(edge_len.mean()),
                median_rel_err=float(np.median(rel_err)) if len(rel_err) else float("nan"),
                max_rel_err=float(rel_err.max()) if len(rel_err) else float("nan"),
                median_abs_err=float(np.median(abs_err)) if len(abs_err) else float("nan"),
                max_abs_err=float(abs_err.max()) if len(abs_err) else float("nan"),
            )
        )
    return rows


def cmd_convergence(args):
    _check_jitter(args)
    rows = convergence_rows(args.shape, args.levels, args)
    with _output(args.out) as fh:
        fh.write(",".join(CONVERGENCE_COLUMNS) + "\n")
        for r in rows:
            cells = [str(r["level"]), str(r["n_vertices"])]
            cells += [mesh_io._num(r[c]) for c in CONVERGENCE_COLUMNS[2:]]
            fh.write(",".join(cells) + "\n")
    return 0


def cmd_flow(args):
    mesh, _ = _load(args)
    config = flow_mod.FlowConfig(
        dt=args.dt, steps=args.steps, gamma=args.gamma, mode=args.mode, stop_tol=args.stop_tol
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            result = flow_mod.run(mesh, config)
        except flow_mod.FlowAbortedError as err:
            with _output(args.out) as fh:
                flow_mod.write_diagnostics(err.history, fh)
            raise CLIError(str(err)) from None
    for w in {str(w.message) for w in caught}:
        logger.warning("%s", w)
    with _output(args.out) as fh:
        flow_mod.write_diagnostics(result.history, fh)
    if args.mesh_out:
        mesh_io.write_mesh(result.mesh, args.mesh_out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tensioncurv", description="Mean-curvature normals from surface-tension force balance."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write an analytic shape mesh")
    _add_input(p, positional=False)
    p.add_argument("--out", "-o", help="output .obj/.off path (default: stdout)")
    p.add_argument("--format", choices=("obj", "off"), default="obj", help="format when writing to stdout")
    p.set_defaults(func=cmd_gen, require_shape=True)

    p = sub.add_parser("compute", help="per-vertex curvature report (CSV)")
    _add_input(p)
    p.add_argument("--estimator", choices=("force", "cotangent", "both"), default="force")
    p.add_argument("--out", "-o", help="CSV path (default: stdout)")
    p.add_argument("--strict", action="store_true", help="nonzero exit on degenerate faces or invalid vertices")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("compare", help="discrepancy between the two estimators")
    _add_input(p)
    p.add_argument("--csv", help="also write the per-vertex report here")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("convergence", help="error against the analytic curvature over refinement levels")
    _add_input(p, positional=False)
    p.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--out", "-o", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_convergence, require_shape=True)

    p = sub.add_parser("flow", help="explicit mean-curvature flow")
    _add_input(p)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--mode", choices=flow_mod.MODES, default="curvature_flow")
    p.add_argument("--stop-tol", type=float, default=None)
    p.add_argument("--out", "-o", help="diagnostics CSV path (default: stdout)")
    p.add_argument("--mesh-out", help="write the final mesh (.obj/.off)")
    p.set_defaults(func=cmd_flow)
    return parser


def main(argv=None):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(os.environ.get("TENSIONCURV_LOG_LEVEL", "WARNING").upper())
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "require_shape", False) and args.shape is None:
            raise CLIError("--shape is required")
        return args.func(args)
    except (CLIError, MeshError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
