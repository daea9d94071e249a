"""Explicit mean-curvature flow driven either by the curvature estimate or by
the nodal tension forces.

Both modes give the same update: ``x <- x - dt * Hn`` and
``x <- x - dt * F / (2 gamma A)`` coincide because ``F = 2 gamma A Hn``.
Explicit Euler is only stable for small steps; ``dt < min_edge**2 / 4`` is
a safe guideline.
"""

import csv
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .curvature import curvature_force_balance, mixed_areas, nodal_forces
from .mesh import VertexClass

logger = logging.getLogger(__name__)

MODES = ("curvature_flow", "force_relaxation")
MAX_DEGENERATE_FRACTION = 0.10


class FlowAbortedError(RuntimeError):
    def __init__(self, msg, history):
        super().__init__(msg)
        self.history = history


@dataclass(frozen=True)
class FlowConfig:
    dt: float
    steps: int = 1
    gamma: float = 1.0
    mode: str = "curvature_flow"
    stop_tol: float = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class StepDiagnostics:
    """State of the mesh after ``step`` updates."""

    step: int
    max_hn: float
    area: float
    volume: float


@dataclass
class FlowResult:
    mesh: object
    history: list = field(default_factory=list)
    stopped_early: bool = False


def surface_area(mesh):
    return float(mesh.geometry.area.sum())


def enclosed_volume(mesh):
    """Signed volume by the divergence theorem; positive for outward winding."""
    x = mesh.positions[mesh.faces]
    return float(np.einsum("fi,fi->f", x[:, 0], np.cross(x[:, 1], x[:, 2])).sum() / 6.0)


def velocity(mesh, config):
    """Per-vertex velocity and the curvature field it was computed from.

    Invalid vertices get zero velocity.
    """
    field_ = curvature_force_balance(mesh)
    valid = field_.valid
    v = np.zeros_like(mesh.positions)
    if config.mode == "curvature_flow":
        v[valid] = -field_.Hn[valid]
    else:
        F = nodal_forces(mesh, config.gamma).F
        A = mixed_areas(mesh)
        v[valid] = -F[valid] / (2.0 * A[valid, None]) / config.gamma
    return v, field_


def _check(mesh, history):
    g = mesh.geometry
    frac = g.n_degenerate / max(mesh.n_faces, 1)
    if frac > MAX_DEGENERATE_FRACTION:
        raise FlowAbortedError(
            f"{g.n_degenerate} of {mesh.n_faces} faces degenerate ({frac:.1%}); flow aborted", history
        )


def step(mesh, config):
    """One explicit Euler step.

    Returns
    -------
    positions : ndarray
        Updated coordinates (the input mesh is untouched).
    diagnostics : StepDiagnostics
        For the input state, with ``step = 0``.
    """
    _check(mesh, [])
    v, field_ = velocity(mesh, config)
    if (~field_.valid).any():
        warnings.warn(f"{int((~field_.valid).sum())} invalid vertices held fixed", stacklevel=2)
    diag = StepDiagnostics(0, _max_hn(field_), surface_area(mesh), enclosed_volume(mesh))
    return mesh.positions + config.dt * v, diag


def _max_hn(field_):
    mags = np.linalg.norm(field_.Hn[field_.valid], axis=1)
    return float(mags.max()) if len(mags) else 0.0


def run(mesh, config):
    """Run ``config.steps`` steps; stop early once max |Hn| < ``stop_tol``.

    ``history`` holds one row per visited state, starting with the input.
    """
    history = []
    warned = False
    for s in range(config.steps + 1):
        _check(mesh, history)
        v, field_ = velocity(mesh, config)
        max_hn = _max_hn(field_)
        history.append(StepDiagnostics(s, max_hn, surface_area(mesh), enclosed_volume(mesh)))
        if s == config.steps:
            break
        if config.stop_tol is not None and max_hn < config.stop_tol:
            logger.info("stopping at step %d: max|Hn| %.3g < %.3g", s, max_hn, config.stop_tol)
            return FlowResult(mesh, history, stopped_early=True)
        if not warned and (mesh.vertex_class != VertexClass.INTERIOR).any():
            warnings.warn("boundary or non-manifold vertices present; held fixed", stacklevel=2)
            warned = True
        mesh = mesh.with_positions(mesh.positions + config.dt * v)
    return FlowResult(mesh, history)


def write_diagnostics(history, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["step", "max_abs_Hn", "area", "volume"])
    for row in history:
        w.writerow([row.step, f"{row.max_hn:.17g}", f"{row.area:.17g}", f"{row.volume:.17g}"])
