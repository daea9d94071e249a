"""Mean-curvature normals on triangle meshes from surface-tension force
balance, cross-checked against the cotangent Laplace-Beltrami formula."""

from .curvature import (
    CurvatureField,
    NodalForceField,
    curvature,
    curvature_cotangent,
    curvature_force_balance,
    element_nodal_force,
    element_nodal_force_edge_ends,
    mixed_area,
    mixed_areas,
    nodal_forces,
    pressure_recovery,
    relative_discrepancy,
    vertex_normals,
)
from .flow import FlowConfig, run as run_flow, step as flow_step
from .geometry import (
    DegenerateTriangleError,
    TriangleFrame,
    edge_perp_cotangent_form,
    foot_of_altitude,
    triangle_frame,
)
from .mesh import Mesh, MeshError, NonManifoldVertexError, VertexClass, build_mesh, one_ring_elements
from .shapes import ShapeSpec, generate

__version__ = "0.1.0"
