"""
Two routes to the same mean-curvature normal
============================================

Surface tension pulls on every edge of a triangulated interface.  Summing
those pulls around a vertex and dividing by its control area gives one
estimate of the mean-curvature normal; the classical cotangent formula
gives another.  On any triangle mesh the two agree to round-off.
"""

import numpy as np

from tensioncurv import shapes
from tensioncurv.curvature import curvature_cotangent, curvature_force_balance, relative_discrepancy

# a unit icosphere, then the same sphere with its vertices slid along the
# surface so that no two triangles look alike
ico = shapes.icosphere(3)
jittered = ico.mesh.with_positions(shapes.tangential_jitter(ico.mesh, ico.n_ref, 0.1, seed=1))

for name, mesh in [("icosphere", ico.mesh), ("jittered", jittered), ("torus", shapes.torus().mesh)]:
    force = curvature_force_balance(mesh)
    cot = curvature_cotangent(mesh)
    d = relative_discrepancy(force.Hn, cot.Hn)
    print(f"{name:10s} vertices={mesh.n_vertices:5d}  max relative discrepancy={d.max():.1e}")

# %%
# The agreement is not a coincidence of symmetric meshes: per triangle, the
# outward edge perpendicular can be written with the cotangents of the two
# adjacent angles, so both sums are the same sum in different clothes.

from tensioncurv.geometry import edge_perp_cotangent, edge_perp_from_foot

rng = np.random.default_rng(0)
p = rng.uniform(-1, 1, size=(5, 3, 3))
print(np.abs(edge_perp_cotangent(p[:, 0], p[:, 1], p[:, 2]) - edge_perp_from_foot(p[:, 0], p[:, 1], p[:, 2])).max())
