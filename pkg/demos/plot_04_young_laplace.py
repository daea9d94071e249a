"""
Pressure from surface tension
=============================

A drop of radius R with surface tension gamma holds a pressure jump of
2 gamma / R.  The nodal tension forces, projected on the vertex normal and
divided by the vertex area, recover that pressure at every vertex.
"""

import numpy as np

from tensioncurv import shapes
from tensioncurv.curvature import nodal_forces, pressure_recovery

for radius, gamma in [(1.0, 1.0), (2.0, 3.0), (0.5, 0.072)]:
    mesh = shapes.icosphere(3, radius=radius).mesh
    p = pressure_recovery(mesh, gamma)
    print(f"R={radius}  gamma={gamma}  pressure {p.min():.5f} .. {p.max():.5f}  expected {2 * gamma / radius:.5f}")

# %%
# The forces balance globally: a closed surface under uniform tension has no
# net force.

F = nodal_forces(shapes.torus().mesh, gamma=1.0).F
print("net force on a torus:", np.linalg.norm(F.sum(axis=0)))
