"""
Curvature of a refined sphere
=============================

On a unit sphere H = 1 everywhere.  Refining the icosphere shrinks the
error quickly.  Level 1 happens to be exact: every vertex sees an identical
symmetric fan.
"""

import numpy as np

from tensioncurv import shapes
from tensioncurv.curvature import curvature_force_balance

print("level  vertices  median |H-1|   max |H-1|")
for level in range(1, 6):
    mesh = shapes.icosphere(level).mesh
    H = curvature_force_balance(mesh).H
    err = np.abs(H - 1.0)
    print(f"{level:5d}  {mesh.n_vertices:8d}  {np.median(err):.3e}     {err.max():.3e}")

# %%
# Curvature scales as one over length: a sphere of radius 5 gives H = 0.2.

H = curvature_force_balance(shapes.icosphere(3, radius=5.0).mesh).H
print("radius 5:", np.median(H))
