"""
A surface with both signs of Gaussian curvature
===============================================

A torus with major radius R and tube radius r has mean curvature
H(v) = (R + 2 r cos v) / (2 r (R + r cos v)), largest on the outer equator
and smallest on the inner one.  The discrete estimate follows it closely.
"""

import numpy as np

from tensioncurv import shapes
from tensioncurv.curvature import curvature_force_balance

s = shapes.torus(64, 32, radius=2.0, tube_radius=0.5)
H = curvature_force_balance(s.mesh).H
rel = np.abs(H - s.H_ref) / np.abs(s.H_ref)
print(f"median relative error {np.median(rel):.2e}, max {rel.max():.2e}")

# one meridian, from the outer equator around the tube
v = s.params[:, 1]
meridian = np.flatnonzero(np.isclose(s.params[:, 0], 0.0))
for i in meridian[np.argsort(v[meridian])][::4]:
    print(f"v={v[i]:5.2f}  H={H[i]:.5f}  exact={s.H_ref[i]:.5f}")
