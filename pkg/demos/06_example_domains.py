"""
Example domains
===============

Three planar regions bounded by explicit curves, completed to axially
symmetric sets: a hypocycloid, a lemniscate and a semidisk.
"""

import numpy as np

from slice_approx.geometry import (
    CassiniCell,
    branch_angles,
    hypocycloid,
    hypocycloid_domain,
    lemniscate,
    lemniscate_domain,
    sample,
    semidisk,
    semidisk_domain,
    semidisk_residual,
    starlike_check,
)

t = np.linspace(-np.pi, np.pi, 2001)
print("hypocycloid(3) at 0:", hypocycloid(3, 0.0))

keep = np.min(np.abs(np.angle(np.exp(1j * (t[:, None] - branch_angles("lemniscate", 2))))), axis=1) > 1e-6
z = lemniscate(2, np.exp(1j * t[keep]))
print("lemniscate residual:", np.max(np.abs(np.abs(z ** 2 - 1) - 1)))

keep = np.min(np.abs(np.angle(np.exp(1j * (t[:, None] - branch_angles("semidisk"))))), axis=1) > 1e-3
w = np.exp(1j * t[keep])
print("semidisk map as written, largest |z|:", np.abs(semidisk(w)).max())
print("exterior branch / 3, residual:", semidisk_residual(semidisk(w, branch="exterior", normalized=True)).max())

for d in (hypocycloid_domain(3), lemniscate_domain(2), semidisk_domain(), CassiniCell(0.0, 2.0, 1.0)):
    res = starlike_check(d, samples=sample(d, 500, seed=0))
    print(f"{d.descriptor:28} starlike w.r.t. 0: {res.ok}")
