"""The dilatation bound K(s, k) and the disk-inclusion algebra behind it.

For s = 1 the extension inherits the raw constant k.  Otherwise K is the
root l3 of a disk-containment problem: the k-scaled target disk must fit
inside the image of the unit disk under the Moebius transfer.  The
containment is re-checked geometrically (centres and radii), independent
of the closed-form root.
"""

import numpy as np

from schlicht import disk_inclusion_check, qc_bound_k

print("== closed forms ==")
print(f"  K(1, 0.3)    = {qc_bound_k(1, 0.3).K}")
print(f"  K(2, 0)      = {qc_bound_k(2, 0.0).K:.12f}  (= 1/3)")
qb = qc_bound_k(1 + 1j, 0.2)
print(f"  K(1+i, 0.2)  = {qb.K:.12f}")
print(f"      roots: l1 = {qb.l1:.6f}, l2 = {qb.l2:.6f}, l3 = {qb.l3:.6f}")

print("\n== a small table ==")
print(f"  {'s':>8s} {'k':>5s} {'l1':>9s} {'l2':>9s} {'l3 = K':>9s}")
for s in (2, 0.5 + 2j, 3 - 1j):
    for k in (0.0, 0.25, 0.5, 0.75):
        qb = qc_bound_k(s, k)
        print(f"  {s!s:>8s} {k:5.2f} {qb.l1:9.5f} {qb.l2:9.5f} {qb.l3:9.5f}")

print("\n== the geometric containment at l = K ==")
rng = np.random.default_rng(7)
worst = np.inf
for _ in range(2000):
    s = complex(rng.uniform(0.01, 10), rng.uniform(-10, 10))
    k = float(rng.uniform(0, 0.99))
    m = float(rng.uniform(0.1, 10))
    K = qc_bound_k(s, k).K
    holds, slack = disk_inclusion_check(s, m, k, K)
    worst = min(worst, slack)
    assert holds
print(f"  containment held on 2000 random draws; worst slack {worst:.2e}")

print("\n== and just below K it fails ==")
s, k, m = 2 + 1j, 0.4, 2.0
K = qc_bound_k(s, k).K
for l in (K, K - 0.01, K - 0.1):
    holds, slack = disk_inclusion_check(s, m, k, l)
    print(f"  l = {l:.5f}: holds = {holds}, slack = {slack:+.5f}")
