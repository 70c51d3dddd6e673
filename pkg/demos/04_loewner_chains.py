"""Sampling the Loewner chains behind the criteria.

The chain L(z,t) interpolates the operator (t = 0) out to a full-plane
normalization (t -> infinity, |a1(t)| -> infinity).  Its transfer data
A, B = A - m/(2a), w and the Caratheodory function p witness the disk
inequalities that make it a genuine chain; this demo spot-checks them on
sampled (z, t) lattices instead of proving them.
"""

import numpy as np

from schlicht import (
    AnalyticTriple,
    CriterionParams,
    chain_a1,
    chain_l,
    chain_point,
    chain_t6,
    subordination_spot_check,
    verify_chain_conditions,
)
from schlicht.dsl import parse
from schlicht.operators import operator_g_alpha

triple = AnalyticTriple.build(parse("z"), parse("z"), parse("1"))
params = CriterionParams(alpha=1, c=-1, s=1, m=2.0)

print("== the identity configuration has the closed form L = e^t z ==")
for t in (0.0, 0.5, 1.5):
    L = chain_l(triple, params, 0.3 + 0.2j, t)
    print(f"  t={t}: L = {L:.10f}   e^t z = {np.exp(t) * (0.3 + 0.2j):.10f}")
print(f"  a1(2) = {chain_a1(params, 1.0, 2.0):.10f}  (= e^2)")

print("\n== at t = 0 the chain is the operator ==")
triple2 = AnalyticTriple.build(parse("z + 0.1*z^2"), parse("z*exp(0.1*z)"), parse("1"))
params2 = CriterionParams(alpha=1.5, c=-1, s=1, m=2.0)
L0 = chain_l(triple2, params2, 0.4 + 0.1j, 0.0)
G = operator_g_alpha(parse("z + 0.1*z^2"), parse("z*exp(0.1*z)"), 1.5, 0.4 + 0.1j)
print(f"  L(z, 0) = {L0:.12f}")
print(f"  G(z)    = {G.value:.12f}   |diff| = {abs(L0 - G.value):.2e}")

print("\n== one full chain state ==")
cp = chain_point(triple2, params2, 0.3 - 0.25j, 0.8)
print(f"  z={cp.z}, t={cp.t}")
print(f"  L={cp.L:.6f}  A={cp.A:.6f}  B={cp.B:.6f}")
print(f"  w={cp.w:.6f} (|w| = {abs(cp.w):.4f} < 1)")
print(f"  p={cp.p:.6f} (Re p = {cp.p.real:.4f} > 0)  a1={cp.a1:.6f}")

print("\n== disk conditions on a (z, t) lattice ==")
rng = np.random.default_rng(1)
samples = [(complex(0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())),
            float(rng.uniform(0, 3))) for _ in range(200)]
rep = verify_chain_conditions(triple2, params2, samples)
print(f"  all satisfied: {rep.satisfied} on {rep.n_samples} samples")
for c in rep.conditions:
    print(f"      {c.name:22s} worst margin {c.margin:+.5f}")

print("\n== subordination spot-check: L(U_0.9, t) inside L(U, s) ==")
def chain(z, t):
    return chain_l(triple2, params2, z, t)
for t, s in ((0.0, 0.5), (0.5, 2.0)):
    print(f"  t={t}, s={s}: contained = {subordination_spot_check(chain, t, s)}")

print("\n== the automorphism chain of the U(k) criterion ==")
L = chain_t6(parse("z + 0.2*z^2"), parse("z"), 1.0, 0.5 + 0.1j, 1.0)
expected = np.exp(1.0) * (0.5 + 0.1j) + 0.2 * (0.5 + 0.1j) ** 2
print(f"  eps-family closed form: {L:.10f} vs {expected:.10f}")
