"""Every criterion as a checkable predicate, with margins and witnesses.

A report never claims a proof: PASS means the inequality held on the
refined polar grid (r up to 0.999), with the worst margin, the witness
point, and the boundary trend recorded.  The independent oracle
(injectivity scan plus argument-principle counts) cross-checks verdicts.
"""

import numpy as np

from schlicht import (
    AnalyticTriple,
    CriterionParams,
    DiskGrid,
    apply_preset,
    check_becker,
    check_main_t2,
    check_qc_t5,
    check_t6,
    injectivity_test,
    preimage_count,
)
from schlicht.dsl import parse

grid = DiskGrid()  # 64 x 128, r_max = 0.999, 3 refinement levels


def show(rep):
    verdict = "certified-on-grid" if rep.satisfied else "FAILS"
    witness = f"{rep.witness:.4f}" if rep.witness is not None else "-"
    print(f"  {rep.criterion_id}: {verdict}, margin {rep.margin:+.4f}, "
          f"witness {witness}")
    for c in rep.conditions:
        print(f"      {c.name:10s} {'<' if c.strict else '<='} {c.rhs:.4f}"
              f"  margin {c.margin:+.5f}")


print("== the main criterion on the identity configuration ==")
triple = AnalyticTriple.build(parse("z"), parse("z"), parse("1"))
params = CriterionParams(alpha=1, c=-1, s=1, m=2.0)
show(check_main_t2(triple, params, grid))

print("\n== a perturbation that still passes ==")
triple = AnalyticTriple.build(parse("z + 0.1*z^2"), parse("z"), parse("1"))
show(check_main_t2(triple, params, grid))

print("\n== the classical second-derivative check, pass and fail ==")
show(check_becker(parse("z + 0.1*z^2"), 2.0, grid))
rep = check_becker(parse("z/(1-z)"), 2.0, grid)
show(rep)
print("      (the failure witness sits on the positive real boundary,",
      f"angle {np.degrees(np.angle(rep.witness)):.3f} deg)")

print("\n== quasiconformal refinement, with its dilatation bound ==")
triple = AnalyticTriple.build(parse("z + 0.05*z^2"), parse("z"), parse("1"))
rep, K = check_qc_t5(triple, CriterionParams(alpha=1, c=-1, s=1, m=2.0, k=0.2), grid)
show(rep)
print(f"      extension dilatation bound K = {K}")

print("\n== membership of z^(1-a) g^(a-1) f' in the disk U(k) ==")
show(check_t6(parse("z + 0.1*z^2"), parse("z"), 1.0, 0.2, grid))

print("\n== parameter presets route to reduced criteria ==")
app = apply_preset("becker", parse("z + 0.1*z^2"), params=params)
print(f"  preset 'becker' routes to: {app.check_id}, h = {app.h}")

print("\n== the oracle on the failing function ==")
koebe_like = parse("z/(1-z)")
inj = injectivity_test(koebe_like, DiskGrid(n_radial=80, n_angular=80))
counts = [preimage_count(koebe_like, w0, r=0.9) for w0 in (0.2, -0.3 + 0.1j, 0.4j)]
print(f"  z/(1-z): injective on grid = {inj.injective_on_grid}, "
      f"preimage counts {counts}")
print("  (univalent, yet the criterion fails: the conditions are sufficient,")
print("   not necessary; this is the canonical witness for that gap)")
