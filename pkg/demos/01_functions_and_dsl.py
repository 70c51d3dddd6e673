"""Tour of the function DSL and the expression kernel.

Functions are written in a tiny ASCII language (variable z, complex
literals like 0.5 or 2i, operators + - * / ^, exp, log, and the presets
koebe, moebius(a), polynomial(c1,...,cn)).  Parsing yields an immutable
expression tree with exact symbolic derivatives and principal-branch
evaluation.
"""

import numpy as np

from schlicht import differentiate, eval_expr, log_derivative_at, principal_power
from schlicht.dsl import parse, print_expr, validate_normalized

print("== parsing and printing ==")
for src in ("z/(1-z)", "z + 0.1*z^2", "koebe", "moebius(0.5)", "exp(0.2*z)"):
    e = parse(src)
    print(f"  {src:18s} ->  {print_expr(e)}")

print("\n== evaluation (principal branches) ==")
e = parse("z^2 + z")
print("  (z^2+z)(1+i)      =", eval_expr(e, 1 + 1j))
print("  (-1)^0.5          =", principal_power(-1, 0.5))
print("  4^0.5             =", principal_power(4, 0.5))

print("\n== symbolic derivatives ==")
f = parse("z/(1-z)")
fp = differentiate(f)
print("  d/dz z/(1-z)      =", print_expr(fp))
print("  value at 0.5      =", eval_expr(fp, 0.5 + 0j), " (hand: 1/(1-z)^2 = 4)")

print("\n== the log-derivative z f'/f ==")
print("  g = z:            ", log_derivative_at(parse("z"), 0.3 + 0.4j))
print("  g = z/(1-z) @ 0.5:", log_derivative_at(f, 0.5), " (hand: 1/(1-z) = 2)")
print("  removable limit at 0:", log_derivative_at(parse("koebe"), 0j))

print("\n== normalization checks ==")
for src in ("z", "z^2", "1 + z", "koebe"):
    ok, problems = validate_normalized(parse(src))
    print(f"  {src:8s} normalized: {ok}  {problems if problems else ''}")

print("\n== vectorized evaluation ==")
zs = 0.5 * np.exp(2j * np.pi * np.linspace(0, 1, 5, endpoint=False))
print("  koebe on 5 points:", np.round(eval_expr(parse("koebe"), zs), 4))
