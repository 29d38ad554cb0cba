"""Ando's inequality and the polynomial comparison built on it.

For operator monotone g and PSD A, B every Ky Fan norm satisfies
||g(B) - g(A)|| <= ||g(|B - A|)||.  Run with ``python demos/03_ando.py``.
"""
import numpy as np

from miq import functions as fn
from miq import inequalities as ineq
from miq.generators import random_pair
from miq.ncpoly import parse_poly

np.set_printoptions(precision=4, suppress=True)

a, b = random_pair("wishart", 4, seed=3)
g = fn.MonotoneFn("log1p")

r = ineq.check_ando(g, a, b)
print("Ky Fan sums of g(B) - g(A):", r.lhs)
print("Ky Fan sums of g(|B - A|): ", r.rhs)
print(f"margin {r.margin:.4f} at k={r.worst_k}, holds={r.holds}")

# For a single brick the comparison is entrywise in the singular values.
r = ineq.check_fsll(1.0, a, b)
print("\nbrick s=1, entrywise:", r.lhs, "<=", r.rhs)

# The polynomial version: plug differences g_i(B) - g_i(A) into a
# noncommutative polynomial P and compare with |P| evaluated at g_i(|B - A|).
p = parse_poly("2*x1*x2 - 3*x2*x1 + x1*x1 - 0.5")
gs = [fn.MonotoneFn("power", 0.5), fn.MonotoneFn("brick", 1.0)]
r = ineq.check_main_theorem(p, gs, [], a, b, [])
print(f"\nP = {p}\n|P| = {p.abs()}")
print("Ky Fan sums of P(...): ", r.lhs)
print("Ky Fan sums of |P|(...):", r.rhs)

# Convex functions reverse the direction: h(|D|) f(|D|) ≼ h(|D|)(f(B) - f(A)).
r = ineq.check_convex_theorem(fn.ConvexFn("power", 1.5), fn.PlainFn("min1"), a, b)
print("\nconvex theorem margin", round(r.margin, 6), "holds", r.holds)
