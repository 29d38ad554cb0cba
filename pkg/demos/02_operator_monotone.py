"""Operator monotone functions as mixtures of the bricks t/(s+t).

Run with ``python demos/02_operator_monotone.py``.
"""
import numpy as np

from miq.functions import (
    MonotoneFn, PlainFn, check_matrix_monotone, eval_via_representation, parse_function,
)

# The square root is an integral of bricks against (sin(pi/2)/pi) s^(-1/2) ds.
# Integrating with Gauss-Legendre panels in log s reproduces it to rounding.
sqrt = MonotoneFn("power", 0.5)
t = np.array([1e-3, 0.1, 1.0, 4.0, 1e3])
print("t          ", t)
print("sqrt(t)    ", sqrt(t))
print("quadrature ", eval_via_representation(sqrt, t))
print("measure has", len(sqrt.rep.nodes), "nodes; int dmu/(1+s) =", round(sqrt.rep.growth(), 12))

# Any positive mixture of bricks is again operator monotone.
mix = parse_function("mix:s=0.5,2:c=1,3")
print(mix.name, "at t=1:", mix(1.0))

# Operator monotone means A <= B implies g(A) <= g(B) for matrices, which is
# much stronger than being nondecreasing.  The spot check draws ordered pairs
# and tests the Loewner order of the images.
for g in (MonotoneFn("brick", 1.0), sqrt, mix, PlainFn("min1")):
    r = check_matrix_monotone(g, n=2, trials=300, seed=1)
    print(f"{g.name:22s} violations {r.violations:3d}/300  worst min eig(g(B)-g(A)) {r.worst_margin:+.3e}")

# min{t,1} is nondecreasing and concave, yet it fails for 2x2 matrices.
