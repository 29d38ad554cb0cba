"""Three ways to compare two matrices.

Run with ``python demos/01_orders.py``.
"""
import numpy as np

from miq.linalg import direct_sum, singular_values
from miq.orders import dominated, ky_fan_norm, loewner_leq, weakly_majorized

np.set_printoptions(precision=4, suppress=True)

# Two diagonal matrices with the same trace.  Their Ky Fan sums are
# (1, 2) and (2, 2), so diag(1,1) is weakly majorized by diag(2,0) ...
a = np.diag([1.0, 1.0])
b = np.diag([2.0, 0.0])
print("s(A) =", singular_values(a), " s(B) =", singular_values(b))
print("A ≼ B:", weakly_majorized(a, b))

# ... but not dominated by it: the second singular value of A is 1 > 0.
print("A ≪ B:", dominated(a, b))

# Dominance allows a larger right-hand side.  Padding B with another block
# can only help, since s(B ⊕ C) is the merged list of both profiles.
c = np.diag([1.0])
print("A ≪ B ⊕ C:", dominated(a, direct_sum(b, c)).holds)

# The Loewner order is the strongest of the three.  A ≤ A + P for any PSD P,
# and then A ≪ A + P as well (Weyl monotonicity).
rng = np.random.default_rng(0)
g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
p = g @ g.conj().T / 4
x = np.diag([3.0, 2.0, 1.0, 0.0])
print("X ≤ X + P:", loewner_leq(x, x + p), "  X ≪ X + P:", dominated(x, x + p).holds)

# Ky Fan norms interpolate between the operator norm (k=1) and the trace norm (k=n).
print("Ky Fan norms of X + P:", [round(ky_fan_norm(x + p, k), 4) for k in range(1, 5)])
