"""min{t,1} breaks Ando's inequality already for 2x2 matrices.

The search spends half its budget on random PSD pairs and the rest on
coordinate hill climbing from the best one.  Run with
``python demos/04_min1_counterexample.py [budget]``.
"""
import json
import sys
import tempfile
from pathlib import Path

import numpy as np

from miq.search import load_witness, save_witness, search_counterexample
from miq.suite import replay_witness

np.set_printoptions(precision=5, suppress=True)
budget = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000

res = search_counterexample("min1", "op", budget=budget, seed=1)
print(f"after {res.evaluations} evaluations: ||f(B) - f(A)|| - ||f(|B - A|)|| = {res.violation:.5f}")
print("A =\n", res.a)
print("B =\n", res.b)
print("spectra:", np.linalg.eigvalsh(res.a), np.linalg.eigvalsh(res.b))

# The same search against the operator monotone brick t/(1+t) finds nothing.
check = search_counterexample("brick:s=1", "op", budget=budget // 4, seed=1)
print(f"brick s=1, best lhs - rhs after {check.evaluations} evaluations: {check.violation:.2e}")

# Witnesses are plain JSON and replay to the same floating point margin.
path = Path(tempfile.mkdtemp()) / "min1_op.json"
save_witness(res, path)
print("\nwitness keys:", sorted(json.loads(path.read_text())))
again = replay_witness(load_witness(path))
print("replayed margin equals stored margin:", again.margin == res.check.margin)
