"""Search for PSD pairs that violate ``||f(B) - f(A)|| <= ||f(|B - A|)||``.

The objective is the violation ``||f(B) - f(A)|| - ||f(|B - A|)||`` in the
operator norm (Ky Fan ``k = 1``) or the trace norm (``k = n``).  Half of the
budget goes to random pairs; the rest to coordinate hill climbing from the
best one: each round perturbs every real and imaginary entry of ``A`` and
``B`` by ``±step`` (keeping the matrix Hermitian), projects back to the PSD
cone by clamping eigenvalues, and keeps any improvement.  A round without
improvement halves the step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from miq import generators
from miq.functions import parse_function
from miq.inequalities import CheckResult, check_ando
from miq.linalg import eig_hermitian, from_json, to_json

CLIMB_ROUNDS = 200
INITIAL_STEP = 0.25
WITNESS_SCHEMA = "miq.witness/1"


@dataclass
class SearchResult:
    function: str
    norm: str
    n: int
    seed: int
    budget: int
    evaluations: int
    violation: float
    a: np.ndarray
    b: np.ndarray
    check: CheckResult

    @property
    def found(self) -> bool:
        """A violation beyond the comparison tolerance was found."""
        return not self.check.holds

    def witness(self) -> dict:
        return {
            "schema": WITNESS_SCHEMA,
            "statement": "ando",
            "function": self.function,
            "norm": self.norm,
            "margin": self.check.margin,
            "violation": self.violation,
            "search": {"seed": self.seed, "budget": self.budget, "evaluations": self.evaluations},
            "A": to_json(self.a),
            "B": to_json(self.b),
        }


def violation(f, a, b, norm: str) -> tuple[float, CheckResult]:
    """``(lhs - rhs, check)`` for one Ky Fan norm; positive means a violation."""
    r = check_ando(f, a, b, norm=norm)
    return -r.margin, r


def project_psd(m: np.ndarray) -> np.ndarray:
    e = eig_hermitian((m + m.conj().T) / 2)
    w = np.maximum(e.eigenvalues, 0.0)
    out = (e.vectors * w) @ e.vectors.conj().T
    return (out + out.conj().T) / 2


def _coordinates(n):
    for which in (0, 1):
        for i in range(n):
            for j in range(i, n):
                yield which, i, j, 1.0
                if i != j:
                    yield which, i, j, 1j


def _random_candidate(rng, n, index):
    kind = generators.PAIR_KINDS[index % len(generators.PAIR_KINDS)]
    scale = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0))))
    a, b = generators.random_pair(kind, n, delta=float(rng.uniform(0, 2)), seed=int(rng.integers(2**62)),
                                  spectrum=(0.0, 3.0))
    return project_psd(scale * a), project_psd(scale * b)


def search_counterexample(f, norm: str = "op", budget: int = 100_000, seed: int = 0, n: int = 2,
                          rounds: int = CLIMB_ROUNDS) -> SearchResult:
    """Maximize the violation of the norm inequality for ``f`` over PSD pairs.

    ``budget`` caps the number of objective evaluations.  Not finding a
    violation is a valid outcome: the result then has ``found == False`` and
    ``violation <= tol``.
    """
    if norm not in ("op", "trace"):
        raise ValueError("norm must be 'op' or 'trace'")
    if budget < 1:
        raise ValueError("budget must be positive")
    if isinstance(f, str):
        f = parse_function(f)
    rng = generators.rng_for(generators.derive_seed(seed, "cx_search", n, norm))
    evals = 0
    best = None
    random_budget = max(1, budget // 2)
    for i in range(random_budget):
        a, b = _random_candidate(rng, n, i)
        v, r = violation(f, a, b, norm)
        evals += 1
        if best is None or v > best[0]:
            best = (v, a, b, r)

    v_best, a, b, r_best = best
    step = INITIAL_STEP
    coords = list(_coordinates(n))
    for _ in range(rounds):
        improved = False
        for which, i, j, unit in coords:
            for sign in (1.0, -1.0):
                if evals >= budget:
                    break
                m = (a if which == 0 else b).copy()
                m[i, j] += sign * step * unit
                if i != j:
                    m[j, i] = np.conj(m[i, j])
                m = project_psd(m)
                cand = (m, b) if which == 0 else (a, m)
                v, r = violation(f, *cand, norm)
                evals += 1
                if v > v_best:
                    v_best, r_best = v, r
                    a, b = cand
                    improved = True
        if evals >= budget:
            break
        if not improved:
            step /= 2
    return SearchResult(f.name, norm, n, seed, budget, evals, v_best, a, b, r_best)


def load_witness(path) -> dict:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed witness file: {exc}") from None
    if not isinstance(data, dict) or "A" not in data or "B" not in data:
        raise ValueError("witness file needs 'A' and 'B' matrix records")
    data["A"] = from_json(data["A"])
    data["B"] = from_json(data["B"])
    if data["A"].shape != data["B"].shape:
        raise ValueError("witness matrices differ in size")
    return data


def save_witness(result: SearchResult, path) -> None:
    with open(path, "w") as fh:
        json.dump(result.witness(), fh, indent=1)
