"""Catalogues of scalar functions and their integral representations.

Three roles:

* :class:`MonotoneFn` -- operator monotone on ``[0, inf)``: the bricks
  ``f_s(t) = t/(s+t)`` (``f_0(t) = t``), powers ``t^p`` with ``0 < p <= 1``,
  ``log(1+t)``, nonnegative mixtures of bricks, each with an optional
  constant offset ``g(0) >= 0``.  Representation ``g(t) = offset +
  int f_s(t) dmu(s)``.
* :class:`ConvexFn` -- nonnegative operator convex with ``f(0) = 0``:
  ``beta t + gamma t^2 + int t f_s(t) dmu(s)``.
* :class:`PlainFn` -- merely nondecreasing on ``[0, inf)`` (``min{t,1}``,
  powers, steps), optionally extended to the real line as an odd or even
  function.

Matrix evaluation always uses the closed form; representations exist to
cross-check it.

Function spec strings, used by the command line::

    spec   := name (":" item)*
    item   := key "=" number | "odd" | "even"

    brick:s=2        power:p=0.5       log1p        identity
    power:p=0.5:offset=1               mix:s=0.5,2:c=1,3
    square           linear:beta=2     power:p=1.5  t2frac:s=1
    min1             power:q=3:odd     step:c=0.5   abs:even
    constant:c=2

``p`` parameters with ``p > 1`` and the names ``square``, ``linear`` and
``t2frac`` select the convex catalogue; ``q`` parameters, parity tags and the
names ``min1``, ``step`` and ``abs`` select the plain one; everything else is
read as operator monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from miq import generators
from miq.linalg import DomainError, apply_fn, eig_hermitian, singular_values
from miq.orders import loewner_leq

NONNEG = (0.0, math.inf)
REAL_LINE = (-math.inf, math.inf)

QUAD_PANEL_WIDTH = 2.0
QUAD_PANEL_ORDER = 10
TAIL_DECAY = 40.0


@lru_cache(maxsize=None)
def _panel_rule(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(QUAD_PANEL_ORDER)
    panels = max(1, math.ceil((hi - lo) / QUAD_PANEL_WIDTH))
    edges = np.linspace(lo, hi, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x).ravel()
    weights = (half[:, None] * w).ravel()
    return nodes, weights


@dataclass(frozen=True, eq=False)
class IntegralRep:
    """Discrete positive measure: quadrature pairs plus exact point masses."""

    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0))
    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if np.any(self.weights <= 0) or np.any(~np.isfinite(self.nodes)) or np.any(self.nodes < 0):
            raise ValueError("representation needs finite nodes s >= 0 and positive weights")
        if any(s < 0 or m <= 0 for s, m in self.atoms):
            raise ValueError("atoms need s >= 0 and positive mass")

    def growth(self) -> float:
        """``int dmu(s) / (1 + s)``; finite for every valid representation."""
        total = float(np.sum(self.weights / (1.0 + self.nodes)))
        return total + sum(m / (1.0 + s) for s, m in self.atoms)

    def brick_sum(self, t, times_t: bool = False):
        """``int f_s(t) dmu(s)``, or ``int t f_s(t) dmu(s)`` with ``times_t``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        if len(self.nodes):
            out = out + np.sum(self.weights * brick(t[..., None], self.nodes), axis=-1)
        for s, m in self.atoms:
            out = out + m * brick(t, s)
        return t * out if times_t else out


def brick(t, s):
    """``f_s(t) = t / (s + t)``, with ``f_0(t) = t``."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = np.where(s == 0, t, t / np.where(s + t == 0, 1.0, s + t))
    return val


def power_measure(p: float) -> IntegralRep:
    """``t^p = (sin(p pi)/pi) int f_s(t) s^(p-1) ds`` for ``0 < p < 1``.

    With ``s = e^u`` the density becomes ``(sin(p pi)/pi) e^(p u) du``.  The
    integrand decays like ``e^(p u)`` on the left and ``e^((p-1) u)`` on the
    right; the range is cut where both tails fall below ``e^-40`` for
    ``t <= 1e3``, and covered by 10-point Gauss-Legendre panels of width 2.
    """
    if not 0 < p < 1:
        raise ValueError("power measure needs 0 < p < 1")
    lo = -TAIL_DECAY / p
    hi = 7.0 + TAIL_DECAY / (1 - p)
    u, w = _panel_rule(lo, hi)
    return IntegralRep(np.exp(u), w * math.sin(p * math.pi) / math.pi * np.exp(p * u))


def log1p_measure() -> IntegralRep:
    """``log(1+t) = int_1^inf f_s(t) ds/s``, i.e. ``du`` on ``u = log s >= 0``."""
    u, w = _panel_rule(0.0, 7.0 + TAIL_DECAY)
    return IntegralRep(np.exp(u), w)


def _check_domain(t, domain):
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < domain[0]) or np.any(arr > domain[1]):
        raise DomainError(f"argument outside domain {domain}")
    return arr


def _fmt(x: float) -> str:
    return repr(float(x)).rstrip("0").rstrip(".") if "e" not in repr(float(x)) else repr(float(x))


class _ScalarFn:
    domain = NONNEG
    role = ""

    def __call__(self, t):
        arr = _check_domain(t, self.domain)
        out = self._closed(arr)
        return float(out) if np.ndim(out) == 0 else out

    def matrix(self, a):
        return apply_fn(self._closed, a, self.domain)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BrickFn(_ScalarFn):
    s: float

    role = "monotone"

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("brick parameter s must be nonnegative")

    @property
    def name(self):
        return f"brick:s={_fmt(self.s)}"

    def _closed(self, t):
        return brick(t, self.s)

    def as_monotone(self) -> "MonotoneFn":
        return MonotoneFn("brick", self.s)


@dataclass(frozen=True)
class MonotoneFn(_ScalarFn):
    """Operator monotone ``g`` on ``[0, inf)`` with ``g(0) = offset >= 0``.

    ``kind`` is ``brick`` (``param = s``), ``power`` (``param = p``,
    ``0 < p <= 1``), ``log1p``, or ``mix`` (``mix`` holds ``(s, c)`` pairs
    with ``c > 0``, value ``sum c f_s(t)``).
    """

    kind: str
    param: float | None = None
    offset: float = 0.0
    mix: tuple[tuple[float, float], ...] = ()

    role = "monotone"

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("offset g(0) must be nonnegative")
        if self.kind == "brick":
            if self.param is None or self.param < 0:
                raise ValueError("brick needs s >= 0")
        elif self.kind == "power":
            if self.param is None or not 0 < self.param <= 1:
                raise ValueError("monotone power needs 0 < p <= 1")
        elif self.kind == "mix":
            if any(s < 0 or c <= 0 for s, c in self.mix):
                raise ValueError("mix needs (s >= 0, c > 0) pairs")
        elif self.kind != "log1p":
            raise ValueError(f"unknown monotone kind {self.kind!r}")

    @property
    def name(self):
        if self.kind == "brick":
            base = "identity" if self.param == 0 else f"brick:s={_fmt(self.param)}"
        elif self.kind == "power":
            base = f"power:p={_fmt(self.param)}"
        elif self.kind == "mix":
            base = "mix:s=" + ",".join(_fmt(s) for s, _ in self.mix) + ":c=" + ",".join(_fmt(c) for _, c in self.mix)
            if not self.mix:
                return f"constant:c={_fmt(self.offset)}"
        else:
            base = "log1p"
        return base + (f":offset={_fmt(self.offset)}" if self.offset else "")

    def _closed(self, t):
        if self.kind == "brick":
            val = brick(t, self.param)
        elif self.kind == "power":
            val = t if self.param == 1 else np.power(t, self.param)
        elif self.kind == "log1p":
            val = np.log1p(t)
        else:
            val = np.zeros_like(t)
            for s, c in self.mix:
                val = val + c * brick(t, s)
        return val + self.offset if self.offset else val

    @property
    def rep(self) -> IntegralRep:
        if self.kind == "brick":
            return IntegralRep(atoms=((float(self.param), 1.0),))
        if self.kind == "power":
            if self.param == 1:
                return IntegralRep(atoms=((0.0, 1.0),))
            return power_measure(self.param)
        if self.kind == "log1p":
            return log1p_measure()
        return IntegralRep(atoms=tuple((float(s), float(c)) for s, c in self.mix))

    def centered(self) -> "MonotoneFn":
        """``g - g(0)``: the same function with offset 0."""
        return replace(self, offset=0.0)


@dataclass(frozen=True)
class ConvexFn(_ScalarFn):
    """Nonnegative operator convex ``f`` with ``f(0) = 0``.

    ``kind``: ``linear`` (``beta t``), ``square`` (``gamma t^2``), ``power``
    (``t^p``, ``1 < p <= 2``) or ``t2frac`` (``t^2/(s+t)``, ``param = s > 0``).
    """

    kind: str
    param: float | None = None
    beta: float = 0.0
    gamma: float = 0.0

    role = "convex"

    def __post_init__(self):
        if self.beta < 0 or self.gamma < 0:
            raise ValueError("beta and gamma must be nonnegative")
        if self.kind == "linear" and self.beta == 0:
            object.__setattr__(self, "beta", 1.0)
        elif self.kind == "square" and self.gamma == 0:
            object.__setattr__(self, "gamma", 1.0)
        elif self.kind == "power":
            if self.param is None or not 1 < self.param <= 2:
                raise ValueError("convex power needs 1 < p <= 2")
        elif self.kind == "t2frac":
            if self.param is None:
                object.__setattr__(self, "param", 1.0)
            if self.param <= 0:
                raise ValueError("t2frac needs s > 0")
        elif self.kind not in ("linear", "square"):
            raise ValueError(f"unknown convex kind {self.kind!r}")

    @property
    def name(self):
        if self.kind == "linear":
            base = "linear" if self.beta == 1 else f"linear:beta={_fmt(self.beta)}"
        elif self.kind == "square":
            base = "square" if self.gamma == 1 else f"square:gamma={_fmt(self.gamma)}"
        elif self.kind == "power":
            base = f"power:p={_fmt(self.param)}"
        else:
            base = "t2frac" if self.param == 1 else f"t2frac:s={_fmt(self.param)}"
        return base

    def _measure_part(self, t):
        if self.kind == "power":
            return np.power(t, self.param)
        if self.kind == "t2frac":
            return t * t / (self.param + t)
        return np.zeros_like(t)

    def _closed(self, t):
        out = self._measure_part(t)
        if self.beta:
            out = out + self.beta * t
        if self.gamma:
            out = out + self.gamma * t * t
        return out

    @property
    def rep(self) -> IntegralRep:
        """Measure of ``int t f_s(t) dmu(s)``; ``beta``/``gamma`` are separate."""
        if self.kind == "power":
            if self.param == 2:
                return IntegralRep()
            return power_measure(self.param - 1)
        if self.kind == "t2frac":
            return IntegralRep(atoms=((float(self.param), 1.0),))
        return IntegralRep()

    @property
    def effective_gamma(self) -> float:
        return self.gamma + (1.0 if self.kind == "power" and self.param == 2 else 0.0)

    def quotient(self) -> MonotoneFn:
        """``g(t) = f(t)/t``, operator monotone on ``(0, inf)``."""
        if self.kind == "power" and self.param < 2:
            if self.gamma:
                raise ValueError("quotient of t^p + gamma t^2 is not catalogued")
            return MonotoneFn("power", self.param - 1, offset=self.beta)
        parts = []
        if self.effective_gamma:
            parts.append((0.0, self.effective_gamma))
        if self.kind == "t2frac":
            parts.append((float(self.param), 1.0))
        if len(parts) == 1 and parts[0][1] == 1.0:
            return MonotoneFn("brick", parts[0][0], offset=self.beta)
        return MonotoneFn("mix", offset=self.beta, mix=tuple(parts))


@dataclass(frozen=True)
class PlainFn(_ScalarFn):
    """Nondecreasing ``h`` on ``[0, inf)`` with ``h(0) >= 0``.

    ``kind``: ``min1`` (``min{t,1}``), ``power`` (``t^q``, ``q > 0``),
    ``step`` (``1`` for ``t > c``, else ``0``), ``abs`` (``t``; its natural
    extension is even) or ``identity``.  ``parity`` ``odd``/``even`` extends
    ``h`` to the real line as ``sign(t) h(|t|)`` / ``h(|t|)``.
    """

    kind: str
    param: float | None = None
    parity: str = "none"

    role = "plain"

    def __post_init__(self):
        if self.parity not in ("none", "odd", "even"):
            raise ValueError(f"unknown parity {self.parity!r}")
        if self.kind == "power":
            if self.param is None or self.param <= 0:
                raise ValueError("plain power needs q > 0")
        elif self.kind == "step":
            if self.param is None:
                object.__setattr__(self, "param", 0.0)
            if self.param < 0:
                raise ValueError("step threshold must be nonnegative")
        elif self.kind not in ("min1", "abs", "identity"):
            raise ValueError(f"unknown plain kind {self.kind!r}")

    @property
    def domain(self):
        return NONNEG if self.parity == "none" else REAL_LINE

    @property
    def name(self):
        if self.kind == "power":
            base = f"power:q={_fmt(self.param)}"
        elif self.kind == "step":
            base = "step" if self.param == 0 else f"step:c={_fmt(self.param)}"
        else:
            base = self.kind
        return base + (f":{self.parity}" if self.parity != "none" else "")

    def _half(self, t):
        if self.kind == "min1":
            return np.minimum(t, 1.0)
        if self.kind == "power":
            return np.power(t, self.param)
        if self.kind == "step":
            return np.where(t > self.param, 1.0, 0.0)
        return t

    def _closed(self, t):
        if self.parity == "none":
            return self._half(t)
        h = self._half(np.abs(t))
        return np.sign(t) * h if self.parity == "odd" else h

    def on_halfline(self) -> "PlainFn":
        return replace(self, parity="none")

    @property
    def vanishes_at_zero(self) -> bool:
        return float(self._half(np.zeros(1))[0]) == 0.0


@dataclass(frozen=True)
class Combined(_ScalarFn):
    """Pointwise sum or product of catalogue functions on ``[0, inf)``."""

    op: str
    parts: tuple

    role = "plain"

    @property
    def name(self):
        sep = " + " if self.op == "sum" else " * "
        return "(" + sep.join(str(p) for p in self.parts) + ")"

    def _closed(self, t):
        vals = [p._closed(t) for p in self.parts]
        out = vals[0]
        for v in vals[1:]:
            out = out + v if self.op == "sum" else out * v
        return out


def fn_sum(*fs) -> Combined:
    return Combined("sum", tuple(fs))


def fn_product(*fs) -> Combined:
    return Combined("product", tuple(fs))


def eval_scalar(f, t):
    """Closed-form value of a catalogue function; raises on domain violation."""
    return f(t)


def eval_via_representation(f, t):
    """Evaluate through the integral representation.

    Monotone: ``offset + int f_s(t) dmu(s)``; convex: ``beta t + gamma t^2 +
    int t f_s(t) dmu(s)``.
    """
    rep = getattr(f, "rep", None)
    if rep is None:
        raise ValueError(f"{f} has no integral representation")
    t = _check_domain(t, NONNEG)
    if isinstance(f, ConvexFn):
        out = f.beta * t + f.effective_gamma * t * t + rep.brick_sum(t, times_t=True)
    else:
        out = f.offset + rep.brick_sum(t)
    return float(out) if np.ndim(out) == 0 else out


def eval_matrix(f, a):
    """``f(A)`` through the functional calculus with the closed-form scalar."""
    return f.matrix(a)


@dataclass(frozen=True)
class SpotCheck:
    trials: int
    violations: int
    worst_margin: float
    witness: tuple | None = None


def check_matrix_monotone(g, n: int, trials: int, seed: int) -> SpotCheck:
    """Count pairs ``0 <= A <= B`` with ``g(A) <= g(B)`` failing.

    Pairs are ``B = A + delta P`` with ``A`` spectral on ``[0, 2.5]`` (so the
    spectrum straddles 1) and ``delta`` uniform on ``[0.05, 1.5]``.
    """
    if n > 16:
        raise ValueError("desk-scale spot check: n <= 16")
    return _loewner_spot_check(g, n, trials, seed, shift=0.0)


def monotone_quotient_check(f: ConvexFn, trials: int, seed: int, n: int = 4) -> SpotCheck:
    """Spot-check that ``f(t)/t`` is matrix monotone on strictly positive pairs."""
    return _loewner_spot_check(f.quotient(), n, trials, seed, shift=1e-3)


def _loewner_spot_check(g, n, trials, seed, shift):
    violations = 0
    worst = math.inf
    witness = None
    for i in range(trials):
        rng = generators.rng_for(generators.derive_seed(seed, "monotone", i))
        a = generators.random_psd(generators.EnsembleSpec("spectral", n, int(rng.integers(2**62)), spectrum=(0.0, 2.5)))
        p = generators.random_psd(generators.EnsembleSpec("wishart", n, int(rng.integers(2**62))))
        delta = rng.uniform(0.05, 1.5)
        a = a + shift * np.eye(n)
        b = a + delta * p / singular_values(p)[0]
        b = (b + b.conj().T) / 2
        ga, gb = g.matrix(a), g.matrix(b)
        diff = eig_hermitian(gb - ga).eigenvalues[-1]
        worst = min(worst, float(diff))
        if not loewner_leq(ga, gb):
            violations += 1
            if witness is None:
                witness = (a, b)
    return SpotCheck(trials, violations, worst, witness)


MONOTONE_CATALOGUE = (
    MonotoneFn("brick", 0.0),
    MonotoneFn("brick", 0.1),
    MonotoneFn("brick", 1.0),
    MonotoneFn("brick", 10.0),
    MonotoneFn("power", 0.25),
    MonotoneFn("power", 0.5),
    MonotoneFn("power", 0.75),
    MonotoneFn("log1p"),
    MonotoneFn("power", 0.5, offset=1.0),
)

CONVEX_CATALOGUE = (
    ConvexFn("linear"),
    ConvexFn("square"),
    ConvexFn("power", 1.5),
    ConvexFn("power", 1.25),
    ConvexFn("t2frac", 1.0),
)

PLAIN_CATALOGUE = (
    PlainFn("identity"),
    PlainFn("min1"),
    PlainFn("power", 0.5),
    PlainFn("power", 3.0),
    PlainFn("step", 0.5),
)

ODD_CATALOGUE = (
    PlainFn("identity", parity="odd"),
    PlainFn("power", 3.0, parity="odd"),
    PlainFn("power", 0.5, parity="odd"),
    PlainFn("step", 0.0, parity="odd"),
)

EVEN_CATALOGUE = (
    PlainFn("abs", parity="even"),
    PlainFn("power", 2.0, parity="even"),
    PlainFn("min1", parity="even"),
)


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"bad number {text!r} in function spec") from None


def parse_function(text: str, role: str | None = None):
    """Parse a function spec string (grammar in the module docstring).

    ``role`` (``monotone``, ``convex`` or ``plain``) disambiguates names that
    exist in several catalogues, such as ``identity`` or ``power:p=1``.
    """
    parts = [p.strip() for p in text.strip().split(":") if p.strip()]
    if not parts:
        raise ValueError("empty function spec")
    name, rest = parts[0], parts[1:]
    kv: dict[str, str] = {}
    parity = "none"
    for item in rest:
        if item in ("odd", "even"):
            parity = item
        elif "=" in item:
            k, v = item.split("=", 1)
            kv[k.strip()] = v.strip()
        else:
            raise ValueError(f"bad item {item!r} in function spec {text!r}")

    def take(key, default=None):
        return _number(kv.pop(key)) if key in kv else default

    if parity != "none" or name in ("min1", "step", "abs") or (name == "power" and "q" in kv):
        role = "plain"
    if name in ("square", "linear", "t2frac") or (name == "power" and "p" in kv and float(kv["p"]) > 1):
        role = role or "convex"
    role = role or "monotone"

    if role == "monotone":
        offset = take("offset", 0.0)
        if name == "brick":
            out = MonotoneFn("brick", take("s", 0.0), offset)
        elif name == "identity":
            out = MonotoneFn("brick", 0.0, offset)
        elif name == "power":
            out = MonotoneFn("power", take("p"), offset)
        elif name == "log1p":
            out = MonotoneFn("log1p", offset=offset)
        elif name == "constant":
            out = MonotoneFn("mix", offset=take("c", 0.0) + offset)
        elif name == "mix":
            ss = [_number(x) for x in kv.pop("s", "").split(",") if x]
            cs = [_number(x) for x in kv.pop("c", "").split(",") if x]
            if len(ss) != len(cs):
                raise ValueError("mix needs as many coefficients as nodes")
            out = MonotoneFn("mix", offset=offset, mix=tuple(zip(ss, cs)))
        else:
            raise ValueError(f"unknown monotone function {name!r}")
    elif role == "convex":
        if name == "linear" or name == "identity":
            out = ConvexFn("linear", beta=take("beta", 1.0))
        elif name == "square":
            out = ConvexFn("square", gamma=take("gamma", 1.0))
        elif name == "power":
            p = take("p")
            out = ConvexFn("square") if p == 2 else ConvexFn("power", p)
        elif name == "t2frac":
            out = ConvexFn("t2frac", take("s", 1.0))
        else:
            raise ValueError(f"unknown convex function {name!r}")
    elif role == "plain":
        if name == "power":
            out = PlainFn("power", take("q", take("p")), parity)
        elif name == "step":
            out = PlainFn("step", take("c", 0.0), parity)
        elif name in ("min1", "abs", "identity"):
            out = PlainFn(name, parity=parity)
        else:
            raise ValueError(f"unknown plain function {name!r}")
    else:
        raise ValueError(f"unknown role {role!r}")
    if kv:
        raise ValueError(f"unused parameters {sorted(kv)} in function spec {text!r}")
    return out


def catalogue_summary() -> list[dict]:
    rows = []
    for role, fns in (("monotone", MONOTONE_CATALOGUE), ("convex", CONVEX_CATALOGUE),
                      ("plain", PLAIN_CATALOGUE), ("odd", ODD_CATALOGUE), ("even", EVEN_CATALOGUE)):
        for f in fns:
            rep = getattr(f, "rep", None)
            rows.append({"role": role, "name": f.name,
                         "growth": None if rep is None else rep.growth()})
    return rows
