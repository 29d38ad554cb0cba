"""Matrix inequalities: Ky Fan majorization, singular-value dominance and
operator monotone functional calculus, checked numerically."""

__version__ = "0.1.0"
