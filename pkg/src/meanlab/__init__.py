"""Numerical laboratory for weighted long Dirichlet polynomials over the von
Mangoldt function, log zeta / S(t), and Montgomery's pair-correlation
statistic, checked against zeros computed in-house."""

__version__ = "0.1.0"
