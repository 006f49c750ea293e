"""Determinants of twisted Laplacians on compact hyperbolic orbisurfaces.

Closed-form factors (identity, elliptic, torsion constant), truncated twisted
Selberg zeta functions, trace-formula quadratures used as independent checks,
and length-spectrum tools.
"""
__version__ = "0.1.0"
