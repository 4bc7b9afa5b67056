"""Exact arithmetic for rank-2 Drinfeld modules with complex multiplication.

Enumeration of reduced CM points over F_q[T], exact valuations and Weil
heights of singular moduli, Hilbert class polynomials from certified
t-expansions, class numbers by three independent routes, and desk-scale
verification of the product (hyperbola) exclusion and singular-unit bounds.
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
