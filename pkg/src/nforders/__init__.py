"""Exact arithmetic for orders in imaginary quadratic and biquadratic fields.

Conductors, ideal arithmetic, Picard groups, and solvability/representation
solvers for p = x^2 + n*y^2 over quadratic integer rings, with brute-force
cross-checks at desk scale.  Everything is exact: unbounded integers,
fractions, and integer linear algebra; no floating point in any decision.
"""

__version__ = "0.1.0"
