"""Numerics for the fifth-order Gardner equation: exact solitons and breathers,
conserved functionals, pseudo-spectral time stepping, the breather's
linearized operator and a norm-inflation experiment."""

__version__ = "0.1.0"
