"""Conserved quantities and the breather Lyapunov functional.

    M[u]     = 1/2 int u^2
    E[u]     = int ( u_x^2/2 - 2 m u^3 - u^4/2 )
    E5[u]    = int ( u_xx^2/2 - 10 m u u_x^2 + 10 m^2 u^4 - 5 u^2 u_x^2 + 6 m u^5 + u^6 )
    H[u]     = E5[u] + 2 (beta^2 - alpha^2) E[u] + (alpha^2 + beta^2)^2 M[u]

``m`` is the effective coefficient ``mu * lam``; with ``lam = 1`` these are the
laws of the original equation, otherwise those of the rescaled one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_field import RealField, derivative_values
from .errors import InvalidArgumentError
from .exact import BreatherParams

__all__ = [
    "GardnerParams",
    "FunctionalReport",
    "mass",
    "energy_mu",
    "energy5_mu",
    "lyapunov",
    "functional_report",
    "criticality_scan",
    "expansion_scan",
]


@dataclass(frozen=True)
class GardnerParams:
    """Equation coefficient ``mu`` and rescaling parameter ``lam`` in (0, 1].

    The bound ``mu * lam <= 1`` belongs to the rescaled problem and is only
    enforced when ``lam < 1``; the unscaled equation (``lam = 1``) accepts
    any ``mu > 0``.
    """

    mu: float
    lam: float = 1.0

    def __post_init__(self):
        if not self.mu > 0:
            raise InvalidArgumentError(f"mu must be > 0, got {self.mu}")
        if not 0 < self.lam <= 1:
            raise InvalidArgumentError(f"lambda must lie in (0, 1], got {self.lam}")
        if self.lam < 1 and self.mu * self.lam > 1:
            raise InvalidArgumentError(f"rescaled problem needs mu*lambda <= 1, got {self.mu * self.lam}")

    @property
    def mu_eff(self) -> float:
        return self.mu * self.lam


def _mu_eff(gp) -> float:
    if isinstance(gp, GardnerParams):
        return gp.mu_eff
    if isinstance(gp, BreatherParams):
        return gp.mu
    return float(gp)


@dataclass(frozen=True)
class FunctionalReport:
    mass: float
    energy: float
    energy5: float
    lyapunov: float | None = None

    def __post_init__(self):
        vals = [self.mass, self.energy, self.energy5]
        if self.lyapunov is not None:
            vals.append(self.lyapunov)
        if not all(np.isfinite(vals)):
            raise InvalidArgumentError("functional values must be finite")


def mass(u: RealField) -> float:
    return 0.5 * float(np.sum(u.values**2)) * u.grid.dx


def energy_mu(u: RealField, gp) -> float:
    """``E`` with spectral ``u_x``; ``gp`` is GardnerParams, BreatherParams or a bare ``m``."""
    m = _mu_eff(gp)
    v = u.values
    vx = derivative_values(v, u.grid, 1)
    return float(np.sum(0.5 * vx**2 - 2 * m * v**3 - 0.5 * v**4)) * u.grid.dx


def energy5_mu(u: RealField, gp) -> float:
    m = _mu_eff(gp)
    v = u.values
    vx = derivative_values(v, u.grid, 1)
    vxx = derivative_values(v, u.grid, 2)
    dens = (0.5 * vxx**2 - 10 * m * v * vx**2 + 10 * m**2 * v**4 - 5 * v**2 * vx**2
            + 6 * m * v**5 + v**6)
    return float(np.sum(dens)) * u.grid.dx


def lyapunov(u: RealField, bp: BreatherParams) -> float:
    a2, b2 = bp.alpha**2, bp.beta**2
    return (energy5_mu(u, bp.mu) + 2 * (b2 - a2) * energy_mu(u, bp.mu)
            + (a2 + b2) ** 2 * mass(u))


def functional_report(u: RealField, gp, bp: BreatherParams | None = None) -> FunctionalReport:
    return FunctionalReport(mass(u), energy_mu(u, gp), energy5_mu(u, gp),
                            None if bp is None else lyapunov(u, bp))


def _loglog_slope(eps, values) -> float:
    eps = np.asarray(eps, dtype=float)
    values = np.abs(np.asarray(values, dtype=float))
    return float(np.polyfit(np.log(eps), np.log(values), 1)[0])


def criticality_scan(bp: BreatherParams, t: float, grid, directions, eps=(1e-2, 5e-3, 2.5e-3, 1.25e-3)):
    """Order at which ``H[B + e z] - H[B]`` vanishes, per direction.

    For a critical point the difference is ``O(e^2)``; the returned slopes of
    ``log|dH|`` against ``log e`` should be close to 2.
    """
    from .exact import breather_eval

    b = breather_eval(bp, t, grid)
    h0 = lyapunov(b, bp)
    slopes = []
    for z in directions:
        diffs = [lyapunov(b + e * z, bp) - h0 for e in eps]
        slopes.append(_loglog_slope(eps, diffs))
    return np.array(slopes)


def expansion_scan(bp: BreatherParams, t: float, grid, z: RealField,
                   eps=(4e-2, 2e-2, 1e-2, 5e-3), operator: str = "hessian"):
    """Remainder of ``H[B + e z] - H[B] - e^2 Q[z] / 2`` for a sequence of ``e``.

    Returns ``(eps, remainders, orders)`` where ``orders`` are the observed
    exponents between consecutive halvings; cubic remainders give orders near 3.
    """
    from .exact import breather_eval
    from .specl import quadratic_form

    b = breather_eval(bp, t, grid)
    h0 = lyapunov(b, bp)
    q = quadratic_form(bp, t, z, operator=operator)
    eps = np.asarray(eps, dtype=float)
    rem = np.array([lyapunov(b + e * z, bp) - h0 - 0.5 * e * e * q for e in eps])
    orders = np.log(np.abs(rem[:-1] / rem[1:])) / np.log(eps[:-1] / eps[1:])
    return eps, rem, orders
