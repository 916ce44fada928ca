"""Right-hand sides and exponential time stepping for the fifth-order Gardner
equation and its rescaled form.

With ``m = mu * lam`` both equations read ``w_t = -(w_5x + 10 m^2 w_3x) - N(w)``.
The nonlinearity is assembled in conservative form,

    N(w) = d/dx [ 10 (m + w) w_x^2 + (20 m w + 10 w^2) w_xx
                  + 6 ((m + w)^5 - m^5 - 5 m^4 w) ],

whose expansion is exactly the ten nonlinear terms of the equation.  All
products are formed on a 3x zero-padded grid, so the flux is alias free.

The state of the integrators is the ``rfft`` of the samples.  The linear
symbol is ``l(k) = -i k^5 + 10 i m^2 k^3`` (Nyquist set to zero).
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any

import numpy as np
import scipy.fft as sfft

from .core_field import (
    PAD_RATIO,
    Grid,
    RealField,
    check_decay,
    pad_spectrum,
    read_field_csv,
    sobolev_norm_values,
    truncate_spectrum,
)
from .errors import BlowUpError, InvalidArgumentError
from .exact import BreatherParams, SolitonParams, breather_eval, soliton_eval
from .functionals import GardnerParams, energy5_mu, energy_mu, mass

__all__ = [
    "SimConfig",
    "DiagnosticsRow",
    "RunResult",
    "rhs_original",
    "rhs_general",
    "nonlinear_terms",
    "linear_symbol",
    "step",
    "run",
    "track_peak",
    "scaling_residual",
    "convergence_study",
    "write_diagnostics_csv",
    "run_summary",
    "EQUATIONS",
    "SCHEMES",
]

EQUATIONS = ("original", "general")
SCHEMES = ("etdrk4", "ifrk4", "hybrid")
CONTOUR_POINTS = 32


# ---------------------------------------------------------------------------
# right-hand sides


def _nonlinear_hat(c: np.ndarray, grid: Grid, m: float, ablate: bool = False) -> np.ndarray:
    """rfft of ``N(w)`` given the rfft ``c`` of ``w``."""
    n = grid.n
    big = PAD_RATIO * n
    w = sfft.irfft(pad_spectrum(c, n, big), n=big)
    wx = sfft.irfft(pad_spectrum(grid.symbol(1) * c, n, big), n=big)
    wxx = sfft.irfft(pad_spectrum(grid.symbol(2) * c, n, big), n=big)
    # overflow is reported by the callers' finiteness checks, not as a warning
    with np.errstate(over="ignore", invalid="ignore"):
        mw = m + w
        flux = 10 * mw * wx * wx + (20 * m * w + 10 * w * w) * wxx
        # (m+w)^5 - m^5 - 5 m^4 w without cancellation for small w
        flux += 6 * w * w * (10 * m**3 + w * (10 * m * m + w * (5 * m + w)))
        if ablate:
            # drop 20 m w w_3x = d/dx (20 m w w_xx - 10 m w_x^2)
            flux -= 20 * m * w * wxx - 10 * m * wx * wx
    return grid.symbol(1) * truncate_spectrum(sfft.rfft(flux), n, big)


def _m_original(gp: GardnerParams) -> float:
    return gp.mu


def rhs_original(u: RealField, gp: GardnerParams, *, include_linear: bool = True) -> RealField:
    """``u_t`` for the unscaled equation (``lam`` ignored, i.e. forced to 1)."""
    return _rhs(u, _m_original(gp), include_linear)


def rhs_general(w: RealField, gp: GardnerParams, *, include_linear: bool = True,
                ablate: bool = False) -> RealField:
    """``w_t`` for the rescaled equation with coefficient ``m = mu * lam``.

    ``ablate`` removes the quadratic high-low term ``20 m w w_3x``.
    """
    return _rhs(w, gp.mu_eff, include_linear, ablate)


def _rhs(u: RealField, m: float, include_linear: bool, ablate: bool = False) -> RealField:
    grid = u.grid
    c = sfft.rfft(u.values)
    out = -_nonlinear_hat(c, grid, m, ablate)
    if include_linear:
        out = out + linear_symbol(grid, m) * c
    return RealField(grid, sfft.irfft(out, n=grid.n))


def linear_symbol(grid: Grid, m: float) -> np.ndarray:
    """Multiplier of ``u_hat`` from ``-(u_5x + 10 m^2 u_3x)``: ``-i k^5 + 10 i m^2 k^3``."""
    k = grid.rwavenumbers
    sym = -1j * k**5 + 10j * m * m * k**3
    sym[-1] = 0.0
    return sym


def nonlinear_terms(w: RealField, gp: GardnerParams, *, printed_n2: bool = False) -> dict:
    """The nonlinearity of the rescaled equation split into its named groups.

    Returns ``{"N2": ..., "N3": ..., "SN": ...}`` (arrays), each product formed
    on the padded grid:

        N2 = 20 m w w_3x + 40 m w_x w_xx + 180 m^2 w^2 w_x
        N3 = 10 w^2 w_3x + 10 w_x^3 + 40 w w_x w_xx + 30 w^4 w_x
        SN = 120 m^3 w w_x + 120 m w^3 w_x

    This ``N2`` is what reduces to the unscaled equation at ``lam = 1``.
    ``printed_n2=True`` swaps the first two coefficients
    (``20 m w_x w_xx + 40 m w w_3x``), the alternative reading, which does not.
    """
    grid = w.grid
    n, big = grid.n, PAD_RATIO * grid.n
    c = sfft.rfft(w.values)
    d = [sfft.irfft(pad_spectrum(grid.symbol(j) * c if j else c, n, big), n=big) for j in range(4)]
    v, vx, vxx, v3 = d
    m = gp.mu_eff

    def back(x):
        h = truncate_spectrum(sfft.rfft(x), n, big)
        h[-1] = 0.0  # the flux form has no Nyquist component either
        return sfft.irfft(h, n=n)

    if printed_n2:
        n2 = 20 * m * vx * vxx + 40 * m * v * v3
    else:
        n2 = 20 * m * v * v3 + 40 * m * vx * vxx
    n2 = n2 + 180 * m**2 * v * v * vx
    n3 = 10 * v * v * v3 + 10 * vx**3 + 40 * v * vx * vxx + 30 * v**4 * vx
    sn = 120 * m**3 * v * vx + 120 * m * v**3 * vx
    return {"N2": back(n2), "N3": back(n3), "SN": back(sn)}


# ---------------------------------------------------------------------------
# configuration


@dataclass
class SimConfig:
    """Everything ``run`` needs.

    ``initial`` is a BreatherParams, SolitonParams, RealField, a CSV path, or
    any object with a ``build(grid) -> RealField`` method (the twin packets
    of :mod:`gardner5.illposed`).
    """

    gardner: GardnerParams
    grid: Grid
    dt: float
    t_end: float
    initial: Any
    equation: str = "original"
    scheme: str = "etdrk4"
    diag_stride: int = 1
    sobolev_s: float = 2.0
    ablate: bool = False
    linear_only: bool = False
    band: float | None = None

    def __post_init__(self):
        if self.equation not in EQUATIONS:
            raise InvalidArgumentError(f"equation must be one of {EQUATIONS}")
        if self.scheme not in SCHEMES:
            raise InvalidArgumentError(f"scheme must be one of {SCHEMES}")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise InvalidArgumentError(f"dt must be positive, got {self.dt}")
        if not (np.isfinite(self.t_end) and self.t_end > 0):
            raise InvalidArgumentError(f"t_end must be positive, got {self.t_end}")
        if self.dt > self.t_end:
            raise InvalidArgumentError("dt must not exceed t_end")
        if self.scheme == "hybrid" and not (self.band is not None and self.band > 0):
            raise InvalidArgumentError("the hybrid scheme needs a positive band wavenumber")
        if int(self.diag_stride) != self.diag_stride or self.diag_stride < 1:
            raise InvalidArgumentError("diag_stride must be a positive integer")
        if self.equation == "original" and self.gardner.lam != 1.0:
            self.gardner = GardnerParams(self.gardner.mu, 1.0)
        steps = self.t_end / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise InvalidArgumentError("t_end must be an integer multiple of dt")

    @property
    def m(self) -> float:
        return self.gardner.mu_eff

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def echo(self) -> dict:
        init = self.initial
        if isinstance(init, (BreatherParams, SolitonParams)):
            init_desc = {"kind": type(init).__name__, **init.__dict__}
        elif hasattr(init, "describe"):
            init_desc = init.describe()
        else:
            init_desc = {"kind": type(init).__name__}
        return {
            "equation": self.equation,
            "mu": self.gardner.mu,
            "lambda": self.gardner.lam,
            "L": self.grid.half_length,
            "n": self.grid.n,
            "dt": self.dt,
            "t_end": self.t_end,
            "scheme": self.scheme,
            "band": self.band,
            "diag_stride": self.diag_stride,
            "sobolev_s": self.sobolev_s,
            "ablate": self.ablate,
            "initial": init_desc,
        }


# ---------------------------------------------------------------------------
# integrators


@lru_cache(maxsize=32)
def _etd_coefficients(n: int, half_length: float, m: float, h: float):
    grid = Grid(half_length, n)
    lin = linear_symbol(grid, m)
    hl = h * lin
    roots = np.exp(2j * np.pi * (np.arange(1, CONTOUR_POINTS + 1) - 0.5) / CONTOUR_POINTS)
    lr = hl[:, None] + roots[None, :]
    elr = np.exp(lr)
    q = h * np.mean((np.exp(lr / 2) - 1) / lr, axis=1)
    f1 = h * np.mean((-4 - lr + elr * (4 - 3 * lr + lr * lr)) / lr**3, axis=1)
    f2 = h * np.mean((2 + lr + elr * (lr - 2)) / lr**3, axis=1)
    f3 = h * np.mean((-4 - 3 * lr - lr * lr + elr * (4 - lr)) / lr**3, axis=1)
    return np.exp(hl), np.exp(hl / 2), q, f1, f2, f3


@lru_cache(maxsize=32)
def _stage_coefficients(n: int, half_length: float, m: float, h: float, scheme: str,
                        band: float | None):
    """Per-mode coefficients of a four-stage exponential Runge-Kutta step.

    With ``N*`` the nonlinear term at a stage, the step reads

        a  = e2 c + b1 N(c)
        b  = e2 c + b2 N(a)
        d  = e c + c1 N(c) + c2 N(b)
        c' = e c + g1 N(c) + g2 (N(a) + N(b)) + g3 N(d)

    ETDRK4 (Cox-Matthews) and the integrating-factor RK4 (Lawson) are both of
    this form; ``hybrid`` uses the integrating-factor row for ``|k| <= band``
    and the ETD row elsewhere.
    """
    e, e2, q, f1, f2, f3 = _etd_coefficients(n, half_length, m, h)
    etd = (q, q, q * (e2 - 1), 2 * q, f1, 2 * f2, f3)
    half = np.full_like(e2, h / 2)
    lawson = (h / 2 * e2, half, np.zeros_like(e2), h * e2, h / 6 * e, h / 3 * e2,
              np.full_like(e2, h / 6))
    if scheme == "etdrk4":
        rows = etd
    elif scheme == "ifrk4":
        rows = lawson
    else:
        inside = Grid(half_length, n).rwavenumbers <= band
        rows = tuple(np.where(inside, a, b) for a, b in zip(lawson, etd))
    return (e, e2) + rows


def _step_hat(c: np.ndarray, grid: Grid, m: float, h: float, scheme: str,
              ablate: bool, linear_only: bool, band: float | None = None) -> np.ndarray:
    if linear_only:
        def nl(v):
            return np.zeros_like(v)
    else:
        def nl(v):
            return -_nonlinear_hat(v, grid, m, ablate)

    e, e2, b1, b2, c1, c2, g1, g2, g3 = _stage_coefficients(
        grid.n, grid.half_length, m, h, scheme, band)
    nv = nl(c)
    na = nl(e2 * c + b1 * nv)
    nb = nl(e2 * c + b2 * na)
    nd = nl(e * c + c1 * nv + c2 * nb)
    return e * c + g1 * nv + g2 * (na + nb) + g3 * nd


def step(state: RealField, cfg: SimConfig, dt: float | None = None, t: float = 0.0) -> RealField:
    """Advance one step of size ``dt`` (default ``cfg.dt``; may be negative)."""
    h = cfg.dt if dt is None else dt
    c = _step_hat(sfft.rfft(state.values), state.grid, cfg.m, h, cfg.scheme,
                  cfg.ablate, cfg.linear_only, cfg.band)
    values = sfft.irfft(c, n=state.grid.n)
    if not np.all(np.isfinite(values)):
        raise BlowUpError(f"non-finite values after step at t={t:.6g}", last_t=t, last_state=state)
    return RealField(state.grid, values)


# ---------------------------------------------------------------------------
# runs and diagnostics


@dataclass
class DiagnosticsRow:
    t: float
    mass: float
    energy: float
    energy5: float
    hs_norm: float
    l2_error: float | None = None
    peak_x: float | None = None

    def as_list(self) -> list:
        return [self.t, self.mass, self.energy, self.energy5, self.hs_norm, self.l2_error, self.peak_x]


DIAG_COLUMNS = ("t", "mass", "energy", "energy5", "hs_norm", "l2_error", "peak_x")


@dataclass
class RunResult:
    final: RealField
    diagnostics: list
    failed: bool = False
    message: str = ""
    t_final: float = 0.0
    runtime_seconds: float = 0.0
    states: dict = field(default_factory=dict)


def initial_field(cfg: SimConfig) -> RealField:
    init = cfg.initial
    grid = cfg.grid
    if isinstance(init, RealField):
        if init.grid != grid:
            raise InvalidArgumentError("initial field lives on a different grid")
        return init
    if isinstance(init, BreatherParams):
        return breather_eval(init, 0.0, grid)
    if isinstance(init, SolitonParams):
        return soliton_eval(init, 0.0, grid)
    if isinstance(init, (str, Path)):
        f = read_field_csv(init)
        if f.grid != grid:
            raise InvalidArgumentError(f"{init}: grid does not match the configured grid")
        return f
    if hasattr(init, "build"):
        return init.build(grid)
    raise InvalidArgumentError(f"unsupported initial condition {type(init).__name__}")


def _exact_at(cfg: SimConfig, t: float):
    init = cfg.initial
    if cfg.gardner.mu_eff != getattr(init, "mu", None):
        return None
    if isinstance(init, BreatherParams):
        return breather_eval(init, t, cfg.grid, self_check=False).values
    if isinstance(init, SolitonParams):
        return soliton_eval(init, t, cfg.grid).values
    return None


def _diagnose(u: RealField, t: float, cfg: SimConfig) -> DiagnosticsRow:
    exact = _exact_at(cfg, t)
    err = None
    if exact is not None:
        err = float(np.sqrt(np.sum((u.values - exact) ** 2) * u.grid.dx))
    peak = None
    if isinstance(cfg.initial, SolitonParams):
        peak = track_peak(u)
    return DiagnosticsRow(t, mass(u), energy_mu(u, cfg.gardner), energy5_mu(u, cfg.gardner),
                          sobolev_norm_values(u.values, u.grid, cfg.sobolev_s), err, peak)


def run(cfg: SimConfig, *, keep_states=(), initial: RealField | None = None) -> RunResult:
    """Integrate from ``t = 0`` to ``cfg.t_end``.

    Diagnostics are recorded at ``t = 0``, every ``diag_stride`` steps and at
    the final time.  A non-finite state stops the run; the partial result is
    returned with ``failed=True`` and the last finite field.  ``keep_states``
    lists step indices whose fields are stored in ``result.states``.
    """
    start = time.perf_counter()
    u = initial_field(cfg) if initial is None else initial
    if isinstance(cfg.initial, (BreatherParams, SolitonParams)):
        check_decay(u.values, what="initial condition")
    rows = [_diagnose(u, 0.0, cfg)]
    states = {0: u} if 0 in keep_states else {}
    keep = set(keep_states)
    grid, m, h = cfg.grid, cfg.m, cfg.dt
    c = sfft.rfft(u.values)
    t = 0.0
    n_steps = cfg.n_steps
    # pre-flight: a dt that cannot survive a single step is a configuration
    # error, not a blow-up of the solution
    first = _step_hat(c, grid, m, h, cfg.scheme, cfg.ablate, cfg.linear_only, cfg.band)
    if not np.all(np.isfinite(first)):
        raise InvalidArgumentError(f"dt={h} fails the one-step stability pre-flight")
    for j in range(1, n_steps + 1):
        if j == 1:
            c_new = first
        else:
            c_new = _step_hat(c, grid, m, h, cfg.scheme, cfg.ablate, cfg.linear_only, cfg.band)
        if not np.all(np.isfinite(c_new)):
            last = RealField(grid, sfft.irfft(c, n=grid.n))
            return RunResult(last, rows, True, f"blow-up after t={t:.6g}", t,
                             time.perf_counter() - start, states)
        c = c_new
        t = j * h
        if j % cfg.diag_stride == 0 or j == n_steps or j in keep:
            u = RealField(grid, sfft.irfft(c, n=grid.n))
            if j % cfg.diag_stride == 0 or j == n_steps:
                rows.append(_diagnose(u, t, cfg))
            if j in keep:
                states[j] = u
    final = RealField(grid, sfft.irfft(c, n=grid.n))
    return RunResult(final, rows, False, "", t, time.perf_counter() - start, states)


def write_diagnostics_csv(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DIAG_COLUMNS)
        for r in rows:
            w.writerow(["" if v is None else f"{v:.17g}" for v in r.as_list()])
    return path


def run_summary(cfg: SimConfig, result: RunResult, *, drift_tol: float = 1e-8,
                error_tol: float = 1e-6, timing: bool = False) -> dict:
    """``{config_echo, pass_flags, max_drift, max_error, runtime_seconds}``."""
    rows = result.diagnostics
    r0 = rows[0]
    drift = {}
    for name in ("mass", "energy", "energy5"):
        ref = getattr(r0, name)
        scale = abs(ref) if ref != 0 else 1.0
        drift[name] = max(abs(getattr(r, name) - ref) / scale for r in rows)
    errors = [r.l2_error for r in rows if r.l2_error is not None]
    max_error = max(errors) if errors else None
    flags = {
        "finished": not result.failed,
        "conservation": max(drift.values()) < drift_tol,
    }
    if max_error is not None:
        flags["shadowing"] = max_error < error_tol
    return {
        "config_echo": cfg.echo(),
        "pass_flags": flags,
        "max_drift": drift,
        "max_error": max_error,
        "runtime_seconds": round(result.runtime_seconds, 3) if timing else None,
    }


def write_summary_json(summary: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# peaks and scaling


def track_peak(u: RealField) -> float:
    """Location of the unique interior maximum by parabolic interpolation."""
    v = u.values
    boundary = max(abs(v[0]), abs(v[-1]))
    i = int(np.argmax(v))
    peak = v[i]
    if i == 0 or i == v.size - 1 or not peak > 3 * boundary or peak <= 0:
        raise InvalidArgumentError("no clear interior peak")
    inner = v[1:-1]
    is_max = (inner > v[:-2]) & (inner >= v[2:])
    tall = inner > max(3 * boundary, 0.1 * peak)
    if np.count_nonzero(is_max & tall) > 1:
        raise InvalidArgumentError("more than one peak")
    a, b, c = v[i - 1], v[i], v[i + 1]
    denom = a - 2 * b + c
    shift = 0.0 if denom == 0 else 0.5 * (a - c) / denom
    return float(u.grid.x[i] + shift * u.grid.dx)


def scaling_residual(bp: BreatherParams, lam: float, t: float, grid: Grid) -> float:
    """Sup residual of ``u_lam(t, x) = lam B(lam^5 t, lam x)`` in the rescaled equation.

    ``grid`` is the grid of ``u_lam``.  The breather is sampled on the grid
    of half-length ``lam L`` (same ``n``), so the nodes are exactly
    ``lam x_i``; the time derivative ``lam^6 B_t`` comes from the closed form.
    """
    from .exact import breather_time_derivative

    gp = GardnerParams(bp.mu, lam)
    inner = Grid(lam * grid.half_length, grid.n)
    s = lam**5 * t
    u = RealField(grid, lam * breather_eval(bp, s, inner, self_check=False).values)
    check_decay(u.values, what="rescaled breather")
    ut = lam**6 * breather_time_derivative(bp, s, inner).values
    return float(np.max(np.abs(ut - rhs_general(u, gp).values)))



def convergence_study(cfg: SimConfig, dts) -> dict:
    """Final-time L2 error against the exact solution for each ``dt``.

    ``cfg`` supplies everything except the step; its initial condition must
    have a closed form (breather or soliton with matching ``mu``).  Observed
    orders are ``log2``-style slopes between consecutive step sizes.
    """
    errors = []
    for dt in dts:
        res = run(dataclasses.replace(cfg, dt=dt, diag_stride=10**9))
        if res.failed:
            raise BlowUpError(f"dt={dt}: {res.message}")
        err = res.diagnostics[-1].l2_error
        if err is None:
            raise InvalidArgumentError("convergence_study needs an initial condition with a closed form")
        errors.append(err)
    dts = np.asarray(dts, dtype=float)
    errs = np.asarray(errors)
    orders = np.log(errs[:-1] / errs[1:]) / np.log(dts[:-1] / dts[1:])
    return {"dt": dts.tolist(), "error": errs.tolist(), "orders": orders.tolist()}
