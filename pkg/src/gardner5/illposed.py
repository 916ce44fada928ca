"""Wave-packet experiment behind the weak ill-posedness of the rescaled equation.

Two initial data differ only in a small, very wide low-frequency part,

    u_N^{+-}(0) = +-eps N^-3 phi~_N(x) + N^{-(4+delta)/2-s} phi_N(x) cos(N x),

with ``phi_N(x) = phi(x / N^{4+delta})``.  The quadratic term ``20 m w w_3x``
(``m = mu * lam``) lets the low part shift the phase of the carrier, so the
two solutions separate in ``H^s`` although their data are ``O(eps)`` apart.

The ansatz for the high part moves its phase by ``-+t``.  In the equation the
shift rate is the coupling times the low amplitude times ``N^3 / N^3``, that
is ``kappa = 20 m eps``; the ansatz assumes ``kappa = 1``.  Both the ``|sin t|``
fit and the ``|sin(kappa t)|`` fit are reported, together with the numerical
cancellation residual of the carrier operator.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.fft as sfft
from scipy import integrate

from .core_field import Grid, RealField, derivative_values, sobolev_norm_values
from .dynamics import SimConfig, _step_hat
from .errors import BlowUpError, InvalidArgumentError
from .functionals import GardnerParams, mass

__all__ = [
    "IllposedParams",
    "TwinPacket",
    "DivergenceResult",
    "bump",
    "bump_tilde",
    "phase",
    "illposed_grid",
    "build_initials",
    "high_part",
    "norm_scan",
    "scaled_norm",
    "bump_l2",
    "lambda_residual",
    "twin_config",
    "twin_divergence",
    "low_part_drift",
    "approximation_report",
    "write_divergence_csv",
    "write_norm_scan_csv",
    "MAX_GRID_POINTS",
]

MAX_GRID_POINTS = 2**24
SUPPORT_MARGIN = 0.1  # box half-length is (1 + margin) * 4 N^{4+delta}
POINTS_PER_CARRIER = 16  # dx <= 2 pi / (16 N)


# ---------------------------------------------------------------------------
# bump functions


def _glue(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def _smooth_step(t):
    """0 for t <= 0, 1 for t >= 1, C-infinity and increasing in between."""
    a = _glue(t)
    return a / (a + _glue(1.0 - t))


def bump(x):
    """``phi``: 1 on ``|x| <= 1``, 0 on ``|x| >= 2``, monotone in ``|x|`` between."""
    x = np.asarray(x, dtype=float)
    out = 1.0 - _smooth_step(np.abs(x) - 1.0)
    return out if out.ndim else float(out)


def bump_tilde(x):
    """``phi~(x) = phi(x/2)``; it equals 1 exactly on the support of ``phi``."""
    return bump(np.asarray(x, dtype=float) / 2.0)


def bump_l2() -> float:
    """``||phi||_{L^2}`` by adaptive quadrature."""
    val, _ = integrate.quad(lambda x: bump(x) ** 2, 1.0, 2.0, epsabs=1e-14, epsrel=1e-13)
    return float(np.sqrt(2.0 * (1.0 + val)))


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class IllposedParams:
    """Carrier frequency ``N``, dilation exponent ``delta``, index ``s``, low amplitude ``eps``.

    ``eps = 0`` is accepted as the degenerate control in which both data agree.
    """

    N: float
    delta: float = 0.5
    s: float = 2.0
    eps: float = 0.01
    gardner: GardnerParams = GardnerParams(1.0, 1.0)

    def __post_init__(self):
        if not (np.isfinite(self.N) and self.N >= 4):
            raise InvalidArgumentError(f"N must be >= 4, got {self.N}")
        if not (np.isfinite(self.s) and self.s > 0):
            raise InvalidArgumentError(f"s must be > 0, got {self.s}")
        if not (0 < self.delta < 1 and self.delta > max(0.0, 2 - 2 * self.s)):
            raise InvalidArgumentError(
                f"delta must satisfy max(0, 2-2s) < delta < 1, got delta={self.delta}, s={self.s}")
        if not 0 <= self.eps <= 0.1:
            raise InvalidArgumentError(f"eps must lie in [0, 0.1], got {self.eps}")
        if not isinstance(self.gardner, GardnerParams):
            raise InvalidArgumentError("gardner must be GardnerParams")

    @property
    def m(self) -> float:
        return self.gardner.mu_eff

    @property
    def dilation(self) -> float:
        """``N^{4+delta}``."""
        return self.N ** (4 + self.delta)

    @property
    def high_amplitude(self) -> float:
        return self.N ** (-(4 + self.delta) / 2 - self.s)

    @property
    def low_amplitude(self) -> float:
        return self.eps * self.N**-3

    @property
    def kappa(self) -> float:
        """Phase-shift rate produced by ``20 m w w_3x`` acting on the carrier."""
        return 20 * self.m * self.eps

    def describe(self) -> dict:
        return {"kind": "IllposedParams", "N": self.N, "delta": self.delta, "s": self.s,
                "eps": self.eps, "mu": self.gardner.mu, "lambda": self.gardner.lam}


def phase(p: IllposedParams, t: float) -> float:
    """``Phi_N(t) = (N^5 - 10 m^2 N^3) t``."""
    return (p.N**5 - 10 * p.m**2 * p.N**3) * t


def illposed_grid(p: IllposedParams, *, carrier: bool = True) -> Grid:
    """Smallest power-of-two grid containing ``supp phi~_N`` with a margin.

    With ``carrier`` the spacing also resolves ``cos(N x)``; without it only
    the low part (width ``N^{4+delta}``) is resolved.
    """
    half = (1 + SUPPORT_MARGIN) * 4 * p.dilation
    dx_max = 2 * np.pi / (POINTS_PER_CARRIER * p.N) if carrier else p.dilation / 64
    n = 1 << int(np.ceil(np.log2(2 * half / dx_max)))
    if n > MAX_GRID_POINTS:
        raise InvalidArgumentError(
            f"N={p.N} needs {n} grid points, above the limit {MAX_GRID_POINTS}")
    return Grid(half, max(n, 16))


def _check_grid(p: IllposedParams, grid: Grid, carrier: bool = True):
    if grid.half_length <= 4 * p.dilation:
        raise InvalidArgumentError(
            f"box half-length {grid.half_length:g} does not contain supp phi~_N (|x| < {4 * p.dilation:g})")
    if carrier and grid.dx > np.pi / (8 * p.N):
        raise InvalidArgumentError(f"dx={grid.dx:g} does not resolve the carrier N={p.N}")
    if grid.n > MAX_GRID_POINTS:
        raise InvalidArgumentError(f"grid of {grid.n} points exceeds {MAX_GRID_POINTS}")


def _low_values(p: IllposedParams, x, sign: int) -> np.ndarray:
    return sign * p.low_amplitude * bump_tilde(x / p.dilation)


def group_velocity(p: IllposedParams) -> float:
    """``d omega / dk`` at the carrier, ``5 N^4 - 30 m^2 N^2``."""
    return 5 * p.N**4 - 30 * p.m**2 * p.N**2


def high_part(p: IllposedParams, t: float, grid: Grid, sign: int, *,
              corrected: bool = False) -> RealField:
    """``N^{-(4+delta)/2-s} phi_N(x) cos(N x - Phi_N(t) - sign t)``.

    With ``corrected=True`` the phase shift is ``+sign kappa t`` (the sign and
    rate the coupling actually produces) and the envelope travels at the
    carrier's group velocity.
    """
    x = grid.x
    if corrected:
        env = bump((x - group_velocity(p) * t) / p.dilation)
        shift = -sign * p.kappa * t
    else:
        env = bump(x / p.dilation)
        shift = sign * t
    return RealField(grid, p.high_amplitude * env * np.cos(p.N * x - phase(p, t) - shift))


def build_initials(p: IllposedParams, grid: Grid) -> dict:
    """``{"u_plus", "u_minus"}`` at ``t = 0``."""
    _check_grid(p, grid)
    hi = high_part(p, 0.0, grid, 1).values
    return {
        "u_plus": RealField(grid, _low_values(p, grid.x, 1) + hi),
        "u_minus": RealField(grid, _low_values(p, grid.x, -1) + hi),
    }


@dataclass(frozen=True)
class TwinPacket:
    """Initial condition object for :class:`~gardner5.dynamics.SimConfig`."""

    params: IllposedParams
    sign: int = 1
    low_only: bool = False

    def build(self, grid: Grid) -> RealField:
        if self.low_only:
            _check_grid(self.params, grid, carrier=False)
            return RealField(grid, _low_values(self.params, grid.x, self.sign))
        key = "u_plus" if self.sign > 0 else "u_minus"
        return build_initials(self.params, grid)[key]

    def describe(self) -> dict:
        return {**self.params.describe(), "kind": "TwinPacket", "sign": self.sign,
                "low_only": self.low_only}


# ---------------------------------------------------------------------------
# norm limit


@dataclass(frozen=True)
class _BumpSpectrum:
    eta: np.ndarray
    power: np.ndarray  # |phi_hat(eta)|^2 on eta >= 0
    d_eta: float


_SPECTRUM_CACHE: dict = {}


def _bump_spectrum(half_length: float = 256.0, n: int = 2**18) -> _BumpSpectrum:
    key = (half_length, n)
    if key not in _SPECTRUM_CACHE:
        g = Grid(half_length, n)
        c = sfft.rfft(bump(g.x)) * g.dx
        _SPECTRUM_CACHE[key] = _BumpSpectrum(g.rwavenumbers.copy(), np.abs(c) ** 2, g.dk)
    return _SPECTRUM_CACHE[key]


def _scaled_norm_fourier(N: float, delta: float, s: float) -> float:
    # phi_N sin(N x + gamma) has transform a [phi_hat(a(xi-N)) e^{i gamma}
    # - phi_hat(a(xi+N)) e^{-i gamma}] / 2i with a = N^{4+delta}; the two
    # bumps overlap only through phi_hat beyond a N, far below rounding.
    # Substituting eta = a (xi -+ N) leaves an integral over phi_hat alone.
    spec = _bump_spectrum()
    a = N ** (4 + delta)
    eta = spec.eta
    w = ((1 + (N + eta / a) ** 2) ** s + (1 + (N - eta / a) ** 2) ** s) / N ** (2 * s)
    # power is even in eta: full line = 2 * half line minus the eta = 0 term
    dens = w * spec.power
    total = 2 * np.sum(dens) - dens[0]
    return float(np.sqrt(total * spec.d_eta / (8 * np.pi)))


def _scaled_norm_grid(N: float, delta: float, s: float, gamma: float) -> float:
    p = IllposedParams(N, delta, s, 0.0)
    g = illposed_grid(p)
    x = g.x
    v = bump(x / p.dilation) * np.sin(N * x + gamma)
    return p.high_amplitude * sobolev_norm_values(v, g, s)


def scaled_norm(N: float, delta: float, s: float, gamma: float = 0.0, method: str = "auto") -> float:
    """``N^{-(4+delta)/2-s} ||phi_N sin(N x + gamma)||_{H^s}``.

    ``method="grid"`` samples on the carrier-resolving grid (refused above
    ``MAX_GRID_POINTS``); ``"fourier"`` integrates the dilated transform of
    ``phi``, which is independent of ``gamma`` up to the exponentially small
    overlap of the two side bands; ``"auto"`` uses the grid when it fits.
    """
    if method not in ("auto", "grid", "fourier"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    if method == "auto":
        try:
            return _scaled_norm_grid(N, delta, s, gamma)
        except InvalidArgumentError:
            method = "fourier"
    if method == "grid":
        return _scaled_norm_grid(N, delta, s, gamma)
    return _scaled_norm_fourier(N, delta, s)


def norm_scan(delta: float, s: float, Ns, gamma: float = 0.0, method: str = "auto") -> dict:
    """Scaled norms for each ``N`` with the target ``||phi||_{L^2} / sqrt 2``.

    ``limit_extrapolated`` fits ``a + b / N^2`` (the leading correction of
    ``<N>^s / N^s``) to the rows.
    """
    target = bump_l2() / np.sqrt(2)
    rows = []
    for N in Ns:
        IllposedParams(N, delta, s, 0.0)  # validates the triple
        val = scaled_norm(N, delta, s, gamma, method)
        rows.append({"N": float(N), "scaled_norm": val, "target": target,
                     "rel_err": abs(val - target) / target})
    Ns_arr = np.array([r["N"] for r in rows])
    vals = np.array([r["scaled_norm"] for r in rows])
    if len(rows) >= 2:
        design = np.column_stack([np.ones_like(Ns_arr), Ns_arr**-2.0])
        limit = float(np.linalg.lstsq(design, vals, rcond=None)[0][0])
    else:
        limit = float(vals[0])
    return {"delta": delta, "s": s, "gamma": gamma, "rows": rows, "target": target,
            "limit_extrapolated": limit}


# ---------------------------------------------------------------------------
# twin evolution


def lambda_residual(p: IllposedParams, grid: Grid | None = None) -> dict:
    """How far the carrier ansatz is from cancelling against the low part.

    ``Lambda = (d_t + d_x^5 + 10 m^2 d_x^3) u_h + 20 m u_l d_x^3 u_h`` for the
    ``+`` packet at ``t = 0``, divided in L^2 by the bare phase-shift term
    ``A phi_N sin(N x)``.  Three readings are returned:

    ``printed``
        carrier phase ``-t`` with the derivatives acting on the cosine only;
        the coupling adds to the shift, giving about ``1 + kappa``.
    ``matched``
        phase ``+t``, which is the direction the coupling turns the ``+``
        carrier; about ``|1 - kappa|``, zero when ``kappa = 1``.
    ``with_envelope``
        the matched phase with every derivative applied to the full product,
        so the group-velocity transport of ``phi_N`` is included.

    ``phi~(x/2)`` is identically one on the support of ``phi``, so the first
    two agree with their closed forms to rounding.
    """
    grid = illposed_grid(p) if grid is None else grid
    _check_grid(p, grid)
    x = grid.x
    env = p.high_amplitude * bump(x / p.dilation)
    N, m = p.N, p.m
    theta = N * x
    dphi = N**5 - 10 * m**2 * N**3
    low = _low_values(p, x, 1)
    shift_norm = np.sqrt(np.sum((env * np.sin(theta)) ** 2))

    def rel(v):
        return float(np.sqrt(np.sum(v**2)) / shift_norm)

    # on cos(theta): d_x^3 -> N^3 sin, d_x^5 -> -N^5 sin
    coupling = 20 * m * low * N**3 * env * np.sin(theta)
    printed = env * np.sin(theta) + coupling
    matched = -env * np.sin(theta) + coupling
    uh = env * np.cos(theta)
    d3 = derivative_values(uh, grid, 3)
    full = ((dphi - 1) * env * np.sin(theta) + derivative_values(uh, grid, 5)
            + 10 * m**2 * d3 + 20 * m * low * d3)
    return {
        "kappa": p.kappa,
        "printed_predicted": 1 + p.kappa,
        "matched_predicted": abs(1 - p.kappa),
        "printed": rel(printed),
        "matched": rel(matched),
        "with_envelope": rel(full),
        "group_velocity": group_velocity(p),
    }


def twin_config(p: IllposedParams, *, dt: float = 0.02, t_end: float = 0.5,
                diag_stride: int = 1, grid: Grid | None = None, ablate: bool = False,
                scheme: str = "hybrid", band: float | None = None) -> SimConfig:
    """SimConfig for the twin runs.

    The default ``hybrid`` scheme steps the band ``|k| <= 1.5 N`` with an
    integrating factor.  The low part forces the carrier at the carrier's own
    frequency ``~N^5``; ETD stages treat that forcing as a polynomial in time
    and lose the secular phase drift unless ``N^5 dt << 1``, while an
    integrating factor over the whole spectrum is unstable at ``k_max``.
    """
    grid = illposed_grid(p) if grid is None else grid
    if band is None and scheme == "hybrid":
        band = 1.5 * p.N
    return SimConfig(p.gardner, grid, dt, t_end, TwinPacket(p, 1), equation="general",
                     scheme=scheme, diag_stride=diag_stride, sobolev_s=p.s, ablate=ablate,
                     band=band)


@dataclass
class DivergenceResult:
    t: np.ndarray
    d: np.ndarray
    d0: float
    amplitude: float
    residual: float
    target: float
    kappa: float
    amplitude_kappa: float
    residual_kappa: float
    mass_drift: float
    ablated_amplitude: float | None = None
    ablated_d: np.ndarray | None = None
    states: dict | None = None

    @property
    def ablation_drop(self) -> float | None:
        if self.ablated_amplitude is None:
            return None
        return self.amplitude / self.ablated_amplitude

    @property
    def growth_drop(self) -> float | None:
        """Ablation drop of ``max(d - d0)``, free of the constant ``d0`` floor.

        A constant ``d0`` alone fits ``|sin t|`` on ``[0, 1/2]`` with amplitude
        about ``3 d0``, which caps :attr:`ablation_drop` when ``d0`` is not small.
        """
        if self.ablated_d is None:
            return None
        return float(np.max(self.d - self.d0) / np.max(self.ablated_d - self.d0))

    @property
    def amplitude_ratio(self) -> float:
        return self.amplitude / self.target

    def summary(self) -> dict:
        return {
            "d0": self.d0,
            "amplitude": self.amplitude,
            "fit_residual": self.residual,
            "target_2S": self.target,
            "amplitude_ratio": self.amplitude_ratio,
            "kappa": self.kappa,
            "amplitude_kappa": self.amplitude_kappa,
            "fit_residual_kappa": self.residual_kappa,
            "ablated_amplitude": self.ablated_amplitude,
            "ablation_drop": self.ablation_drop,
            "growth_drop": self.growth_drop,
            "mass_drift": self.mass_drift,
        }


def _fit(t, d, rate):
    w = np.abs(np.sin(rate * t))
    if not np.any(w):
        return 0.0, 1.0
    amp = float(d @ w / (w @ w))
    res = float(np.linalg.norm(d - amp * w) / np.linalg.norm(d))
    return amp, res


def _evolve_pair(cfg: SimConfig, pair, direction: int, keep_final: bool):
    """Advance two states in lockstep; returns times, H^s distances, masses."""
    grid, m = cfg.grid, cfg.m
    h = direction * cfg.dt
    c = [sfft.rfft(u.values) for u in pair]
    times = [0.0]
    dists = [sobolev_norm_values(pair[0].values - pair[1].values, grid, cfg.sobolev_s)]
    masses = [[mass(u) for u in pair]]

    def advance(v):
        return _step_hat(v, grid, m, h, cfg.scheme, cfg.ablate, cfg.linear_only, cfg.band)

    with ThreadPoolExecutor(max_workers=2) as pool:
        for j in range(1, cfg.n_steps + 1):
            c = list(pool.map(advance, c))
            if not all(np.all(np.isfinite(v)) for v in c):
                raise BlowUpError(f"twin run blew up at t={direction * j * cfg.dt:.6g}")
            if j % cfg.diag_stride == 0 or j == cfg.n_steps:
                vals = [sfft.irfft(v, n=grid.n) for v in c]
                times.append(direction * j * cfg.dt)
                dists.append(sobolev_norm_values(vals[0] - vals[1], grid, cfg.sobolev_s))
                masses.append([0.5 * float(np.sum(v * v)) * grid.dx for v in vals])
    final = [RealField(grid, sfft.irfft(v, n=grid.n)) for v in c] if keep_final else None
    return np.array(times), np.array(dists), np.array(masses), final


def twin_divergence(p: IllposedParams, cfg: SimConfig, *, ablation: bool = True,
                    backward: bool = False, keep_final: bool = False) -> DivergenceResult:
    """Evolve ``u_N^+`` and ``u_N^-`` and fit their ``H^s`` distance.

    ``d(t) = A |sin t|`` is fitted by least squares over the recorded times;
    ``A`` is compared with ``2 S_N`` where ``S_N`` is the scaled norm.  The
    same fit with ``|sin(kappa t)|`` is reported alongside.  ``ablation``
    reruns the pair without the ``20 m w w_3x`` term.  ``backward`` steps
    with ``-dt`` (times are then negative).
    """
    if cfg.equation != "general" or cfg.gardner != p.gardner:
        raise InvalidArgumentError("twin runs use the rescaled equation with the packet's GardnerParams")
    if cfg.t_end > 1:
        raise InvalidArgumentError("the divergence estimate is stated for |t| < 1")
    ini = build_initials(p, cfg.grid)
    pair = (ini["u_plus"], ini["u_minus"])
    direction = -1 if backward else 1
    t, d, masses, final = _evolve_pair(cfg, pair, direction, keep_final)
    drift = float(np.max(np.abs(masses - masses[0]) / masses[0]))
    amp, res = _fit(t, d, 1.0)
    amp_k, res_k = _fit(t, d, p.kappa)
    target = 2 * scaled_norm(p.N, p.delta, p.s, 0.0, method="fourier")
    ablated = d_ab = None
    if ablation:
        cfg_ab = dataclasses.replace(cfg, ablate=True)
        t_ab, d_ab, _, _ = _evolve_pair(cfg_ab, pair, direction, False)
        ablated = _fit(t_ab, d_ab, 1.0)[0]
    states = {"u_plus": final[0], "u_minus": final[1]} if keep_final else None
    return DivergenceResult(t, d, float(d[0]), amp, res, target, p.kappa, amp_k, res_k,
                            drift, ablated, d_ab, states)


def low_part_drift(p: IllposedParams, t_end: float = 0.5, dt: float = 0.05) -> float:
    """``||u_l(t_end) - u_l(0)||_{L^2}`` for the ``+`` low datum evolved alone.

    The low part needs only its own width resolved, so a coarse grid is used.
    """
    from .dynamics import run

    grid = illposed_grid(p, carrier=False)
    cfg = SimConfig(p.gardner, grid, dt, t_end, TwinPacket(p, 1, low_only=True),
                    equation="general", diag_stride=10**9)
    res = run(cfg)
    if res.failed:
        raise BlowUpError(res.message)
    u0 = TwinPacket(p, 1, low_only=True).build(grid)
    return float(np.sqrt(np.sum((res.final.values - u0.values) ** 2) * grid.dx))


def approximation_report(p: IllposedParams, cfg: SimConfig) -> dict:
    """``||u_N^{+-}(t) - u_ap^{+-}(t)||_{H^s}`` at ``cfg.t_end``.

    ``u_ap = u_l + u_h`` with ``u_l`` the numerically evolved low datum and
    ``u_h`` the explicit carrier, once as written (``error_*``) and once with
    the corrected phase and transported envelope (``corrected_error_*``).
    Relative values divide by ``||u_N(t)||_{H^s}``.
    """
    from .dynamics import run

    out = {"N": p.N, "t": cfg.t_end}
    for sign, name in ((1, "plus"), (-1, "minus")):
        full = run(dataclasses.replace(cfg, initial=TwinPacket(p, sign), diag_stride=10**9))
        low = run(dataclasses.replace(cfg, initial=TwinPacket(p, sign, low_only=True),
                                      diag_stride=10**9))
        if full.failed or low.failed:
            raise BlowUpError("approximation run blew up")
        scale = sobolev_norm_values(full.final.values, cfg.grid, p.s)
        for tag, corrected in (("", False), ("corrected_", True)):
            uap = low.final.values + high_part(p, cfg.t_end, cfg.grid, sign,
                                               corrected=corrected).values
            err = sobolev_norm_values(full.final.values - uap, cfg.grid, p.s)
            out[f"{tag}error_{name}"] = err
            out[f"{tag}relative_{name}"] = err / scale
    return out


# ---------------------------------------------------------------------------
# output


def write_divergence_csv(res: DivergenceResult, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "d", "A_abs_sin_t"])
        for t, d in zip(res.t, res.d):
            w.writerow([f"{t:.17g}", f"{d:.17g}", f"{res.amplitude * abs(np.sin(t)):.17g}"])
    return path


def write_norm_scan_csv(scan: dict, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["N", "scaled_norm", "target", "rel_err"])
        for r in scan["rows"]:
            w.writerow([f"{r[k]:.17g}" for k in ("N", "scaled_norm", "target", "rel_err")])
    return path


def write_divergence_json(res: DivergenceResult, p: IllposedParams, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps({"params": p.describe(), "fit": res.summary()},
                               indent=2, sort_keys=True) + "\n")
    return path
