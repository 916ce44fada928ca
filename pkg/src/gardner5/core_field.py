"""Periodic spectral grid, real fields, Fourier differentiation and quadrature.

The whole line is truncated to the periodic box ``[-L, L)`` sampled at ``n``
uniform nodes.  The forward transform used throughout is the continuum-
normalised sum

    u_hat(k_j) = dx * sum_i u(x_i) exp(-i k_j x_i),   k_j = pi j / L,

so that ``(1/2pi) sum_j |u_hat(k_j)|^2 dk`` reproduces ``int |u|^2 dx``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.fft as sfft

from .errors import DomainTooSmallError, InvalidArgumentError

__all__ = [
    "Grid",
    "RealField",
    "make_grid",
    "fourier_transform",
    "spectral_derivative",
    "sobolev_norm",
    "inner_l2",
    "dealiased_product",
    "check_decay",
    "random_decaying_field",
    "write_field_csv",
    "read_field_csv",
]

PAD_RATIO = 3
MAX_FACTORS = 5


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-half_length, half_length)``."""

    half_length: float
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise InvalidArgumentError(f"n must be an integer, got {self.n!r}")
        if self.n % 2 or self.n < 16:
            raise InvalidArgumentError(f"n must be even and >= 16, got {self.n}")
        if not np.isfinite(self.half_length) or self.half_length <= 0:
            raise InvalidArgumentError(f"half_length must be positive, got {self.half_length}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "half_length", float(self.half_length))

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / self.n

    @property
    def length(self) -> float:
        return 2.0 * self.half_length

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.half_length + self.dx * np.arange(self.n)
        x.setflags(write=False)
        return x

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Full DFT-ordered wavenumbers ``pi j / L``."""
        k = np.pi / self.half_length * np.fft.fftfreq(self.n, d=1.0 / self.n)
        k.setflags(write=False)
        return k

    @cached_property
    def rwavenumbers(self) -> np.ndarray:
        """Non-negative wavenumbers matching ``rfft`` output (Nyquist last)."""
        k = np.pi / self.half_length * np.arange(self.n // 2 + 1)
        k.setflags(write=False)
        return k

    @property
    def dk(self) -> float:
        return np.pi / self.half_length

    @property
    def k_max(self) -> float:
        return np.pi / self.dx

    def symbol(self, order: int) -> np.ndarray:
        """``(ik)^order`` on the rfft wavenumbers, Nyquist zeroed for odd orders."""
        sym = (1j * self.rwavenumbers) ** order
        if order % 2:
            sym[-1] = 0.0
        return sym


def make_grid(half_length: float, n: int) -> Grid:
    """Build the grid with nodes ``x_i = -L + i dx``, ``dx = 2L/n``."""
    return Grid(half_length, n)


@dataclass(frozen=True, eq=False)
class RealField:
    """Real samples of a function on a :class:`Grid` (immutable)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.n,):
            raise InvalidArgumentError(
                f"expected {self.grid.n} samples, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidArgumentError("field contains non-finite samples")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "RealField":
        return cls(grid, func(grid.x))

    @classmethod
    def zeros(cls, grid: Grid) -> "RealField":
        return cls(grid, np.zeros(grid.n))

    def _coerce(self, other):
        if isinstance(other, RealField):
            _same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return RealField(self.grid, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RealField(self.grid, self.values - self._coerce(other))

    def __rsub__(self, other):
        return RealField(self.grid, self._coerce(other) - self.values)

    def __mul__(self, other):
        # pointwise; use dealiased_product when aliasing matters
        return RealField(self.grid, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return RealField(self.grid, self.values / scalar)

    def __neg__(self):
        return RealField(self.grid, -self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def l2(self) -> float:
        return float(np.sqrt(inner_l2(self, self)))


def _same_grid(*fields: RealField) -> Grid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise InvalidArgumentError("fields live on different grids")
    return grid


def fourier_transform(u: RealField) -> np.ndarray:
    """Continuum-normalised transform in DFT ordering (see module docstring)."""
    g = u.grid
    sign = np.where(np.arange(g.n) % 2, -1.0, 1.0)  # exp(i k_j L) = (-1)^j
    return g.dx * sign * sfft.fft(u.values)


def derivative_values(values: np.ndarray, grid: Grid, order: int) -> np.ndarray:
    """Array-level spectral derivative used by the hot paths."""
    if order == 0:
        return np.array(values, dtype=float)
    return sfft.irfft(grid.symbol(order) * sfft.rfft(values), n=grid.n)


def spectral_derivative(u: RealField, order: int) -> RealField:
    """Return the field whose transform is ``(ik)^order u_hat``.

    Odd orders zero the Nyquist mode so the result stays real.
    """
    if isinstance(order, bool) or int(order) != order or not 1 <= order <= 5:
        raise InvalidArgumentError(f"derivative order must be in 1..5, got {order!r}")
    return RealField(u.grid, derivative_values(u.values, u.grid, int(order)))


def sobolev_norm(u: RealField, s: float) -> float:
    """``H^s`` norm with weight ``<k>^{2s} = (1+k^2)^s``.

    With the continuum-normalised transform, ``s = 0`` is the L^2 norm.
    """
    if not np.isfinite(s) or s < 0:
        raise InvalidArgumentError(f"sobolev index must be >= 0, got {s}")
    return sobolev_norm_values(u.values, u.grid, s)


def sobolev_norm_values(values: np.ndarray, grid: Grid, s: float) -> float:
    # rfft half spectrum: interior modes counted twice; Nyquist and zero once
    c = sfft.rfft(values)
    weight = np.full(c.shape, 2.0)
    weight[0] = 1.0
    weight[-1] = 1.0
    power = weight * (1.0 + grid.rwavenumbers**2) ** s * np.abs(c) ** 2
    # |u_hat|^2 = dx^2 |c|^2 ; (1/2pi) * dk * dx^2 = dx / n
    return float(np.sqrt(np.sum(power) * grid.dx / grid.n))


def inner_l2(u: RealField, v: RealField) -> float:
    """Uniform-grid quadrature ``sum_i u_i v_i dx``."""
    grid = _same_grid(u, v)
    return float(np.dot(u.values, v.values) * grid.dx)


def pad_spectrum(c: np.ndarray, n: int, m: int) -> np.ndarray:
    """Embed an ``rfft`` spectrum of an ``n``-point signal into an ``m``-point one.

    Values on the ``m`` grid then sample the same trigonometric interpolant.
    """
    out = np.zeros(m // 2 + 1, dtype=complex)
    out[: n // 2] = c[: n // 2]
    out[n // 2] = 0.5 * c[n // 2]  # Nyquist cosine splits between +-n/2
    out *= m / n
    return out


def truncate_spectrum(c: np.ndarray, n: int, m: int) -> np.ndarray:
    """Inverse of :func:`pad_spectrum`: keep modes ``|j| <= n/2``."""
    out = np.array(c[: n // 2 + 1], dtype=complex)
    out[n // 2] = 2.0 * out[n // 2].real  # +n/2 and -n/2 alias on the coarse grid
    out *= n / m
    return out


def dealiased_product(factors) -> RealField:
    """Pointwise product of 2..5 fields evaluated on a 3x zero-padded grid.

    Padding by 3 is alias-free up to degree 5.  Exactly constant factors
    are applied as scalars.
    """
    factors = list(factors)
    if not 2 <= len(factors) <= MAX_FACTORS:
        raise InvalidArgumentError(f"need 2..{MAX_FACTORS} factors, got {len(factors)}")
    grid = _same_grid(*factors)
    scale = 1.0
    varying = []
    for f in factors:
        v = f.values
        if np.all(v == v[0]):
            scale *= v[0]
        else:
            varying.append(v)
    if not varying:
        return RealField(grid, np.full(grid.n, scale))
    if len(varying) == 1:
        return RealField(grid, scale * varying[0])
    n, m = grid.n, PAD_RATIO * grid.n
    prod = np.ones(m)
    for v in varying:
        prod *= sfft.irfft(pad_spectrum(sfft.rfft(v), n, m), n=m)
    out = sfft.irfft(truncate_spectrum(sfft.rfft(prod), n, m), n=n)
    return RealField(grid, scale * out)


def check_decay(values: np.ndarray, rel_tol: float = 1e-12, what: str = "field", width: int = 2):
    """Raise :class:`DomainTooSmallError` unless the edges are negligible.

    The outermost ``width`` nodes on both sides must be below
    ``rel_tol * max|values|``.
    """
    values = np.asarray(values)
    peak = np.max(np.abs(values))
    edge = max(np.max(np.abs(values[:width])), np.max(np.abs(values[-width:])))
    if peak == 0.0:
        return
    if edge > rel_tol * peak:
        raise DomainTooSmallError(
            f"domain too small for {what}: boundary/peak = {edge / peak:.3e} > {rel_tol:.0e}"
        )


def random_decaying_field(grid: Grid, rng: np.random.Generator, *, width: float = 4.0,
                          kmax: float | None = None, center: float = 0.0) -> RealField:
    """Gaussian-envelope random trigonometric polynomial.

    Frequencies are drawn up to ``kmax`` (default a quarter of the grid's
    Nyquist wavenumber); the envelope ``exp(-(x-center)^2 / (2 width^2))``
    gives decay.
    """
    if kmax is None:
        kmax = grid.k_max / 4
    kmax = min(kmax, grid.k_max / 4)
    x = grid.x
    nmodes = 8
    ks = rng.uniform(0.0, kmax, size=nmodes) * rng.uniform(0, 1, size=nmodes) ** 2
    amps = rng.normal(size=nmodes) / (1.0 + ks**2)
    phases = rng.uniform(0, 2 * np.pi, size=nmodes)
    carrier = np.sum(amps[:, None] * np.cos(ks[:, None] * (x - center) + phases[:, None]), axis=0)
    envelope = np.exp(-0.5 * ((x - center) / width) ** 2)
    return RealField(grid, carrier * envelope)


def write_field_csv(u: RealField, path) -> Path:
    """Write ``x,value`` rows with 17 significant digits."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "value"])
        for xi, vi in zip(u.grid.x, u.values):
            w.writerow([f"{xi:.17g}", f"{vi:.17g}"])
    return path


def read_field_csv(path) -> RealField:
    """Inverse of :func:`write_field_csv`; the grid is inferred from the nodes."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x, v = data[:, 0], data[:, 1]
    n = x.size
    half_length = -x[0]
    grid = make_grid(half_length, n)
    if not np.allclose(grid.x, x, rtol=0, atol=1e-9 * max(1.0, half_length)):
        raise InvalidArgumentError(f"{path}: nodes are not a uniform [-L, L) grid")
    return RealField(grid, v)
