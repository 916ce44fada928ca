"""The operator obtained by linearizing the breather Lyapunov functional.

With ``a = 20 mu B + 10 B^2 - 2 (beta^2 - alpha^2)`` and

    V = -10 B_x^2 + 120 mu^2 B^2 + 120 mu B^3 + 30 B^4
        - 2 (beta^2 - alpha^2) (12 mu B + 6 B^2) + (alpha^2 + beta^2)^2

the operator is usually tabulated as

    P z = z_xxxx + a z_xx - a_x z_x + V z.

``P`` is not formally self-adjoint.  Its quadratic form ``int P z . z`` is the
same as that of the self-adjoint operator

    S z = z_xxxx + (a z_x)_x + (V + a_xx) z = (P + P^*) / 2,

and ``S`` is the true second variation of the functional: it annihilates
the translation directions ``B_1, B_2`` while ``P`` does not.  Both are
available through ``operator=``; ``"hessian"`` (``S``) is the default, and the
dense eigensolve symmetrizes the collocation matrix of ``P``, which is the
discrete ``S``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .core_field import (
    Grid,
    RealField,
    check_decay,
    derivative_values,
    inner_l2,
    random_decaying_field,
    sobolev_norm,
)
from .errors import InternalConsistencyError, InvalidArgumentError, RegimeError
from .exact import BreatherParams, breather_x_derivatives, param_derivative

__all__ = [
    "OPERATORS",
    "OperatorMatrix",
    "SpectralTargets",
    "apply_L",
    "apply_L0",
    "quadratic_form",
    "closed_form_targets",
    "b0_direction",
    "kernel_directions",
    "kernel_residuals",
    "assemble_matrix",
    "eig_low",
    "coercivity_probe",
    "wronskian_closed_form",
    "wronskian_check",
    "far_field_residual",
    "spectrum_report",
]

OPERATORS = ("hessian", "printed")
MAX_DENSE_N = 4096


@dataclass(frozen=True)
class _Coefficients:
    a: np.ndarray
    ax: np.ndarray
    axx: np.ndarray
    V: np.ndarray
    B: np.ndarray


def _coefficients(bp: BreatherParams, t: float, grid: Grid) -> _Coefficients:
    B, Bx, Bxx = breather_x_derivatives(bp, t, grid)
    check_decay(B, what="breather")
    mu = bp.mu
    c2 = 2 * (bp.beta**2 - bp.alpha**2)
    a = 20 * mu * B + 10 * B**2 - c2
    ax = 20 * mu * Bx + 20 * B * Bx
    axx = 20 * mu * Bxx + 20 * (Bx**2 + B * Bxx)
    V = (-10 * Bx**2 + 120 * mu**2 * B**2 + 120 * mu * B**3 + 30 * B**4
         - c2 * (12 * mu * B + 6 * B**2) + bp.A1)
    return _Coefficients(a, ax, axx, V, B)


def _check_operator(operator: str):
    if operator not in OPERATORS:
        raise InvalidArgumentError(f"operator must be one of {OPERATORS}, got {operator!r}")


def apply_L(bp: BreatherParams, t: float, z: RealField, operator: str = "hessian") -> RealField:
    """Matrix-free application with spectral derivatives of ``z``."""
    _check_operator(operator)
    grid = z.grid
    co = _coefficients(bp, t, grid)
    v = z.values
    z1 = derivative_values(v, grid, 1)
    z2 = derivative_values(v, grid, 2)
    z4 = derivative_values(v, grid, 4)
    if operator == "printed":
        out = z4 + co.a * z2 - co.ax * z1 + co.V * v
    else:
        out = z4 + co.a * z2 + co.ax * z1 + (co.V + co.axx) * v
    return RealField(grid, out)


def apply_L0(bp: BreatherParams, z: RealField) -> RealField:
    """Constant-coefficient limit ``z_xxxx - 2 (beta^2 - alpha^2) z_xx + (alpha^2 + beta^2)^2 z``."""
    g = z.grid
    v = z.values
    out = (derivative_values(v, g, 4) - 2 * (bp.beta**2 - bp.alpha**2) * derivative_values(v, g, 2)
           + bp.A1 * v)
    return RealField(g, out)


def quadratic_form(bp: BreatherParams, t: float, z: RealField, operator: str = "hessian") -> float:
    return inner_l2(apply_L(bp, t, z, operator), z)


# ---------------------------------------------------------------------------
# closed-form targets


@dataclass(frozen=True)
class SpectralTargets:
    qf_alpha: float
    qf_beta: float
    b0_inner: float
    spectrum_edge: float

    def signs_ok(self) -> bool:
        return self.qf_alpha > 0 and self.qf_beta < 0 and self.b0_inner > 0


def _require_regime(bp: BreatherParams):
    if not bp.in_stability_regime:
        raise RegimeError(
            f"need alpha, beta > 0 and 0 < mu < {bp.mu_max:.6g}; got {bp.as_dict()}"
        )


def closed_form_targets(bp: BreatherParams) -> SpectralTargets:
    _require_regime(bp)
    a2, b2, m2 = bp.alpha**2, bp.beta**2, bp.mu**2
    d = bp.discriminant
    den = d * d + 16 * m2 * b2
    qa = 16 * a2 * bp.beta * (1 + 4 * m2 * d / den)
    qb = -16 * bp.beta * (a2 + 2 * m2 * (1 + (d - 2 * b2) * (a2 + b2 + 4 * m2) / den))
    b0 = (d * d + 4 * m2 * d) / den / (4 * bp.beta * (a2 + b2))
    edge = (a2 + b2) ** 2 if bp.beta >= bp.alpha else 4 * a2 * b2
    return SpectralTargets(float(qa), float(qb), float(b0), float(edge))


def b0_direction(bp: BreatherParams, t: float, grid: Grid) -> RealField:
    """``(alpha d_beta B + beta d_alpha B) / (8 alpha beta (alpha^2 + beta^2))``."""
    _require_regime(bp)
    da = param_derivative(bp, t, grid, "alpha")
    db = param_derivative(bp, t, grid, "beta")
    scale = 8 * bp.alpha * bp.beta * (bp.alpha**2 + bp.beta**2)
    return (bp.alpha * db + bp.beta * da) * (1.0 / scale)


def kernel_directions(bp: BreatherParams, t: float, grid: Grid):
    """``(B_1, B_2)``: derivatives of ``B`` in the shifts ``x1`` and ``x2``."""
    return param_derivative(bp, t, grid, "x1"), param_derivative(bp, t, grid, "x2")


def kernel_residuals(bp: BreatherParams, t: float, grid: Grid, operator: str = "hessian") -> tuple:
    """``||L B_j|| / ||B_j||`` for ``j = 1, 2``."""
    out = []
    for bj in kernel_directions(bp, t, grid):
        out.append(apply_L(bp, t, bj, operator).l2() / bj.l2())
    return tuple(out)


# ---------------------------------------------------------------------------
# dense matrices


@dataclass
class OperatorMatrix:
    grid: Grid
    entries: np.ndarray
    symmetrized: bool

    def __post_init__(self):
        n = self.grid.n
        if self.entries.shape != (n, n):
            raise InvalidArgumentError(f"matrix must be {n}x{n}, got {self.entries.shape}")
        if self.symmetrized:
            asym = np.max(np.abs(self.entries - self.entries.T))
            if asym > 1e-12 * np.max(np.abs(self.entries)):
                raise InternalConsistencyError(f"symmetrized matrix is not symmetric ({asym:.3e})")

    def apply(self, z: RealField) -> RealField:
        return RealField(self.grid, self.entries @ z.values)

    def quadratic_form(self, z: RealField) -> float:
        return float(z.values @ self.entries @ z.values) * self.grid.dx


def _diff_matrix(grid: Grid, order: int) -> np.ndarray:
    # row i of the transform is the derivative of the i-th unit vector,
    # i.e. column i of the differentiation matrix
    return derivative_values(np.eye(grid.n), grid, order).T


def assemble_matrix(bp: BreatherParams, t: float, grid: Grid, symmetrize: bool = True) -> OperatorMatrix:
    """Fourier-collocation matrix of the printed operator, optionally ``(A + A^T) / 2``."""
    if grid.n > MAX_DENSE_N:
        raise InvalidArgumentError(f"dense assembly limited to n <= {MAX_DENSE_N}")
    co = _coefficients(bp, t, grid)
    d1 = _diff_matrix(grid, 1)
    d2 = _diff_matrix(grid, 2)
    a = _diff_matrix(grid, 4)
    a += co.a[:, None] * d2
    a -= co.ax[:, None] * d1
    a[np.diag_indices_from(a)] += co.V
    if symmetrize:
        a = 0.5 * (a + a.T)
    return OperatorMatrix(grid, a, symmetrize)


def eig_low(bp: BreatherParams, t: float, grid: Grid, count: int = 6,
            matrix: OperatorMatrix | None = None):
    """Lowest ``count`` eigenpairs of the symmetrized matrix, ascending.

    Eigenfields are normalized to unit discrete L2 norm and signed so that
    their largest sample is positive.
    """
    _require_regime(bp)
    if count < 1:
        raise InvalidArgumentError("count must be positive")
    if matrix is None:
        matrix = assemble_matrix(bp, t, grid)
    try:
        w, v = sla.eigh(matrix.entries, subset_by_index=[0, count - 1])
    except (sla.LinAlgError, ValueError) as exc:
        raise InternalConsistencyError(f"eigensolver failed: {exc}") from exc
    out = []
    for lam, vec in zip(w, v.T):
        vec = vec / np.sqrt(np.sum(vec**2) * grid.dx)
        if vec[np.argmax(np.abs(vec))] < 0:
            vec = -vec
        out.append((float(lam), RealField(grid, vec)))
    return out


# ---------------------------------------------------------------------------
# coercivity


def _orthonormal(fields) -> list:
    basis = []
    for f in fields:
        v = f.values.copy()
        for b in basis:
            v -= (np.sum(v * b) * f.grid.dx) * b
        nrm = np.sqrt(np.sum(v**2) * f.grid.dx)
        if nrm > 0:
            basis.append(v / nrm)
    return basis


def coercivity_probe(bp: BreatherParams, t: float, grid: Grid, trials: int = 100, *,
                     negative_field: RealField | None = None, seed: int = 0,
                     project: bool = True, max_resample: int = 10) -> dict:
    """Minimum of ``Q[z] / ||z||_{H^2}^2`` over random decaying fields.

    With ``project`` each field is made L2-orthogonal to the negative
    eigenfield and to ``B_1, B_2``.  Without it, the negative eigenfield is
    itself the first trial, so the indefinite direction is always sampled.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be positive")
    if negative_field is None:
        negative_field = eig_low(bp, t, grid, 1)[0][1]
    rng = np.random.default_rng(seed)
    basis = _orthonormal([negative_field, *kernel_directions(bp, t, grid)]) if project else []
    ratios = []
    resampled = 0
    for j in range(trials):
        if not project and j == 0:
            z = negative_field
        else:
            for _ in range(max_resample + 1):
                z = random_decaying_field(grid, rng)
                v = z.values.copy()
                for b in basis:
                    v -= (np.sum(v * b) * grid.dx) * b
                if np.sqrt(np.sum(v**2) * grid.dx) > 1e-8 * z.l2():
                    break
                resampled += 1
            else:
                raise InternalConsistencyError("projection keeps degenerating; cannot sample")
            z = RealField(grid, v)
        ratios.append(quadratic_form(bp, t, z) / sobolev_norm(z, 2) ** 2)
    return {"min_ratio": float(min(ratios)), "trials": trials, "resampled": resampled,
            "projected": project}


# ---------------------------------------------------------------------------
# Wronskian


def wronskian_closed_form(bp: BreatherParams, t: float, x, printed: bool = True) -> np.ndarray:
    """Closed form of ``det W[B_1, B_2] = B_1 (B_2)_x - B_2 (B_1)_x``.

    ``printed=True`` gives the formula as it is usually tabulated.  It
    disagrees with the determinant computed from ``B``: the overall sign is
    reversed and two denominators carry ``alpha^2 - mu^2`` where
    ``alpha^2 - 2 mu^2`` fits.  ``printed=False`` gives the corrected form,
    which matches to finite-difference accuracy.

    Numerator and ``D^2`` are both divided by ``cosh(beta y2)^4``.
    """
    from .exact import _fg

    a, b, mu = bp.alpha, bp.beta, bp.mu
    s2 = a * a + b * b
    d = bp.discriminant
    p1 = s2**2 - 8 * mu**2 * (a * a - mu**2)
    p2 = s2**2 - 8 * mu**2 * (a * a - 2 * mu**2)
    q = p1 if printed else p2
    x = np.asarray(x, dtype=float)
    y1 = x + bp.delta5 * t + bp.x1
    by = b * (x + bp.gamma5 * t + bp.x2)
    sech2 = 1.0 / np.cosh(np.clip(by, -300, 300)) ** 2
    D = _fg(bp, t, x, scaled=True).D
    sinh2 = 2 * np.tanh(by) * sech2
    cosh2 = (2 - sech2) * sech2
    bracket = (sinh2 + 8 * b * b * mu**2 * cosh2 / q
               - b * d * (s2**2 - 4 * mu**2 * (a * a - b * b)) * np.sin(2 * a * y1) * sech2**2 / (a * s2 * q)
               + 8 * b * b * mu**2 * d * np.cos(2 * a * y1) * sech2**2 / (s2 * p2))
    sign = 1.0 if printed else -1.0
    return sign * 2 * b**3 * s2**2 * p2 / (d**3 * D**2) * bracket


def wronskian_check(bp: BreatherParams, t: float, grid: Grid) -> dict:
    """Compare ``B_1 (B_2)_x - B_2 (B_1)_x`` with the closed forms.

    ``sup_mismatch`` refers to the tabulated formula and
    ``corrected_sup_mismatch`` to the corrected one; both are normalized by
    the sup of the numerical determinant.  ``best_multiple`` is the
    least-squares factor between the tabulated form and the numerical one.
    """
    _require_regime(bp)
    b1, b2 = kernel_directions(bp, t, grid)
    num = b1.values * derivative_values(b2.values, grid, 1) - b2.values * derivative_values(b1.values, grid, 1)
    scale = np.max(np.abs(num))
    printed = wronskian_closed_form(bp, t, grid.x, printed=True)
    corrected = wronskian_closed_form(bp, t, grid.x, printed=False)
    best = float(np.sum(num * printed) / np.sum(printed * printed))
    return {"sup_mismatch": float(np.max(np.abs(num - printed)) / scale),
            "corrected_sup_mismatch": float(np.max(np.abs(num - corrected)) / scale),
            "best_multiple": best,
            "numeric_sup": float(scale)}


def far_field_residual(bp: BreatherParams, t: float, grid: Grid, offset: float = 24.0) -> float:
    """``||L z - L_0 z|| / ||L_0 z||`` for a Gaussian bump ``offset / beta`` to the
    right of the breather centre, where ``B`` is negligible."""
    b = abs(bp.beta)
    centre = -(bp.gamma5 * t + bp.x2) + offset / b
    if centre + 8 / b > grid.half_length:
        raise InvalidArgumentError("grid too short for the far-field probe")
    z = RealField(grid, np.exp(-0.5 * (b * (grid.x - centre)) ** 2))
    ref = apply_L0(bp, z)
    return (apply_L(bp, t, z) - ref).l2() / ref.l2()


# ---------------------------------------------------------------------------
# report


def spectrum_report(bp: BreatherParams, t: float, grid: Grid, *, trials: int = 100,
                    seed: int = 0, count: int = 6, tol: float = 1e-4,
                    kernel_tol: float = 1e-5) -> dict:
    """Every spectral check at one parameter point, as a JSON-ready dict."""
    targets = closed_form_targets(bp)
    da = param_derivative(bp, t, grid, "alpha")
    db = param_derivative(bp, t, grid, "beta")
    b = RealField(grid, breather_x_derivatives(bp, t, grid)[0])
    scale = 8 * bp.alpha * bp.beta * (bp.alpha**2 + bp.beta**2)
    b0 = (bp.alpha * db + bp.beta * da) * (1.0 / scale)

    def cmp(closed, numeric):
        rel = abs(numeric - closed) / abs(closed)
        return {"closed": closed, "numeric": numeric, "rel_err": rel}

    qa = cmp(targets.qf_alpha, quadratic_form(bp, t, da))
    qb = cmp(targets.qf_beta, quadratic_form(bp, t, db))
    bi = cmp(targets.b0_inner, inner_l2(b0, b))
    lb0 = (apply_L(bp, t, b0) + b).l2() / b.l2()

    mat = assemble_matrix(bp, t, grid)
    pairs = eig_low(bp, t, grid, count, matrix=mat)
    eigs = [lam for lam, _ in pairs]
    low = [lam for lam in eigs if lam < targets.spectrum_edge / 2]
    negative = [lam for lam in low if lam < -kernel_tol]
    near_zero = [lam for lam in low if abs(lam) <= kernel_tol]
    kres = kernel_residuals(bp, t, grid)
    kres_printed = kernel_residuals(bp, t, grid, "printed")
    coer = coercivity_probe(bp, t, grid, trials, negative_field=pairs[0][1], seed=seed)
    wr = wronskian_check(bp, t, grid)
    ff = far_field_residual(bp, t, grid)

    checks = {
        "signs": targets.signs_ok(),
        "qf_alpha": qa["rel_err"] < tol,
        "qf_beta": qb["rel_err"] < tol,
        "b0_inner": bi["rel_err"] < tol,
        "b0_equation": lb0 < tol,
        "negative_count": len(negative) == 1,
        "kernel_eigenvalues": len(near_zero) >= 2,
        "kernel_residuals": max(kres) < kernel_tol,
        "coercivity": coer["min_ratio"] > 0,
        "wronskian": wr["sup_mismatch"] < tol,
        "far_field": ff < 1e-8,
    }
    return {
        "params": bp.as_dict(),
        "t": t,
        "grid": {"L": grid.half_length, "n": grid.n},
        "negative_count": len(negative),
        "lambda0_sq": -negative[0] if negative else None,
        "eigenvalues": eigs,
        "kernel_residuals": list(kres),
        "kernel_residuals_printed": list(kres_printed),
        "qf_alpha": qa,
        "qf_beta": qb,
        "b0_inner": bi,
        "b0_equation_residual": lb0,
        "wronskian_sup_mismatch": wr["sup_mismatch"],
        "wronskian_corrected_sup_mismatch": wr["corrected_sup_mismatch"],
        "far_field_residual": ff,
        "wronskian_best_multiple": wr["best_multiple"],
        "coercivity_min_ratio": coer["min_ratio"],
        "coercivity_constraint_note": ("B_{-1} is not defined in the source; the eigenfield of "
                                       "the negative eigenvalue is used in its place"),
        "checks": checks,
        "pass": all(checks.values()),
    }


def write_spectrum_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
