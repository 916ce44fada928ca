import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gardner5.core_field import Grid, derivative_values, make_grid
from gardner5.errors import (
    DomainTooSmallError, InternalConsistencyError, InvalidArgumentError, RegimeError,
)
from gardner5.exact import (
    IDENTITY_KINDS, BreatherParams, SolitonParams, bt_numerator, breather_eval,
    breather_fg, breather_grid, breather_mass_closed, breather_tilde,
    breather_tilde_t, breather_x_derivatives, track_branch, identity_residual, param_derivative,
    printed_f3, soliton_eval, soliton_residuals, _fg,
)
from gardner5.functionals import mass

# Values below were computed with mpmath at 30 digits from the arctan form
# 2*atan2(G, F) (numerical differentiation in x and t), independently of the
# derivative tables used by the package.
B_AT_0 = 2.11704593134197861286
B_AT_07 = 0.21948843010799690488
BT_AT_07 = -3.78674278026268903353
B_T05_AT_M13 = 0.84308471883743512620
F1_AT_0 = 0.33129457822453963268
MASS_CLOSED = 2.37901438060338157817

REF = BreatherParams(1.0, 1.0, 0.3)


def lattice():
    for a in (0.5, 1.0, 2.0):
        for b in (0.5, 1.0, 2.0):
            for frac in (0.25, 0.5, 0.75):
                yield BreatherParams(a, b, frac * np.hypot(a, b) / 2)


# -- soliton --------------------------------------------------------------

def test_soliton_values():
    g = make_grid(40, 2048)
    q = soliton_eval(SolitonParams(0.5, 1.0), 0.0, g)
    assert q.values[g.n // 2] == pytest.approx(1 / (1 + np.sqrt(2)), rel=1e-15)
    q = soliton_eval(SolitonParams(1e-8, 1.0), 0.0, g)
    assert q.values[g.n // 2] == pytest.approx(1 - 2e-8, rel=1e-12)


def test_soliton_speed_and_peak():
    p = SolitonParams(0.5, 1.0)
    assert p.speed == 3.5
    g = make_grid(40, 4096)
    q = soliton_eval(p, 1.0, g).values
    assert g.x[np.argmax(q)] == pytest.approx(3.5, abs=g.dx)


def test_soliton_profile_no_overflow():
    g = make_grid(4000, 1024)
    assert np.all(np.isfinite(soliton_eval(SolitonParams(0.1, 9.0), 0.0, g).values))


@pytest.mark.parametrize("mu", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("c", [0.1, 0.5, 1.0])
def test_soliton_odes(mu, c):
    # wide box, modest n: extra bandwidth only amplifies rounding in Q_xxxx
    r = soliton_residuals(SolitonParams(mu, c), make_grid(60 / np.sqrt(c), 1024))
    assert r["ode2_sup"] < 1e-8
    assert r["ode4_sup"] < 1e-8


def test_soliton_reference_and_refinement():
    p = SolitonParams(0.5, 1.0)
    r1 = soliton_residuals(p, make_grid(40, 2048))
    assert r1["ode2_sup"] < 1e-9 and r1["ode4_sup"] < 1e-8
    # once resolved, doubling n leaves both residuals at the rounding plateau
    ra = soliton_residuals(p, make_grid(60, 512))
    rb = soliton_residuals(p, make_grid(60, 1024))
    assert rb["ode2_sup"] < 1e-12 and rb["ode4_sup"] < 1e-10
    assert rb["ode2_sup"] <= 10 * ra["ode2_sup"] + 1e-13


def test_soliton_domain_check():
    with pytest.raises(DomainTooSmallError):
        soliton_residuals(SolitonParams(0.5, 1.0), make_grid(5, 256))


@pytest.mark.parametrize("kw", [dict(mu=0.5, c=0.0), dict(mu=0.5, c=-1.0), dict(mu=0.0, c=1.0)])
def test_soliton_params_validated(kw):
    with pytest.raises(InvalidArgumentError):
        SolitonParams(**kw)


# -- breather parameters and tables ----------------------------------------

def test_breather_params_validation():
    with pytest.raises(InvalidArgumentError):
        BreatherParams(0.0, 1.0, 0.3)
    with pytest.raises(RegimeError):
        BreatherParams(1.0, 1.0, 0.8)
    p = BreatherParams(1.0, 2.0, 0.3)
    assert p.discriminant == pytest.approx(5 - 0.36)
    assert p.in_stability_regime
    assert not BreatherParams(-1.0, 2.0, 0.3).in_stability_regime


def test_speeds_and_constants():
    p = BreatherParams(1.0, 2.0, 0.5)
    assert p.delta5 == -1 + 40 - 80 + 10 * (1 - 12) * 0.25
    assert p.gamma5 == -16 + 40 - 5 + 10 * (3 - 4) * 0.25
    assert p.A1 == 25.0
    assert p.A2 == 2 * (1 - 4 - 1.25)


def test_fg_at_origin():
    p = REF
    fg = breather_fg(p, 0.0, 0.0)
    r = np.sqrt(2) * np.sqrt(p.discriminant)
    assert fg.f == pytest.approx(1 - 2 * 0.3 / r, rel=1e-15)
    assert fg.g == pytest.approx(-2 * 0.3 / p.discriminant, rel=1e-15)
    assert fg.f1 == pytest.approx(F1_AT_0, rel=1e-14)
    assert fg.D == pytest.approx(fg.f**2 + fg.g**2)


def test_fg_table_against_finite_differences():
    p = BreatherParams(1.3, 0.7, 0.4, x1=0.2, x2=-0.5)
    x0, t0, h = 0.37, 0.11, 1e-5

    def at(t, x):
        return breather_fg(p, t, x)

    fg = at(t0, x0)
    pairs = [("f1", "f"), ("f3", "f1"), ("f4", "f3"), ("g1", "g"), ("g3", "g1"), ("g4", "g3")]
    for name, base in pairs:
        fd = (getattr(at(t0, x0 + h), base) - getattr(at(t0, x0 - h), base)) / (2 * h)
        assert getattr(fg, name) == pytest.approx(fd, rel=1e-8, abs=1e-9), name
    for name, base in [("f2", "f"), ("g2", "g")]:
        fd = (getattr(at(t0 + h, x0), base) - getattr(at(t0 - h, x0), base)) / (2 * h)
        assert getattr(fg, name) == pytest.approx(fd, rel=1e-7, abs=1e-8), name


def test_tabulated_f3_sign_is_inconsistent():
    # the commonly tabulated f_xx has the trigonometric sign reversed; it
    # disagrees with a finite difference of f_x wherever mu > 0
    p = REF
    x0, h = 0.37, 1e-5
    fd = (breather_fg(p, 0, x0 + h).f1 - breather_fg(p, 0, x0 - h).f1) / (2 * h)
    assert breather_fg(p, 0, x0).f3 == pytest.approx(fd, rel=1e-8)
    assert abs(printed_f3(p, 0, x0) - fd) > 1e-2


# -- breather fields --------------------------------------------------------

def test_breather_point_values():
    g = make_grid(40, 4096)
    b = breather_eval(REF, 0.0, g).values
    assert b[g.n // 2] == pytest.approx(B_AT_0, rel=1e-13)
    fg = breather_fg(REF, 0.0, 0.7)
    assert 2 * (fg.g1 * fg.f - fg.f1 * fg.g) / fg.D == pytest.approx(B_AT_07, rel=1e-13)
    assert 2 * (fg.g2 * fg.f - fg.f2 * fg.g) / fg.D == pytest.approx(BT_AT_07, rel=1e-13)
    fg = breather_fg(REF, 0.5, -1.3)
    assert 2 * (fg.g1 * fg.f - fg.f1 * fg.g) / fg.D == pytest.approx(B_T05_AT_M13, rel=1e-13)


def test_breather_bounded_and_decaying():
    for p in lattice():
        g = breather_grid(p)
        b = breather_eval(p, 0.0, g).values
        assert np.all(np.isfinite(b))
        assert max(abs(b[0]), abs(b[-1])) < 1e-12 * np.max(np.abs(b))


def test_tilde_derivative_is_breather():
    g = make_grid(60, 4096)
    tl = breather_tilde(REF, 0.0, g).values
    b = breather_eval(REF, 0.0, g).values
    # tilde B jumps by a constant across the box; remove a smooth step before
    # differentiating spectrally and add back its derivative
    jump = tl[-1] - tl[0] + (tl[1] - tl[0]) * 0  # endpoints are flat
    w = g.half_length / 16
    step = 0.5 * jump * (1 + np.tanh(g.x / w))
    dstep = 0.5 * jump / w / np.cosh(g.x / w) ** 2
    d = derivative_values(tl - step, g, 1) + dstep
    assert np.max(np.abs(d - b)) < 1e-8
    assert abs(tl[1] - tl[0]) < 1e-10 and abs(tl[-1] - tl[-2]) < 1e-10


def test_tilde_t_against_time_differences():
    g = make_grid(60, 4096)
    h = 1e-4
    fd = (breather_tilde(REF, h, g).values - breather_tilde(REF, -h, g).values) / (2 * h)
    assert np.max(np.abs(fd - breather_tilde_t(REF, 0.0, g).values)) < 1e-6


def test_tilde_branch_failure():
    # an angle sequence advancing by 2 rad per node cannot be tracked
    with pytest.raises(InternalConsistencyError, match="branch"):
        track_branch(np.angle(np.exp(2j * np.arange(10))))
    smooth = track_branch(np.angle(np.exp(0.3j * np.arange(40))))
    assert np.allclose(smooth, 0.6 * np.arange(40))


def test_closed_form_space_derivatives():
    g = make_grid(60, 4096)
    b, bx, bxx = breather_x_derivatives(REF, 0.3, g)
    assert np.max(np.abs(bx - derivative_values(b, g, 1))) < 1e-10
    assert np.max(np.abs(bxx - derivative_values(b, g, 2))) < 1e-9


def test_m2_reproduces_time_derivative():
    g = make_grid(60, 4096)
    fg = _fg(REF, 0.2, g.x, scaled=True)
    bt = breather_tilde_t(REF, 0.2, g).values
    assert np.max(np.abs(bt_numerator(fg, REF) / fg.D**3 - bt)) < 1e-12


# -- mass ---------------------------------------------------------------------

def test_mass_closed_form():
    assert breather_mass_closed(REF) == pytest.approx(MASS_CLOSED, rel=1e-15)
    assert breather_mass_closed(BreatherParams(1.0, 1.5, 1e-10)) == pytest.approx(3.0, rel=1e-9)


def test_mass_quadrature_matches():
    g = make_grid(60, 4096)
    q = mass(breather_eval(REF, 0.0, g))
    assert abs(q - MASS_CLOSED) / MASS_CLOSED < 1e-8


def test_mass_monotone_in_beta():
    betas = np.linspace(0.5, 2.0, 16)
    m = [breather_mass_closed(BreatherParams(1.0, b, 0.3)) for b in betas]
    assert np.all(np.diff(m) > 0)


# -- parameter derivatives -------------------------------------------------

def test_translation_derivatives_sum_to_x_derivative():
    g = make_grid(60, 4096)
    b1 = param_derivative(REF, 0.0, g, "x1").values
    b2 = param_derivative(REF, 0.0, g, "x2").values
    bx = derivative_values(breather_eval(REF, 0.0, g).values, g, 1)
    assert np.max(np.abs(b1 + b2 - bx)) < 1e-6


def test_alpha_derivative_step_halving():
    g = make_grid(60, 4096)
    d1 = param_derivative(REF, 0.0, g, "alpha", h=1e-3).values
    d2 = param_derivative(REF, 0.0, g, "alpha", h=5e-4).values
    assert np.max(np.abs(d1 - d2)) < 1e-8
    assert max(abs(d1[0]), abs(d1[-1])) < 1e-10 * np.max(np.abs(d1))


def test_x2_derivative_matches_second_order_fd():
    g = make_grid(60, 4096)
    h = 1e-4
    fd = (breather_eval(REF.replace(x2=h), 0, g).values
          - breather_eval(REF.replace(x2=-h), 0, g).values) / (2 * h)
    assert np.max(np.abs(param_derivative(REF, 0.0, g, "x2").values - fd)) < 1e-6


def test_param_derivative_near_regime_edge():
    p = BreatherParams(1.0, 1.0, 0.7071)
    g = breather_grid(p)
    with pytest.raises(InvalidArgumentError):
        param_derivative(p, 0.0, g, "mu", h=1e-3)
    with pytest.raises(InvalidArgumentError):
        param_derivative(REF, 0.0, make_grid(60, 4096), "gamma")


# -- identities ---------------------------------------------------------------

def test_reference_identities():
    g = make_grid(60, 4096)
    assert identity_residual("matsuno", REF, 0.0, g).sup < 1e-8
    for t in (0.0, 0.37, 1.0):
        gt = breather_grid(REF, t, extended=True)
        assert identity_residual("stationary", REF, t, gt).sup < 1e-7
    r = identity_residual("time_identity", REF, 0.0, g)
    assert r.sup < 1e-7
    assert identity_residual("time_identity", REF, 0.0, g, control=True).sup > 1e-2


@pytest.mark.parametrize("kind", IDENTITY_KINDS)
def test_identity_lattice(kind):
    for p in lattice():
        for t in (0.0, 0.5):
            g = breather_grid(p, t, extended=True)
            assert identity_residual(kind, p, t, g).sup < 1e-6, (p, t)
            assert identity_residual(kind, p, t, g, control=True).sup > 1e-2, (p, t)


def test_identity_report_json():
    g = breather_grid(REF, 0.0, extended=True)
    r = identity_residual("pde", REF, 0.0, g, tolerance=1e-6)
    doc = json.loads(json.dumps(r.to_json()))
    assert set(doc) == {"kind", "params", "t", "grid", "sup", "l2", "pass"}
    assert doc["pass"] is True
    assert doc["grid"] == {"L": g.half_length, "n": g.n}


def test_identity_domain_too_small():
    with pytest.raises(DomainTooSmallError):
        identity_residual("pde", REF, 0.0, make_grid(10, 512))
    with pytest.raises(InvalidArgumentError):
        identity_residual("bogus", REF, 0.0, make_grid(60, 512))


@settings(max_examples=15, deadline=None)
@given(shift=st.floats(-3, 3))
def test_translation_covariance(shift):
    # shifting both phases by a equals evaluating at x + a
    g = make_grid(50, 2048)
    p = BreatherParams(1.0, 1.0, 0.3, x1=0.1, x2=-0.2)
    shifted = breather_eval(p.replace(x1=p.x1 + shift, x2=p.x2 + shift), 0.0, g).values
    direct = breather_eval(p, 0.0, Grid(50, 2048), self_check=False)
    fg = _fg(p, 0.0, g.x + shift, scaled=True)
    assert np.max(np.abs(shifted - 2 * (fg.g1 * fg.f - fg.f1 * fg.g) / fg.D)) < 1e-12
    assert direct.grid == g
