import csv
import json

import numpy as np
import pytest

from gardner5.core_field import Grid, RealField, make_grid, random_decaying_field
from gardner5.errors import InvalidArgumentError
from gardner5.exact import (
    BreatherParams,
    SolitonParams,
    breather_eval,
    breather_grid,
    breather_time_derivative,
    soliton_eval,
)
from gardner5.dynamics import (
    SimConfig,
    linear_symbol,
    nonlinear_terms,
    rhs_general,
    rhs_original,
    run,
    run_summary,
    scaling_residual,
    step,
    track_peak,
    write_diagnostics_csv,
    write_summary_json,
)
from gardner5.functionals import GardnerParams

REF = BreatherParams(1.0, 1.0, 0.3)
GP = GardnerParams(0.3)


def gaussian(grid, amp=1.0):
    return RealField.from_function(grid, lambda x: amp * np.exp(-x * x))


def test_rhs_of_zero_is_zero():
    g = make_grid(10, 128)
    assert np.all(rhs_original(RealField.zeros(g), GP).values == 0.0)


def test_rhs_matches_closed_form_time_derivative():
    g = breather_grid(REF)
    assert (g.half_length, g.n) == (34.0, 1440)
    u = breather_eval(REF, 0.0, g)
    ut = breather_time_derivative(REF, 0.0, g)
    assert np.max(np.abs(rhs_original(u, GP).values - ut.values)) < 1e-6


def test_rhs_linear_part_is_the_symbol():
    g = make_grid(10, 256)
    z = gaussian(g)
    lin = rhs_original(z, GP).values - rhs_original(z, GP, include_linear=False).values
    expect = np.fft.irfft(linear_symbol(g, 0.3) * np.fft.rfft(z.values), n=g.n)
    assert np.max(np.abs(lin - expect)) < 1e-10


def test_small_amplitude_limit_is_linear():
    # the remainder after the linear part is quadratic in the amplitude
    g = make_grid(12, 256)
    z = gaussian(g)
    lin = rhs_original(z, GP).values - rhs_original(z, GP, include_linear=False).values
    rem = [np.max(np.abs(rhs_original(eps * z, GP).values - eps * lin)) for eps in (1e-2, 5e-3)]
    assert rem[0] / rem[1] == pytest.approx(4.0, rel=0.02)


def test_general_equation_reduces_at_lambda_one():
    g = make_grid(12, 256)
    z = random_decaying_field(g, np.random.default_rng(1), width=2.0)
    a = rhs_general(z, GardnerParams(0.3, 1.0)).values
    b = rhs_original(z, GardnerParams(0.3)).values
    assert np.array_equal(a, b)


def test_named_nonlinear_groups_sum_to_rhs():
    # a resolved field: with energy at the Nyquist mode the split and the flux
    # form legitimately differ there
    g = make_grid(12, 256)
    z = RealField.from_function(g, lambda x: (1 + x) * np.exp(-x * x))
    gp = GardnerParams(0.8, 0.5)
    parts = nonlinear_terms(z, gp)
    total = parts["N2"] + parts["N3"] + parts["SN"]
    nl = -rhs_general(z, gp, include_linear=False).values
    assert np.max(np.abs(total - nl)) < 1e-10 * np.max(np.abs(nl))


def test_scaling_equivalence():
    lam = 0.5
    g = Grid(breather_grid(REF).half_length / lam, breather_grid(REF).n)
    assert scaling_residual(REF, lam, 0.3, g) < 1e-6


def test_swapped_n2_breaks_scaling():
    lam = 0.5
    base = breather_grid(REF)
    g = Grid(base.half_length / lam, base.n)
    inner = Grid(base.half_length, base.n)
    gp = GardnerParams(REF.mu, lam)
    u = RealField(g, lam * breather_eval(REF, 0.0, inner).values)
    ut = lam**6 * breather_time_derivative(REF, 0.0, inner).values
    lin = np.fft.irfft(linear_symbol(g, gp.mu_eff) * np.fft.rfft(u.values), n=g.n)
    for printed, small in ((False, True), (True, False)):
        parts = nonlinear_terms(u, gp, printed_n2=printed)
        res = np.max(np.abs(ut - lin + parts["N2"] + parts["N3"] + parts["SN"]))
        assert bool(res < 1e-6) is small, res


def test_linear_mode_exact():
    g = make_grid(4 * np.pi, 64)
    k, m = 0.5, 0.3
    u0 = RealField.from_function(g, lambda x: np.cos(k * x))
    res = run(SimConfig(GardnerParams(m), g, 0.01, 1.0, u0, linear_only=True))
    exact = np.cos(k * g.x - (k**5 - 10 * m * m * k**3))
    assert np.max(np.abs(res.final.values - exact)) < 1e-13


def test_soliton_speed():
    sp = SolitonParams(0.5, 1.0, 0.0)
    assert sp.speed == 3.5
    cfg = SimConfig(GardnerParams(0.5), Grid(40, 512), 1e-3, 1.0, sp, diag_stride=100)
    res = run(cfg)
    peaks = [r.peak_x for r in res.diagnostics]
    assert peaks[-1] - peaks[0] == pytest.approx(3.5, abs=1e-3)
    assert max(r.l2_error for r in res.diagnostics) < 1e-6


def test_soliton_error_decreases_with_dt():
    sp = SolitonParams(0.5, 1.0, 0.0)
    errs = []
    for dt in (4e-3, 2e-3, 1e-3):
        res = run(SimConfig(GardnerParams(0.5), Grid(40, 512), dt, 0.2, sp, diag_stride=10**6))
        errs.append(res.diagnostics[-1].l2_error)
    assert errs[0] > errs[1] > errs[2]


def test_breather_short_shadowing_and_drift():
    g = breather_grid(REF)
    drifts, errors = [], []
    for dt in (2e-4, 1e-4, 5e-5):
        cfg = SimConfig(GP, g, dt, 0.02, REF, diag_stride=10**6)
        summary = run_summary(cfg, run(cfg))
        drifts.append(max(summary["max_drift"].values()))
        errors.append(summary["max_error"])
    assert errors[0] > errors[1] > errors[2]
    assert drifts[0] > drifts[1] > drifts[2]
    assert errors[-1] < 1e-4


def test_track_peak():
    g = Grid(40, 512)
    sp = SolitonParams(0.5, 1.0, 0.0)
    assert abs(track_peak(soliton_eval(sp, 0.0, g))) < g.dx**2
    shifted = SolitonParams(0.5, 1.0, -2.0)
    assert track_peak(soliton_eval(shifted, 0.0, g)) == pytest.approx(2.0, abs=g.dx**2)
    with pytest.raises(InvalidArgumentError):
        track_peak(RealField.zeros(g))
    two = RealField.from_function(g, lambda x: np.exp(-(x - 5) ** 2) + np.exp(-(x + 5) ** 2))
    with pytest.raises(InvalidArgumentError):
        track_peak(two)


def test_reversibility():
    g = Grid(40, 512)
    sp = SolitonParams(0.5, 1.0, 0.0)
    cfg = SimConfig(GardnerParams(0.5), g, 1e-3, 0.1, sp)
    u0 = soliton_eval(sp, 0.0, g)
    u = u0
    for _ in range(100):
        u = step(u, cfg)
    for _ in range(100):
        u = step(u, cfg, dt=-1e-3)
    assert np.max(np.abs(u.values - u0.values)) < 1e-7


def test_preflight_rejects_unstable_dt():
    g = make_grid(20, 256)
    cfg = SimConfig(GP, g, 1e-3, 0.01, gaussian(g, 20.0))
    with pytest.raises(InvalidArgumentError, match="pre-flight"):
        run(cfg)


def test_mid_run_blowup_returns_partial_result():
    g = make_grid(20, 256)
    res = run(SimConfig(GP, g, 1e-3, 0.05, gaussian(g, 3.0)))
    assert res.failed
    assert res.t_final > 0
    assert np.all(np.isfinite(res.final.values))


def test_outputs(tmp_path):
    sp = SolitonParams(0.5, 1.0, 0.0)
    cfg = SimConfig(GardnerParams(0.5), Grid(40, 512), 1e-3, 0.01, sp, diag_stride=5)
    res = run(cfg)
    assert [r.t for r in res.diagnostics] == pytest.approx([0.0, 0.005, 0.01])
    path = write_diagnostics_csv(res.diagnostics, tmp_path / "diag.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "mass", "energy", "energy5", "hs_norm", "l2_error", "peak_x"]
    assert len(rows) == 4
    summary = run_summary(cfg, res, timing=True)
    assert set(summary) == {"config_echo", "pass_flags", "max_drift", "max_error", "runtime_seconds"}
    assert summary["pass_flags"]["finished"]
    out = json.loads(write_summary_json(summary, tmp_path / "s.json").read_text())
    assert out["config_echo"]["initial"]["kind"] == "SolitonParams"

    g = make_grid(10, 64)
    plain = run(SimConfig(GP, g, 1e-3, 0.002, gaussian(g, 0.1)))
    assert plain.diagnostics[0].l2_error is None and plain.diagnostics[0].peak_x is None
    path = write_diagnostics_csv(plain.diagnostics, tmp_path / "plain.csv")
    assert path.read_text().splitlines()[1].endswith(",,")


@pytest.mark.parametrize("kwargs", [
    dict(dt=0.0), dict(dt=-1e-3), dict(t_end=0.0), dict(dt=0.3, t_end=0.2),
    dict(dt=0.03, t_end=0.1), dict(scheme="rk4"), dict(equation="kdv"), dict(diag_stride=0),
])
def test_config_validation(kwargs):
    g = make_grid(10, 64)
    base = dict(gardner=GP, grid=g, dt=1e-3, t_end=0.01, initial=gaussian(g))
    base.update(kwargs)
    with pytest.raises(InvalidArgumentError):
        SimConfig(**base)


def test_initial_grid_mismatch():
    cfg = SimConfig(GP, make_grid(10, 64), 1e-3, 0.01, gaussian(make_grid(10, 128)))
    with pytest.raises(InvalidArgumentError):
        run(cfg)
