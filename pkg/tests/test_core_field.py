import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gardner5.core_field import (
    Grid, RealField, dealiased_product, fourier_transform, inner_l2, make_grid,
    random_decaying_field, read_field_csv, sobolev_norm, spectral_derivative,
    write_field_csv, check_decay,
)
from gardner5.errors import DomainTooSmallError, InvalidArgumentError


def test_grid_spacing():
    assert make_grid(10, 16).dx == 1.25
    assert make_grid(40, 4096).dx == pytest.approx(0.01953125, abs=0)


def test_integer_wavenumbers_on_pi_box():
    g = make_grid(np.pi, 32)
    assert sorted(np.round(g.wavenumbers, 12)) == list(range(-16, 16))
    assert np.allclose(g.wavenumbers, np.round(g.wavenumbers), atol=1e-13)


@pytest.mark.parametrize("L,n", [(1.0, 15), (1.0, 8), (0.0, 16), (-2.0, 32)])
def test_grid_rejects_bad_arguments(L, n):
    with pytest.raises(InvalidArgumentError):
        make_grid(L, n)


def test_grid_invariants():
    g = make_grid(7.5, 64)
    assert g.dx * g.n == pytest.approx(2 * g.half_length, rel=1e-15)
    k = g.wavenumbers
    inner = k[(k != 0) & (np.abs(k) < g.k_max)]
    assert set(np.round(inner, 10)) == set(np.round(-inner, 10))


def test_field_is_immutable_and_validated():
    g = make_grid(1, 16)
    u = RealField(g, np.zeros(16))
    with pytest.raises(ValueError):
        u.values[0] = 1.0
    with pytest.raises(InvalidArgumentError):
        RealField(g, np.zeros(15))
    with pytest.raises(InvalidArgumentError):
        RealField(g, np.full(16, np.nan))


def test_derivative_of_sine():
    g = make_grid(np.pi, 32)
    u = RealField.from_function(g, np.sin)
    assert np.max(np.abs(spectral_derivative(u, 1).values - np.cos(g.x))) < 1e-13
    v = RealField.from_function(g, lambda x: np.sin(2 * x))
    # k^5 amplifies rounding in the upper modes: compare relative to the amplitude 32
    assert np.max(np.abs(spectral_derivative(v, 5).values - 32 * np.cos(2 * g.x))) < 32e-11


def test_second_derivative_of_gaussian():
    g = make_grid(20, 1024)
    u = RealField.from_function(g, lambda x: np.exp(-x * x))
    exact = (4 * g.x**2 - 2) * np.exp(-g.x**2)
    assert np.max(np.abs(spectral_derivative(u, 2).values - exact)) < 1e-10


@pytest.mark.parametrize("order", [0, 6, 1.5, True])
def test_derivative_order_checked(order):
    g = make_grid(np.pi, 32)
    with pytest.raises(InvalidArgumentError):
        spectral_derivative(RealField.zeros(g), order)


def test_sobolev_zero_and_gaussian():
    g = make_grid(20, 1024)
    assert sobolev_norm(RealField.zeros(g), 1.0) == 0.0
    u = RealField.from_function(g, lambda x: np.exp(-x * x / 2))
    # int exp(-x^2) = sqrt(pi)
    assert sobolev_norm(u, 0) == pytest.approx(np.pi**0.25, rel=1e-13)
    lhs = sobolev_norm(u, 1) ** 2
    rhs = sobolev_norm(u, 0) ** 2 + sobolev_norm(spectral_derivative(u, 1), 0) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-10)
    with pytest.raises(InvalidArgumentError):
        sobolev_norm(u, -1)


def test_transform_matches_continuum_gaussian():
    # continuum transform of exp(-x^2/2) is sqrt(2 pi) exp(-k^2/2)
    g = make_grid(20, 512)
    u = RealField.from_function(g, lambda x: np.exp(-x * x / 2))
    uh = fourier_transform(u)
    assert np.max(np.abs(uh - np.sqrt(2 * np.pi) * np.exp(-g.wavenumbers**2 / 2))) < 1e-12


def test_inner_products():
    g = make_grid(np.pi, 64)
    s = RealField.from_function(g, np.sin)
    c = RealField.from_function(g, np.cos)
    assert inner_l2(s, RealField.zeros(g)) == 0.0
    assert abs(inner_l2(s, c)) < 1e-14
    g2 = make_grid(20, 1024)
    e = RealField.from_function(g2, lambda x: np.exp(-x * x))
    assert inner_l2(e, e) == pytest.approx(np.sqrt(np.pi / 2), rel=1e-13)
    with pytest.raises(InvalidArgumentError):
        inner_l2(s, e)


def test_dealiased_identity_is_bitwise():
    g = make_grid(5, 64)
    u = random_decaying_field(g, np.random.default_rng(1), width=1.0)
    one = RealField(g, np.ones(64))
    assert np.array_equal(dealiased_product([one, u]).values, u.values)


def test_dealiased_square_of_sine():
    g = make_grid(np.pi, 32)
    s = RealField.from_function(g, np.sin)
    p = dealiased_product([s, s])
    assert np.max(np.abs(p.values - (1 - np.cos(2 * g.x)) / 2)) < 1e-15
    spec = np.abs(np.fft.rfft(p.values))
    spec[[0, 2]] = 0
    assert spec.max() < 1e-13


def test_dealiased_cos_fifth_power():
    # cos^5 = (10 cos x + 5 cos 3x + cos 5x)/16 with x -> 3x
    g = make_grid(np.pi, 64)
    c = RealField.from_function(g, lambda x: np.cos(3 * x))
    p = dealiased_product([c] * 5)
    j = np.arange(33)
    cos_coeffs = 2 / 64 * np.cos(np.outer(j, g.x)) @ p.values
    sin_coeffs = 2 / 64 * np.sin(np.outer(j, g.x)) @ p.values
    expect = np.zeros(33)
    expect[[3, 9, 15]] = [10 / 16, 5 / 16, 1 / 16]
    assert np.max(np.abs(cos_coeffs - expect)) < 1e-13
    assert np.max(np.abs(sin_coeffs)) < 1e-13


def test_dealiased_product_errors():
    g = make_grid(np.pi, 32)
    u = RealField.zeros(g)
    with pytest.raises(InvalidArgumentError):
        dealiased_product([u])
    with pytest.raises(InvalidArgumentError):
        dealiased_product([u] * 6)
    with pytest.raises(InvalidArgumentError):
        dealiased_product([u, RealField.zeros(make_grid(1, 32))])


def test_dealiased_matches_naive_for_bandlimited():
    g = make_grid(np.pi, 96)
    x = g.x
    u = RealField(g, np.cos(3 * x) + 0.5 * np.sin(7 * x))
    v = RealField(g, np.sin(5 * x) - 0.2 * np.cos(x))
    assert np.max(np.abs(dealiased_product([u, v]).values - u.values * v.values)) < 1e-12


def test_aliasing_is_removed():
    # cos(20x)^2 on n=32 aliases on the naive grid; the dealiased product keeps only the mean
    g = make_grid(np.pi, 32)
    c = RealField.from_function(g, lambda x: np.cos(10 * x))
    p = dealiased_product([c, c])
    assert np.max(np.abs(p.values - 0.5)) < 1e-14


def test_check_decay():
    g = make_grid(10, 256)
    check_decay(np.exp(-g.x**2))
    with pytest.raises(DomainTooSmallError):
        check_decay(np.exp(-np.abs(g.x)))


def test_csv_roundtrip(tmp_path):
    g = make_grid(3.5, 32)
    u = random_decaying_field(g, np.random.default_rng(0), width=1.0)
    path = write_field_csv(u, tmp_path / "u.csv")
    v = read_field_csv(path)
    assert v.grid == g
    assert np.array_equal(u.values, v.values)
    assert path.read_text().splitlines()[0] == "x,value"


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.sampled_from([64, 128, 256]), L=st.floats(5, 30))
def test_parseval_and_commuting_derivatives(seed, n, L):
    g = make_grid(L, n)
    u = random_decaying_field(g, np.random.default_rng(seed), width=L / 8)
    assert sobolev_norm(u, 0) ** 2 == pytest.approx(inner_l2(u, u), rel=1e-12)
    d2 = spectral_derivative(u, 2).values
    dd = spectral_derivative(spectral_derivative(u, 1), 1).values
    assert np.max(np.abs(dd - d2)) <= 1e-11 * max(np.max(np.abs(d2)), 1e-300) + 1e-300


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_dealiased_agrees_with_naive_on_low_modes(seed):
    g = make_grid(np.pi, 192)
    rng = np.random.default_rng(seed)
    ks = np.arange(1, 192 // 12 + 1)

    def trig():
        a, b = rng.normal(size=(2, ks.size))
        return RealField(g, (a[:, None] * np.cos(ks[:, None] * g.x)
                             + b[:, None] * np.sin(ks[:, None] * g.x)).sum(0))

    u, v = trig(), trig()
    naive = u.values * v.values
    assert np.max(np.abs(dealiased_product([u, v]).values - naive)) <= 1e-12 * np.max(np.abs(naive))
