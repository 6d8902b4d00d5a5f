import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import torusgibbs as tg
from torusgibbs.spectral import (FourierField, GridResolutionError, Lattice,
                                 ProjectionSpec, analyze, analyze_batch,
                                 coef_from_coords, coords_from_coef,
                                 dyadic_interval, field_coords,
                                 field_from_coords, hermitianize, project,
                                 projection_multiplier, sobolev_norm,
                                 synthesize, synthesize_batch)


def random_field(lattice, seed, reality=False, zero_mode=True):
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal(lattice.shape) + 1j * rng.standard_normal(lattice.shape)
    if reality:
        coef = hermitianize(coef)
    f = FourierField(lattice, coef, reality, zero_mode=True)
    if not zero_mode:
        f.coef[lattice.zero_index()] = 0.0
        f.zero_mode = False
    return f


# -- transforms --------------------------------------------------------------

def test_single_mode_synthesis_and_roundtrip():
    lat = Lattice(1, 8, 2)
    f = FourierField.from_modes(lat, {1: 1.0})
    grid = synthesize(f)
    theta = 2 * np.pi * np.arange(grid.grid_size) / grid.grid_size
    assert np.max(np.abs(grid.values - np.exp(1j * theta))) < 1e-12
    back = analyze(grid)
    assert np.max(np.abs(back.coef - f.coef)) < 1e-12


def test_zero_field_roundtrip():
    lat = Lattice(1, 4)
    f = FourierField.zeros(lat)
    assert np.all(synthesize(f).values == 0)
    assert np.all(analyze(synthesize(f)).coef == 0)


def test_roundtrip_against_slow_dft_oracle():
    # direct O(M^2) summation at n = 4
    lat = Lattice(1, 4, 2)
    f = random_field(lat, 0)
    grid = synthesize(f)
    m = grid.grid_size
    theta = 2 * np.pi * np.arange(m) / m
    slow = np.zeros(m, dtype=complex)
    for k in range(-4, 5):
        slow += f.coef[k + 4] * np.exp(1j * k * theta)
    assert np.max(np.abs(grid.values - slow)) < 1e-12
    slow_coef = np.array([np.mean(grid.values * np.exp(-1j * k * theta))
                          for k in range(-4, 5)])
    assert np.max(np.abs(slow_coef - f.coef)) < 1e-12


def test_roundtrip_random_n8():
    lat = Lattice(1, 8, 2)
    f = random_field(lat, 1)
    back = analyze(synthesize(f))
    assert np.max(np.abs(back.coef - f.coef)) < 1e-12


def test_parseval_identity():
    for dim in (1, 2):
        lat = Lattice(dim, 5, 2)
        f = random_field(lat, dim)
        grid = synthesize(f)
        mean_sq = float(np.mean(np.abs(grid.values) ** 2))
        assert abs(mean_sq - f.mass()) < 1e-12 * max(1.0, f.mass())


def test_transform_grid_too_small():
    lat = Lattice(1, 8)
    vals = np.zeros(5, dtype=complex)
    with pytest.raises(GridResolutionError):
        analyze_batch(vals, lat)


def test_hermitian_symmetry_preserved():
    lat = Lattice(1, 6, 2)
    f = random_field(lat, 3, reality=True)
    f.check()
    g = analyze(synthesize(f), reality=True)
    g.check()
    p = project(f, ProjectionSpec.dirichlet(3))
    p.check()


# -- projections -------------------------------------------------------------

def test_dirichlet_keeps_low_modes_only():
    lat = Lattice(1, 8)
    f = FourierField.from_modes(lat, {1: 1.0, 3: 2.0})
    out = project(f, ProjectionSpec.dirichlet(2))
    assert out.coef[lat.n + 1] == 1.0
    assert out.coef[lat.n + 3] == 0.0


def test_dyadic_block_definition():
    assert list(dyadic_interval(2)) == [2, 3]
    assert list(dyadic_interval(0)) == [0]
    assert list(dyadic_interval(-2)) == [-3, -2]
    lat = Lattice(1, 8)
    f = FourierField(lat, np.ones(lat.shape, dtype=complex))
    out = project(f, ProjectionSpec.dyadic_block(2))
    kept = {int(k) for k in lat.axis_modes()[np.abs(out.coef) > 0]}
    assert kept == {2, 3}


def test_vallee_poussin_reproduces_block_fields():
    # K_J * P_J u = P_J u for random u, J = 3 (block {4..7})
    lat = Lattice(1, 16)
    u = random_field(lat, 5)
    pj = project(u, ProjectionSpec.dyadic_block(3))
    kj = projection_multiplier(ProjectionSpec.vallee_poussin(3), lat)
    reproduced = kj * pj.coef
    assert np.max(np.abs(reproduced - pj.coef)) < 1e-14
    # multiplier vanishes outside the triple block
    modes = lat.axis_modes()
    outside = (np.abs(modes) < 2) | (np.abs(modes) > 15)
    assert np.max(np.abs(kj[outside & (modes >= 0)])) == 0.0


@settings(max_examples=25, deadline=None)
@given(m=st.integers(min_value=1, max_value=8), j=st.integers(min_value=1, max_value=3))
def test_projection_idempotent(m, j):
    lat = Lattice(1, 8)
    u = random_field(lat, 7)
    for spec in (ProjectionSpec.dirichlet(m), ProjectionSpec.dyadic_block(j)):
        once = project(u, spec)
        twice = project(once, spec)
        assert np.array_equal(once.coef, twice.coef)


def test_dirichlet_contraction_in_sobolev_norms():
    lat = Lattice(1, 12)
    u = random_field(lat, 11)
    p = project(u, ProjectionSpec.dirichlet(5))
    for s in (-0.7, 0.0, 1.0, 1.7):
        assert sobolev_norm(p, s) <= sobolev_norm(u, s) + 1e-13


# -- norms and integrals -----------------------------------------------------

def test_sobolev_norm_examples():
    lat = Lattice(1, 4)
    assert sobolev_norm(FourierField.from_modes(lat, {1: 1.0}), 1.0) == pytest.approx(1.0)
    assert sobolev_norm(FourierField.from_modes(lat, {2: 1.0}), -1.0) == pytest.approx(0.5)
    assert sobolev_norm(FourierField.from_modes(lat, {0: 2.0}), 0.7) == pytest.approx(2.0)


def test_sobolev_loop_moment_matches_coefficient_variances():
    # E ||u||_{H^0.4}^2 = sum_{j != 0} 2 |j|^{0.8} / j^2 over the lattice
    from torusgibbs.sampling import GaussianReference
    lat = Lattice(1, 16)
    ref = GaussianReference(lat, 0.0, "complex")
    rng = np.random.default_rng(13)
    coefs = ref.sample_batch(rng, 4000)
    w = tg.spectral.sobolev_weights(lat, 0.4)
    vals = np.sum(np.abs(coefs) ** 2 * w, axis=1)
    j = np.arange(1, 17)
    analytic = float(np.sum(2 * 2.0 * j ** 0.8 / j ** 2))
    se = np.std(vals, ddof=1) / np.sqrt(len(vals))
    assert abs(np.mean(vals) - analytic) < 3 * se


def test_lp_integral_examples():
    lat = Lattice(1, 8, 2)
    e1 = FourierField.from_modes(lat, {1: 1.0})
    assert tg.lp_integral(e1, 4) == pytest.approx(1.0, abs=1e-12)
    two_cos = FourierField.from_modes(lat, {1: 1.0, -1: 1.0}, reality=True)
    assert tg.lp_integral(two_cos, 4) == pytest.approx(6.0, abs=1e-10)
    assert tg.lp_integral(FourierField.zeros(lat), 6) == 0.0
    # p = 2 agrees with the squared l2 norm
    u = random_field(lat, 17)
    assert tg.lp_integral(u, 2) == pytest.approx(u.mass(), rel=1e-12)


def test_lp_integral_odd_p_rules():
    lat = Lattice(1, 4, 2)
    u = random_field(lat, 19)
    with pytest.raises(ValueError):
        tg.lp_integral(u, 3)
    r = random_field(lat, 23, reality=True)
    # signed cubic integral: exact trig-polynomial quadrature
    grid = synthesize_batch(r.coef, lat, 4)
    assert tg.lp_integral(r, 3) == pytest.approx(float(np.mean(np.real(grid) ** 3)),
                                                 rel=1e-12, abs=1e-13)


def test_convolve_examples():
    lat = Lattice(1, 4)
    f = FourierField.from_modes(lat, {1: 2.0})
    g = FourierField.from_modes(lat, {1: 3.0})
    assert tg.convolve(f, g).coef[lat.n + 1] == pytest.approx(6.0)
    ident = FourierField(lat, np.ones(lat.shape, dtype=complex))
    u = random_field(lat, 29)
    assert np.allclose(tg.convolve(u, ident).coef, u.coef)


def test_intensity_times_potential_zero_mode_only():
    # |u|^2 * V for u = e^{i theta}, V = cos 2 theta: |u|^2 = 1 so only the
    # m = 0 mode of V survives, which is 0
    lat = Lattice(1, 4, 2)
    u = FourierField.from_modes(lat, {1: 1.0})
    from torusgibbs.hamiltonians import intensity_coefficients
    w = intensity_coefficients(u)
    v = FourierField.from_modes(lat, {2: 0.5, -2: 0.5}, reality=True)
    conv = w * v.coef
    assert np.max(np.abs(conv)) < 1e-14


def test_grid_product_matches_coefficient_convolution():
    # pointwise multiplication on a resolved grid <-> convolution of
    # coefficient sequences (transform-pair consistency)
    lat = Lattice(1, 6, 2)
    f = random_field(lat, 31)
    g = random_field(lat, 37)
    big = Lattice(1, 12, 2)
    fv = synthesize_batch(f.coef, lat, 4)
    gv = synthesize_batch(g.coef, lat, 4)
    prod_coef = analyze_batch(fv * gv, big)
    direct = np.convolve(f.coef, g.coef)
    assert np.max(np.abs(prod_coef - direct)) < 1e-10


# -- coordinates -------------------------------------------------------------

@pytest.mark.parametrize("reality,zero_mode", [(False, True), (False, False),
                                               (True, True), (True, False)])
def test_coordinate_roundtrip(reality, zero_mode):
    lat = Lattice(1, 5)
    f = random_field(lat, 41, reality=reality, zero_mode=zero_mode)
    x = field_coords(f)
    g = field_from_coords(x, lat, reality, zero_mode)
    assert np.max(np.abs(g.coef - f.coef)) < 1e-13
    # orthonormality: the coordinate norm is the L^2 mass
    assert np.dot(x, x) == pytest.approx(f.mass(), rel=1e-12, abs=1e-13)


def test_coordinate_roundtrip_2d():
    lat = Lattice(2, 3)
    f = random_field(lat, 43, zero_mode=False)
    x = field_coords(f)
    g = field_from_coords(x, lat, False, False)
    assert np.max(np.abs(g.coef - f.coef)) < 1e-13
