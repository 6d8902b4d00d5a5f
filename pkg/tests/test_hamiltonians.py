import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import torusgibbs as tg
from torusgibbs import hamiltonians as ham
from torusgibbs.spectral import (FourierField, Lattice, field_coords,
                                 field_from_coords, hermitianize)
from conftest import rescale_into_ball


def random_field(lattice, seed, reality=False, zero_mode=False, amp=1.0):
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal(lattice.shape) + 1j * rng.standard_normal(lattice.shape)
    if reality:
        coef = hermitianize(coef)
    f = FourierField(lattice, coef, reality, zero_mode=True)
    if not zero_mode:
        f.coef[lattice.zero_index()] = 0.0
        f.zero_mode = False
    out = (amp / math.sqrt(f.mass())) * f
    out.reality = reality
    return out


# -- energies ----------------------------------------------------------------

def test_nls_energy_single_mode():
    lat = Lattice(1, 4, 2)
    u = FourierField.from_modes(lat, {1: 1.0})
    assert ham.energy(tg.NLS(4, 0.0), u) == pytest.approx(0.5)
    assert ham.energy(tg.NLS(4, 1.0), u) == pytest.approx(0.25)


def test_kdv_energy_two_cos():
    # H = (1/2) int (u')^2 - (lam/6) int u^3 with u = 2 cos: kinetic = 1,
    # cubic term 0 (oracle: int (2 cos)^3 dtheta / 2 pi = 0)
    lat = Lattice(1, 4, 2)
    u = FourierField.from_modes(lat, {1: 1.0, -1: 1.0}, reality=True)
    assert ham.energy(tg.KdV(6.0), u) == pytest.approx(1.0, abs=1e-12)


def test_energy_zero_field_is_zero():
    lat = Lattice(1, 4, 2)
    z = FourierField.zeros(lat)
    assert ham.energy(tg.NLS(4, 1.0), z) == 0.0
    zr = FourierField.zeros(lat, reality=True)
    assert ham.energy(tg.KdV(2.0), zr) == 0.0


def test_phase_rotation_invariance():
    lat = Lattice(1, 6, 2)
    u = random_field(lat, 3)
    model = tg.NLS(4, 0.8)
    rot = np.exp(0.7j) * u
    assert ham.energy(model, rot) == pytest.approx(ham.energy(model, u), rel=1e-12)
    g1 = ham.gradient(model, u)
    g2 = ham.gradient(model, rot)
    assert np.max(np.abs(g2.coef - np.exp(0.7j) * g1.coef)) < 1e-12 * max(
        1.0, np.max(np.abs(g1.coef)))


def test_zakharov_energy_via_both_coordinate_systems():
    lat = Lattice(1, 6, 2)
    st_ = ham.ZakharovState(random_field(lat, 5), random_field(lat, 6, reality=True,
                                                               zero_mode=True),
                            random_field(lat, 7, reality=True))
    nt = st_.tilde_n()
    w = st_.w_field()
    direct = ham.energy(tg.Zakharov(), st_)
    via_transformed = (ham.kinetic_energy(st_.u) - 0.25 * tg.lp_integral(st_.u, 4)
                       + 0.5 * nt.mass() + ham.kinetic_energy(w))
    assert direct == pytest.approx(via_transformed, rel=1e-12)


# -- number operator ---------------------------------------------------------

def test_number_operator_values():
    assert ham.number_operator(0, 1.0) == pytest.approx(2.0)
    assert ham.number_operator(1, 1.0) == pytest.approx(26.0 / 3.0)


def test_number_operator_growth_flags_discrepancy():
    rep = ham.number_operator_growth([64, 128, 256], 1.0)
    # lattice sum grows ~ 4 pi log n, far from the quoted constant 2
    assert rep["discrepancy_flag"]
    assert abs(rep["slope_over_4pi"] - 1.0) < 0.15


# -- convexity identity ------------------------------------------------------

def test_identity_special_case():
    lat = Lattice(1, 4)
    one = FourierField.from_modes(lat, {0: 1.0}, reality=True)
    zero = FourierField.zeros(lat, reality=True)
    lhs, rhs = ham.nls_convexity_identity(one, zero, zero, zero, 0.5)
    assert lhs == pytest.approx(7.0 / 16.0, abs=1e-14)
    assert rhs == pytest.approx(7.0 / 16.0, abs=1e-14)


def test_identity_equal_points_vanishes():
    lat = Lattice(1, 4)
    f = random_field(lat, 11, reality=True, zero_mode=True)
    lhs, rhs = ham.nls_convexity_identity(f, f, f, f, 0.3)
    assert abs(lhs) < 1e-13 and abs(rhs) < 1e-13


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10 ** 6),
       t=st.floats(min_value=0.01, max_value=0.99))
def test_identity_random_fields(seed, t):
    lat = Lattice(1, 8)
    rng = np.random.default_rng(seed)
    fields = [FourierField(lat, hermitianize(
        rng.standard_normal(lat.shape) + 1j * rng.standard_normal(lat.shape)),
        reality=True) for _ in range(4)]
    lhs, rhs = ham.nls_convexity_identity(*fields, t)
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs))


# -- gradients and Hessians --------------------------------------------------

def _fd_slope(energy_fn, x0, grad_vec, direction, ts):
    errs = []
    for t in ts:
        fd = (energy_fn(x0 + t * direction) - energy_fn(x0 - t * direction)) / (2 * t)
        errs.append(abs(fd - grad_vec @ direction))
    return np.polyfit(np.log(ts), np.log(errs), 1)[0]


def test_gradient_kinetic_single_mode():
    lat = Lattice(1, 4, 2)
    u = FourierField.from_modes(lat, {1: 1.0})
    g = ham.gradient(tg.NLS(4, 0.0), u)
    expect = np.zeros(lat.shape, dtype=complex)
    expect[lat.n + 1] = 1.0
    assert np.max(np.abs(g.coef - expect)) < 1e-13


def test_gp_interaction_gradient_vanishes_for_constant_intensity():
    # |u|^2 constant and Vhat(0) = 0 kill the interaction gradient
    lat = Lattice(2, 3, 2)
    pot = ham.gp_cosine_potential(lat)
    u = FourierField.from_modes(lat, {(1, 0): 1.0}, zero_mode=False)
    gp = tg.GrossPitaevskii(pot, lam=1.0, kappa=0.0, rho=1.0, bparam=1.0)
    g = ham.gradient(gp, u)
    kinetic_only = lat.ksq() * u.coef
    assert np.max(np.abs(g.coef - kinetic_only)) < 1e-12


def test_gradient_fd_second_order_all_models():
    lat = Lattice(1, 8, 2)
    lat2 = Lattice(2, 3, 2)
    pot = ham.gp_soft_sphere_potential(lat2)
    cases = [
        (tg.NLS(4, 0.7), random_field(lat, 3, amp=1.2), False),
        (tg.KdV(1.5), random_field(lat, 5, reality=True), True),
        (tg.GrossPitaevskii(pot, 0.6, 4.0, 1.0, 1.0), random_field(lat2, 7), False),
    ]
    ts = np.geomspace(3e-2, 1e-3, 4)
    for model, u, reality in cases:
        g = field_coords(ham.gradient(model, u))
        x0 = field_coords(u)
        rng = np.random.default_rng(1)
        v = rng.standard_normal(x0.size)
        fn = lambda x: ham.energy(model, field_from_coords(x, u.lattice, reality, False))
        slope = _fd_slope(fn, x0, g, v, ts)
        assert abs(slope - 2.0) < 0.2, type(model).__name__


def test_zakharov_gradient_fd():
    lat = Lattice(1, 6, 2)
    st_ = ham.ZakharovState(random_field(lat, 11), random_field(lat, 12, reality=True,
                                                                zero_mode=True),
                            random_field(lat, 13, reality=True))
    gu, gn, gv = ham.gradient(tg.Zakharov(), st_)
    g = np.concatenate([field_coords(gu), field_coords(gn), field_coords(gv)])
    x0 = np.concatenate([field_coords(st_.u), field_coords(st_.n), field_coords(st_.v)])
    n = lat.n

    def unpack(x):
        c1 = 4 * n
        c2 = c1 + 2 * n + 1
        return ham.ZakharovState(field_from_coords(x[:c1], lat, False, False),
                                 field_from_coords(x[c1:c2], lat, True, True),
                                 field_from_coords(x[c2:], lat, True, False))

    rng = np.random.default_rng(2)
    v = rng.standard_normal(x0.size)
    fn = lambda x: ham.energy(tg.Zakharov(), unpack(x))
    slope = _fd_slope(fn, x0, g, v, np.geomspace(3e-2, 1e-3, 4))
    assert abs(slope - 2.0) < 0.2


def test_hessian_matches_second_difference_and_scaling():
    lat = Lattice(1, 8, 2)
    model = tg.NLS(4, 0.9)
    u = random_field(lat, 17, amp=1.1)
    v = random_field(lat, 19)
    probe = ham.hessian_quadratic_form(model, u, v)
    x0, vv = field_coords(u), field_coords(v)
    fn = lambda x: ham.energy(model, field_from_coords(x, lat, False, False))
    errs = []
    ts = [3e-2, 1e-2, 3e-3]
    for t in ts:
        fd2 = (fn(x0 + t * vv) - 2 * fn(x0) + fn(x0 - t * vv)) / t ** 2
        errs.append(abs(fd2 - probe.value))
    slope = np.polyfit(np.log(ts), np.log(errs), 1)[0]
    assert abs(slope - 2.0) < 0.3
    # quadratic scaling probe(u, 2v) = 4 probe(u, v)
    p2 = ham.hessian_quadratic_form(model, u, 2.0 * v)
    assert p2.value == pytest.approx(4.0 * probe.value, rel=1e-10)


def test_hessian_lambda_zero_is_h1_form():
    lat = Lattice(1, 6, 2)
    u = random_field(lat, 23)
    v = random_field(lat, 29)
    probe = ham.hessian_quadratic_form(tg.NLS(4, 0.0), u, v)
    assert probe.value == pytest.approx(
        tg.sobolev_norm(v, 1.0, homogeneous=True) ** 2, rel=1e-12)
    assert probe.interaction == 0.0


def test_hessian_p6_real_fields_matches_quartic_formula():
    # for real u, v the interaction Hessian is -5 lam int u^4 v^2
    lat = Lattice(1, 6, 3)
    u = random_field(lat, 31, reality=True)
    v = random_field(lat, 37, reality=True)
    probe = ham.hessian_quadratic_form(tg.NLS(6, 0.8), u, v)
    from torusgibbs.spectral import synthesize_batch
    ug = np.real(synthesize_batch(u.coef, lat, 3))
    vg = np.real(synthesize_batch(v.coef, lat, 3))
    direct = -0.8 * 5.0 * float(np.mean(ug ** 4 * vg ** 2))
    assert probe.interaction == pytest.approx(direct, rel=1e-10)


# -- convexity margins -------------------------------------------------------

def test_margin_zero_for_equal_arguments():
    lat = Lattice(1, 8, 2)
    u = random_field(lat, 41)
    res = ham.convexity_margin(tg.NLS(4, 0.001), u, u, 0.4, 4.0)
    assert res.gap == pytest.approx(0.0, abs=1e-12)
    assert res.value == pytest.approx(0.0, abs=1e-12)


def test_margin_lambda_zero_saturates():
    # quadratic H: gap equals the alpha = 1 bound exactly
    lat = Lattice(1, 8, 2)
    rng = np.random.default_rng(43)
    u = rescale_into_ball(random_field(lat, 47), 4.0, rng)
    v = rescale_into_ball(random_field(lat, 53), 4.0, rng)
    res = ham.convexity_margin(tg.NLS(4, 0.0), u, v, 0.5, 4.0)
    assert res.alpha == 1.0
    assert res.value == pytest.approx(0.0, abs=1e-12 * max(1.0, res.gap))


def test_margin_out_of_regime_flag():
    lat = Lattice(1, 8, 2)
    u = random_field(lat, 59)
    v = random_field(lat, 61)
    res = ham.convexity_margin(tg.NLS(4, 1.0), u, v, 0.5, 4.0)
    assert not res.in_regime


# -- closed-form LSI constants -----------------------------------------------

def test_lsi_constants():
    pred = ham.lsi_constant_predicted(tg.NLS(4, 3.0 / (28 * math.pi ** 2)), mass_bound=1.0)
    assert pred.in_regime and pred.alpha == pytest.approx(0.5)
    pred = ham.lsi_constant_predicted(tg.KdV(3.0 / (2 * math.pi ** 2)), mass_bound=1.0)
    assert pred.in_regime and pred.alpha == pytest.approx(0.5)
    pred = ham.lsi_constant_predicted(tg.NLS(4, 1.0), mass_bound=1.0)
    assert not pred.in_regime and pred.alpha is None
    lat = Lattice(2, 3, 2)
    pot = ham.gp_soft_sphere_potential(lat)
    gp = tg.GrossPitaevskii(pot, lam=0.5, kappa=25.0, rho=1.0, bparam=1.0)
    pred = ham.lsi_constant_predicted(gp)
    assert pred.in_regime and pred.alpha == 0.5
    zak = ham.lsi_constant_predicted(tg.Zakharov(3.0 / (28 * math.pi ** 2)))
    assert zak.in_regime and zak.alpha == pytest.approx(0.5)


def test_critical_mass_term_positive_and_monotone():
    m1 = ham.critical_convexification_mass(2.0, 1.0, 0.35)
    m2 = ham.critical_convexification_mass(2.0, 2.0, 0.35)
    assert m1 > 0 and m2 > m1


# -- dyadic block probe ------------------------------------------------------

def test_block_probe_lambda_zero_exact():
    lat = Lattice(1, 16)
    rep = ham.block_convexity_probe((3,), tg.NLS(4, 0.0), 1.0, 50, lat, seed=1)
    # kinetic diagonal: ratio >= min_{k in Delta_3} k^2 = 16 exactly, with
    # equality attained by the pure k = 4 mode
    assert rep["min_ratio"] >= 16.0 - 1e-10
    assert rep["positive"]
    v = FourierField.from_modes(lat, {4: 1.0})
    probe = ham.hessian_quadratic_form(tg.NLS(4, 0.0), v, v)
    assert probe.value / v.mass() == pytest.approx(16.0, rel=1e-12)


def test_block_probe_exponent_scaling():
    lat = Lattice(1, 130)
    mins = []
    sizes = []
    for j in range(3, 8):
        rep = ham.block_convexity_probe((j,), tg.NLS(4, 0.0), 1.0, 40, lat, seed=2)
        mins.append(rep["min_ratio"])
        sizes.append(rep["block_size"])
    slope = np.polyfit(np.log(sizes), np.log(mins), 1)[0]
    assert abs(slope - 2.0) < 0.2


def test_block_probe_positive_small_lambda():
    lat = Lattice(1, 16, 2)
    rep = ham.block_convexity_probe((3,), tg.NLS(4, 0.01), 1.0, 200, lat, seed=3)
    assert rep["positive"]
