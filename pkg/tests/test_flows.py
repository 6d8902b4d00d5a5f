import math

import numpy as np
import pytest

import torusgibbs as tg
from torusgibbs import flows, hamiltonians as ham
from torusgibbs.experiments import smooth_state
from torusgibbs.sampling import GaussianReference, SampleEnsemble
from torusgibbs.spectral import FourierField, Lattice, sobolev_norm


def test_free_nls_single_mode_exact():
    lat = Lattice(1, 8)
    u = FourierField.from_modes(lat, {1: 1.0})
    out = flows.flow_step(tg.NLS(4, 0.0), u, 0.37)
    assert abs(out.coef[lat.n + 1] - np.exp(-1j * 0.37)) < 1e-14


def test_mass_exact_per_step_nls_gp():
    lat = Lattice(1, 16)
    rng = np.random.default_rng(0)
    u = FourierField(lat, rng.standard_normal(lat.shape)
                     + 1j * rng.standard_normal(lat.shape))
    m0 = u.mass()
    out = flows.flow_step(tg.NLS(4, 2.0), u, 1e-2)
    assert abs(out.mass() - m0) < 1e-12 * m0
    lat2 = Lattice(2, 6)
    pot = ham.gp_cosine_potential(lat2)
    gp = tg.GrossPitaevskii(pot, 1.0, 0.0, 1.0, 1.0)
    u2 = FourierField(lat2, rng.standard_normal(lat2.shape)
                      + 1j * rng.standard_normal(lat2.shape))
    out2 = flows.flow_step(gp, u2, 1e-2)
    assert abs(out2.mass() - u2.mass()) < 1e-12 * u2.mass()


def test_linear_substeps_are_sobolev_isometries():
    lat = Lattice(1, 12)
    u = smooth_state(lat, 1, amplitude=1.0)
    traj = flows.evolve(tg.NLS(4, 0.0), u, flows.FlowConfig(1e-2, 0.2))
    assert traj.max_energy_drift() < 1e-12
    for s in (-0.5, 0.0, 1.0):
        assert sobolev_norm(traj.states[-1], s) == pytest.approx(
            sobolev_norm(u, s), rel=1e-12)


def test_kdv_mass_conservation():
    lat = Lattice(1, 64, 2)
    u = smooth_state(lat, 2, amplitude=0.5, decay=1.2, reality=True)
    traj = flows.evolve(tg.KdV(1.0), u, flows.FlowConfig(1e-3, 1.0))
    assert traj.max_mass_drift() < 1e-8


def test_zakharov_flow_conserves_mass_and_energy():
    lat = Lattice(1, 32, 2)
    st = ham.ZakharovState(smooth_state(lat, 3, 0.5),
                           smooth_state(lat, 4, 0.4, reality=True, zero_mode=True),
                           smooth_state(lat, 5, 0.4, reality=True))
    traj = flows.evolve(tg.Zakharov(1.0), st, flows.FlowConfig(1e-3, 0.5))
    assert traj.max_mass_drift() < 1e-10
    assert traj.max_energy_drift() < 1e-5


def test_flow_nan_guard():
    lat = Lattice(1, 64, 2)
    u = smooth_state(lat, 6, amplitude=60.0, reality=True)
    with pytest.raises(flows.FlowError):
        flows.evolve(tg.KdV(8.0), u, flows.FlowConfig(2e-2, 2.0))


def test_richardson_second_order_nls():
    lat = Lattice(1, 32, 2)
    u = smooth_state(lat, 7, amplitude=0.5)
    rep = flows.richardson_order(tg.NLS(4, 1.0), u, 0.2, [1e-3, 5e-4, 2.5e-4, 1.25e-4])
    assert abs(rep["order"] - 2.0) < 0.2


def test_lie_scheme_is_first_order():
    lat = Lattice(1, 32, 2)
    u = smooth_state(lat, 7, amplitude=0.5)
    rep = flows.richardson_order(tg.NLS(4, 1.0), u, 0.2,
                                 [1e-3, 5e-4, 2.5e-4, 1.25e-4], scheme="lie")
    assert abs(rep["order"] - 1.0) < 0.2


def test_evolve_ensemble_matches_single_state():
    lat = Lattice(1, 8)
    rng = np.random.default_rng(8)
    coefs = rng.standard_normal((3,) + lat.shape) + 1j * rng.standard_normal((3,) + lat.shape)
    cfg = flows.FlowConfig(1e-2, 0.1)
    batch = flows.evolve_ensemble(tg.NLS(4, 0.5), coefs, lat, cfg)
    for i in range(3):
        single = flows.evolve(tg.NLS(4, 0.5), FourierField(lat, coefs[i]), cfg)
        assert np.max(np.abs(batch[i] - single.states[-1].coef)) < 1e-12


def test_invariance_free_measure_under_free_flow():
    lat = Lattice(1, 8)
    ref = GaussianReference(lat, 0.0, "complex")
    rng = np.random.default_rng(9)
    ens = SampleEnsemble(lat, ref.sample_batch(rng, 4000), False, False)
    rep = flows.invariance_test(tg.NLS(4, 0.0), ens, flows.FlowConfig(1e-2, 1.0))
    assert rep["pass"] and rep["valid"]


def test_invariance_negative_control_detected():
    lat = Lattice(1, 8)
    ref = GaussianReference(lat, 0.0, "complex")
    rng = np.random.default_rng(5)
    ens = SampleEnsemble(lat, ref.sample_batch(rng, 3000), False, False)
    rep = flows.invariance_test(tg.NLS(4, 0.18), ens, flows.FlowConfig(5e-4, 1.0),
                                energy_tol=0.2)
    row = next(r for r in rep["rows"] if r["functional"] == "quartic_integral")
    assert not row["pass"]


# -- Duhamel / fixed point ---------------------------------------------------

def test_duhamel_trivial_cases():
    lat = Lattice(2, 6)
    pot = ham.gp_cosine_potential(lat)
    zero = FourierField.zeros(lat, zero_mode=False)
    assert sobolev_norm(flows.duhamel_phi(zero, pot, 1.0, 0.2, 8), 0) == 0.0
    phi = smooth_state(lat, 10, amplitude=0.5)
    vzero = FourierField.zeros(lat, reality=True)
    assert sobolev_norm(flows.duhamel_phi(phi, vzero, 1.0, 0.2, 8), 0) == 0.0
    single = FourierField.from_modes(lat, {(2, 1): 1.0}, zero_mode=False)
    assert sobolev_norm(flows.duhamel_phi(single, pot, 1.0, 0.2, 8), 0) < 1e-14


def test_duhamel_requires_mean_free_potential():
    lat = Lattice(2, 4)
    pot = ham.gp_soft_sphere_potential(lat)
    phi = smooth_state(lat, 11, amplitude=0.3)
    with pytest.raises(ValueError):
        flows.duhamel_phi(phi, pot, 1.0, 0.1, 8)


def test_duhamel_quadrature_self_convergence():
    lat = Lattice(2, 6)
    pot = ham.gp_cosine_potential(lat)
    phi = smooth_state(lat, 12, amplitude=0.7)
    vals = [flows.duhamel_phi(phi, pot, 0.8, 0.3, steps) for steps in (8, 16, 32, 64)]
    errs = [float(np.max(np.abs(a.coef - b.coef))) for a, b in zip(vals, vals[1:])]
    slope = np.polyfit(np.log([0.3 / 8, 0.3 / 16, 0.3 / 32]), np.log(errs), 1)[0]
    assert slope >= 1.8


def test_fixed_point_v_zero_immediate():
    lat = Lattice(2, 4)
    vzero = FourierField.zeros(lat, reality=True)
    phi = smooth_state(lat, 13, amplitude=0.4)
    res = flows.gp_fixed_point(phi, vzero, 1.0, 0.2, 16)
    assert res.residuals[0] == 0.0
    assert np.max(np.abs(res.w_nodes)) == 0.0


def test_fixed_point_contracts_and_bounds():
    lat = Lattice(2, 8)
    pot = ham.gp_cosine_potential(lat)
    phi = smooth_state(lat, 14, amplitude=0.6, decay=2.0)
    res = flows.gp_fixed_point(phi, pot, 0.5, 0.2, 48, s=0.125)
    assert res.horizon_ok and res.contraction < 0.5
    ratios = [b / a for a, b in zip(res.residuals, res.residuals[1:]) if a > 1e-14]
    assert all(r < 0.5 for r in ratios[1:])
    # ||w|| <= 2 ||Phi(u0)|| at every node
    from torusgibbs.spectral import sobolev_weights
    w = sobolev_weights(lat, 0.125)
    norms = np.sqrt(np.sum(w * np.abs(res.w_nodes) ** 2, axis=(1, 2)))
    assert np.max(norms) <= 2.0 * res.k0 + 1e-12


def test_fixed_point_matches_split_step_under_refinement():
    lat = Lattice(2, 8)
    pot = ham.gp_cosine_potential(lat)
    phi = smooth_state(lat, 15, amplitude=0.5, decay=2.0)
    lam, t_final = 0.5, 0.2
    gp = tg.GrossPitaevskii(pot, lam, 0.0, 1.0, 1.0)
    diffs = []
    for steps, dt in [(16, 4e-3), (32, 2e-3), (64, 1e-3)]:
        res = flows.gp_fixed_point(phi, pot, lam, t_final, steps)
        traj = flows.evolve(gp, phi, flows.FlowConfig(dt, t_final))
        diffs.append(sobolev_norm(res.u_final - traj.states[-1], -0.125))
    assert diffs[0] > diffs[1] > diffs[2]
