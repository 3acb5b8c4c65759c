import math

import numpy as np
import pytest

from cavring.errors import DomainError
from cavring.meanfield import (energy, minimize_energy, predict_photon_number,
                               stationary_alpha)
from cavring.model import ModelParams, critical_coupling

from oracles import brute_force_minimum, closed_form_delta


@pytest.fixture(scope="module")
def g0crit(paper_params):
    return critical_coupling(paper_params, 0.0)


def test_energy_trivial_points(paper_params):
    p = paper_params
    n = p.n_atoms
    assert energy(0j, 0.0, 0.0, 1.0, p) == pytest.approx(-2 * p.hop_j * n,
                                                         rel=1e-14)
    assert energy(0j, n, 0.7, 1.0, p) == pytest.approx(0.0, abs=1e-9)


def test_energy_numbers_match_quoted_example():
    # with rates read directly in 2pi x kHz units the example value is
    # E = -2 * 2 * cos(pi/3) * 60000 = -120000
    p = ModelParams(omega=10.0, kappa=5.0, hop_j=2.0, n_atoms=60000.0,
                    n_sites=4, omega_rec=3.5)
    assert energy(0j, 0.0, math.pi / 3, 0.02, p) == pytest.approx(-120000.0,
                                                                  rel=1e-12)


def test_energy_rejects_overfull_imbalance(paper_params):
    with pytest.raises(DomainError):
        energy(0j, 1.5 * paper_params.n_atoms, 0.0, 1.0, paper_params)


def test_energy_z2_parity(paper_params, rng):
    for _ in range(20):
        alpha = complex(rng.normal(), rng.normal()) * 50
        delta = rng.uniform(-1, 1) * paper_params.n_atoms
        g = rng.uniform(0, 0.3)
        theta = rng.uniform(0, 1.4)
        assert energy(alpha, delta, theta, g, paper_params) == \
            energy(-alpha, -delta, theta, g, paper_params)


def test_minimizer_below_threshold(paper_params, g0crit):
    point = minimize_energy(0.0, 0.5 * g0crit, paper_params)
    assert point.delta == 0.0
    assert point.alpha == 0.0
    assert predict_photon_number(0.0, 0.5 * g0crit, paper_params) == 0.0
    assert predict_photon_number(0.0, g0crit, paper_params) == 0.0


def test_minimizer_against_closed_form_at_1p2(paper_params, g0crit):
    point = minimize_energy(0.0, 1.2 * g0crit, paper_params)
    # closed form sqrt(1 - (1/1.2)^4) = 0.719546..., cross-checked by the
    # brute-force grid oracle
    assert point.delta / paper_params.n_atoms == pytest.approx(
        0.719546324832701, rel=1e-6)
    delta_brute, _ = brute_force_minimum(0.0, 1.2 * g0crit, paper_params)
    assert point.delta == pytest.approx(delta_brute,
                                        abs=2e-4 * paper_params.n_atoms)


@pytest.mark.parametrize("g_rel", [1.05, 1.1, 1.2, 1.5, 2.0])
@pytest.mark.parametrize("theta", [0.0, 0.4, math.pi / 4])
def test_minimizer_matches_closed_form(paper_params, g_rel, theta):
    g = g_rel * critical_coupling(paper_params, theta)
    point = minimize_energy(theta, g, paper_params)
    expected = closed_form_delta(theta, g, paper_params)
    assert point.delta == pytest.approx(expected, rel=1e-4)


def test_minimizer_alpha_and_photon(paper_params, g0crit):
    g = 1.2 * g0crit
    point = minimize_energy(0.0, g, paper_params)
    p = paper_params
    # alpha pinned to the damped stationary value i g Delta/(kappa+i omega)
    assert point.alpha == pytest.approx(
        1j * g * point.delta / (p.kappa + 1j * p.omega), rel=1e-12)
    assert point.alpha.real == pytest.approx(
        g * point.delta * p.omega / (p.omega**2 + p.kappa**2), rel=1e-12)
    photon = predict_photon_number(0.0, g, paper_params)
    assert photon == pytest.approx(
        g**2 * point.delta**2 / (p.omega**2 + p.kappa**2), rel=1e-12)
    # frozen value from the brute-force grid oracle
    assert photon == pytest.approx(8946.667, rel=1e-3)


def test_predict_photon_1p1_against_brute_force(paper_params, g0crit):
    g = 1.1 * g0crit
    _, alpha_brute = brute_force_minimum(0.0, g, paper_params)
    assert predict_photon_number(0.0, g, paper_params) == pytest.approx(
        abs(alpha_brute) ** 2, rel=1e-3)
    assert predict_photon_number(0.0, g, paper_params) == pytest.approx(
        4602.64, rel=1e-3)


def test_transition_is_continuous(paper_params, g0crit):
    # Delta(g_crit + eps) -> 0 as eps -> 0+ (second-order transition)
    previous = None
    for eps in (3e-2, 1e-2, 3e-3, 1e-3):
        point = minimize_energy(0.0, (1 + eps) * g0crit, paper_params)
        assert point.delta <= paper_params.n_atoms * 2.1 * math.sqrt(eps)
        if previous is not None:
            assert point.delta < previous
        previous = point.delta


def test_photon_monotone_in_theta(paper_params, g0crit):
    # fixed absolute coupling: larger theta lowers the threshold, so the
    # photon number cannot decrease
    g = 1.05 * g0crit
    thetas = np.linspace(0.0, 1.2, 10)
    photons = [predict_photon_number(t, g, paper_params) for t in thetas]
    assert all(b >= a - 1e-9 for a, b in zip(photons, photons[1:]))
    assert photons[-1] > photons[0]


def test_branch_sign_convention(paper_params, g0crit):
    point = minimize_energy(0.3, 1.3 * critical_coupling(paper_params, 0.3),
                            paper_params)
    assert point.delta >= 0.0
    assert point.alpha.real > 0.0  # sign(Re alpha) = sign(Delta * g)


def test_stationary_alpha_zero_at_zero_imbalance(paper_params):
    assert stationary_alpha(0.0, 0.1, paper_params) == 0.0


def test_minimizer_rejects_bad_theta(paper_params, g0crit):
    with pytest.raises(DomainError):
        minimize_energy(0.7 * math.pi, g0crit, paper_params)
