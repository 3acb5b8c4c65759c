import numpy as np
import pytest

from cavring.model import ModelParams


@pytest.fixture(scope="session")
def paper_params():
    """Base configuration: J = 2, kappa = 5, omega_rec = 3.5, omega = 10
    (all 2pi x kHz), N_A = 60000, M = 4."""
    return ModelParams.from_twopi_khz(
        omega=10.0, kappa=5.0, hop_j=2.0, n_atoms=60000.0, n_sites=4,
        omega_rec=3.5,
    )


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240901)
