"""Physical parameters of the atom-cavity ring and its analytic threshold.

The system is an M-site bosonic ring (M divisible by 4, sites occupied
by 1D condensates arranged on a square annulus) coupled to one lossy
cavity mode.  Rotation at angular frequency Omega twists the tunnelling
amplitude by a uniform gauge phase

    theta = pi^2 * n_s * Omega / omega_rec,      n_s = M/4 + 1,

and the superradiant threshold of the open system is

    g_crit(theta) = sqrt( J cos(theta) (omega^2 + kappa^2) / (N_A omega) ),

which reduces to sqrt(J omega cos(theta) / N_A) for a lossless cavity.
Everything here is a pure function of immutable inputs; all frequencies
are angular, in rad/ms (see :mod:`cavring.units`).
"""

import math
from dataclasses import dataclass

from .errors import ConfigError, DomainError
from .units import twopi_khz_to_rad_per_ms


@dataclass(frozen=True)
class ModelParams:
    """All constants of the discrete ring-cavity model.

    omega     : effective cavity detuning (rad/ms)
    kappa     : cavity field loss rate (rad/ms)
    hop_j     : nearest-neighbour tunnelling energy J (rad/ms)
    n_atoms   : total atom number N_A (real-valued so that per-shot
                Gaussian particle numbers are representable)
    n_sites   : number of ring sites M, divisible by 4
    omega_rec : recoil frequency of the pump lattice (rad/ms)
    """

    omega: float
    kappa: float
    hop_j: float
    n_atoms: float
    n_sites: int
    omega_rec: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigError(f"omega must be > 0, got {self.omega}")
        if self.kappa < 0:
            raise ConfigError(f"kappa must be >= 0, got {self.kappa}")
        if not self.hop_j > 0:
            raise ConfigError(f"hop_j must be > 0, got {self.hop_j}")
        if not self.omega_rec > 0:
            raise ConfigError(f"omega_rec must be > 0, got {self.omega_rec}")
        if not self.n_atoms > 0:
            raise ConfigError(f"n_atoms must be > 0, got {self.n_atoms}")
        sites_per_side(self.n_sites)  # validates the mod-4 constraint

    @classmethod
    def from_twopi_khz(cls, omega, kappa, hop_j, n_atoms, n_sites, omega_rec):
        """Build params from rates quoted in 2pi x kHz."""
        return cls(
            omega=twopi_khz_to_rad_per_ms(omega),
            kappa=twopi_khz_to_rad_per_ms(kappa),
            hop_j=twopi_khz_to_rad_per_ms(hop_j),
            n_atoms=n_atoms,
            n_sites=n_sites,
            omega_rec=twopi_khz_to_rad_per_ms(omega_rec),
        )

    @property
    def sites_per_side(self):
        return sites_per_side(self.n_sites)


def sites_per_side(n_sites):
    """Number of sites along one side of the square annulus, M/4 + 1."""
    if n_sites < 4 or n_sites % 4 != 0:
        raise ConfigError(
            f"n_sites must be a positive multiple of 4 (square-annulus "
            f"geometry with alternating coupling), got {n_sites}"
        )
    return n_sites // 4 + 1


def theta_from_rotation(omega_rot, params):
    """Gauge phase induced by rotation: theta = pi^2 n_s Omega / omega_rec."""
    return math.pi**2 * params.sites_per_side * omega_rot / params.omega_rec


def rotation_from_theta(theta, params):
    """Inverse of :func:`theta_from_rotation`."""
    return theta * params.omega_rec / (math.pi**2 * params.sites_per_side)


def critical_coupling(params, theta):
    """Superradiant threshold g_crit(theta) of the lossy system.

    Only defined for cos(theta) >= 0; beyond that the energy landscape
    changes character and the boundary formula does not apply.
    """
    c = math.cos(theta)
    if c < 0:
        raise DomainError(
            f"critical coupling is only defined for cos(theta) >= 0, "
            f"got theta = {theta}"
        )
    return math.sqrt(
        params.hop_j * c * (params.omega**2 + params.kappa**2)
        / (params.n_atoms * params.omega)
    )


def boundary_curve(theta):
    """Phase boundary in rescaled units: g_crit(theta)/g_crit(0) = sqrt(cos theta)."""
    c = math.cos(theta)
    if c < 0:
        raise DomainError(
            f"boundary curve is only defined for cos(theta) >= 0, "
            f"got theta = {theta}"
        )
    return math.sqrt(c)
