"""Pure-numpy integration kernel (reference implementation).

Evolves a batch of trajectories of the ring-cavity equations of motion

    d alpha/dt = -(kappa + i omega) alpha + i g D,   D = sum_j (-1)^j |b_j|^2
    d b_j/dt   = i g (alpha + alpha*) (-1)^j b_j
                 + i (h b_{j+1} + h* b_{j-1}),       h = J e^{i theta},

with a second-order symmetric split step plus an additive cavity noise
increment sqrt(kappa dt / 2) (eta_a + i eta_b):

    1. atoms, dt/2, controls at the step start: exact coupling phases
       exp(+/- i g (alpha + alpha*) dt/4) around a degree-4 polynomial
       approximation of the unitary hopping propagator exp(i H_hop dt/2);
    2. cavity, dt: exact flow of the damped driven mode with the
       imbalance frozen at the midpoint state,
       alpha -> (alpha - a_s) exp(-(kappa + i omega) dt) + a_s,
       a_s = i g D / (kappa + i omega);
    3. atoms, dt/2, controls at the step end;
    4. noise increment on alpha.

All atomic sub-updates are unitary up to the tiny truncation of the
hopping polynomial ((J dt/2)^6/72 per application), so the total atom
number is conserved to ~1e-10 over a typical run -- a plain
Runge-Kutta drift step would inflate it by orders of magnitude more.
Controls enter through per-step arrays of g and J e^{i theta} on the
full time grid.

This module is the fallback backend selected when the compiled
extension is unavailable; the compiled kernel performs the identical
update step.
"""

import numpy as np


def site_signs(n_sites):
    """Alternating coupling pattern (+1, -1, ...) around the ring."""
    return np.where(np.arange(n_sites) % 2 == 0, 1.0, -1.0)


def drift_arrays(cav, sites, g, hop, kappa, omega, signs):
    """Deterministic time derivative for a batch of states.

    cav: (...,) complex, sites: (..., M) complex; g and hop are scalars
    (hop = J exp(i theta)).  Returns (dcav, dsites) with matching shapes.
    """
    n = sites.real**2 + sites.imag**2
    imbalance = (n * signs).sum(axis=-1)
    dcav = -(kappa + 1j * omega) * cav + (1j * g) * imbalance
    two_re = 2.0 * cav.real
    coupling = (1j * g) * np.expand_dims(two_re, -1) * signs * sites
    hopping = 1j * (
        hop * np.roll(sites, -1, axis=-1)
        + np.conj(hop) * np.roll(sites, 1, axis=-1)
    )
    return dcav, coupling + hopping


def _hop_apply(sites, hop):
    """(H x)_j = hop * x_{j+1} + hop* * x_{j-1}, periodic."""
    return (hop * np.roll(sites, -1, axis=-1)
            + np.conj(hop) * np.roll(sites, 1, axis=-1))


def _hop_propagate(sites, hop, tau):
    """Degree-4 polynomial of exp(i tau H_hop) applied to sites (Horner)."""
    z = 1j * tau
    u = sites + (z / 4.0) * _hop_apply(sites, hop)
    u = sites + (z / 3.0) * _hop_apply(u, hop)
    u = sites + (z / 2.0) * _hop_apply(u, hop)
    return sites + z * _hop_apply(u, hop)


def _coupling_phase(cav, sites, g, tau, signs):
    """Exact per-site phases exp(i g (alpha + alpha*) (-1)^j tau)."""
    phi = (g * tau) * (2.0 * cav.real)
    factor = np.cos(phi) + 1j * np.sin(phi)
    factor = np.expand_dims(factor, -1)
    return np.where(signs > 0, factor, np.conj(factor)) * sites


def _atoms_half(cav, sites, g, hop, dt, signs):
    """Atomic sub-flow over dt/2 at frozen cavity amplitude."""
    sites = _coupling_phase(cav, sites, g, dt / 4.0, signs)
    sites = _hop_propagate(sites, hop, dt / 2.0)
    return _coupling_phase(cav, sites, g, dt / 4.0, signs)


def split_step(cav, sites, g0, g1, hop0, hop1, kappa, omega, dt, signs,
               decay=None, inv=None):
    """One deterministic step of the symmetric splitting; controls
    (g0, hop0) at the start of the interval and (g1, hop1) at its end."""
    if decay is None:
        decay = complex(np.exp(-(kappa + 1j * omega) * dt))
    if inv is None:
        inv = 1j / (kappa + 1j * omega)
    sites = _atoms_half(cav, sites, g0, hop0, dt, signs)
    n = sites.real**2 + sites.imag**2
    imbalance = (n * signs).sum(axis=-1)
    alpha_s = (inv * (0.5 * (g0 + g1))) * imbalance
    cav = (cav - alpha_s) * decay + alpha_s
    sites = _atoms_half(cav, sites, g1, hop1, dt, signs)
    return cav, sites


def integrate_batch(cav, sites, noise, g_grid, hop_grid, kappa, omega, dt,
                    record_every, out_photon, out_imbalance, out_atoms,
                    out_cav_re):
    """Integrate a batch of trajectories, recording observables.

    cav      : (B,) complex128, initial cavity amplitudes, updated in place
    sites    : (B, M) complex128, initial site amplitudes, updated in place
    noise    : (B, n_steps, 2) float64 standard-normal draws (zeros for
               a noiseless run)
    g_grid   : (n_steps+1,) light-matter coupling on the time grid
    hop_grid : (n_steps+1,) complex J e^{i theta} on the time grid
    out_*    : (n_rec, B) float64 output arrays, n_rec = n_steps//record_every + 1

    Returns (rec_index, traj_index) of the first non-finite recorded
    sample, or None if all samples were finite.
    """
    signs = site_signs(sites.shape[1])
    n_steps = noise.shape[1]
    amp = np.sqrt(kappa * dt / 2.0)
    decay = complex(np.exp(-(kappa + 1j * omega) * dt))
    inv = 1j / (kappa + 1j * omega)
    a, b = cav.copy(), sites.copy()

    def record(rec):
        n = b.real**2 + b.imag**2
        out_photon[rec] = a.real**2 + a.imag**2
        out_imbalance[rec] = (n * signs).sum(axis=-1)
        out_atoms[rec] = n.sum(axis=-1)
        out_cav_re[rec] = a.real
        bad = ~(
            np.isfinite(out_photon[rec])
            & np.isfinite(out_imbalance[rec])
            & np.isfinite(out_atoms[rec])
        )
        if bad.any():
            return int(np.argmax(bad))
        return -1

    fail = record(0)
    if fail >= 0:
        return 0, fail
    for k in range(n_steps):
        a, b = split_step(
            a, b, g_grid[k], g_grid[k + 1], hop_grid[k],
            hop_grid[k + 1], kappa, omega, dt, signs,
            decay=decay, inv=inv,
        )
        a = a + amp * (noise[:, k, 0] + 1j * noise[:, k, 1])
        if (k + 1) % record_every == 0:
            rec = (k + 1) // record_every
            fail = record(rec)
            if fail >= 0:
                cav[:], sites[:] = a, b
                return rec, fail
    cav[:], sites[:] = a, b
    return None
