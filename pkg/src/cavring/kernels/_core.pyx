# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integration kernel for the ring-cavity equations of motion.

Performs the same symmetric split step as the numpy fallback in
:mod:`cavring.kernels.purepy` (exact coupling phases + degree-4
polynomial hopping propagator + exact damped-cavity flow + additive
noise), trajectory by trajectory, with the GIL released so ensembles
can be integrated on multiple threads.
"""

import numpy as np

cimport cython
from libc.math cimport isfinite, sqrt

cdef extern from "math.h" nogil:
    void sincos(double x, double *s, double *c)


def integrate_batch(double complex[::1] cav,
                    double complex[:, ::1] sites,
                    double[:, :, ::1] noise,
                    double[::1] g_grid,
                    double complex[::1] hop_grid,
                    double kappa,
                    double omega,
                    double dt,
                    Py_ssize_t record_every,
                    double[:, ::1] out_photon,
                    double[:, ::1] out_imbalance,
                    double[:, ::1] out_atoms,
                    double[:, ::1] out_cav_re):
    """Integrate a batch of trajectories; same contract as the fallback.

    States are updated in place; returns (rec_index, traj_index) of the
    first non-finite recorded sample or None when all are finite.
    """
    cdef Py_ssize_t n_traj = sites.shape[0]
    cdef Py_ssize_t m = sites.shape[1]
    cdef Py_ssize_t n_steps = noise.shape[1]
    cdef double amp = sqrt(kappa * dt / 2.0)
    # constants of the exact cavity flow, computed with the same numpy
    # expressions as the fallback
    cdef double complex decay = complex(np.exp(-(kappa + 1j * omega) * dt))
    cdef double complex inv = 1j / (kappa + 1j * omega)

    scratch = np.empty((3, m), dtype=np.complex128)
    cdef double complex[:, ::1] work = scratch
    cdef Py_ssize_t t, fail_rec = -1, fail_traj = -1

    for t in range(n_traj):
        with nogil:
            fail_rec = _one_trajectory(
                cav, sites, noise, g_grid, hop_grid, decay, inv, amp, dt,
                record_every, out_photon, out_imbalance, out_atoms,
                out_cav_re, work, t, m, n_steps)
        if fail_rec >= 0:
            fail_traj = t
            break
    if fail_traj >= 0:
        return fail_rec, fail_traj
    return None


cdef void _hop_propagate(double complex[:, ::1] work,
                         double complex hop,
                         double tau,
                         Py_ssize_t m) noexcept nogil:
    """work[0] <- degree-4 polynomial of exp(i tau H_hop) @ work[0].

    work[1] holds the Horner accumulator u, work[2] the H-applications.
    """
    cdef double complex z = 1j * tau
    cdef double complex hc = hop.conjugate()
    cdef double complex coef
    cdef Py_ssize_t j, jp, jm, stage

    for stage in range(4):
        coef = z / <double>(4 - stage)
        for j in range(m):
            jp = j + 1 if j + 1 < m else 0
            jm = j - 1 if j > 0 else m - 1
            if stage == 0:
                work[2, j] = hop * work[0, jp] + hc * work[0, jm]
            else:
                work[2, j] = hop * work[1, jp] + hc * work[1, jm]
        if stage < 3:
            for j in range(m):
                work[1, j] = work[0, j] + coef * work[2, j]
        else:
            for j in range(m):
                work[0, j] = work[0, j] + coef * work[2, j]


cdef void _coupling_phase(double complex[:, ::1] work,
                          double complex a,
                          double g,
                          double tau,
                          Py_ssize_t m) noexcept nogil:
    """work[0, j] *= exp(i g (alpha + alpha*) (-1)^j tau), exact."""
    cdef double phi = (g * tau) * (2.0 * a.real)
    cdef double c, s
    sincos(phi, &s, &c)
    cdef double complex even = c + 1j * s
    cdef double complex odd = c - 1j * s
    cdef Py_ssize_t j
    for j in range(m):
        if j % 2 == 0:
            work[0, j] = even * work[0, j]
        else:
            work[0, j] = odd * work[0, j]


cdef double _imbalance(double complex[:, ::1] work, Py_ssize_t m) noexcept nogil:
    cdef double total = 0.0
    cdef double sign = 1.0
    cdef double nj
    cdef Py_ssize_t j
    for j in range(m):
        nj = work[0, j].real * work[0, j].real + work[0, j].imag * work[0, j].imag
        total += sign * nj
        sign = -sign
    return total


cdef Py_ssize_t _one_trajectory(double complex[::1] cav,
                                double complex[:, ::1] sites,
                                double[:, :, ::1] noise,
                                double[::1] g_grid,
                                double complex[::1] hop_grid,
                                double complex decay,
                                double complex inv,
                                double amp,
                                double dt,
                                Py_ssize_t record_every,
                                double[:, ::1] out_photon,
                                double[:, ::1] out_imbalance,
                                double[:, ::1] out_atoms,
                                double[:, ::1] out_cav_re,
                                double complex[:, ::1] work,
                                Py_ssize_t t,
                                Py_ssize_t m,
                                Py_ssize_t n_steps) noexcept nogil:
    cdef double complex a, alpha_s
    cdef double g0, g1, d_mid, nj, sign, photon, imbal, atoms
    cdef Py_ssize_t k, j, rec

    for j in range(m):
        work[0, j] = sites[t, j]
    a = cav[t]

    photon = a.real * a.real + a.imag * a.imag
    imbal = 0.0
    atoms = 0.0
    sign = 1.0
    for j in range(m):
        nj = work[0, j].real * work[0, j].real + work[0, j].imag * work[0, j].imag
        imbal += sign * nj
        atoms += nj
        sign = -sign
    out_photon[0, t] = photon
    out_imbalance[0, t] = imbal
    out_atoms[0, t] = atoms
    out_cav_re[0, t] = a.real
    if not (isfinite(photon) and isfinite(imbal) and isfinite(atoms)):
        return 0

    for k in range(n_steps):
        g0 = g_grid[k]
        g1 = g_grid[k + 1]

        # atoms, dt/2, controls at the step start
        _coupling_phase(work, a, g0, dt / 4.0, m)
        _hop_propagate(work, hop_grid[k], dt / 2.0, m)
        _coupling_phase(work, a, g0, dt / 4.0, m)

        # cavity, dt, exact flow at the midpoint imbalance
        d_mid = _imbalance(work, m)
        alpha_s = (inv * (0.5 * (g0 + g1))) * d_mid
        a = (a - alpha_s) * decay + alpha_s

        # atoms, dt/2, controls at the step end
        _coupling_phase(work, a, g1, dt / 4.0, m)
        _hop_propagate(work, hop_grid[k + 1], dt / 2.0, m)
        _coupling_phase(work, a, g1, dt / 4.0, m)

        a = a + amp * (noise[t, k, 0] + 1j * noise[t, k, 1])

        if (k + 1) % record_every == 0:
            rec = (k + 1) // record_every
            photon = a.real * a.real + a.imag * a.imag
            imbal = 0.0
            atoms = 0.0
            sign = 1.0
            for j in range(m):
                nj = work[0, j].real * work[0, j].real + work[0, j].imag * work[0, j].imag
                imbal += sign * nj
                atoms += nj
                sign = -sign
            out_photon[rec, t] = photon
            out_imbalance[rec, t] = imbal
            out_atoms[rec, t] = atoms
            out_cav_re[rec, t] = a.real
            if not (isfinite(photon) and isfinite(imbal) and isfinite(atoms)):
                _write_back(cav, sites, work, a, t, m)
                return rec

    _write_back(cav, sites, work, a, t, m)
    return -1


cdef void _write_back(double complex[::1] cav,
                      double complex[:, ::1] sites,
                      double complex[:, ::1] work,
                      double complex a,
                      Py_ssize_t t,
                      Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t j
    cav[t] = a
    for j in range(m):
        sites[t, j] = work[0, j]
