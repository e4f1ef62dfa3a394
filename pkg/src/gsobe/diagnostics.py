"""Sobolev and Bourgain-type norms of sampled fields and trajectories.

Continuum Fourier conventions are used so that numbers are comparable across
grids: ``u_hat(xi) ~ L * c_j`` for the grid coefficients ``c_j`` and
``u_hat(tau) ~ dt * sum_t u(t) exp(-i tau t)``.
"""
from __future__ import annotations

import numpy as np

from .cutoff import CutoffFn
from .dispersion import EXACT, japanese
from .errors import ParameterError
from .estimates.norms import xsb_lattice_norm
from .spectral import LatticeSpec, RealField, SpaceTimeSpectrum
from .trajectory import Trajectory


def hs_norm(f: RealField, s: float) -> float:
    """``|| <xi>^s f_hat ||_{L^2(dxi)}`` with ``f_hat = L c`` and ``dxi = 2 pi / L``."""
    g = f.grid
    c = np.fft.fft(f.samples) / g.n_points
    w = japanese(g.wavenumbers) ** s
    return float(np.sqrt(np.sum((w * np.abs(c) * g.domain_length) ** 2) * g.dxi))


def cauchy_norm(phi: RealField, psi: RealField, s: float) -> float:
    """``||phi||_{H^s} + ||psi||_{H^{s-1}}``."""
    return hs_norm(phi, s) + hs_norm(psi, s - 1.0)


def space_time_spectrum(traj: Trajectory, cutoff: CutoffFn) -> SpaceTimeSpectrum:
    """Continuum-normalised transform of ``eta(t) u(x, t)`` on a centred lattice."""
    t = traj.times
    if t.size < 4:
        raise ParameterError("trajectory has too few samples")
    dt = np.diff(t)
    h = float(dt.mean())
    if np.max(np.abs(dt - h)) > 1e-9 * max(h, 1.0):
        raise ParameterError("trajectory times must be uniform")
    lo, hi = cutoff.support
    if t[0] > lo + 1e-12 * abs(lo) or t[-1] < hi - h - 1e-12 * abs(hi):
        raise ParameterError(
            f"trajectory [{t[0]:g}, {t[-1]:g}] does not cover the cutoff support [{lo:g}, {hi:g}]")
    u = traj.u
    if t.size % 2:
        t, u = t[:-1], u[:-1]
    g = traj.grid
    eta = np.asarray(cutoff(t))[:, None]
    spec = np.fft.fft(eta * u, axis=1) / g.n_points * g.domain_length
    spec = np.fft.fft(spec, axis=0) * h
    # phase for a time axis starting at t[0] rather than 0
    tau = 2 * np.pi * np.fft.fftfreq(t.size, h)
    spec = spec * np.exp(-1j * tau * t[0])[:, None]
    spec = np.fft.fftshift(spec).T
    lattice = LatticeSpec(g.n_points, t.size, g.dxi, 2 * np.pi / (t.size * h))
    return SpaceTimeSpectrum(lattice, spec)


def xsb_diagnostic(traj: Trajectory, cutoff: CutoffFn, s: float, b: float, k: int,
                   variant: str = EXACT) -> float:
    """Discrete ``X^{s,b}`` norm of ``eta(t) u``.

    The trajectory must be uniformly sampled and cover the support of the cutoff.
    """
    return xsb_lattice_norm(space_time_spectrum(traj, cutoff), s, b, k, variant)
