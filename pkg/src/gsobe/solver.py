"""Linear propagators, Duhamel integrals, Picard iteration and a nonlinear stepper.

All time evolution is carried out on ``rfft`` half-spectra (``1/n`` normalised,
matching :func:`gsobe.spectral.forward_transform`).  Per mode the equation reads

    u_tt = -phi(xi)**2 u + N(u),

so the linear flow is a rotation in the ``(phi u, u_t)`` plane and the zero mode
only sees ``N``, which vanishes there because every nonlinear term is a second
x-derivative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cutoff import CutoffFn
from .dispersion import ModelParams, check_k, phi as phi_symbol, v2_multiplier
from .errors import ParameterError, StructuralError
from .spectral import GridSpec, PAD_FACTOR, RealField, from_fine, to_fine
from .trajectory import Trajectory

POTENTIAL = "potential"
SOURCE = "source"
DEFAULT_BLOWUP_FACTOR = 1e6


@dataclass(frozen=True)
class CauchyData:
    """Initial displacement ``phi`` and the potential ``psi`` of the initial velocity.

    The velocity enters only through ``xi**2 psi_hat / phi_symbol``; see
    :func:`initial_velocity_hat` for the sign this induces.
    """
    phi: RealField
    psi: RealField

    def __post_init__(self):
        if self.phi.grid != self.psi.grid:
            raise StructuralError("phi and psi must share a grid")

    @property
    def grid(self) -> GridSpec:
        return self.phi.grid

    @classmethod
    def from_functions(cls, grid: GridSpec, phi_fn, psi_fn=None) -> "CauchyData":
        psi = RealField.zeros(grid) if psi_fn is None else RealField.from_function(grid, psi_fn)
        return cls(RealField.from_function(grid, phi_fn), psi)


# -- helpers on half spectra ---------------------------------------------------

def _rfft(f: np.ndarray) -> np.ndarray:
    return np.fft.rfft(f, axis=-1) / f.shape[-1]


def _irfft(ch: np.ndarray, n: int) -> np.ndarray:
    return np.fft.irfft(ch * n, n, axis=-1)


def _symbols(grid: GridSpec, k: int):
    xi = grid.rwavenumbers
    return xi, phi_symbol(xi, k), v2_multiplier(xi, k)


def _sin_over(tau, ph):
    # sin(tau*phi)/phi with the limit tau at phi = 0
    return tau * np.sinc(tau * ph / np.pi)


def initial_velocity_hat(data: CauchyData, k: int) -> np.ndarray:
    """Half spectrum of ``u_t(., 0)`` for the linear flow, ``xi**2 psi_hat``.

    This is ``-psi''``: the V2 propagator ``sin(t phi) xi**2 psi_hat / phi``
    differentiates to ``xi**2 psi_hat`` at ``t = 0``.
    """
    check_k(k)
    xi = data.grid.rwavenumbers
    return xi ** 2 * _rfft(data.psi.samples)


def _linear_hat(data: CauchyData, t, k):
    """Half spectra of ``u`` and ``u_t`` at times ``t`` (scalar or 1-d array)."""
    k = check_k(k)
    _, ph, v2 = _symbols(data.grid, k)
    t = np.asarray(t, dtype=float)[..., None]
    ph0 = _rfft(data.phi.samples)
    ps0 = _rfft(data.psi.samples)
    c, s = np.cos(t * ph), np.sin(t * ph)
    uh = c * ph0 + s * v2 * ps0
    vh = -ph * s * ph0 + c * (data.grid.rwavenumbers ** 2) * ps0
    return uh, vh


def linear_evolve(data: CauchyData, t: float, k: int) -> RealField:
    """Free evolution ``cos(t phi) phi_hat + sin(t phi) (xi^2/phi) psi_hat``."""
    if not np.isfinite(t):
        raise ParameterError("t must be finite")
    uh, _ = _linear_hat(data, float(t), k)
    return RealField(data.grid, _irfft(uh, data.grid.n_points))


def linear_velocity(data: CauchyData, t: float, k: int) -> RealField:
    _, vh = _linear_hat(data, float(t), k)
    return RealField(data.grid, _irfft(vh, data.grid.n_points))


def linear_trajectory(data: CauchyData, times, k: int) -> Trajectory:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or not np.all(np.isfinite(times)):
        raise ParameterError("times must be a finite 1-d sequence")
    uh, vh = _linear_hat(data, times, k)
    n = data.grid.n_points
    return Trajectory(data.grid, times, _irfft(uh, n), _irfft(vh, n))


def linear_energy(u: RealField, ut: RealField, k: int) -> float:
    """``||u_t||^2 + ||phi(D) u||^2`` in the discrete Parseval normalisation."""
    ph = phi_symbol(u.grid.wavenumbers, k)
    uh = np.fft.fft(u.samples) / u.grid.n_points
    vh = np.fft.fft(ut.samples) / u.grid.n_points
    return float(np.sum(np.abs(vh) ** 2 + (ph * np.abs(uh)) ** 2))


# -- quadrature ----------------------------------------------------------------

def simpson_weights(m: int, h: float) -> np.ndarray:
    """Weights for ``m`` uniform intervals of width ``h``.

    Composite Simpson; an odd ``m >= 3`` closes with the 3/8 rule on the last
    three intervals so the order stays 4.  ``m == 1`` falls back to the
    trapezoid.
    """
    if m < 1:
        raise ParameterError("at least 2 time samples are required")
    w = np.zeros(m + 1)
    if m == 1:
        w[:] = 0.5
        return w * h
    n_simp = m if m % 2 == 0 else m - 3
    if n_simp:
        w[0:n_simp + 1:2] += 2.0 / 3.0
        w[1:n_simp:2] += 4.0 / 3.0
        w[0] -= 1.0 / 3.0
        w[n_simp] -= 1.0 / 3.0
    if m % 2:
        w[m - 3:m + 1] += np.array([3.0, 9.0, 9.0, 3.0]) / 8.0
    return w * h


def _forcing_array(forcing, grid: GridSpec | None = None) -> tuple[GridSpec, np.ndarray]:
    if isinstance(forcing, np.ndarray):
        if grid is None:
            raise StructuralError("a raw forcing array needs an explicit grid")
        arr = np.asarray(forcing, dtype=float)
    else:
        fields = list(forcing)
        if not fields:
            raise ParameterError("at least 2 time samples are required")
        grid = fields[0].grid
        for f in fields:
            if f.grid != grid:
                raise StructuralError("forcing samples live on different grids")
        arr = np.stack([f.samples for f in fields])
    if arr.ndim != 2 or arr.shape[1] != grid.n_points:
        raise StructuralError(f"forcing must have shape (m+1, {grid.n_points}), got {arr.shape}")
    if arr.shape[0] < 2:
        raise ParameterError("at least 2 time samples are required")
    return grid, arr


def _kernel(kind, tau, ph, v2):
    if kind == POTENTIAL:
        return np.sin(tau * ph) * v2, np.cos(tau * ph) * v2 * ph
    if kind == SOURCE:
        return _sin_over(tau, ph), np.cos(tau * ph)
    raise ParameterError(f"unknown Duhamel kind {kind!r}")


def duhamel_integral(forcing: Sequence[RealField] | np.ndarray, t: float, k: int,
                     kind: str = POTENTIAL, grid: GridSpec | None = None) -> RealField:
    """``int_0^t K(t - s) f(s) ds`` from samples of ``f`` on a uniform grid of ``[0, t]``.

    ``kind="potential"`` propagates each sample with the V2 multiplier
    ``sin(tau phi) xi^2 / phi``; ``kind="source"`` uses ``sin(tau phi) / phi``,
    the response of ``u_tt + phi^2 u = f`` with zero data.
    """
    grid, arr = _forcing_array(forcing, grid)
    m = arr.shape[0] - 1
    if not np.isfinite(t) or t < 0:
        raise ParameterError(f"t must be finite and nonnegative, got {t!r}")
    _, ph, v2 = _symbols(grid, k)
    s = np.linspace(0.0, t, m + 1)
    w = simpson_weights(m, t / m)
    K, _ = _kernel(kind, (t - s)[:, None], ph, v2)
    out = np.sum(w[:, None] * K * _rfft(arr), axis=0)
    return RealField(grid, _irfft(out, grid.n_points))


def _duhamel_running(Fh: np.ndarray, times: np.ndarray, ph, v2, kind):
    """Duhamel integral and its time derivative at every sample time.

    ``Fh[j]`` is the forcing spectrum at ``times[j]`` (uniform, starting at 0).
    The value at ``times[i]`` integrates over ``times[:i+1]``.
    """
    n_t = times.size
    h = times[1] - times[0]
    D = np.zeros_like(Fh)
    Dt = np.zeros_like(Fh)
    for i in range(1, n_t):
        w = simpson_weights(i, h)
        K, Kt = _kernel(kind, (times[i] - times[:i + 1])[:, None], ph, v2)
        D[i] = np.sum(w[:, None] * K * Fh[:i + 1], axis=0)
        Dt[i] = np.sum(w[:, None] * Kt * Fh[:i + 1], axis=0)
    return D, Dt


# -- nonlinearity --------------------------------------------------------------

def _nonlinear_hat(uh: np.ndarray, xi: np.ndarray, n: int, coeffs) -> np.ndarray:
    c1, c2, c3, c4 = coeffs
    xi2 = xi ** 2
    m = PAD_FACTOR * n
    uf = to_fine(uh, n, m)
    quad = from_fine(uf * uf, n) if (c1 or c2) else 0.0
    out = np.zeros_like(uh)
    if c1 or c2:
        out = out + (-c1 * xi2 + c2 * xi2 ** 2) * quad
    if c3:
        uxxf = to_fine(-xi2 * uh, n, m)
        out = out - c3 * xi2 * from_fine(uf * uxxf, n)
    if c4:
        out = out - c4 * xi2 * from_fine(uf * uf * uf, n)
    return out


def nonlinear_term(u: RealField, params: ModelParams) -> RealField:
    """``N(u)``, the right-hand side added to ``u_tt = u_xx - k u_xxxx + u_xxxxxx``."""
    grid = u.grid
    n = grid.n_points
    out = _nonlinear_hat(_rfft(u.samples), grid.rwavenumbers, n, params.nl_coeffs)
    return RealField(grid, _irfft(out, n))


# -- Picard iteration ----------------------------------------------------------

@dataclass(frozen=True)
class PicardResult:
    """Iterates ``u^(0), u^(1), ...`` on a common time grid and the sup-norm gaps
    ``max |u^(j+1) - u^(j)|``."""
    iterates: tuple[Trajectory, ...]
    gaps: tuple[float, ...]
    diverged: bool

    def __len__(self):
        return len(self.iterates)

    def __getitem__(self, i):
        return self.iterates[i]

    def __iter__(self):
        return iter(self.iterates)

    @property
    def final(self) -> Trajectory:
        return self.iterates[-1]

    def ratios(self) -> np.ndarray:
        g = np.asarray(self.gaps)
        with np.errstate(divide="ignore", invalid="ignore"):
            return g[1:] / g[:-1]


def _growing(gaps, window=3) -> bool:
    if len(gaps) < window + 1:
        return False
    tail = gaps[-(window + 1):]
    return all(b > a for a, b in zip(tail, tail[1:]))


def picard_iterate(data: CauchyData, T: float, n_iter: int, params: ModelParams,
                   cutoff: CutoffFn | None = None, n_steps: int = 80,
                   span: float = 2.0) -> PicardResult:
    """Iterate ``u <- u_lin + eta(t/T) int_0^t sin((t-s)phi)/phi N(u(s)) ds``.

    The time grid is ``linspace(0, span*T, n_steps + 1)``; ``span = 2`` covers
    the whole support of the cutoff.  Divergence (gaps growing over three
    consecutive iterates) is recorded in the result, not raised.
    """
    if not (np.isfinite(T) and 0 < T <= 1):
        raise ParameterError(f"T must lie in (0, 1], got {T!r}")
    if int(n_iter) != n_iter or n_iter < 1:
        raise ParameterError(f"n_iter must be a positive integer, got {n_iter!r}")
    if int(n_steps) != n_steps or n_steps < 2:
        raise ParameterError("n_steps must be an integer >= 2")
    if not (np.isfinite(span) and span > 0):
        raise ParameterError("span must be positive")
    cutoff = CutoffFn(T) if cutoff is None else cutoff
    grid = data.grid
    n = grid.n_points
    xi, ph, v2 = _symbols(grid, params.k)
    times = np.linspace(0.0, span * T, int(n_steps) + 1)
    eta = np.asarray(cutoff(times))[:, None]
    deta = np.asarray(cutoff.derivative(times))[:, None]

    ulin_h, vlin_h = _linear_hat(data, times, params.k)
    uh, vh = ulin_h, vlin_h
    iterates = [Trajectory(grid, times, _irfft(uh, n), _irfft(vh, n))]
    gaps: list[float] = []
    diverged = False
    for _ in range(int(n_iter)):
        Nh = np.stack([_nonlinear_hat(row, xi, n, params.nl_coeffs) for row in uh])
        D, Dt = _duhamel_running(Nh, times, ph, v2, SOURCE)
        uh = ulin_h + eta * D
        vh = vlin_h + deta * D + eta * Dt
        u = _irfft(uh, n)
        if not np.all(np.isfinite(u)):
            diverged = True
            break
        gaps.append(float(np.max(np.abs(u - iterates[-1].u))))
        iterates.append(Trajectory(grid, times, u, _irfft(vh, n)))
        if _growing(gaps):
            diverged = True
            break
    return PicardResult(tuple(iterates), tuple(gaps), diverged)


# -- nonlinear stepper ---------------------------------------------------------

def _step_count(T: float, dt: float) -> int:
    q = T / dt
    n = int(round(q))
    if n >= 1 and abs(n - q) <= 1e-9 * q:
        return n
    return int(np.ceil(q))


def evolve(data: CauchyData, T: float, dt: float, params: ModelParams,
           save_every: int = 1, blowup_factor: float = DEFAULT_BLOWUP_FACTOR) -> Trajectory:
    """Advance the Cauchy problem to ``T`` with a trigonometric integrator.

    One step of size ``h`` reads, per mode,

        u+ = cos(h phi) u + h sinc(h phi) v + h^2/2 sinc(h phi) N(u)
        v+ = -phi sin(h phi) u + cos(h phi) v + h/2 (cos(h phi) N(u) + N(u+))

    which is exact when ``N = 0`` and second order otherwise.  ``T/dt`` is
    rounded up to a whole number of equal steps landing on ``T``.  If the sup
    norm of ``u`` exceeds ``blowup_factor`` times its initial value the run
    stops and the trajectory is returned with ``blown_up=True``.
    """
    if not (np.isfinite(dt) and dt > 0):
        raise ParameterError(f"dt must be positive, got {dt!r}")
    if not (np.isfinite(T) and T >= dt):
        raise ParameterError(f"T must satisfy T >= dt, got T={T!r}, dt={dt!r}")
    if int(save_every) != save_every or save_every < 1:
        raise ParameterError("save_every must be a positive integer")
    grid = data.grid
    n = grid.n_points
    xi, ph, _ = _symbols(grid, params.k)
    steps = _step_count(T, dt)
    h = T / steps
    c, s = np.cos(h * ph), np.sin(h * ph)
    sc = np.sinc(h * ph / np.pi)
    linear = params.is_linear

    uh = _rfft(data.phi.samples)
    vh = initial_velocity_hat(data, params.k)
    u = _irfft(uh, n)
    ref = float(np.max(np.abs(u)))
    cap = blowup_factor * ref if ref > 0 else np.inf

    times, us, vs = [0.0], [u], [_irfft(vh, n)]
    Nh = np.zeros_like(uh) if linear else _nonlinear_hat(uh, xi, n, params.nl_coeffs)
    blown = False
    for i in range(1, steps + 1):
        uh_new = c * uh + h * sc * vh + 0.5 * h * h * sc * Nh
        Nh_new = np.zeros_like(uh) if linear else _nonlinear_hat(uh_new, xi, n, params.nl_coeffs)
        vh = -ph * s * uh + c * vh + 0.5 * h * (c * Nh + Nh_new)
        uh, Nh = uh_new, Nh_new
        if i % save_every == 0 or i == steps or not linear:
            u = _irfft(uh, n)
            if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > cap:
                blown = True
                break
        if i % save_every == 0 or i == steps:
            times.append(i * h)
            us.append(u)
            vs.append(_irfft(vh, n))
    return Trajectory(grid, np.array(times), np.array(us), np.array(vs), blown_up=blown)
