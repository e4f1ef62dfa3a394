"""Periodic grids, Fourier transforms, spectral derivatives and dealiased products.

The whole line is replaced by a torus of length ``L`` sampled at ``n`` points.
Coefficients follow the numpy FFT ordering, so index ``j`` of a coefficient
array carries the wavenumber ``2*pi*fftfreq(n, L/n)[j]``; the forward transform
carries the ``1/n`` factor, which makes

    mean(|f|**2) == sum(|c|**2)

the discrete Parseval identity used throughout the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ParameterError, StructuralError

#: Zero-padding factor for products; 3 covers cubic nonlinearities.
PAD_FACTOR = 3


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GridSpec:
    n_points: int
    domain_length: float

    def __post_init__(self):
        n = self.n_points
        if int(n) != n or n < 8 or n % 2:
            raise ParameterError(f"n_points must be an even integer >= 8, got {n!r}")
        if not np.isfinite(self.domain_length) or self.domain_length <= 0:
            raise ParameterError(f"domain_length must be positive, got {self.domain_length!r}")

    @property
    def dx(self) -> float:
        return self.domain_length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        """Sample points ``0, dx, ..., L - dx``."""
        return _frozen(np.arange(self.n_points) * self.dx, float)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in FFT order (``-n/2`` sits at index ``n/2``)."""
        return _frozen(2 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx), float)

    @cached_property
    def rwavenumbers(self) -> np.ndarray:
        """Nonnegative wavenumbers matching ``numpy.fft.rfft`` output."""
        return _frozen(2 * np.pi * np.fft.rfftfreq(self.n_points, d=self.dx), float)

    @property
    def dxi(self) -> float:
        return 2 * np.pi / self.domain_length


@dataclass(frozen=True)
class RealField:
    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.shape != (self.grid.n_points,):
            raise StructuralError(
                f"expected {self.grid.n_points} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ParameterError("field samples must be finite")
        object.__setattr__(self, "samples", _frozen(s, float))

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "RealField":
        return cls(grid, fn(grid.x))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "RealField":
        return cls(grid, np.zeros(grid.n_points))

    def l2_norm(self) -> float:
        """Continuum-style L^2 norm, ``sqrt(dx * sum f**2)``."""
        return float(np.sqrt(self.grid.dx * np.sum(self.samples ** 2)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.samples)))


@dataclass(frozen=True)
class SpectralField:
    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.grid.n_points,):
            raise StructuralError(
                f"expected {self.grid.n_points} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", _frozen(c, complex))

    @property
    def wavenumbers(self) -> np.ndarray:
        return self.grid.wavenumbers

    def hermitian_defect(self) -> float:
        """max |c(-xi) - conj(c(xi))|; zero for coefficients of real data."""
        c = self.coeffs
        mirrored = np.roll(c[::-1], 1)
        return float(np.max(np.abs(mirrored - np.conj(c))))

    def coefficient_at(self, j: int) -> complex:
        """Coefficient of the mode ``exp(2*pi*i*j*x/L)``."""
        return complex(self.coeffs[j % self.grid.n_points])


@dataclass(frozen=True)
class LatticeSpec:
    """Uniform frequency lattice in (xi, tau).

    Lattice points are ``xi_j = j * dxi`` and ``tau_m = m * dtau`` with
    ``j`` in ``-n_xi/2 .. n_xi/2 - 1`` (likewise for ``m``), so the origin is a
    lattice point and integer index sums are cell-exact.
    """
    n_xi: int
    n_tau: int
    dxi: float
    dtau: float

    def __post_init__(self):
        for name in ("n_xi", "n_tau"):
            v = getattr(self, name)
            if int(v) != v or v < 2 or v % 2:
                raise ParameterError(f"{name} must be an even integer >= 2, got {v!r}")
        for name in ("dxi", "dtau"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ParameterError(f"{name} must be positive, got {v!r}")

    @classmethod
    def from_extent(cls, n_xi: int, n_tau: int, xi_max: float, tau_max: float) -> "LatticeSpec":
        """Lattice covering ``[-xi_max, xi_max) x [-tau_max, tau_max)``."""
        return cls(n_xi, n_tau, 2 * xi_max / n_xi, 2 * tau_max / n_tau)

    @cached_property
    def xi_index(self) -> np.ndarray:
        return _frozen(np.arange(-self.n_xi // 2, self.n_xi // 2), int)

    @cached_property
    def tau_index(self) -> np.ndarray:
        return _frozen(np.arange(-self.n_tau // 2, self.n_tau // 2), int)

    @property
    def xi(self) -> np.ndarray:
        return self.xi_index * self.dxi

    @property
    def tau(self) -> np.ndarray:
        return self.tau_index * self.dtau

    @property
    def cell(self) -> float:
        return self.dxi * self.dtau

    def mesh(self):
        """``(XI, TAU)`` arrays of shape ``(n_xi, n_tau)``."""
        return np.meshgrid(self.xi, self.tau, indexing="ij")


@dataclass(frozen=True)
class SpaceTimeSpectrum:
    """Samples of a space-time Fourier transform on a ``LatticeSpec``.

    ``coeffs[j, m]`` is the value at ``(lattice.xi[j], lattice.tau[m])``.
    """
    lattice: LatticeSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        shape = (self.lattice.n_xi, self.lattice.n_tau)
        if c.shape != shape:
            raise StructuralError(f"expected coefficient shape {shape}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ParameterError("spectrum entries must be finite")
        object.__setattr__(self, "coeffs", _frozen(c, complex))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * self.lattice.cell))


def _same_grid(fields):
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise StructuralError("fields live on different grids")
    return grid


def forward_transform(f: RealField) -> SpectralField:
    if not isinstance(f, RealField):
        raise StructuralError("forward_transform expects a RealField")
    return SpectralField(f.grid, np.fft.fft(f.samples) / f.grid.n_points)


def inverse_transform(fh: SpectralField) -> RealField:
    values = np.fft.ifft(np.asarray(fh.coeffs) * fh.grid.n_points)
    return RealField(fh.grid, values.real)


def derivative_symbol(xi: np.ndarray, order: int, nyquist_index: int | None = None) -> np.ndarray:
    """``(i xi)**order``, with the unpaired Nyquist mode zeroed for odd orders.

    On the grid the Nyquist mode is ``cos(n x pi / L)`` and its odd derivatives
    vanish at every sample point, so zeroing is exact and keeps real data real.
    """
    sym = (1j * xi) ** order
    if order % 2 and nyquist_index is not None:
        sym = np.array(sym, copy=True)
        sym[nyquist_index] = 0.0
    return sym


def spectral_derivative(fh: SpectralField, order: int) -> SpectralField:
    if int(order) != order or order < 0:
        raise ParameterError(f"derivative order must be a nonnegative integer, got {order!r}")
    if order == 0:
        return fh
    grid = fh.grid
    sym = derivative_symbol(grid.wavenumbers, int(order), grid.n_points // 2)
    return SpectralField(grid, fh.coeffs * sym)


# -- dealiased products -------------------------------------------------------
# Internally products work on rfft coefficient arrays of length n/2 + 1 carrying
# the same 1/n normalisation as forward_transform.

def pad_rfft(ch: np.ndarray, n: int, m: int) -> np.ndarray:
    """Zero-pad half-spectrum ``ch`` of an n-grid onto an m-grid.

    The Nyquist coefficient is split evenly between ``+n/2`` and ``-n/2``.
    """
    out = np.zeros(m // 2 + 1, dtype=complex)
    half = n // 2
    out[:half] = ch[:half]
    out[half] = 0.5 * ch[half].real
    return out


def truncate_rfft(ch: np.ndarray, n: int) -> np.ndarray:
    """Project a fine half-spectrum back onto the n-grid (Nyquist pair folded)."""
    half = n // 2
    out = np.empty(half + 1, dtype=complex)
    out[:half] = ch[:half]
    out[half] = 2.0 * ch[half].real
    return out


def to_fine(ch: np.ndarray, n: int, m: int) -> np.ndarray:
    """Physical samples on the m-grid of the trig polynomial with coefficients ``ch``."""
    return np.fft.irfft(pad_rfft(ch, n, m) * m, m)


def from_fine(values: np.ndarray, n: int) -> np.ndarray:
    m = values.shape[-1]
    return truncate_rfft(np.fft.rfft(values) / m, n)


def dealiased_product(fields: list[RealField], degree: int) -> RealField:
    """Pointwise product of ``degree`` fields, evaluated without aliasing.

    Each factor is interpolated onto a grid ``PAD_FACTOR`` times finer, the
    product is taken there and the result is projected back onto the original
    modes.
    """
    if degree not in (2, 3):
        raise ParameterError(f"degree must be 2 or 3, got {degree!r}")
    if len(fields) != degree:
        raise StructuralError(f"expected {degree} fields, got {len(fields)}")
    grid = _same_grid(fields)
    n = grid.n_points
    m = PAD_FACTOR * n
    prod = np.ones(m)
    for f in fields:
        prod = prod * to_fine(np.fft.rfft(f.samples) / n, n, m)
    ch = from_fine(prod, n)
    return RealField(grid, np.fft.irfft(ch * n, n))
