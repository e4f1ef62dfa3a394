import numpy as np
import pytest

from gsobe.spectral import GridSpec, RealField


def band_limited(grid: GridSpec, rng: np.random.Generator, top: int, scale: float = 1.0) -> RealField:
    """Random real trig polynomial with modes |j| <= top."""
    n = grid.n_points
    ch = np.zeros(n // 2 + 1, dtype=complex)
    ch[0] = rng.standard_normal()
    ch[1:top + 1] = rng.standard_normal(top) + 1j * rng.standard_normal(top)
    return RealField(grid, scale * np.fft.irfft(ch, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def grid():
    return GridSpec(64, 2 * np.pi)


def fourth_order_utt(u_of_t, t: float, h: float) -> np.ndarray:
    """Five-point centred second derivative in time."""
    us = [u_of_t(t + j * h) for j in (-2, -1, 0, 1, 2)]
    return (-us[0] + 16 * us[1] - 30 * us[2] + 16 * us[3] - us[4]) / (12 * h * h)


def linear_rhs(u: np.ndarray, L: float, k: int) -> np.ndarray:
    """u_xx - k u_xxxx + u_xxxxxx by FFT, written out independently of the package."""
    n = u.size
    xi = 2 * np.pi * np.fft.fftfreq(n, L / n)
    sym = -xi ** 2 - k * xi ** 4 - xi ** 6
    return np.fft.ifft(sym * np.fft.fft(u)).real


def single_mode_duhamel(t: float, ph: float, xi2: float, kind: str) -> float:
    """int_0^t K(t-s) ds for constant forcing: (1 - cos t phi) times xi^2/phi^2 or 1/phi^2."""
    base = (1 - np.cos(t * ph)) / ph ** 2
    return base * xi2 if kind == "potential" else base
