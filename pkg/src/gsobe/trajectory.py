"""Time-sampled solution storage and its CSV / binary export.

Binary layout (all little-endian): one ``uint64`` row count ``R`` followed by
four float64 columns of length ``R`` stored one after another (column-major):
``t``, ``x``, ``u``, ``u_t``.  Rows enumerate time-major, i.e. row
``i * n + j`` is time ``i`` and grid point ``j``; the CSV export uses the same
row order under the header ``t,x,u,u_t``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructuralError
from .spectral import GridSpec, RealField


@dataclass(frozen=True)
class Trajectory:
    grid: GridSpec
    times: np.ndarray
    u: np.ndarray
    ut: np.ndarray
    blown_up: bool = False

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        u = np.array(self.u, dtype=float)
        ut = np.array(self.ut, dtype=float)
        shape = (times.size, self.grid.n_points)
        if times.ndim != 1 or u.shape != shape or ut.shape != shape:
            raise StructuralError(
                f"trajectory arrays do not match: times {times.shape}, u {u.shape}, ut {ut.shape}")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise StructuralError("trajectory times must be strictly increasing")
        for name, a in (("times", times), ("u", u), ("ut", ut)):
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def __len__(self):
        return self.times.size

    def state(self, i: int) -> tuple[RealField, RealField]:
        return RealField(self.grid, self.u[i]), RealField(self.grid, self.ut[i])

    def nearest_index(self, t: float) -> int:
        return int(np.argmin(np.abs(self.times - t)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.u))) if self.u.size else 0.0


def _columns(traj: Trajectory):
    nt, n = traj.u.shape
    t = np.repeat(traj.times, n)
    x = np.tile(traj.grid.x, nt)
    return t, x, traj.u.ravel(), traj.ut.ravel()


def write_csv(traj: Trajectory, path) -> None:
    cols = np.column_stack(_columns(traj))
    with open(path, "w", newline="") as fh:
        fh.write("t,x,u,u_t\n")
        for row in cols:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_binary(traj: Trajectory, path) -> None:
    cols = _columns(traj)
    with open(path, "wb") as fh:
        fh.write(np.array([cols[0].size], dtype="<u8").tobytes())
        for c in cols:
            fh.write(np.ascontiguousarray(c, dtype="<f8").tobytes())


def read_binary(path) -> dict[str, np.ndarray]:
    """Inverse of :func:`write_binary`; returns the four named columns."""
    raw = open(path, "rb").read()
    rows = int(np.frombuffer(raw[:8], dtype="<u8")[0])
    data = np.frombuffer(raw[8:], dtype="<f8")
    if data.size != 4 * rows:
        raise StructuralError(f"binary dump holds {data.size} values, expected {4 * rows}")
    return dict(zip(("t", "x", "u", "u_t"), data.reshape(4, rows)))
