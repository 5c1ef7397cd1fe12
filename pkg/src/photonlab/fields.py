"""Positive-frequency field synthesis from mode amplitudes.

A+(x,t) = i sqrt(2) sum_lambda sum_k w(k) c_lambda(k) e_lambda(k) e^{i(k.x - w t)}
in natural units (c = hbar = eps0 = 1), with w(k) the invariant measure weight.
E+ and B+ come from exact k-space derivatives (multiplication by i omega, i k);
finite differences are reserved for the verification stencils so the checks
stay independent of the synthesis path. phi+ = c A+_par throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fdops
from .modes import KGrid, ModeAmplitudes, kvectors, measure_weights
from .relativity import FourVector, minkowski_dot, polarization_bases

# Expansion prefactor: |alpha|^2 = 2 makes the box integral of the number
# density equal the k-space norm exactly.
AMPLITUDE_SCALE = 1j * math.sqrt(2.0)

_MODE_CHUNK = 64

# Column layout of the per-mode coefficient matrix fed to the gemm.
_COLS_A = slice(0, 3)
_COLS_E = slice(3, 6)
_COLS_B = slice(6, 9)
_COL_PHI = 9
_COLS_APAR = slice(10, 13)
_COLS_EPAR = slice(13, 16)
_NCOMP = 16


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic sample box; 1D grids vary along z only.

    Every used axis runs origin + j * spacing for j = 0..n-1; the box length
    is n * spacing and the stencils wrap periodically.
    """

    n_per_axis: int
    spacing: float
    dimension: int = 3
    origin: float = 0.0

    def __post_init__(self):
        if self.dimension not in (1, 3):
            raise ValueError("dimension must be 1 or 3")
        if self.n_per_axis < 2:
            raise ValueError("n_per_axis must be at least 2")
        if not self.spacing > 0.0:
            raise ValueError("spacing must be positive")

    @property
    def box_length(self) -> float:
        return self.n_per_axis * self.spacing

    @property
    def n_points(self) -> int:
        return self.n_per_axis ** self.dimension

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dimension

    def axis_positions(self) -> np.ndarray:
        return self.origin + np.arange(self.n_per_axis) * self.spacing

    def field_shape(self, components: int = 0) -> tuple:
        shape = (self.n_per_axis,) * self.dimension
        return shape + (components,) if components else shape


def dual_grid(kgrid: KGrid, n_per_axis: int) -> SpatialGrid:
    """Fourier-dual sample box: length 2 pi / dk, centered on the origin."""
    length = 2.0 * math.pi / kgrid.spacing
    return SpatialGrid(
        n_per_axis=n_per_axis,
        spacing=length / n_per_axis,
        dimension=kgrid.dimension,
        origin=-0.5 * length,
    )


def is_dual(grid: SpatialGrid, kgrid: KGrid) -> bool:
    if grid.dimension != kgrid.dimension:
        return False
    return abs(grid.box_length * kgrid.spacing / (2.0 * math.pi) - 1.0) < 1e-9


@dataclass(frozen=True)
class FieldSnapshot:
    """Complex positive-frequency fields sampled on a spatial grid at one time.

    Vector arrays carry a trailing component axis of 3; a_par_plus/e_par_plus
    hold the spectrally longitudinal parts so bilinears never need a position
    space transverse split. bloch holds the per-axis quasi-periodic wrap
    factors when the grid is the Fourier dual of the synthesizing k-lattice,
    else None (finite-difference stencils then refuse the snapshot).
    """

    grid: SpatialGrid
    time: float
    a_plus: np.ndarray
    e_plus: np.ndarray
    b_plus: np.ndarray
    phi_plus: np.ndarray
    a_par_plus: np.ndarray
    e_par_plus: np.ndarray
    speed: float
    bloch: tuple | None
    lambdas_present: frozenset

    def twists(self) -> tuple:
        if self.bloch is None:
            raise ValueError("finite differences need the Fourier-dual spatial grid")
        return self.bloch


def synthesize(m: ModeAmplitudes, grid: SpatialGrid, t: float, omega_scale: float = 1.0) -> FieldSnapshot:
    """Evaluate A+, E+, B+, phi+ (and longitudinal parts) at time t.

    omega_scale deliberately mis-scales the frequency used in the time
    derivative that builds E+ (a dispersion fault for verification drills);
    1.0 is the physical value.
    """
    if grid.dimension != m.grid.dimension:
        raise ValueError("mode grid and spatial grid dimensions differ")
    k = kvectors(m.grid)
    kmag = np.sqrt(np.sum(k * k, axis=-1))
    omega = m.speed * kmag
    w = measure_weights(m.grid, m.speed)
    bases = polarization_bases(k)
    phase_t = np.exp(-1j * omega * t)

    coeff_rows = []
    kvec_rows = []
    for row, (pol, unit) in enumerate(
        ((1, bases.e_plus), (-1, bases.e_minus), ("par", bases.e_par))
    ):
        c = m.amps[row]
        live = c != 0.0
        if not np.any(live):
            continue
        s = AMPLITUDE_SCALE * w[live] * c[live] * phase_t[live]
        u = unit[live]
        om = omega[live]
        km = kmag[live]
        block = np.zeros((s.size, _NCOMP), dtype=np.complex128)
        a_coef = s[:, None] * u
        block[:, _COLS_A] = a_coef
        if pol == "par":
            # phi = c A_par with c = 1; E_par = i(omega - |k|) s e_k is an
            # exact zero on shell in vacuum.
            block[:, _COL_PHI] = s
            block[:, _COLS_APAR] = a_coef
            e_par = (1j * (om * omega_scale - km))[:, None] * a_coef
            block[:, _COLS_EPAR] = e_par
            block[:, _COLS_E] = e_par
        else:
            block[:, _COLS_E] = (1j * om * omega_scale)[:, None] * a_coef
            block[:, _COLS_B] = (pol * km)[:, None] * a_coef
        coeff_rows.append(block)
        kvec_rows.append(k[live])

    out = np.zeros((_NCOMP, grid.n_points), dtype=np.complex128)
    if coeff_rows:
        coeffs = np.concatenate(coeff_rows, axis=0)
        kview = np.concatenate(kvec_rows, axis=0)
        live_cols = np.flatnonzero(np.any(coeffs != 0.0, axis=0))
        out[live_cols] = _mode_sum(coeffs[:, live_cols], kview, grid)

    shape = grid.field_shape()

    def vec(sl):
        return np.moveaxis(out[sl], 0, -1).reshape(shape + (3,)).copy()

    def sca(i):
        return out[i].reshape(shape).copy()

    bloch = None
    if is_dual(grid, m.grid):
        length = grid.box_length
        bloch = tuple(
            complex(np.exp(1j * m.grid.axis_values(a)[0] * length)) for a in m.grid.used_axes
        )

    present = frozenset(
        pol for row, pol in ((0, 1), (1, -1), (2, "par")) if np.any(m.amps[row] != 0.0)
    )
    return FieldSnapshot(
        grid=grid,
        time=float(t),
        a_plus=vec(_COLS_A),
        e_plus=vec(_COLS_E),
        b_plus=vec(_COLS_B),
        phi_plus=sca(_COL_PHI),
        a_par_plus=vec(_COLS_APAR),
        e_par_plus=vec(_COLS_EPAR),
        speed=m.speed,
        bloch=bloch,
        lambdas_present=present,
    )


def _mode_sum(coeffs: np.ndarray, k: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Direct summation sum_m coeffs[m, :] e^{i k_m . x} over all grid points.

    Per-axis phase tables keep the work at one complex gemm per mode chunk.
    Returns an array of shape (n_components, n_points).
    """
    x = grid.axis_positions()
    ncomp = coeffs.shape[1]
    total = np.zeros((ncomp, grid.n_points), dtype=np.complex128)
    n_modes = coeffs.shape[0]
    for start in range(0, n_modes, _MODE_CHUNK):
        stop = min(start + _MODE_CHUNK, n_modes)
        kc = k[start:stop]
        if grid.dimension == 1:
            plane = np.exp(1j * np.outer(kc[:, 2], x))
        else:
            px = np.exp(1j * np.outer(kc[:, 0], x))
            py = np.exp(1j * np.outer(kc[:, 1], x))
            pz = np.exp(1j * np.outer(kc[:, 2], x))
            plane = (
                px[:, :, None, None] * py[:, None, :, None] * pz[:, None, None, :]
            ).reshape(stop - start, -1)
        total += coeffs[start:stop].T @ plane
    return total


def maxwell_residual(prev: FieldSnapshot, now: FieldSnapshot, nxt: FieldSnapshot,
                     rho_e=None, j_e=None, c: float = 1.0, eps0: float = 1.0):
    """Residuals of the two sourced Maxwell equations on the + frequency part.

    Returns (div E - rho_e/eps0, dE/dt - c^2 curl B + J_e/eps0) with a centered
    difference in time and second-order centered differences in space.
    """
    if not (prev.grid == now.grid == nxt.grid):
        raise ValueError("snapshots must share one spatial grid")
    dt_lo = now.time - prev.time
    dt_hi = nxt.time - now.time
    if abs(dt_hi - dt_lo) > 1e-12 * max(abs(dt_lo), abs(dt_hi)):
        raise ValueError("snapshots must be equally spaced in time")
    twists = now.twists()
    grid = now.grid
    gauss = fdops.divergence(now.e_plus, grid.spacing, grid.dimension, twists)
    if rho_e is not None:
        gauss = gauss - np.asarray(rho_e) / eps0
    dt_e = (nxt.e_plus - prev.e_plus) / (dt_lo + dt_hi)
    ampere = dt_e - c * c * fdops.curl(now.b_plus, grid.spacing, grid.dimension, twists)
    if j_e is not None:
        ampere = ampere + np.asarray(j_e) / eps0
    return gauss, ampere


def lagrangian_density(e, b, j_e: FourVector, a: FourVector, c: float = 1.0, eps0: float = 1.0) -> float:
    """Standard invariant density 0.5 eps0 (E.E - c^2 B.B) - J_e^mu A_mu."""
    e = np.asarray(e, dtype=float).reshape(3)
    b = np.asarray(b, dtype=float).reshape(3)
    field_part = 0.5 * eps0 * (e @ e - c * c * (b @ b))
    return float(field_part - minkowski_dot(j_e, a))


def conjugate_momentum(e, eps0: float = 1.0):
    """Momentum conjugate to A: -eps0 E, pointwise on any field shape."""
    return -eps0 * np.asarray(e)
