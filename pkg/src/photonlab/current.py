"""Photon number, current, and helicity densities with their conservation checks.

All bilinears pair the positive-frequency fields with their conjugates in the
convention rho = Im[conj(A+).E+] (natural units), whose box integral equals
the k-space norm; the current splits into a transverse A x B part and a
longitudinal phi E_par part, and the helicity density is the same pairing
under a cross product without the i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fdops
from .fields import FieldSnapshot, SpatialGrid


@dataclass(frozen=True)
class CurrentField:
    """Real densities on a spatial grid at one time.

    rho is the photon number density, j its flux partner in the continuity
    equation, s_hel the helicity density (None unless built from a single
    polarization).
    """

    grid: SpatialGrid
    time: float
    rho: np.ndarray
    j: np.ndarray
    s_hel: np.ndarray | None = None


def _imag_dot(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Im[conj(x).y] over the trailing component axis."""
    return np.sum((np.conj(x) * y).imag, axis=-1)


def _imag_cross(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Im[conj(x) x y] componentwise."""
    return np.cross(np.conj(x), y).imag


def number_density(snap: FieldSnapshot, eps: float = 1.0) -> np.ndarray:
    """rho = eps Im[conj(A+).E+]; eps is the relative permittivity scale."""
    return eps * _imag_dot(snap.a_plus, snap.e_plus)


def current_density(snap: FieldSnapshot, eps: float = 1.0, mu: float = 1.0) -> np.ndarray:
    """J = Im[conj(A_perp+) x B+]/mu + eps Im[conj(phi+) E_par+].

    The transverse/longitudinal split of A comes spectrally from the
    synthesis; nothing here applies a position-space projection. The second
    term broadcasts the scalar phi over the longitudinal E vector.
    """
    a_perp = snap.a_plus - snap.a_par_plus
    transverse = _imag_cross(a_perp, snap.b_plus) / mu
    longitudinal = eps * (np.conj(snap.phi_plus)[..., None] * snap.e_par_plus).imag
    return transverse + longitudinal


def helicity_density(snap: FieldSnapshot) -> np.ndarray:
    """S = -Re[A+ x conj(E+)] for a single-polarization snapshot.

    Equals lambda rho e_k pointwise for single-direction transverse states
    and vanishes identically for longitudinal ones.
    """
    if len(snap.lambdas_present) > 1:
        raise ValueError("helicity density defined per lambda")
    return -np.cross(snap.a_plus, np.conj(snap.e_plus)).real


def photon_current(snap: FieldSnapshot, eps: float = 1.0, mu: float = 1.0,
                   with_helicity: bool = False) -> CurrentField:
    """Bundle rho and J (and S for single-polarization snapshots)."""
    s = None
    if with_helicity:
        s = helicity_density(snap)
    return CurrentField(
        grid=snap.grid,
        time=snap.time,
        rho=number_density(snap, eps),
        j=current_density(snap, eps, mu),
        s_hel=s,
    )


def position_norm(cf: CurrentField, grid: SpatialGrid | None = None) -> float:
    """Box Riemann sum of rho; spectrally exact for band-limited periodic fields."""
    g = cf.grid if grid is None else grid
    return float(np.sum(cf.rho) * g.cell_volume)


def continuity_residual(cf_prev: CurrentField, cf_now: CurrentField, cf_next: CurrentField,
                        source=None) -> np.ndarray:
    """d rho/dt + div J - source with centered differences, periodic wrap."""
    if not (cf_prev.grid == cf_now.grid == cf_next.grid):
        raise ValueError("current fields must share one spatial grid")
    dt_lo = cf_now.time - cf_prev.time
    dt_hi = cf_next.time - cf_now.time
    if abs(dt_hi - dt_lo) > 1e-12 * max(abs(dt_lo), abs(dt_hi)):
        raise ValueError("current fields must be equally spaced in time")
    g = cf_now.grid
    ones = (1.0,) * g.dimension
    dt_rho = (cf_next.rho - cf_prev.rho) / (dt_lo + dt_hi)
    div_j = fdops.divergence(cf_now.j, g.spacing, g.dimension, ones)
    res = dt_rho + div_j
    if source is not None:
        res = res - np.asarray(source)
    return res
