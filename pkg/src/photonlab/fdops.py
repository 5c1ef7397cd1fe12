"""Centered finite-difference stencils on periodic and quasi-periodic grids.

Complex positive-frequency fields synthesized from an offset k-lattice are
periodic over the dual box only up to a constant per-axis phase twist
f(x + L) = theta * f(x); stencils here take that twist at the wrap seam.
Real bilinear fields (densities, currents) use twist 1.
"""

from __future__ import annotations

import numpy as np


def wrap_shift(f: np.ndarray, axis: int, step: int, twist: complex = 1.0) -> np.ndarray:
    """Sample f at index j + step along axis with quasi-periodic wrap.

    step must be +1 or -1. Entries that wrap past the end pick up the factor
    twist; entries that wrap past the start pick up its inverse (conjugate,
    twists are unit modulus).
    """
    if step not in (1, -1):
        raise ValueError("step must be +1 or -1")
    g = np.roll(f, -step, axis=axis)
    if twist == 1.0:
        return g
    g = np.asarray(g, dtype=np.complex128)
    sl = [slice(None)] * g.ndim
    if step == 1:
        sl[axis] = slice(-1, None)
        g[tuple(sl)] = g[tuple(sl)] * twist
    else:
        sl[axis] = slice(0, 1)
        g[tuple(sl)] = g[tuple(sl)] * np.conj(twist)
    return g


def centered_diff(f: np.ndarray, axis: int, spacing: float, twist: complex = 1.0) -> np.ndarray:
    """Second-order centered derivative along one array axis."""
    return (wrap_shift(f, axis, 1, twist) - wrap_shift(f, axis, -1, twist)) / (2.0 * spacing)


def axis_directions(dimension: int):
    """(array axis, spatial direction) pairs; a 1D grid varies along z."""
    if dimension == 1:
        return ((0, 2),)
    return ((0, 0), (1, 1), (2, 2))


def divergence(vf: np.ndarray, spacing: float, dimension: int, twists) -> np.ndarray:
    """div V with centered differences; vf has a trailing component axis of 3."""
    out = None
    for arr_ax, direction in axis_directions(dimension):
        term = centered_diff(vf[..., direction], arr_ax, spacing, twists[arr_ax])
        out = term if out is None else out + term
    return out


def gradient(sf: np.ndarray, spacing: float, dimension: int, twists) -> np.ndarray:
    """grad s as a field with trailing component axis 3; flat directions are 0."""
    terms = {}
    for arr_ax, direction in axis_directions(dimension):
        terms[direction] = centered_diff(sf, arr_ax, spacing, twists[arr_ax])
    first = next(iter(terms.values()))
    out = np.zeros(sf.shape + (3,), dtype=first.dtype)
    for direction, t in terms.items():
        out[..., direction] = t
    return out


def curl(vf: np.ndarray, spacing: float, dimension: int, twists) -> np.ndarray:
    """curl V with centered differences; derivatives along flat axes are 0."""
    d = {}
    for arr_ax, direction in axis_directions(dimension):
        for comp in range(3):
            d[(direction, comp)] = centered_diff(vf[..., comp], arr_ax, spacing, twists[arr_ax])

    def dd(direction, comp):
        return d.get((direction, comp), 0.0)

    cx = dd(1, 2) - dd(2, 1)
    cy = dd(2, 0) - dd(0, 2)
    cz = dd(0, 1) - dd(1, 0)
    zeros = np.zeros(vf.shape[:-1], dtype=vf.dtype)
    return np.stack([cx + zeros, cy + zeros, cz + zeros], axis=-1)
