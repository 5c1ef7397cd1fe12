"""Minkowski four-vectors, z-boosts, helicity bases, and field-tensor diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Signature (+, -, -, -); lowering an index twice is the identity.
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
METRIC.setflags(write=False)

ROOT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class FourVector:
    """Contravariant four-vector: time component plus a 3-vector spatial part.

    Components may be real or complex; the metric operations below treat the
    time component as index 0.
    """

    t_comp: complex
    spatial: np.ndarray

    def __post_init__(self):
        sp = np.asarray(self.spatial)
        if sp.shape != (3,):
            raise ValueError("spatial part must be a length-3 vector")
        if not np.iscomplexobj(sp):
            sp = sp.astype(float)
        sp = sp.copy()
        sp.setflags(write=False)
        object.__setattr__(self, "spatial", sp)

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.t_comp], self.spatial))

    @property
    def is_real(self) -> bool:
        return not (np.iscomplexobj(self.spatial) or isinstance(self.t_comp, complex))


def minkowski_dot(u: FourVector, v: FourVector):
    """Invariant product u^mu v_mu = u0 v0 - u.v."""
    s = u.t_comp * v.t_comp - u.spatial @ v.spatial
    if isinstance(s, np.generic) and not np.iscomplexobj(s):
        return float(s)
    return complex(s) if np.iscomplexobj(s) else float(s)


def lower_index(v: FourVector) -> FourVector:
    """Covariant components: the spatial part changes sign."""
    return FourVector(v.t_comp, -v.spatial)


def boost_z(u: FourVector, beta: float) -> FourVector:
    """Boost along +z with velocity beta in units of c.

    The invariant minkowski_dot is preserved; |beta| >= 1 is rejected.
    """
    if abs(beta) >= 1.0:
        raise ValueError("boost speed must satisfy |beta| < 1")
    gamma = 1.0 / math.sqrt(1.0 - beta * beta)
    t = gamma * (u.t_comp - beta * u.spatial[2])
    z = gamma * (u.spatial[2] - beta * u.t_comp)
    return FourVector(t, np.array([u.spatial[0], u.spatial[1], z]))


@dataclass(frozen=True)
class PolarizationBasis:
    """Helicity unit vectors e_{+1}, e_{-1} and the longitudinal direction e_par.

    Fields have a trailing axis of length 3 and broadcast over any leading
    shape, so one instance can hold the basis for a whole mode grid.
    """

    e_plus: np.ndarray
    e_minus: np.ndarray
    e_par: np.ndarray


def polarization_bases(kvecs: np.ndarray) -> PolarizationBasis:
    """Helicity basis e_lambda = (e_theta + i lambda e_phi)/sqrt(2) for each k.

    kvecs has shape (..., 3). On the z-axis the azimuth is frozen at phi = 0,
    which keeps a single continuous formula valid for every nonzero k:
    e_theta = (+-1, 0, 0) and e_phi = (0, 1, 0) at the poles.
    """
    k = np.asarray(kvecs, dtype=float)
    if k.shape[-1] != 3:
        raise ValueError("wavevectors must have a trailing axis of length 3")
    kmag = np.sqrt(np.sum(k * k, axis=-1))
    if np.any(kmag == 0.0):
        raise ValueError("polarization basis undefined at k = 0")
    rho = np.hypot(k[..., 0], k[..., 1])
    cos_th = k[..., 2] / kmag
    sin_th = rho / kmag
    on_axis = rho == 0.0
    safe = np.where(on_axis, 1.0, rho)
    cos_ph = np.where(on_axis, 1.0, k[..., 0] / safe)
    sin_ph = np.where(on_axis, 0.0, k[..., 1] / safe)
    e_th = np.stack([cos_th * cos_ph, cos_th * sin_ph, -sin_th], axis=-1)
    e_ph = np.stack([-sin_ph, cos_ph, np.zeros_like(sin_ph)], axis=-1)
    e_plus = ROOT_HALF * (e_th + 1j * e_ph)
    e_minus = ROOT_HALF * (e_th - 1j * e_ph)
    e_par = k / kmag[..., None]
    return PolarizationBasis(e_plus=e_plus, e_minus=e_minus, e_par=e_par)


def polarization_basis(k) -> PolarizationBasis:
    """Basis for a single wavevector; |k| > 0 required."""
    k = np.asarray(k, dtype=float).reshape(3)
    return polarization_bases(k)


@dataclass(frozen=True)
class FaradayMatrix:
    """Antisymmetric contravariant field-strength matrix (units: field / c)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("field-strength matrix must be 4x4")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)


def faraday_from_fields(e, b, c: float = 1.0) -> FaradayMatrix:
    """Assemble F^{mu nu} from real E and B three-vectors.

    Row/column layout (overall factor 1/c):
        [[0, -Ex, -Ey, -Ez],
         [Ex, 0, -c Bz, c By],
         [Ey, c Bz, 0, -c Bx],
         [Ez, -c By, c Bx, 0]]
    """
    ex, ey, ez = (float(v) for v in np.asarray(e, dtype=float).reshape(3))
    bx, by, bz = (float(v) for v in np.asarray(b, dtype=float).reshape(3))
    m = np.array(
        [
            [0.0, -ex, -ey, -ez],
            [ex, 0.0, -c * bz, c * by],
            [ey, c * bz, 0.0, -c * bx],
            [ez, -c * by, c * bx, 0.0],
        ]
    )
    return FaradayMatrix(m / c)


def faraday_invariant(f: FaradayMatrix) -> float:
    """Scalar F_{mu nu} F^{mu nu}; equals 2(B.B - E.E/c^2) for EM fields."""
    up = f.entries
    down = METRIC @ up @ METRIC
    return float(np.sum(down * up))
