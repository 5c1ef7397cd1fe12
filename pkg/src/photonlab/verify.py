"""The batch verification suite behind `photonlab verify`.

Nine check blocks probe the conservation laws end to end: box norms,
continuity-residual convergence, helicity alignment, gauge and boost
invariance, Maxwell residual convergence, medium consistency, the 1D
emitter/detector lifecycle, and the ladder-operator identities. Study
grids are fixed here; tolerances come from the config.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .csvio import write_report_files
from .current import (CurrentField, continuity_residual, helicity_density,
                      number_density, photon_current, position_norm)
from .fdops import divergence
from .fields import SpatialGrid, dual_grid, synthesize
from .fields import maxwell_residual
from .fock import basis_state, commutator_expectation, ladder_pair, n_photon_state
from .medium import (VACUUM, MediumSpec, SourceEvent, current_in_medium,
                     density_rescale, lifecycle_1d)
from .modes import KGrid, boost_amplitudes, gauge_shift, gaussian_packet, lambda_row, norm


@dataclass(frozen=True)
class CheckResult:
    """One verification check; sense 'ge' marks convergence-order lower bounds."""
    name: str
    measured: float
    tolerance: float
    passed: bool
    order: float | None = None
    sense: str = "le"


def check_le(name, measured, tolerance, order=None) -> CheckResult:
    return CheckResult(name=name, measured=float(measured), tolerance=float(tolerance),
                       passed=bool(measured <= tolerance), order=order, sense="le")


def check_ge(name, measured, tolerance) -> CheckResult:
    return CheckResult(name=name, measured=float(measured), tolerance=float(tolerance),
                       passed=bool(measured >= tolerance), order=float(measured), sense="ge")


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple
    info: tuple
    header: tuple
    timings: dict

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _synth_triplet(m, grid, t0, dt, omega_scale):
    return (synthesize(m, grid, t0 - dt, omega_scale=omega_scale),
            synthesize(m, grid, t0, omega_scale=omega_scale),
            synthesize(m, grid, t0 + dt, omega_scale=omega_scale))


# ---------------------------------------------------------------------------
# check blocks

def _norm_block(tol, scale):
    g = KGrid(n_per_axis=16, spacing=0.25, dimension=3, center=(0.0, 0.0, 4.0))
    m = gaussian_packet(g, (0.0, 0.0, 4.0), 0.5, 1)
    sg = dual_grid(g, 32)
    norms = []
    for t in (0.0, 3.0, 6.0):
        cf = photon_current(synthesize(m, sg, t, omega_scale=scale))
        norms.append(position_norm(cf))
    worst = max(abs(n - 1.0) for n in norms)
    info = [f"mode norm (all polarizations) = {norm(m):.17g}",
            f"mode norm (transverse only) = {norm(m, polarizations=(1, -1)):.17g}"]
    info += [f"position norm at t = {t:g}: {n:.17g}"
             for t, n in zip((0.0, 3.0, 6.0), norms)]
    return [check_le("norm_unity", worst, tol["norm_unity"])], info


def _continuity_block(tol, scale):
    g = KGrid(n_per_axis=16, spacing=0.25, dimension=1, center=(0.0, 0.0, 2.0))
    m = gaussian_packet(g, (0.0, 0.0, 2.0), 0.5, 1)

    def level(n_x):
        sg = dual_grid(g, n_x)
        dt = sg.spacing / 2.0
        prev, now, nxt = _synth_triplet(m, sg, 1.0, dt, scale)
        cfs = [photon_current(s) for s in (prev, now, nxt)]
        res = continuity_residual(*cfs)
        drho = np.abs(cfs[2].rho - cfs[0].rho).max() / (2.0 * dt)
        return np.abs(res).max(), drho

    r_coarse, _ = level(2048)
    r_fine, drho_fine = level(4096)
    order = math.log2(r_coarse / r_fine) if r_fine > 0 else float("inf")
    rel = r_fine / drho_fine if drho_fine > 0 else float("inf")
    checks = [check_ge("continuity_order", order, tol["continuity_order"]),
              check_le("continuity_residual", rel, tol["continuity_residual"],
                       order=order)]
    info = [f"continuity residual coarse/fine = {r_coarse:.6g} / {r_fine:.6g}",
            f"max |d rho/dt| at fine level = {drho_fine:.6g}"]
    return checks, info


def _maxwell_block(tol, scale):
    g = KGrid(n_per_axis=8, spacing=0.25, dimension=3, center=(0.0, 0.0, 1.0))
    m = gaussian_packet(g, (0.0, 0.0, 1.0), 0.5, 1)

    def level(n_x):
        sg = dual_grid(g, n_x)
        dt = sg.spacing / 2.0
        prev, now, nxt = _synth_triplet(m, sg, 0.5, dt, scale)
        gauss, ampere = maxwell_residual(prev, now, nxt)
        divb = divergence(now.b_plus.reshape(sg.field_shape(3)), sg.spacing,
                          sg.dimension, now.twists())
        return (np.abs(gauss).max(), np.abs(ampere).max(), np.abs(divb).max())

    coarse = level(48)
    fine = level(96)
    orders = [math.log2(a / b) if b > 0 else float("inf")
              for a, b in zip(coarse, fine)]
    checks = [check_ge("maxwell_gauss_order", orders[0], tol["maxwell_order"]),
              check_ge("maxwell_ampere_order", orders[1], tol["maxwell_order"]),
              check_ge("maxwell_divb_order", orders[2], tol["maxwell_order"])]
    info = [f"maxwell residual fine level: gauss {fine[0]:.6g}, "
            f"ampere {fine[1]:.6g}, divB {fine[2]:.6g}"]
    return checks, info


def _helicity_block(tol, scale):
    g = KGrid(n_per_axis=16, spacing=0.25, dimension=1, center=(0.0, 0.0, 2.0))
    sg = dual_grid(g, 1024)
    checks, info = [], []

    m = gaussian_packet(g, (0.0, 0.0, 2.0), 0.5, 1)
    cf = photon_current(synthesize(m, sg, 1.0, omega_scale=scale), with_helicity=True)
    dev = np.abs(cf.s_hel - cf.rho[:, None] * np.array([0.0, 0.0, 1.0])).max()
    checks.append(check_le("helicity_pointwise", dev, tol["helicity_pointwise"]))

    m_par = gaussian_packet(g, (0.0, 0.0, 2.0), 0.5, "par")
    s_par = helicity_density(synthesize(m_par, sg, 1.0, omega_scale=scale))
    checks.append(check_le("helicity_longitudinal", np.abs(s_par).max(),
                           tol["helicity_longitudinal"]))
    info.append(f"helicity deviation (lambda = +1) = {dev:.6g}")
    return checks, info


def _gauge_block(tol, scale):
    g = KGrid(n_per_axis=8, spacing=0.25, dimension=3, center=(0.0, 0.0, 1.0))
    m = gaussian_packet(g, (0.0, 0.0, 1.0), 0.5, 1)
    gfun = 0.7 * gaussian_packet(g, (0.0, 0.0, 1.0), 0.5, "par").amps[lambda_row("par")]
    m2 = gauge_shift(m, gfun)

    sg = dual_grid(g, 32)
    s1 = synthesize(m, sg, 0.7, omega_scale=scale)
    s2 = synthesize(m2, sg, 0.7, omega_scale=scale)
    field_dev = max(np.abs(s1.e_plus - s2.e_plus).max(),
                    np.abs(s1.b_plus - s2.b_plus).max())
    n1 = position_norm(photon_current(s1))
    n2 = position_norm(photon_current(s2))
    trans = [lambda_row(1), lambda_row(-1)]
    bits = 0.0 if np.array_equal(m.amps[trans], m2.amps[trans]) else \
        np.abs(m.amps[trans] - m2.amps[trans]).max()

    checks = [check_le("gauge_field", field_dev, tol["gauge_field"]),
              check_le("gauge_norm", abs(n1 - n2), tol["gauge_norm"]),
              check_le("gauge_transverse_amps", bits, 0.0)]
    info = [f"gauge shift moved max |phi| by {np.abs(s1.phi_plus - s2.phi_plus).max():.6g}",
            f"position norm before/after = {n1:.17g} / {n2:.17g}"]
    return checks, info


def _boost_block(tol):
    g = KGrid(n_per_axis=16, spacing=0.25, dimension=3, center=(0.0, 0.0, 4.0))
    m = gaussian_packet(g, (0.0, 0.0, 4.0), 0.5, 1)
    beta = 0.3
    err_base = abs(norm(boost_amplitudes(m, beta)) - 1.0)
    wide = KGrid(n_per_axis=32, spacing=0.25, dimension=3, center=(0.0, 0.0, 4.0))
    err_fine = abs(norm(boost_amplitudes(m, beta, dest_grid=wide)) - 1.0)
    ratio = err_fine / err_base if err_base > 0 else 0.0
    checks = [check_le("boost_norm", err_base, tol["boost_norm"]),
              check_le("boost_monotone", ratio, 1.0)]
    info = [f"boost norm error base/refined = {err_base:.6g} / {err_fine:.6g}"]
    return checks, info


def _medium_block(tol, scale):
    med = MediumSpec(epsilon=2.0, mu=1.0)
    g = KGrid(n_per_axis=16, spacing=0.25, dimension=1, center=(0.0, 0.0, 2.0))
    sg = dual_grid(g, 1024)

    m = gaussian_packet(g, (0.0, 0.0, 2.0), 0.5, 1, speed=med.v)
    snap = synthesize(m, sg, 0.8, omega_scale=scale)
    cfm = current_in_medium(snap, med)
    rho_free = number_density(snap)

    pointwise = np.abs(cfm.rho - med.epsilon * rho_free).max()
    rescaled = CurrentField(grid=sg, time=cfm.time,
                            rho=density_rescale(cfm.rho, med), j=cfm.j)
    norm_dev = abs(position_norm(rescaled) - 1.0)
    jdev = np.abs(cfm.j - med.v * cfm.rho[:, None] * np.array([0.0, 0.0, 1.0])).max()

    m_vac = gaussian_packet(g, (0.0, 0.0, 2.0), 0.5, 1)
    snap_vac = synthesize(m_vac, sg, 0.8, omega_scale=scale)
    cf_v1 = current_in_medium(snap_vac, VACUUM)
    cf_v2 = photon_current(snap_vac)
    vac_dev = max(np.abs(cf_v1.rho - cf_v2.rho).max(),
                  np.abs(cf_v1.j - cf_v2.j).max())

    checks = [check_le("medium_pointwise", pointwise, tol["medium_pointwise"]),
              check_le("medium_norm", norm_dev, tol["medium_norm"]),
              check_le("medium_current", jdev, tol["medium_current"]),
              check_le("vacuum_reduction", vac_dev, tol["vacuum_reduction"])]
    info = [f"in-medium norm of rho_pm = {position_norm(cfm):.17g} "
            f"(epsilon_rel = {med.epsilon:g})"]
    return checks, info


def lifecycle_checks(rep, emit, detect, med, grid, times, tol):
    """Transit-norm, final-norm, causality, and peak-speed checks for one run."""
    checks, info = [], []
    v = med.v
    margin = 6.0 * (emit.duration + emit.width / v)
    end = detect.time - margin if detect is not None else times[-1]
    transit = (times >= emit.time + margin) & (times <= end)
    if transit.any():
        dev = np.abs(rep.norm[transit] - emit.strength).max()
        checks.append(check_le("lifecycle_norm_transit", dev, tol["lifecycle_norm"]))
        expected = emit.center + v * (times[transit] - emit.time)
        peak_cells = np.abs(rep.peak_z[transit] - expected).max() / grid.spacing
        checks.append(check_le("peak_speed_cells", peak_cells, tol["peak_cells"]))
    else:
        info.append("transit window empty; norm and peak checks skipped")

    # an acausal detector is excluded from the solve and absorbs nothing, so
    # the expected remainder is the full emitted strength
    target = emit.strength if detect is None or rep.acausal else 0.0
    checks.append(check_le("lifecycle_final_norm", abs(rep.final_norm - target),
                           tol["lifecycle_norm"]))

    # everything outside the emitter light cone, padded by the envelope support
    pad = 6.0 * (emit.width + v * emit.duration)
    z = grid.axis_positions()
    outside = np.abs(z[None, :] - emit.center) > \
        v * np.maximum(times[:, None] - emit.time, 0.0) + pad
    if outside.any():
        checks.append(check_le("causality", np.abs(rep.rho[outside]).max(),
                               tol["causality"]))
    if rep.acausal:
        info.append("acausal detection: detector fires before ballistic arrival")
    return checks, info


def _lifecycle_block(tol):
    med = MediumSpec(epsilon=2.0, mu=1.0)
    n_z, steps = 2048, 400
    z_min, z_max = -5.0, 25.0
    t_stop = 20.0

    def build(nz, nsteps):
        grid = SpatialGrid(n_per_axis=nz, spacing=(z_max - z_min) / nz,
                           dimension=1, origin=z_min)
        times = np.linspace(0.0, t_stop, nsteps + 1)
        return grid, times

    grid, times = build(n_z, steps)
    width = 4.0 * grid.spacing
    duration = 4.0 * (times[1] - times[0])
    emit = SourceEvent(kind="emitter", center=0.0, width=width, time=0.0,
                       duration=duration, strength=1.0)
    arrival = emit.time + (10.0 - emit.center) / med.v
    det = SourceEvent(kind="detector", center=10.0, width=width, time=arrival,
                      duration=duration, strength=1.0)
    rep = lifecycle_1d(emit, det, med, grid, times)
    checks, info = lifecycle_checks(rep, emit, det, med, grid, times, tol)

    # end rows use one-sided time stencils; convergence is measured where the
    # stencil is centered
    r_coarse = rep.residual_max[1:-1].max()
    grid2, times2 = build(2 * n_z, 2 * steps)
    rep2 = lifecycle_1d(emit, det, med, grid2, times2)
    r_fine = rep2.residual_max[1:-1].max()
    order = math.log2(r_coarse / r_fine) if r_fine > 0 else float("inf")
    checks.append(check_ge("lifecycle_residual_order", order, tol["continuity_order"]))

    info += [f"ballistic arrival time = {arrival:.17g}",
             f"lifecycle residual coarse/fine = {r_coarse:.6g} / {r_fine:.6g}"]
    return checks, info


def _fock_block(tol):
    lp = ladder_pair(32)
    comm_dev = max(abs(commutator_expectation(lp, n) - 1.0) for n in range(lp.dim - 1))
    num = lp.number()
    number_dev = max(abs(np.vdot(basis_state(lp, n), num @ basis_state(lp, n)).real - n)
                     for n in range(lp.dim))
    product_dev = np.abs(lp.a_dag @ lp.a - num).max()
    state_norm_dev = max(abs(np.linalg.norm(n_photon_state(lp, n)) - 1.0)
                         for n in range(lp.dim))
    checks = [check_le("fock_commutator", comm_dev, tol["fock_commutator"]),
              check_le("fock_number_exact", number_dev, 0.0)]
    info = [f"max |a_dag a - number()| = {product_dev:.6g}",
            f"n-photon state norm deviation = {state_norm_dev:.6g}",
            f"truncation corner of [a, a_dag] = {((lp.a @ lp.a_dag - lp.a_dag @ lp.a)[-1, -1]).real:g}"]
    return checks, info


# ---------------------------------------------------------------------------

def run_verify(cfg: ScenarioConfig) -> VerificationReport:
    """Run every invariant check; deterministic for a fixed config."""
    if cfg.kind != "verify":
        raise ValueError("run_verify needs a [verify] configuration")
    tol = cfg.tolerances
    scale = 1.0 + cfg.inject_dispersion_error

    blocks = (
        ("norm", lambda: _norm_block(tol, scale)),
        ("continuity", lambda: _continuity_block(tol, scale)),
        ("helicity", lambda: _helicity_block(tol, scale)),
        ("gauge", lambda: _gauge_block(tol, scale)),
        ("boost", lambda: _boost_block(tol)),
        ("maxwell", lambda: _maxwell_block(tol, scale)),
        ("medium", lambda: _medium_block(tol, scale)),
        ("lifecycle", lambda: _lifecycle_block(tol)),
        ("fock", lambda: _fock_block(tol)),
    )
    checks, info, timings = [], [], {}
    for name, block in blocks:
        started = _time.perf_counter()
        block_checks, block_info = block()
        timings[name] = _time.perf_counter() - started
        checks.extend(block_checks)
        info.extend(block_info)
    return VerificationReport(checks=tuple(checks), info=tuple(info),
                              header=cfg.echo_lines(), timings=timings)


def write_verify_report(report: VerificationReport, cfg: ScenarioConfig):
    """Emit report.txt and report.csv into the configured output directory."""
    return write_report_files(cfg.output, "photonlab verification report",
                              report.header, report.checks, report.info)
