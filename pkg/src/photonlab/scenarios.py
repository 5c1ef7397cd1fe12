"""Scenario execution behind `photonlab run`: CSV products plus a summary report."""

from __future__ import annotations

import dataclasses
import os
import time as _time

import numpy as np

from .config import ScenarioConfig
from .csvio import (write_current_csv, write_fields_csv, write_lifecycle_csv,
                    write_modes_csv, write_report_files)
from .current import (continuity_residual, helicity_density, number_density,
                      photon_current, position_norm)
from .fields import SpatialGrid, dual_grid, synthesize
from .fock import basis_state, commutator_expectation, ladder_pair
from .medium import (VACUUM, MediumSpec, SourceEvent, current_in_medium,
                     density_rescale, lifecycle_1d)
from .modes import KGrid, boost_amplitudes, gauge_shift, gaussian_packet, lambda_row, norm
from .units import UnitSystem, unit_system
from .verify import check_le, lifecycle_checks


@dataclasses.dataclass(frozen=True)
class ScenarioOutcome:
    checks: tuple
    info: tuple
    files: tuple
    timings: dict

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _packet_state(packet, speed: float = 1.0):
    grid = KGrid(n_per_axis=packet.n_k, spacing=packet.dk,
                 dimension=packet.dimension, center=packet.k0)
    m = gaussian_packet(grid, packet.k0, packet.sigma, packet.pol, speed=speed)
    return grid, m


def _field_scan(m, sg, times, make_cf):
    """Synthesize at each checkpoint; return CSV blocks, norms, center snapshots."""
    dt = sg.spacing / 2.0
    blocks, norms, centers = [], [], []
    for t in times:
        snaps = [synthesize(m, sg, t + k * dt) for k in (-1, 0, 1)]
        cfs = [make_cf(s) for s in snaps]
        res = continuity_residual(*cfs)
        blocks.append((t, cfs[1], np.abs(res)))
        norms.append(position_norm(cfs[1]))
        centers.append(snaps[1])
    return blocks, norms, centers


def _run_packet3d(cfg: ScenarioConfig, us: UnitSystem, outdir: str):
    kgrid, m = _packet_state(cfg.packet)
    sg = dual_grid(kgrid, cfg.packet.n_x)
    times = us.time_in * cfg.times.checkpoints()
    blocks, norms, centers = _field_scan(
        m, sg, times, lambda s: photon_current(s, with_helicity=True))

    # longitudinal packets carry no on-shell position-space density, so the
    # box integral is compared against the transverse part of the mode norm
    target = norm(m, polarizations=(1, -1))
    dev = max(abs(n - target) for n in norms)
    checks = [check_le("norm_unity", dev, cfg.tolerances["norm_unity"])]
    info = [f"transverse mode norm = {target:.17g}"]
    info += [f"position norm at t = {t:.6g}: {n:.17g}" for t, n in zip(times, norms)]

    files = [os.path.join(outdir, "modes.csv"),
             os.path.join(outdir, "current.csv"),
             os.path.join(outdir, "fields.csv")]
    write_modes_csv(files[0], m)
    write_current_csv(files[1], blocks, us)
    write_fields_csv(files[2], centers[-1], us)
    return checks, info, files


def _run_helicity(cfg: ScenarioConfig, us: UnitSystem, outdir: str):
    kgrid, m = _packet_state(cfg.packet)
    sg = dual_grid(kgrid, cfg.packet.n_x)
    times = us.time_in * cfg.times.checkpoints()
    blocks, norms, _ = _field_scan(
        m, sg, times, lambda s: photon_current(s, with_helicity=True))

    pol = cfg.packet.pol
    if pol == "par":
        dev = max(np.abs(cf.s_hel).max() for _, cf, _ in blocks)
        checks = [check_le("helicity_longitudinal", dev,
                           cfg.tolerances["helicity_longitudinal"])]
    else:
        e_k = np.array([0.0, 0.0, 1.0])
        dev = max(np.abs(cf.s_hel - pol * cf.rho[:, None] * e_k).max()
                  for _, cf, _ in blocks)
        checks = [check_le("helicity_pointwise", dev,
                           cfg.tolerances["helicity_pointwise"])]
    info = [f"position norm at t = {t:.6g}: {n:.17g}" for t, n in zip(times, norms)]

    files = [os.path.join(outdir, "modes.csv"), os.path.join(outdir, "current.csv")]
    write_modes_csv(files[0], m)
    write_current_csv(files[1], blocks, us)
    return checks, info, files


def _run_gauge(cfg: ScenarioConfig, us: UnitSystem, outdir: str):
    kgrid, m = _packet_state(cfg.packet)
    gfun = cfg.gauge_strength * gaussian_packet(
        kgrid, cfg.packet.k0, cfg.packet.sigma, "par").amps[lambda_row("par")]
    shifted = gauge_shift(m, gfun)

    sg = dual_grid(kgrid, cfg.packet.n_x)
    t = us.time_in * cfg.times.stop
    s1 = synthesize(m, sg, t)
    s2 = synthesize(shifted, sg, t)
    field_dev = max(np.abs(s1.e_plus - s2.e_plus).max(),
                    np.abs(s1.b_plus - s2.b_plus).max())
    n1 = position_norm(photon_current(s1))
    n2 = position_norm(photon_current(s2))
    trans = [lambda_row(1), lambda_row(-1)]
    bits = 0.0 if np.array_equal(m.amps[trans], shifted.amps[trans]) else \
        np.abs(m.amps[trans] - shifted.amps[trans]).max()

    checks = [check_le("gauge_field", field_dev, cfg.tolerances["gauge_field"]),
              check_le("gauge_norm", abs(n1 - n2), cfg.tolerances["gauge_norm"]),
              check_le("gauge_transverse_amps", bits, 0.0)]
    info = [f"gauge shift moved max |phi| by {np.abs(s1.phi_plus - s2.phi_plus).max():.6g}",
            f"position norm before/after = {n1:.17g} / {n2:.17g}"]

    files = [os.path.join(outdir, "modes.csv")]
    write_modes_csv(files[0], shifted)
    return checks, info, files


def _run_boost(cfg: ScenarioConfig, us: UnitSystem, outdir: str):
    kgrid, m = _packet_state(cfg.packet)
    boosted = boost_amplitudes(m, cfg.beta)
    err_base = abs(norm(boosted) - 1.0)
    wide = KGrid(n_per_axis=2 * cfg.packet.n_k, spacing=cfg.packet.dk,
                 dimension=cfg.packet.dimension, center=cfg.packet.k0)
    err_fine = abs(norm(boost_amplitudes(m, cfg.beta, dest_grid=wide)) - 1.0)
    ratio = err_fine / err_base if err_base > 0 else 0.0

    checks = [check_le("boost_norm", err_base, cfg.tolerances["boost_norm"]),
              check_le("boost_monotone", ratio, 1.0)]
    info = [f"beta = {cfg.beta:g}",
            f"boost norm error base/refined = {err_base:.6g} / {err_fine:.6g}"]

    files = [os.path.join(outdir, "modes.csv")]
    write_modes_csv(files[0], boosted)
    return checks, info, files


def _run_medium1d(cfg: ScenarioConfig, us: UnitSystem, outdir: str):
    med = MediumSpec(epsilon=cfg.medium.epsilon_rel, mu=cfg.medium.mu_rel)
    kgrid, m = _packet_state(cfg.packet, speed=med.v)
    sg = dual_grid(kgrid, cfg.packet.n_x)
    times = us.time_in * cfg.times.checkpoints()

    def make_cf(snap):
        cf = current_in_medium(snap, med)
        return dataclasses.replace(cf, s_hel=helicity_density(snap))

    blocks, _, centers = _field_scan(m, sg, times, make_cf)

    pointwise = max(np.abs(cf.rho - med.epsilon * number_density(snap)).max()
                    for (_, cf, _), snap in zip(blocks, centers))
    rescale_devs = []
    current_devs = []
    e_k = np.array([0.0, 0.0, 1.0])
    for _, cf, _ in blocks:
        rescaled = dataclasses.replace(cf, rho=density_rescale(cf.rho, med), s_hel=None)
        rescale_devs.append(abs(position_norm(rescaled) - 1.0))
        current_devs.append(np.abs(cf.j - med.v * cf.rho[:, None] * e_k).max())

    m_vac = _packet_state(cfg.packet)[1]
    snap_vac = synthesize(m_vac, sg, times[0])
    cf_v1 = current_in_medium(snap_vac, VACUUM)
    cf_v2 = photon_current(snap_vac)
    vac_dev = max(np.abs(cf_v1.rho - cf_v2.rho).max(),
                  np.abs(cf_v1.j - cf_v2.j).max())

    tol = cfg.tolerances
    checks = [check_le("medium_pointwise", pointwise, tol["medium_pointwise"]),
              check_le("medium_norm", max(rescale_devs), tol["medium_norm"]),
              check_le("medium_current", max(current_devs), tol["medium_current"]),
              check_le("vacuum_reduction", vac_dev, tol["vacuum_reduction"])]
    info = [f"medium speed v = {med.v:.17g}",
            f"in-medium norm of rho_pm = {position_norm(blocks[0][1]):.17g}"]

    files = [os.path.join(outdir, "modes.csv"), os.path.join(outdir, "current.csv")]
    write_modes_csv(files[0], m)
    write_current_csv(files[1], blocks, us)
    return checks, info, files


def _resolve_events(cfg: ScenarioConfig, us: UnitSystem, grid: SpatialGrid, times):
    """Turn config emitter/detector settings into concrete SourceEvents."""
    dz = grid.spacing
    dt = times[1] - times[0] if len(times) > 1 else 1.0
    e = cfg.emitter
    e_width = 4.0 * dz if e.width == "auto" else float(e.width)
    e_duration = 4.0 * dt if e.duration == "auto" else us.time_in * float(e.duration)
    emit = SourceEvent(kind="emitter", center=e.center,
                       width=e_width, time=us.time_in * float(e.time),
                       duration=e_duration, strength=float(e.strength))
    detect = None
    if cfg.detector is not None:
        d = cfg.detector
        v = MediumSpec(cfg.medium.epsilon_rel, cfg.medium.mu_rel).v
        d_width = e_width if d.width == "matched" else \
            (4.0 * dz if d.width == "auto" else float(d.width))
        d_duration = e_duration if d.duration == "matched" else \
            (4.0 * dt if d.duration == "auto" else us.time_in * float(d.duration))
        d_time = emit.time + (d.center - emit.center) / v if d.time == "auto" \
            else us.time_in * float(d.time)
        d_strength = emit.strength if d.strength == "matched" else float(d.strength)
        detect = SourceEvent(kind="detector", center=d.center, width=d_width,
                             time=d_time, duration=d_duration, strength=d_strength)
    return emit, detect


def _run_lifecycle1d(cfg: ScenarioConfig, us: UnitSystem, outdir: str):
    line = cfg.line
    grid = SpatialGrid(n_per_axis=line.n_z,
                       spacing=(line.z_max - line.z_min) / line.n_z,
                       dimension=1, origin=line.z_min)
    times = us.time_in * cfg.times.checkpoints()
    emit, detect = _resolve_events(cfg, us, grid, times)
    med = MediumSpec(epsilon=cfg.medium.epsilon_rel, mu=cfg.medium.mu_rel)
    rep = lifecycle_1d(emit, detect, med, grid, times)

    checks, info = lifecycle_checks(rep, emit, detect, med, grid, times,
                                    cfg.tolerances)
    if detect is not None:
        arrival = emit.time + (detect.center - emit.center) / med.v
        info.append(f"ballistic arrival time = {us.time_out * arrival:.17g}")
    info.append(f"final norm = {rep.final_norm:.17g}")

    files = [os.path.join(outdir, "lifecycle.csv")]
    write_lifecycle_csv(files[0], rep, us)
    return checks, info, files


def _run_fock(cfg: ScenarioConfig, us: UnitSystem, outdir: str):
    lp = ladder_pair(cfg.n_states)
    comm_dev = max(abs(commutator_expectation(lp, n) - 1.0)
                   for n in range(lp.dim - 1))
    num = lp.number()
    number_dev = max(abs(np.vdot(basis_state(lp, n), num @ basis_state(lp, n)).real - n)
                     for n in range(lp.dim))
    checks = [check_le("fock_commutator", comm_dev, cfg.tolerances["fock_commutator"]),
              check_le("fock_number_exact", number_dev, 0.0)]
    corner = (lp.a @ lp.a_dag - lp.a_dag @ lp.a)[-1, -1].real
    info = [f"truncation dimension = {lp.dim}",
            f"truncation corner of [a, a_dag] = {corner:g}"]
    return checks, info, []


_RUNNERS = {
    "packet3d": _run_packet3d,
    "helicity": _run_helicity,
    "gauge": _run_gauge,
    "boost": _run_boost,
    "medium1d": _run_medium1d,
    "lifecycle1d": _run_lifecycle1d,
    "fock": _run_fock,
}


def run_scenario(cfg: ScenarioConfig) -> ScenarioOutcome:
    """Execute one non-verify scenario; writes CSVs and the summary report."""
    if cfg.kind == "verify":
        raise ValueError("use run_verify for [verify] configurations")
    us = unit_system(cfg.units)
    runner = _RUNNERS[cfg.kind]
    started = _time.perf_counter()
    checks, info, files = runner(cfg, us, cfg.output)
    timings = {cfg.kind: _time.perf_counter() - started}
    paths = write_report_files(cfg.output, f"photonlab scenario report: {cfg.kind}",
                               cfg.echo_lines(), checks, info)
    return ScenarioOutcome(checks=tuple(checks), info=tuple(info),
                           files=tuple(list(files) + list(paths)),
                           timings=timings)
