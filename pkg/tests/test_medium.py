import math

import numpy as np
import pytest

from photonlab import (
    VACUUM,
    KGrid,
    MediumSpec,
    SourceEvent,
    SpatialGrid,
    constitutive,
    current_in_medium,
    density_rescale,
    dual_grid,
    gaussian_packet,
    green_response_1d,
    lifecycle_1d,
    number_density,
    photon_current,
    position_norm,
    source_field,
    synthesize,
)
from photonlab.current import CurrentField
from photonlab.medium import (
    TRUNC_SIGMAS,
    arrival_time,
    trunc_gauss,
    trunc_gauss_cdf,
    validate_events,
)


def line_grid(n=1024, z_min=-5.0, z_max=25.0):
    return SpatialGrid(n_per_axis=n, spacing=(z_max - z_min) / n,
                       dimension=1, origin=z_min)


def packet_in_medium(med, n_x=1024):
    g = KGrid(n_per_axis=16, spacing=0.25, dimension=1, center=(0.0, 0.0, 2.0))
    m = gaussian_packet(g, (0.0, 0.0, 2.0), 0.5, 1, speed=med.v)
    return synthesize(m, dual_grid(g, n_x), 0.8)


def test_medium_speed():
    assert MediumSpec().v == 1.0
    assert abs(MediumSpec(epsilon=2.0).v - 1.0 / math.sqrt(2.0)) <= 1e-15
    rng = np.random.default_rng(11)
    for _ in range(50):
        med = MediumSpec(epsilon=1.0 + rng.uniform(0.0, 9.0),
                         mu=1.0 + rng.uniform(0.0, 9.0))
        assert med.v <= 1.0


def test_medium_validation():
    with pytest.raises(ValueError, match="epsilon must be >= 1"):
        MediumSpec(epsilon=0.5)
    with pytest.raises(ValueError, match="mu must be positive"):
        MediumSpec(mu=0.0)


def test_constitutive_relations():
    e = np.array([[1.0, 2.0, 3.0]])
    b = np.array([[4.0, 5.0, 6.0]])
    d, h = constitutive(e, b, VACUUM)
    assert np.array_equal(d, e) and np.array_equal(h, b)
    d, h = constitutive(e, b, MediumSpec(epsilon=2.0, mu=4.0))
    assert np.array_equal(d, 2.0 * e)
    assert np.array_equal(h, b / 4.0)
    z = np.zeros((5, 3))
    d, h = constitutive(z, z, MediumSpec(epsilon=3.0))
    assert np.all(d == 0.0) and np.all(h == 0.0)


def test_vacuum_medium_reproduces_free_space():
    snap = packet_in_medium(VACUUM, n_x=256)
    cf_med = current_in_medium(snap, VACUUM)
    cf_free = photon_current(snap)
    assert np.array_equal(cf_med.rho, cf_free.rho)
    assert np.array_equal(cf_med.j, cf_free.j)


def test_dressed_density_scales_with_epsilon():
    med = MediumSpec(epsilon=2.0, mu=1.0)
    snap = packet_in_medium(med)
    cfm = current_in_medium(snap, med)
    rho_free = number_density(snap)
    scale = np.abs(rho_free).max()
    assert np.abs(cfm.rho - 2.0 * rho_free).max() <= 1e-12 * scale


def test_dressed_current_moves_at_medium_speed():
    med = MediumSpec(epsilon=2.0, mu=1.0)
    snap = packet_in_medium(med)
    cfm = current_in_medium(snap, med)
    expected = med.v * cfm.rho[:, None] * np.array([0.0, 0.0, 1.0])
    assert np.abs(cfm.j - expected).max() <= 1e-8


def test_density_rescale_restores_unit_norm():
    med = MediumSpec(epsilon=2.0, mu=1.0)
    snap = packet_in_medium(med)
    cfm = current_in_medium(snap, med)
    assert np.array_equal(density_rescale(cfm.rho, VACUUM), cfm.rho)
    rescaled = CurrentField(grid=snap.grid, time=cfm.time,
                            rho=density_rescale(cfm.rho, med), j=cfm.j)
    assert abs(position_norm(rescaled) - 1.0) <= 1e-6
    # without the rescale the dressed norm is epsilon, not one
    assert abs(position_norm(cfm) - med.epsilon) <= 2e-6


def test_current_in_medium_rejects_speed_mismatch():
    snap = packet_in_medium(VACUUM, n_x=256)
    with pytest.raises(ValueError, match="speed"):
        current_in_medium(snap, MediumSpec(epsilon=2.0))


def test_source_event_validation():
    with pytest.raises(ValueError, match="kind"):
        SourceEvent(kind="resistor", center=0.0, width=0.1, time=0.0, duration=0.1)
    with pytest.raises(ValueError, match="width"):
        SourceEvent(kind="emitter", center=0.0, width=0.0, time=0.0, duration=0.1)
    with pytest.raises(ValueError, match="duration"):
        SourceEvent(kind="emitter", center=0.0, width=0.1, time=0.0, duration=-1.0)
    with pytest.raises(ValueError, match="strength"):
        SourceEvent(kind="detector", center=0.0, width=0.1, time=0.0,
                    duration=0.1, strength=0.0)


def test_truncated_envelope_shape():
    sigma = 0.3
    edge = TRUNC_SIGMAS * sigma
    assert trunc_gauss(edge * 1.0001, sigma) == 0.0
    assert trunc_gauss(-edge * 1.0001, sigma) == 0.0
    assert trunc_gauss(0.1, sigma) == trunc_gauss(-0.1, sigma)
    assert trunc_gauss_cdf(-edge, sigma) == 0.0
    assert trunc_gauss_cdf(edge, sigma) == 1.0
    assert abs(trunc_gauss_cdf(0.0, sigma) - 0.5) <= 1e-15
    # unit mass: dense Riemann sum over the support
    u = np.linspace(-edge, edge, 200001)
    mass = trunc_gauss(u, sigma).sum() * (u[1] - u[0])
    assert abs(mass - 1.0) <= 1e-8


def test_arrival_time():
    emit = SourceEvent(kind="emitter", center=2.0, width=0.1, time=1.0, duration=0.1)
    assert arrival_time(emit, 4.0, 0.5) == 5.0


def test_source_field_no_events_is_zero():
    grid = line_grid(n=256)
    rho, j, src = source_field([], grid, 3.0)
    assert np.all(rho == 0.0) and np.all(j == 0.0) and np.all(src == 0.0)


def test_source_field_unit_emission_integral():
    grid = SpatialGrid(n_per_axis=4096, spacing=20.0 / 4096, dimension=1, origin=-10.0)
    emit = SourceEvent(kind="emitter", center=0.0, width=0.2, time=1.0, duration=0.3)
    # after switch-on completes the deposited charge is the full strength
    rho, j, _ = source_field([emit], grid, emit.time + 7.0 * emit.duration)
    assert abs(rho.sum() * grid.spacing - 1.0) <= 1e-9
    assert np.all(j == 0.0)
    # before switch-on begins nothing has been deposited
    rho0, _, src0 = source_field([emit], grid, emit.time - 7.0 * emit.duration)
    assert np.all(rho0 == 0.0) and np.all(src0 == 0.0)


def test_source_field_matched_pair_cancels():
    grid = SpatialGrid(n_per_axis=4096, spacing=20.0 / 4096, dimension=1, origin=-10.0)
    emit = SourceEvent(kind="emitter", center=0.0, width=0.2, time=1.0, duration=0.3)
    det = SourceEvent(kind="detector", center=3.0, width=0.2, time=4.0, duration=0.3)
    rho, _, _ = source_field([emit, det], grid, 20.0)
    assert abs(rho.sum() * grid.spacing) <= 1e-9


def test_emitter_budget_enforced():
    grid = line_grid(n=128)
    mk = lambda s: SourceEvent(kind="emitter", center=0.0, width=0.1, time=0.0,
                               duration=0.1, strength=s)
    with pytest.raises(ValueError, match="exceed one photon"):
        source_field([mk(0.6), mk(0.6)], grid, 0.0)
    # detectors are not charged against the budget
    det = SourceEvent(kind="detector", center=1.0, width=0.1, time=2.0,
                      duration=0.1, strength=1.0)
    validate_events([mk(1.0), det])


def test_green_response_causal_support():
    med = VACUUM
    grid = SpatialGrid(n_per_axis=2048, spacing=20.0 / 2048, dimension=1, origin=-5.0)
    times = np.linspace(0.0, 9.0, 181)
    tp, zp = 2.0, 0.0
    sigma_t = 4.0 * (times[1] - times[0])
    sigma_z = 4.0 * grid.spacing
    rho, j = green_response_1d(tp, zp, med, grid, times)
    before = times < tp - TRUNC_SIGMAS * sigma_t
    assert before.any()
    assert np.all(rho[before] == 0.0)
    # and nothing outside the forward light cone at any time
    z = grid.axis_positions()
    front = zp + med.v * (times[:, None] - tp) + TRUNC_SIGMAS * (sigma_z + med.v * sigma_t)
    assert np.all(rho[z[None, :] > front + 1e-12] == 0.0)
    assert np.array_equal(j, med.v * rho)


def test_green_response_mass_and_peak():
    med = MediumSpec(epsilon=2.0, mu=1.0)
    grid = SpatialGrid(n_per_axis=2048, spacing=25.0 / 2048, dimension=1, origin=-5.0)
    times = np.linspace(0.0, 16.0, 321)
    tp, zp = 1.0, 0.0
    rho, _ = green_response_1d(tp, zp, med, grid, times)
    assert abs(rho[-1].sum() * grid.spacing - 1.0) <= 1e-8
    z = grid.axis_positions()
    late = times > tp + 2.0
    peaks = z[np.argmax(rho[late], axis=1)]
    expected = zp + med.v * (times[late] - tp)
    assert np.abs(peaks - expected).max() <= grid.spacing


def test_green_response_input_validation():
    med = VACUUM
    grid3 = SpatialGrid(n_per_axis=8, spacing=0.5, dimension=3, origin=(0.0, 0.0, 0.0))
    with pytest.raises(ValueError, match="one-dimensional"):
        green_response_1d(0.0, 0.0, med, grid3, np.linspace(0.0, 1.0, 5))
    grid1 = line_grid(n=64)
    with pytest.raises(ValueError, match="two output times"):
        green_response_1d(0.0, 0.0, med, grid1, [5.0])


def lifecycle_setup(n_z=1024, steps=200, detector_time=None, with_detector=True):
    med = MediumSpec(epsilon=2.0, mu=1.0)
    grid = line_grid(n=n_z)
    times = np.linspace(0.0, 20.0, steps + 1)
    width = 4.0 * grid.spacing
    duration = 4.0 * (times[1] - times[0])
    emit = SourceEvent(kind="emitter", center=0.0, width=width, time=0.0,
                       duration=duration, strength=1.0)
    det = None
    if with_detector:
        t_d = arrival_time(emit, 10.0, med.v) if detector_time is None else detector_time
        det = SourceEvent(kind="detector", center=10.0, width=width, time=t_d,
                          duration=duration, strength=1.0)
    return emit, det, med, grid, times


def test_lifecycle_emitter_only_keeps_unit_norm():
    emit, _, med, grid, times = lifecycle_setup(with_detector=False)
    rep = lifecycle_1d(emit, None, med, grid, times)
    assert rep.acausal is False
    assert abs(rep.final_norm - 1.0) <= 1e-6
    # norm holds at one through the whole transit window
    transit = times > emit.time + 6.0 * emit.duration
    assert np.abs(rep.norm[transit] - 1.0).max() <= 1e-6


def test_lifecycle_peak_travels_at_medium_speed():
    emit, _, med, grid, times = lifecycle_setup(with_detector=False)
    rep = lifecycle_1d(emit, None, med, grid, times)
    window = (times > 3.0) & (times < 19.0)
    expected = emit.center + med.v * (times[window] - emit.time)
    assert np.abs(rep.peak_z[window] - expected).max() <= grid.spacing


def test_lifecycle_matched_detector_absorbs_everything():
    emit, det, med, grid, times = lifecycle_setup()
    rep = lifecycle_1d(emit, det, med, grid, times)
    assert rep.acausal is False
    assert abs(rep.final_norm) <= 1e-6
    # norm is still one in the gap between emission and detection
    mid = np.searchsorted(times, 0.5 * (emit.time + det.time))
    assert abs(rep.norm[mid] - 1.0) <= 1e-6


def test_lifecycle_acausal_detector_is_flagged_and_inert():
    emit, det, med, grid, times = lifecycle_setup(detector_time=2.0)
    assert det.time < arrival_time(emit, det.center, med.v) - 3.0 * det.duration
    rep = lifecycle_1d(emit, det, med, grid, times)
    assert rep.acausal is True
    assert abs(rep.final_norm - 1.0) <= 1e-6


def test_lifecycle_residual_converges_at_second_order():
    emit, det, med, grid, times = lifecycle_setup()
    r1 = lifecycle_1d(emit, det, med, grid, times).residual_max[1:-1].max()
    _, _, _, grid2, times2 = lifecycle_setup(n_z=2048, steps=400)
    r2 = lifecycle_1d(emit, det, med, grid2, times2).residual_max[1:-1].max()
    assert math.log2(r1 / r2) >= 1.9


def test_lifecycle_event_roles_enforced():
    emit, det, med, grid, times = lifecycle_setup()
    with pytest.raises(ValueError, match="must be an emitter"):
        lifecycle_1d(det, None, med, grid, times)
    with pytest.raises(ValueError, match="must be a detector"):
        lifecycle_1d(emit, emit, med, grid, times)
    grid3 = SpatialGrid(n_per_axis=8, spacing=0.5, dimension=3, origin=(0.0, 0.0, 0.0))
    with pytest.raises(ValueError, match="one-dimensional"):
        lifecycle_1d(emit, det, med, grid3, times)
