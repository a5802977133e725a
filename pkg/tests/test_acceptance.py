"""The ten acceptance criteria, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import time

import numpy as np
import pytest

from owid.channels import apply_channel_kraus, apply_phase_flip_x, find_crossing, find_sudden_death, kraus_phase_flip
from owid.closed_form import concurrence_x_state, f_phi_theta, owid_bell_diagonal, owid_x_state
from owid.geometry import SurfaceSpec, sample_level_surface
from owid.linalg import DensityMatrix, von_neumann_entropy
from owid.oracle import concurrence_oracle, discord_oracle, owid_oracle, verify_corner_claim
from owid.states import BellDiagonalParams, XStateParams, bell_diagonal_density, x_state_density
from sampling import random_bell, random_x, random_x_corner_condition

EXAMPLE = XStateParams(0.3, 0.3, -0.4, 0.56)


@pytest.mark.acceptance(1, "Bell-diagonal closed form vs oracle")
def test_bell_closed_form_matches_oracle(rng, record_property):
    states = random_bell(rng, 100)
    owid_oracle(bell_diagonal_density(states[0]))  # compile outside the timed loop
    t0 = time.perf_counter()
    diffs = [abs(owid_bell_diagonal(p) - owid_oracle(bell_diagonal_density(p)).value) for p in states]
    elapsed = time.perf_counter() - t0
    record_property("detail", f"n=100 max|diff|={max(diffs):.2e} (tol 1e-6) in {elapsed:.1f} s (limit 60 s)")
    assert max(diffs) <= 1e-6
    assert elapsed < 60


@pytest.mark.acceptance(2, "X-state closed form vs oracle under the corner condition")
def test_x_closed_form_matches_oracle(rng, record_property):
    states = random_x_corner_condition(rng, 100)
    diffs = [abs(owid_x_state(p) - owid_oracle(x_state_density(p)).value) for p in states]
    record_property("detail", f"n=100 max|diff|={max(diffs):.2e} (tol 1e-6)")
    assert max(diffs) <= 1e-6


@pytest.mark.acceptance(3, "sudden death and crossing of the phase-flip example")
def test_event_values(record_property):
    find_sudden_death(XStateParams(0.1, 0.1, -0.2, 0.3))  # warm-up
    t0 = time.perf_counter()
    death = find_sudden_death(EXAMPLE)
    cross = find_crossing(EXAMPLE)
    elapsed = time.perf_counter() - t0
    record_property(
        "detail",
        f"p_sd={death.p_star:.7f} (0.321904) p_x={cross.p_star:.7f} (0.237211) "
        f"residuals {death.residual:.1e}, {cross.residual:.1e} in {elapsed:.2f} s",
    )
    assert death.found and cross.found
    assert abs(death.p_star - 0.321904) <= 5e-6
    assert abs(cross.p_star - 0.237211) <= 5e-6
    assert abs(death.residual) <= 1e-7 and abs(cross.residual) <= 1e-7
    assert elapsed < 5


@pytest.mark.acceptance(4, "discord equals OWID on Bell-diagonal states")
def test_discord_coincides(rng, record_property):
    states = random_bell(rng, 50)
    diffs = [abs(owid_bell_diagonal(p) - discord_oracle(bell_diagonal_density(p))) for p in states]
    record_property("detail", f"n=50 max|diff|={max(diffs):.2e} (tol 1e-6)")
    assert max(diffs) <= 1e-6


@pytest.mark.acceptance(5, "concurrence closed form vs spin-flip oracle")
def test_concurrence(rng, record_property):
    states = random_x(rng, 100)
    diffs = [abs(concurrence_x_state(p) - concurrence_oracle(x_state_density(p))) for p in states]
    record_property("detail", f"n=100 max|diff|={max(diffs):.2e} (tol 1e-9)")
    assert max(diffs) <= 1e-9


@pytest.mark.acceptance(6, "phase-flip Kraus map vs parameter map, semigroup")
def test_channel_consistency(rng, record_property):
    worst = 0.0
    for p, q in zip(random_x(rng, 100), rng.uniform(0, 1, 100)):
        kraus = apply_channel_kraus(x_state_density(p), kraus_phase_flip(q)).matrix
        param = x_state_density(apply_phase_flip_x(p, q)).matrix
        worst = max(worst, np.abs(kraus - param).max())
    semi = 0.0
    for p, (a, b) in zip(random_x(rng, 100), rng.uniform(0, 1, (100, 2))):
        ab = 1 - (1 - a) * (1 - b)
        rho = x_state_density(p)
        twice = apply_channel_kraus(apply_channel_kraus(rho, kraus_phase_flip(a)), kraus_phase_flip(b)).matrix
        once = apply_channel_kraus(rho, kraus_phase_flip(ab)).matrix
        semi = max(semi, np.abs(twice - once).max())
        pa, pab = apply_phase_flip_x(apply_phase_flip_x(p, a), b), apply_phase_flip_x(p, ab)
        semi = max(semi, np.abs(np.array(pa.c) - np.array(pab.c)).max())
    record_property("detail", f"max|Kraus-param|={worst:.2e} (tol 1e-10), semigroup {semi:.2e} (tol 1e-12)")
    assert worst <= 1e-10
    assert semi <= 1e-12


@pytest.mark.acceptance(7, "constant-OWID surfaces at resolution 64, shrinkage with s")
def test_surfaces(record_property):
    t0 = time.perf_counter()
    counts = {}
    sizes = {}
    for s in (0.3, 0.5):
        for target in (0.03, 0.15):
            sample = sample_level_surface(SurfaceSpec(s, target, resolution=64))
            assert not sample.empty, sample.diagnostic
            counts[s, target] = sample.superlevel_count()
            sizes[s, target] = (len(sample.points), len(sample.faces))
    elapsed = time.perf_counter() - t0
    record_property(
        "detail",
        "superlevel counts "
        + ", ".join(f"(s={s},d={t})={counts[s, t]}" for s, t in counts)
        + f" in {elapsed:.0f} s (limit 300 s)",
    )
    for target in (0.03, 0.15):
        assert counts[0.5, target] <= counts[0.3, target]
    assert elapsed < 300


@pytest.mark.acceptance(8, "f(phi, theta) non-increasing in theta and |phi|")
def test_f_monotone(record_property):
    h = 1e-6
    worst = -np.inf
    for i in range(200):
        phi = (i + 1) / 201
        for j in range(200):
            theta = (j + 1) / 201 * (1 - phi)
            d_theta = (f_phi_theta(phi, theta + h) - f_phi_theta(phi, theta - h)) / (2 * h)
            d_phi = (f_phi_theta(phi + h, theta) - f_phi_theta(phi - h, theta)) / (2 * h)
            worst = max(worst, d_theta, d_phi)
    record_property("detail", f"largest partial derivative {worst:.2e} (limit 1e-9)")
    assert worst <= 1e-9


@pytest.mark.acceptance(9, "trivial anchors")
def test_anchors(record_property):
    mixed = BellDiagonalParams(0.0, 0.0, 0.0)
    phi_plus = np.zeros(4, dtype=complex)
    phi_plus[[0, 3]] = 1 / np.sqrt(2)
    bell = DensityMatrix(np.outer(phi_plus, phi_plus.conj()))
    values = {
        "owid(I/4) closed": owid_bell_diagonal(mixed),
        "owid(I/4) oracle": owid_oracle(np.eye(4) / 4).value,
        "owid(Bell) closed": owid_bell_diagonal(BellDiagonalParams(1.0, -1.0, 1.0)),
        "owid(Bell) oracle": owid_oracle(bell).value,
        "S(I/4)": von_neumann_entropy(np.eye(4) / 4),
    }
    expected = {"owid(I/4) closed": 0, "owid(I/4) oracle": 0, "owid(Bell) closed": 1, "owid(Bell) oracle": 1, "S(I/4)": 2}
    errs = {k: abs(values[k] - expected[k]) for k in values}
    record_property("detail", f"max error {max(errs.values()):.1e} (tol 1e-9)")
    assert max(errs.values()) <= 1e-9, errs


@pytest.mark.acceptance(10, "measured-entropy minimum at z = (0, 0, 1) under the corner condition")
def test_corner_claim(rng, record_property):
    report = verify_corner_claim(random_x_corner_condition(rng, 200), tolerance=1e-8)
    record_property(
        "detail",
        f"checked {report.checked}, max|diff|={report.max_abs_diff:.2e}, counterexamples {len(report.counterexamples)}",
    )
    if report.counterexamples:
        print(json.dumps(report.counterexamples, indent=2))
    assert report.checked >= 100
    assert report.ok
