from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from daqc.errors import ValidationError
from daqc.experiments import (
    RWA_PRESETS,
    ExperimentConfig,
    exact_hopping_evolution,
    fidelity_experiment,
    impedance_report,
    initial_state,
    mean_fidelity_experiment,
    random_states,
    read_config_file,
    rwa_preset,
    rwa_report,
    spectrum_report,
    timing_table,
    trotter_evolve_batch,
)
from daqc.hubbard import LatticeSpec, compile_schedule, hopping_terms, simulate_schedule
from daqc.spin import ChainSpec, rwa_deviation


def test_config_overrides_parse_types():
    cfg = ExperimentConfig().with_overrides(
        {"rows": "4", "at": "2.5", "steps": "5,6", "coulomb": "yes", "initial": "ghz-pair"}
    )
    assert (cfg.rows, cfg.at, cfg.steps, cfg.coulomb, cfg.initial) == (4, 2.5, (5, 6), True, "ghz-pair")
    with pytest.raises(ValidationError):
        ExperimentConfig().with_overrides({"rows": "three"})
    with pytest.raises(ValidationError):
        ExperimentConfig().with_overrides({"colour": "red"})


def test_read_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nrows = 2  # trailing\n\nat=3\n")
    assert read_config_file(str(path)) == {"rows": "2", "at": "3"}
    path.write_text("rows 2\n")
    with pytest.raises(ValidationError):
        read_config_file(str(path))


@given(st.integers(0, 2**63 - 1))
def test_random_states_are_normalized_and_seeded(seed):
    a = random_states(3, 4, seed)
    assert np.allclose(np.linalg.norm(a, axis=0), 1.0)
    assert np.array_equal(a, random_states(3, 4, seed))


def test_random_states_are_spread_like_haar():
    # Haar-random states have E|psi_i|^2 = 1/d and E|psi_i|^4 = 2/(d(d+1)).
    d = 16
    states = random_states(4, 20000, 1)
    p = np.abs(states) ** 2
    assert p.mean() == pytest.approx(1 / d, rel=1e-12)
    assert (p**2).mean() == pytest.approx(2 / (d * (d + 1)), rel=0.03)


def test_initial_state_specs():
    lattice = LatticeSpec(2, 2)
    psi = initial_state("up@1,1;down@2,2", lattice)
    # chain positions 1 and 8 occupied -> bits 0 at those positions
    assert psi[int("01111110", 2)] == 1
    ghz = initial_state("ghz-pair", lattice)
    assert abs(ghz[0]) ** 2 == pytest.approx(0.5) and abs(ghz[-1]) ** 2 == pytest.approx(0.5)
    assert np.array_equal(initial_state("random(3)", lattice), random_states(8, 1, 3)[:, 0])
    with pytest.raises(ValidationError):
        initial_state("up@1,1;up@1,1", lattice)
    with pytest.raises(ValidationError):
        initial_state("left@1,1", lattice)


def test_exact_evolution_matches_dense_expm():
    from scipy.linalg import expm

    lattice = LatticeSpec(2, 2, hopping=0.6)
    psi = random_states(8, 1, 2)[:, 0]
    ref = expm(-1.7j * hopping_terms(lattice).dense()) @ psi
    assert np.allclose(exact_hopping_evolution(lattice, 1.7, psi), ref, atol=1e-10)


def test_sector_route_matches_direct_simulation():
    lattice = LatticeSpec(2, 3)
    states = random_states(lattice.n_qubits, 3, 8)
    batch = trotter_evolve_batch(lattice, 4.0, 10, states)
    schedule = compile_schedule(lattice, 4.0, 10)
    for i in range(3):
        direct = simulate_schedule(schedule, states[:, i])
        assert np.allclose(batch[:, i], direct, atol=1e-12)


def test_fidelity_curve_starts_at_one():
    cfg = ExperimentConfig(rows=2, cols=2, steps=(2,), points=3, at=1.0, initial="up@1,1")
    report = fidelity_experiment(cfg)
    assert [r[0] for r in report.rows] == [0.0, 0.5, 1.0]
    assert report.rows[0][3] == pytest.approx(1.0)
    assert report.curve_csv().splitlines()[0] == "at,n,fidelity"


def test_mean_fidelity_report_shape():
    cfg = ExperimentConfig(rows=2, cols=2, steps=(1, 3), samples=5, seed=1)
    report = mean_fidelity_experiment(cfg)
    assert len(report.rows) == 10
    assert [s[0] for s in report.summary] == [1, 3]
    assert all(s[1] == pytest.approx(1.0) for s in report.summary)
    assert report.summary_csv().splitlines()[0] == "n,mean,std,samples"


def test_single_particle_curve_matches_one_body_dynamics():
    """A single up-spin on 2x3 hops like a particle on the adjacency graph."""
    from scipy.linalg import expm

    lattice = LatticeSpec(2, 3)
    cfg = ExperimentConfig(steps=(30,), points=2, at=4.0, initial="up@1,1")
    psi0 = initial_state(cfg.initial, lattice)
    exact = exact_hopping_evolution(lattice, 4.0, psi0)
    # one-body oracle on the three-by-two up-spin sites (row-major, chain 1, 3, 5, ...)
    adjacency = np.zeros((6, 6))
    for a, b in [(0, 1), (2, 3), (4, 5), (0, 2), (2, 4), (1, 3), (3, 5)]:
        adjacency[a, b] = adjacency[b, a] = 1.0
    amplitudes = expm(-4.0j * adjacency)[:, 0]
    n = lattice.n_qubits
    probs = [abs(exact[((1 << n) - 1) ^ (1 << (n - (2 * s + 1)))]) ** 2 for s in range(6)]
    assert np.allclose(probs, np.abs(amplitudes) ** 2, atol=1e-10)
    report = fidelity_experiment(cfg)
    assert report.endpoint(30) > 0.9


def test_timing_table_csv():
    text = timing_table((2,), 4.0, (10, 20), 0.08)
    assert text.splitlines() == [
        "cols,n,tau_a_ns,tau_b_ns,tau_sim_us",
        "2,10,0.796,3.125,0.161",
        "2,20,0.398,3.125,0.156",
    ]


def test_rwa_presets_are_resonant_and_small():
    for name in RWA_PRESETS:
        preset = rwa_preset(name)
        assert preset.chain.n_qubits in (2, 3)
    with pytest.raises(ValidationError):
        rwa_preset("unknown")


def test_undriven_uncoupled_chain_has_zero_deviation():
    chain = ChainSpec.uniform(2, 2 * math.pi * 9, 2 * math.pi * 1, 0.0, 1.0)
    out = rwa_deviation(chain, [], 5.0, ["00", "01", "10", "11"], "01", n_samples=11)
    assert out.max_deviation <= 1e-12


@pytest.mark.parametrize("name,budget", [("exchange-only", 0.05), ("pairing-only", 0.05), ("idle", 1e-3)])
def test_rwa_report_small_presets(name, budget):
    text, result = rwa_report(name, n_samples=51)
    assert text.splitlines()[0].startswith("t_ns,p_full_00")
    assert len(text.splitlines()) == 52
    assert result.max_deviation <= budget


def test_exchange_swaps_and_pairing_tone_pairs():
    _, a = rwa_report("exchange-only", n_samples=51)
    _, b = rwa_report("pairing-only", n_samples=51)
    # exchange tone moves |01> to |10>; the sum tone moves |00> to |11>
    assert a.p_rwa[:, 2].max() > 0.99
    assert b.p_rwa[:, 3].max() > 0.99


def test_spectrum_report_symmetry():
    text = spectrum_report(1.0, 1.0, ng_min=-1.0, ng_max=1.0, ng_points=21)
    rows = np.array([[float(x) for x in line.split(",")] for line in text.splitlines()[1:]])
    assert np.allclose(rows[:, 1:], rows[::-1, 1:], atol=1e-9)
    assert np.allclose(rows[0, 1:], rows[10, 1:], atol=1e-9)
    trans = spectrum_report(0.303, transitions=True, ng_points=3)
    assert trans.splitlines()[0] == "n_g,E1_minus_E0,E2_minus_E0,E3_minus_E0"


def test_impedance_report_rows():
    lines = impedance_report(points=4).splitlines()
    assert lines[0] == "phi_ext,ratio" and len(lines) == 5
    with pytest.raises(ValidationError):
        impedance_report(points=0)

