"""Exit criteria for the package, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from conftest import ACCEPTANCE_LINES, state_from
from oracles import hypergeometric_pmf_by_enumeration
from onlineseg.analytics import (
    binomial_migration_fraction,
    binomial_migration_prob,
    brute_force_migration_fraction,
)
from onlineseg.cli import DEFAULT_SEED, main
from onlineseg.harness import SweepConfig, derive_seed, run_sweep
from onlineseg.metrics import disagreement_phi, segregation_reading
from onlineseg.model import ModelParams, init_state, make_rng, run, sample_interactors, step

FIG1 = ModelParams(n_agents=100, n_communities=20, k_interactors=10, max_steps=100_000, seed=DEFAULT_SEED)


def report(label, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, detail


def test_c1_analytic_exactness():
    start = time.perf_counter()
    low = binomial_migration_prob(10, 0.05)
    high = binomial_migration_prob(10, 0.15)
    elapsed = time.perf_counter() - start
    ok = low == 0.0009765625 and high == 0.0107421875 and elapsed < 1e-3
    report("C1 analytic exactness", ok, f"{low!r}, {high!r} in {elapsed * 1e3:.3f} ms")


def test_c2_order_of_magnitude_jump():
    ratio = binomial_migration_fraction(10, 0.15) / binomial_migration_fraction(10, 0.05)
    report("C2 elevenfold jump", ratio == 11, f"ratio = {ratio}")


def test_c3_oracle_equivalence():
    start = time.perf_counter()
    mismatches = [
        (k, i / 20)
        for k in range(1, 17)
        for i in range(21)
        if binomial_migration_fraction(k, i / 20) != brute_force_migration_fraction(k, i / 20)
    ]
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 10
    report("C3 oracle equivalence", ok, f"{len(mismatches)} mismatches over 336 cells in {elapsed:.2f} s")


@pytest.mark.slow
def test_c4_phase_transition():
    config = SweepConfig(FIG1, (0.025, 0.05, 0.15, 0.25), replicates=10)
    start = time.perf_counter()
    results = {r.theta: r.phi_mean for r in run_sweep(config)}
    elapsed = time.perf_counter() - start
    checks = {
        "phi(0.025) >= 0.40": results[0.025] >= 0.40,
        "phi(0.15) <= 0.10": results[0.15] <= 0.10,
        "phi(0.25) <= 0.05": results[0.25] <= 0.05,
        "phi(0.05) - phi(0.15) >= 0.30": results[0.05] - results[0.15] >= 0.30,
        "runtime < 300 s": elapsed < 300,
    }
    means = ", ".join(f"phi({t})={m:.4f}" for t, m in results.items())
    failed = [name for name, ok in checks.items() if not ok]
    report("C4 phase transition", not failed, f"{means}; {elapsed:.0f} s; failed: {failed or 'none'}")


def _fig1_runs(theta):
    return [
        segregation_reading(run(FIG1.replace(theta=theta, seed=derive_seed(DEFAULT_SEED, 0, r))))
        for r in range(10)
    ]


@pytest.mark.slow
def test_c5_fast_segregation_at_0_2():
    fractions = [r.homogeneous_agent_fraction for r in _fig1_runs(0.2)]
    hits = sum(f > 0.95 for f in fractions)
    report(
        "C5 segregation at theta=0.2",
        hits >= 9,
        f"{hits}/10 runs with homogeneous fraction > 0.95 ({[round(f, 2) for f in fractions]})",
    )


@pytest.mark.slow
def test_c6_no_segregation_at_0():
    phis = [r.phi for r in _fig1_runs(0.0)]
    hits = sum(p >= 0.40 for p in phis)
    report("C6 no segregation at theta=0", hits >= 9, f"{hits}/10 runs with phi >= 0.40 ({[round(p, 3) for p in phis]})")


def test_c7_sampler_exactness():
    rng = make_rng(7)
    cases = set()
    for n_c in range(1, 7):
        for ones in range(n_c + 1):
            for opinion in (0, 1):
                count = ones if opinion else n_c - ones
                if count == 0:
                    continue
                for k in range(1, 7):
                    cases.add((n_c - ones, ones, opinion, min(k, n_c - 1)))
    worst = 1.0
    bad = []
    for zeros, ones, opinion, k_eff in sorted(cases):
        state = state_from([[zeros, ones]])
        same = (ones if opinion else zeros) - 1
        other = zeros if opinion else ones
        exact = hypergeometric_pmf_by_enumeration(same, other, k_eff) if k_eff else {0: 1}
        tally = Counter()
        for _ in range(10_000):
            got_k, similar = sample_interactors(state, (0, opinion), k_eff or 1, rng)
            if got_k != k_eff:
                bad.append((zeros, ones, opinion, k_eff, "k"))
                break
            tally[similar] += 1
        if not set(tally) <= set(exact):
            bad.append((zeros, ones, opinion, k_eff, "support"))
            continue
        if len(exact) > 1:
            observed = [tally[s] for s in exact]
            expected = [float(p) * 10_000 for p in exact.values()]
            pvalue = stats.chisquare(observed, expected).pvalue
            worst = min(worst, pvalue)
            if pvalue <= 0.001:
                bad.append((zeros, ones, opinion, k_eff, pvalue))
    report("C7 sampler exactness", not bad, f"{len(cases)} profiles, min p = {worst:.4f}, failures: {bad or 'none'}")


@pytest.mark.slow
def test_c8_invariant_fuzz():
    gen = np.random.default_rng(8)
    violations = []
    for trial in range(1_000):
        params = ModelParams(
            n_agents=int(gen.integers(2, 201)),
            n_communities=int(gen.integers(2, 31)),
            k_interactors=int(gen.integers(1, 16)),
            theta=float(gen.uniform(-0.1, 1.0)),
            max_steps=int(gen.integers(0, 10_001)),
            seed=int(gen.integers(0, 2**63)),
            balanced_init=bool(gen.integers(2)),
        )
        rng = make_rng(params.seed)
        state = init_state(params, rng)
        totals = state.opinion_totals()
        for t in range(params.max_steps):
            step(state, params, rng)
            if state.opinion_totals() != totals or (state.counts < 0).any():
                violations.append((trial, "conservation", t))
                break
            if t % 500 == 0 and not 0.0 <= disagreement_phi(state) <= 0.5:
                violations.append((trial, "phi range", t))
                break
        if not 0.0 <= disagreement_phi(state) <= 0.5:
            violations.append((trial, "final phi range"))
        if run(params) != state:
            violations.append((trial, "replay"))
    report("C8 invariant fuzz", not violations, f"1000 runs, violations: {violations[:5] or 'none'}")


@pytest.mark.slow
def test_c9_byte_reproducible_sweep(tmp_path, capsys):
    argv = ["sweep", "--steps", "2000", "--seed", "4242"]
    outputs = []
    for name, workers in [("a", 1), ("b", 1), ("c", 8)]:
        out = tmp_path / name
        assert main([*argv, "--workers", str(workers), "--out", str(out)]) == 0
        outputs.append((out / "sweep.csv").read_bytes())
    capsys.readouterr()
    ok = outputs[0] == outputs[1] == outputs[2] and outputs[0].count(b"\n") == 22
    report("C9 byte-identical sweep CSV", ok, f"{len(outputs[0])} bytes, workers 1/1/8 identical = {ok}")
