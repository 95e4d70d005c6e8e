"""Check reports, bound checks against brute-force oracles, experiments.

Oracles: per-n recomputation of carry counts through exact rational phases,
empirical densities at moderate N, and direct file inspection for the
experiment outputs.
"""

import json
from fractions import Fraction

import numpy as np
import pytest

from ostrowski import (
    GOLDEN,
    SILVER,
    CheckReport,
    ExperimentConfig,
    RangeError,
    ValidationError,
    carry_bound_check,
    carry_bound_sweep,
    density_check,
    density_formula,
    density_sweep,
    encode,
    from_theta,
    gap_structure_check,
    pseudorandomness_experiment,
    psi,
    scale_for,
    sigma,
    spectrum_experiment,
    tail,
    verify_all,
)
from ostrowski.harness import DEFAULT_ALPHA_SPECS


# --- reports ---------------------------------------------------------------------

def test_check_report_json_round_trip():
    rep = CheckReport(
        check_name="density",
        instances_run=12,
        instances_passed=11,
        worst_margin=-0.25,
        details=({"lam": 3, "a": 2, "empirical": 0.5, "formula": 0.25},),
    )
    back = CheckReport.from_json(rep.to_json())
    assert back == rep
    assert not back.ok
    assert CheckReport("x", 3, 3, 0.0).ok


# --- carry bound -------------------------------------------------------------------

def brute_carry_count(g, lam, r, N):
    """n < N whose high-digit atom product changes between n and n + r.

    For the sigma-phase family the product over digits >= lam moves exactly
    when theta times the high digit-sum difference is a non-integer; decided
    in exact rationals on the float's binary value.
    """
    scale = g.scale
    th = Fraction(g.theta)
    count = 0
    for n in range(N):
        hi_n = sum(e for k, e in enumerate(encode(n, scale).digits) if k >= lam)
        hi_m = sum(e for k, e in enumerate(encode(n + r, scale).digits) if k >= lam)
        if (th * (hi_m - hi_n)) % 1 != 0:
            count += 1
    return count


@pytest.mark.parametrize("spec,theta", [(GOLDEN, 0.5), (SILVER, 0.25), (GOLDEN, 1 / 3)])
def test_carry_count_matches_brute_force(spec, theta):
    scale = scale_for(spec, 600)
    g = from_theta(theta, scale)
    for lam in (1, 2, 3):
        q_prev = scale.q[lam - 1]
        for r in range(q_prev):
            rep = carry_bound_check(g, lam, r, 400)
            brute = brute_carry_count(g, lam, r, 400)
            assert rep.instances_run == 1
            assert rep.worst_margin == 400 * r / q_prev - brute
            assert rep.ok


def test_carry_digit_route_without_theta():
    # tables without a theta tag fall back to counting digit changes at or
    # above the level, which is the same set for generic atoms
    scale = scale_for(GOLDEN, 400)
    g = from_theta(1 / 3, scale)
    bare = type(g)(scale, g.atoms, g.modulus_bound, None)
    lam, r, N = 2, 1, 250
    rep = carry_bound_check(bare, lam, r, N)
    brute = sum(1 for n in range(N) if psi(n + r, lam, scale) - psi(n, lam, scale) != r)
    assert rep.worst_margin == N * r / scale.q[lam - 1] - brute
    assert rep.ok


def test_carry_sweep_all_pass():
    scale = scale_for(SILVER, 3000)
    g = from_theta(0.5, scale)
    rep = carry_bound_sweep(g, 4, N_values=(500, 2000))
    assert rep.ok
    assert rep.instances_run == 2 * sum(scale.q[lam - 1] for lam in range(1, 5))
    assert rep.worst_margin == 0.0  # the r = 0 instances are exactly tight


def test_carry_validation():
    scale = scale_for(GOLDEN, 100)
    g = from_theta(0.5, scale)
    with pytest.raises(ValidationError):
        carry_bound_check(g, 0, 1, 10)
    with pytest.raises(ValidationError):
        carry_bound_check(g, 1, -1, 10)
    with pytest.raises(RangeError):
        carry_bound_check(g, 1, 1, scale.limit)


# --- densities ---------------------------------------------------------------------

def test_density_formula_masses_sum_to_one():
    for spec in (GOLDEN, SILVER):
        scale = scale_for(spec, 10**4)
        for lam in (1, 2, 4):
            total = sum(density_formula(scale, lam, a) for a in range(scale.q[lam]))
            assert total == pytest.approx(1.0, abs=1e-12)


def test_density_formula_bands():
    # below q_{lam-1} the density is delta * (1 + t), above it is delta
    scale = scale_for(GOLDEN, 10**4)
    lam = 2
    t = tail(GOLDEN, lam).value
    delta = 1.0 / (scale.q[lam] + scale.q[lam - 1] * t)
    assert density_formula(scale, lam, 0) == pytest.approx(delta * (1 + t), rel=1e-12)
    assert density_formula(scale, lam, 1) == pytest.approx(delta, rel=1e-12)
    assert density_formula(scale, lam, 0) == pytest.approx(0.618034, abs=5e-7)
    assert density_formula(scale, lam, 1) == pytest.approx(0.381966, abs=5e-7)


def test_density_formula_range_errors():
    scale = scale_for(GOLDEN, 10**4)
    with pytest.raises(RangeError):
        density_formula(scale, 0, 0)
    with pytest.raises(RangeError):
        density_formula(scale, 2, scale.q[2])


def test_density_check_and_sweep():
    scale = scale_for(SILVER, 2 * 10**5)
    rep = density_check(3, 7, 10**5, scale)
    assert rep.ok and rep.instances_run == 1
    sweep = density_sweep(scale, 4, N=10**5)
    assert sweep.ok
    assert sweep.instances_run == 4 + sum(scale.q[lam] for lam in range(1, 5))


# --- gap structure -----------------------------------------------------------------

def test_gap_structure_across_specs():
    from ostrowski import parse_alpha_spec

    for spec_text in DEFAULT_ALPHA_SPECS:
        spec = parse_alpha_spec(spec_text)
        scale = scale_for(spec, 10**4)
        for lam in (1, 2, 3):
            rep = gap_structure_check(lam, 200, scale)
            assert rep.ok, (spec_text, lam, rep.details)


# --- experiment configs and runs ----------------------------------------------------

def test_experiment_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig(format="yaml")
    with pytest.raises(ValidationError):
        ExperimentConfig(N=100, R_list=(256,))
    with pytest.raises(ValidationError):
        ExperimentConfig(N=10, R_list=(2,), lambda_list=(9,))
    cfg = ExperimentConfig(N=5000, R_list=(16, 64), lambda_list=(2, 4))
    assert ExperimentConfig(**cfg.to_dict()) == cfg


def test_pseudorandomness_experiment_output(tmp_path):
    out = tmp_path / "corr.csv"
    cfg = ExperimentConfig(
        N=4000, R_list=(8, 32), lambda_list=(2,), output_path=str(out), format="csv"
    )
    payload = pseudorandomness_experiment(cfg)
    assert [row["R"] for row in payload["rows"]] == [8, 32]
    for row in payload["rows"]:
        assert 0.0 <= row["quadratic_mean"] <= 1.0
        assert 0.0 <= row["absolute_mean"] <= 1.0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    assert json.loads(lines[0][len("# config: "):])["N"] == 4000
    assert lines[1] == "R,quadratic_mean,absolute_mean"
    assert len(lines) == 4


def test_spectrum_experiment_output(tmp_path):
    out = tmp_path / "spec.json"
    cfg = ExperimentConfig(
        N=8192, R_list=(8,), lambda_list=(2,), seed=5, output_path=str(out), format="json"
    )
    payload = spectrum_experiment(cfg)
    assert [row["N"] for row in payload["ladder"]] == [4096, 8192]
    assert len(payload["scale_sums"]) == 16
    for entry in payload["scale_sums"]:
        assert entry["contraction_margin"] <= 1e-12
        assert all(m <= 1.0 + 1e-9 for m in entry["moduli"])
    disk = json.loads(out.read_text())
    assert disk["config"]["seed"] == 5
    assert disk["ladder"] == payload["ladder"]


# --- the battery -------------------------------------------------------------------

def test_verify_all_single_family():
    (rep,) = verify_all(seed=0, only="fejer")
    assert rep.check_name == "fejer" and rep.ok and rep.instances_run == 100


def test_verify_all_unknown_family():
    with pytest.raises(ValidationError):
        verify_all(only="nope")


def test_verify_all_validates_fn_spec_first(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"0": [[1.0, 0.0]]}))
    with pytest.raises(ValidationError):
        verify_all(only="fejer", fn_spec=f"atoms:{bad}")
