"""Verification harness: exact-identity checks, bound sweeps, and experiments.

Every check returns a CheckReport; verify_all bundles the full battery with
the default test family (four quotient specs crossed with four theta values)
and is what the CLI `verify` subcommand runs.  Margins are oriented so that
passing instances have margin >= 0.
"""

from __future__ import annotations

import csv
import json
import time
from collections.abc import Sequence
from dataclasses import asdict, dataclass

import numpy as np

from . import spectral
from .alphafun import AlphaFunction, from_theta, parse_fn_spec
from .cfrac import (
    ConvergentTable,
    expand_max,
    parse_alpha_spec,
    scale_for,
    tail,
)
from .errors import RangeError, ValidationError
from .numeration import (
    digit_at_range,
    high_digit_sum_range,
    psi_range,
    w_sequence,
)
from .numerics import frac_mul_int, pairwise_sum

# Default verification family.
DEFAULT_ALPHA_SPECS = (
    "golden",
    "silver",
    "periodic:/1,2",
    "periodic:/1,2,3,1,1,4",
)
DEFAULT_THETAS = (0.5, 1 / 3, 0.1234567, 0.0)

IDENTITY_TOL = 1e-10
DENSITY_TOL = 5e-3
DENSITY_N = 10**6
CARRY_NS = (10**3, 10**4, 10**5)
GAP_COUNT = 10**4


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one check family: counts, the worst margin, failure details."""

    check_name: str
    instances_run: int
    instances_passed: int
    worst_margin: float
    details: tuple = ()

    @property
    def ok(self) -> bool:
        return self.instances_passed == self.instances_run

    def to_json(self) -> str:
        d = asdict(self)
        d["details"] = list(self.details)
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "CheckReport":
        d = json.loads(text)
        return cls(
            check_name=d["check_name"],
            instances_run=int(d["instances_run"]),
            instances_passed=int(d["instances_passed"]),
            worst_margin=float(d["worst_margin"]),
            details=tuple(d["details"]),
        )


def _report(name: str, margins, details=()) -> CheckReport:
    margins = list(margins)
    passed = sum(1 for m in margins if m >= 0)
    worst = min(margins) if margins else 0.0
    return CheckReport(name, len(margins), passed, float(worst), tuple(details))


@dataclass(frozen=True)
class ExperimentConfig:
    """Inputs for an experiment run; serializable into output headers."""

    alpha_spec: str = "golden"
    fn_spec: str = "theta:0.5"
    N: int = 10**6
    R_list: tuple[int, ...] = (32, 64, 128, 256, 512, 1024, 2048, 4096)
    lambda_list: tuple[int, ...] = (2, 4, 6, 8)
    seed: int = 0
    output_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        object.__setattr__(self, "R_list", tuple(int(r) for r in self.R_list))
        object.__setattr__(self, "lambda_list", tuple(int(m) for m in self.lambda_list))
        if self.format not in ("csv", "json"):
            raise ValidationError(f"format must be csv or json, got {self.format!r}")
        if self.R_list and self.N < max(self.R_list):
            raise ValidationError("N must be >= max(R_list)")
        scale = expand_max(parse_alpha_spec(self.alpha_spec))
        for lam in self.lambda_list:
            if not 0 <= lam <= scale.K or scale.q[lam] > self.N:
                raise ValidationError(f"lambda={lam} has q_lambda > N or is out of range")

    def to_dict(self) -> dict:
        return asdict(self)


def _scale_and_fn(config: ExperimentConfig, upto: int) -> tuple[ConvergentTable, AlphaFunction]:
    scale = scale_for(parse_alpha_spec(config.alpha_spec), upto)
    return scale, parse_fn_spec(config.fn_spec, scale)


# --- carry bound -------------------------------------------------------------

def _theta_carry_counts(g, lam: int, r_values, N: int) -> list[int]:
    """Exact counts of n < N whose high-digit factor ratio differs from 1.

    For g(n) = e(theta * sigma(n)) the ratio over digits >= lam is
    e(theta * (sigma_hi(n+r) - sigma_hi(n))); it differs from 1 exactly when
    theta times that integer difference is not an integer, decided in exact
    arithmetic per distinct difference value.
    """
    scale = g.scale
    r_max = max(r_values)
    hi = high_digit_sum_range(scale, lam, N + r_max)
    counts = []
    for r in r_values:
        d = hi[r : r + N] - hi[:N]
        lo, top = int(d.min()), int(d.max())
        moved = np.fromiter(
            (frac_mul_int(abs(v), g.theta) != 0.0 for v in range(lo, top + 1)),
            dtype=bool,
            count=top - lo + 1,
        )
        counts.append(int(np.count_nonzero(moved[d - lo])))
    return counts


def _digit_carry_counts(g, lam: int, r_values, N: int) -> list[int]:
    """Counts of n < N whose digits at positions >= lam change between n and n+r.

    Used when g carries no theta tag; a superset of the set where the atom
    product actually moves, and the same N*r/q_{lam-1} bound covers it.
    """
    scale = g.scale
    r_max = max(r_values)
    ps = psi_range(scale, lam, N + r_max)
    return [int(np.count_nonzero(ps[r : r + N] - ps[:N] != r)) for r in r_values]


def carry_bound_check(g: AlphaFunction, lam: int, r: int, N: int) -> CheckReport:
    """Count truncation-sensitive n < N and compare against N*r/q_{lam-1}.

    The comparison count * q_{lam-1} <= N * r runs in exact integers; the
    reported margin is the slack in count units.
    """
    if lam < 1:
        raise ValidationError("lam must be >= 1")
    if r < 0:
        raise ValidationError("r must be >= 0")
    if N < 1:
        raise ValidationError("N must be >= 1")
    if N + r > g.scale.limit:
        raise RangeError(f"N + r = {N + r} beyond table limit {g.scale.limit}")
    counter = _theta_carry_counts if g.theta is not None else _digit_carry_counts
    count = counter(g, lam, [r], N)[0]
    q_prev = g.scale.q[lam - 1]
    ok = count * q_prev <= N * r
    margin = N * r / q_prev - count
    details = () if ok else ({"lam": lam, "r": r, "N": N, "count": count},)
    return _report("carry_bound", [margin if ok else min(margin, -1.0)], details)


def carry_bound_sweep(
    g: AlphaFunction, lam_max: int, N_values=CARRY_NS
) -> CheckReport:
    """Exhaustive carry check: every lam <= lam_max, every r < q_{lam-1}."""
    scale = g.scale
    counter = _theta_carry_counts if g.theta is not None else _digit_carry_counts
    margins = []
    details = []
    for N in N_values:
        for lam in range(1, lam_max + 1):
            if lam > scale.K:
                continue
            r_values = list(range(scale.q[lam - 1]))
            q_prev = scale.q[lam - 1]
            for r, count in zip(r_values, counter(g, lam, r_values, N)):
                if count * q_prev <= N * r:
                    margins.append(N * r / q_prev - count)
                else:
                    margins.append(-1.0)
                    if len(details) < 10:
                        details.append({"lam": lam, "r": r, "N": N, "count": count})
    return _report("carry_bound", margins, details)


# --- block densities ---------------------------------------------------------

def density_formula(scale: ConvergentTable, lam: int, a: int) -> float:
    """Limit density of {n : psi_lam(n) = a}.

    delta = 1/(q_lam + q_{lam-1} * t) for a >= q_{lam-1} and delta * (1 + t)
    below, with t the tail [0; a_{lam+1}, a_{lam+2}, ...].  The two bands sum
    to exactly 1 over a < q_lam.
    """
    if not 1 <= lam <= scale.K:
        raise RangeError(f"lam={lam} outside 1..{scale.K}")
    if not 0 <= a < scale.q[lam]:
        raise RangeError(f"a={a} outside [0, q_lam={scale.q[lam]})")
    t = tail(scale.spec, lam).value
    delta = 1.0 / (scale.q[lam] + scale.q[lam - 1] * t)
    return delta * (1.0 + t) if a < scale.q[lam - 1] else delta


def density_check(lam: int, a: int, N: int, scale: ConvergentTable) -> CheckReport:
    """Empirical density of psi_lam(n) = a over n < N against the formula."""
    formula = density_formula(scale, lam, a)
    hits = int(np.count_nonzero(psi_range(scale, lam, N) == a))
    margin = DENSITY_TOL - abs(hits / N - formula)
    detail = {"lam": lam, "a": a, "N": N, "empirical": hits / N, "formula": formula}
    return _report("density", [margin], () if margin >= 0 else (detail,))


def density_sweep(scale: ConvergentTable, lam_max: int, N: int = DENSITY_N) -> CheckReport:
    """Densities for every a < q_lam, lam <= lam_max, in one pass per level.

    Also verifies that the formula masses sum to 1 (within 1e-10) per level.
    """
    margins = []
    details = []
    for lam in range(1, min(lam_max, scale.K) + 1):
        t = tail(scale.spec, lam).value
        q_lam, q_prev = scale.q[lam], scale.q[lam - 1]
        delta = 1.0 / (q_lam + q_prev * t)
        formulas = np.where(np.arange(q_lam) < q_prev, delta * (1.0 + t), delta)
        total_gap = 1e-10 - abs(float(np.sum(formulas)) - 1.0)
        margins.append(total_gap)
        counts = np.bincount(psi_range(scale, lam, N), minlength=q_lam)
        if len(counts) > q_lam:
            raise AssertionError("psi_lam produced a value >= q_lam")
        gaps = DENSITY_TOL - np.abs(counts / N - formulas)
        margins.extend(gaps.tolist())
        for a in np.nonzero(gaps < 0)[0][:10]:
            details.append(
                {"lam": lam, "a": int(a), "empirical": counts[a] / N, "formula": float(formulas[a])}
            )
    return _report("density", margins, details)


# --- gap structure -----------------------------------------------------------

def gap_structure_check(lam: int, count: int, scale: ConvergentTable) -> CheckReport:
    """Cross-check w_sequence against a brute-force digit scan.

    Verifies the first `count` gaps: starts match {n : psi_lam(n) = 0}, every
    gap is q_lam or q_{lam-1}, and (away from the degenerate q_lam = q_{lam-1}
    case) a gap is short exactly when the digit at lam is maximal.
    """
    block = w_sequence(lam, count + 1, scale)
    starts = np.asarray(block.starts, dtype=np.int64)
    M = int(starts[-1]) + 1
    bf_starts = np.nonzero(psi_range(scale, lam, M) == 0)[0]
    margins = []
    details = []
    if len(bf_starts) != len(starts) or not np.array_equal(bf_starts, starts):
        margins.append(-1.0)
        details.append({"lam": lam, "mismatch": "start set differs from brute force"})
        return _report("gap_structure", margins, details)
    gaps = np.diff(starts)
    q_long, q_short = scale.q[lam], scale.q[lam - 1]
    member_ok = np.isin(gaps, [q_long, q_short]).all()
    margins.append(0.0 if member_ok else -1.0)
    if not member_ok:
        details.append({"lam": lam, "mismatch": "gap outside {q_lam, q_lam-1}"})
    a_top = scale.digit_bound(lam)
    eps_lam = digit_at_range(scale, lam, M)[starts[:-1]]
    if q_long != q_short:
        rule_ok = bool(np.array_equal(gaps == q_short, eps_lam == a_top))
        margins.append(0.0 if rule_ok else -1.0)
        if not rule_ok:
            details.append({"lam": lam, "mismatch": "short-gap rule violated"})
        kinds_ok = all(
            (kind == "short") == (gap == q_short) for kind, gap in zip(block.kinds, gaps)
        )
    else:
        # degenerate level (q_lam = q_{lam-1}): lengths cannot distinguish kinds
        kinds_ok = all(
            (kind == "short") == (e == a_top) for kind, e in zip(block.kinds, eps_lam)
        )
    margins.append(0.0 if kinds_ok else -1.0)
    if not kinds_ok:
        details.append({"lam": lam, "mismatch": "kind tags disagree"})
    return _report("gap_structure", margins, details)


# --- experiments -------------------------------------------------------------

def _write_output(config: ExperimentConfig, payload: dict, csv_rows, csv_header) -> None:
    if config.output_path is None:
        return
    if config.format == "json":
        with open(config.output_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write("# config: " + json.dumps(config.to_dict()) + "\n")
            writer = csv.writer(fh)
            writer.writerow(csv_header)
            writer.writerows(csv_rows)


def pseudorandomness_experiment(config: ExperimentConfig) -> dict:
    """Correlation quadratic means Q(R) for each configured R at fixed N."""
    t0 = time.perf_counter()
    _, g = _scale_and_fn(config, config.N + max(config.R_list))
    profile = spectral.correlation_profile(g, max(config.R_list), config.N)
    rows = []
    for R in sorted(config.R_list):
        absm = float(pairwise_sum(np.abs(profile.gamma[:R])).real / R)
        rows.append({"R": R, "quadratic_mean": spectral.quadratic_mean(profile, R),
                     "absolute_mean": absm})
    payload = {
        "config": config.to_dict(),
        "N": config.N,
        "rows": rows,
        "runtime_seconds": time.perf_counter() - t0,
    }
    _write_output(
        config,
        payload,
        [(r["R"], r["quadratic_mean"], r["absolute_mean"]) for r in rows],
        ("R", "quadratic_mean", "absolute_mean"),
    )
    return payload


def spectrum_experiment(config: ExperimentConfig) -> dict:
    """Peak |exponential sum| along a doubling ladder of N, plus scale sums.

    The scale-sum section draws 16 uniform betas from the configured seed and
    reports |S_i| along the convergent scales up to q_i <= N together with the
    worst contraction margin max(|S_{i+1}| - max(|S_i|, |S_{i-1}|)).
    """
    t0 = time.perf_counter()
    scale, g = _scale_and_fn(config, config.N)
    ladder_ns = []
    n = config.N
    while n >= 4096:
        ladder_ns.append(n)
        n //= 2
    if not ladder_ns:
        ladder_ns = [config.N]
    ladder = []
    for n in sorted(ladder_ns):
        scan = spectral.spectrum_scan(g, n)
        ladder.append({"N": n, "beta_peak": scan.beta_peak, "peak_value": scan.peak_value})
    rng = np.random.default_rng(config.seed)
    K = max(i for i in range(1, scale.K + 1) if scale.q[i] <= config.N)
    sums = []
    for beta in rng.random(16):
        S = spectral.scale_sums(g, float(beta), K)
        mods = np.abs(S)
        contraction = float(
            max(mods[i + 1] - max(mods[i], mods[i - 1]) for i in range(1, K))
        ) if K >= 2 else 0.0
        sums.append({"beta": float(beta), "moduli": mods.tolist(),
                     "contraction_margin": contraction})
    payload = {
        "config": config.to_dict(),
        "ladder": ladder,
        "scale_sums": sums,
        "runtime_seconds": time.perf_counter() - t0,
    }
    csv_rows = [("ladder", row["N"], row["beta_peak"], row["peak_value"]) for row in ladder]
    csv_rows += [("scale_sums", s["beta"], len(s["moduli"]), s["contraction_margin"]) for s in sums]
    _write_output(config, payload, csv_rows, ("section", "x", "y", "z"))
    return payload


# --- the full battery --------------------------------------------------------

def _identity_family():
    """Scales and functions the identity checks run over (q_lam <= 1024)."""
    for spec_text in DEFAULT_ALPHA_SPECS:
        scale = scale_for(parse_alpha_spec(spec_text), 2 * 1024 + 256)
        for theta in DEFAULT_THETAS:
            yield scale, from_theta(theta, scale)


def _run_fejer(rng) -> CheckReport:
    margins = []
    for _ in range(100):
        R = int(rng.integers(1, 257))
        x = float(rng.random())
        _, _, delta = spectral.fejer_check(R, x)
        margins.append(IDENTITY_TOL * R * R - delta)
    return _report("fejer", margins)


def _run_sieve(rng) -> CheckReport:
    margins = []
    for _ in range(500):
        H = int(rng.integers(1, 129))
        R = int(rng.integers(1, 129))
        t = float(rng.random())
        lhs, bound, _ = spectral.large_sieve_check(H, R, t)
        margins.append(bound + 1e-9 - lhs)
    return _report("large_sieve", margins)


def _run_vdc(rng) -> CheckReport:
    margins = []
    for _ in range(200):
        L = int(rng.integers(2, 257))
        R = int(rng.integers(1, L + 1))
        seq = np.exp(2j * np.pi * rng.random(L))
        lhs, rhs, _ = spectral.vdc_check(seq, R)
        margins.append(rhs.real + 1e-9 * L * L - lhs)
    return _report("van_der_corput", margins)


def _run_parseval(rng) -> CheckReport:
    margins = []
    for scale, g in _identity_family():
        for lam in range(1, scale.K + 1):
            if scale.q[lam] > 1024:
                break
            _, _, delta = spectral.parseval_check(g, lam)
            margins.append(IDENTITY_TOL - delta)
    return _report("parseval", margins)


def _run_cyclic(rng) -> CheckReport:
    margins = []
    for scale, g in _identity_family():
        for lam in range(1, scale.K + 1):
            q = scale.q[lam]
            if q > 1024:
                break
            deltas = spectral.cyclic_identity_sweep(g, lam, range(0, min(q, 64) + 1))
            margins.extend(IDENTITY_TOL * q - d for d in deltas)
    return _report("cyclic_identity", margins)


def _run_carry(rng) -> CheckReport:
    reports = []
    for spec_text in ("golden", "silver"):
        scale = scale_for(parse_alpha_spec(spec_text), max(CARRY_NS) + 10**5)
        g = from_theta(0.5, scale)
        reports.append(carry_bound_sweep(g, 12))
    return _merge("carry_bound", reports)


def _run_density(rng) -> CheckReport:
    reports = []
    for spec_text in ("golden", "silver"):
        scale = scale_for(parse_alpha_spec(spec_text), DENSITY_N + 1)
        reports.append(density_sweep(scale, 6))
    return _merge("density", reports)


def _run_gaps(rng) -> CheckReport:
    reports = []
    for spec_text in DEFAULT_ALPHA_SPECS:
        spec = parse_alpha_spec(spec_text)
        probe = scale_for(spec, 4096)
        for lam in range(1, 9):
            # trim the table so the digit scans do not walk unused high levels
            scale = scale_for(spec, (GAP_COUNT + 2) * probe.q[lam])
            reports.append(gap_structure_check(lam, GAP_COUNT, scale))
    return _merge("gap_structure", reports)


def _merge(name: str, reports) -> CheckReport:
    return CheckReport(
        check_name=name,
        instances_run=sum(r.instances_run for r in reports),
        instances_passed=sum(r.instances_passed for r in reports),
        worst_margin=min(r.worst_margin for r in reports),
        details=tuple(d for r in reports for d in r.details)[:10],
    )


CHECK_FAMILIES = {
    "fejer": _run_fejer,
    "large_sieve": _run_sieve,
    "vdc": _run_vdc,
    "parseval": _run_parseval,
    "cyclic": _run_cyclic,
    "carry": _run_carry,
    "density": _run_density,
    "gaps": _run_gaps,
}


def verify_all(
    seed: int = 0,
    only: str | Sequence[str] | None = None,
    fn_spec: str | None = None,
) -> list[CheckReport]:
    """Run the check battery (or a subset: `only` is a family name or a list).

    A fn_spec argument is validated up front, so a corrupted atom table raises
    ValidationError before any check runs.
    """
    if fn_spec is not None:
        scale = scale_for(parse_alpha_spec(DEFAULT_ALPHA_SPECS[0]), 4096)
        parse_fn_spec(fn_spec, scale)
    if only is None:
        names = list(CHECK_FAMILIES)
    elif isinstance(only, str):
        names = [only]
    else:
        names = list(only)
    unknown = [n for n in names if n not in CHECK_FAMILIES]
    if unknown:
        raise ValidationError(f"unknown check families: {unknown}; know {sorted(CHECK_FAMILIES)}")
    rng = np.random.default_rng(seed)
    return [CHECK_FAMILIES[name](rng) for name in names]
