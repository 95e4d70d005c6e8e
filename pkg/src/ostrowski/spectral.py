"""Correlations, discrete Fourier tables, and exponential sums of
digit-multiplicative functions.

Sign conventions, fixed package-wide: exponential sums carry e(-n*beta), and
the Fourier coefficients at level lam are

    G_lam(h) = (1/q_lam) * sum_{u < q_lam} g(u) e(-h*u/q_lam),

the convention under which the cyclic correlation identity

    sum_h |G_lam(h)|^2 e(h*r/q_lam)
        = (1/q_lam) * sum_{v < q_lam} g((v+r) mod q_lam) * conj(g(v))

holds exactly for every complex-valued g, not just conjugation-symmetric ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alphafun import AlphaFunction, trunc_values_range, twist, values_range
from .errors import CapError, RangeError, ValidationError
from .numeration import block_counts
from .numerics import frac_mul_range, pairwise_sum, unit

DIRECT_DFT_MAX = 4096  # direct O(q^2) evaluation is the reference below this size
DFT_CAP = 1 << 20      # hard cap on transform length

GRID_DEFAULT = 4096
REFINE_WIDTH = 1e-6
REFINE_PEAKS = 5


def correlation(g: AlphaFunction, r: int, N: int) -> complex:
    """Autocorrelation (1/N) sum_{n<N} g(n+r) * conj(g(n)), fixed-order summation."""
    if N < 1:
        raise ValidationError("N must be >= 1")
    if r < 0:
        raise ValidationError("r must be >= 0")
    vals = values_range(g, N + r)  # RangeError if the scale cannot cover N + r
    return pairwise_sum(vals[r : r + N] * np.conj(vals[:N])) / N


@dataclass(frozen=True)
class CorrelationProfile:
    """gamma[r] = correlation(g, r, N) for r < R, plus its two summary means."""

    R: int
    N: int
    gamma: np.ndarray
    quadratic_mean: float
    absolute_mean: float


def _profile_means(gamma: np.ndarray) -> tuple[float, float]:
    power = gamma.real**2 + gamma.imag**2
    quad = pairwise_sum(power).real / len(gamma)
    absm = pairwise_sum(np.abs(gamma)).real / len(gamma)
    return quad, absm


def correlation_profile(g: AlphaFunction, R: int, N: int) -> CorrelationProfile:
    """Correlations for all shifts r < R at a common N.

    Each gamma[r] reproduces correlation(g, r, N) bit for bit: the shared
    value block is sliced per shift and fed through the same product and the
    same reduction tree.
    """
    if R < 1:
        raise ValidationError("R must be >= 1")
    vals = values_range(g, N + R - 1)
    ref = np.conj(vals[:N])
    gamma = np.empty(R, dtype=np.complex128)
    for r in range(R):
        gamma[r] = pairwise_sum(vals[r : r + N] * ref) / N
    quad, absm = _profile_means(gamma)
    return CorrelationProfile(R, N, gamma, quad, absm)


def quadratic_mean(profile: CorrelationProfile, R: int | None = None) -> float:
    """Q(R) = (1/R) sum_{r<R} |gamma_r|^2 from a stored profile prefix."""
    R = profile.R if R is None else R
    if not 1 <= R <= profile.R:
        raise RangeError(f"R={R} outside the profile range 1..{profile.R}")
    g = profile.gamma[:R]
    return pairwise_sum(g.real**2 + g.imag**2).real / R


@dataclass(frozen=True)
class FourierTable:
    """G[h] for h < q_lam at truncation level lam."""

    lam: int
    q: int
    G: np.ndarray


def _dft_direct(vals: np.ndarray) -> np.ndarray:
    """O(q^2) evaluation of G(h) = (1/q) sum_u g(u) e(-h*u/q).

    Phases are reduced through integer h*u mod q, so every kernel entry is an
    exact root-of-unity lookup.
    """
    q = len(vals)
    roots = unit(-(np.arange(q) / q))
    u = np.arange(q, dtype=np.int64)
    out = np.empty(q, dtype=np.complex128)
    for h in range(q):
        out[h] = pairwise_sum(vals * roots[(h * u) % q]) / q
    return out


def _dft_fast(vals: np.ndarray) -> np.ndarray:
    """Exact-length fast transform for sizes past DIRECT_DFT_MAX."""
    return np.fft.fft(vals) / len(vals)


def fourier_coeffs(g: AlphaFunction, lam: int, cap: int = DFT_CAP) -> FourierTable:
    """Fourier table of g at level lam (CapError past `cap`)."""
    if not 0 <= lam <= g.scale.K:
        raise RangeError(f"lam={lam} outside 0..{g.scale.K}")
    q = g.scale.q[lam]
    if q > cap:
        raise CapError(f"q_lam = {q} exceeds the transform cap {cap}")
    vals = values_range(g, q)
    G = _dft_direct(vals) if q <= DIRECT_DFT_MAX else _dft_fast(vals)
    return FourierTable(lam, q, G)


def parseval_check(g: AlphaFunction, lam: int) -> tuple[float, float, float]:
    """(sum_h |G|^2, (1/q) sum_u |g(u)|^2, |difference|)."""
    table = fourier_coeffs(g, lam)
    vals = values_range(g, table.q)
    lhs = pairwise_sum(table.G.real**2 + table.G.imag**2).real
    rhs = pairwise_sum(vals.real**2 + vals.imag**2).real / table.q
    return lhs, rhs, abs(lhs - rhs)


def _cyclic_sides(table: FourierTable, vals: np.ndarray, r: int) -> tuple[complex, complex]:
    q = table.q
    power = table.G.real**2 + table.G.imag**2
    h = np.arange(q, dtype=np.int64)
    lhs = pairwise_sum(power * unit(((h * (r % q)) % q) / q))
    rhs = pairwise_sum(np.roll(vals, -(r % q)) * np.conj(vals)) / q
    return lhs, rhs


def cyclic_identity_check(g: AlphaFunction, lam: int, r: int) -> tuple[complex, complex, float]:
    """Both sides of the exact cyclic correlation identity and their distance.

    lhs = sum_h |G(h)|^2 e(h*r/q); rhs = (1/q) sum_v g((v+r) mod q) conj(g(v)).
    delta stays below 1e-10 * q_lam.
    """
    if r < 0:
        raise ValidationError("r must be >= 0")
    table = fourier_coeffs(g, lam)
    vals = values_range(g, table.q)
    lhs, rhs = _cyclic_sides(table, vals, r)
    return lhs, rhs, abs(lhs - rhs)


def cyclic_identity_sweep(g: AlphaFunction, lam: int, r_values) -> list[float]:
    """Deltas of the cyclic identity for many shifts off one Fourier table."""
    table = fourier_coeffs(g, lam)
    vals = values_range(g, table.q)
    out = []
    for r in r_values:
        if r < 0:
            raise ValidationError("r must be >= 0")
        lhs, rhs = _cyclic_sides(table, vals, r)
        out.append(abs(lhs - rhs))
    return out


def _exp_sum(vals: np.ndarray, beta: float) -> complex:
    N = len(vals)
    return pairwise_sum(vals * unit(frac_mul_range(N, -beta))) / N


def exponential_sum(g: AlphaFunction, beta: float, N: int) -> complex:
    """(1/N) sum_{n<N} g(n) e(-n*beta)."""
    if N < 1:
        raise ValidationError("N must be >= 1")
    return _exp_sum(values_range(g, N), beta)


def scale_sums(g: AlphaFunction, beta: float, K: int | None = None) -> np.ndarray:
    """Averages S_i = (1/q_i) sum_{n<q_i} g(n) e(-n*beta) for i = 0..K.

    Computed by the two-term recurrence over convergent scales: with
    h = twist(g, beta),

        S_{i+1} = (q_i/q_{i+1}) (sum_{b<a_{i+1}} h(b q_i)) S_i
                + (q_{i-1}/q_{i+1}) h(a_{i+1} q_i) S_{i-1},

    seeded by S_0 = 1 and the directly averaged S_1.  The unimodular-atom
    coefficients make each step a convex-type combination, so |S_{i+1}| never
    exceeds max(|S_i|, |S_{i-1}|) beyond rounding.
    """
    scale = g.scale
    if K is None:
        K = scale.K
    if not 1 <= K <= scale.K:
        raise RangeError(f"K={K} outside 1..{scale.K}")
    h = twist(g, beta)
    q = scale.q
    S = np.empty(K + 1, dtype=np.complex128)
    S[0] = 1.0
    S[1] = pairwise_sum(np.array(h.atoms[0][: q[1]], dtype=np.complex128)) / q[1]
    for i in range(1, K):
        row = np.array(h.atoms[i], dtype=np.complex128)
        a = len(row) - 1
        S[i + 1] = (q[i] / q[i + 1]) * pairwise_sum(row[:a]) * S[i] + (
            q[i - 1] / q[i + 1]
        ) * row[a] * S[i - 1]
    return S


@dataclass(frozen=True)
class SpectrumScan:
    """Result of a Fourier-Bohr sweep: best frequency found and the grid profile."""

    beta_peak: float
    peak_value: float
    grid: np.ndarray  # |exponential sum| at beta = j/grid_size


def _local_maxima(profile: np.ndarray) -> list[int]:
    left = np.roll(profile, 1)
    right = np.roll(profile, -1)
    idx = np.nonzero((profile >= left) & (profile >= right))[0]
    return sorted(idx, key=lambda j: (-profile[j], j))


def spectrum_scan(
    g: AlphaFunction,
    N: int,
    grid_size: int = GRID_DEFAULT,
    refine_width: float = REFINE_WIDTH,
    peaks: int = REFINE_PEAKS,
) -> SpectrumScan:
    """Scan beta -> |(1/N) sum g(n) e(-n*beta)| on a uniform grid, then refine.

    The grid stage folds the value block modulo the grid size, so the j-th
    entry is the exponential sum at beta = j/grid_size evaluated through one
    exact-length transform.  The top local maxima are then refined by ternary
    subdivision down to `refine_width`; the reported peak is the largest
    modulus seen anywhere (grid or refinement probes).
    """
    if grid_size < 16:
        raise ValidationError("grid_size must be >= 16")
    if N < 1:
        raise ValidationError("N must be >= 1")
    vals = values_range(g, N)
    M = grid_size
    rows = -(-N // M)
    padded = np.zeros(rows * M, dtype=np.complex128)
    padded[:N] = vals
    folded = padded.reshape(rows, M).sum(axis=0)
    grid = np.abs(np.fft.fft(folded)) / N

    best_beta, best_val = 0.0, float(grid[0])
    for j in _local_maxima(grid)[:peaks]:
        if grid[j] > best_val:
            best_beta, best_val = j / M, float(grid[j])
        lo, hi = (j - 1) / M, (j + 1) / M
        while hi - lo > refine_width:
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            f1, f2 = abs(_exp_sum(vals, m1)), abs(_exp_sum(vals, m2))
            if f1 > best_val:
                best_beta, best_val = m1, f1
            if f2 > best_val:
                best_beta, best_val = m2, f2
            if f1 < f2:
                lo = m1
            else:
                hi = m2
        mid = (lo + hi) / 2
        fmid = abs(_exp_sum(vals, mid))
        if fmid > best_val:
            best_beta, best_val = mid, fmid
    return SpectrumScan(float(best_beta) % 1.0, float(best_val), grid)


def block_correlation_estimate(g: AlphaFunction, lam: int, r: int, N: int) -> complex:
    """Correlation estimate from the level-lam block decomposition.

    (a/N) sum_{n<q_lam} g_lam(n+r) conj(g_lam(n))
        + (b/N) sum_{n<q_{lam-1}} g_lam(n+r) conj(g_lam(n)),
    where (a, b) count long/short blocks fully inside [0, N).  Differs from
    correlation(g, r, N) by at most 4 (r/q_{lam-1} + q_lam/N) for unimodular g.
    """
    scale = g.scale
    a, b = block_counts(lam, N, scale)
    q_long, q_short = scale.q[lam], scale.q[lam - 1]
    tv = trunc_values_range(g, lam, q_long + r)
    ref = np.conj(tv)
    s_long = pairwise_sum(tv[r : r + q_long] * ref[:q_long])
    s_short = pairwise_sum(tv[r : r + q_short] * ref[:q_short])
    return (a / N) * s_long + (b / N) * s_short


# --- classical inequality checks (shared by the harness) ---------------------

def fejer_check(R: int, x: float) -> tuple[complex, float, float]:
    """Fejer kernel identity: sum_{|r|<R} (R-|r|) e(r x) = |sum_{r<R} e(r x)|^2.

    Returns (lhs, rhs, |lhs - rhs|); the delta stays below 1e-10 * R^2.
    """
    if R < 1:
        raise ValidationError("R must be >= 1")
    r = np.arange(1 - R, R, dtype=np.float64)
    lhs = pairwise_sum((R - np.abs(r)) * unit(r * x))
    rhs = abs(pairwise_sum(unit(np.arange(R, dtype=np.float64) * x))) ** 2
    return lhs, rhs, abs(lhs - rhs)


def large_sieve_check(H: int, R: int, t: float) -> tuple[float, float, bool]:
    """Mean-square of averaged phases over a 1/H-spaced frequency set.

    lhs = sum_{h<H} |(1/R) sum_{r<R} e(r(t + h/H))|^2 must stay below
    (H + R - 1)/R; returns (lhs, bound, ok) with additive slack 1e-9.
    """
    if H < 1 or R < 1:
        raise ValidationError("H and R must be >= 1")
    r = np.arange(R, dtype=np.float64)
    terms = np.empty(H, dtype=np.float64)
    for h in range(H):
        avg = pairwise_sum(unit(r * (t + h / H))) / R
        terms[h] = abs(avg) ** 2
    lhs = pairwise_sum(terms).real
    bound = (H + R - 1) / R
    return lhs, bound, lhs <= bound + 1e-9


def vdc_check(sequence, R: int) -> tuple[float, complex, bool]:
    """Shift-averaged bound on |sum a_n|^2.

    rhs = ((L - 1 + R)/R) sum_{|r|<R} (1 - |r|/R) sum_{n, n+r in I} a_{n+r} conj(a_n)
    dominates lhs = |sum a_n|^2; returns (lhs, rhs, ok) with slack 1e-9 * L^2.
    """
    a = np.asarray(sequence, dtype=np.complex128)
    L = len(a)
    if not 1 <= R <= L:
        raise RangeError(f"R={R} outside 1..{L}")
    lhs = abs(pairwise_sum(a)) ** 2
    inner_total = 0j
    for r in range(1 - R, R):
        if r >= 0:
            inner = pairwise_sum(a[r:] * np.conj(a[: L - r]))
        else:
            inner = pairwise_sum(a[: L + r] * np.conj(a[-r:]))
        inner_total += (1 - abs(r) / R) * inner
    rhs = ((L - 1 + R) / R) * inner_total
    return lhs, rhs, lhs <= rhs.real + 1e-9 * L * L
