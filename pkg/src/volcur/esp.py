"""Elementary symmetric polynomials of spectra.

Coefficient vectors are 0-indexed: coeffs[j] = e_j, with e_0 = 1 and
e_j = 0 for j beyond the number of entries.  All recursions here add
nonnegative terms only, so there is no cancellation; accuracy is limited
by plain rounding.  To keep magnitudes representable, evaluation
normalizes a spectrum by its largest entry and restores scale through
exact powers (a ratio e_{k+1}/e_k picks up exactly one such factor).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, RankDeficiencyError, ValidationError
from .spectra import HeadTailSplit, PiecewiseDyadicSpectrum, Spectrum

__all__ = [
    "EspVector",
    "esp_all",
    "esp_ratio",
    "esp_geometric_closed_form",
    "esp_geometric_ratio",
    "esp_convolve",
    "esp_scale",
    "esp_ratio_head_tail",
    "esp_dyadic_convolution",
]


@dataclass(frozen=True, eq=False)
class EspVector:
    """Truncated vector of elementary symmetric polynomial values."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValidationError("coefficient vector must be 1-D and nonempty")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("coefficients must be finite")
        if arr[0] != 1.0:
            raise ValidationError("e_0 must equal 1")
        if np.any(arr < 0.0):
            raise ValidationError("coefficients must be nonnegative")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def m(self) -> int:
        """Truncation order: coefficients cover e_0 .. e_m."""
        return int(self.coeffs.size - 1)

    def __len__(self) -> int:
        return int(self.coeffs.size)

    def __getitem__(self, j: int) -> float:
        return float(self.coeffs[j])


def _esp_coeffs(values: np.ndarray, m: int) -> np.ndarray:
    """e_0..e_m of the given values by the one-pass recursion.

    Row j is the prefix sequence e_j(v_1..v_i), obtained from row j-1 by a
    cumulative sum; this is the classic O(n*m) update evaluated column-major,
    with identical operation order and rounding.
    """
    n = int(values.size)
    out = np.zeros(m + 1)
    out[0] = 1.0
    if n == 0 or m == 0:
        return out
    prev = np.ones(n + 1)
    for j in range(1, min(m, n) + 1):
        row = np.empty(n + 1)
        row[0] = 0.0
        np.cumsum(values * prev[:-1], out=row[1:])
        out[j] = row[-1]
        prev = row
    return out


def esp_all(s: Spectrum, m: int) -> EspVector:
    """All values e_0 .. e_m of the spectrum (zeros beyond its length)."""
    if not isinstance(m, int) or m < 0:
        raise ValidationError("truncation order m must be a nonnegative integer")
    if s.n == 0 or s.values[0] == 0.0:
        coeffs = np.zeros(m + 1)
        coeffs[0] = 1.0
        return EspVector(coeffs)
    lam1 = float(s.values[0])
    normalized = _esp_coeffs(s.values / lam1, m)
    # the recursion runs on values/lam1 <= 1; only the rescale can overflow
    with np.errstate(over="ignore"):
        coeffs = normalized * lam1 ** np.arange(m + 1, dtype=np.float64)
    if not np.all(np.isfinite(coeffs)):
        raise NumericalError(
            "ESP values overflow double precision at this scale; "
            "use esp_ratio, which works on the normalized coefficients")
    return EspVector(coeffs)


def esp_ratio(s: Spectrum, k: int) -> float:
    """The ratio e_{k+1}/e_k, evaluated on the normalized spectrum."""
    if not isinstance(k, int) or k < 0:
        raise ValidationError("k must be a nonnegative integer")
    if s.n == 0 or s.values[0] == 0.0:
        if k == 0:
            return 0.0
        raise RankDeficiencyError(f"e_{k} = 0: spectrum rank is below {k}")
    lam1 = float(s.values[0])
    normalized = _esp_coeffs(s.values / lam1, k + 1)
    if normalized[k] <= 0.0:
        raise RankDeficiencyError(
            f"e_{k} = 0: spectrum has only {s.rank} positive entries")
    return lam1 * float(normalized[k + 1] / normalized[k])


def esp_geometric_closed_form(q: float, n: int, k: int) -> float:
    """Closed form for e_k(1, q, ..., q^{n-1}); zero when k > n."""
    if not 0.0 < q < 1.0:
        raise ValidationError("q must lie strictly between 0 and 1")
    if n < 1 or k < 0:
        raise ValidationError("need n >= 1 and k >= 0")
    if k > n:
        return 0.0
    i = np.arange(1, k + 1, dtype=np.float64)
    product = float(np.prod((1.0 - q ** (n - i + 1)) / (1.0 - q**i)))
    return q ** (k * (k - 1) // 2) * product


def esp_geometric_ratio(q: float, n: int, k: int) -> float:
    """e_{k+1}/e_k for the spectrum (1, q, ..., q^{n-1}).

    k = n is allowed and gives 0, since e_{n+1} vanishes for n values.
    """
    if not 0.0 < q < 1.0:
        raise ValidationError("q must lie strictly between 0 and 1")
    if not 0 <= k <= n:
        raise ValidationError(f"k must satisfy 0 <= k <= n, got k={k}, n={n}")
    return (q**k - q**n) / (1.0 - q ** (k + 1))


def esp_convolve(a: EspVector, b: EspVector, m: int) -> EspVector:
    """Cauchy product of two coefficient vectors, truncated at order m.

    This realizes the union rule f(concat(x, y)) = f(x) * f(y).
    """
    if not isinstance(m, int) or m < 0:
        raise ValidationError("truncation order m must be a nonnegative integer")
    full = np.convolve(a.coeffs, b.coeffs)
    out = np.zeros(m + 1)
    t = min(m + 1, full.size)
    out[:t] = full[:t]
    return EspVector(out)


def esp_scale(v: EspVector, s: float) -> EspVector:
    """Coefficients of the scaled spectrum: e_j(s * x) = s^j e_j(x)."""
    if not s > 0.0:
        raise ValidationError("scale factor must be positive")
    powers = float(s) ** np.arange(v.coeffs.size, dtype=np.float64)
    return EspVector(v.coeffs * powers)


def esp_ratio_head_tail(split: HeadTailSplit, k: int) -> tuple[float, float]:
    """(gamma, ratio) for a head/tail split at k.

    With u^h = f(head) and w = f(rho), the ratio e_{k+1}/e_k of the full
    spectrum factors as gamma * pivot where

        gamma = sum_i pivot^{k-i} w_{k+1-i} u^h_i
              / sum_i pivot^{k-i} w_{k-i}   u^h_i ,   i = 0..k.

    All terms are nonnegative, and the denominator contains e_k(head) > 0,
    so the quotient is well defined whenever the split is.  Evaluation
    normalizes head and pivot by the leading entry; gamma is homogeneous of
    degree zero, so the result is unchanged.
    """
    if not isinstance(k, int) or k < 0:
        raise ValidationError("k must be a nonnegative integer")
    if k != split.k:
        raise ValidationError(f"split was made at k={split.k}, asked for k={k}")
    scale = float(split.head.values[0]) if k >= 1 else split.pivot
    head_n = split.head.values / scale
    pivot_n = split.pivot / scale
    uh = _esp_coeffs(head_n, k)
    w = _esp_coeffs(split.rho.values, k + 1)
    powers = pivot_n ** np.arange(k, -1, -1, dtype=np.float64)
    numerator = float(np.sum(powers * w[1 : k + 2][::-1] * uh))
    denominator = float(np.sum(powers * w[: k + 1][::-1] * uh))
    if denominator <= 0.0:
        raise RankDeficiencyError("e_k = 0 for the split spectrum")
    gamma = numerator / denominator
    return gamma, gamma * split.pivot


def _level_coeffs(level: int, base: float, m: int) -> np.ndarray:
    """f of one dyadic level: 2^level copies of base^level, truncated at m.

    coeffs[j] = base^(level*j) * C(2^level, j).  Built by the multiplicative
    recurrence: the two factors individually leave double range at deep
    levels while their product stays representable.
    """
    size = 2**level
    jmax = min(m, size)
    ratio = base**level
    u = np.empty(jmax + 1)
    u[0] = 1.0
    for j in range(jmax):
        u[j + 1] = u[j] * ratio * (size - j) / (j + 1)
    return u


def esp_dyadic_convolution(spec: PiecewiseDyadicSpectrum, m: int) -> EspVector:
    """e_0..e_m of a dyadic spectrum by per-level binomial convolution.

    Each constant level has a closed-form coefficient vector; the full
    spectrum is their union, so its coefficients are the truncated Cauchy
    product of the levels: O(lmax * (m+1)^2) total, independent of n.
    Levels are folded smallest-value first so partial results only grow.
    """
    if not isinstance(m, int) or m < 0:
        raise ValidationError("truncation order m must be a nonnegative integer")
    acc = _level_coeffs(spec.lmax - 1, spec.base, m)
    for level in range(spec.lmax - 2, -1, -1):
        acc = np.convolve(acc, _level_coeffs(level, spec.base, m))[: m + 1]
    out = np.zeros(m + 1)
    out[: acc.size] = acc
    return EspVector(out)
