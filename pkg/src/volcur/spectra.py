"""Spectra: nonincreasing, nonnegative eigenvalue sequences.

A Spectrum is stored dense in double precision; indices beyond its length
are implicitly zero.  Generators compute entries by direct formula (no
repeated multiplication), so values do not drift at large n.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DegenerateTailError, ValidationError

__all__ = [
    "Spectrum",
    "HeadTailSplit",
    "PiecewiseDyadicSpectrum",
    "make_spectrum",
    "generate_geometric",
    "generate_power_law",
    "generate_dyadic",
    "split_head_tail",
    "concat",
    "load_spectrum",
    "parse_generator_spec",
]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """A sorted (nonincreasing) sequence of nonnegative reals."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValidationError("spectrum must be one-dimensional")
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValidationError("spectrum entries must be finite")
        if arr.size and arr[-1] < 0.0:
            raise ValidationError("spectrum entries must be nonnegative")
        if arr.size and np.any(np.diff(arr) > 0.0):
            raise ValidationError("spectrum must be nonincreasing")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def rank(self) -> int:
        """Number of strictly positive entries."""
        return int(np.count_nonzero(self.values > 0.0))

    def tail_sum(self, k: int) -> float:
        """Sum of entries after the first k (zero when k >= n)."""
        if k < 0:
            raise ValidationError("k must be nonnegative")
        return float(self.values[k:].sum())

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> float:
        # implicit zero padding beyond n
        if i < 0:
            raise IndexError("negative spectrum index")
        return float(self.values[i]) if i < self.n else 0.0

    def __repr__(self) -> str:
        shown = ", ".join(f"{v:g}" for v in self.values[:6])
        more = ", ..." if self.n > 6 else ""
        return f"Spectrum([{shown}{more}], n={self.n})"


@dataclass(frozen=True, eq=False)
class HeadTailSplit:
    """A spectrum split after position k: head (k largest values), tail
    (the rest), the pivot lambda_{k+1}, and rho = tail / pivot (rho[0] = 1)."""

    head: Spectrum
    tail: Spectrum
    pivot: float
    rho: Spectrum
    k: int


@dataclass(frozen=True, eq=False)
class PiecewiseDyadicSpectrum:
    """Piecewise-constant spectrum with dyadic blocks.

    Level l in 0..lmax-1 spans positions 2^l .. 2^{l+1}-1 (1-based) and
    carries the value base^l, so the total length is 2^lmax - 1 and the
    leading entry is 1.
    """

    lmax: int
    base: float

    def __post_init__(self) -> None:
        if not isinstance(self.lmax, int) or self.lmax < 1:
            raise ValidationError("lmax must be a positive integer")
        if not 0.0 < self.base < 1.0:
            raise ValidationError("base must lie strictly between 0 and 1")

    @property
    def n(self) -> int:
        return 2**self.lmax - 1

    @cached_property
    def materialized(self) -> Spectrum:
        levels = np.arange(self.lmax)
        values = np.repeat(self.base ** levels.astype(np.float64), 2**levels)
        return Spectrum(values)

    def tail_sum(self, k: int) -> float:
        """Sum of entries after the first k, by level arithmetic."""
        if k < 0:
            raise ValidationError("k must be nonnegative")
        total = 0.0
        for level in range(self.lmax):
            lo, hi = 2**level, 2 ** (level + 1) - 1
            count = hi - max(lo, k + 1) + 1
            if count > 0:
                total += count * self.base**level
        return total


def make_spectrum(values: Iterable[float]) -> Spectrum:
    """Sort values into a Spectrum; rejects empty input and negatives."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValidationError("spectrum must contain at least one value")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("spectrum entries must be finite")
    if np.any(arr < 0.0):
        raise ValidationError("spectrum entries must be nonnegative")
    return Spectrum(np.sort(arr)[::-1].copy())


def generate_geometric(q: float, n: int) -> Spectrum:
    """Geometric spectrum (1, q, q^2, ..., q^{n-1})."""
    if not 0.0 < q < 1.0:
        raise ValidationError("q must lie strictly between 0 and 1")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer")
    return Spectrum(q ** np.arange(n, dtype=np.float64))


def generate_power_law(p: float, n: int) -> Spectrum:
    """Power-law spectrum (1, 1/2^p, 1/3^p, ..., 1/n^p)."""
    if p <= 0.0:
        raise ValidationError("p must be positive")
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer")
    return Spectrum(np.arange(1, n + 1, dtype=np.float64) ** (-float(p)))


def generate_dyadic(lmax: int, base: float) -> PiecewiseDyadicSpectrum:
    """Piecewise-constant dyadic spectrum; materialize via .materialized."""
    return PiecewiseDyadicSpectrum(lmax=lmax, base=base)


def split_head_tail(s: Spectrum, k: int) -> HeadTailSplit:
    """Split s after its k largest entries.

    The pivot is the (k+1)-st value and must be positive, since the tail is
    renormalized as rho = tail / pivot.
    """
    if not 0 <= k < s.n:
        raise ValidationError(f"k must satisfy 0 <= k < n, got k={k}, n={s.n}")
    pivot = float(s.values[k])
    if pivot <= 0.0:
        raise DegenerateTailError(
            f"tail starting at position {k + 1} is all zero; split undefined")
    head = Spectrum(s.values[:k].copy())
    tail = Spectrum(s.values[k:].copy())
    rho = Spectrum(tail.values / pivot)
    return HeadTailSplit(head=head, tail=tail, pivot=pivot, rho=rho, k=k)


def concat(a: Spectrum, b: Spectrum) -> Spectrum:
    """Multiset union of two spectra, re-sorted."""
    merged = np.concatenate([a.values, b.values])
    return Spectrum(np.sort(merged)[::-1].copy())


def load_spectrum(path: str | Path) -> Spectrum:
    """Read a spectrum from text: one value per line or comma-separated."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read spectrum file {path}: {exc}") from exc
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ValidationError(f"spectrum file {path} is empty")
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise ValidationError(f"malformed spectrum file {path}: {exc}") from exc
    return make_spectrum(values)


_GENERATOR_KEYS = {
    "geom": ("q", "n"),
    "pow": ("p", "n"),
    "dyadic": ("lmax", "base"),
}


def parse_generator_spec(text: str) -> Spectrum | PiecewiseDyadicSpectrum:
    """Parse a generator spec string.

    Recognized forms: ``geom:q=<f>,n=<int>``, ``pow:p=<f>,n=<int>``,
    ``dyadic:lmax=<int>,base=<f>``.
    """
    kind, sep, body = text.partition(":")
    kind = kind.strip()
    if not sep or kind not in _GENERATOR_KEYS:
        raise ValidationError(
            f"unknown generator spec {text!r}; expected geom:, pow:, or dyadic:")
    params: dict[str, str] = {}
    for item in body.split(","):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValidationError(f"malformed generator parameter {item!r}")
        params[key.strip()] = value.strip()
    expected = _GENERATOR_KEYS[kind]
    if set(params) != set(expected):
        raise ValidationError(
            f"generator {kind!r} needs parameters {expected}, got {sorted(params)}")
    try:
        if kind == "geom":
            return generate_geometric(float(params["q"]), int(params["n"]))
        if kind == "pow":
            return generate_power_law(float(params["p"]), int(params["n"]))
        return generate_dyadic(int(params["lmax"]), float(params["base"]))
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed generator spec {text!r}: {exc}") from exc
