"""Pseudo-spline refinement symbols of fractional and complex order.

The lowpass filter family evaluated here is

    H0(gamma) = (cos^2 pi gamma)^z * sum_{k=0}^{ell} binom(z+ell, k)
                (sin^2 pi gamma)^k (cos^2 pi gamma)^{ell-k},

parameterized by a complex order z with alpha := Re z >= 1, an integer
parameter 0 <= ell <= floor(alpha - 1/2), and an optional real time shift u
realized as the phase factor exp(-2 pi i u gamma).

Everything is evaluated through the variable x = sin^2(pi gamma): with
p(x) = sum_k binom(z+ell, k) x^k (1-x)^{ell-k} (equivalently the power form
sum_k binom(z-1+k, k) x^k) and q(x) = (1-x)^z p(x), the symbol is
H0(gamma) = q(sin^2 pi gamma) times the shift phase.  Powers of 1-x go
through exp(z*log1p(-x)), never through a complex power of cos, so no branch
ambiguity arises.

Grid convention: TorusGrid samples gamma_j = j/N - 1/2 for j = 0..N-1 with N
a power of two.  The grid is closed under the half-period shift
gamma -> gamma + 1/2 (index j -> j + N/2 mod N), which makes partition and
filter-bank identities exact at the index level.  Sampling on the grid also
periodizes the (non-periodic for fractional u) raw shift phase implicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError, OrderError, ResolutionError
from .special import complex_binomial

__all__ = [
    "PseudoSplineOrder",
    "TorusGrid",
    "SampledSymbol",
    "max_ell",
    "eval_p",
    "eval_q",
    "eval_q_prime",
    "eval_H0",
    "sample_H0",
    "eval_partition",
    "partition_values",
    "theta_bound",
    "PartitionExtrema",
    "partition_extrema",
    "lipschitz_check",
]


def max_ell(alpha: float) -> int:
    """Largest admissible ell for a given alpha = Re z: floor(alpha - 1/2)."""
    return int(math.floor(alpha - 0.5))


@dataclass(frozen=True)
class PseudoSplineOrder:
    """Parameter triple (z, ell, shift) of a pseudo-spline filter.

    Constraints: Re z >= 1, 0 <= ell <= floor(Re z - 1/2), shift real.
    One step beyond the ell bound is tolerated (the reference filter family
    z = 3.2+1i runs ell up to 3): the defining formulas stay well-posed there
    and the partition identity is verified numerically rather than
    guaranteed.  Anything further raises OrderError at construction time.
    """

    z: complex
    ell: int = 0
    shift: float = 0.0

    def __post_init__(self) -> None:
        try:
            z = complex(self.z)
        except (TypeError, ValueError) as exc:
            raise OrderError(f"order z must be a complex number, got {self.z!r}") from exc
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise OrderError(f"order z must be finite, got {z!r}")
        if z.real < 1.0:
            raise OrderError(f"order z must satisfy Re z >= 1, got Re z = {z.real!r}")
        if self.ell != int(self.ell):
            raise OrderError(f"ell must be an integer, got {self.ell!r}")
        ell = int(self.ell)
        bound = max_ell(z.real)
        if ell < 0 or ell > bound + 1:
            raise OrderError(
                f"ell must satisfy 0 <= ell <= floor(alpha - 1/2) = {bound} "
                f"for alpha = {z.real!r}, got ell = {ell}"
            )
        if isinstance(self.shift, complex) and self.shift.imag != 0.0:
            raise OrderError(f"shift must be real, got {self.shift!r}")
        u = float(self.shift.real if isinstance(self.shift, complex) else self.shift)
        if not math.isfinite(u):
            raise OrderError(f"shift must be finite, got {self.shift!r}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "shift", u)

    @property
    def alpha(self) -> float:
        return self.z.real

    @property
    def beta(self) -> float:
        return self.z.imag

    @property
    def extended(self) -> bool:
        """True when ell sits one beyond the guaranteed bound floor(alpha - 1/2)."""
        return self.ell > max_ell(self.alpha)

    @property
    def unshifted(self) -> "PseudoSplineOrder":
        if self.shift == 0.0:
            return self
        return PseudoSplineOrder(self.z, self.ell, 0.0)

    def definition_coefficients(self) -> np.ndarray:
        """binom(z+ell, k) for k = 0..ell (read-only array)."""
        return _definition_coefficients(self.z, self.ell)

    def taylor_coefficients(self) -> np.ndarray:
        """binom(z-1+k, k) for k = 0..ell (read-only array)."""
        return _taylor_coefficients(self.z, self.ell)

    def label(self) -> str:
        """Short ASCII label, e.g. 'z=3.2+1i ell=2 u=0.5'."""
        z = self.z
        if z.imag == 0.0:
            ztxt = repr(z.real)
        else:
            sign = "+" if z.imag >= 0 else "-"
            ztxt = f"{z.real!r}{sign}{abs(z.imag)!r}i"
        txt = f"z={ztxt} ell={self.ell}"
        if self.shift != 0.0:
            txt += f" u={self.shift!r}"
        return txt


@lru_cache(maxsize=256)
def _definition_coefficients(z: complex, ell: int) -> np.ndarray:
    c = np.array([complex_binomial(z + ell, k) for k in range(ell + 1)], dtype=complex)
    c.setflags(write=False)
    return c


@lru_cache(maxsize=256)
def _taylor_coefficients(z: complex, ell: int) -> np.ndarray:
    c = np.array([complex_binomial(z - 1 + k, k) for k in range(ell + 1)], dtype=complex)
    c.setflags(write=False)
    return c


@dataclass(frozen=True)
class TorusGrid:
    """Uniform dyadic grid gamma_j = j/N - 1/2, j = 0..N-1, N a power of two >= 4."""

    resolution: int

    def __post_init__(self) -> None:
        n = self.resolution
        if n != int(n):
            raise ResolutionError(f"grid resolution must be an integer, got {n!r}")
        n = int(n)
        if n < 4 or (n & (n - 1)) != 0:
            raise ResolutionError(f"grid resolution must be a power of two >= 4, got {n}")
        object.__setattr__(self, "resolution", n)

    @property
    def spacing(self) -> float:
        return 1.0 / self.resolution

    @property
    def gamma(self) -> np.ndarray:
        """Grid points; exact dyadic rationals since N is a power of two."""
        cached = self.__dict__.get("_gamma")
        if cached is None:
            cached = np.arange(self.resolution) / self.resolution - 0.5
            cached.setflags(write=False)
            self.__dict__["_gamma"] = cached
        return cached

    def half_shift_index(self, j: np.ndarray | int):
        """Index of gamma_j + 1/2 wrapped onto the grid."""
        return (j + self.resolution // 2) % self.resolution


@dataclass(frozen=True)
class SampledSymbol:
    """Complex samples of a 1-periodic filter on a TorusGrid."""

    order: PseudoSplineOrder
    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.resolution,):
            raise ResolutionError(
                f"sample array has shape {v.shape}, expected ({self.grid.resolution},)"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.grid.resolution

    def half_shifted(self) -> np.ndarray:
        """Samples of gamma -> value(gamma + 1/2), realized as an index roll."""
        return np.roll(self.values, -(self.grid.resolution // 2))


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _check_unit_interval(x: np.ndarray, closed_right: bool) -> None:
    hi_bad = (x > 1.0) if closed_right else (x >= 1.0)
    if np.any(np.isnan(x)) or np.any(x < 0.0) or np.any(hi_bad):
        rng = "[0, 1]" if closed_right else "[0, 1)"
        raise DomainError(f"argument x must lie in {rng}")


def _pow_fractional(base: np.ndarray, expo: complex) -> np.ndarray:
    """base**expo for base >= 0 elementwise, with 0**expo := 0 (Re expo > 0)."""
    out = np.zeros(base.shape, dtype=complex)
    pos = base > 0.0
    out[pos] = np.exp(expo * np.log(base[pos]))
    return out


def eval_p(order: PseudoSplineOrder, x, form: str = "taylor"):
    """The degree-ell polynomial factor p, in either of its two forms.

    form='definition': sum_k binom(z+ell, k) x^k (1-x)^{ell-k};
    form='taylor':     sum_k binom(z-1+k, k) x^k.
    The forms agree identically; both are exposed for cross-validation.
    """
    arr, scalar = _as_array(x)
    _check_unit_interval(arr, closed_right=True)
    if form == "taylor":
        coeffs = order.taylor_coefficients()
        out = np.full(arr.shape, coeffs[-1], dtype=complex)
        for k in range(order.ell - 1, -1, -1):
            out = out * arr + coeffs[k]
    elif form == "definition":
        coeffs = order.definition_coefficients()
        onemx = 1.0 - arr
        out = np.zeros(arr.shape, dtype=complex)
        for k in range(order.ell + 1):
            out += coeffs[k] * arr**k * onemx ** (order.ell - k)
    else:
        raise DomainError(f"unknown p-form {form!r}; use 'definition' or 'taylor'")
    return complex(out[()]) if scalar else out


def eval_q(order: PseudoSplineOrder, x):
    """q(x) = (1-x)^z p(x) on [0, 1]; q(1) = 0 since Re z >= 1."""
    arr, scalar = _as_array(x)
    _check_unit_interval(arr, closed_right=True)
    p = eval_p(order, arr if not scalar else arr[()], form="taylor")
    p = np.asarray(p, dtype=complex).reshape(arr.shape)
    out = np.zeros(arr.shape, dtype=complex)
    interior = arr < 1.0
    out[interior] = np.exp(order.z * np.log1p(-arr[interior])) * p[interior]
    return complex(out[()]) if scalar else out


def eval_q_prime(order: PseudoSplineOrder, x):
    """q'(x) = -(z+ell) binom(z-1+ell, ell) x^ell (1-x)^{z-1} on [0, 1)."""
    arr, scalar = _as_array(x)
    _check_unit_interval(arr, closed_right=False)
    z, ell = order.z, order.ell
    lead = -(z + ell) * complex_binomial(z - 1 + ell, ell)
    out = lead * arr**ell * np.exp((z - 1.0) * np.log1p(-arr))
    out = np.asarray(out, dtype=complex)
    return complex(out[()]) if scalar else out


def eval_H0(order: PseudoSplineOrder, gamma):
    """The lowpass symbol H0 at real gamma (vectorized).

    Equals q(sin^2 pi gamma) times exp(-2 pi i u gamma) when shift u != 0.
    The magnitude factor is 1-periodic by construction; the shift phase is
    evaluated raw (it is periodic only for integer u; grid sampling
    periodizes it implicitly).
    """
    arr, scalar = _as_array(gamma)
    x = np.sin(np.pi * arr) ** 2
    p = eval_p(order, x if not scalar else x[()], form="taylor")
    p = np.asarray(p, dtype=complex).reshape(arr.shape)
    out = np.zeros(arr.shape, dtype=complex)
    interior = x < 1.0
    out[interior] = np.exp(order.z * np.log1p(-x[interior])) * p[interior]
    if order.shift != 0.0:
        out = out * np.exp(-2j * np.pi * order.shift * arr)
    return complex(out[()]) if scalar else out


def sample_H0(order: PseudoSplineOrder, grid: TorusGrid) -> SampledSymbol:
    """Pointwise eval_H0 over the grid."""
    return SampledSymbol(order, grid, eval_H0(order, grid.gamma))


def eval_partition(order: PseudoSplineOrder, gamma):
    """|H0(gamma)|^2 + |H0(gamma + 1/2)|^2, evaluated pointwise.

    Shift phases drop out of the moduli, so the result is shift-independent.
    """
    arr, scalar = _as_array(gamma)
    h0 = np.asarray(eval_H0(order, arr), dtype=complex).reshape(arr.shape)
    h1 = np.asarray(eval_H0(order, arr + 0.5), dtype=complex).reshape(arr.shape)
    out = np.abs(h0) ** 2 + np.abs(h1) ** 2
    return float(out[()]) if scalar else out


def partition_values(symbol: SampledSymbol) -> np.ndarray:
    """Grid partition function via the exact index half-shift."""
    v = symbol.values
    return np.abs(v) ** 2 + np.abs(symbol.half_shifted()) ** 2


def theta_bound(order: PseudoSplineOrder) -> float:
    """Closed-form lower bound of the partition function.

    theta = 2^{1-2 alpha-2 ell} |sum_{k=0}^{ell} binom(z+ell, k)|^2, the
    partition value at gamma = +-1/4 (x = 1/2); lies in (0, 1].
    """
    s = complex(np.sum(order.definition_coefficients()))
    return float(2.0 ** (1.0 - 2.0 * order.alpha - 2.0 * order.ell) * abs(s) ** 2)


class PartitionExtrema(NamedTuple):
    min: float
    argmin: float
    max: float
    argmax: float


def partition_extrema(order: PseudoSplineOrder, grid: TorusGrid) -> PartitionExtrema:
    """Extrema of the partition function over the grid.

    Ties break to the first index in grid order (deterministic); with the
    half-open grid [-1/2, 1/2) the maximum 1 is therefore reported at
    gamma = -1/2 rather than the equivalent gamma = 0 when both attain it.
    """
    s = partition_values(sample_H0(order, grid))
    jmin = int(np.argmin(s))
    jmax = int(np.argmax(s))
    g = grid.gamma
    return PartitionExtrema(float(s[jmin]), float(g[jmin]), float(s[jmax]), float(g[jmax]))


def lipschitz_check(order: PseudoSplineOrder, grid: TorusGrid) -> float:
    """Empirical constant C = max |H0(gamma) - 1| / |gamma|^eps over the grid.

    eps = 1 for unshifted orders, 1/2 for shifted ones (the phase factor
    contributes an O(|gamma|) term while the magnitude deviates like
    O(|gamma|^2); the square-root scale keeps the constant finite and grid
    stable in the shifted case).  gamma = 0 is excluded (0/0).
    """
    g = grid.gamma
    h = np.asarray(eval_H0(order, g), dtype=complex)
    eps = 1.0 if order.shift == 0.0 else 0.5
    mask = g != 0.0
    ratios = np.abs(h[mask] - 1.0) / np.abs(g[mask]) ** eps
    return float(np.max(ratios))
