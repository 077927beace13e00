"""Core representations and evaluation of idempotent and positive-definite
trigonometric polynomials on points and cyclic grids.

Conventions: e(x) = exp(2*pi*i*x); a polynomial with coefficient sequence
a_0..a_{d-1} is f(x) = sum_h a_h e(h x).  An idempotent is the special case
of 0/1 coefficients, held as a ``Spectrum`` (its support).  Grid values on
the q-point cyclic grid determine any polynomial of degree < q.

All operations are pure functions of immutable values; nothing here keeps
shared mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "Spectrum", "CoeffPoly", "Grid", "GridValues",
    "dirichlet_value", "to_coeffs", "eval_point", "eval_grid",
    "fold_power", "dilate", "complement",
]


@dataclass(frozen=True)
class Spectrum:
    """A finite set of distinct nonnegative integer frequencies.

    ``degree_bound`` is the ambient modulus context q; every frequency must
    be strictly below it.
    """

    freqs: tuple
    degree_bound: int

    def __post_init__(self):
        fr = tuple(int(h) for h in self.freqs)
        if list(fr) != sorted(set(fr)):
            fr = tuple(sorted(set(fr)))
        object.__setattr__(self, "freqs", fr)
        if fr and fr[0] < 0:
            raise DomainError("frequencies must be nonnegative")
        if fr and fr[-1] >= self.degree_bound:
            raise DomainError(
                f"degree_bound {self.degree_bound} must exceed max frequency {fr[-1]}")
        if self.degree_bound < 1:
            raise DomainError("degree_bound must be >= 1")

    def __len__(self):
        return len(self.freqs)

    def min_gap(self) -> int:
        """Smallest difference between consecutive frequencies (0 if < 2 freqs)."""
        if len(self.freqs) < 2:
            return 0
        d = np.diff(np.asarray(self.freqs))
        return int(d.min())


@dataclass(frozen=True, eq=False)
class CoeffPoly:
    """Dense complex coefficient sequence a_0..a_{d-1}.

    ``nonneg`` asserts the positive-definite subclass: all coefficients real
    and >= 0 (enforced at construction).
    """

    coeffs: np.ndarray
    nonneg: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        object.__setattr__(self, "coeffs", c)
        if self.nonneg:
            if np.any(c.imag != 0) or np.any(c.real < 0):
                raise DomainError("nonneg flag set but coefficients are not real >= 0")

    def __len__(self):
        return len(self.coeffs)


@dataclass(frozen=True)
class Grid:
    """Cyclic evaluation grid: points k/q, or (2k+1)/(2q) when shifted."""

    q: int
    shifted: bool = False

    def __post_init__(self):
        if self.q < 1:
            raise DomainError("grid size q must be >= 1")

    def points(self) -> np.ndarray:
        k = np.arange(self.q)
        if self.shifted:
            return (2 * k + 1) / (2 * self.q)
        return k / self.q


@dataclass(frozen=True, eq=False)
class GridValues:
    """Values of a polynomial on a Grid; values[k] = f(point_k)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if len(v) != self.grid.q:
            raise DomainError("value count must equal grid size")
        object.__setattr__(self, "values", v)

    def moduli(self) -> np.ndarray:
        return np.abs(self.values)


def dirichlet_value(n: int, x) -> complex:
    """Value of the n-term geometric kernel sum_{v<n} e(v x).

    Equals e^{i pi (n-1) x} sin(pi n x)/sin(pi x), with the removable
    singularity at integer x filled in exactly by n.  Accepts scalars or
    arrays (returns an array for array input).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    x = np.asarray(x, dtype=np.float64)
    s = np.sin(np.pi * x)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.exp(1j * np.pi * (n - 1) * x) * np.sin(np.pi * n * x) / s
    val = np.where(s == 0.0, complex(n), val)
    if val.ndim == 0:
        return complex(val)
    return val


def to_coeffs(s: Spectrum) -> CoeffPoly:
    """0/1 coefficient sequence of the idempotent with support ``s``."""
    c = np.zeros(s.degree_bound, dtype=np.complex128)
    if s.freqs:
        c[np.asarray(s.freqs)] = 1.0
    return CoeffPoly(c, nonneg=True)


def eval_point(p: CoeffPoly, x) -> complex:
    """Direct-summation evaluation sum_h a_h e(h x).

    This is the reference oracle for ``eval_grid``; it deliberately avoids
    any transform machinery.
    """
    h = np.nonzero(p.coeffs)[0]
    if len(h) == 0:
        x = np.asarray(x, dtype=np.float64)
        z = np.zeros(x.shape, dtype=np.complex128)
        return complex(z) if z.ndim == 0 else z
    a = p.coeffs[h]
    x = np.asarray(x, dtype=np.float64)
    val = np.tensordot(a, np.exp(2j * np.pi * np.outer(h, x)), axes=(0, 0))
    if val.ndim == 0:
        return complex(val)
    return val


def _fold_mod(coeffs: np.ndarray, q: int) -> np.ndarray:
    """Reduce a coefficient sequence mod q: index h contributes at h mod q."""
    if len(coeffs) <= q:
        out = np.zeros(q, dtype=np.complex128)
        out[: len(coeffs)] = coeffs
        return out
    out = np.zeros(q, dtype=np.complex128)
    np.add.at(out, np.arange(len(coeffs)) % q, coeffs)
    return out


def eval_grid(p: CoeffPoly, g: Grid) -> GridValues:
    """Evaluate on all grid points with a size-q discrete Fourier transform.

    Coefficients with index >= q alias: index h lands on h mod q.  On the
    shifted grid each a_h is pre-twisted by e(h/(2q)) before folding, which
    turns the half-step shift into a plain q-point transform.
    """
    q = g.q
    c = p.coeffs
    if g.shifted:
        h = np.arange(len(c))
        c = c * np.exp(1j * np.pi * h / q)
    folded = _fold_mod(c, q)
    # values[k] = sum_h c_h e(hk/q) = q * ifft(c)[k]
    vals = np.fft.ifft(folded) * q
    return GridValues(g, vals)


def fold_power(p: CoeffPoly, L: int, q: int) -> CoeffPoly:
    """The unique degree-<q polynomial matching p^L on the q-point grid.

    Computed as values -> pointwise L-th power -> inverse transform.  For a
    nonnegative input the folded coefficients are convolution powers summed
    over residues, hence >= 0 up to transform noise; dust below 1e-9 of the
    peak is clamped to zero so the nonneg flag survives.
    """
    if L < 1:
        raise DomainError("power L must be >= 1")
    if not p.nonneg:
        c = p.coeffs
        if np.any((c != 0) & (c != 1)):
            raise DomainError("fold_power needs a nonneg or 0/1 polynomial")
    vals = eval_grid(p, Grid(q)).values ** L
    coeffs = np.fft.fft(vals) / q
    peak = np.abs(coeffs).max()
    tol = 1e-9 * peak
    re = coeffs.real
    re[(re < 0) & (re > -tol)] = 0.0
    im_ok = np.abs(coeffs.imag).max() <= tol
    if not im_ok or np.any(re < 0):
        raise DomainError("folded power has non-clampable negative/complex residue")
    return CoeffPoly(re.astype(np.complex128), nonneg=True)


def dilate(s: Spectrum, nu: int, new_bound: int) -> Spectrum:
    """Frequency dilation h -> nu*h (no modular reduction)."""
    if nu < 1:
        raise DomainError("dilation factor must be >= 1")
    if s.freqs and nu * s.freqs[-1] >= new_bound:
        raise DomainError("new_bound too small for dilated spectrum")
    return Spectrum(tuple(nu * h for h in s.freqs), new_bound)


def complement(s: Spectrum) -> Spectrum:
    """Complement spectrum {0..q-1} \\ H within the context modulus."""
    q = s.degree_bound
    have = set(s.freqs)
    return Spectrum(tuple(h for h in range(q) if h not in have), q)
