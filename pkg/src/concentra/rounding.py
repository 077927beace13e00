"""Bernoulli randomized rounding: positive-definite polynomials to idempotents.

A nonnegative polynomial P with max coefficient 1 is rounded by keeping
frequency h with probability a_h, independently.  The rounded polynomial is
then an idempotent whose expectation is P; the module measures how well a
single draw preserves the value at the target point 1/q (``at-point``) and
how small the p-mean grid deviation stays (``in-mean``).

Randomness comes from counter-based Philox streams keyed (seed, index), so
trials are reproducible bit-for-bit and independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .trigpoly import CoeffPoly, Grid, Spectrum, eval_grid, to_coeffs

__all__ = [
    "RoundingTrial", "MomentReport", "MonteCarloReport",
    "check_hypotheses", "bernoulli_round", "bernoulli_round_complex",
    "verify_trial", "monte_carlo", "moment_check", "normalize_peak",
]


@dataclass(frozen=True)
class RoundingTrial:
    spectrum: Spectrum
    at_point_margin: float      # |Q(1/q)|/|P(1/q)| - (1 - eps)
    mean_dev: float             # ell^p grid distance of Q-P, / |P(1/q)|
    success: bool


@dataclass(frozen=True)
class MomentReport:
    p: float
    sigma: float
    empirical_moment: float
    normalizer: float
    ratio: float
    trials: int


@dataclass(frozen=True)
class MonteCarloReport:
    q: int
    p: float
    epsilon: float
    trials: int
    seed: int
    frequency: float
    mean_at_point_margin: float
    mean_dev_quantiles: dict


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), index]))


def normalize_peak(P: CoeffPoly) -> CoeffPoly:
    """Rescale so the largest coefficient modulus is exactly 1."""
    m = np.abs(P.coeffs).max()
    if m == 0:
        raise DomainError("zero polynomial cannot be normalized")
    return CoeffPoly(P.coeffs / m, nonneg=P.nonneg)


def check_hypotheses(P: CoeffPoly, q: int, c: float, p: float):
    """Evaluate the two rounding hypotheses at constant c.

    (i)  c q max|a_h| <= sum|a_h| <= c^-1 |P(1/q)|
    (ii) |P(1/q)| >= c (sum_k |P(k/q)|^p)^(1/p)
    """
    if len(P.coeffs) > q:
        raise DomainError("polynomial degree must be < q")
    a = np.abs(P.coeffs)
    sigma = float(a.sum())
    vals = eval_grid(P, Grid(q)).values
    P1 = float(abs(vals[1])) if q > 1 else float(abs(vals[0]))
    cond_c = (c * q * float(a.max()) <= sigma) and (c * sigma <= P1)
    lp = float(np.sum(np.abs(vals) ** p)) ** (1.0 / p)
    concentr = P1 >= c * lp
    return bool(cond_c), bool(concentr)


def check_weak_hypothesis(P: CoeffPoly, q: int, p: float, delta: float) -> bool:
    """Experimental weakened mass condition: sum|a_h| >= delta q^(2/p) max|a_h|.

    Replaces the linear-in-q mass requirement in the regime where delta is
    allowed to grow with q; exposed for experiments only, with no success
    guarantee attached.
    """
    a = np.abs(P.coeffs)
    if a.max() == 0:
        raise DomainError("zero polynomial")
    return bool(a.sum() >= delta * q ** (2.0 / p) * a.max())


def hypothesis_constants(P: CoeffPoly, q: int, p: float) -> dict:
    """Largest constants at which each hypothesis holds for this P."""
    a = np.abs(P.coeffs)
    sigma = float(a.sum())
    vals = eval_grid(P, Grid(q)).values
    P1 = float(abs(vals[1]))
    lp = float(np.sum(np.abs(vals) ** p)) ** (1.0 / p)
    return {
        "c_cond_c": min(sigma / (q * float(a.max())), P1 / sigma) if sigma else 0.0,
        "c_concentr": P1 / lp if lp else 0.0,
        "sigma": sigma,
        "peak_value": P1,
    }


def bernoulli_round(P: CoeffPoly, seed: int) -> Spectrum:
    """Round a nonnegative polynomial to an idempotent support.

    Coefficients are normalized to peak 1; frequency h is kept iff the
    (seed, h)-derived uniform falls below a_h.  Pure function of (P, seed).
    """
    if not P.nonneg:
        raise DomainError("bernoulli_round needs the nonneg flag "
                          "(see bernoulli_round_complex for the unchecked variant)")
    a = P.coeffs.real
    m = a.max()
    if m <= 0:
        raise DomainError("zero polynomial")
    alpha = a / m
    u = _stream(seed, 0).random(len(alpha))
    keep = u < alpha
    return Spectrum(tuple(int(h) for h in np.nonzero(keep)[0]), len(alpha))


def bernoulli_round_complex(P: CoeffPoly, seed: int) -> CoeffPoly:
    """Unchecked variant for complex coefficients (experiments only).

    Keeps unimodular coefficients a_h/|a_h| with probability |a_h|/max|a_h|.
    The result is NOT an idempotent unless P was nonnegative.
    """
    a = np.abs(P.coeffs)
    m = a.max()
    if m <= 0:
        raise DomainError("zero polynomial")
    alpha = a / m
    u = _stream(seed, 0).random(len(alpha))
    keep = u < alpha
    with np.errstate(invalid="ignore", divide="ignore"):
        units = np.where(a > 0, P.coeffs / np.where(a > 0, a, 1.0), 0.0)
    return CoeffPoly(np.where(keep, units, 0.0))


def verify_trial(P: CoeffPoly, Q: Spectrum, q: int, p: float,
                 eps: float) -> RoundingTrial:
    """Both rounding conclusions for one drawn idempotent Q against P.

    P must already be peak-normalized (max coefficient 1), the same scaling
    under which Q was drawn; margins are relative to the normalized P.
    """
    if len(P.coeffs) > q or Q.degree_bound > q:
        raise DomainError("degree bounds must be <= q")
    if abs(np.abs(P.coeffs).max() - 1.0) > 1e-9:
        raise DomainError("P must be peak-normalized (max coefficient 1)")
    Pv = eval_grid(P, Grid(q)).values
    P1 = float(abs(Pv[1]))
    if P1 == 0:
        raise DomainError("|P(1/q)| vanishes; margins undefined")
    Qv = eval_grid(to_coeffs(Q), Grid(q)).values
    margin = float(abs(Qv[1])) / P1 - (1.0 - eps)
    dev = float(np.sum(np.abs(Qv - Pv) ** p)) ** (1.0 / p) / P1
    return RoundingTrial(Q, margin, dev, bool(margin >= 0 and dev <= eps))


def monte_carlo(P: CoeffPoly, q: int, p: float, eps: float, trials: int,
                seed: int) -> MonteCarloReport:
    """Empirical success frequency of the rounding over independent trials."""
    if trials < 1:
        raise DomainError("success frequency undefined for trials < 1")
    Pn = normalize_peak(P)
    alpha = Pn.coeffs.real
    Pv = eval_grid(Pn, Grid(q)).values
    P1 = float(abs(Pv[1]))
    if P1 == 0:
        raise DomainError("|P(1/q)| vanishes")
    margins = np.empty(trials)
    devs = np.empty(trials)
    succ = 0
    for i in range(trials):
        u = _stream(seed, i).random(len(alpha))
        keep = (u < alpha).astype(np.complex128)
        Qv = np.fft.ifft(np.pad(keep, (0, q - len(keep)))) * q
        margins[i] = abs(Qv[1]) / P1 - (1.0 - eps)
        devs[i] = np.sum(np.abs(Qv - Pv) ** p) ** (1.0 / p) / P1
        succ += (margins[i] >= 0) and (devs[i] <= eps)
    q10, q50, q90 = np.quantile(devs, [0.1, 0.5, 0.9])
    return MonteCarloReport(q, p, eps, trials, seed, succ / trials,
                            float(margins.mean()),
                            {"q10": float(q10), "q50": float(q50), "q90": float(q90)})


def moment_check(b, alpha, p: float, trials: int, seed: int,
                 block: int = 1024) -> MomentReport:
    """Empirical p-th moment of sum_k b_k (X_k - alpha_k), normalized by
    max|b|^p (1 + sum alpha)^(p/2).

    Draws are blocked (fixed block size) from Philox streams keyed
    (seed, block index); results are reproducible for fixed arguments.
    """
    b = np.asarray(b, dtype=np.complex128)
    alpha = np.asarray(alpha, dtype=np.float64)
    if len(b) != len(alpha):
        raise DomainError("b and alpha must have equal length")
    if np.any((alpha < 0) | (alpha > 1)):
        raise DomainError("alpha entries must lie in [0, 1]")
    if p <= 2:
        raise DomainError("moment bound regime needs p > 2")
    if trials < 1:
        raise DomainError("need trials >= 1")
    total = 0.0
    done = 0
    bi = 0
    while done < trials:
        nblk = min(block, trials - done)
        u = _stream(seed, bi).random((nblk, len(alpha)))
        X = (u < alpha[None, :]).astype(np.float64)
        S = (X - alpha[None, :]) @ b
        total += float(np.sum(np.abs(S) ** p))
        done += nblk
        bi += 1
    sigma = float(alpha.sum())
    emp = total / trials
    norm = float(np.max(np.abs(b)) ** p * (1.0 + sigma) ** (p / 2))
    return MomentReport(p, sigma, emp, norm, emp / norm if norm else 0.0, trials)
