"""Bernoulli rounding of positive-definite polynomials into idempotents.

The rounding keeps frequency h with probability a_h (peak-normalized).
Its at-the-point conclusion holds at desk scale already; the in-mean
conclusion is asymptotic and visibly fails at small grid size -- both
regimes are shown honestly below.

Run:  python demos/03_randomized_rounding.py
"""

import numpy as np

from concentra import rounding
from concentra.trigpoly import Spectrum, fold_power, to_coeffs

print("=== A folded kernel power as the rounding input ===\n")
q, n, L = 499, 125, 3
P = fold_power(to_coeffs(Spectrum(tuple(range(n)), q)), L, q)
Pn = rounding.normalize_peak(P)
consts = rounding.hypothesis_constants(Pn, q, 3.0)
print(f"q = {q}, kernel length {n}, power {L}")
print(f"mass sigma = {consts['sigma']:.2f}, peak value |P(1/q)| = "
      f"{consts['peak_value']:.2f}")
print(f"largest admissible constants: mass condition c <= {consts['c_cond_c']:.4f}, "
      f"concentration condition c <= {consts['c_concentr']:.4f}")

print("\n=== One trial, fully reproducible ===\n")
Q = rounding.bernoulli_round(Pn, seed=1)
tr = rounding.verify_trial(Pn, Q, q, 3.0, 0.2)
print(f"kept {len(Q.freqs)} of {np.count_nonzero(Pn.coeffs.real)} frequencies")
print(f"at-point margin {tr.at_point_margin:+.4f} (needs >= 0), "
      f"in-mean deviation {tr.mean_dev:.4f} (needs <= 0.2) -> "
      f"success = {tr.success}")

print("\n=== Desk scale vs asymptotic scale ===\n")
rep = rounding.monte_carlo(P, q, 3.0, 0.2, 200, seed=1)
print(f"q = {q:6d}: success frequency {rep.frequency:.3f}   "
      f"(median in-mean dev {rep.mean_dev_quantiles['q50']:.3f}; the "
      "in-mean budget 0.2 is out of reach at this size)")
qb, nb = 120011, 30003
Pb = fold_power(to_coeffs(Spectrum(tuple(range(nb)), qb)), L, qb)
repb = rounding.monte_carlo(Pb, qb, 3.0, 0.2, 60, seed=1)
print(f"q = {qb:6d}: success frequency {repb.frequency:.3f}   "
      f"(median in-mean dev {repb.mean_dev_quantiles['q50']:.3f}; the "
      "union bound has kicked in)")

print("\n=== The moment bound behind the in-mean control ===\n")
print("ratio of E|sum b_k (X_k - a_k)|^p to max|b|^p (1 + sum a_k)^(p/2):")
for p in (2.5, 3.0, 5.0):
    ratios = [rounding.moment_check(np.ones(nn), np.full(nn, 0.5), p,
                                    30000, seed=17).ratio
              for nn in (20, 200, 2000)]
    print(f"  p = {p}: " + "  ".join(f"{r:.3f}" for r in ratios)
          + "   (mass 10, 100, 1000: no growth)")
