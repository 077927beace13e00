"""Walk through the series machinery and every named constant.

Run:  python demos/01_named_constants.py
"""

import math

from concentra import bounds

print("=== The two series and their closed forms at exponent 2 ===\n")
for t in (0.125, 0.25, 0.375):
    full = bounds.eval_B(2.0, t, tol=1e-12)
    half = bounds.eval_A(2.0, t, tol=1e-12)
    cf_full = math.pi ** 2 * t / math.sin(math.pi * t) ** 2
    cf_half = cf_full / 4
    print(f"t = {t:5.3f}:  B = {full.value:.12f} (closed {cf_full:.12f}, "
          f"tail <= {full.tail_bound:.1e}, {full.terms_used} terms)")
    print(f"           A = {half.value:.12f} (closed {cf_half:.12f}, "
          f"tail <= {half.tail_bound:.1e})")

print("\n=== Global minima over t and the grid concentration levels ===\n")
mB = bounds.minimize_over_t("B", 2.0)
g2 = bounds.gamma2_sharp()
print(f"min_t B(2, t) = {mB.value:.9f} at t* = {mB.t_star:.6f}")
print(f"2 / min_t B(2, t) = {2 / mB.value:.9f}")
print(f"direct supremum form:  {g2.value:.9f} at x* = {g2.argmax:.7f} "
      f"(tan x - 2x = {math.tan(g2.argmax) - 2 * g2.argmax:.1e})")

g4 = bounds.gamma4_sharp_lower()
print(f"\nfourth-power level:    {g4.value:.9f}  (> 0.495, <= 1/2)")

print("\n=== Uniform level for every exponent above 2 (power sweep) ===\n")
for p in (2.5, 3.0, 6.0):
    g = bounds.gamma_sharp_lower(p)
    sweep = g.certificate["L_sweep"]
    print(f"p = {p}: level > {g.value:.6f}  (sweep stopped after L = {sweep[-1]['L']})")

asym = bounds.asymptote_scan(1e4)
print(f"\nlarge-power asymptote of the sweep: min B = {asym.value:.6f} "
      f"at kappa* = {asym.argmax:.4f}  ->  level > {2 / asym.value:.6f}")

print("\n=== Half-grid levels and the integral-norm chain ===\n")
gs = bounds.gamma_star_lower(2.0)
print(f"half-grid level at exponent 2:  {gs.value:.9f}  (= 2 x {g2.value:.9f})")
g1 = bounds.gamma1_certified_lower(1.999)
print(f"integral-norm certified lower bound via r = 1.999:  {g1.value:.9f}")
print("(the exponent-conjugate factor is 1: the odd series at t = 1/4 "
      f"reduces to sum (2k+1)^-lam -> {bounds.eval_A(40.0, 0.25, tol=1e-13).value:.12f})")
