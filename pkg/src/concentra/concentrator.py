"""Torus-level constructions: idempotents concentrating their p-mass on a
prescribed symmetric union of intervals.

The pipeline localizes the set with a rational window a/q +- theta/q^2,
picks a grid witness concentrated at the matching target, multiplies by a
peaking kernel sampled at qt, and measures the achieved concentration by
quadrature.  The full-circle integral uses the equispaced rule (exact for
band-limited integrands once the mesh exceeds twice the degree, which is
what makes the p = 2 Parseval cross-check sharp); the set integral uses
composite Simpson per interval with a mesh-doubling error estimate.

Only the peak-at-0 Dirichlet pathway is implemented, so the pipeline
requires p > 1; the large-gap peaking functions needed both for p <= 1 and
for gap factors beyond q/deg(R) are out of scope here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, CollisionError, DomainError
from .trigpoly import CoeffPoly, Grid, Spectrum, dirichlet_value, eval_grid, to_coeffs
from . import discrete

__all__ = [
    "IntervalSet", "Plan", "TorusReport", "FractionHit", "EndToEndConfig",
    "EndToEndResult", "find_fraction", "choose_n", "build_Q", "build_S",
    "measure", "end_to_end", "shift_stability_ratio",
]


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint subintervals of [0, 1]."""

    intervals: tuple
    symmetric: bool = False

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        ivs = tuple(sorted(ivs))
        object.__setattr__(self, "intervals", ivs)
        prev = -1.0
        for lo, hi in ivs:
            if not (0.0 <= lo < hi <= 1.0):
                raise DomainError(f"bad interval ({lo}, {hi})")
            if lo < prev:
                raise DomainError("intervals must be disjoint")
            prev = hi
        if not ivs:
            raise DomainError("empty interval set")
        if self.symmetric and not self._is_symmetric():
            raise DomainError("symmetric flag set but set is not reflection-invariant")

    def _is_symmetric(self, tol: float = 1e-12) -> bool:
        # reflect each interval through x -> 1-x and compare as sorted lists
        r = sorted((max(1.0 - hi, 0.0), min(1.0 - lo, 1.0))
                   for lo, hi in self.intervals)
        mine = list(self.intervals)
        return all(abs(a - c) <= tol and abs(b - d) <= tol
                   for (a, b), (c, d) in zip(r, mine))

    def measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.intervals))

    def window_overlap(self, lo: float, hi: float) -> float:
        """|(lo, hi) intersect E| with the window taken mod 1."""
        total = 0.0
        for s in (-1.0, 0.0, 1.0):
            for a, b in self.intervals:
                total += max(0.0, min(hi, b + s) - max(lo, a + s))
        return total


@dataclass(frozen=True)
class FractionHit:
    a: int
    q: int
    coverage: float
    meets_threshold: bool


@dataclass(frozen=True)
class Plan:
    a: int
    q: int
    theta: float
    n: int
    R: Spectrum          # grid witness, degree < q (undilated)
    nu: int = 1
    shifted: bool = False


@dataclass(frozen=True)
class TorusReport:
    int_E: float
    int_T: float
    ratio: float
    mesh: int
    quadrature_error_est: float
    parseval_rel_err: float | None = None


@dataclass(frozen=True)
class EndToEndConfig:
    theta: float = 0.5
    eta: float = 0.05
    q0: int = 8
    q_max: int = 4000
    nu: int = 1
    mesh_per_unit_degree: int = 8
    exhaustive_cap: int = 18
    heuristic_restarts: int = 4
    seed: int = 0
    sample_cap: int = 1 << 25


@dataclass(frozen=True)
class EndToEndResult:
    plan: Plan
    report: TorusReport
    spectrum: Spectrum          # the assembled idempotent
    predicted_ratio: float      # witness grid ratio at its target
    min_gap: int
    pathway: str


def find_fraction(E: IntervalSet, theta: float, eta: float, q0: int,
                  q_max: int, nu: int = 1, shifted: bool = False,
                  trace: list | None = None) -> FractionHit:
    """First fraction (smallest q, then a) whose window covers E well.

    Scans q in (q0, q_max] with gcd(nu, q) = 1 and all reduced residues,
    computing exact window coverage |window cap E| / (2 theta / q^2).
    Falls back to the best fraction found (flagged) when none reaches the
    1 - eta threshold.  When ``trace`` is a list, every examined
    (q, a, coverage) triple is appended to it.
    """
    if q0 >= q_max:
        raise DomainError("need q0 < q_max")
    best = None
    for q in range(max(q0 + 1, 2), q_max + 1):
        if math.gcd(nu, q) != 1:
            continue
        w = theta / (q * q)
        if shifted:
            cands = [a for a in range(q) if math.gcd(2 * a + 1, 2 * q) == 1]
            centers = [(2 * a + 1) / (2 * q) for a in cands]
        else:
            cands = [a for a in range(1, q) if math.gcd(a, q) == 1]
            centers = [a / q for a in cands]
        for a, c in zip(cands, centers):
            cov = min(E.window_overlap(c - w, c + w) / (2 * w), 1.0)
            if trace is not None:
                trace.append((q, a, cov))
            if cov >= 1.0 - eta:
                return FractionHit(a, q, cov, True)
            if best is None or cov > best.coverage:
                best = FractionHit(a, q, cov, False)
    return best if best is not None else FractionHit(0, 0, 0.0, False)


def choose_n(p: float, eps: float, delta: float) -> int:
    """Peaking-kernel length guaranteeing <= eps relative mass outside
    (-delta, delta), from the explicit tail constant (pi/2)^p / (p-1)."""
    if p <= 1:
        raise DomainError("peaking pathway needs p > 1")
    if not (0 < eps < 1) or delta <= 0:
        raise DomainError("need 0 < eps < 1 and delta > 0")
    kp = (math.pi / 2) ** p / (p - 1)
    return int(math.ceil((2 * kp / eps) ** (1.0 / (p - 1)) / delta))


def build_Q(R: Spectrum, n: int, q: int) -> Spectrum:
    """Spectrum of R(t) * D_n(q t): frequencies h + q m, h in R, m < n."""
    if not R.freqs:
        raise DomainError("witness spectrum is empty")
    if R.freqs[-1] >= q:
        raise CollisionError("deg(R) must be < q for a collision-free assembly")
    freqs = tuple(int(h + q * m) for m in range(n) for h in R.freqs)
    return Spectrum(tuple(sorted(freqs)), q * n)


def build_S(R1: Spectrum, R2: Spectrum, q: int, mode: str = "q_plus_1") -> Spectrum:
    """Product spectrum h1 + f*h2 with f = q+1 or 2q+1.

    On the q-point (resp. 2q-point) grid the assembled polynomial takes the
    pointwise product of the factors' values; any repeated frequency sum is
    rejected since the result would not be an idempotent.
    """
    if mode == "q_plus_1":
        f = q + 1
    elif mode == "two_q_plus_1":
        f = 2 * q + 1
    else:
        raise DomainError("mode must be q_plus_1 or two_q_plus_1")
    sums = [h1 + f * h2 for h2 in R2.freqs for h1 in R1.freqs]
    if len(set(sums)) != len(sums):
        raise CollisionError("frequency collision in product assembly")
    return Spectrum(tuple(sorted(sums)), max(sums) + 1)


def _abs_pow_on(freqs: np.ndarray, x: np.ndarray, p: float) -> np.ndarray:
    """|sum_h e(h x)|^p evaluated by chunked direct summation."""
    acc = np.zeros(len(x), dtype=np.complex128)
    step = max(1, (1 << 22) // max(len(x), 1))
    for s in range(0, len(freqs), step):
        blk = freqs[s: s + step].astype(np.float64)
        acc += np.exp(2j * np.pi * np.outer(blk, x)).sum(axis=0)
    return np.abs(acc) ** p


def _simpson_on_interval(f, lo: float, hi: float, nodes: int) -> float:
    n = max(2, nodes + (nodes % 2))
    x = np.linspace(lo, hi, n + 1)
    y = f(x)
    h = (hi - lo) / n
    return float(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-2:2].sum()))


def _quadrature(fpow, deg: int, E: IntervalSet, mesh: int, sample_cap: int):
    """(int_E, int_T) at one mesh via equispaced circle rule + Simpson."""
    N = mesh * max(deg, 1)
    if N > sample_cap:
        raise BudgetError(f"quadrature needs {N} samples > cap {sample_cap}")
    xs = np.arange(N) / N
    int_T = float(fpow(xs).mean())
    int_E = 0.0
    for lo, hi in E.intervals:
        nodes = max(8, int(math.ceil((hi - lo) * N)))
        int_E += _simpson_on_interval(fpow, lo, hi, nodes)
    return int_E, int_T


def _measure_impl(fpow, deg: int, E: IntervalSet, p: float, mesh: int,
                  n_freqs: int, sample_cap: int) -> TorusReport:
    if mesh < 4:
        raise DomainError("mesh_per_unit_degree must be >= 4 (per-oscillation floor)")
    e_f, t_f = _quadrature(fpow, deg, E, mesh, sample_cap)
    e_c, t_c = _quadrature(fpow, deg, E, max(4, mesh // 2), sample_cap)
    est = abs(e_f - e_c) + abs(t_f - t_c) + 1e-12 * (1.0 + abs(t_f))
    ratio = e_f / t_f if t_f > 0 else 0.0
    ratio = min(ratio, 1.0)
    pe = None
    if p == 2.0:
        pe = abs(t_f - n_freqs) / n_freqs
    return TorusReport(e_f, t_f, ratio, mesh, est, pe)


def measure(Q: Spectrum, E: IntervalSet, p: float,
            mesh_per_unit_degree: int = 8,
            sample_cap: int = 1 << 25) -> TorusReport:
    """Quadrature of |Q|^p over E and over the whole circle."""
    freqs = np.asarray(Q.freqs)
    deg = int(freqs.max()) if len(freqs) else 1
    fpow = lambda x: _abs_pow_on(freqs, x, p)
    return _measure_impl(fpow, deg, E, p, mesh_per_unit_degree, len(freqs), sample_cap)


def _factored_pow(W: Spectrum, nu: int, n: int, q: int, p: float):
    """|W(nu x) * D_n(q x)|^p without expanding the product spectrum."""
    freqs = np.asarray(W.freqs, dtype=np.float64)

    def fpow(x):
        acc = np.zeros(len(x), dtype=np.complex128)
        for s in range(0, len(freqs), 4096):
            blk = freqs[s: s + 4096]
            acc += np.exp(2j * np.pi * nu * np.outer(blk, x)).sum(axis=0)
        sq = np.sin(np.pi * q * x)
        with np.errstate(divide="ignore", invalid="ignore"):
            dn = np.abs(np.sin(np.pi * n * q * x) / sq)
        dn = np.where(np.abs(sq) < 1e-12, float(n), dn)
        return (np.abs(acc) * dn) ** p

    return fpow


def _witness_for(q: int, p: float, target: int, cfg: EndToEndConfig) -> Spectrum:
    """Best known grid witness concentrated at the given coprime target."""
    if q <= cfg.exhaustive_cap:
        rep = discrete.exact_gamma_sharp(q, p)
    else:
        rep = discrete.heuristic_gamma_sharp(q, p, restarts=cfg.heuristic_restarts,
                                             seed=cfg.seed)
    binv = pow(target, -1, q)
    return Spectrum(tuple(sorted(binv * h % q for h in rep.spectrum.freqs)), q)


def end_to_end(E: IntervalSet, p: float, eps: float,
               config: EndToEndConfig = EndToEndConfig(),
               require_symmetric: bool = True,
               trace: list | None = None) -> EndToEndResult:
    """Full pipeline: localize, pick a witness, assemble, measure.

    With a gap factor nu > 1 the fraction scan additionally requires the
    transformed target nu*a = +-1 (mod q) and the witness is restricted to
    an interval spectrum short enough that the assembled spectrum keeps
    gaps >= nu (possible only while deg(R) < q/nu; larger gap factors need
    the out-of-scope peaking construction and degrade the predicted ratio).
    """
    if require_symmetric and not E.symmetric:
        raise DomainError("end_to_end requires the symmetric flag on E")
    if p <= 1:
        raise DomainError(
            "only the peak-at-0 pathway is implemented, which needs p > 1; "
            "p <= 1 requires gap peaking functions that are out of scope")
    nu = config.nu
    if nu == 1:
        hit = find_fraction(E, config.theta, config.eta, config.q0,
                            config.q_max, nu=1, shifted=False, trace=trace)
        if hit.q == 0:
            raise BudgetError("no admissible fraction found")
        a, q, cov = hit.a, hit.q, hit.coverage
        b = a
        W = _witness_for(q, p, b, config)
        pathway = "dirichlet-peak"
    else:
        # scan fractions until nu * a = +-1 (mod q): then an interval witness
        # aimed at target 1 (or q-1, same ratio by conjugation) applies.
        chosen = None
        for q in range(config.q0 + 1, config.q_max + 1):
            if math.gcd(nu, q) != 1:
                continue
            w = config.theta / (q * q)
            for a in range(1, q):
                if math.gcd(a, q) != 1:
                    continue
                if (nu * a) % q not in (1, q - 1):
                    continue
                c = a / q
                cov = min(E.window_overlap(c - w, c + w) / (2 * w), 1.0)
                if trace is not None:
                    trace.append((q, a, cov))
                if cov >= 1.0 - config.eta:
                    chosen = (a, q, cov)
                    break
            if chosen:
                break
        if not chosen:
            raise BudgetError("no fraction with nu*a = +-1 (mod q) covers E; "
                              "raise q_max or adjust theta/eta")
        a, q, cov = chosen
        b = (nu * a) % q
        t_opt = 0.371 if p == 2.0 else None
        if t_opt is None:
            from .bounds import minimize_over_t
            t_opt = minimize_over_t("B", p, scan_points=512, refine_tol=1e-5).t_star
        n_R = max(1, min(int(round(t_opt * q)), (q - nu) // nu))
        W = Spectrum(tuple(range(n_R)), q)
        pathway = "dirichlet-peak-gapped"
    predicted = discrete.concentration_ratio(W, p, b)
    n = choose_n(p, eps, config.theta / q)
    Q = _assemble(W, nu, n, q)
    fpow = _factored_pow(W, nu, n, q, p)
    deg = max(1, nu * W.freqs[-1] + q * (n - 1))
    report = _measure_impl(fpow, deg, E, p, config.mesh_per_unit_degree,
                           len(W) * n, config.sample_cap)
    plan = Plan(a, q, config.theta, n, W, nu, False)
    return EndToEndResult(plan, report, Q, predicted, Q.min_gap(), pathway)


def _assemble(W: Spectrum, nu: int, n: int, q: int) -> Spectrum:
    """Spectrum of W(nu t) D_n(q t); distinct because gcd(nu, q) = 1."""
    freqs = sorted(nu * h + q * m for m in range(n) for h in W.freqs)
    if len(set(freqs)) != len(freqs):
        raise CollisionError("assembly collision (gcd(nu, q) != 1?)")
    return Spectrum(tuple(freqs), nu * W.freqs[-1] + q * n)


def shift_stability_ratio(spec: Spectrum, q: int, p: float, t: float) -> float:
    """Empirical grid-shift stability quotient for one polynomial and shift:

        sum_k | |P(t+k/q)|^p - |P(k/q)|^p |  /  (|qt| sum_k |P(k/q)|^p).
    """
    if t == 0:
        raise DomainError("need a nonzero shift")
    c = to_coeffs(spec).coeffs
    h = np.arange(len(c))
    base = eval_grid(CoeffPoly(c), Grid(q)).values
    shifted = eval_grid(CoeffPoly(c * np.exp(2j * np.pi * h * t)), Grid(q)).values
    num = float(np.sum(np.abs(np.abs(shifted) ** p - np.abs(base) ** p)))
    den = abs(q * t) * float(np.sum(np.abs(base) ** p))
    return num / den
