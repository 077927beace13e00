"""Command-line front end and reproducibility harness.

Every subcommand writes a RunRecord into the cache directory (flag
--cache-dir, or the CONCENTRA_CACHE environment variable); ``replay``
re-executes a record and verifies the outputs bit-identically.  Exit codes:
0 success, 2 domain error, 3 budget error, 4 acceptance failure (constants
command), 1 replay mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import bounds, concentrator, discrete, rounding
from .cache import (ResultsCache, canonical_json, config_hash,
                    default_cache_dir, load_record, round_floats,
                    to_jsonable, write_record)
from .errors import BudgetError, DomainError
from .trigpoly import Spectrum, fold_power, to_coeffs

EXIT_OK, EXIT_MISMATCH, EXIT_DOMAIN, EXIT_BUDGET, EXIT_ACCEPT = 0, 1, 2, 3, 4

_F = "{:.15g}".format


# ----------------------------------------------------------------------
# runners (pure functions of their input dicts, reused by replay)
# ----------------------------------------------------------------------

def run_constants(inputs: dict) -> dict:
    rows = []

    g2 = bounds.gamma2_sharp()
    resid = abs(g2.certificate["stationarity_residual"])
    rows.append({
        "name": "gamma2_sharp", "paper_value": 0.4613,
        "value": g2.value, "computed_value": g2.value, "argmax": g2.argmax,
        "certificate": g2.certificate,
        "passed": bool(0.4608 <= g2.value <= 0.4618 and resid <= 1e-6),
    })

    g4 = bounds.gamma4_sharp_lower()
    rows.append({
        "name": "gamma4_sharp_lower", "paper_value": "0.495 < . <= 0.5",
        "value": g4.value, "computed_value": g4.value, "argmax": g4.argmax,
        "certificate": g4.certificate,
        "passed": bool(0.495 < g4.value <= 0.5),
    })

    ps = inputs.get("uniform_p_set", [2.5, 3.0, 4.0, 6.0, 10.0])
    per_p = {}
    for p in ps:
        per_p[str(p)] = bounds.gamma_sharp_lower(p).value
    rows.append({
        "name": "gamma_sharp_uniform_p_gt_2", "paper_value": "> 0.483",
        "value": min(per_p.values()), "computed_value": min(per_p.values()),
        "certificate": {"per_p": per_p},
        "passed": bool(all(v > 0.483 for v in per_p.values())),
    })

    lam = inputs.get("asymptote_lambda", 1e4)
    asym = bounds.asymptote_scan(lam)
    rows.append({
        "name": "power_sweep_asymptote", "paper_value": 4.13273,
        "value": asym.value, "computed_value": asym.value, "argmax": asym.argmax,
        "certificate": asym.certificate,
        "passed": bool(asym.value <= 4.14 and 2.0 / asym.value > 0.483),
    })

    g1 = bounds.gamma1_certified_lower(1.999)
    rows.append({
        "name": "gamma1_certified_lower", "paper_value": "> 0.96",
        "value": g1.value, "computed_value": g1.value,
        "certificate": g1.certificate,
        "passed": bool(g1.value > 0.96 and abs(g1.value - 0.96053) <= 1e-3),
    })

    notes = [
        "half-grid series at t=1/4 reduces to sum (2k+1)^-lam, whose computed "
        "large-lam limit is 1 (checked: A(40, 1/4) = 1 to 1e-12); downstream "
        "conclusions only need the level to be 1, so the value is reported "
        "as computed and the normalization question is flagged here.",
    ]
    return {"rows": rows, "notes": notes,
            "all_passed": bool(all(r["passed"] for r in rows))}


def run_curve(inputs: dict) -> dict:
    which = inputs["which"]
    lam = inputs["lam"]
    ts = np.linspace(inputs["t_min"], inputs["t_max"], inputs["points"])
    tol = inputs.get("tol", 1e-10)
    f = bounds.eval_A if which == "A" else bounds.eval_B
    rows = []
    for t in ts:
        ev = f(lam, float(t), tol=tol)
        rows.append({"lambda": lam, "t": float(t), "value": ev.value,
                     "tail_bound": ev.tail_bound})
    return {"rows": rows}


def run_search(inputs: dict) -> dict:
    q, p = inputs["q"], inputs["p"]
    mode = inputs.get("mode", "auto")
    seed = inputs.get("seed", 0)
    if mode == "star":
        K = inputs.get("K", 1e4)
        rep = discrete.exact_gamma_star(q, p, K=K)
        out = to_jsonable(rep)
        if inputs.get("k_sensitivity", False):
            out["K_sensitivity"] = {
                str(Kk): discrete.exact_gamma_star(q, p, K=Kk).ratio_star
                for Kk in (K / 10, K, 10 * K)}
        return out
    if mode == "exhaustive" or (mode == "auto" and q <= discrete.EXHAUSTIVE_CAP):
        rep = discrete.exact_gamma_sharp(q, p, workers=inputs.get("workers", 1))
    else:
        rep = discrete.heuristic_gamma_sharp(q, p,
                                             restarts=inputs.get("restarts", 4),
                                             seed=seed)
    return to_jsonable(rep)


def run_round(inputs: dict) -> dict:
    q, n, L = inputs["q"], inputs["n"], inputs["L"]
    p, eps = inputs["p"], inputs["epsilon"]
    P = fold_power(to_coeffs(Spectrum(tuple(range(n)), q)), L, q)
    Pn = rounding.normalize_peak(P)
    rep = rounding.monte_carlo(P, q, p, eps, inputs["trials"], inputs.get("seed", 0))
    out = to_jsonable(rep)
    out["hypotheses"] = rounding.hypothesis_constants(Pn, q, p)
    c_probe = inputs.get("c_probe", 0.3)
    cond_c, concentr = rounding.check_hypotheses(Pn, q, c_probe, p)
    out["hypotheses"]["c_probe"] = c_probe
    out["hypotheses"]["cond_c_at_probe"] = cond_c
    out["hypotheses"]["concentr_at_probe"] = concentr
    return out


def run_concentrate(inputs: dict) -> dict:
    ivs = tuple((float(a), float(b)) for a, b in inputs["intervals"])
    probe = concentrator.IntervalSet(ivs, symmetric=False)
    symmetric = probe._is_symmetric()
    if not symmetric and not inputs.get("allow_asymmetric", False):
        raise DomainError("set is not reflection-symmetric "
                          "(pass --allow-asymmetric to proceed)")
    E = concentrator.IntervalSet(ivs, symmetric=symmetric)
    cfg = concentrator.EndToEndConfig(
        theta=inputs.get("theta", 0.5), eta=inputs.get("eta", 0.05),
        q0=inputs.get("q0", 8), q_max=inputs.get("q_max", 4000),
        nu=inputs.get("nu", 1),
        mesh_per_unit_degree=inputs.get("mesh", 8),
        seed=inputs.get("seed", 0))
    trace = [] if inputs.get("trace_path") else None
    res = concentrator.end_to_end(E, inputs["p"], inputs["epsilon"], cfg,
                                  require_symmetric=symmetric, trace=trace)
    if trace is not None:
        with open(inputs["trace_path"], "w") as fh:
            fh.write("q,a,coverage\n")
            for q, a, cov in trace:
                fh.write(f"{q},{a},{_F(cov)}\n")
    out = {
        "plan": to_jsonable(res.plan),
        "report": to_jsonable(res.report),
        "predicted_ratio": res.predicted_ratio,
        "min_gap": res.min_gap,
        "pathway": res.pathway,
        "spectrum_size": len(res.spectrum),
    }
    return out


def run_decay(inputs: dict) -> dict:
    cfg = discrete.SearchConfig(
        exhaustive_cap=inputs.get("exhaustive_cap", 19),
        restarts=inputs.get("restarts", 4),
        seed=inputs.get("seed", 0),
        workers=inputs.get("workers", 1))
    rows = discrete.gamma1_decay_scan(inputs["primes"], cfg)
    return {"rows": rows}


_RUNNERS = {
    "constants": run_constants,
    "curve": run_curve,
    "search": run_search,
    "round": run_round,
    "concentrate": run_concentrate,
    "decay": run_decay,
}


# ----------------------------------------------------------------------
# output formatting
# ----------------------------------------------------------------------

def _curve_csv(payload: dict) -> str:
    lines = ["lambda,t,value,tail_bound"]
    for r in payload["rows"]:
        lines.append(",".join(_F(r[k]) for k in ("lambda", "t", "value", "tail_bound")))
    return "\n".join(lines) + "\n"


def _decay_csv(payload: dict) -> str:
    cols = ["q", "method", "gamma1_hat", "dirichlet_best",
            "gamma1_hat_log_q", "beta_diagnostic"]
    lines = [",".join(cols)]
    for r in payload["rows"]:
        vals = [str(r["q"]), r["method"]]
        vals += [_F(r[c]) for c in cols[2:]]
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def _emit(text: str, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="concentra",
        description="Concentration of grid/torus p-norms of idempotent "
                    "trigonometric polynomials: constants, searches, "
                    "rounding and torus constructions.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None,
                        help="record/cache directory (default: "
                             "$CONCENTRA_CACHE or ./.concentra-cache)")
    common.add_argument("--output", default=None, help="also write output to file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)

    sub.add_parser("constants", parents=[common],
                   help="reproduce the named constants; exit 4 on any failure")

    c = sub.add_parser("curve", parents=[common], help="CSV dump of B or A over t")
    c.add_argument("--which", choices=["B", "A"], required=True)
    c.add_argument("--lam", type=float, required=True)
    c.add_argument("--t-min", type=float, default=0.01)
    c.add_argument("--t-max", type=float, default=0.5)
    c.add_argument("--points", type=int, default=50)
    c.add_argument("--tol", type=float, default=1e-10)

    s = sub.add_parser("search", parents=[common],
                       help="finite-group concentration search (cached)")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--mode", choices=["auto", "exhaustive", "heuristic", "star"],
                   default="auto")
    s.add_argument("--K", type=float, default=1e4)
    s.add_argument("--restarts", type=int, default=4)
    s.add_argument("--k-sensitivity", action="store_true",
                   help="star mode: also report the level at K/10 and 10K")
    s.add_argument("--no-cache", action="store_true")

    r = sub.add_parser("round", parents=[common],
                       help="randomized rounding experiment on a folded kernel power")
    r.add_argument("--q", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--L", type=int, required=True)
    r.add_argument("--p", type=float, required=True)
    r.add_argument("--epsilon", type=float, required=True)
    r.add_argument("--trials", type=int, default=200)

    k = sub.add_parser("concentrate", parents=[common],
                       help="torus construction concentrating on an interval set")
    k.add_argument("--e-file", required=True,
                   help='JSON file {"intervals": [[lo, hi], ...]}')
    k.add_argument("--p", type=float, required=True)
    k.add_argument("--epsilon", type=float, required=True)
    k.add_argument("--theta", type=float, default=0.5)
    k.add_argument("--eta", type=float, default=0.05)
    k.add_argument("--nu", type=int, default=1)
    k.add_argument("--q0", type=int, default=8)
    k.add_argument("--q-max", type=int, default=4000)
    k.add_argument("--mesh", type=int, default=8)
    k.add_argument("--allow-asymmetric", action="store_true")
    k.add_argument("--trace", default=None,
                   help="write a CSV of examined (q, a, coverage) candidates")

    d = sub.add_parser("decay", parents=[common],
                       help="integral-norm level decay table over primes")
    d.add_argument("--primes", default=None, help="comma-separated primes")
    d.add_argument("--primes-up-to", type=int, default=None)
    d.add_argument("--exhaustive-cap", type=int, default=19)
    d.add_argument("--restarts", type=int, default=4)

    rp = sub.add_parser("replay", parents=[common],
                        help="re-run a RunRecord and verify outputs bit-identically")
    rp.add_argument("record", help="path to a RunRecord JSON file")
    return ap


def _primes_up_to(n: int):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i:: i] = False
    return [int(i) for i in np.nonzero(sieve)[0] if i >= 3]


def _inputs_from_args(args) -> dict:
    if args.cmd == "constants":
        return {}
    if args.cmd == "curve":
        return {"which": args.which, "lam": args.lam, "t_min": args.t_min,
                "t_max": args.t_max, "points": args.points, "tol": args.tol}
    if args.cmd == "search":
        return {"q": args.q, "p": args.p, "mode": args.mode, "K": args.K,
                "restarts": args.restarts, "seed": args.seed,
                "workers": args.workers,
                "k_sensitivity": args.k_sensitivity}
    if args.cmd == "round":
        return {"q": args.q, "n": args.n, "L": args.L, "p": args.p,
                "epsilon": args.epsilon, "trials": args.trials,
                "seed": args.seed}
    if args.cmd == "concentrate":
        spec = json.loads(open(args.e_file).read())
        if "intervals" not in spec:
            raise DomainError("E file must carry an 'intervals' array")
        return {"intervals": spec["intervals"], "p": args.p,
                "epsilon": args.epsilon, "theta": args.theta, "eta": args.eta,
                "nu": args.nu, "q0": args.q0, "q_max": args.q_max,
                "mesh": args.mesh, "allow_asymmetric": args.allow_asymmetric,
                "trace_path": args.trace, "seed": args.seed}
    if args.cmd == "decay":
        if args.primes:
            primes = [int(x) for x in args.primes.split(",") if x.strip()]
        elif args.primes_up_to:
            primes = _primes_up_to(args.primes_up_to)
        else:
            raise DomainError("need --primes or --primes-up-to")
        return {"primes": primes, "exhaustive_cap": args.exhaustive_cap,
                "restarts": args.restarts, "seed": args.seed,
                "workers": args.workers}
    raise DomainError(f"unknown command {args.cmd}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cache_dir = args.cache_dir or default_cache_dir()
    try:
        if args.cmd == "replay":
            rec = load_record(args.record)
            runner = _RUNNERS[rec["command"]]
            fresh = runner(rec["inputs"])
            same = canonical_json(fresh) == canonical_json(rec["outputs"])
            sys.stdout.write(json.dumps({
                "command": rec["command"], "config_hash": rec["config_hash"],
                "match": same}, indent=2) + "\n")
            return EXIT_OK if same else EXIT_MISMATCH

        inputs = _inputs_from_args(args)
        seed = getattr(args, "seed", 0)
        t0 = time.time()

        if args.cmd == "search" and not args.no_cache:
            cache = ResultsCache(cache_dir)
            key = config_hash("search",
                              {k: v for k, v in inputs.items() if k != "workers"},
                              seed)
            hit = cache.get(key)
            if hit is not None:
                payload = dict(hit)
                payload["cached"] = True
                _emit(json.dumps(round_floats(to_jsonable(payload)), indent=2)
                      + "\n", args.output)
                return EXIT_OK

        payload = _RUNNERS[args.cmd](inputs)
        wall = time.time() - t0
        write_record(cache_dir, args.cmd, inputs, payload, wall, seed)
        if args.cmd == "search" and not args.no_cache:
            ResultsCache(cache_dir).put(
                config_hash("search",
                            {k: v for k, v in inputs.items() if k != "workers"},
                            seed), payload)

        if args.cmd == "curve":
            _emit(_curve_csv(payload), args.output)
        elif args.cmd == "decay":
            _emit(_decay_csv(payload), args.output)
        else:
            _emit(json.dumps(round_floats(to_jsonable(payload)), indent=2) + "\n",
                  args.output)
        if args.cmd == "constants" and not payload["all_passed"]:
            return EXIT_ACCEPT
        return EXIT_OK
    except DomainError as e:
        sys.stderr.write(f"domain error: {e}\n")
        return EXIT_DOMAIN
    except BudgetError as e:
        sys.stderr.write(f"budget error: {e}\n")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
