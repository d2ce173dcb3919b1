"""Command-line front end: ``rhombic <verb> [subverb] [flags]``.

Exit codes: 0 success (including passing verifications), 1 failed
verification, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import asep, moments, tableaux, transfer
from .algebra import Polynomial, format_rational, parse_rational

PARAM_NAMES = ("alpha", "beta", "gamma", "delta", "q", "u")


class UsageError(Exception):
    pass


# -- flag parsing -------------------------------------------------------------

def parse_type_flag(text: str) -> tuple[int, ...]:
    try:
        tau = tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise UsageError(f"--type: expected a comma list over 0,1,2, got {text!r}") from None
    if not tau or any(x not in (0, 1, 2) for x in tau):
        raise UsageError(f"--type: expected a comma list over 0,1,2, got {text!r}")
    return tau


def parse_size_flag(text: str) -> tuple[int, int]:
    try:
        n, r = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--size: expected 'N,r', got {text!r}") from None
    if not 0 <= r <= n:
        raise UsageError(f"--size: need 0 <= r <= N, got {text!r}")
    return n, r


def parse_params_flag(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"--params: expected name=value, got {part!r}")
        name, val = (s.strip() for s in part.split("=", 1))
        if name not in PARAM_NAMES:
            raise UsageError(f"--params: unknown parameter {name!r}")
        try:
            out[name] = parse_rational(val)
        except (ValueError, ZeroDivisionError) as e:
            raise UsageError(f"--params: {name}: {e}") from None
    return out


def parse_rational_flag(flag: str, text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"{flag}: {e}") from None


def require(args, *flags):
    for f in flags:
        if getattr(args, f.lstrip("-").replace("-", "_")) is None:
            raise UsageError(f"{f} is required for this command")


def require_params(params: dict, names=PARAM_NAMES) -> dict:
    missing = [n for n in names if n not in params]
    if missing:
        raise UsageError(f"--params: missing {', '.join(missing)}")
    return params


# -- output -------------------------------------------------------------------

def emit(obj, fmt: str, text_lines=None, csv_text=None):
    if fmt == "json":
        print(json.dumps(obj, indent=2, ensure_ascii=False))
    elif fmt == "csv":
        if csv_text is None:
            raise UsageError("--format: csv is not available for this command")
        sys.stdout.write(csv_text)
    else:
        for line in (text_lines if text_lines is not None else [json.dumps(obj, ensure_ascii=False)]):
            print(line)


def poly_out(p: Polynomial):
    return {"text": str(p), "terms": p.to_json()}


def value_out(v):
    return format_rational(v) if isinstance(v, Fraction) else poly_out(v)


# -- commands -----------------------------------------------------------------

def cmd_tableaux(args):
    if args.subverb == "enumerate":
        require(args, "--type")
        tau = parse_type_flag(args.type)
        ts = tableaux.enumerate_tableaux(tau)
        ts.sort(key=lambda t: (t.weight().exponents, tuple(l.value for l in t.labels)))
        recs = [t.to_json() for t in ts]
        lines = [f"{t.weight()}\t" + " ".join(l.value for l in t.labels) for t in ts]
        emit(recs, args.format, lines)
        return 0
    # count
    if args.type is not None:
        tau = parse_type_flag(args.type)
        n = tableaux.count_tableaux(tau)
        emit({"type": list(tau), "count": n}, args.format, [str(n)])
        return 0
    require(args, "--size")
    n, r = parse_size_flag(args.size)
    census = tableaux.q1_census(n, r)
    out = {"N": n, "r": r, "count": census["count"],
           "formula": tableaux.tableau_count_formula(n, r),
           "q1_closed_form_match": census["closed_form_match"]}
    emit(out, args.format, [str(out["count"])])
    return 0


def _bindings(params: dict, xi):
    b = dict(params)
    if xi is not None:
        b["xi"] = xi
    return b


def cmd_partition(args):
    require(args, "--size")
    n, r = parse_size_flag(args.size)
    params = parse_params_flag(args.params)
    xi = parse_rational_flag("--xi", args.xi)
    z = tableaux.partition_function(n, r, track_xi=True)
    b = _bindings(params, xi)
    val = z.substitute(b) if b else z
    out = {"N": n, "r": r, "value": value_out(val)}
    emit(out, args.format, [str(val)])
    return 0


def _chain_spec(args) -> asep.ChainSpec:
    require(args, "--size", "--params")
    n, r = parse_size_flag(args.size)
    params = require_params(parse_params_flag(args.params))
    return asep.ChainSpec(n, r, params)


def _dist_lines(dist):
    return ["".join(map(str, s)) + "\t" + (format_rational(p) if isinstance(p, Fraction) else f"{p:.12g}")
            for s, p in zip(dist.states, dist.probs)]


def cmd_stationary(args):
    if args.subverb == "exact":
        spec = _chain_spec(args)
        dist = asep.stationary_exact(spec)
        emit(dist.to_json(), args.format, _dist_lines(dist), dist.to_csv())
        return 0
    # formula
    if args.params:
        spec = _chain_spec(args)
        dist = asep.tableaux_distribution(spec)
        emit(dist.to_json(), args.format, _dist_lines(dist), dist.to_csv())
        return 0
    require(args, "--size")
    n, r = parse_size_flag(args.size)
    weights = asep.tableaux_stationary(n, r)
    out = {"".join(map(str, s)): poly_out(p) for s, p in weights.items()}
    lines = ["".join(map(str, s)) + "\t" + str(p) for s, p in weights.items()]
    emit(out, args.format, lines)
    return 0


def _identity_job(job):
    name, ranges = job
    return transfer.verify_identity(name, ranges).to_json()


def cmd_verify(args):
    sub = args.subverb
    if sub == "ansatz":
        max_norm = args.max_norm if args.max_norm is not None else 6
        rep = asep.verify_ansatz(max_norm)
        bad = len(rep["counterexamples"])
        head = f"{'PASS' if rep['pass'] else 'FAIL'} relations I–V, {bad} counterexamples"
        emit(rep, args.format, [head] + [json.dumps(c, ensure_ascii=False) for c in rep["counterexamples"]])
        return 0 if rep["pass"] else 1
    if sub == "identities":
        names = args.identity.split(",") if args.identity else list(transfer.IDENTITIES)
        unknown = [n for n in names if n not in transfer.IDENTITIES]
        if unknown:
            raise UsageError(f"--identity: unknown identity {', '.join(unknown)}")
        ranges = {}
        for key in ("max_index", "max_t", "max_word", "max_norm"):
            v = getattr(args, key)
            if v is not None:
                ranges[key] = v
        jobs = [(n, ranges) for n in names]
        threads = args.threads or os.cpu_count() or 1
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as ex:
                reports = list(ex.map(_identity_job, jobs))
        else:
            reports = [_identity_job(j) for j in jobs]
        ok = all(r["pass"] for r in reports)
        lines = [f"{'PASS' if r['pass'] else 'FAIL'} {r['name']} ({r['checked']} checks, "
                 f"{len(r['counterexamples'])} counterexamples)" for r in reports]
        emit({"pass": ok, "identities": reports}, args.format, lines)
        return 0 if ok else 1
    if sub == "stationarity":
        require(args, "--size")
        n, r = parse_size_flag(args.size)
        rep = asep.verify_stationarity_symbolic(n, r)
        lines = [f"{'PASS' if rep['pass'] else 'FAIL'} balance for {rep['states']} states (N={n}, r={r})"]
        emit(rep, args.format, lines)
        return 0 if rep["pass"] else 1
    # moments
    require(args, "--size")
    n, r = parse_size_flag(args.size)
    seed = args.seed if args.seed is not None else 0
    rep = moments.cross_check(n, r, args.trials, seed)
    ok = rep["positivity"] and all(t["equal"] for t in rep["trials"])
    lines = [f"{'PASS' if t['equal'] else 'FAIL'} det={t['det']} tableaux={t['tableaux']}" for t in rep["trials"]]
    lines.append(f"{'PASS' if rep['positivity'] else 'FAIL'} positivity of Z_{{{n},{r}}}")
    emit(rep, args.format, lines)
    return 0 if ok else 1


def cmd_moment(args):
    require(args, "--size", "--params", "--xi")
    n, r = parse_size_flag(args.size)
    params = require_params(parse_params_flag(args.params), moments.GREEK)
    xi = parse_rational_flag("--xi", args.xi)
    spec = moments.MomentSpec(n, r, xi, params)
    out = {"N": n, "r": r, "xi": format_rational(xi)}
    if args.method in ("det", "both"):
        out["det"] = format_rational(moments.moment_det(spec))
    if args.method in ("tableaux", "both"):
        out["tableaux"] = format_rational(moments.moment_tableaux(spec))
    lines = [f"{k}\t{out[k]}" for k in ("det", "tableaux") if k in out]
    emit(out, args.format, lines)
    return 0


def cmd_simulate(args):
    spec = _chain_spec(args)
    if args.steps is None or args.steps < 0:
        raise UsageError("--steps: a non-negative integer is required")
    seed = args.seed if args.seed is not None else 0
    res = asep.mc_simulate(spec, args.steps, seed)
    emp = res["empirical"]
    out = {"N": spec.N, "r": spec.r, "steps": args.steps, "seed": seed,
           "empirical": emp.to_json(), "tv_distance": res["tv_distance"]}
    lines = _dist_lines(emp) + [f"tv_distance\t{res['tv_distance']:.6g}"]
    emit(out, args.format, lines, emp.to_csv())
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes for sweeps (default: all cores)")

    p = argparse.ArgumentParser(prog="rhombic", description="Rhombic staircase tableaux and the two-species ASEP.")
    verbs = p.add_subparsers(dest="verb", required=True)

    t = verbs.add_parser("tableaux", parents=[common], help="enumerate or count tableaux")
    t.add_argument("subverb", choices=("enumerate", "count"))
    t.add_argument("--type")
    t.add_argument("--size")
    t.set_defaults(func=cmd_tableaux)

    z = verbs.add_parser("partition", parents=[common], help="fugacity partition function")
    z.add_argument("--size")
    z.add_argument("--params")
    z.add_argument("--xi")
    z.set_defaults(func=cmd_partition)

    s = verbs.add_parser("stationary", parents=[common], help="stationary distribution")
    s.add_argument("subverb", choices=("exact", "formula"))
    s.add_argument("--size")
    s.add_argument("--params")
    s.set_defaults(func=cmd_stationary)

    v = verbs.add_parser("verify", parents=[common], help="run a verification sweep")
    v.add_argument("subverb", choices=("ansatz", "identities", "stationarity", "moments"))
    v.add_argument("--size")
    v.add_argument("--max-norm", type=int)
    v.add_argument("--max-index", type=int)
    v.add_argument("--max-t", type=int)
    v.add_argument("--max-word", type=int)
    v.add_argument("--identity", help="comma list of identity names (default: all)")
    v.add_argument("--trials", type=int, default=5)
    v.add_argument("--seed", type=int)
    v.set_defaults(func=cmd_verify)

    m = verbs.add_parser("moment", parents=[common], help="homogeneous Koornwinder moment")
    m.add_argument("--size")
    m.add_argument("--params")
    m.add_argument("--xi")
    m.add_argument("--method", choices=("det", "tableaux", "both"), default="both")
    m.set_defaults(func=cmd_moment)

    sim = verbs.add_parser("simulate", parents=[common], help="Monte Carlo run of the chain")
    sim.add_argument("--size")
    sim.add_argument("--params")
    sim.add_argument("--steps", type=int)
    sim.add_argument("--seed", type=int)
    sim.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads: must be at least 1")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"rhombic: error: {e}", file=sys.stderr)
        return 2
    except (moments.PoleError, moments.SingularDenominatorError, asep.ReducibleChainError, ValueError) as e:
        print(f"rhombic {args.verb}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
