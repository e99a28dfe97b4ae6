"""Command line interface: encode, recover, verify and selftest."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from .frs import EnumerationLimit, FrsCode, encode, new_frs
from .instance import ListRecoveryInstance
from .prune import PruneParams
from .recovery import (STEP1_MODES, WHOLE_CODE, RecoveryConfig, frs_theorem_params,
                       planted_instance, recover, report)
from .verify import (audit_monotonicity, bounds_table, estimate_ahs_success,
                     estimate_fprune_success, estimate_uniform_success, format_table,
                     structured_subspace, verify_design)
from .vspace import affine

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"


def write_atomic(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def code_from_args(args) -> FrsCode:
    try:
        return new_frs(args.q, args.n, args.k, args.s)
    except ValueError as exc:
        raise UsageError(f"invalid code parameters: {exc}")


def add_code_args(p):
    p.add_argument("--q", type=int, default=37, help="prime field size")
    p.add_argument("--n", type=int, default=8, help="number of folded coordinates")
    p.add_argument("--k", type=int, default=4, help="message length (polynomial degree < k)")
    p.add_argument("--s", type=int, default=4, help="folding parameter")


def cmd_encode(args) -> int:
    code = code_from_args(args)
    if args.message is not None:
        msg = json.loads(Path(args.message).read_text())
    else:
        msg = [int(x) for x in args.values.split(",")] if args.values else [0] * code.k
    if len(msg) != code.k:
        raise UsageError(f"message must have k={code.k} entries, got {len(msg)}")
    if any(not isinstance(x, int) or not 0 <= x < code.q for x in msg):
        raise UsageError(f"message entries must be integers in [0, {code.q})")
    flat = encode(code, msg)
    word = [list(flat[i * code.s:(i + 1) * code.s]) for i in range(code.n)]
    write_atomic(args.out, json.dumps(word) + "\n")
    return EXIT_OK


def _config(args, code: FrsCode, ell: int) -> RecoveryConfig:
    if args.epsilon is not None:
        try:
            th = frs_theorem_params(code.rate, args.epsilon, ell, args.t_prime)
        except ValueError as exc:
            raise UsageError(str(exc))
        if code.s < th.s0:
            print(f"warning: s={code.s} is below s0={th.s0}; the guarantees need s >= s0",
                  file=sys.stderr)
        eta, eta_prime, r = th.eta, th.eta_prime, th.r
    else:
        if args.eta is None or args.eta_prime is None:
            raise UsageError("give either --epsilon or both --eta and --eta-prime")
        eta, eta_prime, r = args.eta, args.eta_prime, args.r
    try:
        return RecoveryConfig(eta, eta_prime, r=r, t=args.t, t_prime=args.t_prime,
                              seed=args.seed, step1_mode=args.mode,
                              exact_filter=args.exact_filter)
    except ValueError as exc:
        raise UsageError(f"invalid recovery parameters: {exc}")


def cmd_recover(args) -> int:
    code = code_from_args(args)
    planted = []
    if args.instance:
        try:
            inst = ListRecoveryInstance.from_json(json.loads(Path(args.instance).read_text()))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad instance file: {exc}")
        if inst.n != code.n:
            raise UsageError(f"instance has {inst.n} lists but the code has n={code.n}")
    else:
        if not 0 <= args.planted <= args.ell:
            raise UsageError("need 0 <= --planted <= --ell")
        rng = np.random.default_rng([args.seed, 0])
        inst, planted = planted_instance(code, args.ell, args.planted, args.noise, rng)
    cfg = _config(args, code, inst.ell)
    try:
        out = recover(code, inst, cfg)
    except EnumerationLimit as exc:
        print(f"step 1 infeasible: {exc}; use --mode whole-code", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        raise UsageError(str(exc))
    doc = report(code, inst, cfg, out, planted)
    doc["instance"] = inst.to_json()
    if args.format == "table":
        text = (f"dim={out.dim} t={out.t} sumsets={len(out.sumsets)} "
                f"failed_runs={out.stats.get('failed_runs', 0)} "
                f"distinct={out.stats.get('distinct_sumsets', 0)} "
                f"planted_covered={doc['coverage']['covered']}\n")
    else:
        text = dump(doc)
    write_atomic(args.out, text)
    return EXIT_OK


def _emit(args, doc, rows=None, columns=None):
    if args.format == "table" and rows is not None:
        write_atomic(args.out, format_table(rows, columns) + "\n")
    else:
        write_atomic(args.out, dump(doc))


def cmd_verify_design(args) -> int:
    code = code_from_args(args)
    if not 1 <= args.r <= code.k:
        raise UsageError(f"need 1 <= r <= k={code.k}")
    rep = verify_design(code, args.r, args.mode, samples=args.samples, seed=args.seed,
                        tau_scale=args.tau_scale)
    doc = rep.to_json()
    _emit(args, doc, [doc], ["r", "mode", "subspaces_checked", "max_statistic", "bound", "passed"])
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_verify_prune_stats(args) -> int:
    code = code_from_args(args)
    if not 1 <= args.r <= code.k:
        raise UsageError(f"need 1 <= r <= k={code.k}")
    rng = np.random.default_rng([args.seed, 1])
    H = structured_subspace(code, args.r, rng)
    inst, (c,) = planted_instance(code, args.ell, 1, args.noise, rng, space=H)
    try:
        params = PruneParams(args.eta, args.eta_prime)
    except ValueError as exc:
        raise UsageError(str(exc))
    reports = [estimate_fprune_success(code, H, c, inst, params, args.trials, seed=args.seed)]
    # affine variant: corrupt one coordinate of c and prune towards it
    y = list(c)
    for j in range(code.s):
        y[j] = (y[j] + 1) % code.q
    A = affine(tuple(0 for _ in c), H)
    reports.append(estimate_ahs_success(code, A, y, c, args.epsilon, args.trials, seed=args.seed))
    reports.append(estimate_uniform_success(code, A, y, c, args.epsilon, args.trials, seed=args.seed))
    docs = [r.to_json() for r in reports]
    _emit(args, {"estimators": docs}, docs,
          ["name", "trials", "estimate", "floor", "z_margin", "hypothesis_ok", "passed"])
    return EXIT_FAILED if any(r.passed is False for r in reports) else EXIT_OK


def cmd_verify_monotonicity(args) -> int:
    code = code_from_args(args)
    try:
        params = PruneParams(args.eta, args.eta_prime)
    except ValueError as exc:
        raise UsageError(str(exc))
    rep = audit_monotonicity(code, max_dim=min(args.r, code.k), instances=args.instances,
                             seed=args.seed, params=params, ell=args.ell)
    _emit(args, rep, [rep], ["checked", "excluded", "tight", "min_gap", "passed"])
    return EXIT_OK if rep["passed"] else EXIT_FAILED


def cmd_verify_bounds(args) -> int:
    code = code_from_args(args)
    grid = args.epsilon_grid or [Fraction(1, 8), Fraction(1, 4), Fraction(3, 8)]
    rows = bounds_table(code, args.ell, grid, instances=args.instances, seed=args.seed)
    _emit(args, {"rows": rows}, rows,
          ["epsilon", "r", "tau", "exact_max", "bound_list_size", "bound_bcz", "exact_le_bcz"])
    return EXIT_FAILED if any(r.get("exact_le_bcz") is False for r in rows) else EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import CRITERIA, DEFAULT_SEED, run_all

    if args.list:
        for cid, fn in CRITERIA.items():
            doc = (fn.__doc__ or "").strip()
            print(f"{cid} {fn.__name__}" + (f": {doc}" if doc else ""))
        return EXIT_OK
    only = args.only.split(",") if args.only else None
    if only and any(c not in CRITERIA for c in only):
        raise UsageError(f"unknown criterion in {args.only!r}")
    results = run_all(DEFAULT_SEED if args.seed is None else args.seed, only)
    for res in results:
        print(res.line())
    if args.out:
        write_atomic(args.out, dump([{"id": r.id, "title": r.title, "passed": r.passed,
                                      "seconds": r.seconds, "detail": r.detail} for r in results]))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="listrec",
                                     description="List recovery of folded Reed-Solomon codes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a message")
    add_code_args(p)
    p.add_argument("--message", help="JSON file with k field elements")
    p.add_argument("--values", help="comma separated message, alternative to --message")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("recover", help="run the pruning + sum-set recovery pipeline")
    add_code_args(p)
    p.add_argument("--instance", help="instance JSON; otherwise a planted one is generated")
    p.add_argument("--ell", type=int, default=2, help="list size for generated instances")
    p.add_argument("--planted", type=int, default=1, help="planted codewords")
    p.add_argument("--noise", type=fraction, default=Fraction(1, 8),
                   help="fraction of coordinates where each planted codeword misses its list")
    p.add_argument("--epsilon", type=fraction, help="derive eta, eta', r from the slack epsilon")
    p.add_argument("--r", type=int, help="dimension budget")
    p.add_argument("--eta", type=fraction)
    p.add_argument("--eta-prime", type=fraction)
    p.add_argument("--t", type=int, help="repetitions (default derived)")
    p.add_argument("--t-prime", type=fraction, default=Fraction(1))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=STEP1_MODES, default=WHOLE_CODE)
    p.add_argument("--exact-filter", action="store_true",
                   help="enumerate the sum-sets and keep codewords within delta")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_recover)

    verify = sub.add_parser("verify", help="property checks")
    vsub = verify.add_subparsers(dest="check", required=True)

    p = vsub.add_parser("design", help="subspace-design statistic")
    add_code_args(p)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tau-scale", type=fraction, default=Fraction(1), help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_design)

    p = vsub.add_parser("prune-stats", help="Monte Carlo success of the pruners")
    add_code_args(p)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--noise", type=fraction, default=Fraction(1, 8))
    p.add_argument("--eta", type=fraction, default=Fraction(1, 4))
    p.add_argument("--eta-prime", type=fraction, default=Fraction(1, 8))
    p.add_argument("--epsilon", type=fraction, default=Fraction(1, 4))
    p.add_argument("--trials", type=int, default=2000)
    p.set_defaults(func=cmd_verify_prune_stats)

    p = vsub.add_parser("monotonicity", help="exact potential audit")
    add_code_args(p)
    p.add_argument("--r", type=int, default=4, help="largest subspace dimension")
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--eta", type=fraction, default=Fraction(1, 4))
    p.add_argument("--eta-prime", type=fraction, default=Fraction(1, 8))
    p.set_defaults(func=cmd_verify_monotonicity)

    p = vsub.add_parser("bounds", help="exact list sizes against the list-size bounds")
    add_code_args(p)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--epsilon-grid", type=fraction, nargs="+")
    p.set_defaults(func=cmd_verify_bounds)

    for p in vsub.choices.values():
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--out")

    p = sub.add_parser("selftest", help="run the fixed-seed acceptance corpus")
    p.add_argument("--list", action="store_true", help="list criteria and exit")
    p.add_argument("--only", help="comma separated criterion ids, e.g. C1,C4")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write a JSON summary")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
