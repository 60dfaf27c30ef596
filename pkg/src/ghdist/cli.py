"""Command-line interface.

    ghdist dist exact A.space B.space
    ghdist verify metric-axioms --seed 1 --trials 100
    ghdist demo density
    ghdist generate ngon -n 8 -o C8.space

Reports are JSON on stdout (and ``report.json`` under ``--out``). Exit codes:
0 success, 1 a verification check failed, 2 invalid input, 3 node budget
exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import List, Optional

from . import demos, suites
from .correspondences import OracleTooLarge, gh_exact, gh_exact_oracle, gh_lower_bound
from .embed_linf import align_upper_bound
from .generators import KINDS, generate_space
from .maps import BudgetExhausted, EnumerationTooLarge, edwards_dE, hat_dGH
from .metric_core import TOL_METRIC, MetricError
from .spacefile import SpaceFileError, dumps_space, load_space, space_to_dict

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3
DIST_KINDS = ("exact", "oracle", "lower", "edwards", "hat", "embed-bound")


def _digest(*parts: bytes) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(hashlib.sha256(p).digest())
    return h.hexdigest()


def _emit(report: dict, args, started: float) -> None:
    report["wall_time"] = round(time.perf_counter() - started, 6)
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text + "\n")


def cmd_dist(args) -> int:
    X = load_space(args.X, args.tol)
    Y = load_space(args.Y, args.tol)
    digest = _digest(Path(args.X).read_bytes(), Path(args.Y).read_bytes())
    result: dict = {"sizes": [X.n, Y.n]}
    code = EXIT_OK
    kind = args.kind
    if kind == "exact":
        res = gh_exact(X, Y, budget=args.budget)
        result.update(res.to_dict())
        if res.truncated:
            code = EXIT_BUDGET
    elif kind == "oracle":
        result.update(gh_exact_oracle(X, Y).to_dict())
    elif kind == "lower":
        result["value"] = gh_lower_bound(X, Y)
    elif kind == "edwards":
        try:
            result["value"] = edwards_dE(X, Y, budget=args.budget)
            result["attained"] = True
        except BudgetExhausted as exc:
            result.update(value=exc.value, lower_bound=exc.lower_bound, truncated=True)
            code = EXIT_BUDGET
    elif kind == "hat":
        result.update(hat_dGH(X, Y).to_dict())
    elif kind == "embed-bound":
        result["value"] = align_upper_bound(X, Y, args.restarts, args.seed, args.threads)
        result["restarts"] = args.restarts
    report = {
        "command": ["dist", kind, str(args.X), str(args.Y)],
        "inputs_digest": digest,
        "result": result,
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "X.space").write_text(dumps_space(X))
        (out / "Y.space").write_text(dumps_space(Y))
    _emit(report, args, args._started)
    return code


def cmd_verify(args) -> int:
    args.suite = suites.ALIASES.get(args.suite, args.suite)
    fn = suites.SUITES[args.suite]
    kwargs = {"seed": args.seed}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    rep = fn(**kwargs)
    report = {
        "command": ["verify", args.suite, "--seed", str(args.seed), "--trials", str(rep.trials)],
        "inputs_digest": _digest(f"{args.suite}:{args.seed}:{rep.trials}".encode()),
        "result": rep.to_dict(),
    }
    _emit(report, args, args._started)
    for name, counts in rep.summary().items():
        status = "PASS" if counts["failed"] == 0 else "FAIL"
        print(f"{status} {args.suite}: {name} ({counts['passed']}/{counts['passed'] + counts['failed']})",
              file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_demo(args) -> int:
    out_dir = Path(args.out) if args.out else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    if args.demo == "density":
        levels = [n for n in (4, 8, 16, 32, 64, 128) if 2 * n <= args.max_n]
        result = demos.density_demo(levels, budget=args.budget, chord=args.chord, out_dir=out_dir)
        ok = result["monotone_upper_bound"] and result["monotone_exact"] is not False
        digest = _digest(f"density:{args.max_n}:{args.chord}".encode())
    else:
        if args.space:
            X = load_space(args.space, args.tol)
            digest = _digest(Path(args.space).read_bytes())
        else:
            X = generate_space("random", args.n, args.seed)
            digest = _digest(f"contract:random:{args.n}:{args.seed}".encode())
        result = demos.contract_demo(X, out_dir=out_dir)
        result["space"] = space_to_dict(X)
        ok = result["to_point_exact"] and result["to_X_matches"]
    report = {"command": ["demo", args.demo], "inputs_digest": digest, "result": result}
    _emit(report, args, args._started)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_generate(args) -> int:
    X = generate_space(args.kind, args.n, args.seed, chord=args.chord)
    text = dumps_space(X)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--budget", type=int, default=None, help="node limit for branch-and-bound")
    common.add_argument("--tol", type=float, default=TOL_METRIC, help="triangle-inequality tolerance")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default=None, help="directory for report.json and intermediate spaces")

    parser = argparse.ArgumentParser(prog="ghdist", description="Gromov-Hausdorff distances between finite metric spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[common], help="compute a distance between two space files")
    p.add_argument("kind", choices=DIST_KINDS)
    p.add_argument("X")
    p.add_argument("Y")
    p.add_argument("--restarts", type=int, default=8, help="random restarts for embed-bound")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("verify", parents=[common], help="run a seeded property suite")
    p.add_argument("suite", choices=sorted(suites.SUITES) + sorted(suites.ALIASES))
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", parents=[common], help="desk-scale demonstration tables")
    p.add_argument("demo", choices=("density", "contract"))
    p.add_argument("--max-n", type=int, default=64, help="density: largest circle size")
    p.add_argument("--chord", action="store_true", help="density: chord instead of arc metric")
    p.add_argument("--space", default=None, help="contract: base space file (default random)")
    p.add_argument("-n", type=int, default=5, help="contract: size of the random base space")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("generate", help="write a generated space file")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--chord", action="store_true")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._started = time.perf_counter()
    try:
        return args.func(args)
    except (SpaceFileError, MetricError, OracleTooLarge, EnumerationTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
