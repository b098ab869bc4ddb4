"""Command line front end.

Four verbs: ``compute`` prints one deformed quantity of a single
operator, ``verify`` runs a seeded soundness campaign over the bound
registry, ``reference-checks`` replays three fixed block-matrix
instances with known exact values, and ``explore`` searches two bounds
for incomparability witnesses in both directions.

Exit codes are part of the interface: 0 success, 1 a bound violation or
reference mismatch, 2 membership failure, 3 unusable flags or input.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict

import numpy as np

from . import __version__
from ._records import BoundParams, ScalarFnPair
from .catalog import THEOREM_IDS, THEOREMS, evaluate
from .errors import BadConfig, MatrixFormatError, NotAMember, SemiopError, UnknownTheorem
from .generate import GenConfig, gen_instance, gen_metric, mix64
from .metric import (
    Metric,
    a_abs,
    a_num_radius,
    a_seminorm,
    a_spec_radius,
    compress,
    in_b_a,
    sharp,
)

TOL_ENV = "SEMIOP_TOL"
QUANTITIES = ("a-norm", "a-wnum", "a-srad", "a-abs", "sharp", "compress", "membership")

CLAIMED_PAIRS = (
    frozenset(("FULL_W_1", "FULL_W_2")),
    frozenset(("OFFDIAG_FG", "OFFDIAG_2FG")),
    frozenset(("NXN_S", "NXN_R")),
)


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1e-8
    try:
        tol = float(raw)
    except ValueError as exc:
        raise BadConfig(f"{TOL_ENV} must be a number, got {raw!r}") from exc
    if not tol > 0:
        raise BadConfig(f"{TOL_ENV} must be positive, got {raw!r}")
    return tol


def _sig(value: float) -> float:
    """Round-trip a float through 15 significant digits."""
    return float(f"{value:.15g}")


def load_matrix(path: str) -> np.ndarray:
    """Read the shared interchange format: rows, cols, data = [re, im] pairs."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not {"rows", "cols", "data"} <= set(doc):
        raise MatrixFormatError(f"{path} must be an object with rows, cols, data")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise MatrixFormatError(f"{path}: rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(f"{path}: data must hold exactly rows*cols entries")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, entry in enumerate(data):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise MatrixFormatError(f"{path}: data[{i}] is not an [re, im] pair")
        re, im = entry
        if not all(isinstance(v, (int, float)) and np.isfinite(v) for v in (re, im)):
            raise MatrixFormatError(f"{path}: data[{i}] has a non-finite component")
        out[i] = complex(re, im)
    return out.reshape(rows, cols)


def dump_matrix(M: np.ndarray) -> str:
    data = [[_sig(v.real), _sig(v.imag)] for v in np.asarray(M, dtype=np.complex128).ravel()]
    return json.dumps({"rows": M.shape[0], "cols": M.shape[1], "data": data})


def cmd_compute(args: argparse.Namespace) -> int:
    metric = Metric(load_matrix(args.metric))
    T = load_matrix(args.operator)
    quantity = args.quantity
    if quantity == "membership":
        cert = in_b_a(metric, T)
        print(json.dumps({"member": bool(cert.member), "residual": _sig(cert.residual)}))
        return 0 if cert.member else 2
    if quantity in ("a-norm", "a-wnum", "a-srad"):
        fn = {"a-norm": a_seminorm, "a-wnum": a_num_radius, "a-srad": a_spec_radius}[quantity]
        print(f"{fn(metric, T):.15g}")
        return 0
    fn = {"a-abs": a_abs, "sharp": sharp, "compress": compress}[quantity]
    print(dump_matrix(fn(metric, T)))
    return 0


def _trial_record(theorem_id: str, master_seed: int, trial: int, dim_max: int,
                  rank: int | None, blocks: int, tol: float) -> dict:
    """One campaign trial: derive a config, generate, evaluate, serialize.

    The stream is keyed by the registry position, so a single-theorem run
    reproduces exactly the records that theorem gets inside a full run.
    """
    h = mix64(mix64(master_seed, THEOREM_IDS.index(theorem_id) + 1), trial)
    if rank is None:
        dim = 1 + h % dim_max
        metric_rank = 1 + (h >> 20) % dim
    else:
        dim = rank + h % (dim_max - rank + 1)
        metric_rank = rank
    config = GenConfig(
        dim=dim,
        metric_rank=metric_rank,
        seed=h,
        repeat_eigs=((h >> 40) & 3) == 0,
        blocks=blocks,
    )
    metric = gen_metric(config)
    ops = gen_instance(theorem_id, config, metric=metric)
    record = evaluate(theorem_id, metric, ops, tol=tol, seed=h).asdict()
    digest = hashlib.sha256()
    for name in sorted(ops):
        digest.update(name.encode())
        digest.update(np.ascontiguousarray(ops[name]).tobytes())
    record["trial"] = trial
    record["config"] = asdict(config)
    record["operand_digest"] = digest.hexdigest()[:16]
    return record


def _summarize(theorems: tuple[str, ...], records: list[dict]) -> dict:
    per = {}
    for tid in theorems:
        rows = [r for r in records if r["theorem_id"] == tid]
        holds = sum(r["verdict"] == "holds" for r in rows)
        skipped = sum(r["verdict"] == "skipped" for r in rows)
        violated = sum(r["verdict"] == "violated" for r in rows)
        judged = [r for r in rows if r["verdict"] != "skipped"]
        worst = min(judged, key=lambda r: r["slack"], default=None)
        per[tid] = {
            "trials": len(rows),
            "holds": holds,
            "skipped": skipped,
            "violated": violated,
            "min_slack": None if worst is None else worst["slack"],
            "min_slack_instance": None
            if worst is None
            else {
                "trial": worst["trial"],
                "operand_digest": worst["operand_digest"],
                "config": worst["config"],
            },
        }
    return per


def _write_report(out_dir: str, summary: dict, records: list[dict]) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "records.jsonl"), "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    with open(os.path.join(out_dir, "summary.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theorem_id", "trials", "holds", "skipped", "violated", "min_slack"])
        for tid, row in summary["theorems"].items():
            writer.writerow(
                [tid, row["trials"], row["holds"], row["skipped"], row["violated"], row["min_slack"]]
            )


def cmd_verify(args: argparse.Namespace) -> int:
    if args.theorem == "all":
        theorems = THEOREM_IDS
    elif args.theorem in THEOREMS:
        theorems = (args.theorem,)
    else:
        raise UnknownTheorem(f"unknown theorem {args.theorem!r}")
    if not args.trials >= 1:
        raise BadConfig(f"trials must be >= 1, got {args.trials}")
    if not 1 <= args.dim <= 8:
        raise BadConfig(f"dim must lie in 1..8, got {args.dim}")
    if args.rank is not None and not 1 <= args.rank <= args.dim:
        raise BadConfig(f"rank must lie in 1..dim, got {args.rank}")
    tol = args.tol if args.tol is not None else _default_tol()
    if not tol > 0:
        raise BadConfig(f"tol must be positive, got {tol}")
    if not args.jobs >= 1:
        raise BadConfig(f"jobs must be >= 1, got {args.jobs}")

    started = time.perf_counter()
    tasks = [(tid, t) for tid in theorems for t in range(args.trials)]

    def run(task: tuple[str, int]) -> dict:
        tid, t = task
        return _trial_record(tid, args.seed, t, args.dim, args.rank, args.blocks, tol)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(run, tasks))
    else:
        records = [run(task) for task in tasks]
    records.sort(key=lambda r: (THEOREM_IDS.index(r["theorem_id"]), r["trial"]))

    per_theorem = _summarize(theorems, records)
    for tid, row in per_theorem.items():
        assert row["trials"] == row["holds"] + row["skipped"] + row["violated"]
    summary = {
        "tool_version": __version__,
        "master_seed": args.seed,
        "flags": {
            "theorem": args.theorem,
            "trials": args.trials,
            "dim": args.dim,
            "rank": args.rank,
            "tol": tol,
            "blocks": args.blocks,
            "jobs": args.jobs,
        },
        "wall_time": time.perf_counter() - started,
        "theorems": per_theorem,
    }
    _write_report(args.out, summary, records)

    for tid, row in per_theorem.items():
        slack = "n/a" if row["min_slack"] is None else f"{row['min_slack']:.3e}"
        print(
            f"{tid:<18} trials={row['trials']:<5} holds={row['holds']:<5} "
            f"skipped={row['skipped']:<4} violated={row['violated']:<4} min_slack={slack}"
        )
    total_violated = sum(row["violated"] for row in per_theorem.values())
    print(f"report written to {args.out} ({len(records)} records, {summary['wall_time']:.1f}s)")
    return 0 if total_violated == 0 else 1


def reference_instances() -> list[dict]:
    """The three pinned block-matrix instances with known exact values."""
    nil = np.array([[0.0, 1.0], [0.0, 0.0]])
    zero2 = np.zeros((2, 2))
    eye2 = np.eye(2)
    s = lambda v: np.array([[v]])
    return [
        {
            "label": "corner instance, first bound",
            "theorem_id": "FULL_W_1",
            "metric": eye2,
            "operands": {"X": zero2, "Y": nil, "Z": nil, "W": zero2},
            "expect": {"rhs": 0.75, "lhs": 0.25},
        },
        {
            "label": "corner instance, second bound",
            "theorem_id": "FULL_W_2",
            "metric": eye2,
            "operands": {"X": zero2, "Y": nil, "Z": zero2, "W": zero2},
            "expect": {"rhs": 0.75, "lhs": 0.25},
        },
        {
            "label": "scalar incomparability, first bound",
            "theorem_id": "FULL_W_1",
            "metric": np.eye(1),
            "operands": {"X": s(0.5), "Y": s(1.0), "Z": s(0.0), "W": s(0.0)},
            "expect": {"rhs": 1.25},
        },
        {
            "label": "scalar incomparability, second bound",
            "theorem_id": "FULL_W_2",
            "metric": np.eye(1),
            "operands": {"X": s(0.5), "Y": s(1.0), "Z": s(0.0), "W": s(0.0)},
            "expect": {"rhs": 1.125},
        },
    ]


def cmd_reference_checks(_args: argparse.Namespace) -> int:
    failures = 0
    for case in reference_instances():
        record = evaluate(
            case["theorem_id"], Metric(case["metric"]), case["operands"]
        )
        for field, expected in case["expect"].items():
            got = getattr(record, field)
            ok = abs(got - expected) <= 1e-9
            mark = "ok" if ok else "MISMATCH"
            print(f"{case['label']:<42} {field}={got:.12f} expected={expected:.12f} {mark}")
            if not ok:
                print(f"  diff = {got - expected:+.3e}")
                failures += 1
    return 0 if failures == 0 else 1


def _explore_recipes(pair: frozenset) -> list[dict]:
    sqrt_pair = ScalarFnPair.power(0.5)
    if pair == frozenset(("NXN_S", "NXN_R")):
        ident = ScalarFnPair.custom(lambda t: t, lambda t: np.ones_like(t))
        return [
            {"tag": "f=g=sqrt", "params": BoundParams(), "fns": {1: [sqrt_pair], 2: [sqrt_pair]}},
            {"tag": "f=t,g=1", "params": BoundParams(), "fns": {1: [ident], 2: [ident]}},
        ]
    recipes = [{"tag": "defaults", "params": BoundParams(), "fns": {}}]
    if pair == frozenset(("OFFDIAG_FG", "OFFDIAG_2FG")):
        recipes = [
            {"tag": "r=1", "params": BoundParams(r=1.0), "fns": {1: [sqrt_pair], 2: [sqrt_pair, sqrt_pair]}},
            {"tag": "r=2", "params": BoundParams(r=2.0), "fns": {1: [sqrt_pair], 2: [sqrt_pair, sqrt_pair]}},
        ]
    return recipes


def _fns_for(recipe: dict, slots: int, which: int):
    fns = recipe["fns"].get(which)
    if fns is None:
        return None
    if len(fns) < slots:
        fns = list(fns) * slots
    return fns[:slots] if slots else None


def cmd_explore(args: argparse.Namespace) -> int:
    parts = args.pair.split(",")
    if len(parts) != 2:
        raise BadConfig(f"--pair expects two comma-separated ids, got {args.pair!r}")
    first, second = (p.strip() for p in parts)
    for tid in (first, second):
        if tid not in THEOREMS:
            raise UnknownTheorem(f"unknown theorem {tid!r}")
    info1, info2 = THEOREMS[first], THEOREMS[second]
    if info1.operands != info2.operands or info1.nxn != info2.nxn:
        raise BadConfig(f"{first} and {second} have incompatible operand signatures")
    if not args.trials >= 1:
        raise BadConfig(f"trials must be >= 1, got {args.trials}")

    pair_key = frozenset((first, second))
    recipes = _explore_recipes(pair_key)
    witnesses: dict[str, dict] = {}
    fixed = []
    if pair_key == frozenset(("FULL_W_1", "FULL_W_2")):
        scalar = reference_instances()[2]
        fixed.append((Metric(scalar["metric"]), scalar["operands"], "pinned scalar instance"))

    for trial in range(args.trials):
        if trial < len(fixed):
            metric, ops, source = fixed[trial]
        else:
            h = mix64(args.seed, trial)
            config = GenConfig(
                dim=1 + h % 4,
                metric_rank=None,
                seed=h,
                repeat_eigs=((h >> 16) & 3) == 0,
                blocks=2,
            )
            metric = gen_metric(config)
            ops = gen_instance(first, config, metric=metric)
            source = "generated"
            if not info1.nxn and set(info1.operands) == {"X", "Y"} and (h >> 24) % 4 == 0:
                ops = {"X": ops["X"], "Y": ops["X"]}
                source = "generated, Y=X"
        for recipe in recipes:
            rec1 = evaluate(first, metric, ops, params=recipe["params"],
                            fns=_fns_for(recipe, info1.fn_slots, 1))
            rec2 = evaluate(second, metric, ops, params=recipe["params"],
                            fns=_fns_for(recipe, info2.fn_slots, 2))
            if rec1.verdict == "skipped" or rec2.verdict == "skipped":
                continue
            margin = 1e-9 * max(1.0, rec1.rhs, rec2.rhs)
            entry = {
                "trial": trial,
                "source": source,
                "recipe": recipe["tag"],
                first: _sig(rec1.rhs),
                second: _sig(rec2.rhs),
            }
            if rec1.rhs < rec2.rhs - margin:
                witnesses.setdefault(f"{first} smaller", entry)
            elif rec2.rhs < rec1.rhs - margin:
                witnesses.setdefault(f"{second} smaller", entry)
        if len(witnesses) == 2:
            break

    for direction in (f"{first} smaller", f"{second} smaller"):
        entry = witnesses.get(direction)
        if entry is None:
            print(f"{direction}: NOT-FOUND after {args.trials} trials")
        else:
            print(
                f"{direction}: trial {entry['trial']} ({entry['source']}, {entry['recipe']}) "
                f"{first}={entry[first]:.6g} {second}={entry[second]:.6g}"
            )
    if pair_key in CLAIMED_PAIRS and len(witnesses) != 2:
        return 1
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise BadConfig(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semiop", description=__doc__.split("\n", 1)[0])
    parser.add_argument("--version", action="version", version=f"semiop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="print one deformed quantity of an operator")
    p.add_argument("quantity", choices=QUANTITIES)
    p.add_argument("metric", help="metric matrix file")
    p.add_argument("operator", help="operator matrix file")
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("verify", help="seeded soundness campaign over the registry")
    p.add_argument("--theorem", default="all", help="registry id or 'all'")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dim", type=int, default=3, help="maximum space dimension")
    p.add_argument("--rank", type=int, default=None, help="fix the metric rank")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None,
                   help=f"slack tolerance (default {TOL_ENV} or 1e-8)")
    p.add_argument("--out", default="semiop_report", help="report directory")
    p.add_argument("--blocks", type=int, default=3, help="grid size for k x k entries")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("reference-checks", help="replay pinned instances with known values")
    p.set_defaults(handler=cmd_reference_checks)

    p = sub.add_parser("explore", help="search a bound pair for incomparability witnesses")
    p.add_argument("--pair", required=True, help="two registry ids, comma separated")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_explore)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except NotAMember as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SemiopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
