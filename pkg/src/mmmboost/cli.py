"""Command-line entry point.

Subcommands: `train` (fit, build the front, select, evaluate, write model
and bundle files), `select` (replay preference selection on a stored
bundle), `audit` (fairness/performance report for external predictions),
`toy` (built-in hypothetical-classifier table), and `report` (delimited
tables plus rendered figures from a bundle).

Exit codes: 0 success, 1 failed ordering assertions, 2 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import boost, pareto, report
from .data import Dataset, DatasetSchema, load_csv, split
from .errors import ArgumentError, MmmBoostError
from .evaluate import classification_report, evaluate, toy_report
from .metrics import evaluate_fairness


def _parse_preference(text: str) -> pareto.PreferenceVector:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise ArgumentError(f"preference must be three comma-separated numbers, got {text!r}") from None
    return pareto.PreferenceVector.of(values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmmboost", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train, select by preference, and export model + bundle")
    train.add_argument("--schema", required=True, help="dataset schema JSON file")
    train.add_argument("--data", required=True, help="CSV data file")
    train.add_argument("--rounds", type=int, default=100, help="maximum boosting rounds")
    train.add_argument("--mode", choices=(boost.MODE_MULTI_FAIR, boost.MODE_VANILLA),
                       default=boost.MODE_MULTI_FAIR)
    train.add_argument("--preference", default="1,1,1",
                       help="comma-separated importance of the three losses (normalized)")
    train.add_argument("--test-fraction", type=float, default=0.5)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--burn-in", type=int, default=0,
                       help="drop the first R rounds before computing the front")
    train.add_argument("--objective-split", choices=(boost.SPLIT_TRAIN, boost.SPLIT_HOLDOUT),
                       default=boost.SPLIT_TRAIN)
    train.add_argument("--holdout-fraction", type=float, default=0.25)
    train.add_argument("--out-dir", default=".", help="directory for model.json and bundle.json")

    select = sub.add_parser("select", help="re-run preference selection on a stored bundle")
    select.add_argument("--bundle", required=True)
    select.add_argument("--preference", required=True)

    audit = sub.add_parser("audit", help="fairness + performance report for external predictions")
    audit.add_argument("--predictions", required=True, help="CSV with a prediction column")
    audit.add_argument("--schema", required=True)
    audit.add_argument("--data", required=True)
    audit.add_argument("--column", default="prediction", help="prediction column name")

    toy = sub.add_parser("toy", help="print the built-in hypothetical-classifier table")
    toy.add_argument("--format", choices=("table", "json"), default="table")

    rep = sub.add_parser("report", help="write CSV tables and figures for a bundle")
    rep.add_argument("--bundle", required=True)
    rep.add_argument("--model", default=None, help="model.json for the fairness-delta figure")
    rep.add_argument("--out-dir", default="reports")

    return parser


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise ArgumentError(f"file not found: {p}")
    return p


def cmd_train(args) -> int:
    schema = DatasetSchema.from_json_file(_require_file(args.schema))
    dataset = load_csv(_require_file(args.data), schema)
    preference = _parse_preference(args.preference)
    if args.burn_in < 0:
        raise ArgumentError("--burn-in must be >= 0")

    train_set, test_set = split(dataset, args.test_fraction, args.seed)
    config = boost.BoostConfig(
        rounds=args.rounds,
        mode=args.mode,
        objective_split=args.objective_split,
        holdout_fraction=args.holdout_fraction,
        seed=args.seed,
    )
    trace = boost.train(train_set, config)

    candidates = [s for s in trace.solutions if s.round > args.burn_in]
    if not candidates:
        raise ArgumentError(
            f"--burn-in {args.burn_in} leaves no rounds (training completed {trace.rounds_completed})"
        )
    front = pareto.pseudo_weights(pareto.pareto_front(candidates))
    selected_round, selected_solution = pareto.select(front, preference)

    eval_reports = []
    for entry in front.entries:
        rep = evaluate(trace.ensemble.prefix(entry.solution.round), test_set)
        eval_reports.append({"round": entry.solution.round, **rep.to_json()})

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    boost.save_model(trace, out_dir / "model.json")
    bundle = pareto.export_bundle(
        out_dir / "bundle.json",
        meta={
            "dataset": Path(args.data).name,
            "T": args.rounds,
            "mode": args.mode,
            "seed": args.seed,
            "burn_in": args.burn_in,
            "test_fraction": args.test_fraction,
        },
        solutions=list(trace.solutions),
        front=front,
        selected_round=selected_round,
        preference=preference,
        eval_reports=eval_reports,
        created_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )

    selected_eval = next(e for e in eval_reports if e["round"] == selected_round)
    print(f"loaded {dataset.n} rows   imbalance ratio (min:maj) = 1:{1 / dataset.imbalance_ratio:.2f}")
    print(f"rounds completed: {trace.rounds_completed}   front size: {len(front)}")
    print(f"selected round:   {selected_round}   preference: {list(preference.normalized())}")
    print(f"losses:           o1={selected_solution.o1:.4f} o2={selected_solution.o2:.4f} "
          f"o3={selected_solution.o3:.4f}")
    print("test metrics:     " + "  ".join(
        f"{k}={selected_eval[k]:.4f}" for k in ("acc", "wc_acc", "auc", "gm", "mmm")))
    print(f"wrote {out_dir / 'model.json'} and {out_dir / 'bundle.json'}")
    return 0


def cmd_select(args) -> int:
    preference = _parse_preference(args.preference)
    bundle_path = _require_file(args.bundle)
    bundle = pareto.load_bundle(bundle_path)
    front = pareto.front_from_bundle(bundle)
    selected_round, solution = pareto.select(front, preference)

    bundle["selected"] = {
        "round": selected_round,
        "preference": list(preference.normalized()),
        "o1": solution.o1,
        "o2": solution.o2,
        "o3": solution.o3,
    }
    bundle_path.write_text(json.dumps(bundle, indent=2) + "\n", encoding="utf-8")

    selected_eval = next((e for e in bundle["eval"] if e["round"] == selected_round), None)
    print(json.dumps({"selected_round": selected_round,
                      "losses": solution.to_json(),
                      "eval": selected_eval}, indent=2))
    return 0


def _read_predictions(path: Path, column: str, positive_label: str, n: int) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise ArgumentError(f"{path}: no column named {column!r}")
        values = [row[column] for row in reader]
    if len(values) != n:
        raise ArgumentError(f"{path}: {len(values)} predictions for {n} data rows")
    preds = np.empty(n, dtype=np.int64)
    negative_token: str | None = None
    for i, value in enumerate(values):
        if value in ("+1", "1") or value == positive_label:
            preds[i] = 1
        elif value == "-1" or value == negative_token:
            preds[i] = -1
        elif negative_token is None:
            negative_token = value
            preds[i] = -1
        else:
            raise ArgumentError(
                f"{path} row {i + 2}: prediction {value!r} matches neither the positive label, "
                f"+1/-1, nor the negative token {negative_token!r}"
            )
    return preds


def cmd_audit(args) -> int:
    schema = DatasetSchema.from_json_file(_require_file(args.schema))
    dataset = load_csv(_require_file(args.data), schema)
    preds = _read_predictions(_require_file(args.predictions), args.column,
                              schema.positive_label, dataset.n)
    fairness = evaluate_fairness(preds, dataset)
    performance = classification_report(preds, preds.astype(np.float64), dataset)
    print(json.dumps({"fairness": fairness.to_json(), "eval": performance.to_json()}, indent=2))
    return 0


def cmd_toy(args) -> int:
    rep = toy_report()
    failures = rep.check()
    if args.format == "json":
        print(json.dumps({**rep.to_json(), "failures": failures}, indent=2))
    else:
        attributes = [attr for attr, *_ in rep.rows[0].per_attribute]
        header = f"{'classifier':<11}" + "".join(
            f"{attr + ' ' + m:>14}" for attr in attributes for m in ("DM", "CDM")
        ) + f"{'MMM':>10}"
        print(header)
        for row in rep.rows:
            cells = ""
            for _attr, _rates, d, c, flag in row.per_attribute:
                cells += f"{d:>14.3f}{c:>13.3f}{'*' if flag else ' '}"
            print(f"{row.classifier:<11}{cells}{row.mmm:>10.3f}")
        print("(* = class-biased mistreatment)")
        for failure in failures:
            print(f"FAILED: {failure}", file=sys.stderr)
    return 1 if failures else 0


def cmd_report(args) -> int:
    bundle = pareto.load_bundle(_require_file(args.bundle))
    model = boost.load_model(_require_file(args.model)) if args.model else None
    written = report.write_report(bundle, args.out_dir, model)
    for path in written:
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "train": cmd_train,
    "select": cmd_select,
    "audit": cmd_audit,
    "toy": cmd_toy,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except MmmBoostError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
