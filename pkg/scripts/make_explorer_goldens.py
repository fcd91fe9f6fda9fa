#!/usr/bin/env python3
"""Regenerate the explorer's golden fixtures from the core pipeline.

Writes three bundles (multi-fair, vanilla, and one with an undefined-rate
flag) plus 20 preference/expected-round selection vectors computed by the
same routine `mmmboost select` replays. Everything is seeded and the
created_at stamp is pinned, so reruns are byte-identical.

Usage: python scripts/make_explorer_goldens.py [out_dir]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from mmmboost.boost import BoostConfig, train
from mmmboost.data import Dataset, split
from mmmboost.evaluate import evaluate, synth_biased
from mmmboost.pareto import PreferenceVector, export_bundle, pareto_front, pseudo_weights, select

CREATED_AT = "2026-08-11T00:00:00+00:00"


def undefined_rate_dataset() -> Dataset:
    """A dataset whose protected group exists only in the positive class."""
    rng = np.random.default_rng(77)
    n = 400
    labels = np.where(np.arange(n) % 4 == 0, 1, -1)
    features = np.column_stack(
        [
            np.where(labels == 1, 1.4, -1.4) + rng.normal(0, 1.0, n),
            rng.normal(0, 1.0, n),
        ]
    )
    rare = (labels == 1) & (rng.random(n) < 0.5)  # no negatives ever protected
    return Dataset(
        features=features,
        labels=labels,
        group_masks=rare[None, :],
        attributes=("rare",),
        feature_names=("x0", "x1"),
    )


def build_bundle(path: Path, dataset: Dataset, name: str, config: BoostConfig,
                 preference: PreferenceVector) -> dict:
    train_set, test_set = split(dataset, 0.5, config.seed)
    trace = train(train_set, config)
    front = pseudo_weights(pareto_front(list(trace.solutions)))
    selected_round, _ = select(front, preference)
    eval_reports = [
        {"round": e.solution.round,
         **evaluate(trace.ensemble.prefix(e.solution.round), test_set).to_json()}
        for e in front.entries
    ]
    return export_bundle(
        path,
        meta={"dataset": name, "T": config.rounds, "mode": config.mode, "seed": config.seed},
        solutions=list(trace.solutions),
        front=front,
        selected_round=selected_round,
        preference=preference,
        eval_reports=eval_reports,
        created_at=CREATED_AT,
    )


def golden_cases(bundles: dict[str, dict]) -> list[dict]:
    cases = []
    probes = {
        "bundle_a": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (0.35, 0.44, 0.21),
                     (0.2, 0.33, 0.47), "w0"],
        "bundle_b": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0.43, 0.3, 0.27), (0.02, 0.52, 0.46),
                     "w0", "wmid"],
        "bundle_c": [(1, 0, 0), (0, 0, 1), (1, 1, 1), (0.23, 0.34, 0.4), "w0", "wlast"],
    }
    for name, specs in probes.items():
        bundle = bundles[name]
        weights = bundle["pseudo_weights"]
        for spec in specs:
            if spec == "w0":
                u = tuple(weights[0])
            elif spec == "wmid":
                u = tuple(weights[len(weights) // 2])
            elif spec == "wlast":
                u = tuple(weights[-1])
            else:
                u = spec
            from mmmboost.pareto import front_from_bundle

            expected, _ = select(front_from_bundle(bundle), PreferenceVector.of(u))
            cases.append({"bundle": name, "preference": list(u), "expected_round": expected})
    return cases


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("frontend/testdata")
    out_dir.mkdir(parents=True, exist_ok=True)

    bundles = {}
    bundles["bundle_a"] = build_bundle(
        out_dir / "bundle_a.json",
        synth_biased(800, 0.25, 0.4, 2, seed=21),
        "synthetic-biased-a",
        BoostConfig(rounds=60, mode="multi_fair", seed=21),
        PreferenceVector.of([1, 1, 1]),
    )
    bundles["bundle_b"] = build_bundle(
        out_dir / "bundle_b.json",
        synth_biased(600, 0.5, 0.2, 1, seed=22),
        "synthetic-mild-b",
        BoostConfig(rounds=40, mode="vanilla", seed=22),
        PreferenceVector.of([0.2, 0.5, 0.3]),
    )
    bundles["bundle_c"] = build_bundle(
        out_dir / "bundle_c.json",
        undefined_rate_dataset(),
        "undefined-rate-c",
        BoostConfig(rounds=30, mode="multi_fair", seed=23),
        PreferenceVector.of([1, 1, 1]),
    )

    cases = golden_cases(bundles)
    assert len(cases) == 20, f"expected 20 golden cases, built {len(cases)}"
    (out_dir / "golden_selection.json").write_text(
        json.dumps({"cases": cases}, indent=2) + "\n", encoding="utf-8"
    )

    for name, bundle in bundles.items():
        front_size = len(bundle["front_indices"])
        print(f"{name}: {len(bundle['solutions'])} rounds, front {front_size}, "
              f"selected {bundle['selected']['round']}")
    print(f"wrote {len(cases)} golden cases to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
