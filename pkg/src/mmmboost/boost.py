"""The fairness-boosted training loop.

Each round trains a stump on the current distribution, measures the signed
cumulative rate differences of the partial ensemble on the training set, and
multiplies the usual exponential update by a per-instance fairness cost in
[1, 2]: an instance misclassified by the partial ensemble receives the cost
of the most-discriminated group it belongs to. The loss triple of every
partial ensemble is recorded so the Pareto stage can pick any prefix as the
final model.

Sign conventions: sign(0) = +1 for ensemble margins, and the exponent uses
+1 when the round's stump is correct on the instance, -1 otherwise.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import Dataset, split
from .errors import ArgumentError, InternalError, TrainingError
from .metrics import SolutionVector, group_rates, objective_vector
from .stump import Stump, train_stump

MODE_MULTI_FAIR = "multi_fair"
MODE_VANILLA = "vanilla"

SPLIT_TRAIN = "train"
SPLIT_HOLDOUT = "holdout"

DEFAULT_ALPHA_CAP = 0.5 * math.log(1e10)

THREADS_ENV_VAR = "MMM_BOOST_THREADS"


def resolve_threads(value: str | None = None) -> int:
    """Worker cap for intra-round parallelism; 0 means auto, unset means 1."""
    raw = os.environ.get(THREADS_ENV_VAR) if value is None else value
    if raw is None or raw == "":
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ArgumentError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ArgumentError(f"{THREADS_ENV_VAR} must be >= 0, got {threads}")
    if threads == 0:
        return os.cpu_count() or 1
    return threads


@dataclass(frozen=True)
class BoostConfig:
    """Knobs of one training run.

    `objective_split` chooses where per-round loss triples are measured:
    "train" evaluates on the training data itself, "holdout" carves
    `holdout_fraction` off (seeded by `seed`) and keeps it out of fitting.
    """

    rounds: int
    mode: str = MODE_MULTI_FAIR
    objective_split: str = SPLIT_TRAIN
    holdout_fraction: float = 0.25
    alpha_cap: float = DEFAULT_ALPHA_CAP
    epsilon_floor: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1:
            raise ArgumentError("rounds must be >= 1")
        if self.mode not in (MODE_MULTI_FAIR, MODE_VANILLA):
            raise ArgumentError(f"unknown mode {self.mode!r}")
        if self.objective_split not in (SPLIT_TRAIN, SPLIT_HOLDOUT):
            raise ArgumentError(f"unknown objective_split {self.objective_split!r}")
        if not 0.0 < self.epsilon_floor < 0.5:
            raise ArgumentError("epsilon_floor must lie in (0, 0.5)")
        if not 0.0 < self.holdout_fraction < 1.0:
            raise ArgumentError("holdout_fraction must lie in (0, 1)")

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds,
            "mode": self.mode,
            "objective_split": self.objective_split,
            "holdout_fraction": self.holdout_fraction,
            "alpha_cap": self.alpha_cap,
            "epsilon_floor": self.epsilon_floor,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Ensemble:
    """Ordered (stump, alpha) pairs; a prefix of length t is the partial ensemble H_t."""

    members: tuple[tuple[Stump, float], ...]

    def __len__(self) -> int:
        return len(self.members)

    def prefix(self, t: int) -> "Ensemble":
        return Ensemble(members=self.members[:t])

    def margins(self, features: np.ndarray) -> np.ndarray:
        """Unnormalized weighted vote, accumulated in member order."""
        out = np.zeros(features.shape[0])
        for stump, alpha_t in self.members:
            out += alpha_t * stump.predict(features)
        return out

    @property
    def alpha_total(self) -> float:
        return sum(a for _, a in self.members)


def predict(ensemble: Ensemble, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hard labels and normalized scores in [-1, 1] for an (n, d) matrix.

    A single length-d vector is also accepted; scalar label and score are
    returned then. Zero margin maps to +1.
    """
    if len(ensemble) == 0:
        raise ArgumentError("ensemble has no members")
    features = np.asarray(features, dtype=np.float64)
    single = features.ndim == 1
    if single:
        features = features[None, :]
    scores = ensemble.margins(features) / ensemble.alpha_total
    labels = hard_labels(scores)
    if single:
        return labels[0], scores[0]
    return labels, scores


def hard_labels(margins: np.ndarray) -> np.ndarray:
    return np.where(margins >= 0, 1, -1).astype(np.int64)


@dataclass(frozen=True)
class TrainingTrace:
    ensemble: Ensemble
    solutions: tuple[SolutionVector, ...]
    fairness_deltas: np.ndarray  # (rounds, k, 2): columns are (delta FNR, delta FPR)
    final_weights: np.ndarray
    config: BoostConfig
    attributes: tuple[str, ...]
    distributions: tuple[np.ndarray, ...] | None = field(default=None, repr=False)

    @property
    def rounds_completed(self) -> int:
        return len(self.ensemble)


def alpha(weighted_error: float, alpha_cap: float = DEFAULT_ALPHA_CAP,
          epsilon_floor: float = 1e-10) -> float:
    """Half log-odds of the clamped error; capped so perfect stumps stay finite."""
    if not 0.0 <= weighted_error <= 1.0:
        raise ArgumentError("weighted_error must lie in [0, 1]")
    eps = min(max(weighted_error, epsilon_floor), 0.5 - epsilon_floor)
    return min(0.5 * math.log((1.0 - eps) / eps), alpha_cap)


def cumulative_deltas(ensemble: Ensemble, dataset: Dataset) -> np.ndarray:
    """Signed (delta FNR, delta FPR) per attribute of the ensemble's hard predictions."""
    if len(ensemble) == 0:
        raise ArgumentError("ensemble has no members")
    preds = hard_labels(ensemble.margins(dataset.features))
    return _deltas_of(preds, dataset)


def _deltas_of(predictions: np.ndarray, dataset: Dataset) -> np.ndarray:
    deltas = np.empty((dataset.n_attributes, 2))
    for j, mask in enumerate(dataset.group_masks):
        rates = group_rates(predictions, dataset.labels, mask)
        deltas[j] = (rates.delta_fnr, rates.delta_fpr)
    return deltas


def discrimination_cost(label: int, instance_masks: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Per-attribute cost of one instance given cumulative deltas (k, 2).

    A positive instance pays 1 + |delta FNR_j| when it sits in whichever group
    the sign of delta FNR_j marks as discriminated (protected for >= 0,
    complement for <= 0); negatives mirror this with delta FPR. Anything else
    costs 1.
    """
    costs = np.ones(deltas.shape[0])
    for j in range(deltas.shape[0]):
        d_fnr, d_fpr = deltas[j]
        in_s = bool(instance_masks[j])
        if label == 1:
            if (d_fnr >= 0 and in_s) or (d_fnr <= 0 and not in_s):
                costs[j] = 1.0 + abs(d_fnr)
        else:
            if (d_fpr >= 0 and in_s) or (d_fpr <= 0 and not in_s):
                costs[j] = 1.0 + abs(d_fpr)
    return costs


def fairness_cost(label: int, instance_masks: np.ndarray, ensemble_prediction: int,
                  deltas: np.ndarray) -> float:
    """Cost of one instance: worst attribute cost if misclassified, else 1. Always in [1, 2]."""
    if ensemble_prediction == label:
        return 1.0
    return float(discrimination_cost(label, instance_masks, deltas).max())


def _discriminated(delta: float, mask: np.ndarray) -> np.ndarray:
    """Instances in the group the sign of `delta` marks as discriminated (both at 0)."""
    if delta > 0:
        return mask
    if delta < 0:
        return ~mask
    return np.ones(mask.shape, dtype=bool)


def _fairness_costs(dataset: Dataset, ensemble_preds: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Vectorized fairness costs for every instance."""
    labels = dataset.labels
    pos = labels == 1
    cdc = np.ones((dataset.n, dataset.n_attributes))
    for j, mask in enumerate(dataset.group_masks):
        d_fnr, d_fpr = deltas[j]
        cdc[pos & _discriminated(d_fnr, mask), j] = 1.0 + abs(d_fnr)
        cdc[~pos & _discriminated(d_fpr, mask), j] = 1.0 + abs(d_fpr)
    fcs = np.ones(dataset.n)
    miss = ensemble_preds != labels
    if np.any(miss):
        fcs[miss] = cdc[miss].max(axis=1)
    return fcs


def update_distribution(prev: np.ndarray, fcs: np.ndarray, alpha_t: float,
                        stump_preds: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """One multiplicative distribution update, renormalized to a probability vector."""
    sign = np.where(stump_preds == labels, 1.0, -1.0)
    unnormalized = prev * fcs * np.exp(-alpha_t * sign)
    z = unnormalized.sum()
    if not np.isfinite(z) or z <= 0.0:
        raise InternalError(f"update normalizer is {z}")
    return unnormalized / z


def train(dataset: Dataset, config: BoostConfig, record_distributions: bool = False) -> TrainingTrace:
    """Run the boosting loop for up to `config.rounds` rounds.

    Per round: fit a stump to the current distribution, weigh it by its
    clamped half log-odds, measure the partial ensemble's cumulative deltas
    on the training set, apply fairness costs (forced to 1 in vanilla mode)
    inside the distribution update, and record the loss triple on the
    objective split. Training stops early when a round's stump is no better
    than chance; that stump is discarded.
    """
    if config.objective_split == SPLIT_HOLDOUT:
        fit_set, objective_set = split(dataset, config.holdout_fraction, config.seed)
    else:
        fit_set = objective_set = dataset

    threads = resolve_threads()
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 and fit_set.n_features > 1 else None
    try:
        return _train_loop(fit_set, objective_set, config, executor, record_distributions)
    finally:
        if executor is not None:
            executor.shutdown()


def _train_loop(fit_set: Dataset, objective_set: Dataset, config: BoostConfig,
                executor, record_distributions: bool) -> TrainingTrace:
    n = fit_set.n
    vanilla = config.mode == MODE_VANILLA
    weights = np.full(n, 1.0 / n)
    members: list[tuple[Stump, float]] = []
    solutions: list[SolutionVector] = []
    deltas_per_round: list[np.ndarray] = []
    distributions: list[np.ndarray] = []
    fit_margins = np.zeros(n)
    objective_margins = np.zeros(objective_set.n)

    for t in range(1, config.rounds + 1):
        stump = train_stump(fit_set, weights, executor=executor)
        eps = stump.weighted_error
        if eps >= 0.5 - config.epsilon_floor:
            if not members:
                raise TrainingError(
                    "first weak learner is no better than chance",
                    diagnostics={"weighted_error": eps, "stump": stump},
                )
            break
        alpha_t = alpha(eps, config.alpha_cap, config.epsilon_floor)
        members.append((stump, alpha_t))

        stump_preds = stump.predict(fit_set.features)
        fit_margins = fit_margins + alpha_t * stump_preds
        ensemble_preds = hard_labels(fit_margins)
        deltas = _deltas_of(ensemble_preds, fit_set)
        deltas_per_round.append(deltas)

        fcs = np.ones(n) if vanilla else _fairness_costs(fit_set, ensemble_preds, deltas)
        weights = update_distribution(weights, fcs, alpha_t, stump_preds, fit_set.labels)
        if record_distributions:
            distributions.append(weights.copy())

        if objective_set is fit_set:
            objective_preds = ensemble_preds
        else:
            objective_margins = objective_margins + alpha_t * stump.predict(objective_set.features)
            objective_preds = hard_labels(objective_margins)
        solutions.append(objective_vector(objective_preds, objective_set, round=t))

    return TrainingTrace(
        ensemble=Ensemble(members=tuple(members)),
        solutions=tuple(solutions),
        fairness_deltas=np.array(deltas_per_round),
        final_weights=weights,
        config=config,
        attributes=fit_set.attributes,
        distributions=tuple(distributions) if record_distributions else None,
    )


def save_model(trace: TrainingTrace, path: str | Path) -> None:
    """Write the model file: config echo, stumps with weights, per-round losses and deltas."""
    document = {
        "config": trace.config.to_json(),
        "attributes": list(trace.attributes),
        "stumps": [
            {
                "feature": stump.feature_index,
                "threshold": _encode_float(stump.threshold),
                "polarity": stump.polarity,
                "alpha": alpha_t,
            }
            for stump, alpha_t in trace.ensemble.members
        ],
        "solutions": [s.to_json() for s in trace.solutions],
        "fairness_deltas": [
            {
                "round": t + 1,
                "per_attribute": [
                    {"attribute": name, "delta_fnr": row[0], "delta_fpr": row[1]}
                    for name, row in zip(trace.attributes, trace.fairness_deltas[t])
                ],
            }
            for t in range(trace.rounds_completed)
        ],
    }
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class ModelRecord:
    """A model file read back: enough to predict and to plot traces."""

    ensemble: Ensemble
    solutions: tuple[SolutionVector, ...]
    fairness_deltas: np.ndarray
    attributes: tuple[str, ...]
    config: dict


def load_model(path: str | Path) -> ModelRecord:
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    members = tuple(
        (
            Stump(
                feature_index=rec["feature"],
                threshold=_decode_float(rec["threshold"]),
                polarity=rec["polarity"],
                weighted_error=float("nan"),
            ),
            rec["alpha"],
        )
        for rec in document["stumps"]
    )
    solutions = tuple(
        SolutionVector(o1=s["o1"], o2=s["o2"], o3=s["o3"], round=s["round"])
        for s in document["solutions"]
    )
    deltas = np.array(
        [
            [[a["delta_fnr"], a["delta_fpr"]] for a in rec["per_attribute"]]
            for rec in document["fairness_deltas"]
        ]
    )
    return ModelRecord(
        ensemble=Ensemble(members=members),
        solutions=solutions,
        fairness_deltas=deltas,
        attributes=tuple(document["attributes"]),
        config=document["config"],
    )


def _encode_float(x: float) -> float | str:
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return x


def _decode_float(x: float | str) -> float:
    if isinstance(x, str):
        return float(x.replace("Infinity", "inf"))
    return float(x)
