"""Predictive metrics, combined reports, the built-in toy table, and the synthetic generator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boost import Ensemble, predict
from .data import Dataset
from .errors import ArgumentError, DegenerateDataError, InternalError
from .metrics import (
    FairnessReport,
    GroupRates,
    cdm,
    class_biased,
    dm,
    evaluate_fairness,
    mmm,
)


@dataclass(frozen=True)
class EvalReport:
    acc: float
    wc_acc: float
    auc: float
    gm: float
    fairness: FairnessReport

    def to_json(self) -> dict:
        return {
            "acc": self.acc,
            "wc_acc": self.wc_acc,
            "auc": self.auc,
            "gm": self.gm,
            "mmm": self.fairness.mmm,
            "per_attribute": [a.to_json() for a in self.fairness.per_attribute],
        }


def auc_score(scores: np.ndarray, labels: np.ndarray) -> float:
    """Rank-statistic AUC with half credit for tied scores."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ArgumentError("scores and labels must have equal length")
    pos = labels == 1
    n_pos = np.count_nonzero(pos)
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateDataError("AUC needs both classes")
    ranks = _average_ranks(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def classification_report(predictions: np.ndarray, scores: np.ndarray, dataset: Dataset) -> EvalReport:
    """Metrics of arbitrary hard predictions (with scores for AUC) against a dataset."""
    labels = dataset.labels
    pos = labels == 1
    if not np.any(pos) or np.all(pos):
        raise DegenerateDataError("evaluation needs both classes")
    tpr = float(np.mean(predictions[pos] == 1))
    tnr = float(np.mean(predictions[~pos] == -1))
    return EvalReport(
        acc=float(np.mean(predictions == labels)),
        wc_acc=min(tpr, tnr),
        auc=auc_score(scores, labels),
        gm=float(np.sqrt(tpr * tnr)),
        fairness=evaluate_fairness(predictions, dataset),
    )


def evaluate(ensemble: Ensemble, dataset: Dataset) -> EvalReport:
    """Accuracy, worst-class accuracy, AUC (on normalized margins), G-mean, and fairness."""
    predictions, scores = predict(ensemble, dataset.features)
    return classification_report(predictions, scores, dataset)


# Rate table of the four hypothetical classifiers over the groups (M, F, W, B);
# Sex treats F as protected, Race treats B as protected.
TOY_GROUPS = ("M", "F", "W", "B")
TOY_RATES = {
    "Cf1": {"fnr": (0.6, 0.6, 0.4, 1.0), "fpr": (0.1, 0.1, 0.3, 0.0)},
    "Cf2": {"fnr": (0.8, 0.8, 0.8, 0.8), "fpr": (0.1, 0.1, 0.1, 0.1)},
    "Cf3": {"fnr": (0.2, 0.4, 0.2, 0.4), "fpr": (0.2, 0.2, 0.2, 0.2)},
    "Cf4": {"fnr": (0.3, 0.2, 0.3, 0.2), "fpr": (0.3, 0.2, 0.2, 0.3)},
}
TOY_ATTRIBUTES = (("Sex", 1, 0), ("Race", 3, 2))  # (attribute, protected index, complement index)


@dataclass(frozen=True)
class ToyRow:
    classifier: str
    per_attribute: tuple  # (attribute, GroupRates, dm, cdm, class_biased)
    mmm: float


@dataclass(frozen=True)
class ToyReport:
    rows: tuple[ToyRow, ...]

    def row(self, name: str) -> ToyRow:
        return next(r for r in self.rows if r.classifier == name)

    def measure(self, name: str, attribute: str, which: str) -> float:
        for attr, _, d, c, _flag in self.row(name).per_attribute:
            if attr == attribute:
                return d if which == "dm" else c
        raise ArgumentError(f"unknown attribute {attribute!r}")

    def check(self) -> list[str]:
        """Ordering assertions; returns the failures (empty means all hold)."""
        failures = []
        expected_mmm = {"Cf1": 0.6, "Cf2": 0.0, "Cf3": 0.2, "Cf4": 0.1}
        for name, value in expected_mmm.items():
            if abs(self.row(name).mmm - value) > 1e-12:
                failures.append(f"MMM({name}) = {self.row(name).mmm}, expected {value}")
        for name in ("Cf1", "Cf3", "Cf4"):
            for attr, _, d, c, _flag in self.row(name).per_attribute:
                if self.measure("Cf2", attr, "dm") > d + 1e-12 or self.measure("Cf2", attr, "cdm") > c + 1e-12:
                    failures.append(f"Cf2 is not fairest against {name} on {attr}")
        if not self.row("Cf2").mmm <= min(r.mmm for r in self.rows) + 1e-12:
            failures.append("Cf2 is not fairest on MMM")
        for attr, _, _, _, _ in self.row("Cf3").per_attribute:
            dm3, dm4 = self.measure("Cf3", attr, "dm"), self.measure("Cf4", attr, "dm")
            cdm3, cdm4 = self.measure("Cf3", attr, "cdm"), self.measure("Cf4", attr, "cdm")
            if abs(dm3 - dm4) > 1e-12:
                failures.append(f"DM should tie Cf3 and Cf4 on {attr}: {dm3} vs {dm4}")
            if not cdm4 < cdm3 - 1e-12:
                failures.append(f"CDM should separate Cf4 from Cf3 on {attr}: {cdm4} vs {cdm3}")
        if not self.row("Cf4").mmm < self.row("Cf1").mmm - 1e-12:
            failures.append("MMM should rank Cf4 fairer than Cf1")
        if not self.row("Cf4").mmm < self.row("Cf3").mmm - 1e-12:
            failures.append("MMM should rank Cf4 fairer than Cf3")
        return failures

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "classifier": r.classifier,
                    "mmm": r.mmm,
                    "per_attribute": [
                        {
                            "attribute": attr,
                            "delta_fnr": rates.delta_fnr,
                            "delta_fpr": rates.delta_fpr,
                            "dm": d,
                            "cdm": c,
                            "class_biased": flag,
                        }
                        for attr, rates, d, c, flag in r.per_attribute
                    ],
                }
                for r in self.rows
            ]
        }


def toy_report() -> ToyReport:
    """Fairness table of the four built-in hypothetical classifiers."""
    rows = []
    for name, rates in TOY_RATES.items():
        per_attribute = []
        attr_rates = []
        for attr, s_idx, ns_idx in TOY_ATTRIBUTES:
            gr = GroupRates(
                fpr_s=rates["fpr"][s_idx],
                fnr_s=rates["fnr"][s_idx],
                fpr_ns=rates["fpr"][ns_idx],
                fnr_ns=rates["fnr"][ns_idx],
            )
            attr_rates.append(gr)
            per_attribute.append((attr, gr, dm(gr), cdm(gr), class_biased(gr)))
        rows.append(ToyRow(classifier=name, per_attribute=tuple(per_attribute), mmm=mmm(attr_rates)))
    return ToyReport(rows=tuple(rows))


def synth_biased(n: int, imbalance_ratio: float, bias_strength: float,
                 k_attrs: int, seed: int) -> Dataset:
    """Seeded generator of an imbalanced dataset with injected group bias.

    Classes are Gaussian clusters in two informative dimensions (plus two
    noise dimensions). `imbalance_ratio` is minority over majority size.
    Protected masks are drawn with class-conditional skew. Bias is injected
    by redrawing a `bias_strength` share of attribute 0's protected
    positives from a region deep inside the negative cluster, so a plain
    learner leaves them misclassified (raising the protected FNR by roughly
    `bias_strength`); later attributes get geometrically weaker treatment,
    making attribute 0 the dominant source of unfairness.
    """
    if n < 100:
        raise ArgumentError("n must be >= 100")
    if not 1 <= k_attrs <= 4:
        raise ArgumentError("k_attrs must lie in 1..4")
    if not 0.0 <= bias_strength <= 1.0:
        raise ArgumentError("bias_strength must lie in [0, 1]")
    if not 0.0 < imbalance_ratio <= 1.0:
        raise ArgumentError("imbalance_ratio must lie in (0, 1]")

    for attempt in range(8):
        rng = np.random.default_rng([seed, attempt])
        dataset = _generate(rng, n, imbalance_ratio, bias_strength, k_attrs)
        if dataset is not None:
            return dataset
    raise InternalError(
        f"could not draw non-empty group-by-class cells in 8 attempts (n={n}, k={k_attrs})"
    )


def _generate(rng: np.random.Generator, n: int, imbalance_ratio: float,
              bias_strength: float, k_attrs: int) -> Dataset | None:
    n_pos = max(1, round(n * imbalance_ratio / (1.0 + imbalance_ratio)))
    labels = np.full(n, -1, dtype=np.int64)
    labels[:n_pos] = 1
    pos = labels == 1

    center_pos = np.array([1.5, 1.5])
    center_neg = np.array([-1.5, -1.5])
    informative = np.where(pos[:, None], center_pos, center_neg) + rng.normal(0.0, 0.8, (n, 2))
    side = rng.normal(0.0, 1.0, (n, 1))
    noise = rng.normal(0.0, 1.0, (n, 1))
    features = np.hstack([informative, side, noise])

    masks = np.empty((k_attrs, n), dtype=bool)
    for j in range(k_attrs):
        p_protected = np.where(pos, 0.45, 0.55)
        masks[j] = rng.random(n) < p_protected
        if min(
            np.count_nonzero(masks[j] & pos),
            np.count_nonzero(~masks[j] & pos),
            np.count_nonzero(masks[j] & ~pos),
            np.count_nonzero(~masks[j] & ~pos),
        ) == 0:
            return None

    # move a share of protected positives into the negative cluster itself;
    # only the side channel (weakly shifted) makes them recoverable, at a
    # false-positive price a purely accuracy-driven learner avoids paying
    for j in range(k_attrs):
        share = bias_strength * (0.5**j)
        targets = masks[j] & pos & (rng.random(n) < share)
        count = np.count_nonzero(targets)
        if count:
            features[targets, :2] = center_neg + rng.normal(0.0, 0.8, (count, 2))
            features[targets, 2] = 1.8 + rng.normal(0.0, 0.8, count)

    order = rng.permutation(n)
    return Dataset(
        features=features[order],
        labels=labels[order],
        group_masks=masks[:, order],
        attributes=tuple(f"attr{j}" for j in range(k_attrs)),
        feature_names=("x0", "x1", "side", "noise"),
    )
