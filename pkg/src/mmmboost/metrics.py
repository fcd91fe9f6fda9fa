"""Group confusion rates, the fairness measures, and the three optimization losses.

Conventions used throughout:

* rates are conditional on the true class within a group:
  FNR = P(pred = -1 | group, label = +1), FPR = P(pred = +1 | group, label = -1);
* a rate whose group-by-class cell is empty is *undefined*: it enters every
  aggregate as 0 and the affected rate names are flagged on the report;
* signed deltas are protected minus complement (s minus s̄).

The three per-round losses are the mean 0-1 loss (`o1`), the absolute gap
between the per-class mean 0-1 losses (`o2`), and the worst absolute
group-normalized error difference over attributes and classes (`o3`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ArgumentError, DegenerateDataError

RATE_NAMES = ("fpr_s", "fnr_s", "fpr_ns", "fnr_ns")


@dataclass(frozen=True)
class GroupRates:
    """FPR/FNR of the protected group (`_s`) and its complement (`_ns`).

    A rate is None when its denominator cell is empty; `delta_*` treats such
    rates as 0.
    """

    fpr_s: float | None
    fnr_s: float | None
    fpr_ns: float | None
    fnr_ns: float | None

    @property
    def delta_fpr(self) -> float:
        return _zero(self.fpr_s) - _zero(self.fpr_ns)

    @property
    def delta_fnr(self) -> float:
        return _zero(self.fnr_s) - _zero(self.fnr_ns)

    @property
    def undefined_rates(self) -> tuple[str, ...]:
        return tuple(name for name in RATE_NAMES if getattr(self, name) is None)


def _zero(rate: float | None) -> float:
    return 0.0 if rate is None else rate


@dataclass(frozen=True)
class AttributeFairness:
    attribute: str
    rates: GroupRates
    dm: float
    cdm: float
    class_biased: bool

    def to_json(self) -> dict:
        return {
            "attribute": self.attribute,
            "fpr_s": _zero(self.rates.fpr_s),
            "fnr_s": _zero(self.rates.fnr_s),
            "fpr_ns": _zero(self.rates.fpr_ns),
            "fnr_ns": _zero(self.rates.fnr_ns),
            "delta_fpr": self.rates.delta_fpr,
            "delta_fnr": self.rates.delta_fnr,
            "dm": self.dm,
            "cdm": self.cdm,
            "class_biased": self.class_biased,
            "undefined_rates": list(self.rates.undefined_rates),
        }


@dataclass(frozen=True)
class FairnessReport:
    per_attribute: tuple[AttributeFairness, ...]
    mmm: float

    def is_mmm_fair(self, mu: float) -> bool:
        """True iff the worst mistreatment over attributes and classes is within `mu`."""
        return self.mmm <= mu

    def to_json(self) -> dict:
        return {
            "mmm": self.mmm,
            "per_attribute": [a.to_json() for a in self.per_attribute],
        }


@dataclass(frozen=True)
class SolutionVector:
    """Loss triple of one partial ensemble; `round` is 1-based."""

    o1: float
    o2: float
    o3: float
    round: int

    def as_array(self) -> np.ndarray:
        return np.array([self.o1, self.o2, self.o3])

    def to_json(self) -> dict:
        return {"round": self.round, "o1": self.o1, "o2": self.o2, "o3": self.o3}


def group_rates(predictions: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> GroupRates:
    """Confusion rates of the masked group and its complement."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    mask = np.asarray(mask, dtype=bool)
    if not (predictions.shape == labels.shape == mask.shape):
        raise ArgumentError("predictions, labels, and mask must have equal length")

    def rate(group: np.ndarray, cls: int, wrong_value: int) -> float | None:
        cell = group & (labels == cls)
        total = np.count_nonzero(cell)
        if total == 0:
            return None
        return np.count_nonzero(cell & (predictions == wrong_value)) / total

    return GroupRates(
        fpr_s=rate(mask, -1, +1),
        fnr_s=rate(mask, +1, -1),
        fpr_ns=rate(~mask, -1, +1),
        fnr_ns=rate(~mask, +1, -1),
    )


def dm(rates: GroupRates) -> float:
    """Disparate mistreatment: |delta FPR| + |delta FNR|, in [0, 2]."""
    return abs(rates.delta_fpr) + abs(rates.delta_fnr)


def cdm(rates: GroupRates) -> float:
    """Class-aware disparate mistreatment: ||FPR_s - FNR_s| - |FPR_ns - FNR_ns||, in [0, 1]."""
    return abs(
        abs(_zero(rates.fpr_s) - _zero(rates.fnr_s))
        - abs(_zero(rates.fpr_ns) - _zero(rates.fnr_ns))
    )


def class_biased(rates: GroupRates, tol: float = 1e-9) -> bool:
    """True iff CDM equals DM above zero, i.e. the mistreatment favors one class."""
    if tol < 0:
        raise ArgumentError("tol must be non-negative")
    d = dm(rates)
    return abs(cdm(rates) - d) <= tol and d > tol


def mmm(all_rates: list[GroupRates]) -> float:
    """Worst absolute rate difference over all attributes and both classes, in [0, 1]."""
    if not all_rates:
        raise ArgumentError("mmm needs at least one attribute's rates")
    return max(max(abs(r.delta_fnr), abs(r.delta_fpr)) for r in all_rates)


def evaluate_fairness(predictions: np.ndarray, dataset: Dataset) -> FairnessReport:
    """Per-attribute rates, DM, CDM, and class-bias flags plus the overall worst-case measure."""
    per_attribute = []
    rates_list = []
    for name, mask in zip(dataset.attributes, dataset.group_masks):
        rates = group_rates(predictions, dataset.labels, mask)
        rates_list.append(rates)
        per_attribute.append(
            AttributeFairness(
                attribute=name,
                rates=rates,
                dm=dm(rates),
                cdm=cdm(rates),
                class_biased=class_biased(rates),
            )
        )
    return FairnessReport(per_attribute=tuple(per_attribute), mmm=mmm(rates_list))


def objective_vector(predictions: np.ndarray, dataset: Dataset, round: int) -> SolutionVector:
    """Evaluate the three losses of a prediction vector against a dataset.

    `o3` is computed from the group-normalized error sums: each instance of
    class c and attribute j contributes its 0-1 error weighted by +1/#cell for
    the protected group and -1/#cell for the complement, so the inner sum is
    exactly the signed rate difference of that attribute and class. An empty
    cell contributes weight 0 (the undefined-rate policy above).
    """
    predictions = np.asarray(predictions)
    labels = dataset.labels
    if predictions.shape != labels.shape:
        raise ArgumentError("predictions must align with the dataset")
    err = (predictions != labels).astype(np.float64)
    pos = labels == 1
    n_pos = np.count_nonzero(pos)
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateDataError("both classes are required to evaluate the losses")

    o1 = float(np.mean(err))
    o2 = float(abs(err[pos].mean() - err[~pos].mean()))

    o3 = 0.0
    for j, mask in enumerate(dataset.group_masks):
        s_pos, ns_pos, s_neg, ns_neg = dataset.counts[j]
        for cls_mask, n_s, n_ns in ((pos, s_pos, ns_pos), (~pos, s_neg, ns_neg)):
            weights = np.zeros(labels.size)
            if n_s > 0:
                weights[cls_mask & mask] = 1.0 / n_s
            if n_ns > 0:
                weights[cls_mask & ~mask] = -1.0 / n_ns
            o3 = max(o3, abs(float(weights @ err)))

    return SolutionVector(o1=o1, o2=o2, o3=o3, round=round)
