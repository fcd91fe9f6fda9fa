"""Weighted depth-1 decision stumps.

A stump predicts `polarity` where the chosen feature is strictly greater
than the threshold and `-polarity` otherwise. Candidate thresholds are the
midpoints between consecutive distinct sorted feature values plus -inf and
+inf sentinels, so the search space is finite and complete for 0-1 loss.

Tie-break between equally good candidates is total and fixed: lowest
feature index, then lowest threshold, then polarity +1 before -1. The
search therefore returns the same stump no matter how candidates are
scanned, which keeps per-feature parallelism deterministic.
"""

from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ArgumentError

# Candidates whose fast-path error is within this slack of the best are
# re-scored with a direct masked sum, so prefix-sum rounding can never
# change which stump wins.
_TIE_SLACK = 1e-9

_POLARITY_RANK = {1: 0, -1: 1}


@dataclass(frozen=True)
class Stump:
    feature_index: int
    threshold: float
    polarity: int
    weighted_error: float

    def predict(self, features: np.ndarray) -> np.ndarray:
        """Vectorized prediction for an (n, d) matrix; returns an int vector over {+1, -1}."""
        column = features[:, self.feature_index]
        return np.where(column > self.threshold, self.polarity, -self.polarity).astype(np.int64)


def predict_stump(stump: Stump, features: np.ndarray) -> int:
    """Predict a single length-d feature vector."""
    features = np.asarray(features)
    if features.ndim != 1 or stump.feature_index >= features.shape[0]:
        raise ArgumentError("feature vector does not match the stump's feature index")
    return stump.polarity if features[stump.feature_index] > stump.threshold else -stump.polarity


def _scan_feature(values: np.ndarray, labels: np.ndarray, weights: np.ndarray):
    """All candidate thresholds of one feature with fast errors for both polarities.

    Returns (thresholds, err_pos_polarity, err_neg_polarity).
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = weights[order]
    y = labels[order]

    w_pos = np.where(y == 1, w, 0.0)
    w_neg = w - w_pos
    cum_pos = np.concatenate(([0.0], np.cumsum(w_pos)))
    cum_neg = np.concatenate(([0.0], np.cumsum(w_neg)))
    total = cum_pos[-1] + cum_neg[-1]

    boundaries = np.flatnonzero(v[:-1] != v[1:]) + 1  # prefix sizes at value changes
    thresholds = np.concatenate(([-np.inf], (v[boundaries - 1] + v[boundaries]) / 2.0, [np.inf]))
    prefix = np.concatenate(([0], boundaries, [v.size]))

    # polarity +1 predicts +1 above the threshold: errors are the positives at
    # or below it plus the negatives above it
    err_pos = cum_pos[prefix] + (cum_neg[-1] - cum_neg[prefix])
    err_neg = total - err_pos
    return thresholds, err_pos, err_neg


def _exact_error(values: np.ndarray, labels: np.ndarray, weights: np.ndarray,
                 threshold: float, polarity: int) -> float:
    preds = np.where(values > threshold, polarity, -polarity)
    return float(weights[preds != labels].sum())


def train_stump(dataset: Dataset, weights: np.ndarray, executor: Executor | None = None) -> Stump:
    """Exhaustively search every (feature, threshold, polarity) for minimum weighted error.

    `weights` must be a probability vector. If every feature is constant the
    -inf sentinel yields the stump predicting the majority-weight class.
    An executor, when given, distributes the per-feature scans; the result
    is independent of scheduling because the final selection re-scores
    near-tied candidates exactly and applies the total tie-break.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (dataset.n,):
        raise ArgumentError("weights must have one entry per instance")
    if np.any(weights < 0):
        raise ArgumentError("weights must be non-negative")
    if abs(weights.sum() - 1.0) > 1e-9:
        raise ArgumentError("weights must sum to 1")

    X, y = dataset.features, dataset.labels
    features = range(dataset.n_features)
    if executor is None:
        scans = [_scan_feature(X[:, f], y, weights) for f in features]
    else:
        scans = list(executor.map(lambda f: _scan_feature(X[:, f], y, weights), features))

    best_fast = min(min(err_p.min(), err_n.min()) for _, err_p, err_n in scans)

    best: tuple | None = None
    for f, (thresholds, err_p, err_n) in enumerate(scans):
        for errs, polarity in ((err_p, 1), (err_n, -1)):
            for idx in np.flatnonzero(errs <= best_fast + _TIE_SLACK):
                threshold = float(thresholds[idx])
                exact = _exact_error(X[:, f], y, weights, threshold, polarity)
                key = (exact, f, threshold, _POLARITY_RANK[polarity])
                if best is None or key < best:
                    best = key
    error, f, threshold, pol_rank = best
    return Stump(feature_index=f, threshold=threshold, polarity=1 if pol_rank == 0 else -1,
                 weighted_error=error)
