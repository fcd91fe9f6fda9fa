"""Dataset schema, CSV ingestion, one-hot encoding, group masks, and splitting.

Labels are mapped onto {+1, -1}; each protected attribute is binarized into
a protected group (mask true) and its complement. Categorical features are
one-hot encoded with a stable, lexicographic column order so that repeated
loads of the same file produce identical matrices.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ArgumentError, DegenerateDataError, RowError, SchemaError

NUMERIC = "numeric"
CATEGORICAL = "categorical"

MISSING_ERROR = "error"
MISSING_DROP_ROW = "drop_row"


@dataclass(frozen=True)
class ProtectedSpec:
    """One protected attribute: raw values in `protected_values` form the protected group."""

    column: str
    protected_values: frozenset[str]

    def __post_init__(self):
        if not self.protected_values:
            raise SchemaError(f"protected attribute {self.column!r} has no protected_values")
        object.__setattr__(self, "protected_values", frozenset(self.protected_values))


@dataclass(frozen=True)
class DatasetSchema:
    """Column roles for a delimited data file.

    `feature_columns` maps column name to kind ("numeric" or "categorical").
    `missing_policy` is "error" (reject the file) or "drop_row".
    """

    label_column: str
    positive_label: str
    protected_specs: tuple[ProtectedSpec, ...]
    feature_columns: tuple[tuple[str, str], ...]
    missing_policy: str = MISSING_ERROR

    def __post_init__(self):
        object.__setattr__(self, "protected_specs", tuple(self.protected_specs))
        object.__setattr__(self, "feature_columns", tuple(tuple(fc) for fc in self.feature_columns))
        if not self.protected_specs:
            raise SchemaError("schema needs at least one protected attribute")
        protected_cols = [spec.column for spec in self.protected_specs]
        if len(set(protected_cols)) != len(protected_cols):
            raise SchemaError("protected attribute columns must be unique")
        feature_cols = [name for name, _ in self.feature_columns]
        if self.label_column in feature_cols or self.label_column in protected_cols:
            raise SchemaError(f"label column {self.label_column!r} may not double as a feature or protected attribute")
        for name, kind in self.feature_columns:
            if kind not in (NUMERIC, CATEGORICAL):
                raise SchemaError(f"feature {name!r} has unknown kind {kind!r}")
        if self.missing_policy not in (MISSING_ERROR, MISSING_DROP_ROW):
            raise SchemaError(f"unknown missing_policy {self.missing_policy!r}")

    @classmethod
    def from_json(cls, document: dict) -> "DatasetSchema":
        try:
            protected = tuple(
                ProtectedSpec(column=p["column"], protected_values=frozenset(p["protected_values"]))
                for p in document["protected"]
            )
            features = tuple((f["column"], f["kind"]) for f in document["features"])
            return cls(
                label_column=document["label_column"],
                positive_label=document["positive_label"],
                protected_specs=protected,
                feature_columns=features,
                missing_policy=document.get("missing_policy", MISSING_ERROR),
            )
        except KeyError as exc:
            raise SchemaError(f"schema document is missing key {exc}") from exc

    @classmethod
    def from_json_file(cls, path: str | Path) -> "DatasetSchema":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


# counts columns: protected/positive, complement/positive, protected/negative, complement/negative
_COUNT_COLS = ("s_pos", "ns_pos", "s_neg", "ns_neg")


@dataclass(frozen=True)
class Dataset:
    """Immutable numeric dataset: features, +/-1 labels, and protected-group masks.

    `group_masks` has shape (k, n) with row j true where the instance belongs
    to the protected group of attribute j. `counts` has shape (k, 4) holding
    the group-by-class cardinalities (s+, s̄+, s-, s̄-) for each attribute.

    Loading rejects single-class files, but subsets (e.g. the documented
    unstratified split fallback) may hold a single class; operations that
    need both classes raise DegenerateDataError at the point of use.
    """

    features: np.ndarray
    labels: np.ndarray
    group_masks: np.ndarray
    attributes: tuple[str, ...]
    feature_names: tuple[str, ...]
    counts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        masks = np.asarray(self.group_masks, dtype=bool)
        if features.ndim != 2:
            raise ArgumentError("features must be a 2-D matrix")
        n = features.shape[0]
        if labels.shape != (n,):
            raise ArgumentError("labels length must match feature rows")
        if masks.ndim != 2 or masks.shape[1] != n:
            raise ArgumentError("group_masks must have shape (k, n)")
        if masks.shape[0] != len(self.attributes):
            raise ArgumentError("one mask row per protected attribute required")
        if not np.all(np.isin(labels, (-1, 1))):
            raise ArgumentError("labels must take values in {+1, -1}")
        counts = _group_class_counts(masks, labels)
        for arr in (features, labels, masks, counts):
            arr.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "group_masks", masks)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_attributes(self) -> int:
        return self.group_masks.shape[0]

    @property
    def imbalance_ratio(self) -> float:
        """Minority over majority class size; reported, never enforced."""
        n_pos = int(np.count_nonzero(self.labels == 1))
        sizes = sorted((n_pos, self.n - n_pos))
        return sizes[0] / sizes[1] if sizes[1] else float("nan")

    def subset(self, indices: np.ndarray) -> "Dataset":
        indices = np.asarray(indices)
        return Dataset(
            features=self.features[indices],
            labels=self.labels[indices],
            group_masks=self.group_masks[:, indices],
            attributes=self.attributes,
            feature_names=self.feature_names,
        )


def _group_class_counts(masks: np.ndarray, labels: np.ndarray) -> np.ndarray:
    pos = labels == 1
    counts = np.empty((masks.shape[0], 4), dtype=np.int64)
    for j, mask in enumerate(masks):
        counts[j] = (
            np.count_nonzero(mask & pos),
            np.count_nonzero(~mask & pos),
            np.count_nonzero(mask & ~pos),
            np.count_nonzero(~mask & ~pos),
        )
    return counts


def _parse_rows(path: str | Path, schema: DatasetSchema) -> tuple[list[dict], str | None]:
    """Read and screen raw rows; returns kept rows and the inferred negative label."""
    drop = schema.missing_policy == MISSING_DROP_ROW
    needed = {schema.label_column} | {s.column for s in schema.protected_specs} | {
        name for name, _ in schema.feature_columns
    }
    rows: list[dict] = []
    negative_label: str | None = None
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: file has no header row")
        missing_cols = needed - set(reader.fieldnames)
        if missing_cols:
            raise SchemaError(f"{path}: header is missing columns {sorted(missing_cols)}")
        protected_cols = [s.column for s in schema.protected_specs]
        for line, raw in enumerate(reader, start=2):
            try:
                row = {"__line__": line}
                for col in needed:
                    value = raw.get(col)
                    if value is None or value == "":
                        raise RowError(line, f"missing value in column {col!r}")
                    row[col] = value
                # raw strings survive here even when the column doubles as a numeric feature
                for col in protected_cols:
                    row[f"__protected__{col}"] = row[col]
                label_value = row[schema.label_column]
                if label_value == schema.positive_label:
                    row["__label__"] = 1
                else:
                    if negative_label is None:
                        negative_label = label_value
                    if label_value != negative_label:
                        raise RowError(
                            line,
                            f"label {label_value!r} is neither {schema.positive_label!r} "
                            f"nor the negative label {negative_label!r}",
                        )
                    row["__label__"] = -1
                for name, kind in schema.feature_columns:
                    if kind == NUMERIC:
                        try:
                            row[name] = float(row[name])
                        except ValueError:
                            raise RowError(line, f"column {name!r} value {row[name]!r} is not numeric") from None
                rows.append(row)
            except RowError:
                if drop:
                    continue
                raise
    return rows, negative_label


def load_csv(path: str | Path, schema: DatasetSchema) -> Dataset:
    """Load an RFC-4180 CSV file into a Dataset according to `schema`.

    Categorical features expand into one indicator column per distinct value,
    ordered lexicographically; exactly one indicator fires per source column
    and row. Protected masks are true where the raw cell value is listed in
    the attribute's protected_values.
    """
    rows, _ = _parse_rows(path, schema)
    if not rows:
        raise DegenerateDataError(f"{path}: no usable rows")

    feature_names: list[str] = []
    columns: list[np.ndarray] = []
    for name, kind in schema.feature_columns:
        if kind == NUMERIC:
            feature_names.append(name)
            columns.append(np.array([row[name] for row in rows], dtype=np.float64))
        else:
            levels = sorted({row[name] for row in rows})
            raw = [row[name] for row in rows]
            for level in levels:
                feature_names.append(f"{name}={level}")
                columns.append(np.array([1.0 if v == level else 0.0 for v in raw]))
    features = np.column_stack(columns) if columns else np.empty((len(rows), 0))

    labels = np.array([row["__label__"] for row in rows], dtype=np.int64)
    if not np.any(labels == 1) or not np.any(labels == -1):
        raise DegenerateDataError(f"{path}: every class needs at least one instance")
    masks = np.array(
        [
            [row[f"__protected__{spec.column}"] in spec.protected_values for row in rows]
            for spec in schema.protected_specs
        ],
        dtype=bool,
    )
    return Dataset(
        features=features,
        labels=labels,
        group_masks=masks,
        attributes=tuple(spec.column for spec in schema.protected_specs),
        feature_names=tuple(feature_names),
    )


def split(dataset: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic stratified train/test split; returns (train, test).

    Stratifies on the class label so both parts carry both classes whenever
    possible; a class with fewer than 2 instances triggers a warning and an
    unstratified split. Rounding is half-up on `test_fraction * n`, clamped
    so neither part is empty.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ArgumentError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    class_sizes = [np.count_nonzero(dataset.labels == c) for c in (1, -1)]

    if min(class_sizes) < 2:
        warnings.warn(
            "a class has fewer than 2 instances; falling back to an unstratified split",
            stacklevel=2,
        )
        n_test = _clamped_round(test_fraction * dataset.n, dataset.n)
        order = rng.permutation(dataset.n)
        test_idx, train_idx = order[:n_test], order[n_test:]
    else:
        test_parts, train_parts = [], []
        for c in (1, -1):
            members = np.flatnonzero(dataset.labels == c)
            n_test_c = _clamped_round(test_fraction * members.size, members.size)
            order = rng.permutation(members.size)
            test_parts.append(members[order[:n_test_c]])
            train_parts.append(members[order[n_test_c:]])
        test_idx = np.concatenate(test_parts)
        train_idx = np.concatenate(train_parts)

    return dataset.subset(np.sort(train_idx)), dataset.subset(np.sort(test_idx))


def _clamped_round(x: float, limit: int) -> int:
    return min(max(int(math.floor(x + 0.5)), 1), limit - 1)
