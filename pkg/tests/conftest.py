"""Shared fixtures: tiny datasets, the instance-level toy populations, CSV writers."""

from __future__ import annotations

import numpy as np
import pytest

from mmmboost.data import Dataset

# Joint group-by-class cells of the toy population. Each entry maps a
# (sex, race) cell to its size and, per classifier, the number of
# misclassified instances in that cell. Solving the per-group rate equations
# for the + class (cells MW=75, MB=25, FW=25, FB=25) and the - class
# (cells MW=250, MB=750, FW=250, FB=250) gives integer error counts that
# reproduce every FNR/FPR bar of the four hypothetical classifiers.
TOY_POS_CELLS = {("M", "W"): 75, ("M", "B"): 25, ("F", "W"): 25, ("F", "B"): 25}
TOY_NEG_CELLS = {("M", "W"): 250, ("M", "B"): 750, ("F", "W"): 250, ("F", "B"): 250}

TOY_ERRORS = {
    "Cf1": {
        "pos": {("M", "W"): 35, ("M", "B"): 25, ("F", "W"): 5, ("F", "B"): 25},
        "neg": {("M", "W"): 100, ("M", "B"): 0, ("F", "W"): 50, ("F", "B"): 0},
    },
    "Cf2": {
        "pos": {("M", "W"): 60, ("M", "B"): 20, ("F", "W"): 20, ("F", "B"): 20},
        "neg": {("M", "W"): 25, ("M", "B"): 75, ("F", "W"): 25, ("F", "B"): 25},
    },
    "Cf3": {
        "pos": {("M", "W"): 10, ("M", "B"): 10, ("F", "W"): 10, ("F", "B"): 10},
        "neg": {("M", "W"): 50, ("M", "B"): 150, ("F", "W"): 50, ("F", "B"): 50},
    },
    "Cf4": {
        "pos": {("M", "W"): 25, ("M", "B"): 5, ("F", "W"): 5, ("F", "B"): 5},
        "neg": {("M", "W"): 50, ("M", "B"): 250, ("F", "W"): 50, ("F", "B"): 50},
    },
}


def toy_population(classifier: str) -> tuple[Dataset, np.ndarray]:
    """Instance-level dataset plus predictions realizing one toy classifier's rates."""
    errors = TOY_ERRORS[classifier]
    labels, sexes, races, preds = [], [], [], []
    for label, cells, cell_errors in ((1, TOY_POS_CELLS, errors["pos"]), (-1, TOY_NEG_CELLS, errors["neg"])):
        for (sex, race), size in cells.items():
            wrong = cell_errors[(sex, race)]
            labels += [label] * size
            sexes += [sex] * size
            races += [race] * size
            preds += [-label] * wrong + [label] * (size - wrong)
    labels = np.array(labels)
    dataset = Dataset(
        features=np.zeros((labels.size, 1)),
        labels=labels,
        group_masks=np.array([[s == "F" for s in sexes], [r == "B" for r in races]]),
        attributes=("Sex", "Race"),
        feature_names=("dummy",),
    )
    return dataset, np.array(preds)


def random_dataset(rng: np.random.Generator, n: int, d: int, k: int = 1) -> Dataset:
    """Random dense dataset with both classes and non-trivial masks."""
    labels = rng.choice([-1, 1], size=n)
    labels[0], labels[1] = 1, -1  # guarantee both classes
    return Dataset(
        features=rng.normal(size=(n, d)),
        labels=labels,
        group_masks=rng.random((k, n)) < 0.5,
        attributes=tuple(f"a{j}" for j in range(k)),
        feature_names=tuple(f"f{i}" for i in range(d)),
    )


@pytest.fixture
def tiny_dataset() -> Dataset:
    """Four instances, one feature, one protected attribute; separable at 2.5."""
    return Dataset(
        features=np.array([[1.0], [2.0], [3.0], [4.0]]),
        labels=np.array([-1, -1, 1, 1]),
        group_masks=np.array([[True, False, True, False]]),
        attributes=("grp",),
        feature_names=("x",),
    )


SCHEMA_JSON = {
    "label_column": "outcome",
    "positive_label": "yes",
    "protected": [
        {"column": "sex", "protected_values": ["F"]},
        {"column": "race", "protected_values": ["B"]},
    ],
    "features": [
        {"column": "age", "kind": "numeric"},
        {"column": "job", "kind": "categorical"},
    ],
    "missing_policy": "error",
}

CSV_HEADER = "age,job,sex,race,outcome\n"
CSV_ROWS = [
    "25,clerk,F,W,yes",
    "52,teacher,M,B,no",
    "47,clerk,M,B,yes",
    "33,nurse,F,W,no",
]


@pytest.fixture
def csv_file(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text(CSV_HEADER + "\n".join(CSV_ROWS) + "\n")
    return path


@pytest.fixture
def schema_file(tmp_path):
    import json

    path = tmp_path / "schema.json"
    path.write_text(json.dumps(SCHEMA_JSON))
    return path


def write_training_csv(path, n: int = 120, seed: int = 5) -> None:
    """A learnable CSV fixture with two protected columns for CLI tests."""
    rng = np.random.default_rng(seed)
    lines = ["x0,x1,sex,race,outcome"]
    for i in range(n):
        positive = i % 4 == 0
        x = rng.normal(1.2 if positive else -1.2, 1.0, size=2)
        sex = "F" if rng.random() < 0.5 else "M"
        race = "B" if rng.random() < 0.5 else "W"
        lines.append(f"{x[0]:.4f},{x[1]:.4f},{sex},{race},{'yes' if positive else 'no'}")
    path.write_text("\n".join(lines) + "\n")


TRAIN_SCHEMA_JSON = {
    "label_column": "outcome",
    "positive_label": "yes",
    "protected": [
        {"column": "sex", "protected_values": ["F"]},
        {"column": "race", "protected_values": ["B"]},
    ],
    "features": [
        {"column": "x0", "kind": "numeric"},
        {"column": "x1", "kind": "numeric"},
    ],
}
