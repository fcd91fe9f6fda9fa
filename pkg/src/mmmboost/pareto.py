"""Non-dominated filtering, pseudo-weights, and preference-based selection.

All objectives are minimized. A solution dominates another when it is no
worse in every component and strictly better in at least one. Pseudo-weights
express, per front member, the normalized distance from the worst front
value of each objective; the member whose pseudo-weight vector is L1-closest
to a user preference vector wins, ties going to the smallest round.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ArgumentError, BundleFormatError
from .metrics import SolutionVector

UNIFORM_PREFERENCE = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


@dataclass(frozen=True)
class PreferenceVector:
    """Non-negative importance weights over the three losses."""

    u1: float
    u2: float
    u3: float

    def __post_init__(self):
        if min(self.u1, self.u2, self.u3) < 0:
            raise ArgumentError("preference components must be non-negative")

    @classmethod
    def of(cls, values) -> "PreferenceVector":
        values = tuple(float(v) for v in values)
        if len(values) != 3:
            raise ArgumentError(f"preference needs exactly 3 components, got {len(values)}")
        return cls(*values)

    def normalized(self) -> tuple[float, float, float]:
        """Scaled to sum 1; the all-zero vector means no preference, i.e. uniform."""
        total = self.u1 + self.u2 + self.u3
        if total == 0.0:
            return UNIFORM_PREFERENCE
        return (self.u1 / total, self.u2 / total, self.u3 / total)


@dataclass(frozen=True)
class ParetoEntry:
    solution: SolutionVector
    pseudo_weight: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class ParetoFront:
    entries: tuple[ParetoEntry, ...]
    source_count: int

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def rounds(self) -> tuple[int, ...]:
        return tuple(e.solution.round for e in self.entries)

    @property
    def has_weights(self) -> bool:
        return all(e.pseudo_weight is not None for e in self.entries)


def pareto_front(solutions: list[SolutionVector]) -> ParetoFront:
    """Exact non-dominated subset, duplicates collapsed to the earliest round, sorted by round."""
    if not solutions:
        raise ArgumentError("cannot build a front from an empty solution list")
    unique: dict[tuple[float, float, float], SolutionVector] = {}
    for s in solutions:
        key = (s.o1, s.o2, s.o3)
        if key not in unique or s.round < unique[key].round:
            unique[key] = s
    candidates = sorted(unique.values(), key=lambda s: s.round)
    arr = np.array([[s.o1, s.o2, s.o3] for s in candidates])

    # arr[i] is dominated iff some arr[j] is <= everywhere and < somewhere
    le_all = (arr[:, None, :] <= arr[None, :, :]).all(axis=2)
    lt_any = (arr[:, None, :] < arr[None, :, :]).any(axis=2)
    dominated = (le_all & lt_any).any(axis=0)

    entries = tuple(ParetoEntry(solution=s) for s, d in zip(candidates, dominated) if not d)
    return ParetoFront(entries=entries, source_count=len(solutions))


def pseudo_weights(front: ParetoFront) -> ParetoFront:
    """Fill each entry's pseudo-weight from the objective ranges within the front.

    An objective that is constant across the front contributes 0 to both the
    numerator and the normalizer; a front where every objective is constant
    gets uniform weights.
    """
    if len(front) == 0:
        raise ArgumentError("front is empty")
    arr = np.array([[e.solution.o1, e.solution.o2, e.solution.o3] for e in front.entries])
    o_max = arr.max(axis=0)
    o_min = arr.min(axis=0)
    spread = o_max - o_min
    live = spread > 0

    weighted = []
    for e, row in zip(front.entries, arr):
        terms = np.zeros(3)
        terms[live] = (o_max[live] - row[live]) / spread[live]
        total = terms.sum()
        w = terms / total if total > 0 else np.full(3, 1.0 / 3.0)
        weighted.append(ParetoEntry(solution=e.solution, pseudo_weight=tuple(float(x) for x in w)))
    return ParetoFront(entries=tuple(weighted), source_count=front.source_count)


def select(front: ParetoFront, preference: PreferenceVector) -> tuple[int, SolutionVector]:
    """Front member whose pseudo-weight is L1-nearest the normalized preference."""
    if len(front) == 0:
        raise ArgumentError("front is empty")
    if not front.has_weights:
        raise ArgumentError("front has no pseudo-weights; call pseudo_weights first")
    u = preference.normalized()
    best_key = None
    best_entry = None
    for e in front.entries:
        distance = sum(abs(w - ui) for w, ui in zip(e.pseudo_weight, u))
        key = (distance, e.solution.round)
        if best_key is None or key < best_key:
            best_key, best_entry = key, e
    return best_entry.solution.round, best_entry.solution


def export_bundle(path: str | Path, *, meta: dict, solutions: list[SolutionVector],
                  front: ParetoFront, selected_round: int,
                  preference: PreferenceVector, eval_reports: list[dict],
                  created_at: str) -> dict:
    """Write the bundle consumed by the explorer UI and by selection replays.

    `front_indices` index into `solutions` (which carries every round, not
    only front members); `pseudo_weights` and `eval_reports` align with the
    front entries.
    """
    if len(eval_reports) != len(front):
        raise ArgumentError("one eval report per front entry is required")
    round_to_index = {s.round: i for i, s in enumerate(solutions)}
    try:
        front_indices = [round_to_index[r] for r in front.rounds]
    except KeyError as exc:
        raise ArgumentError(f"front round {exc} is not among the solutions") from exc
    selected_solution = next(s for s in solutions if s.round == selected_round)
    document = {
        "meta": meta,
        "created_at": created_at,
        "solutions": [s.to_json() for s in solutions],
        "front_indices": front_indices,
        "pseudo_weights": [list(e.pseudo_weight) for e in front.entries],
        "selected": {
            "round": selected_round,
            "preference": list(preference.normalized()),
            "o1": selected_solution.o1,
            "o2": selected_solution.o2,
            "o3": selected_solution.o3,
        },
        "eval": eval_reports,
    }
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    return document


_BUNDLE_KEYS = ("meta", "solutions", "front_indices", "pseudo_weights", "selected", "eval")


def load_bundle(path: str | Path) -> dict:
    """Read and structurally validate a bundle file; errors carry the failing JSON path."""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as exc:
        raise BundleFormatError("$", f"not valid JSON: {exc}") from exc
    validate_bundle(document)
    return document


def validate_bundle(document: dict) -> None:
    if not isinstance(document, dict):
        raise BundleFormatError("$", "bundle must be a JSON object")
    for key in _BUNDLE_KEYS:
        if key not in document:
            raise BundleFormatError(f"$.{key}", "missing required key")
    solutions = document["solutions"]
    if not isinstance(solutions, list) or not solutions:
        raise BundleFormatError("$.solutions", "must be a non-empty array")
    for i, s in enumerate(solutions):
        for key in ("round", "o1", "o2", "o3"):
            if not isinstance(s, dict) or key not in s:
                raise BundleFormatError(f"$.solutions[{i}].{key}", "missing required key")
    front_indices = document["front_indices"]
    if not isinstance(front_indices, list) or not front_indices:
        raise BundleFormatError("$.front_indices", "must be a non-empty array")
    for i, idx in enumerate(front_indices):
        if not isinstance(idx, int) or not 0 <= idx < len(solutions):
            raise BundleFormatError(f"$.front_indices[{i}]", f"must index into solutions, got {idx!r}")
    weights = document["pseudo_weights"]
    if not isinstance(weights, list) or len(weights) != len(front_indices):
        raise BundleFormatError("$.pseudo_weights", "must align with front_indices")
    for i, w in enumerate(weights):
        if not isinstance(w, list) or len(w) != 3:
            raise BundleFormatError(f"$.pseudo_weights[{i}]", "must be a 3-vector")
    selected = document["selected"]
    if not isinstance(selected, dict) or "round" not in selected:
        raise BundleFormatError("$.selected.round", "missing required key")
    front_rounds = {solutions[i]["round"] for i in front_indices}
    if selected["round"] not in front_rounds:
        raise BundleFormatError("$.selected.round", "selected round is not a front member")
    evals = document["eval"]
    if not isinstance(evals, list) or len(evals) != len(front_indices):
        raise BundleFormatError("$.eval", "must align with front_indices")


def front_from_bundle(document: dict) -> ParetoFront:
    """Rebuild the weighted front stored in a bundle."""
    entries = []
    for idx, w in zip(document["front_indices"], document["pseudo_weights"]):
        s = document["solutions"][idx]
        entries.append(
            ParetoEntry(
                solution=SolutionVector(o1=s["o1"], o2=s["o2"], o3=s["o3"], round=s["round"]),
                pseudo_weight=tuple(float(x) for x in w),
            )
        )
    return ParetoFront(entries=tuple(entries), source_count=len(document["solutions"]))
