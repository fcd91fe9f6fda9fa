"""Static reporting from a result bundle: delimited tables and rendered figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .boost import ModelRecord

_PAIRS = ((0, 1), (0, 2), (1, 2))
_LOSS_LABELS = ("O1 (0-1 loss)", "O2 (balanced loss)", "O3 (worst group gap)")


def write_solutions_csv(bundle: dict, path: str | Path) -> Path:
    """Per-round losses with front membership, pseudo-weights, and the selected marker."""
    path = Path(path)
    front_rows = {bundle["solutions"][i]["round"]: w
                  for i, w in zip(bundle["front_indices"], bundle["pseudo_weights"])}
    selected_round = bundle["selected"]["round"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "o1", "o2", "o3", "on_front", "w1", "w2", "w3", "selected"])
        for s in bundle["solutions"]:
            weight = front_rows.get(s["round"])
            writer.writerow(
                [
                    s["round"], s["o1"], s["o2"], s["o3"],
                    int(weight is not None),
                    *(weight if weight is not None else ("", "", "")),
                    int(s["round"] == selected_round),
                ]
            )
    return path


def write_front_eval_csv(bundle: dict, path: str | Path) -> Path:
    """Test metrics of every front member, one row per round."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "acc", "wc_acc", "auc", "gm", "mmm"])
        for entry in bundle["eval"]:
            writer.writerow([entry["round"], entry["acc"], entry["wc_acc"],
                             entry["auc"], entry["gm"], entry["mmm"]])
    return path


def render_objective_figure(bundle: dict, path: str | Path) -> Path:
    """Three pairwise loss scatters: all rounds, front highlighted, selection starred."""
    path = Path(path)
    solutions = bundle["solutions"]
    values = [[s["o1"], s["o2"], s["o3"]] for s in solutions]
    front_set = {solutions[i]["round"] for i in bundle["front_indices"]}
    selected_round = bundle["selected"]["round"]

    fig, axes = plt.subplots(1, 3, figsize=(12.5, 4.0))
    for ax, (a, b) in zip(axes, _PAIRS):
        xs = [v[a] for v in values]
        ys = [v[b] for v in values]
        ax.scatter(xs, ys, s=12, c="lightgray", label="all rounds")
        fx = [v[a] for v, s in zip(values, solutions) if s["round"] in front_set]
        fy = [v[b] for v, s in zip(values, solutions) if s["round"] in front_set]
        ax.scatter(fx, fy, s=26, c="tab:blue", label="front")
        sel = next(v for v, s in zip(values, solutions) if s["round"] == selected_round)
        ax.scatter([sel[a]], [sel[b]], marker="*", s=180, c="tab:red", label="selected")
        ax.set_xlabel(_LOSS_LABELS[a])
        ax.set_ylabel(_LOSS_LABELS[b])
    axes[0].legend(loc="best", fontsize=8)
    fig.suptitle(f"Loss trade-offs ({bundle['meta'].get('dataset', 'run')})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_delta_figure(model: ModelRecord, path: str | Path) -> Path:
    """Per-attribute |delta FNR| and |delta FPR| traces over boosting rounds."""
    path = Path(path)
    rounds = range(1, model.fairness_deltas.shape[0] + 1)
    fig, (ax_fnr, ax_fpr) = plt.subplots(1, 2, figsize=(10.0, 4.0), sharey=True)
    for j, name in enumerate(model.attributes):
        ax_fnr.plot(rounds, abs(model.fairness_deltas[:, j, 0]), label=name)
        ax_fpr.plot(rounds, abs(model.fairness_deltas[:, j, 1]), label=name)
    ax_fnr.set_title("|delta FNR| per round")
    ax_fpr.set_title("|delta FPR| per round")
    for ax in (ax_fnr, ax_fpr):
        ax.set_xlabel("round")
        ax.legend(fontsize=8)
    ax_fnr.set_ylabel("absolute rate gap")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_report(bundle: dict, out_dir: str | Path, model: ModelRecord | None = None) -> list[Path]:
    """Render every table and figure for one bundle into `out_dir`."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [
        write_solutions_csv(bundle, out_dir / "solutions.csv"),
        write_front_eval_csv(bundle, out_dir / "front_eval.csv"),
        render_objective_figure(bundle, out_dir / "objectives.png"),
    ]
    if model is not None and model.fairness_deltas.size:
        written.append(render_delta_figure(model, out_dir / "fairness_deltas.png"))
    return written
