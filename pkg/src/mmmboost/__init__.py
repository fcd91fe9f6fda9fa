"""Fairness-aware boosting with multi-attribute mistreatment costs and Pareto selection."""

from .boost import (
    BoostConfig,
    Ensemble,
    TrainingTrace,
    alpha,
    cumulative_deltas,
    discrimination_cost,
    fairness_cost,
    load_model,
    predict,
    save_model,
    train,
    update_distribution,
)
from .data import Dataset, DatasetSchema, ProtectedSpec, load_csv, split
from .evaluate import EvalReport, auc_score, evaluate, synth_biased, toy_report
from .metrics import (
    FairnessReport,
    GroupRates,
    SolutionVector,
    cdm,
    class_biased,
    dm,
    evaluate_fairness,
    group_rates,
    mmm,
    objective_vector,
)
from .pareto import (
    ParetoFront,
    PreferenceVector,
    export_bundle,
    load_bundle,
    pareto_front,
    pseudo_weights,
    select,
)
from .stump import Stump, predict_stump, train_stump

__version__ = "0.1.0"

__all__ = [
    "BoostConfig",
    "Dataset",
    "DatasetSchema",
    "Ensemble",
    "EvalReport",
    "FairnessReport",
    "GroupRates",
    "ParetoFront",
    "PreferenceVector",
    "ProtectedSpec",
    "SolutionVector",
    "Stump",
    "TrainingTrace",
    "alpha",
    "auc_score",
    "cdm",
    "class_biased",
    "cumulative_deltas",
    "discrimination_cost",
    "dm",
    "evaluate",
    "evaluate_fairness",
    "export_bundle",
    "fairness_cost",
    "group_rates",
    "load_bundle",
    "load_csv",
    "load_model",
    "mmm",
    "objective_vector",
    "pareto_front",
    "predict",
    "predict_stump",
    "pseudo_weights",
    "save_model",
    "select",
    "split",
    "synth_biased",
    "toy_report",
    "train",
    "train_stump",
    "update_distribution",
]
