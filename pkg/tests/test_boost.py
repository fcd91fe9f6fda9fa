import math

import numpy as np
import pytest

from mmmboost.boost import (
    BoostConfig,
    Ensemble,
    alpha,
    cumulative_deltas,
    discrimination_cost,
    fairness_cost,
    predict,
    load_model,
    save_model,
    train,
    update_distribution,
    _fairness_costs,
)
from mmmboost.data import Dataset
from mmmboost.errors import ArgumentError, TrainingError
from mmmboost.metrics import objective_vector
from mmmboost.stump import Stump, train_stump

from conftest import random_dataset


def reference_adaboost(dataset, rounds, alpha_cap, epsilon_floor):
    """Plain AdaBoost loop, written independently of the production trainer.

    Shares only the weak-learner trainer (whose own correctness is covered by
    the exhaustive-search oracle); the loop arithmetic mirrors the documented
    update: w <- w * exp(-alpha * sign) / Z with sign +1 on correct rounds.
    """
    n = dataset.n
    w = np.full(n, 1.0 / n)
    stumps, alphas, dists = [], [], []
    for _ in range(rounds):
        stump = train_stump(dataset, w)
        eps = stump.weighted_error
        if eps >= 0.5 - epsilon_floor:
            break
        eps_c = min(max(eps, epsilon_floor), 0.5 - epsilon_floor)
        a = min(0.5 * math.log((1.0 - eps_c) / eps_c), alpha_cap)
        preds = stump.predict(dataset.features)
        sign = np.where(preds == dataset.labels, 1.0, -1.0)
        w = w * np.exp(-a * sign)
        w = w / w.sum()
        stumps.append(stump)
        alphas.append(a)
        dists.append(w.copy())
    return stumps, alphas, dists


class TestAlpha:
    def test_random_guess(self):
        assert abs(alpha(0.5)) <= 1e-8

    def test_closed_form(self):
        assert alpha(0.2) == pytest.approx(0.5 * math.log(4.0), abs=1e-12)

    def test_perfect_stump_capped(self):
        assert alpha(0.0) == pytest.approx(0.5 * math.log(1e10))

    def test_out_of_range(self):
        with pytest.raises(ArgumentError):
            alpha(1.5)


class TestCumulativeDeltas:
    def test_single_perfect_member(self, tiny_dataset):
        stump = train_stump(tiny_dataset, np.full(4, 0.25))
        deltas = cumulative_deltas(Ensemble(members=((stump, 1.0),)), tiny_dataset)
        assert np.all(deltas == 0.0)

    def test_two_member_hand_computed(self):
        # 6 instances, 1 feature; stumps at 2.5 and 4.5, alphas 2 and 1.
        # H2 margins: x>4.5 -> 3, 2.5<x<=4.5 -> 1, x<=2.5 -> -3; preds by sign.
        ds = Dataset(
            features=np.array([[1.0], [2.0], [3.0], [4.0], [5.0], [6.0]]),
            labels=np.array([-1, -1, 1, -1, 1, 1]),
            group_masks=np.array([[True, False, True, False, True, False]]),
            attributes=("g",),
            feature_names=("x",),
        )
        members = (
            (Stump(0, 2.5, 1, 0.0), 2.0),
            (Stump(0, 4.5, 1, 0.0), 1.0),
        )
        deltas = cumulative_deltas(Ensemble(members=members), ds)
        # preds = [-1,-1,+1,+1,+1,+1]; errors: instance 4 (FP, non-protected)
        # FNR: s: 0/2, ns: 0/1 -> delta 0; FPR: s: 0/1, ns: 1/2 -> delta -0.5
        assert deltas[0, 0] == pytest.approx(0.0, abs=1e-15)
        assert deltas[0, 1] == pytest.approx(-0.5, abs=1e-15)

    def test_zero_margin_counts_positive(self):
        ds = Dataset(
            features=np.array([[1.0], [2.0]]),
            labels=np.array([1, -1]),
            group_masks=np.array([[True, False]]),
            attributes=("g",),
            feature_names=("x",),
        )
        members = (
            (Stump(0, 1.5, 1, 0.0), 1.0),
            (Stump(0, 1.5, -1, 0.0), 1.0),
        )
        ensemble = Ensemble(members=members)
        assert np.all(ensemble.margins(ds.features) == 0.0)
        deltas = cumulative_deltas(ensemble, ds)
        # both predicted +1: FNR_s = 0, FPR_ns = 1
        assert deltas[0, 0] == 0.0
        assert deltas[0, 1] == pytest.approx(-1.0)


class TestCosts:
    def test_protected_positive_pays_delta(self):
        costs = discrimination_cost(1, np.array([True]), np.array([[0.3, 0.1]]))
        assert costs[0] == pytest.approx(1.3, abs=1e-15)

    def test_fall_through_default(self):
        # positive in the complement while the protected group is discriminated
        costs = discrimination_cost(1, np.array([False]), np.array([[0.3, 0.1]]))
        assert costs[0] == 1.0

    def test_zero_deltas_all_ones(self):
        costs = discrimination_cost(1, np.array([True, False]), np.zeros((2, 2)))
        assert costs.tolist() == [1.0, 1.0]

    def test_fairness_cost_correct_instance(self):
        assert fairness_cost(1, np.array([True]), 1, np.array([[0.4, 0.0]])) == 1.0

    def test_fairness_cost_max_over_attributes(self):
        deltas = np.array([[0.3, 0.0], [0.05, 0.0]])
        masks = np.array([True, True])
        assert fairness_cost(1, masks, -1, deltas) == pytest.approx(1.3, abs=1e-15)

    def test_fairness_cost_zero_deltas(self):
        assert fairness_cost(1, np.array([True]), -1, np.zeros((1, 2))) == 1.0

    def test_vectorized_costs_match_instancewise(self):
        rng = np.random.default_rng(5)
        ds = random_dataset(rng, 80, 2, k=3)
        preds = rng.choice([-1, 1], size=80)
        deltas = rng.uniform(-0.5, 0.5, size=(3, 2))
        fcs = _fairness_costs(ds, preds, deltas)
        for i in range(ds.n):
            expected = fairness_cost(
                int(ds.labels[i]), ds.group_masks[:, i], int(preds[i]), deltas
            )
            assert fcs[i] == pytest.approx(expected, abs=1e-15)
            assert 1.0 <= fcs[i] <= 2.0


class TestUpdateDistribution:
    def test_identity_update(self):
        prev = np.array([0.25, 0.25, 0.25, 0.25])
        preds = np.array([1, 1, -1, -1])
        out = update_distribution(prev, np.ones(4), 0.0, preds, preds)
        assert np.allclose(out, prev)

    def test_hand_computed_two_instances(self):
        prev = np.array([0.5, 0.5])
        fcs = np.array([1.5, 1.0])
        preds = np.array([1, 1])
        labels = np.array([-1, 1])  # instance 1 misclassified
        out = update_distribution(prev, fcs, math.log(2.0), preds, labels)
        # unnormalized {0.5*1.5*2, 0.5*1*0.5} = {1.5, 0.25} -> {6/7, 1/7}
        assert out[0] == pytest.approx(6.0 / 7.0, abs=1e-12)
        assert out[1] == pytest.approx(1.0 / 7.0, abs=1e-12)

    def test_unit_costs_reduce_to_adaboost(self):
        rng = np.random.default_rng(2)
        prev = rng.random(30)
        prev /= prev.sum()
        preds = rng.choice([-1, 1], size=30)
        labels = rng.choice([-1, 1], size=30)
        a = 0.7
        ours = update_distribution(prev, np.ones(30), a, preds, labels)
        reference = prev * np.exp(-a * np.where(preds == labels, 1.0, -1.0))
        reference = reference / reference.sum()
        assert np.array_equal(ours, reference)


class TestTrain:
    def test_vanilla_drives_training_loss_to_zero(self):
        rng = np.random.default_rng(0)
        n = 20
        labels = np.array([1] * 10 + [-1] * 10)
        features = np.column_stack(
            [np.where(labels == 1, 1.0, -1.0) + rng.normal(0, 0.1, n), rng.normal(0, 1, n)]
        )
        ds = Dataset(
            features=features,
            labels=labels,
            group_masks=rng.random((1, n)) < 0.5,
            attributes=("g",),
            feature_names=("x0", "x1"),
        )
        trace = train(ds, BoostConfig(rounds=10, mode="vanilla"))
        assert trace.solutions[-1].o1 == 0.0

    def test_structural_lengths(self):
        ds = random_dataset(np.random.default_rng(4), 60, 3, k=2)
        trace = train(ds, BoostConfig(rounds=12))
        assert len(trace.solutions) == len(trace.ensemble.members)
        assert len(trace.solutions) <= 12
        assert trace.fairness_deltas.shape == (len(trace.solutions), 2, 2)

    def test_distribution_invariants(self):
        ds = random_dataset(np.random.default_rng(8), 50, 3, k=2)
        trace = train(ds, BoostConfig(rounds=15), record_distributions=True)
        for dist in trace.distributions:
            assert abs(dist.sum() - 1.0) <= 1e-9
            assert np.all(dist > 0.0)

    def test_prefix_reproduces_recorded_solutions(self):
        ds = random_dataset(np.random.default_rng(6), 80, 3, k=2)
        trace = train(ds, BoostConfig(rounds=10))
        from mmmboost.boost import hard_labels

        for t in (1, len(trace.solutions) // 2 + 1, len(trace.solutions)):
            prefix = trace.ensemble.prefix(t)
            preds = hard_labels(prefix.margins(ds.features))
            sv = objective_vector(preds, ds, round=t)
            recorded = trace.solutions[t - 1]
            assert (sv.o1, sv.o2, sv.o3) == (recorded.o1, recorded.o2, recorded.o3)

    def test_first_round_no_better_than_chance(self):
        ds = Dataset(
            features=np.ones((4, 1)),
            labels=np.array([1, -1, 1, -1]),
            group_masks=np.ones((1, 4), dtype=bool),
            attributes=("g",),
            feature_names=("x",),
        )
        with pytest.raises(TrainingError) as excinfo:
            train(ds, BoostConfig(rounds=5))
        assert "weighted_error" in excinfo.value.diagnostics

    def test_vanilla_equivalence_reference(self):
        rng = np.random.default_rng(123)
        for _ in range(3):
            ds = random_dataset(rng, int(rng.integers(20, 80)), int(rng.integers(2, 5)))
            config = BoostConfig(rounds=8, mode="vanilla")
            trace = train(ds, config, record_distributions=True)
            stumps, alphas, dists = reference_adaboost(ds, 8, config.alpha_cap, config.epsilon_floor)
            assert [s for s, _ in trace.ensemble.members] == stumps
            assert [a for _, a in trace.ensemble.members] == alphas
            assert len(trace.distributions) == len(dists)
            for ours, ref in zip(trace.distributions, dists):
                assert np.array_equal(ours, ref)

    def test_vanilla_o3_trace_equals_reference_mmm_trace(self):
        from mmmboost.boost import hard_labels
        from mmmboost.metrics import evaluate_fairness

        ds = random_dataset(np.random.default_rng(55), 90, 3, k=2)
        config = BoostConfig(rounds=10, mode="vanilla")
        trace = train(ds, config)
        stumps, alphas, _ = reference_adaboost(ds, 10, config.alpha_cap, config.epsilon_floor)
        margins = np.zeros(ds.n)
        for t, (stump, a) in enumerate(zip(stumps, alphas), start=1):
            margins += a * stump.predict(ds.features)
            reference_mmm = evaluate_fairness(hard_labels(margins), ds).mmm
            assert trace.solutions[t - 1].o3 == pytest.approx(reference_mmm, abs=1e-12)

    def test_fairness_cost_targeting(self):
        ds = random_dataset(np.random.default_rng(13), 70, 3, k=2)
        trace = train(ds, BoostConfig(rounds=6))
        from mmmboost.boost import hard_labels

        for t in range(1, len(trace.solutions) + 1):
            prefix = trace.ensemble.prefix(t)
            preds = hard_labels(prefix.margins(ds.features))
            deltas = trace.fairness_deltas[t - 1]
            fcs = _fairness_costs(ds, preds, deltas)
            assert np.all((fcs >= 1.0) & (fcs <= 2.0))
            boosted = fcs > 1.0
            assert np.all(preds[boosted] != ds.labels[boosted])
            # correctly classified instances never pay more than 1
            assert np.all(fcs[preds == ds.labels] == 1.0)

    def test_holdout_objective_split(self):
        from mmmboost.data import split

        ds = random_dataset(np.random.default_rng(21), 120, 3, k=2)
        trace = train(ds, BoostConfig(rounds=6, objective_split="holdout", holdout_fraction=0.25, seed=3))
        assert len(trace.solutions) >= 1
        # fitting saw only the non-holdout part, carved with the same seed
        fit_part, _ = split(ds, 0.25, 3)
        assert trace.final_weights.size == fit_part.n < ds.n


class TestPredict:
    def test_single_stump_sign(self, tiny_dataset):
        stump = train_stump(tiny_dataset, np.full(4, 0.25))
        ensemble = Ensemble(members=((stump, 1.0),))
        labels, scores = predict(ensemble, tiny_dataset.features)
        assert np.array_equal(labels, tiny_dataset.labels)
        assert set(np.round(scores, 12)) <= {-1.0, 1.0}

    def test_weighted_disagreement(self):
        members = (
            (Stump(0, 0.5, 1, 0.1), 2.0),
            (Stump(0, 0.5, -1, 0.1), 1.0),
        )
        label, score = predict(Ensemble(members=members), np.array([1.0]))
        assert label == 1
        assert score == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_zero_margin_is_positive(self):
        members = (
            (Stump(0, 0.5, 1, 0.1), 1.0),
            (Stump(0, 0.5, -1, 0.1), 1.0),
        )
        label, score = predict(Ensemble(members=members), np.array([1.0]))
        assert score == 0.0
        assert label == 1


def test_model_file_roundtrip(tmp_path):
    ds = random_dataset(np.random.default_rng(17), 40, 2, k=2)
    trace = train(ds, BoostConfig(rounds=5))
    path = tmp_path / "model.json"
    save_model(trace, path)
    record = load_model(path)
    assert [s.threshold for s, _ in record.ensemble.members] == [
        s.threshold for s, _ in trace.ensemble.members
    ]
    assert [a for _, a in record.ensemble.members] == [a for _, a in trace.ensemble.members]
    assert record.solutions == trace.solutions
    assert np.array_equal(record.fairness_deltas, trace.fairness_deltas)
    assert record.attributes == trace.attributes


def test_model_file_encodes_infinite_threshold(tmp_path):
    members = ((Stump(0, -np.inf, -1, 0.4), 0.5),)
    trace_like = train_min_trace(members)
    save_model(trace_like, tmp_path / "m.json")
    record = load_model(tmp_path / "m.json")
    assert record.ensemble.members[0][0].threshold == -np.inf


def train_min_trace(members):
    from mmmboost.boost import TrainingTrace
    from mmmboost.metrics import SolutionVector

    return TrainingTrace(
        ensemble=Ensemble(members=members),
        solutions=(SolutionVector(0.1, 0.1, 0.1, 1),),
        fairness_deltas=np.zeros((1, 1, 2)),
        final_weights=np.array([1.0]),
        config=BoostConfig(rounds=1),
        attributes=("g",),
    )


class TestConfigValidation:
    def test_rounds_must_be_positive(self):
        with pytest.raises(ArgumentError):
            BoostConfig(rounds=0)

    def test_epsilon_floor_range(self):
        with pytest.raises(ArgumentError):
            BoostConfig(rounds=5, epsilon_floor=0.5)
        with pytest.raises(ArgumentError):
            BoostConfig(rounds=5, epsilon_floor=0.0)

    def test_unknown_mode(self):
        with pytest.raises(ArgumentError):
            BoostConfig(rounds=5, mode="hybrid")

    def test_resolve_threads(self, monkeypatch):
        from mmmboost.boost import THREADS_ENV_VAR, resolve_threads

        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        assert resolve_threads() == 1
        monkeypatch.setenv(THREADS_ENV_VAR, "3")
        assert resolve_threads() == 3
        monkeypatch.setenv(THREADS_ENV_VAR, "0")
        assert resolve_threads() >= 1
        monkeypatch.setenv(THREADS_ENV_VAR, "-2")
        with pytest.raises(ArgumentError):
            resolve_threads()
        monkeypatch.setenv(THREADS_ENV_VAR, "lots")
        with pytest.raises(ArgumentError):
            resolve_threads()

    def test_train_under_thread_cap_matches_sequential(self, monkeypatch):
        from mmmboost.boost import THREADS_ENV_VAR

        ds = random_dataset(np.random.default_rng(31), 80, 4, k=2)
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        sequential = train(ds, BoostConfig(rounds=6))
        monkeypatch.setenv(THREADS_ENV_VAR, "4")
        threaded = train(ds, BoostConfig(rounds=6))
        assert [s for s, _ in sequential.ensemble.members] == [s for s, _ in threaded.ensemble.members]
        assert np.array_equal(sequential.final_weights, threaded.final_weights)
