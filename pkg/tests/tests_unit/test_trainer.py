import numpy as np
import pytest

from wlalign.config import ExperimentConfig
from wlalign.embedding import Trainer, batch_objective, init_embeddings, train
from wlalign.embedding.trainer import TRACE_COLUMNS
from wlalign.graph_core import AnchorSet, Graph
from wlalign.wlalign_enum import Schedule


def cycle(n:int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], directed=False)


def small_config(**values) -> ExperimentConfig:
    defaults = dict(seed=5, d=8, batch_size=20, k_label=1, k_context=2, batches_per_round=2,
                    epochs=2, max_rounds=3, plateau_tol=1e-12, plateau_window=2, fcl_epochs=3)
    defaults.update(values)
    return ExperimentConfig(**defaults)


ANCHORS = AnchorSet([(0, 0), (3, 3), (6, 6), (9, 9)], 12, 12)


@pytest.mark.Unit
@pytest.mark.trainer
def test_no_round_budget():
    config = small_config(max_rounds=0)
    g = cycle(12)

    store, state, trace = train(g, g, ANCHORS, config)

    assert store == init_embeddings(12, 12, 8, config.seeds()["init"], ANCHORS)
    assert len(trace) == 0
    assert state.rounds == 0


@pytest.mark.Unit
@pytest.mark.trainer
def test_interleaved_training():
    g = cycle(12)

    store, state, trace = train(g, g, ANCHORS, small_config())

    assert state.converged
    assert state.rounds == 2
    assert np.array_equal(state.labels_s, state.labels_t)
    assert state.label_count == 12

    frame = trace.to_frame()
    assert list(frame.columns) == TRACE_COLUMNS
    assert len(frame) == 6
    assert list(frame["round"]) == [1, 1, 2, 2, 3, 3]
    assert list(frame["epoch"]) == list(range(6))
    assert np.all(np.diff(frame["label_count"]) >= 0)
    assert trace.label_converged_epoch() == 2

    for s, t in ANCHORS:
        assert np.array_equal(store.node_vectors("s")[s], store.node_vectors("t")[t])
    assert store.is_finite()


@pytest.mark.Unit
@pytest.mark.trainer
def test_training_determinism():
    g = cycle(12)

    store_1, _, trace_1 = train(g, g, ANCHORS, small_config())
    store_2, _, trace_2 = train(g, g, ANCHORS, small_config())
    store_3, _, _ = train(g, g, ANCHORS, small_config(seed=6))

    assert store_1 == store_2
    assert trace_1.to_frame().equals(trace_2.to_frame())
    assert store_1 != store_3


@pytest.mark.Unit
@pytest.mark.trainer
def test_context_only_training():
    g = cycle(12)

    _, state, trace = train(g, g, ANCHORS, small_config(), use_labels=False)

    assert state.rounds == 0
    assert state.label_count == 4
    assert trace.to_frame()["label_objective"].isna().all()
    assert np.all(trace.objectives() < 0)


@pytest.mark.Unit
@pytest.mark.trainer
def test_fcl_schedule():
    g = cycle(12)

    _, state, trace = train(g, g, ANCHORS, small_config(schedule=Schedule.FCL))

    frame = trace.to_frame()
    assert len(frame) == 3
    assert frame["label_converged"].all()
    assert (frame["label_count"] == 12).all()
    assert state.rounds == 2


@pytest.mark.Unit
@pytest.mark.trainer
def test_full_anchor_label_objective():
    g = cycle(12)
    anchors = AnchorSet([(i, i) for i in range(12)], 12, 12)
    trainer = Trainer(g, g, anchors, small_config(max_rounds=1, epochs=1))

    batch = trainer.sampler(1).sample(0)
    label_value, _ = batch_objective(trainer.store, batch)
    positives = np.count_nonzero(batch.label_polarity)

    # positive pairs share their vector: each one scores exactly 1
    assert positives == 20
    assert label_value > 0.
    assert label_value == pytest.approx(positives - np.sum(
        [np.dot(trainer.store.vectors("node", "s", s), trainer.store.vectors("node", "t", t)) /
         (np.linalg.norm(trainer.store.vectors("node", "s", s)) * np.linalg.norm(trainer.store.vectors("node", "t", t)))
         for s, t, polarity in batch.label_pairs() if polarity == 0]))


@pytest.mark.Unit
@pytest.mark.trainer
def test_non_finite_batch_skipped():
    g = cycle(12)
    trainer = Trainer(g, g, ANCHORS, small_config())
    trainer.store.tables["node"][:] = np.nan

    trainer.train_batch(trainer.sampler(1).sample(0))

    assert trainer.skipped_batches == 1
    assert trainer.adam.t == 0
