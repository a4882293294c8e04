import json
import logging

import numpy as np
import pandas as pd
import pytest

from wlalign.embedding import init_embeddings
from wlalign.evaluation import (AlignmentRanking, EvalReport, bucket_bounds, precision_at_n,
                                precision_curve, rank_by_labels, rank_by_scores, rank_candidates,
                                rsa, rsa_bucket_report)
from wlalign.evaluation.ranking import NOT_RANKED
from wlalign.graph_core import AnchorSet, Graph
from wlalign.relabel import LabelState
from wlalign.wlalign_enum import Direction
from wlalign.wlalign_exceptions import EmptyEvaluationSetException


def ranking(direction, rows) -> AlignmentRanking:
    queries = sorted(rows)
    candidates = np.array([rows[q] for q in queries])
    return AlignmentRanking(Direction(direction), np.array(queries), candidates, np.zeros(candidates.shape))


@pytest.mark.Unit
@pytest.mark.ranking
def test_rank_ties_by_id():
    result = rank_by_scores([4], [[1., 1., 0., 1.]], [7, 3, 5, 9], top_k=10)

    assert result.top_k == 4
    assert list(result.top(4)) == [3, 7, 9, 5]
    assert list(result.top(4, 2)) == [3, 7]
    assert list(result.scores[0]) == [1., 1., 1., 0.]


@pytest.mark.Unit
@pytest.mark.ranking
def test_rank_candidates_cosine():
    store = init_embeddings(3, 4, 2, seed=0)
    store.tables["node"][:3] = [[1., 0.], [0., 1.], [1., 1.]]
    store.tables["node"][3:] = [[0., 2.], [3., 0.], [1., 0.9], [-1., 0.]]

    result = rank_candidates(store, [0, 2], Direction.SOURCE_TO_TARGET, top_k=3)
    assert list(result.top(0)) == [1, 2, 0]
    assert list(result.top(2)) == [2, 0, 1]

    reverse = rank_candidates(store, [3], "t->s", top_k=1)
    assert reverse.direction is Direction.TARGET_TO_SOURCE
    assert list(reverse.top(3)) == [1]


@pytest.mark.Unit
@pytest.mark.ranking
def test_rank_excludes_anchors():
    store = init_embeddings(5, 5, 4, seed=1)

    result = rank_candidates(store, [0, 1], Direction.SOURCE_TO_TARGET, top_k=5, exclude=[2, 4])

    assert result.top_k == 3
    assert set(result.candidates.ravel().tolist()) == {0, 1, 3}


@pytest.mark.Unit
@pytest.mark.ranking
def test_rank_by_labels():
    state = LabelState(np.array([2, 0, 1]), np.array([0, 1, 2, 0]), 2, 2)

    result = rank_by_labels(state, [0, 1], Direction.SOURCE_TO_TARGET, top_k=2)

    assert list(result.top(0)) == [2, 0]
    # unlabeled queries match nothing
    assert list(result.top(1)) == [0, 1]


@pytest.mark.Unit
@pytest.mark.ranking
def test_empty_queries():
    store = init_embeddings(3, 3, 2, seed=0)

    try:
        rank_candidates(store, [], Direction.SOURCE_TO_TARGET, top_k=1)
        assert False, "Ranked an empty query set"
    except EmptyEvaluationSetException:
        assert True

    try:
        rank_candidates(store, [0], Direction.SOURCE_TO_TARGET, top_k=0)
        assert False, "Accepted top_k = 0"
    except ValueError:
        assert True


@pytest.mark.Unit
@pytest.mark.metrics
def test_precision_at_n():
    ranking_st = ranking("s->t", {0: [0, 1], 1: [0, 1]})
    ranking_ts = ranking("t->s", {0: [0, 1], 1: [1, 0]})
    pairs = [(0, 0), (1, 1)]

    assert precision_at_n(ranking_st, ranking_ts, pairs, 1) == 0.75
    assert precision_at_n(ranking_st, ranking_ts, pairs, 2) == 1.

    curve = precision_curve(ranking_st, ranking_ts, pairs, [1, 2, 5])
    assert list(curve.columns) == ["N", "precision"]
    assert list(curve["precision"]) == [0.75, 1., 1.]

    try:
        precision_at_n(ranking_st, ranking_ts, [], 1)
        assert False, "Computed a precision without test pairs"
    except EmptyEvaluationSetException:
        assert True


@pytest.mark.Unit
@pytest.mark.metrics
def test_missing_truth_is_a_miss():
    ranking_st = ranking("s->t", {0: [2]})
    ranking_ts = ranking("t->s", {0: [0]})

    assert ranking_st.positions([0], [0])[0] == NOT_RANKED
    assert precision_at_n(ranking_st, ranking_ts, [(0, 0)], 30) == 0.5


@pytest.mark.Unit
@pytest.mark.metrics
def test_truncated_list_is_a_miss_for_longer_n():
    # counterpart 2 is third, only the best candidate is kept
    ranking_st = rank_by_scores([0], [[0.9, 0.5, 0.1]], [0, 1, 2], top_k=1)
    ranking_ts = rank_by_scores([2], [[0.9, 0.2, 0.1]], [0, 1, 2], top_k=1, direction=Direction.TARGET_TO_SOURCE)

    assert precision_at_n(ranking_st, ranking_ts, [(0, 2)], 2) == 0.5
    assert list(precision_curve(ranking_st, ranking_ts, [(0, 2)], [1, 2, 30])["precision"]) == [0.5, 0.5, 0.5]


@pytest.mark.Unit
@pytest.mark.metrics
def test_rsa_values():
    empty = Graph(3)
    assert rsa(empty, empty, (0, 0), AnchorSet([(1, 1)])) == 0.

    star = Graph.from_edges(3, [(0, 1), (0, 2)], directed=False)
    assert rsa(star, star, (0, 0), AnchorSet([(1, 1)])) == 0.5
    assert rsa(star, star, (0, 0), AnchorSet([(1, 0)])) == 0.

    # leaf 1 reaches leaf 2 in two hops
    assert rsa(star, star, (1, 1), AnchorSet([(2, 2)])) == pytest.approx(0.5)


@pytest.mark.Unit
@pytest.mark.metrics
def test_bucket_bounds():
    assert bucket_bounds(100) == [(10 * k, 10 * (k + 1)) for k in range(10)]
    assert bucket_bounds(103)[-1] == (90, 103)
    assert len(bucket_bounds(103)) == 10
    assert bucket_bounds(7) == [(0, 7)]


@pytest.mark.Unit
@pytest.mark.metrics
def test_single_bucket_report(caplog):
    star = Graph.from_edges(3, [(0, 1), (0, 2)], directed=False)
    pairs = [(0, 0), (2, 2)]
    ranking_st = ranking("s->t", {0: [0], 2: [0]})
    ranking_ts = ranking("t->s", {0: [0], 2: [2]})

    with caplog.at_level(logging.WARNING):
        report = rsa_bucket_report(star, star, pairs, ranking_st, ranking_ts, AnchorSet([(1, 1)]))

    assert "single bucket" in caplog.text
    assert len(report) == 1
    assert report.loc[0, "pairs"] == 2
    assert report.loc[0, "rsa_max"] == 0.5
    assert report.loc[0, "precision_at_1"] == 0.75


@pytest.mark.Unit
@pytest.mark.report
def test_report_check():
    EvalReport(precision={1: 0.5, 5: 0.5, 10: 0.9}).check()

    for precision in [{1: 0.6, 5: 0.5}, {1: 1.2}]:
        try:
            EvalReport(precision=precision).check()
            assert False, f"Accepted the precision curve {precision}"
        except AssertionError:
            assert True


@pytest.mark.Unit
@pytest.mark.report
def test_report_write(tmp_path):
    buckets = pd.DataFrame({"bucket": [0], "pairs": [np.int64(4)], "rsa_min": [0.], "rsa_max": [0.5], "precision_at_1": [0.25]})
    report = EvalReport(precision={1: 0.25, 2: 0.5},
                        rsa_buckets=buckets,
                        label_quality={"coverage_s": 1.},
                        metadata={"variant": "full"},
                        timings={"train": 1.5})

    report.write(tmp_path)

    with open(tmp_path / "report.json") as file:
        document = json.load(file)
    assert document["precision"] == {"1": 0.25, "2": 0.5}
    assert document["rsa_buckets"][0]["pairs"] == 4
    assert "timings" not in report.to_dict(include_timings=False)
    assert pd.read_csv(tmp_path / "precision.csv")["N"].tolist() == [1, 2]
    assert (tmp_path / "rsa_buckets.csv").exists()

    read_back = EvalReport.read(tmp_path / "report.json")
    assert read_back.precision == report.precision
    assert read_back.timings == report.timings
