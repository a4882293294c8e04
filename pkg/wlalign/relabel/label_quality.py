"""Label quality metrics of the synthetic robustness experiment."""

from typing import Dict, Iterable, Union

import numpy as np

from ..wlalign_enum import Network
from ..wlalign_exceptions import EmptyEvaluationSetException
from .label_state import LabelState


def label_histogram(labels:np.ndarray, nodes:np.ndarray, label_count:int) -> np.ndarray:
    """Number of nodes holding each label 1..label_count (unlabeled nodes are not counted)."""
    return np.bincount(labels[nodes], minlength=label_count + 1)[1:label_count + 1]


def label_histogram_similarity(state:LabelState,
    eval_nodes_s:Iterable[int],
    eval_nodes_t:Iterable[int] = None,
    correspondence:Dict[int, int] = None) -> float:
    """Cosine similarity of the label histograms of the evaluated nodes of both networks.

    Parameters
    ----------
    state : LabelState
        Labels
    eval_nodes_s : Iterable[int]
        Evaluated source nodes (the non-augmented ones)
    eval_nodes_t : Iterable[int], optional
        Evaluated target nodes, by default the image of eval_nodes_s by the correspondence
    correspondence : Dict[int, int], optional
        Ground truth map, used when eval_nodes_t is not given, by default None

    Returns
    -------
    float
        Similarity in [0, 1], 0 when both histograms are empty
    """
    nodes_s = np.asarray(list(eval_nodes_s), dtype=np.int64)
    if eval_nodes_t is None:
        if correspondence is None:
            raise ValueError("Either eval_nodes_t or correspondence must be provided.")
        eval_nodes_t = [correspondence[s] for s in nodes_s.tolist()]
    nodes_t = np.asarray(list(eval_nodes_t), dtype=np.int64)

    histogram_s = label_histogram(state.labels_s, nodes_s, state.label_count).astype(np.float64)
    histogram_t = label_histogram(state.labels_t, nodes_t, state.label_count).astype(np.float64)

    # integer counts: sqrt of the exact product keeps identical histograms at exactly 1
    norms = np.sqrt((histogram_s @ histogram_s) * (histogram_t @ histogram_t))
    if norms == 0:
        return 0.

    return float(np.clip(histogram_s @ histogram_t / norms, 0., 1.))


def coverage_ratio(state:LabelState, eval_nodes:Iterable[int], side:Union[Network, str]) -> float:
    """Fraction of the evaluated nodes of one network holding a non zero label.

    Raises
    ------
    EmptyEvaluationSetException
        eval_nodes is empty.
    """
    nodes = np.asarray(list(eval_nodes), dtype=np.int64)
    if len(nodes) == 0:
        raise EmptyEvaluationSetException("coverage evaluation node set")

    labels = state.labels(Network(side))
    return float(np.count_nonzero(labels[nodes]) / len(nodes))
