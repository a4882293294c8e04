"""Relabeling loop: rounds are repeated until the compressed label set stops growing."""

import logging
import time
from typing import Union

import numpy as np

from ..graph_core import AnchorSet, Graph
from ..wlalign_enum import RelabelMode
from .generic_relabeler import GenericRelabeler
from .hard_relabeler import HardRelabeler
from .label_state import LabelState, RoundRecord, init_labels
from .soft_relabeler import SoftRelabeler

logger = logging.getLogger(__name__)


def make_relabeler(mode:Union[RelabelMode, str]) -> GenericRelabeler:
    """Returns a fresh built-in relabeler for the given mode."""
    mode = RelabelMode(mode)
    if mode is RelabelMode.SOFT:
        return SoftRelabeler()
    return HardRelabeler()


def run_round(relabeler:GenericRelabeler, g_s:Graph, g_t:Graph, state:LabelState) -> LabelState:
    """Runs one round and appends its record to the trace of the returned state."""
    start = time.perf_counter()
    new_state = relabeler.relabel_round(g_s, g_t, state)

    new_state.rounds = state.rounds + 1
    new_labels = new_state.label_count - state.label_count
    labeled_nodes = new_state.labeled_count() - state.labeled_count()
    new_state.converged = new_labels == 0 and labeled_nodes == 0
    new_state.trace = state.trace + [RoundRecord(round=new_state.rounds,
                                                 new_labels=new_labels,
                                                 labeled_nodes=labeled_nodes,
                                                 label_count=new_state.label_count,
                                                 elapsed=time.perf_counter() - start)]

    logger.info("Relabeling round %d: %d new labels, %d newly labeled nodes, |C_a| = %d.",
                new_state.rounds, new_labels, labeled_nodes, new_state.label_count)

    return new_state


def relabel_until_convergence(g_s:Graph,
    g_t:Graph,
    anchors:AnchorSet,
    mode:Union[RelabelMode, str] = RelabelMode.SOFT,
    max_rounds:int = 100,
    relabeler:GenericRelabeler = None) -> LabelState:
    """Repeats relabeling rounds until the label set does not change or max_rounds is reached.

    Parameters
    ----------
    g_s : Graph
        Source network
    g_t : Graph
        Target network
    anchors : AnchorSet
        Known pairs, seed labels
    mode : Union[RelabelMode, str], optional
        Built-in round to use, by default RelabelMode.SOFT
    max_rounds : int, optional
        Round budget, by default 100
    relabeler : GenericRelabeler, optional
        Custom round, overrides mode, by default None

    Returns
    -------
    LabelState
        Final labels, with ``rounds``, ``converged`` and the round ``trace`` filled.
        Non-convergence is logged, not raised.

    Raises
    ------
    ValueError
        max_rounds lower than 1.
    """
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be at least 1, found {max_rounds}.")

    if len(anchors) == 0:
        logger.warning("Empty anchor set: every node stays unlabeled.")

    relabeler = make_relabeler(mode) if relabeler is None else relabeler
    state = init_labels(anchors, g_s.n, g_t.n)

    while state.rounds < max_rounds:
        state = run_round(relabeler, g_s, g_t, state)
        if state.converged:
            break

    if not state.converged:
        logger.warning("Relabeling did not converge within %d rounds (|C_a| = %d).", max_rounds, state.label_count)

    return state
