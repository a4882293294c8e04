"""Soft relabeling: pairs of unlabeled nodes whose normalized tuples are mutual best matches
across the networks receive a new shared label."""

import logging

from ..graph_core import Graph
from ..wlalign_enum import RelabelMode
from .generic_relabeler import GenericRelabeler
from .label_state import LabelState
from .propagation import cross_similarity, mutual_match, propagate

logger = logging.getLogger(__name__)


class SoftRelabeler(GenericRelabeler):
    """Similarity hash relabeling round."""

    mode = RelabelMode.SOFT

    def __init__(self, threads:int = None):
        """
        Parameters
        ----------
        threads : int, optional
            Worker threads of the similarity computation, by default WLALIGN_THREADS
        """
        self.threads = threads

    def relabel_round(self, g_s:Graph, g_t:Graph, state:LabelState) -> LabelState:
        tp_s = propagate(g_s, state.labels_s, state.label_count)
        tp_t = propagate(g_t, state.labels_t, state.label_count)

        sim = cross_similarity(tp_s, tp_t, state.labels_s == 0, state.labels_t == 0, threads=self.threads)
        matches = mutual_match(sim)

        new_state = state.copy()
        for k, (i, j) in enumerate(matches, start=1):
            new_state.labels_s[i] = state.label_count + k
            new_state.labels_t[j] = state.label_count + k
        new_state.label_count = state.label_count + len(matches)

        logger.debug("Soft round: %d candidate rows, %d matches.", len(sim.rows), len(matches))

        return new_state


def soft_relabel_round(g_s:Graph, g_t:Graph, state:LabelState) -> LabelState:
    return SoftRelabeler().relabel_round(g_s, g_t, state)
