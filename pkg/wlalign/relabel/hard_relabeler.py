"""Hard relabeling: classic WL injective hashing of the node tuples, restricted to the tuples
found in both networks during the round."""

import logging
from typing import Dict, Tuple

import numpy as np
import scipy.sparse as sp

from ..graph_core import Graph
from ..wlalign_enum import RelabelMode
from .generic_relabeler import GenericRelabeler
from .label_state import HashRuleTable, LabelState
from .propagation import propagate

logger = logging.getLogger(__name__)


def canonical_tuples(tuples:sp.csr_matrix, labels:np.ndarray) -> Dict[int, Tuple[int, ...]]:
    """Canonical tuple of each unlabeled node: sorted multiset of the non zero labels of its row.

    The node's own label is 0 and therefore absent. Nodes without any labeled neighbour are skipped.
    """
    keys = {}
    for node in np.flatnonzero(labels == 0).tolist():
        start, end = tuples.indptr[node], tuples.indptr[node+1]
        if start == end:
            continue
        keys[node] = tuple(np.repeat(tuples.indices[start:end] + 1, tuples.data[start:end]).tolist())
    return keys


class HardRelabeler(GenericRelabeler):
    """Injective hash relabeling round. The rule table persists across rounds."""

    mode = RelabelMode.HARD

    def __init__(self, rules:HashRuleTable = None):
        self.rules:HashRuleTable = HashRuleTable() if rules is None else rules

    def reset(self):
        self.rules = HashRuleTable()

    def relabel_round(self, g_s:Graph, g_t:Graph, state:LabelState) -> LabelState:
        self.rules.sync(state.label_count)

        keys_s = canonical_tuples(propagate(g_s, state.labels_s, state.label_count), state.labels_s)
        keys_t = canonical_tuples(propagate(g_t, state.labels_t, state.label_count), state.labels_t)

        # sorted keys: ids do not depend on the node order
        shared = sorted(set(keys_s.values()) & set(keys_t.values()))
        compressed = {key: self.rules.compress(key) for key in shared}

        new_state = state.copy()
        for keys, labels in ((keys_s, new_state.labels_s), (keys_t, new_state.labels_t)):
            for node, key in keys.items():
                if key in compressed:
                    labels[node] = compressed[key]
        new_state.label_count = max(state.label_count, self.rules.counter)

        logger.debug("Hard round: %d / %d keys, %d shared.", len(set(keys_s.values())), len(set(keys_t.values())), len(shared))

        return new_state


def hard_relabel_round(g_s:Graph, g_t:Graph, state:LabelState, rules:HashRuleTable) -> LabelState:
    return HardRelabeler(rules).relabel_round(g_s, g_t, state)
