"""Label state of the across-network relabeling and the shared hash rule table."""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ..graph_core import AnchorSet
from ..wlalign_enum import Network


@dataclass
class RoundRecord:
    """One line of the round trace."""
    round: int
    new_labels: int
    labeled_nodes: int
    label_count: int
    elapsed: float


@dataclass
class LabelState:
    """Per-node compressed labels of both networks (0 = unlabeled).

    Labels 1..anchor_label_ceiling are the anchor labels, labels above were created by the
    relabeling rounds. Labeled nodes keep their label in later rounds.
    """
    labels_s: np.ndarray
    labels_t: np.ndarray
    label_count: int
    anchor_label_ceiling: int
    rounds: int = 0
    converged: bool = False
    trace: List[RoundRecord] = field(default_factory=list)

    def copy(self) -> "LabelState":
        return LabelState(labels_s=self.labels_s.copy(),
                          labels_t=self.labels_t.copy(),
                          label_count=self.label_count,
                          anchor_label_ceiling=self.anchor_label_ceiling,
                          rounds=self.rounds,
                          converged=self.converged,
                          trace=list(self.trace))

    def labels(self, network:Network) -> np.ndarray:
        return self.labels_s if network is Network.SOURCE else self.labels_t

    def labeled_count(self) -> int:
        return int(np.count_nonzero(self.labels_s) + np.count_nonzero(self.labels_t))

    def same_labels(self, other:"LabelState") -> bool:
        return self.label_count == other.label_count and \
            np.array_equal(self.labels_s, other.labels_s) and \
                np.array_equal(self.labels_t, other.labels_t)

    def check(self, anchors:AnchorSet = None):
        """Checks the state invariants.

        Raises
        ------
        AssertionError
            An invariant is broken.
        """
        for labels in (self.labels_s, self.labels_t):
            assert labels.min(initial=0) >= 0, "Negative label found."
            assert labels.max(initial=0) <= self.label_count, "Label above label_count found."

        used_s = set(np.unique(self.labels_s[self.labels_s > 0]).tolist())
        used_t = set(np.unique(self.labels_t[self.labels_t > 0]).tolist())
        assert used_s == used_t, "A label is only present in one network."

        if anchors is not None:
            assert np.array_equal(self.labels_s[anchors.s_nodes], anchors.labels()), "Anchor label changed in G^s."
            assert np.array_equal(self.labels_t[anchors.t_nodes], anchors.labels()), "Anchor label changed in G^t."

    def trace_frame(self) -> pd.DataFrame:
        return pd.DataFrame([record.__dict__ for record in self.trace],
                            columns=["round", "new_labels", "labeled_nodes", "label_count", "elapsed"])


class HashRuleTable:
    """Injective map from canonical tuples to compressed labels, shared by both networks.

    Keys are sorted tuples of the non zero labels of a node tuple, the "0" label never
    appears in a key. New keys get the next id of an auto-incremented counter.
    """

    def __init__(self, counter:int = 0):
        self.rules:Dict[Tuple[int, ...], int] = {}
        self.counter:int = counter

    def compress(self, key:Tuple[int, ...]) -> int:
        """Returns the compressed label of a key, creating it if needed.

        Raises
        ------
        ValueError
            The key contains the label 0 or is empty.
        """
        if key in self.rules:
            return self.rules[key]

        if len(key) == 0 or 0 in key:
            raise ValueError(f"Invalid hash key {key}: keys are non empty and can't contain the label 0.")

        self.counter += 1
        self.rules[key] = self.counter
        return self.counter

    def sync(self, label_count:int):
        """Makes sure new ids are created above label_count."""
        self.counter = max(self.counter, label_count)

    def __contains__(self, key) -> bool:
        return key in self.rules

    def __len__(self) -> int:
        return len(self.rules)

    def as_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"tuple": [",".join(map(str, key)) for key in self.rules],
                             "label": list(self.rules.values())})


def init_labels(anchors:AnchorSet, n_s:int, n_t:int) -> LabelState:
    """Gives the label k to both members of the anchor pair k, 0 to every other node.

    An empty anchor set produces an all-zero state (and a warning from the caller).
    """
    labels_s = np.zeros(n_s, dtype=np.int64)
    labels_t = np.zeros(n_t, dtype=np.int64)

    labels_s[anchors.s_nodes] = anchors.labels()
    labels_t[anchors.t_nodes] = anchors.labels()

    return LabelState(labels_s=labels_s,
                      labels_t=labels_t,
                      label_count=len(anchors),
                      anchor_label_ceiling=len(anchors))
