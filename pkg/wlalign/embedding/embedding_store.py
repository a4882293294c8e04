"""Embedding tables of both networks with anchor weight sharing.

Each logical node (network, node) resolves to a parameter slot. With weight sharing the two
members of an anchor pair resolve to the same slot, so they read and update one vector in each
of the three tables:

    -   node : u, the node representation used for the alignment
    -   input_context : u', the vector a node exposes as the target of an edge
    -   output_context : u'', the vector a node exposes as the source of an edge
"""

from typing import Dict, Union

import numpy as np

from ..graph_core import AnchorSet
from ..wlalign_enum import Network

TABLES = ("node", "input_context", "output_context")


class EmbeddingStore:
    """Three (slot_count, d) tables and the slot map of both networks."""

    def __init__(self, d:int, slots_s:np.ndarray, slots_t:np.ndarray, tables:Dict[str, np.ndarray]):
        """
        Parameters
        ----------
        d : int
            Embedding dimension
        slots_s : np.ndarray
            Slot of each source node
        slots_t : np.ndarray
            Slot of each target node
        tables : Dict[str, np.ndarray]
            Parameter tables, keys in TABLES
        """
        self.d:int = d
        self.slots_s:np.ndarray = slots_s
        self.slots_t:np.ndarray = slots_t
        self.tables:Dict[str, np.ndarray] = tables

    @classmethod
    def initialize(cls, n_s:int, n_t:int, d:int, seed:int, anchors:AnchorSet = None, share_anchors:bool = True) -> "EmbeddingStore":
        if d < 1:
            raise ValueError(f"Embedding dimension must be at least 1, found {d}.")

        slots_s = np.arange(n_s, dtype=np.int64)
        slots_t = np.full(n_t, -1, dtype=np.int64)

        if anchors is not None and share_anchors and len(anchors):
            slots_t[anchors.t_nodes] = anchors.s_nodes

        free = np.flatnonzero(slots_t < 0)
        slots_t[free] = n_s + np.arange(len(free))
        slot_count = n_s + len(free)

        rng = np.random.default_rng(seed)
        bound = 0.5 / d
        tables = {table: rng.uniform(-bound, bound, size=(slot_count, d)) for table in TABLES}

        return cls(d, slots_s, slots_t, tables)

    @property
    def slot_count(self) -> int:
        return len(self.tables["node"])

    def slot(self, network:Union[Network, str], nodes) -> np.ndarray:
        """Slots of the given nodes of one network."""
        slots = self.slots_s if Network(network) is Network.SOURCE else self.slots_t
        return slots[nodes]

    def vectors(self, table:str, network:Union[Network, str], nodes) -> np.ndarray:
        """Copy of the vectors of the given nodes in one table."""
        return self.tables[table][self.slot(network, nodes)]

    def node_vectors(self, network:Union[Network, str]) -> np.ndarray:
        """(n, d) node vectors u of every node of one network."""
        slots = self.slots_s if Network(network) is Network.SOURCE else self.slots_t
        return self.tables["node"][slots]

    def is_shared(self, s_node:int, t_node:int) -> bool:
        return self.slots_s[s_node] == self.slots_t[t_node]

    def copy(self) -> "EmbeddingStore":
        return EmbeddingStore(self.d, self.slots_s.copy(), self.slots_t.copy(),
                              {table: values.copy() for table, values in self.tables.items()})

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(values)) for values in self.tables.values())

    def __eq__(self, other):
        if isinstance(other, self.__class__):
            return np.array_equal(self.slots_s, other.slots_s) and \
                np.array_equal(self.slots_t, other.slots_t) and \
                    all(np.array_equal(self.tables[t], other.tables[t]) for t in TABLES)
        else:
            return False


def init_embeddings(n_s:int, n_t:int, d:int, seed:int, anchors:AnchorSet = None, share_anchors:bool = True) -> EmbeddingStore:
    """Draws every coordinate uniformly in [-0.5/d, 0.5/d] and installs the anchor aliasing.

    Parameters
    ----------
    n_s : int
        Source node count
    n_t : int
        Target node count
    d : int
        Embedding dimension
    seed : int
        Random generator seed
    anchors : AnchorSet, optional
        Anchor pairs sharing their parameters, by default None
    share_anchors : bool, optional
        If False, anchors get their own slots, by default True

    Returns
    -------
    EmbeddingStore
        Initialized tables

    Raises
    ------
    ValueError
        d lower than 1.
    """
    return EmbeddingStore.initialize(n_s, n_t, d, seed, anchors, share_anchors)
