"""Training batch sampling.

A batch holds, for each network, batch_size edges drawn uniformly among the directed edges,
each followed by k_context negative pairs, and batch_size cross-network pairs sharing a label,
drawn uniformly among all such pairs, each followed by k_label negative pairs.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Tuple, Union

import numpy as np

from ..graph_core import Graph
from ..relabel.label_state import LabelState
from ..wlalign_enum import NegativeDistribution, Network

logger = logging.getLogger(__name__)

MAX_REDRAWS = 100

NETWORK_CODES = {Network.SOURCE: 0, Network.TARGET: 1}


@dataclass
class TrainingBatch:
    """Label pairs (s, t, polarity) and context pairs (network code, i, j, polarity) of one batch."""
    index: int
    seed: int
    label_s: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    label_t: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    label_polarity: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    context_network: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    context_i: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    context_j: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    context_polarity: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def label_pairs(self) -> List[Tuple[int, int, int]]:
        return list(zip(self.label_s.tolist(), self.label_t.tolist(), self.label_polarity.tolist()))

    def context_pairs(self) -> List[Tuple[Network, int, int, int]]:
        networks = [Network.SOURCE, Network.TARGET]
        return [(networks[code], i, j, polarity) for code, i, j, polarity in
                zip(self.context_network.tolist(), self.context_i.tolist(), self.context_j.tolist(), self.context_polarity.tolist())]

    def context_of(self, network:Network) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Context entries (i, j, polarity) of one network."""
        mask = self.context_network == NETWORK_CODES[network]
        return self.context_i[mask], self.context_j[mask], self.context_polarity[mask]

    def __len__(self) -> int:
        return len(self.label_s) + len(self.context_i)


class BatchSampler:
    """Draws TrainingBatch objects for a fixed label state.

    Batch k is drawn from a generator seeded with (seed, k): the stream is reproducible and
    any batch can be drawn again on its own.
    """

    def __init__(self,
        g_s:Graph,
        g_t:Graph,
        state:LabelState,
        k_label:int = 1,
        k_context:int = 20,
        batch_size:int = 1000,
        seed:int = 0,
        negative_distribution:Union[NegativeDistribution, str] = NegativeDistribution.UNIFORM,
        use_labels:bool = True):
        """
        Parameters
        ----------
        g_s : Graph
            Source network
        g_t : Graph
            Target network
        state : LabelState
            Labels defining the positive label pairs
        k_label : int, optional
            Negative label pairs per positive, by default 1
        k_context : int, optional
            Negative context pairs per positive, by default 20
        batch_size : int, optional
            Positives of each kind per batch, by default 1000
        seed : int, optional
            Random generator seed, by default 0
        negative_distribution : Union[NegativeDistribution, str], optional
            Context negatives drawn uniformly or with probability ~ degree^0.75, by default uniform
        use_labels : bool, optional
            If False, batches only hold context pairs, by default True

        Raises
        ------
        ValueError
            Negative counts.
        """
        if k_label < 0 or k_context < 0 or batch_size < 0:
            raise ValueError("k_label, k_context and batch_size must be non-negative.")

        self.graphs = {Network.SOURCE: g_s, Network.TARGET: g_t}
        self.labels = {Network.SOURCE: state.labels_s, Network.TARGET: state.labels_t}
        self.k_label = k_label
        self.k_context = k_context
        self.batch_size = batch_size
        self.seed = seed
        self.use_labels = use_labels
        self.negative_distribution = NegativeDistribution(negative_distribution)

        self.edges = {network: graph.edges() for network, graph in self.graphs.items()}
        self.noise = {network: self.__noise_distribution(graph) for network, graph in self.graphs.items()}

        label_count = state.label_count
        self.counts = {network: np.bincount(labels, minlength=label_count + 1)[:label_count + 1]
                       for network, labels in self.labels.items()}
        # nodes grouped by label: members of label c are order[start[c]:start[c]+count[c]]
        self.order = {network: np.argsort(labels, kind="stable") for network, labels in self.labels.items()}
        self.start = {network: np.concatenate([[0], np.cumsum(self.counts[network])[:-1]]) for network in self.labels}

        weights = (self.counts[Network.SOURCE] * self.counts[Network.TARGET]).astype(np.float64)
        weights[0] = 0.
        self.label_pair_count = int(weights.sum())
        self.label_weights = weights / weights.sum() if self.label_pair_count else weights

        if use_labels and self.label_pair_count == 0 and batch_size > 0:
            logger.warning("No cross-network pair shares a label: batches only contain context pairs.")

    def __noise_distribution(self, graph:Graph) -> np.ndarray:
        if self.negative_distribution is NegativeDistribution.UNIFORM or graph.n == 0:
            return None
        weights = (graph.out_degree() + graph.in_degree()).astype(np.float64) ** 0.75
        if weights.sum() == 0:
            return None
        return weights / weights.sum()

    def __members(self, network:Network, labels:np.ndarray, rng:np.random.Generator) -> np.ndarray:
        """One uniform node of each requested label."""
        offsets = np.floor(rng.random(len(labels)) * self.counts[network][labels]).astype(np.int64)
        return self.order[network][self.start[network][labels] + offsets]

    def __label_entries(self, rng:np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.use_labels or self.label_pair_count == 0 or self.batch_size == 0:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, empty

        labels = rng.choice(len(self.label_weights), size=self.batch_size, p=self.label_weights)
        s_nodes = self.__members(Network.SOURCE, labels, rng)
        t_nodes = self.__members(Network.TARGET, labels, rng)

        negative_s = np.repeat(s_nodes, self.k_label)
        negative_labels = np.repeat(labels, self.k_label)
        negative_t = self.__redraw(rng,
                                   self.graphs[Network.TARGET].n,
                                   len(negative_s),
                                   lambda candidates, rows: self.labels[Network.TARGET][candidates] == negative_labels[rows],
                                   None)
        kept = negative_t >= 0

        return np.concatenate([s_nodes, negative_s[kept]]), \
            np.concatenate([t_nodes, negative_t[kept]]), \
                np.concatenate([np.ones(len(s_nodes), dtype=np.int64), np.zeros(int(kept.sum()), dtype=np.int64)])

    def __context_entries(self, network:Network, rng:np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        edges = self.edges[network]
        if len(edges) == 0 or self.batch_size == 0:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, empty

        positives = edges[rng.integers(0, len(edges), size=self.batch_size)]
        graph = self.graphs[network]

        negative_i = np.repeat(positives[:, 0], self.k_context)
        negative_j = self.__redraw(rng,
                                   graph.n,
                                   len(negative_i),
                                   lambda candidates, rows: (candidates == negative_i[rows]) | graph.has_edge(negative_i[rows], candidates),
                                   self.noise[network])
        kept = negative_j >= 0

        return np.concatenate([positives[:, 0], negative_i[kept]]), \
            np.concatenate([positives[:, 1], negative_j[kept]]), \
                np.concatenate([np.ones(len(positives), dtype=np.int64), np.zeros(int(kept.sum()), dtype=np.int64)])

    @staticmethod
    def __redraw(rng:np.random.Generator, n:int, count:int, rejected, probabilities) -> np.ndarray:
        """Draws count nodes, redrawing the rejected ones. Nodes still rejected after MAX_REDRAWS draws are -1."""
        result = np.full(count, -1, dtype=np.int64)
        pending = np.arange(count)
        for _ in range(MAX_REDRAWS):
            if len(pending) == 0 or n == 0:
                break
            candidates = rng.choice(n, size=len(pending), p=probabilities) if probabilities is not None \
                else rng.integers(0, n, size=len(pending))
            bad = rejected(candidates, pending)
            result[pending[~bad]] = candidates[~bad]
            pending = pending[bad]
        return result

    def sample(self, index:int) -> TrainingBatch:
        """Draws the batch number index."""
        rng = np.random.default_rng([self.seed, index])

        label_s, label_t, label_polarity = self.__label_entries(rng)

        networks, context_i, context_j, context_polarity = [], [], [], []
        for network in [Network.SOURCE, Network.TARGET]:
            i, j, polarity = self.__context_entries(network, rng)
            networks.append(np.full(len(i), NETWORK_CODES[network], dtype=np.int64))
            context_i.append(i)
            context_j.append(j)
            context_polarity.append(polarity)

        return TrainingBatch(index=index,
                             seed=self.seed,
                             label_s=label_s,
                             label_t=label_t,
                             label_polarity=label_polarity,
                             context_network=np.concatenate(networks),
                             context_i=np.concatenate(context_i),
                             context_j=np.concatenate(context_j),
                             context_polarity=np.concatenate(context_polarity))

    def batches(self, count:int = None) -> Iterator[TrainingBatch]:
        """Yields count batches, or an endless stream if count is None."""
        index = 0
        while count is None or index < count:
            yield self.sample(index)
            index += 1


def sample_batches(g_s:Graph,
    g_t:Graph,
    state:LabelState,
    k_label:int,
    k_context:int,
    batch_size:int,
    seed:int,
    count:int = None,
    **options) -> Iterator[TrainingBatch]:
    """Stream of training batches, see BatchSampler."""
    return BatchSampler(g_s, g_t, state, k_label, k_context, batch_size, seed, **options).batches(count)
