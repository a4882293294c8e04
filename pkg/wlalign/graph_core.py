"""Graph representation, synthetic graph generation, perturbation and anchor sampling.

Graphs are stored as CSR adjacency matrices over contiguous node ids. The original node
ids read from a file are kept aside in ``Graph.node_ids`` (dense id i <-> node_ids[i]).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .wlalign_exceptions import (InvalidAnchorSetException, PerturbationCapacityException,
                                 ProbabilityRangeException, RatioRangeException)

logger = logging.getLogger(__name__)


class Graph:
    """Directed graph over the nodes 0..n-1, immutable after construction.

    Duplicate edges and self-loops are dropped. An undirected graph is represented by its
    bi-directed version (see ``to_bidirected``).
    """

    def __init__(self,
        n:int,
        sources:Iterable[int] = (),
        targets:Iterable[int] = (),
        directed:bool = True,
        node_ids:Sequence[int] = None):
        """Builds a graph from its edge arrays.

        Parameters
        ----------
        n : int
            Node count
        sources : Iterable[int]
            Edge source nodes
        targets : Iterable[int]
            Edge target nodes, same length as sources
        directed : bool, optional
            If False, the graph is built bi-directed, by default True
        node_ids : Sequence[int], optional
            Original node ids (sidecar mapping), by default the dense ids

        Raises
        ------
        ValueError
            Negative node count, edge arrays of different lengths or node out of range.
        """
        if n < 0:
            raise ValueError(f"Node count must be non-negative, found {n}.")

        sources = np.asarray(list(sources) if not isinstance(sources, np.ndarray) else sources, dtype=np.int64)
        targets = np.asarray(list(targets) if not isinstance(targets, np.ndarray) else targets, dtype=np.int64)

        if sources.shape != targets.shape:
            raise ValueError("sources and targets must have the same length.")

        if len(sources) and (min(sources.min(), targets.min()) < 0 or max(sources.max(), targets.max()) >= n):
            raise ValueError(f"Edge end point out of range [0, {n}).")

        if not directed:
            sources, targets = np.concatenate([sources, targets]), np.concatenate([targets, sources])

        keep = sources != targets
        sources, targets = sources[keep], targets[keep]

        adjacency = sp.csr_matrix((np.ones(len(sources), dtype=np.int8), (sources, targets)), shape=(n, n))
        # duplicates were summed by the constructor
        adjacency.data[:] = 1
        adjacency.sort_indices()

        self.n:int = int(n)
        self.directed:bool = bool(directed)
        self.adjacency:sp.csr_matrix = adjacency
        self.transpose:sp.csr_matrix = adjacency.T.tocsr()
        self.transpose.sort_indices()

        if node_ids is None:
            self.node_ids:np.ndarray = np.arange(n, dtype=np.int64)
        else:
            self.node_ids = np.asarray(node_ids, dtype=np.int64)
            if len(self.node_ids) != n:
                raise ValueError(f"node_ids must have {n} elements, found {len(self.node_ids)}.")

    @classmethod
    def from_edges(cls, n:int, edges:Iterable[Tuple[int, int]], directed:bool = True) -> "Graph":
        edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls(n, edges[:, 0], edges[:, 1], directed=directed)

    def out_adj(self, i:int) -> np.ndarray:
        """Sorted successors of node i."""
        return self.adjacency.indices[self.adjacency.indptr[i]:self.adjacency.indptr[i+1]]

    def in_adj(self, i:int) -> np.ndarray:
        """Sorted predecessors of node i."""
        return self.transpose.indices[self.transpose.indptr[i]:self.transpose.indptr[i+1]]

    def edges(self) -> np.ndarray:
        """Returns the (edge_count, 2) array of directed edges, sorted by (source, target)."""
        coo = self.adjacency.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return np.stack([coo.row[order], coo.col[order]], axis=1).astype(np.int64)

    @property
    def edge_count(self) -> int:
        """Number of directed edges."""
        return int(self.adjacency.nnz)

    @property
    def undirected_edge_count(self) -> int:
        """Number of unordered node pairs joined by at least one edge."""
        symmetric = self.adjacency + self.transpose
        return int(sp.triu(symmetric, k=1).nnz)

    def out_degree(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def in_degree(self) -> np.ndarray:
        return np.diff(self.transpose.indptr)

    def has_edge(self, i:Union[int, np.ndarray], j:Union[int, np.ndarray]) -> Union[bool, np.ndarray]:
        """Tells if the edge(s) i -> j exist. Accepts scalars or equal length arrays."""
        if np.isscalar(i) and np.isscalar(j):
            row = self.out_adj(int(i))
            k = np.searchsorted(row, j)
            return bool(k < len(row) and row[k] == j)

        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        if len(i) == 0:
            return np.zeros(0, dtype=bool)
        return np.asarray(self.adjacency[i, j]).ravel() > 0

    def is_symmetric(self) -> bool:
        return (self.adjacency != self.transpose).nnz == 0

    def __eq__(self, other):
        if isinstance(other, self.__class__):
            return self.n == other.n and (self.adjacency != other.adjacency).nnz == 0
        else:
            return False

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count}, directed={self.directed})"


class AnchorSet:
    """Ordered list of known cross-network node pairs. Pair k (0-based) owns the label k+1."""

    def __init__(self, pairs:Iterable[Tuple[int, int]] = (), n_s:int = None, n_t:int = None):
        """Builds and validates an anchor set.

        Parameters
        ----------
        pairs : Iterable[Tuple[int, int]]
            (s_node, t_node) pairs, in label order.
        n_s : int, optional
            Node count of G^s, used to validate the ids, by default None
        n_t : int, optional
            Node count of G^t, used to validate the ids, by default None

        Raises
        ------
        InvalidAnchorSetException
            A node appears twice or an id is out of range.
        """
        self.pairs:np.ndarray = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs,
                                           dtype=np.int64).reshape(-1, 2)

        if len(np.unique(self.pairs[:, 0])) != len(self.pairs):
            raise InvalidAnchorSetException("a source node appears in several pairs")
        if len(np.unique(self.pairs[:, 1])) != len(self.pairs):
            raise InvalidAnchorSetException("a target node appears in several pairs")
        if len(self.pairs) and self.pairs.min() < 0:
            raise InvalidAnchorSetException("negative node id")
        if n_s is not None and len(self.pairs) and self.pairs[:, 0].max() >= n_s:
            raise InvalidAnchorSetException(f"source node id out of range [0, {n_s})")
        if n_t is not None and len(self.pairs) and self.pairs[:, 1].max() >= n_t:
            raise InvalidAnchorSetException(f"target node id out of range [0, {n_t})")

    @property
    def s_nodes(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def t_nodes(self) -> np.ndarray:
        return self.pairs[:, 1]

    def labels(self) -> np.ndarray:
        """Label id owned by each pair (1-based index)."""
        return np.arange(1, len(self.pairs) + 1, dtype=np.int64)

    def partner_array(self, n_s:int) -> np.ndarray:
        """Array of size n_s giving the anchored target of each source node, -1 otherwise."""
        partner = np.full(n_s, -1, dtype=np.int64)
        partner[self.s_nodes] = self.t_nodes
        return partner

    def as_dict(self) -> Dict[int, int]:
        return dict(zip(self.s_nodes.tolist(), self.t_nodes.tolist()))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(map(tuple, self.pairs.tolist()))

    def __eq__(self, other):
        if isinstance(other, self.__class__):
            return np.array_equal(self.pairs, other.pairs)
        else:
            return False

    def __repr__(self) -> str:
        return f"AnchorSet({len(self)} pairs)"


@dataclass
class PerturbationRecord:
    """What perturb added to a graph."""
    original_n: int
    added_nodes: List[int] = field(default_factory=list)
    added_edges: List[Tuple[int, int]] = field(default_factory=list)
    seed: int = 0

    def is_empty(self) -> bool:
        return not self.added_nodes and not self.added_edges


def to_bidirected(g:Graph) -> Graph:
    """Returns the symmetric closure of g, node count unchanged."""
    edges = g.edges()
    return Graph(g.n, edges[:, 0], edges[:, 1], directed=False, node_ids=g.node_ids)


def generate_er(n:int, p:float, seed:int) -> Graph:
    """Generates an undirected (bi-directed) Erdos-Renyi G(n, p) graph.

    Parameters
    ----------
    n : int
        Node count
    p : float
        Probability of each unordered pair to be an edge
    seed : int
        Random generator seed

    Returns
    -------
    Graph
        Bi-directed simple graph

    Raises
    ------
    ProbabilityRangeException
        p outside [0, 1]
    """
    if not 0. <= p <= 1.:
        raise ProbabilityRangeException(p)

    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(len(rows)) < p

    return Graph(n, rows[keep], cols[keep], directed=False)


def _pair_keys(i:np.ndarray, j:np.ndarray, n:int) -> np.ndarray:
    low, high = np.minimum(i, j), np.maximum(i, j)
    return low * n + high


def perturb(g:Graph, node_pct:float, edge_pct:float, seed:int, attach_degree:int = 1) -> Tuple[Graph, PerturbationRecord]:
    """Augments an undirected graph with new nodes and new edges.

    floor(node_pct * n) nodes are appended, each attached to attach_degree distinct uniformly drawn
    original nodes. Then floor(edge_pct * |E|) undirected edges are added between uniformly drawn
    non adjacent pairs of the augmented node set. Original nodes and edges are left untouched.

    Parameters
    ----------
    g : Graph
        Undirected (bi-directed) graph
    node_pct : float
        Ratio of new nodes
    edge_pct : float
        Ratio of new undirected edges, with regard to the undirected edge count of g
    seed : int
        Random generator seed
    attach_degree : int, optional
        Number of original nodes each new node is attached to, by default 1

    Returns
    -------
    Tuple[Graph, PerturbationRecord]
        Perturbed graph and record of the additions

    Raises
    ------
    ValueError
        Negative ratios or invalid attach_degree.
    PerturbationCapacityException
        Not enough free node pairs for the requested edges.
    """
    if node_pct < 0 or edge_pct < 0:
        raise ValueError(f"node_pct and edge_pct must be non-negative, found {node_pct} and {edge_pct}.")
    if not g.is_symmetric():
        logger.warning("perturb called on a non symmetric graph, the result is bi-directed.")

    rng = np.random.default_rng(seed)
    n = g.n
    base_edges = g.edges()
    base_edges = base_edges[base_edges[:, 0] < base_edges[:, 1]] if g.is_symmetric() else base_edges

    new_node_count = int(np.floor(node_pct * n))
    new_edge_count = int(np.floor(edge_pct * g.undirected_edge_count))
    n_total = n + new_node_count

    record = PerturbationRecord(original_n=n, seed=seed)
    added = []

    if new_node_count:
        if n == 0:
            raise ValueError("Can't attach new nodes to an empty graph.")
        if not 1 <= attach_degree <= n:
            raise ValueError(f"attach_degree must be between 1 and {n}, found {attach_degree}.")

        for new_node in range(n, n_total):
            for existing in rng.choice(n, size=attach_degree, replace=False):
                added.append((int(existing), new_node))
        record.added_nodes = list(range(n, n_total))

    existing_keys = np.unique(np.concatenate([_pair_keys(base_edges[:, 0], base_edges[:, 1], n_total),
                                              _pair_keys(*np.asarray(added, dtype=np.int64).reshape(-1, 2).T, n_total)]))

    capacity = n_total * (n_total - 1) // 2 - len(existing_keys)
    if new_edge_count > capacity:
        raise PerturbationCapacityException(new_edge_count, capacity)

    if new_edge_count:
        if new_edge_count > capacity // 2:
            # dense request: draw among the enumerated free pairs
            rows, cols = np.triu_indices(n_total, k=1)
            free = ~np.isin(rows * n_total + cols, existing_keys)
            chosen = np.sort(rng.choice(np.flatnonzero(free), size=new_edge_count, replace=False))
            new_pairs = np.stack([rows[chosen], cols[chosen]], axis=1)
        else:
            new_keys = np.empty(0, dtype=np.int64)
            while len(new_keys) < new_edge_count:
                remaining = new_edge_count - len(new_keys)
                i = rng.integers(0, n_total, size=2 * remaining + 16)
                j = rng.integers(0, n_total, size=2 * remaining + 16)
                keys = _pair_keys(i[i != j], j[i != j], n_total)
                keys = keys[~np.isin(keys, existing_keys) & ~np.isin(keys, new_keys)]
                _, first = np.unique(keys, return_index=True)
                keys = keys[np.sort(first)][:remaining]
                new_keys = np.concatenate([new_keys, keys])
            new_pairs = np.stack([new_keys // n_total, new_keys % n_total], axis=1)

        added.extend(map(tuple, new_pairs.tolist()))

    record.added_edges = [(int(i), int(j)) for i, j in added]

    all_edges = np.concatenate([base_edges, np.asarray(record.added_edges, dtype=np.int64).reshape(-1, 2)])
    node_ids = np.concatenate([g.node_ids, np.arange(new_node_count, dtype=np.int64) + (g.node_ids.max() + 1 if n else 0)])

    return Graph(n_total, all_edges[:, 0], all_edges[:, 1], directed=False, node_ids=node_ids), record


def sample_anchors(g_s:Graph,
    g_t:Graph,
    correspondence:Union[Dict[int, int], Iterable[Tuple[int, int]]],
    ratio:float,
    seed:int) -> Tuple[AnchorSet, List[Tuple[int, int]]]:
    """Splits a ground truth correspondence into anchors and held-out test pairs.

    Parameters
    ----------
    g_s : Graph
        Source network
    g_t : Graph
        Target network
    correspondence : Union[Dict[int, int], Iterable[Tuple[int, int]]]
        Bijective map from source nodes to target nodes
    ratio : float
        Fraction of the pairs used as anchors
    seed : int
        Random generator seed

    Returns
    -------
    Tuple[AnchorSet, List[Tuple[int, int]]]
        Anchors and held-out test pairs (sorted by source node)

    Raises
    ------
    RatioRangeException
        ratio outside [0, 1]
    """
    if not 0. <= ratio <= 1.:
        raise RatioRangeException("ratio", ratio)

    if isinstance(correspondence, dict):
        correspondence = correspondence.items()
    pairs = np.asarray(sorted(correspondence), dtype=np.int64).reshape(-1, 2)

    # validates the bijection
    AnchorSet(pairs, g_s.n, g_t.n)

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(pairs))
    anchor_count = int(np.floor(ratio * len(pairs)))

    anchors = AnchorSet(pairs[order[:anchor_count]], g_s.n, g_t.n)
    test_pairs = pairs[np.sort(order[anchor_count:])]

    if anchor_count == 0:
        logger.warning("No anchor sampled (ratio=%s), the relabeling will not produce any label.", ratio)

    return anchors, [(int(s), int(t)) for s, t in test_pairs]
