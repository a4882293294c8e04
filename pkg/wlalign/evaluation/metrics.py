"""Precision@N and reachability to shared anchors (RSA)."""

import logging
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp

from ..graph_core import AnchorSet, Graph
from ..wlalign_exceptions import EmptyEvaluationSetException
from .ranking import AlignmentRanking

logger = logging.getLogger(__name__)

BUCKET_COUNT = 10


def _pair_arrays(test_pairs:Iterable[Tuple[int, int]]) -> Tuple[np.ndarray, np.ndarray]:
    pairs = np.asarray(list(test_pairs), dtype=np.int64).reshape(-1, 2)
    if len(pairs) == 0:
        raise EmptyEvaluationSetException("test pair set")
    return pairs[:, 0], pairs[:, 1]


def hit_positions(ranking_st:AlignmentRanking, ranking_ts:AlignmentRanking, test_pairs) -> Tuple[np.ndarray, np.ndarray]:
    """0-based rank of the true counterpart of every test pair, in both directions."""
    s_nodes, t_nodes = _pair_arrays(test_pairs)
    return ranking_st.positions(s_nodes, t_nodes), ranking_ts.positions(t_nodes, s_nodes)


def precision_at_n(ranking_st:AlignmentRanking, ranking_ts:AlignmentRanking, test_pairs:Iterable[Tuple[int, int]], n:int) -> float:
    """Fraction of test nodes whose counterpart is in their top-n list, averaged over both directions.

    Parameters
    ----------
    ranking_st : AlignmentRanking
        Ranking of the source test nodes
    ranking_ts : AlignmentRanking
        Ranking of the target test nodes
    test_pairs : Iterable[Tuple[int, int]]
        Held-out (source, target) pairs
    n : int
        List length

    Returns
    -------
    float
        (hits s->t + hits t->s) / (2 |test_pairs|)

    Raises
    ------
    EmptyEvaluationSetException
        No test pair.
    """
    positions_st, positions_ts = hit_positions(ranking_st, ranking_ts, test_pairs)
    hits = np.count_nonzero(positions_st < n) + np.count_nonzero(positions_ts < n)
    return hits / (2. * len(positions_st))


def precision_curve(ranking_st:AlignmentRanking, ranking_ts:AlignmentRanking, test_pairs, ns:Sequence[int]) -> pd.DataFrame:
    """Precision@N for every N of ns, as a DataFrame with the columns N and precision."""
    positions_st, positions_ts = hit_positions(ranking_st, ranking_ts, test_pairs)
    total = 2. * len(positions_st)
    values = [(np.count_nonzero(positions_st < n) + np.count_nonzero(positions_ts < n)) / total for n in ns]
    return pd.DataFrame({"N": list(ns), "precision": values})


def neighbourhood_matrix(g:Graph) -> sp.csr_matrix:
    """Adjacency ignoring the edge directions."""
    if g.is_symmetric():
        return g.adjacency
    return ((g.adjacency + g.transpose) > 0).astype(np.int8).tocsr()


def bfs_shells(adjacency:sp.csr_matrix, source:int, hops:int) -> List[np.ndarray]:
    """Nodes at shortest-path distance exactly 1..hops from source.

    Parameters
    ----------
    adjacency : sp.csr_matrix
        Symmetric adjacency matrix
    source : int
        Start node
    hops : int
        Number of shells

    Returns
    -------
    List[np.ndarray]
        hops sorted node arrays, possibly empty
    """
    visited = np.zeros(adjacency.shape[0], dtype=bool)
    visited[source] = True
    frontier = np.array([source], dtype=np.int64)

    shells = []
    for _ in range(hops):
        if len(frontier):
            reached = np.unique(adjacency[frontier].indices)
            frontier = reached[~visited[reached]]
            visited[frontier] = True
        shells.append(frontier)

    return shells


def rsa_from_shells(shells_s:List[np.ndarray], shells_t:List[np.ndarray], partner:np.ndarray, n_t:int, lam:float) -> float:
    """Sums lam^(i-1) 2 |shared anchor pairs at hop i| / (|shell_i(s)| + |shell_i(t)|).

    partner[v] is the target anchor partner of the source node v, -1 if v is not an anchor.
    """
    value = 0.
    for hop, (shell_s, shell_t) in enumerate(zip(shells_s, shells_t)):
        denominator = len(shell_s) + len(shell_t)
        if denominator == 0:
            continue

        partners = partner[shell_s]
        partners = partners[partners >= 0]
        in_shell_t = np.zeros(n_t, dtype=bool)
        in_shell_t[shell_t] = True
        shared = np.count_nonzero(in_shell_t[partners])

        value += lam ** hop * 2. * shared / denominator

    return value


def rsa(g_s:Graph, g_t:Graph, pair:Tuple[int, int], anchors:AnchorSet, lam:float = 0.5, hops:int = 3) -> float:
    """Reachability to shared anchors of a candidate pair.

    Shells are exact-distance BFS layers, an anchor pair is shared at hop i when its source
    member is in the i-th shell of s and its target member in the i-th shell of t. Hops with
    two empty shells contribute 0.

    Parameters
    ----------
    g_s : Graph
        Source network
    g_t : Graph
        Target network
    pair : Tuple[int, int]
        (s, t) pair
    anchors : AnchorSet
        Anchor pairs
    lam : float, optional
        Discount of the farther hops, by default 0.5
    hops : int, optional
        Number of hops, by default 3

    Returns
    -------
    float
        Value in [0, 1 + lam + ... + lam^(hops-1)]
    """
    s, t = pair
    shells_s = bfs_shells(neighbourhood_matrix(g_s), s, hops)
    shells_t = bfs_shells(neighbourhood_matrix(g_t), t, hops)
    return rsa_from_shells(shells_s, shells_t, anchors.partner_array(g_s.n), g_t.n, lam)


def rsa_values(g_s:Graph, g_t:Graph, pairs:Iterable[Tuple[int, int]], anchors:AnchorSet, lam:float = 0.5, hops:int = 3) -> np.ndarray:
    """RSA of many pairs, sharing the neighbourhood matrices."""
    adjacency_s = neighbourhood_matrix(g_s)
    adjacency_t = neighbourhood_matrix(g_t)
    partner = anchors.partner_array(g_s.n)

    return np.array([rsa_from_shells(bfs_shells(adjacency_s, s, hops), bfs_shells(adjacency_t, t, hops), partner, g_t.n, lam)
                     for s, t in pairs], dtype=np.float64)


def bucket_bounds(count:int, buckets:int = BUCKET_COUNT) -> List[Tuple[int, int]]:
    """Equal size [start, stop) slices, the remainder goes to the last bucket.

    Less than buckets items give a single bucket.
    """
    if count < buckets:
        return [(0, count)]
    size = count // buckets
    bounds = [(k * size, (k + 1) * size) for k in range(buckets)]
    bounds[-1] = (bounds[-1][0], count)
    return bounds


def rsa_bucket_report(g_s:Graph,
    g_t:Graph,
    test_pairs:Iterable[Tuple[int, int]],
    ranking_st:AlignmentRanking,
    ranking_ts:AlignmentRanking,
    anchors:AnchorSet,
    lam:float = 0.5,
    hops:int = 3) -> pd.DataFrame:
    """Precision@1 of the test pairs split in 10 buckets of increasing RSA.

    Returns
    -------
    pd.DataFrame
        One line per bucket: bucket, pairs, rsa_min, rsa_max, precision_at_1

    Raises
    ------
    EmptyEvaluationSetException
        No test pair.
    """
    pairs = np.asarray(list(test_pairs), dtype=np.int64).reshape(-1, 2)
    if len(pairs) == 0:
        raise EmptyEvaluationSetException("test pair set")
    if len(pairs) < BUCKET_COUNT:
        logger.warning("Only %d test pairs, the RSA report uses a single bucket.", len(pairs))

    values = rsa_values(g_s, g_t, pairs.tolist(), anchors, lam, hops)
    order = np.lexsort((pairs[:, 1], pairs[:, 0], values))
    pairs, values = pairs[order], values[order]

    positions_st, positions_ts = hit_positions(ranking_st, ranking_ts, pairs.tolist())

    rows = []
    for bucket, (start, stop) in enumerate(bucket_bounds(len(pairs))):
        hits = np.count_nonzero(positions_st[start:stop] < 1) + np.count_nonzero(positions_ts[start:stop] < 1)
        rows.append({"bucket": bucket,
                     "pairs": stop - start,
                     "rsa_min": float(values[start]),
                     "rsa_max": float(values[stop - 1]),
                     "precision_at_1": hits / (2. * (stop - start))})

    return pd.DataFrame(rows, columns=["bucket", "pairs", "rsa_min", "rsa_max", "precision_at_1"])
