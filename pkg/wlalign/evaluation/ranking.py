"""Candidate ranking for the alignment inference.

Candidates of a query are the nodes of the other network, sorted by decreasing score, ties
broken by ascending node id. The default score is the cosine similarity of the node vectors;
the ablation variants rank by tuple similarity or by label equality.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Union

import numpy as np

from ..config import get_thread_count
from ..embedding.embedding_store import EmbeddingStore
from ..relabel.label_state import LabelState
from ..relabel.propagation import SimilarityMatrix
from ..wlalign_enum import Direction, Network
from ..wlalign_exceptions import EmptyEvaluationSetException

logger = logging.getLogger(__name__)

QUERY_CHUNK = 1024

# position of a truth absent from the candidate list, above any list length
NOT_RANKED = np.iinfo(np.int64).max

ScoreFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class AlignmentRanking:
    """Top-k candidates of each query node.

    candidates[q] and scores[q] are the candidate node ids and scores of queries[q], scores
    non increasing along each row.
    """
    direction: Direction
    queries: np.ndarray
    candidates: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        self.__rows:Dict[int, int] = {int(q): row for row, q in enumerate(self.queries.tolist())}

    @property
    def top_k(self) -> int:
        return self.candidates.shape[1]

    def top(self, query:int, n:int = None) -> np.ndarray:
        """Best n candidates of a query (all kept candidates if n is None)."""
        return self.candidates[self.__rows[int(query)], :n]

    def positions(self, queries:Iterable[int], truths:Iterable[int]) -> np.ndarray:
        """0-based rank of each truth in the list of its query, NOT_RANKED when it is absent.

        Raises
        ------
        KeyError
            A query was not ranked.
        """
        rows = np.array([self.__rows[int(q)] for q in queries], dtype=np.int64)
        truths = np.asarray(list(truths), dtype=np.int64)
        if len(rows) == 0:
            return np.zeros(0, dtype=np.int64)

        found = self.candidates[rows] == truths[:, None]
        return np.where(found.any(axis=1), found.argmax(axis=1), NOT_RANKED)

    def __len__(self) -> int:
        return len(self.queries)


def rank_by_scores(query_ids, scores:np.ndarray, candidate_ids, top_k:int, direction:Union[Direction, str] = Direction.SOURCE_TO_TARGET) -> AlignmentRanking:
    """Sorts each row of a (queries, candidates) score matrix.

    Parameters
    ----------
    query_ids : array-like
        Query nodes, one per row of scores
    scores : np.ndarray
        Score of each (query, candidate)
    candidate_ids : array-like
        Candidate nodes, one per column of scores
    top_k : int
        Candidates kept per query, clipped to the candidate count
    direction : Union[Direction, str], optional
        Alignment direction, by default s->t

    Returns
    -------
    AlignmentRanking
        Decreasing scores, ties broken by ascending candidate id
    """
    query_ids = np.asarray(query_ids, dtype=np.int64)
    candidate_ids = np.asarray(candidate_ids, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64).reshape(len(query_ids), len(candidate_ids))
    top_k = min(top_k, len(candidate_ids))

    # lexsort: last key is the primary one
    order = np.lexsort((np.broadcast_to(candidate_ids, scores.shape), -scores), axis=-1)[:, :top_k]

    return AlignmentRanking(direction=Direction(direction),
                            queries=query_ids,
                            candidates=candidate_ids[order],
                            scores=np.take_along_axis(scores, order, axis=1))


def _networks(direction:Direction):
    if direction is Direction.SOURCE_TO_TARGET:
        return Network.SOURCE, Network.TARGET
    return Network.TARGET, Network.SOURCE


def _candidate_pool(n:int, exclude:Iterable[int]) -> np.ndarray:
    keep = np.ones(n, dtype=bool)
    if exclude is not None:
        keep[np.asarray(list(exclude), dtype=np.int64)] = False
    return np.flatnonzero(keep)


def rank_with(score:ScoreFunction,
    queries:Iterable[int],
    candidate_count:int,
    direction:Union[Direction, str],
    top_k:int,
    exclude:Iterable[int] = None,
    threads:int = None) -> AlignmentRanking:
    """Ranks the candidates of every query with a score function, query chunks run on a thread pool.

    score(query_chunk, candidates) returns the (len(query_chunk), len(candidates)) scores.

    Raises
    ------
    EmptyEvaluationSetException
        No query.
    ValueError
        top_k lower than 1.
    """
    queries = np.asarray(list(queries), dtype=np.int64)
    if len(queries) == 0:
        raise EmptyEvaluationSetException("query set")
    if top_k < 1:
        raise ValueError(f"top_k must be at least 1, found {top_k}.")

    candidates = _candidate_pool(candidate_count, exclude)
    chunks = [queries[start:start + QUERY_CHUNK] for start in range(0, len(queries), QUERY_CHUNK)]

    def rank_chunk(chunk):
        return rank_by_scores(chunk, score(chunk, candidates), candidates, top_k, direction)

    threads = get_thread_count() if threads is None else threads
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(rank_chunk, chunks))
    else:
        parts = [rank_chunk(chunk) for chunk in chunks]

    return AlignmentRanking(direction=Direction(direction),
                            queries=queries,
                            candidates=np.concatenate([part.candidates for part in parts]),
                            scores=np.concatenate([part.scores for part in parts]))


def _unit_rows(vectors:np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return np.divide(vectors, norms, out=np.zeros_like(vectors), where=norms > 0)


def rank_candidates(store:EmbeddingStore,
    queries:Iterable[int],
    direction:Union[Direction, str],
    top_k:int,
    exclude:Iterable[int] = None,
    threads:int = None) -> AlignmentRanking:
    """Exact top-k of the cosine similarity between the node vectors of both networks.

    Parameters
    ----------
    store : EmbeddingStore
        Trained embeddings
    queries : Iterable[int]
        Query nodes of the network the direction starts from
    direction : Union[Direction, str]
        s->t or t->s
    top_k : int
        Candidates kept per query
    exclude : Iterable[int], optional
        Nodes of the other network removed from the candidate pool (the anchors), by default None
    threads : int, optional
        Worker threads, by default WLALIGN_THREADS

    Returns
    -------
    AlignmentRanking
        Ranked candidates
    """
    direction = Direction(direction)
    query_network, candidate_network = _networks(direction)
    query_vectors = _unit_rows(store.node_vectors(query_network))
    candidate_vectors = _unit_rows(store.node_vectors(candidate_network))

    def score(chunk, candidates):
        return query_vectors[chunk] @ candidate_vectors[candidates].T

    return rank_with(score, queries, len(candidate_vectors), direction, top_k, exclude, threads)


def rank_by_similarity(similarity:SimilarityMatrix,
    queries:Iterable[int],
    direction:Union[Direction, str],
    top_k:int,
    exclude:Iterable[int] = None,
    threads:int = None) -> AlignmentRanking:
    """Ranks by the tuple similarity of the last relabeling round instead of the embeddings."""
    direction = Direction(direction)
    values = similarity.values.tocsr() if direction is Direction.SOURCE_TO_TARGET else similarity.values.T.tocsr()

    def score(chunk, candidates):
        return values[chunk][:, candidates].toarray()

    return rank_with(score, queries, values.shape[1], direction, top_k, exclude, threads)


def rank_by_labels(state:LabelState,
    queries:Iterable[int],
    direction:Union[Direction, str],
    top_k:int,
    exclude:Iterable[int] = None,
    threads:int = None) -> AlignmentRanking:
    """Ranks first the candidates holding the same non zero label as the query, then by id."""
    direction = Direction(direction)
    query_network, candidate_network = _networks(direction)
    query_labels = state.labels(query_network)
    candidate_labels = state.labels(candidate_network)

    def score(chunk, candidates):
        labels = query_labels[chunk][:, None]
        return ((labels == candidate_labels[candidates][None, :]) & (labels > 0)).astype(np.float64)

    return rank_with(score, queries, len(candidate_labels), direction, top_k, exclude, threads)
