"""Sparse label propagation, tuple similarity and mutual best matching.

The tuple matrix of a network is (A + I) WL, where WL is the one-hot matrix of the node
labels (column c-1 for label c, no column for the label 0).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..config import get_thread_count
from ..graph_core import Graph
from ..wlalign_exceptions import DimensionMismatchException

logger = logging.getLogger(__name__)

ROW_CHUNK = 2048


class SimilarityMatrix:
    """Cosine similarities between normalized tuple rows, stored sparse.

    Rows (source nodes) and columns (target nodes) keep the network node ids, excluded or zero
    norm nodes have empty rows/columns.
    """

    def __init__(self, values:sp.csr_matrix, rows:np.ndarray = None, cols:np.ndarray = None):
        self.values:sp.csr_matrix = values
        self.rows:np.ndarray = np.arange(values.shape[0]) if rows is None else rows
        self.cols:np.ndarray = np.arange(values.shape[1]) if cols is None else cols

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def to_dense(self) -> np.ndarray:
        return self.values.toarray()

    def __getitem__(self, index):
        i, j = index
        return float(self.values[i, j])


def one_hot_labels(labels:np.ndarray, label_count:int) -> sp.csr_matrix:
    """(n, label_count) one-hot matrix of the labels, unlabeled nodes have an empty row."""
    labeled = np.flatnonzero(labels)
    return sp.csr_matrix((np.ones(len(labeled), dtype=np.int64), (labeled, labels[labeled] - 1)),
                         shape=(len(labels), label_count))


def propagate(g:Graph, labels:np.ndarray, label_count:int) -> sp.csr_matrix:
    """Computes the tuple matrix (A + I) WL.

    Row i counts the labels held by i and by the nodes j with A[i][j] = 1.

    Parameters
    ----------
    g : Graph
        Network
    labels : np.ndarray
        Label of each node, 0 for unlabeled
    label_count : int
        Current size of the compressed label set (width of the tuple matrix)

    Returns
    -------
    sp.csr_matrix
        (n, label_count) non-negative integer tuple matrix

    Raises
    ------
    ValueError
        labels does not match the graph or holds a label above label_count.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) != g.n:
        raise ValueError(f"Expected {g.n} labels, found {len(labels)}.")
    if labels.size and (labels.min() < 0 or labels.max() > label_count):
        raise ValueError(f"Labels must be in [0, {label_count}].")

    a_bar = g.adjacency.astype(np.int64) + sp.identity(g.n, dtype=np.int64, format="csr")
    tuples = (a_bar @ one_hot_labels(labels, label_count)).tocsr()
    tuples.eliminate_zeros()
    tuples.sort_indices()

    return tuples


def _row_normalize(tuples:sp.csr_matrix, candidates:np.ndarray) -> Tuple[sp.csr_matrix, np.ndarray]:
    squared = np.asarray(tuples.multiply(tuples).sum(axis=1), dtype=np.float64).ravel()
    norms = np.sqrt(squared)

    keep = norms > 0
    if candidates is not None:
        keep &= np.asarray(candidates, dtype=bool)

    scale = np.zeros_like(norms)
    scale[keep] = 1. / norms[keep]

    return (sp.diags(scale) @ tuples.astype(np.float64)).tocsr(), np.flatnonzero(keep)


def cross_similarity(tp_s:sp.csr_matrix,
    tp_t:sp.csr_matrix,
    candidates_s:np.ndarray = None,
    candidates_t:np.ndarray = None,
    threads:int = None) -> SimilarityMatrix:
    """Cosine similarity between every source tuple row and every target tuple row.

    Parameters
    ----------
    tp_s : sp.csr_matrix
        Source tuple matrix
    tp_t : sp.csr_matrix
        Target tuple matrix
    candidates_s : np.ndarray, optional
        Boolean mask of the source rows to compare, by default all
    candidates_t : np.ndarray, optional
        Boolean mask of the target rows to compare, by default all
    threads : int, optional
        Worker threads for the row chunks, by default WLALIGN_THREADS

    Returns
    -------
    SimilarityMatrix
        Similarities clamped to [0, 1], zero norm rows give no entry.

    Raises
    ------
    DimensionMismatchException
        The tuple matrices have different widths.
    """
    if tp_s.shape[1] != tp_t.shape[1]:
        raise DimensionMismatchException(tp_s.shape[1], tp_t.shape[1])

    normalized_s, rows = _row_normalize(sp.csr_matrix(tp_s), candidates_s)
    normalized_t, cols = _row_normalize(sp.csr_matrix(tp_t), candidates_t)
    transposed_t = normalized_t.T.tocsc()

    threads = get_thread_count() if threads is None else threads
    chunks = [(start, min(start + ROW_CHUNK, normalized_s.shape[0])) for start in range(0, normalized_s.shape[0], ROW_CHUNK)]

    def product(bounds):
        return (normalized_s[bounds[0]:bounds[1]] @ transposed_t).tocsr()

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(product, chunks))
    else:
        blocks = [product(bounds) for bounds in chunks]

    if blocks:
        values = sp.vstack(blocks, format="csr")
    else:
        values = sp.csr_matrix((tp_s.shape[0], tp_t.shape[0]))

    np.clip(values.data, 0., 1., out=values.data)
    values.eliminate_zeros()
    values.sort_indices()

    return SimilarityMatrix(values, rows, cols)


def mutual_match(sim:Union[SimilarityMatrix, np.ndarray, sp.spmatrix]) -> List[Tuple[int, int]]:
    """Extracts the pairs (i, j) that are the maximum of both their row and their column.

    Cells are visited in ascending (row, column) order and a cell is kept only if its row and
    its column were not claimed by a previous cell, so ties give one pair per row and column.
    Zero similarities never match.

    Parameters
    ----------
    sim : Union[SimilarityMatrix, np.ndarray, sp.spmatrix]
        Similarity matrix, non-negative values

    Returns
    -------
    List[Tuple[int, int]]
        Matched (source node, target node) pairs, sorted by source node
    """
    if isinstance(sim, SimilarityMatrix):
        matrix = sim.values.tocoo()
    else:
        matrix = sp.coo_matrix(sim)

    positive = matrix.data > 0
    rows, cols, values = matrix.row[positive], matrix.col[positive], matrix.data[positive]
    if len(values) == 0:
        return []

    row_max = np.zeros(matrix.shape[0])
    col_max = np.zeros(matrix.shape[1])
    np.maximum.at(row_max, rows, values)
    np.maximum.at(col_max, cols, values)

    best = (values == row_max[rows]) & (values == col_max[cols])
    rows, cols = rows[best], cols[best]

    order = np.lexsort((cols, rows))
    row_claimed = np.zeros(matrix.shape[0], dtype=bool)
    col_claimed = np.zeros(matrix.shape[1], dtype=bool)

    matches = []
    for i, j in zip(rows[order].tolist(), cols[order].tolist()):
        if row_claimed[i] or col_claimed[j]:
            continue
        row_claimed[i] = True
        col_claimed[j] = True
        matches.append((i, j))

    return matches
