"""Label and context objectives with their analytic gradients.

Both objectives are maximized:

    -   label : (2 L - 1) cos(u_s, u_t), L = 1 for pairs sharing a label
    -   context : log s(u_i . u'_j) + log s(u''_i . u_j) for an edge i -> j,
        log s(-u_i . u'_j) + log s(-u''_i . u_j) for a negative pair

Functions are vectorized over the entries of a batch.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

import numpy as np
from scipy.special import expit, log_expit

from ..wlalign_enum import Network
from ..wlalign_exceptions import ZeroNormVectorException
from .embedding_store import TABLES, EmbeddingStore


@dataclass
class ObjectiveTerms:
    """Objective values of a set of entries and their gradients per (table, slot)."""
    values: np.ndarray
    gradients: List[Tuple[str, np.ndarray, np.ndarray]] = field(default_factory=list)

    @property
    def total(self) -> float:
        return float(np.sum(self.values))


def cosine_objective(u_s:np.ndarray, u_t:np.ndarray, polarity) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(2 polarity - 1) cos(u_s, u_t) and its partial derivatives.

    Parameters
    ----------
    u_s : np.ndarray
        (B, d) or (d,) vectors
    u_t : np.ndarray
        Same shape as u_s
    polarity : array-like
        1 for positive pairs, 0 for negative pairs

    Returns
    -------
    Tuple[np.ndarray, np.ndarray, np.ndarray]
        values (B,), gradient wrt u_s, gradient wrt u_t

    Raises
    ------
    ZeroNormVectorException
        A vector has a zero norm.
    """
    u_s = np.atleast_2d(u_s)
    u_t = np.atleast_2d(u_t)
    sign = (2. * np.asarray(polarity, dtype=np.float64) - 1.).reshape(-1)

    norm_s = np.linalg.norm(u_s, axis=1)
    norm_t = np.linalg.norm(u_t, axis=1)
    zero = (norm_s == 0) | (norm_t == 0)
    if np.any(zero):
        raise ZeroNormVectorException(int(np.count_nonzero(zero)))

    cos = np.einsum("ij,ij->i", u_s, u_t) / (norm_s * norm_t)

    grad_s = u_t / (norm_s * norm_t)[:, None] - (cos / norm_s ** 2)[:, None] * u_s
    grad_t = u_s / (norm_s * norm_t)[:, None] - (cos / norm_t ** 2)[:, None] * u_t

    return sign * cos, sign[:, None] * grad_s, sign[:, None] * grad_t


def logistic_objective(u_i:np.ndarray, in_j:np.ndarray, out_i:np.ndarray, u_j:np.ndarray, polarity) \
    -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Context objective of the entries (i, j) and its partial derivatives.

    Parameters
    ----------
    u_i : np.ndarray
        Node vectors of i
    in_j : np.ndarray
        Input context vectors of j
    out_i : np.ndarray
        Output context vectors of i
    u_j : np.ndarray
        Node vectors of j
    polarity : array-like
        1 for edges, 0 for negative pairs

    Returns
    -------
    Tuple[np.ndarray, ...]
        values, gradients wrt u_i, in_j, out_i, u_j
    """
    u_i, in_j, out_i, u_j = (np.atleast_2d(x) for x in (u_i, in_j, out_i, u_j))
    sign = (2. * np.asarray(polarity, dtype=np.float64) - 1.).reshape(-1)

    x_1 = sign * np.einsum("ij,ij->i", u_i, in_j)
    x_2 = sign * np.einsum("ij,ij->i", out_i, u_j)

    values = log_expit(x_1) + log_expit(x_2)

    # d/dx log s(x) = s(-x)
    g_1 = (sign * expit(-x_1))[:, None]
    g_2 = (sign * expit(-x_2))[:, None]

    return values, g_1 * in_j, g_1 * u_i, g_2 * u_j, g_2 * out_i


def label_objective_grad(store:EmbeddingStore, s_nodes, t_nodes, polarity) -> ObjectiveTerms:
    """Label objective of (s_node, t_node) pairs, gradients on the node table slots."""
    s_nodes = np.atleast_1d(s_nodes)
    t_nodes = np.atleast_1d(t_nodes)
    slots_s = store.slot(Network.SOURCE, s_nodes)
    slots_t = store.slot(Network.TARGET, t_nodes)

    values, grad_s, grad_t = cosine_objective(store.tables["node"][slots_s], store.tables["node"][slots_t], polarity)

    return ObjectiveTerms(values, [("node", slots_s, grad_s), ("node", slots_t, grad_t)])


def context_objective_grad(store:EmbeddingStore, network:Union[Network, str], i, j, polarity) -> ObjectiveTerms:
    """Context objective of the entries (i, j) of one network, gradients on u(i), u'(j), u''(i), u(j)."""
    slots_i = store.slot(network, np.atleast_1d(i))
    slots_j = store.slot(network, np.atleast_1d(j))

    values, grad_u_i, grad_in_j, grad_out_i, grad_u_j = logistic_objective(store.tables["node"][slots_i],
                                                                          store.tables["input_context"][slots_j],
                                                                          store.tables["output_context"][slots_i],
                                                                          store.tables["node"][slots_j],
                                                                          polarity)

    return ObjectiveTerms(values, [("node", slots_i, grad_u_i),
                                   ("input_context", slots_j, grad_in_j),
                                   ("output_context", slots_i, grad_out_i),
                                   ("node", slots_j, grad_u_j)])


def accumulate(store:EmbeddingStore, terms:List[ObjectiveTerms]) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
    """Sums the gradients of several terms per slot.

    Returns
    -------
    Dict[str, Tuple[np.ndarray, np.ndarray]]
        For each table: touched slots (sorted) and their summed gradient rows
    """
    dense = {table: np.zeros((store.slot_count, store.d)) for table in TABLES}
    touched = {table: [] for table in TABLES}

    for term in terms:
        for table, slots, rows in term.gradients:
            np.add.at(dense[table], slots, rows)
            touched[table].append(slots)

    gradients = {}
    for table in TABLES:
        if touched[table]:
            slots = np.unique(np.concatenate(touched[table]))
            gradients[table] = (slots, dense[table][slots])

    return gradients
