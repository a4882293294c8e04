"""Adam optimizer applied to the touched slots of the embedding tables (gradient ascent)."""

import logging
from typing import Dict, Tuple

import numpy as np

from ..wlalign_exceptions import NonFiniteGradientException
from .embedding_store import TABLES, EmbeddingStore

logger = logging.getLogger(__name__)


class AdamState:
    """First and second moment accumulators of every slot of the three tables."""

    def __init__(self, slot_count:int, d:int, lr:float = 0.05, beta1:float = 0.9, beta2:float = 0.999, epsilon:float = 1e-8):
        self.lr:float = lr
        self.beta1:float = beta1
        self.beta2:float = beta2
        self.epsilon:float = epsilon

        self.m:Dict[str, np.ndarray] = {table: np.zeros((slot_count, d)) for table in TABLES}
        self.v:Dict[str, np.ndarray] = {table: np.zeros((slot_count, d)) for table in TABLES}
        self.t:int = 0

    @classmethod
    def for_store(cls, store:EmbeddingStore, **hyperparameters) -> "AdamState":
        return cls(store.slot_count, store.d, **hyperparameters)


def adam_step(adam:AdamState, store:EmbeddingStore, gradients:Dict[str, Tuple[np.ndarray, np.ndarray]]) -> EmbeddingStore:
    """Applies one bias-corrected Adam ascent step to the slots present in gradients.

    Slots absent from gradients are left untouched (parameters and moments). The store is
    updated in place and returned.

    Parameters
    ----------
    adam : AdamState
        Optimizer state, its step counter is incremented
    store : EmbeddingStore
        Parameters
    gradients : Dict[str, Tuple[np.ndarray, np.ndarray]]
        For each table: unique slots and their gradient rows

    Returns
    -------
    EmbeddingStore
        The updated store

    Raises
    ------
    NonFiniteGradientException
        A gradient row is not finite, nothing is updated.
    """
    for table, (slots, rows) in gradients.items():
        finite = np.all(np.isfinite(rows), axis=1)
        if not np.all(finite):
            raise NonFiniteGradientException(table, slots[~finite].tolist())

    adam.t += 1
    correction_1 = 1. - adam.beta1 ** adam.t
    correction_2 = 1. - adam.beta2 ** adam.t

    for table, (slots, rows) in gradients.items():
        m = adam.beta1 * adam.m[table][slots] + (1. - adam.beta1) * rows
        v = adam.beta2 * adam.v[table][slots] + (1. - adam.beta2) * rows * rows
        adam.m[table][slots] = m
        adam.v[table][slots] = v

        store.tables[table][slots] += adam.lr * (m / correction_1) / (np.sqrt(v / correction_2) + adam.epsilon)

    return store
