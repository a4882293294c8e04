"""Regularized representation learning: embeddings, batches, objectives, optimizer and schedules."""

from .adam import AdamState, adam_step
from .embedding_store import TABLES, EmbeddingStore, init_embeddings
from .objectives import (ObjectiveTerms, accumulate, context_objective_grad, cosine_objective,
                         label_objective_grad, logistic_objective)
from .sampler import BatchSampler, TrainingBatch, sample_batches
from .trainer import EpochRecord, Trainer, TrainingTrace, batch_objective, train
