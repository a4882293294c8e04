"""Regularized representation learning across networks.

Two schedules are available:

    -   interleaved : each outer round runs one relabeling round (until the labels converged),
        rebuilds the batch set from the current labels and runs E epochs of ascent over it.
        Training stops once the labels converged and the objective reached a plateau.
    -   fcl : labels are relabeled to convergence first, then the embeddings are trained for a
        fixed number of epochs.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
import pandas as pd

from ..config import ExperimentConfig
from ..graph_core import AnchorSet, Graph
from ..relabel.convergence import make_relabeler, relabel_until_convergence, run_round
from ..relabel.generic_relabeler import GenericRelabeler
from ..relabel.label_state import LabelState, init_labels
from ..wlalign_enum import Network, Schedule
from ..wlalign_exceptions import NonFiniteGradientException
from .adam import AdamState, adam_step
from .embedding_store import EmbeddingStore, init_embeddings
from .objectives import accumulate, context_objective_grad, label_objective_grad
from .sampler import BatchSampler, TrainingBatch

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["round", "epoch", "label_count", "label_objective", "context_objective", "label_converged"]


@dataclass
class EpochRecord:
    round: int
    epoch: int
    label_count: int
    label_objective: float
    context_objective: float
    label_converged: bool


@dataclass
class TrainingTrace:
    """Per-epoch objective values and label counts of a training run."""
    records: List[EpochRecord] = field(default_factory=list)
    elapsed: float = 0.

    def append(self, record:EpochRecord):
        self.records.append(record)

    def objectives(self) -> np.ndarray:
        """Total objective (label + context) of each epoch, a missing label term counts as 0."""
        return np.array([np.nan_to_num(r.label_objective) + r.context_objective for r in self.records])

    def label_converged_epoch(self) -> int:
        """First epoch trained on converged labels, -1 if the labels never converged."""
        for record in self.records:
            if record.label_converged:
                return record.epoch
        return -1

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([record.__dict__ for record in self.records], columns=TRACE_COLUMNS)

    def __len__(self) -> int:
        return len(self.records)


def batch_objective(store:EmbeddingStore, batch:TrainingBatch, use_labels:bool = True) -> Tuple[float, float]:
    """Label and context objective values of a batch, without any update."""
    label_value = 0.
    if use_labels and len(batch.label_s):
        label_value = label_objective_grad(store, batch.label_s, batch.label_t, batch.label_polarity).total

    context_value = 0.
    for network in [Network.SOURCE, Network.TARGET]:
        i, j, polarity = batch.context_of(network)
        if len(i):
            context_value += context_objective_grad(store, network, i, j, polarity).total

    return label_value, context_value


class Trainer:
    """Runs one training schedule on a pair of networks."""

    def __init__(self,
        g_s:Graph,
        g_t:Graph,
        anchors:AnchorSet,
        config:ExperimentConfig,
        relabeler:GenericRelabeler = None,
        use_labels:bool = True):
        """
        Parameters
        ----------
        g_s : Graph
            Source network
        g_t : Graph
            Target network
        anchors : AnchorSet
            Training anchor pairs
        config : ExperimentConfig
            Hyperparameters, schedule and seeds
        relabeler : GenericRelabeler, optional
            Relabeling round, by default the built-in round of config.mode
        use_labels : bool, optional
            If False, only the context objective is trained and no relabeling happens, by default True
        """
        self.g_s = g_s
        self.g_t = g_t
        self.anchors = anchors
        self.config = config
        self.use_labels = use_labels
        self.relabeler = make_relabeler(config.mode) if relabeler is None else relabeler
        self.seeds = config.seeds()

        self.store:EmbeddingStore = init_embeddings(g_s.n, g_t.n, config.d, self.seeds["init"],
                                                    anchors, config.share_anchor_embeddings)
        self.adam = AdamState.for_store(self.store,
                                        lr=config.lr,
                                        beta1=config.beta1,
                                        beta2=config.beta2,
                                        epsilon=config.epsilon)
        self.state:LabelState = init_labels(anchors, g_s.n, g_t.n)
        if not use_labels:
            self.state.converged = True
        self.trace = TrainingTrace()
        self.skipped_batches:int = 0
        self.__epoch:int = 0

    def sampler(self, round_index:int) -> BatchSampler:
        """Sampler of the batch set of one outer round."""
        seed = int(np.random.SeedSequence([self.seeds["batches"], round_index]).generate_state(1)[0])
        return BatchSampler(self.g_s,
                            self.g_t,
                            self.state,
                            k_label=self.config.k_label,
                            k_context=self.config.k_context,
                            batch_size=self.config.batch_size,
                            seed=seed,
                            negative_distribution=self.config.negative_distribution,
                            use_labels=self.use_labels)

    def train_batch(self, batch:TrainingBatch) -> Tuple[float, float]:
        """Computes the batch objective and applies one Adam step with the summed gradients.

        A batch with non finite gradients is skipped and logged.

        Returns
        -------
        Tuple[float, float]
            Label and context objective values before the step
        """
        terms = []
        label_value = 0.
        if self.use_labels and len(batch.label_s):
            label_terms = label_objective_grad(self.store, batch.label_s, batch.label_t, batch.label_polarity)
            label_value = label_terms.total
            terms.append(label_terms)

        context_value = 0.
        for network in [Network.SOURCE, Network.TARGET]:
            i, j, polarity = batch.context_of(network)
            if len(i):
                context_terms = context_objective_grad(self.store, network, i, j, polarity)
                context_value += context_terms.total
                terms.append(context_terms)

        if not terms:
            return label_value, context_value

        try:
            adam_step(self.adam, self.store, accumulate(self.store, terms))
        except NonFiniteGradientException as e:
            self.skipped_batches += 1
            logger.error("Batch %d skipped: %s", batch.index, e)

        return label_value, context_value

    def run_epoch(self, batches:List[TrainingBatch], round_index:int) -> EpochRecord:
        label_value, context_value = 0., 0.
        for batch in batches:
            label_batch, context_batch = self.train_batch(batch)
            label_value += label_batch
            context_value += context_batch

        record = EpochRecord(round=round_index,
                             epoch=self.__epoch,
                             label_count=self.state.label_count,
                             label_objective=label_value if self.use_labels else np.nan,
                             context_objective=context_value,
                             label_converged=self.state.converged)
        self.trace.append(record)
        self.__epoch += 1

        logger.debug("Epoch %d: label objective %.6g, context objective %.6g.",
                     record.epoch, record.label_objective, record.context_objective)
        return record

    def has_plateaued(self) -> bool:
        """Relative change of the total objective over the last plateau_window epochs below plateau_tol."""
        window = self.config.plateau_window
        objectives = self.trace.objectives()
        if len(objectives) <= window:
            return False
        previous, current = objectives[-1 - window], objectives[-1]
        return abs(current - previous) / max(abs(previous), 1e-12) < self.config.plateau_tol

    def run_interleaved(self):
        for round_index in range(1, self.config.max_rounds + 1):
            if not self.state.converged and self.state.rounds < self.config.max_relabel_rounds:
                self.state = run_round(self.relabeler, self.g_s, self.g_t, self.state)

            batches = list(self.sampler(round_index).batches(self.config.batches_per_round))

            for _ in range(self.config.epochs):
                self.run_epoch(batches, round_index)
                if self.state.converged and self.has_plateaued():
                    logger.info("Training stopped at round %d, epoch %d: objective plateau reached.",
                                round_index, self.__epoch)
                    return

            if self.config.epochs == 0 and self.state.converged:
                return

            logger.info("Training round %d done: |C_a| = %d, %d epochs.", round_index, self.state.label_count, self.__epoch)

        if not self.state.converged:
            logger.warning("Labels did not converge within %d training rounds.", self.config.max_rounds)

    def run_fcl(self):
        if self.config.max_rounds == 0:
            return

        if self.use_labels:
            self.state = relabel_until_convergence(self.g_s,
                                                   self.g_t,
                                                   self.anchors,
                                                   max_rounds=self.config.max_relabel_rounds,
                                                   relabeler=self.relabeler)
            # the fixed epoch budget is trained on the final labels
            self.state.converged = True

        batches = list(self.sampler(0).batches(self.config.batches_per_round))
        for _ in range(self.config.fcl_epochs):
            self.run_epoch(batches, self.state.rounds)

    def run(self) -> Tuple[EmbeddingStore, LabelState, TrainingTrace]:
        """Runs the configured schedule.

        Returns
        -------
        Tuple[EmbeddingStore, LabelState, TrainingTrace]
            Trained embeddings, final labels and per-epoch trace
        """
        start = time.perf_counter()

        if Schedule(self.config.schedule) is Schedule.FCL:
            self.run_fcl()
        else:
            self.run_interleaved()

        self.trace.elapsed = time.perf_counter() - start
        if self.skipped_batches:
            logger.warning("%d batches were skipped because of non finite gradients.", self.skipped_batches)

        return self.store, self.state, self.trace


def train(g_s:Graph,
    g_t:Graph,
    anchors:AnchorSet,
    config:ExperimentConfig,
    relabeler:GenericRelabeler = None,
    use_labels:bool = True) -> Tuple[EmbeddingStore, LabelState, TrainingTrace]:
    """Trains the embeddings of both networks, see Trainer."""
    return Trainer(g_s, g_t, anchors, config, relabeler, use_labels).run()
