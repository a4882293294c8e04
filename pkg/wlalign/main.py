"""WL-Align pipeline builder and runner module"""

import logging
import time
from typing import Dict, Iterable, List, Tuple, Type

import numpy as np

from .config import ExperimentConfig
from .embedding.embedding_store import EmbeddingStore
from .embedding.trainer import Trainer, TrainingTrace
from .evaluation.metrics import precision_curve, rsa_bucket_report
from .evaluation.ranking import (AlignmentRanking, rank_by_labels, rank_by_similarity,
                                 rank_candidates)
from .evaluation.report import EvalReport
from .graph_core import AnchorSet, Graph, sample_anchors
from .relabel.convergence import make_relabeler, relabel_until_convergence
from .relabel.generic_relabeler import GenericRelabeler
from .relabel.label_quality import coverage_ratio, label_histogram_similarity
from .relabel.label_state import LabelState
from .relabel.propagation import SimilarityMatrix, cross_similarity, propagate
from .relabel.relabeler_tester import RelabelerTester
from .wlalign_enum import Direction, Network, PipelineVariant, RelabelMode
from .wlalign_exceptions import (EmptyEvaluationSetException, MissingAnchorsException,
                                 RelabelerRegistrationException, UntrainedModelException)
from .wlalign_io import PathLike, write_embeddings

logger = logging.getLogger(__name__)


class WlAlign:
    """
        WL-Align pipeline builder and runner class.

        Graphs and anchors are set first, then relabel/train/evaluate (or run) fill the results
        read back with the getters.
    """

    def __init__(self, config:ExperimentConfig = None):
        """WlAlign class constructor

        Parameters
        ----------
        config : ExperimentConfig, optional
            Pipeline parameters, by default the default configuration
        """
        self.__config:ExperimentConfig = ExperimentConfig() if config is None else config
        self.__seeds:Dict[str, int] = self.__config.seeds()

        self.__custom_relabelers:Dict[str, Type[GenericRelabeler]] = {}
        self.__relabeler_name:str = None

        self.__g_s:Graph = None
        self.__g_t:Graph = None
        self.__anchors:AnchorSet = None
        self.__test_pairs:List[Tuple[int, int]] = []
        self.__correspondence:List[Tuple[int, int]] = []

        self.__state:LabelState = None
        self.__store:EmbeddingStore = None
        self.__trace:TrainingTrace = None
        self.__similarity:SimilarityMatrix = None
        self.__rankings:Dict[Direction, AlignmentRanking] = {}
        self.__report:EvalReport = None
        self.__timings:Dict[str, float] = {}

    @property
    def config(self) -> ExperimentConfig:
        return self.__config

    @property
    def variant(self) -> PipelineVariant:
        return PipelineVariant(self.__config.variant)

    def relabel_mode(self) -> RelabelMode:
        """Relabeling mode actually used: the variants without similarity use the hard mode."""
        if self.variant in [PipelineVariant.WO_SIM, PipelineVariant.WO_SIM_RL]:
            return RelabelMode.HARD
        return RelabelMode(self.__config.mode)

    def register_relabeler(self, name:str, relabeler_class:Type[GenericRelabeler]):
        """Registers a custom relabeling round after checking its contract.

        Parameters
        ----------
        name : str
            Name used to select the relabeler
        relabeler_class : Type[GenericRelabeler]
            Class deriving from GenericRelabeler

        Raises
        ------
        RelabelerRegistrationException
            Name already used or contract not respected.
        """
        if name in self.__custom_relabelers or name in [mode.value for mode in RelabelMode]:
            raise RelabelerRegistrationException(name, "name already used")

        RelabelerTester().test(name, relabeler_class)
        self.__custom_relabelers[name] = relabeler_class

    def use_relabeler(self, name:str = None):
        """Selects a registered relabeler, None goes back to the built-in round of the mode."""
        if name is not None and name not in self.__custom_relabelers:
            raise RelabelerRegistrationException(name, "not registered")
        self.__relabeler_name = name

    def make_relabeler(self) -> GenericRelabeler:
        if self.__relabeler_name is not None:
            return self.__custom_relabelers[self.__relabeler_name]()
        return make_relabeler(self.relabel_mode())

    def set_graphs(self, g_s:Graph, g_t:Graph):
        self.__g_s = g_s
        self.__g_t = g_t
        self.__reset()

    def set_anchors(self, anchors:AnchorSet, test_pairs:Iterable[Tuple[int, int]] = ()):
        """Sets the training anchors and the held-out test pairs."""
        self.__check_graphs()
        self.__anchors = AnchorSet(anchors.pairs, self.__g_s.n, self.__g_t.n)
        self.__test_pairs = [(int(s), int(t)) for s, t in test_pairs]
        self.__correspondence = sorted(list(self.__anchors) + self.__test_pairs)
        self.__reset()

    def split_anchors(self, correspondence:Iterable[Tuple[int, int]], ratio:float = None):
        """Splits known pairs into training anchors and test pairs with the split seed.

        Parameters
        ----------
        correspondence : Iterable[Tuple[int, int]]
            Known (source, target) pairs
        ratio : float, optional
            Training ratio, by default config.train_ratio
        """
        self.__check_graphs()
        ratio = self.__config.train_ratio if ratio is None else ratio
        anchors, test_pairs = sample_anchors(self.__g_s, self.__g_t, correspondence, ratio, self.__seeds["split"])
        self.set_anchors(anchors, test_pairs)

    def __check_graphs(self):
        if self.__g_s is None or self.__g_t is None:
            raise UntrainedModelException("graph pair")

    def __check_anchors(self):
        self.__check_graphs()
        if self.__anchors is None or len(self.__anchors) == 0:
            raise MissingAnchorsException()

    def __reset(self):
        self.__state = None
        self.__store = None
        self.__trace = None
        self.__similarity = None
        self.__rankings = {}
        self.__report = None
        self.__timings = {}

    def relabel(self) -> LabelState:
        """Runs the across-network relabeling until convergence (or max_relabel_rounds)."""
        self.__check_graphs()
        anchors = self.__anchors if self.__anchors is not None else AnchorSet()

        start = time.perf_counter()
        self.__state = relabel_until_convergence(self.__g_s,
                                                 self.__g_t,
                                                 anchors,
                                                 max_rounds=self.__config.max_relabel_rounds,
                                                 relabeler=self.make_relabeler())
        self.__timings["relabel"] = time.perf_counter() - start

        return self.__state

    def train(self):
        """Trains the embeddings (full, wo_wl and wo_sim variants) or relabels only (other variants)."""
        self.__check_anchors()

        if self.variant in [PipelineVariant.WO_RL, PipelineVariant.WO_SIM_RL]:
            self.relabel()
            if self.variant is PipelineVariant.WO_RL:
                self.__similarity = self.tuple_similarity()
            return

        start = time.perf_counter()
        trainer = Trainer(self.__g_s,
                          self.__g_t,
                          self.__anchors,
                          self.__config,
                          relabeler=self.make_relabeler(),
                          use_labels=self.variant is not PipelineVariant.WO_WL)
        self.__store, self.__state, self.__trace = trainer.run()
        self.__timings["train"] = time.perf_counter() - start

    def tuple_similarity(self) -> SimilarityMatrix:
        """Normalized tuple similarity of the current labels (the last relabeling round input)."""
        state = self.get_labels()
        return cross_similarity(propagate(self.__g_s, state.labels_s, state.label_count),
                                propagate(self.__g_t, state.labels_t, state.label_count))

    def rank(self, direction:Direction, queries:Iterable[int], top_k:int) -> AlignmentRanking:
        """Ranks the candidates of the queries with the scoring of the variant, anchors excluded."""
        direction = Direction(direction)
        anchors = self.__anchors if self.__anchors is not None else AnchorSet()
        exclude = anchors.t_nodes if direction is Direction.SOURCE_TO_TARGET else anchors.s_nodes

        if self.variant is PipelineVariant.WO_RL:
            if self.__similarity is None:
                raise UntrainedModelException("tuple similarity")
            return rank_by_similarity(self.__similarity, queries, direction, top_k, exclude)

        if self.variant is PipelineVariant.WO_SIM_RL:
            return rank_by_labels(self.get_labels(), queries, direction, top_k, exclude)

        return rank_candidates(self.get_embeddings(), queries, direction, top_k, exclude)

    def label_quality(self) -> Dict[str, float]:
        """Histogram similarity and coverage ratios over the known pairs."""
        state = self.get_labels()
        if not self.__correspondence:
            raise EmptyEvaluationSetException("correspondence")

        pairs = np.asarray(self.__correspondence, dtype=np.int64)
        return {"histogram_similarity": label_histogram_similarity(state, pairs[:, 0], pairs[:, 1]),
                "coverage_s": coverage_ratio(state, pairs[:, 0], Network.SOURCE),
                "coverage_t": coverage_ratio(state, pairs[:, 1], Network.TARGET),
                "label_count": int(state.label_count),
                "rounds": int(state.rounds),
                "converged": bool(state.converged)}

    def evaluate(self) -> EvalReport:
        """Ranks the test pairs in both directions and builds the evaluation report.

        Raises
        ------
        EmptyEvaluationSetException
            No test pair.
        """
        if not self.__test_pairs:
            raise EmptyEvaluationSetException("test pair set")

        start = time.perf_counter()
        top_k = max(self.__config.top_n)
        pairs = np.asarray(self.__test_pairs, dtype=np.int64)

        self.__rankings = {Direction.SOURCE_TO_TARGET: self.rank(Direction.SOURCE_TO_TARGET, pairs[:, 0], top_k),
                           Direction.TARGET_TO_SOURCE: self.rank(Direction.TARGET_TO_SOURCE, pairs[:, 1], top_k)}
        ranking_st = self.__rankings[Direction.SOURCE_TO_TARGET]
        ranking_ts = self.__rankings[Direction.TARGET_TO_SOURCE]

        curve = precision_curve(ranking_st, ranking_ts, self.__test_pairs, sorted(self.__config.top_n))
        buckets = rsa_bucket_report(self.__g_s, self.__g_t, self.__test_pairs, ranking_st, ranking_ts,
                                    self.__anchors, self.__config.rsa_lambda, self.__config.rsa_hops)
        self.__timings["evaluate"] = time.perf_counter() - start

        self.__report = EvalReport.from_curve(curve,
                                              rsa_buckets=buckets,
                                              label_quality=self.label_quality(),
                                              metadata=self.metadata(),
                                              timings=dict(self.__timings))
        self.__report.check()

        return self.__report

    def run(self) -> EvalReport:
        """Trains then evaluates."""
        self.train()
        return self.evaluate()

    def metadata(self) -> dict:
        return {"variant": self.variant.value,
                "mode": self.relabel_mode().value,
                "relabeler": self.__relabeler_name or "built-in",
                "config_hash": self.__config.config_hash(),
                "seeds": self.__seeds,
                "n_s": self.__g_s.n,
                "n_t": self.__g_t.n,
                "anchors": len(self.__anchors) if self.__anchors is not None else 0,
                "test_pairs": len(self.__test_pairs)}

    def export_embeddings(self, path:PathLike):
        """Writes the node vectors of both networks with their original node ids."""
        store = self.get_embeddings()
        header = {"d": store.d,
                  "seeds": self.__seeds,
                  "config_hash": self.__config.config_hash()}
        write_embeddings(store.node_vectors(Network.SOURCE), store.node_vectors(Network.TARGET),
                         path, header, self.__g_s, self.__g_t)

    def get_graphs(self) -> Tuple[Graph, Graph]:
        self.__check_graphs()
        return self.__g_s, self.__g_t

    def get_anchors(self) -> AnchorSet:
        if self.__anchors is None:
            raise UntrainedModelException("anchor split")
        return self.__anchors

    def get_test_pairs(self) -> List[Tuple[int, int]]:
        return list(self.__test_pairs)

    def get_labels(self) -> LabelState:
        """Returns the label state of the last relabeling.

        Raises
        ------
        UntrainedModelException
            Nothing was relabeled yet.
        """
        if self.__state is None:
            raise UntrainedModelException("label state")
        return self.__state

    def get_embeddings(self) -> EmbeddingStore:
        """Returns the trained embeddings.

        Raises
        ------
        UntrainedModelException
            The pipeline was not trained, or the variant does not learn embeddings.
        """
        if self.__store is None:
            raise UntrainedModelException("embedding store")
        return self.__store

    def get_trace(self, as_dataframe:bool = False):
        if self.__trace is None:
            raise UntrainedModelException("training trace")
        return self.__trace.to_frame() if as_dataframe else self.__trace

    def get_rankings(self) -> Dict[Direction, AlignmentRanking]:
        if not self.__rankings:
            raise UntrainedModelException("ranking")
        return self.__rankings

    def get_report(self) -> EvalReport:
        if self.__report is None:
            raise UntrainedModelException("evaluation report")
        return self.__report

    def get_timings(self) -> Dict[str, float]:
        return dict(self.__timings)
