"""Across-network Weisfeiler-Lehman relabeling."""

from .convergence import make_relabeler, relabel_until_convergence
from .generic_relabeler import GenericRelabeler
from .hard_relabeler import HardRelabeler, hard_relabel_round
from .label_quality import coverage_ratio, label_histogram_similarity
from .label_state import HashRuleTable, LabelState, init_labels
from .propagation import SimilarityMatrix, cross_similarity, mutual_match, propagate
from .soft_relabeler import SoftRelabeler, soft_relabel_round
