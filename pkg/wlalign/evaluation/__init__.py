"""Alignment inference and evaluation."""

from .metrics import (bfs_shells, bucket_bounds, hit_positions, precision_at_n, precision_curve, rsa,
                      rsa_bucket_report, rsa_values)
from .ranking import (AlignmentRanking, rank_by_labels, rank_by_scores, rank_by_similarity,
                      rank_candidates)
from .report import EvalReport
