"""Custom ENUMs used by wlalign"""
from enum import Enum


class Network(Enum):
    """Side of the network pair.

        - SOURCE : network G^s
        - TARGET : network G^t
    """
    SOURCE = "s"
    TARGET = "t"

    def other(self) -> "Network":
        return Network.TARGET if self is Network.SOURCE else Network.SOURCE


class RelabelMode(Enum):
    """Relabeling round used by the across-network WL relabeling.

        - SOFT : labels shared by mutual best matches of normalized tuples
        - HARD : labels shared by identical canonical tuples (injective hash)
    """
    SOFT = "soft"
    HARD = "hard"


class PipelineVariant(Enum):
    """Pipeline variants of the align command (ablations)."""
    FULL = "full"
    WO_RL = "wo_rl"
    WO_WL = "wo_wl"
    WO_SIM = "wo_sim"
    WO_SIM_RL = "wo_sim_rl"


class Schedule(Enum):
    """Training schedule.

        - INTERLEAVED : one relabeling round, then E epochs, repeated
        - FCL : relabeling until convergence first, then a fixed epoch budget
    """
    INTERLEAVED = "interleaved"
    FCL = "fcl"


class Direction(Enum):
    SOURCE_TO_TARGET = "s->t"
    TARGET_TO_SOURCE = "t->s"


class NegativeDistribution(Enum):
    UNIFORM = "uniform"
    DEGREE = "degree"


class GridLayout(Enum):
    """Layout of the synthetic perturbation grid."""
    PER_AXIS = "per_axis"
    CROSSED = "crossed"
