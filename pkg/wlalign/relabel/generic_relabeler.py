"""This file contains the wlalign generic relabeler class.

All relabeling rounds used by the convergence loop must inherit from GenericRelabeler and
override relabel_round. The round receives the current LabelState and returns a new one in
which:

    -   labeled nodes (anchors and pseudo-anchors) keep their label,
    -   every non zero label is present in both networks,
    -   label_count did not decrease.
"""
from abc import ABC, abstractmethod

from ..graph_core import Graph
from ..wlalign_enum import RelabelMode
from .label_state import LabelState


class GenericRelabeler(ABC):
    """Generic relabeling round. Class to overwrite."""

    mode:RelabelMode = None

    @abstractmethod
    def relabel_round(self, g_s:Graph, g_t:Graph, state:LabelState) -> LabelState:
        """Runs one relabeling round.

        Parameters
        ----------
        g_s : Graph
            Source network
        g_t : Graph
            Target network
        state : LabelState
            Current labels, left unchanged

        Returns
        -------
        LabelState
            Updated labels

        Raises
        ------
        NotImplementedError
            Must be overridden by the relabeler
        """
        raise NotImplementedError

    def reset(self):
        """Clears the state kept between rounds, if any."""
        pass
