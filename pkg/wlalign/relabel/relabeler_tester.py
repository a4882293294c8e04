from ..graph_core import AnchorSet, Graph
from ..wlalign_exceptions import RelabelerRegistrationException
from .generic_relabeler import GenericRelabeler
from .label_state import LabelState, init_labels


class RelabelerTester:
    """Checks that a user made relabeler respects the contract of GenericRelabeler."""

    def __init__(self) -> None:
        self.relabeler_class = None

    def test(self, name:str, relabeler_class):
        self.relabeler_class = relabeler_class

        if not isinstance(relabeler_class, type) or not issubclass(relabeler_class, GenericRelabeler):
            raise RelabelerRegistrationException(name, "not a GenericRelabeler subclass")

        try:
            self.test_returns_state()
            self.test_anchor_labels_kept()
            self.test_labels_shared()
            self.test_fixpoint()
        except AssertionError as e:
            raise RelabelerRegistrationException(name, str(e))

    def make_pair(self):
        # path 0-1-2-3 in both networks, anchored on node 0
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], directed=False)
        return g, g, AnchorSet([(0, 0)], 4, 4)

    def run(self, state:LabelState = None):
        g_s, g_t, anchors = self.make_pair()
        state = init_labels(anchors, g_s.n, g_t.n) if state is None else state
        return self.relabeler_class().relabel_round(g_s, g_t, state), state, anchors

    def test_returns_state(self):
        new_state, state, _ = self.run()
        assert isinstance(new_state, LabelState), "relabel_round must return a LabelState."
        assert new_state is not state, "relabel_round must not modify the given state."

    def test_anchor_labels_kept(self):
        new_state, _, anchors = self.run()
        new_state.check(anchors)

    def test_labels_shared(self):
        new_state, state, _ = self.run()
        assert new_state.label_count >= state.label_count, "label_count decreased."
        assert new_state.labels_s.max() <= new_state.label_count, "Label above label_count."

    def test_fixpoint(self):
        g_s, g_t, _ = self.make_pair()
        state = init_labels(AnchorSet([(i, i) for i in range(4)], 4, 4), 4, 4)
        new_state = self.relabeler_class().relabel_round(g_s, g_t, state.copy())
        assert new_state.same_labels(state), \
            "A fully labeled state must be a fixpoint."
