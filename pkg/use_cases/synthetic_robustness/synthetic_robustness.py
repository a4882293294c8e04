import logging

import pandas as pd

from wlalign.graph_core import generate_er, perturb, sample_anchors
from wlalign.relabel import coverage_ratio, label_histogram_similarity, relabel_until_convergence
from wlalign.wlalign_enum import RelabelMode

"""
    This use case measures how well the across-network relabeling resists perturbations.

    A base E-R graph (n=1000, p=0.01) is aligned with perturbed copies of itself:
        -   node axis : 50% to 300% new nodes, each attached to one original node ;
        -   edge axis : 50% to 300% new edges between non adjacent pairs.

    20% of the original nodes are anchors. For each cell and each relabeling mode, the label
    histogram similarity and the coverage ratio of the original nodes are written to
    robustness.csv (see post_processings/plot_robustness.py).
"""

logging.basicConfig(level=logging.WARNING)

levels = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
seeds = [0, 1, 2]

rows = []
for seed in seeds:
    base = generate_er(1000, 0.01, seed=seed)
    identity = [(i, i) for i in range(base.n)]

    for axis in ["node", "edge"]:
        for level in levels:
            node_pct, edge_pct = (level, 0.) if axis == "node" else (0., level)
            target, record = perturb(base, node_pct, edge_pct, seed=seed)
            anchors, _ = sample_anchors(base, target, identity, 0.2, seed=seed)

            for mode in RelabelMode:
                state = relabel_until_convergence(base, target, anchors, mode=mode)
                rows.append({"seed": seed,
                             "axis": axis,
                             "level": level,
                             "mode": mode.value,
                             "rounds": state.rounds,
                             "label_count": state.label_count,
                             "histogram_similarity": label_histogram_similarity(state, range(base.n), range(base.n)),
                             "coverage": coverage_ratio(state, range(base.n), "s")})
                print(rows[-1])

results = pd.DataFrame(rows)
results.to_csv("robustness.csv", index=False)

print(results.groupby(["axis", "level", "mode"])[["histogram_similarity", "coverage"]].mean())
