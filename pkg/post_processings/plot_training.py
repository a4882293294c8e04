"""

This file plots the objectives recorded in the training_trace.csv of a ``wlalign align`` run.

The label objective is missing for the "w/o WL" variant. The dashed line marks the first epoch
trained on converged labels.

"""


"""
    Imports
"""
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

"""
    Trace
"""
run_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("wlalign_output")
trace = pd.read_csv(run_dir / "training_trace.csv")

figure, (ax_objective, ax_labels) = plt.subplots(2, 1, sharex=True, figsize=(10, 8))

ax_objective.plot(trace["epoch"], trace["context_objective"], label="Context objective")
if trace["label_objective"].notna().any():
    ax_objective.plot(trace["epoch"], trace["label_objective"], label="Label objective")
ax_objective.set_ylabel("Objective (sum over the epoch)")
ax_objective.legend()

ax_labels.step(trace["epoch"], trace["label_count"], where="post")
ax_labels.set_xlabel("Epoch")
ax_labels.set_ylabel("|C_a|")

converged = trace.loc[trace["label_converged"].astype(bool), "epoch"]
if len(converged):
    for ax in (ax_objective, ax_labels):
        ax.axvline(converged.iloc[0], linestyle="--", color="grey")

plt.savefig(run_dir / "training_trace.png", dpi=150, bbox_inches="tight")
plt.show()
