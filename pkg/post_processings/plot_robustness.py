"""

This file plots the label quality of the soft and hard relabeling against the perturbation level,
from the robustness.csv written by use_cases/synthetic_robustness/synthetic_robustness.py.

"""


"""
    Imports
"""
import sys

import matplotlib.pyplot as plt
import pandas as pd

"""
    Results
"""
results = pd.read_csv(sys.argv[1] if len(sys.argv) > 1 else "robustness.csv")
summary = results.groupby(["axis", "level", "mode"], as_index=False)[["histogram_similarity", "coverage"]].mean()

figure, axes = plt.subplots(2, 2, sharex=True, figsize=(12, 8))

for column, axis in enumerate(["node", "edge"]):
    for row, metric in enumerate(["histogram_similarity", "coverage"]):
        ax = axes[row][column]
        for mode, group in summary[summary["axis"] == axis].groupby("mode"):
            ax.plot(group["level"], group[metric], marker="o", label=mode)
        ax.set_title(f"{axis} perturbation")
        ax.set_ylabel(metric)
        ax.set_ylim(0., 1.05)
        ax.legend()

for ax in axes[-1]:
    ax.set_xlabel("Perturbation ratio")

plt.savefig("robustness.png", dpi=150, bbox_inches="tight")
plt.show()
