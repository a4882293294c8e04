"""

This file draws the Precision@N curves of one or several ``wlalign align`` output directories.

    python plot_precision_curve.py run_full run_wo_wl run_wo_rl

"""


"""
    Imports
"""
import json
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

"""
    Curves
"""
run_dirs = [Path(arg) for arg in sys.argv[1:]] or [Path("wlalign_output")]

figure, ax = plt.subplots(figsize=(10, 6))

for run_dir in run_dirs:
    curve = pd.read_csv(run_dir / "precision.csv")
    with open(run_dir / "report.json") as file:
        metadata = json.load(file)["metadata"]

    ax.plot(curve["N"], curve["precision"], marker=".", label=f"{run_dir.name} ({metadata['variant']}, {metadata['mode']})")

plt.xlabel("N")
plt.ylabel("Precision@N")
plt.ylim(0., 1.)
plt.grid(alpha=0.3)
plt.legend()

plt.savefig("precision_curve.png", dpi=150, bbox_inches="tight")
plt.show()
