"""Evaluation report of an alignment run."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from ..wlalign_io import PathLike, read_json, write_json


@dataclass
class EvalReport:
    """Precision@N curve, RSA bucket table, label quality block and run metadata.

    Timings are kept apart from every other field: two runs with the same configuration and
    seeds give the same report once the timings are removed.
    """
    precision: Dict[int, float] = field(default_factory=dict)
    rsa_buckets: pd.DataFrame = field(default_factory=pd.DataFrame)
    label_quality: Dict[str, Any] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_curve(cls, curve:pd.DataFrame, **fields) -> "EvalReport":
        return cls(precision={int(n): float(p) for n, p in zip(curve["N"], curve["precision"])}, **fields)

    def precision_frame(self) -> pd.DataFrame:
        ns = sorted(self.precision)
        return pd.DataFrame({"N": ns, "precision": [self.precision[n] for n in ns]})

    def check(self):
        """Checks the report invariants.

        Raises
        ------
        AssertionError
            Precision outside [0, 1] or decreasing with N.
        """
        values = self.precision_frame()["precision"].to_numpy()
        assert np.all((values >= 0.) & (values <= 1.)), "Precision value outside [0, 1]."
        assert np.all(np.diff(values) >= 0.), "Precision@N decreasing with N."

    def to_dict(self, include_timings:bool = True) -> Dict[str, Any]:
        document = {"precision": {str(n): p for n, p in sorted(self.precision.items())},
                    "rsa_buckets": json.loads(self.rsa_buckets.to_json(orient="records", double_precision=15)),
                    "label_quality": self.label_quality,
                    "metadata": self.metadata}
        if include_timings:
            document["timings"] = self.timings
        return document

    @classmethod
    def from_dict(cls, document:Dict[str, Any]) -> "EvalReport":
        return cls(precision={int(n): float(p) for n, p in document.get("precision", {}).items()},
                   rsa_buckets=pd.DataFrame(document.get("rsa_buckets", [])),
                   label_quality=document.get("label_quality", {}),
                   metadata=document.get("metadata", {}),
                   timings=document.get("timings", {}))

    def write(self, out_dir:PathLike):
        """Writes report.json, precision.csv and rsa_buckets.csv in out_dir."""
        out_dir = Path(out_dir)
        write_json(self.to_dict(), out_dir / "report.json")
        self.precision_frame().to_csv(out_dir / "precision.csv", index=False)
        if not self.rsa_buckets.empty:
            self.rsa_buckets.to_csv(out_dir / "rsa_buckets.csv", index=False)

    @classmethod
    def read(cls, path:PathLike) -> "EvalReport":
        return cls.from_dict(read_json(path))
