"""Experiment configuration.

Configuration files are flat ``key = value`` documents (``#`` comments, lists comma separated).
Values are resolved with the precedence defaults < file < command-line flags. A manifest
written by a previous run can be used in place of a configuration file.
"""

import dataclasses
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, get_type_hints

import numpy as np

from .wlalign_enum import (GridLayout, NegativeDistribution, PipelineVariant, RelabelMode,
                           Schedule)
from .wlalign_exceptions import ConfigKeyException, ConfigValueException

logger = logging.getLogger(__name__)

THREADS_ENV = "WLALIGN_THREADS"

SEED_NAMES = ["graph", "perturbation", "split", "init", "batches"]


def get_thread_count() -> int:
    """Thread cap of the parallel sections, read from the WLALIGN_THREADS environment variable (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(raw)
    except ValueError:
        logger.warning("Invalid %s value '%s', using 1 thread.", THREADS_ENV, raw)
        return 1
    return max(threads, 1)


def default_pcts() -> List[float]:
    return [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]


@dataclass
class ExperimentConfig:
    """Parameters of the synth, relabel and align commands.

    Defaults follow the reference settings: d=128, lr=0.05, batches of 1000, K_L=1, K_C=20, E=50.
    """
    # run
    seed: int = 0
    out_dir: str = "wlalign_output"

    # data
    edges_s: str = ""
    edges_t: str = ""
    anchors_file: str = ""
    correspondence_file: str = ""
    directed: bool = False

    # synthetic pairs
    n: int = 1000
    p: float = 0.01
    node_pcts: List[float] = field(default_factory=default_pcts)
    edge_pcts: List[float] = field(default_factory=default_pcts)
    grid: GridLayout = GridLayout.PER_AXIS
    attach_degree: int = 1
    anchor_ratio: float = 0.2

    # relabeling
    train_ratio: float = 0.5
    mode: RelabelMode = RelabelMode.SOFT
    variant: PipelineVariant = PipelineVariant.FULL
    max_relabel_rounds: int = 100

    # representation learning
    d: int = 128
    lr: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 50
    k_label: int = 1
    k_context: int = 20
    batch_size: int = 1000
    batches_per_round: int = 10
    schedule: Schedule = Schedule.INTERLEAVED
    max_rounds: int = 100
    fcl_epochs: int = 3000
    plateau_tol: float = 1e-3
    plateau_window: int = 10
    negative_distribution: NegativeDistribution = NegativeDistribution.UNIFORM
    share_anchor_embeddings: bool = True

    # evaluation
    top_n: List[int] = field(default_factory=lambda: list(range(1, 31)))
    rsa_lambda: float = 0.5
    rsa_hops: int = 3

    def __post_init__(self):
        for key, value in dataclasses.asdict(self).items():
            setattr(self, key, _parse_value(key, value, _field_types()[key]))
        self.validate()

    def validate(self):
        """Checks value ranges.

        Raises
        ------
        ConfigValueException
            A value is out of its range.
        """
        for key in ["train_ratio", "anchor_ratio", "p", "beta1", "beta2"]:
            if not 0. <= getattr(self, key) <= 1.:
                raise ConfigValueException(key, getattr(self, key), "must be between 0 and 1")

        for key in ["d", "batch_size", "max_relabel_rounds", "attach_degree", "rsa_hops", "plateau_window"]:
            if getattr(self, key) < 1:
                raise ConfigValueException(key, getattr(self, key), "must be at least 1")

        for key in ["epochs", "k_label", "k_context", "batches_per_round", "max_rounds", "fcl_epochs", "n"]:
            if getattr(self, key) < 0:
                raise ConfigValueException(key, getattr(self, key), "must be non-negative")

        if self.lr <= 0:
            raise ConfigValueException("lr", self.lr, "must be positive")

        if any(n < 1 for n in self.top_n):
            raise ConfigValueException("top_n", self.top_n, "values must be at least 1")

    @classmethod
    def from_dict(cls, values:Dict[str, Any]) -> "ExperimentConfig":
        """Builds a config from a partial dictionary, missing keys take their default."""
        types = _field_types()
        for key in values:
            if key not in types:
                raise ConfigKeyException(key)
        return cls(**{key: _parse_value(key, value, types[key]) for key, value in values.items()})

    @classmethod
    def from_file(cls, path:str) -> "ExperimentConfig":
        return cls.from_dict(read_config_file(path))

    def updated(self, overrides:Dict[str, Any]) -> "ExperimentConfig":
        """Returns a copy with the given keys replaced (None values are ignored)."""
        values = self.to_dict()
        values.update({key: value for key, value in overrides.items() if value is not None})
        return ExperimentConfig.from_dict(values)

    def to_dict(self) -> Dict[str, Any]:
        """JSON compatible dictionary, enums replaced by their values."""
        return {key: (value.value if isinstance(value, Enum) else value)
                for key, value in dataclasses.asdict(self).items()}

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of the resolved values, independent of the key order.

        The output directory does not take part in the hash.
        """
        values = self.to_dict()
        values.pop("out_dir")
        canonical = json.dumps(values, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def seeds(self) -> Dict[str, int]:
        """Sub-seeds derived from the master seed."""
        children = np.random.SeedSequence(self.seed).spawn(len(SEED_NAMES))
        return {name: int(child.generate_state(1)[0]) for name, child in zip(SEED_NAMES, children)}


def _field_types() -> Dict[str, Any]:
    return get_type_hints(ExperimentConfig)


def _parse_scalar(key:str, raw, target:type):
    if isinstance(raw, target) and not (target is int and isinstance(raw, bool)):
        return raw

    try:
        if target is bool:
            if isinstance(raw, str):
                lowered = raw.strip().lower()
                if lowered in ["true", "yes", "1", "on"]:
                    return True
                if lowered in ["false", "no", "0", "off"]:
                    return False
                raise ValueError("expected a boolean")
            return bool(raw)
        if isinstance(target, type) and issubclass(target, Enum):
            return target(raw.strip() if isinstance(raw, str) else raw)
        if target is int:
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError("expected an integer")
            return int(raw.strip()) if isinstance(raw, str) else int(raw)
        if target is float:
            return float(raw)
        return str(raw).strip()
    except (ValueError, TypeError) as e:
        raise ConfigValueException(key, raw, str(e))


def _parse_value(key:str, raw, target):
    if getattr(target, "__origin__", None) in (list, List):
        element = target.__args__[0]
        if isinstance(raw, str):
            raw = [part for part in raw.split(",") if part.strip()]
        return [_parse_scalar(key, value, element) for value in raw]
    return _parse_scalar(key, raw, target)


def read_config_file(path:str) -> Dict[str, str]:
    """Reads a flat ``key = value`` file, or the ``config`` block of a manifest JSON.

    Raises
    ------
    ConfigValueException
        Line without '=' or unreadable file.
    """
    try:
        with open(path, "r") as file:
            content = file.read()
    except OSError as e:
        raise ConfigValueException("config", path, e.strerror or str(e))

    if path.endswith(".json"):
        document = json.loads(content)
        return document["config"] if "config" in document else document

    values = {}
    for line_number, line in enumerate(content.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigValueException("config", line, f"line {line_number} is not a 'key = value' pair")
        key, value = stripped.split("=", 1)
        values[key.strip()] = value.strip()

    return values


def write_config_file(config:ExperimentConfig, path:str):
    with open(path, "w") as file:
        for key, value in config.to_dict().items():
            if isinstance(value, list):
                value = ",".join(str(x) for x in value)
            file.write(f"{key} = {value}\n")
