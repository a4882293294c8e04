import json

import numpy as np
import pytest

from wlalign import WlAlign
from wlalign.cli import EXIT_NON_CONVERGENCE, EXIT_OK, main
from wlalign.config import ExperimentConfig
from wlalign.graph_core import generate_er, perturb, sample_anchors
from wlalign.relabel import coverage_ratio, label_histogram_similarity, relabel_until_convergence
from wlalign.wlalign_enum import PipelineVariant, RelabelMode

ALIGN_SETTINGS = ["--set", "d=8", "--set", "batch_size=30", "--set", "k_context=3", "--set", "batches_per_round=2",
                  "--set", "max_rounds=30", "--set", "top_n=1,5,10", "--epochs", "2"]


def pair_arguments(pair_dir):
    return ["--edges-s", str(pair_dir / "source.edges"),
            "--edges-t", str(pair_dir / "target.edges"),
            "--anchors", str(pair_dir / "anchors.tsv"),
            "--correspondence", str(pair_dir / "correspondence.tsv")]


def read_report(path) -> dict:
    with open(path) as file:
        report = json.load(file)
    report.pop("timings")
    return report


@pytest.mark.Theory
@pytest.mark.Protocol
def test_rerun_from_manifest(tmp_path):
    synth = ["synth", "--seed", "9", "--set", "n=60", "--set", "p=0.08", "--set", "node_pcts=0.5", "--set", "edge_pcts=1.0"]
    assert main(synth + ["--out-dir", str(tmp_path / "synth_1")]) == EXIT_OK
    assert main(["synth", "--config", str(tmp_path / "synth_1" / "manifest.json"), "--out-dir", str(tmp_path / "synth_2")]) == EXIT_OK

    for name in ["base/edges.tsv", "pair_01/target.edges", "pair_01/anchors.tsv", "pair_01/test.tsv", "grid.json"]:
        assert (tmp_path / "synth_1" / name).read_bytes() == (tmp_path / "synth_2" / name).read_bytes()

    pair_dir = tmp_path / "synth_1" / "pair_01"
    code = main(["align", "--seed", "9", "--out-dir", str(tmp_path / "align_1")] + ALIGN_SETTINGS + pair_arguments(pair_dir))
    assert code in [EXIT_OK, EXIT_NON_CONVERGENCE]
    assert main(["align", "--config", str(tmp_path / "align_1" / "manifest.json"), "--out-dir", str(tmp_path / "align_2")]) == code

    assert read_report(tmp_path / "align_1" / "report.json") == read_report(tmp_path / "align_2" / "report.json")
    for name in ["embeddings.tsv", "labels.tsv", "train_anchors.tsv", "test_pairs.tsv", "precision.csv", "training_trace.csv"]:
        assert (tmp_path / "align_1" / name).read_bytes() == (tmp_path / "align_2" / name).read_bytes(), f"{name} differs"

    with open(tmp_path / "align_1" / "manifest.json") as file:
        first = json.load(file)
    with open(tmp_path / "align_2" / "manifest.json") as file:
        second = json.load(file)
    assert first["config_hash"] == second["config_hash"]


@pytest.mark.Theory
@pytest.mark.Protocol
@pytest.mark.Slow
def test_soft_relabeling_robustness():
    levels = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
    quality = {}

    for seed in range(3):
        base = generate_er(1000, 0.01, seed=seed)
        identity = [(i, i) for i in range(base.n)]
        for axis in ["node", "edge"]:
            for level in levels:
                node_pct, edge_pct = (level, 0.) if axis == "node" else (0., level)
                target, _ = perturb(base, node_pct, edge_pct, seed=seed)
                anchors, _ = sample_anchors(base, target, identity, 0.2, seed=seed)
                for mode in RelabelMode:
                    state = relabel_until_convergence(base, target, anchors, mode=mode)
                    values = quality.setdefault((axis, level, mode), [])
                    values.append((label_histogram_similarity(state, range(base.n), range(base.n)),
                                   coverage_ratio(state, range(base.n), "s")))

    for axis in ["node", "edge"]:
        for level in levels:
            soft = np.mean(quality[(axis, level, RelabelMode.SOFT)], axis=0)
            hard = np.mean(quality[(axis, level, RelabelMode.HARD)], axis=0)
            assert soft[0] >= hard[0], f"Soft similarity below hard at {axis} {level}"
            assert soft[1] >= hard[1], f"Soft coverage below hard at {axis} {level}"


@pytest.mark.Theory
@pytest.mark.Protocol
@pytest.mark.Slow
def test_self_alignment():
    g = generate_er(500, 0.02, seed=0)
    identity = [(i, i) for i in range(g.n)]
    precision = {}

    for variant in [PipelineVariant.FULL, PipelineVariant.WO_WL]:
        model = WlAlign(ExperimentConfig(seed=0, epochs=10, variant=variant, top_n=[1, 5]))
        model.set_graphs(g, g)
        model.split_anchors(identity)
        precision[variant] = model.run().precision

    assert precision[PipelineVariant.FULL][5] >= 0.9
    assert precision[PipelineVariant.FULL][1] >= precision[PipelineVariant.WO_WL][1]
