import json

import pandas as pd
import pytest

from wlalign import cli
from wlalign.cli import (EXIT_DATA, EXIT_NON_CONVERGENCE, EXIT_OK, EXIT_USAGE, main,
                         perturbation_grid)
from wlalign.config import ExperimentConfig
from wlalign.wlalign_enum import GridLayout
from wlalign.wlalign_exceptions import (NonConvergenceException, NonFiniteGradientException,
                                        UntrainedModelException, ZeroNormVectorException)

SYNTH_SETTINGS = ["--set", "n=30", "--set", "p=0.1", "--set", "node_pcts=0.5", "--set", "edge_pcts=0.5"]


def synthesize(directory) -> int:
    return main(["synth", "--seed", "4", "--out-dir", str(directory)] + SYNTH_SETTINGS)


def pair_arguments(pair_dir, correspondence:bool = True):
    arguments = ["--edges-s", str(pair_dir / "source.edges"),
                 "--edges-t", str(pair_dir / "target.edges"),
                 "--anchors", str(pair_dir / "anchors.tsv")]
    if correspondence:
        arguments += ["--correspondence", str(pair_dir / "correspondence.tsv")]
    return arguments


@pytest.mark.Unit
@pytest.mark.cli
def test_perturbation_grid():
    per_axis = ExperimentConfig(node_pcts=[0.5, 1.], edge_pcts=[2.])
    crossed = ExperimentConfig(node_pcts=[0.5, 1.], edge_pcts=[2.], grid=GridLayout.CROSSED)

    assert perturbation_grid(per_axis) == [(0.5, 0.), (1., 0.), (0., 2.)]
    assert perturbation_grid(crossed) == [(0.5, 2.), (1., 2.)]


@pytest.mark.Unit
@pytest.mark.cli
def test_synth(tmp_path):
    assert synthesize(tmp_path) == EXIT_OK

    with open(tmp_path / "grid.json") as file:
        grid = json.load(file)
    assert [cell["pair"] for cell in grid["pairs"]] == ["pair_00", "pair_01"]

    for name in ["source.edges", "target.edges", "correspondence.tsv", "anchors.tsv", "test.tsv", "perturbation.json"]:
        assert (tmp_path / "pair_00" / name).exists()

    with open(tmp_path / "pair_00" / "perturbation.json") as file:
        perturbation = json.load(file)
    assert perturbation["added_nodes"] == 15
    # one attachment edge per new node, no extra edge on the node axis
    assert perturbation["added_edges"] == 15

    with open(tmp_path / "manifest.json") as file:
        manifest = json.load(file)
    assert manifest["command"] == "synth"
    assert manifest["config"]["seed"] == 4
    assert manifest["config_hash"] == ExperimentConfig.from_file(str(tmp_path / "manifest.json")).config_hash()
    assert (tmp_path / "config.txt").exists()


@pytest.mark.Unit
@pytest.mark.cli
def test_relabel(tmp_path):
    synthesize(tmp_path / "synth")
    out_dir = tmp_path / "relabel"

    code = main(["relabel", "--mode", "hard", "--out-dir", str(out_dir)] + pair_arguments(tmp_path / "synth" / "pair_00"))

    assert code == EXIT_OK
    with open(out_dir / "label_quality.json") as file:
        quality = json.load(file)
    assert quality["mode"] == "hard"
    assert quality["converged"]
    assert 0. <= quality["histogram_similarity"] <= 1.

    trace = pd.read_csv(out_dir / "round_trace.csv")
    assert trace["label_count"].is_monotonic_increasing
    assert trace["new_labels"].iloc[-1] == 0
    assert (out_dir / "labels.tsv").exists()


@pytest.mark.Unit
@pytest.mark.cli
def test_relabel_round_budget(tmp_path):
    synthesize(tmp_path / "synth")

    code = main(["relabel", "--set", "max_relabel_rounds=1", "--out-dir", str(tmp_path / "relabel")]
                + pair_arguments(tmp_path / "synth" / "pair_00"))

    assert code == EXIT_NON_CONVERGENCE
    assert (tmp_path / "relabel" / "labels.tsv").exists()


@pytest.mark.Unit
@pytest.mark.cli
def test_usage_errors(tmp_path):
    try:
        main(["bogus"])
        assert False, "Accepted an unknown subcommand"
    except SystemExit as e:
        assert e.code == EXIT_USAGE

    assert main(["synth", "--out-dir", str(tmp_path), "--set", "bogus=1"]) == EXIT_USAGE
    assert main(["synth", "--out-dir", str(tmp_path), "--set", "d=-3"]) == EXIT_USAGE
    assert main(["synth", "--out-dir", str(tmp_path), "--set", "novalue"]) == EXIT_USAGE


@pytest.mark.Unit
@pytest.mark.cli
def test_data_errors(tmp_path):
    synthesize(tmp_path / "synth")
    pair_dir = tmp_path / "synth" / "pair_00"

    missing_edges = ["--edges-s", str(tmp_path / "missing.edges"), "--edges-t", str(pair_dir / "target.edges"),
                     "--anchors", str(pair_dir / "anchors.tsv")]
    assert main(["relabel", "--out-dir", str(tmp_path / "out")] + missing_edges) == EXIT_DATA

    no_anchors = ["--edges-s", str(pair_dir / "source.edges"), "--edges-t", str(pair_dir / "target.edges")]
    assert main(["relabel", "--out-dir", str(tmp_path / "out")] + no_anchors) == EXIT_DATA


@pytest.mark.Unit
@pytest.mark.cli
def test_align(tmp_path):
    synthesize(tmp_path / "synth")
    out_dir = tmp_path / "align"

    code = main(["align", "--out-dir", str(out_dir), "--epochs", "1",
                 "--set", "d=8", "--set", "batch_size=20", "--set", "k_context=2",
                 "--set", "batches_per_round=1", "--set", "top_n=1,5"] + pair_arguments(tmp_path / "synth" / "pair_00"))

    assert code == EXIT_OK
    for name in ["report.json", "precision.csv", "embeddings.tsv", "training_trace.csv", "labels.tsv",
                 "train_anchors.tsv", "test_pairs.tsv", "manifest.json", "source_ids.tsv", "target_ids.tsv"]:
        assert (out_dir / name).exists(), f"{name} was not written"

    with open(out_dir / "report.json") as file:
        report = json.load(file)
    assert sorted(report["precision"]) == ["1", "5"]
    assert report["metadata"]["variant"] == "full"
    assert len(pd.read_csv(out_dir / "test_pairs.tsv", sep="\t", header=None)) == 15


@pytest.mark.Unit
@pytest.mark.cli
@pytest.mark.parametrize("exception, code", [(ZeroNormVectorException(2), EXIT_DATA),
                                             (NonFiniteGradientException("node", [3]), EXIT_DATA),
                                             (UntrainedModelException("ranking"), EXIT_USAGE),
                                             (NonConvergenceException("relabeling", 5), EXIT_NON_CONVERGENCE)])
def test_exceptions_map_to_exit_codes(tmp_path, monkeypatch, exception, code):
    def failing_command(config):
        raise exception

    monkeypatch.setitem(cli.COMMANDS, "align", failing_command)

    assert main(["align", "--out-dir", str(tmp_path)]) == code
