"""Command line front-end: ``wlalign synth | relabel | align``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 non-convergence within the round budget.
"""

import argparse
import itertools
import logging
import sys
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from . import __version__
from .config import ExperimentConfig, write_config_file
from .graph_core import AnchorSet, Graph, generate_er, perturb, sample_anchors
from .main import WlAlign
from .wlalign_enum import GridLayout, PipelineVariant, RelabelMode
from .wlalign_exceptions import (MissingAnchorsException, NonConvergenceException, WlAlignDataException,
                                 WlAlignRunException, WlAlignUsageException)
from .wlalign_io import (load_anchor_pairs, load_edge_list, make_output_dir, read_pairs_file,
                         write_anchor_file, write_edge_list, write_id_mapping, write_json,
                         write_label_dump, write_pairs_file)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NON_CONVERGENCE = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class UsageArgumentParser(argparse.ArgumentParser):
    """ArgumentParser exiting with the usage error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def write_manifest(command:str, config:ExperimentConfig, out_dir:Path):
    """Writes manifest.json (resolved configuration, hash and seeds) and the flat config.txt."""
    write_json({"command": command,
                "version": __version__,
                "config": config.to_dict(),
                "config_hash": config.config_hash(),
                "seeds": config.seeds()},
               out_dir / "manifest.json")
    write_config_file(config, out_dir / "config.txt")


def perturbation_grid(config:ExperimentConfig) -> List[Tuple[float, float]]:
    """(node_pct, edge_pct) cells of the synthetic grid."""
    if GridLayout(config.grid) is GridLayout.CROSSED:
        return list(itertools.product(config.node_pcts, config.edge_pcts))
    return [(node_pct, 0.) for node_pct in config.node_pcts] + [(0., edge_pct) for edge_pct in config.edge_pcts]


def cell_seed(seed:int, index:int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def cmd_synth(config:ExperimentConfig) -> int:
    """Generates the base E-R graph and one perturbed pair per grid cell.

    Layout of out_dir:

        -   base/edges.tsv
        -   pair_<k>/source.edges, target.edges, correspondence.tsv, anchors.tsv, test.tsv,
            perturbation.json
    """
    out_dir = make_output_dir(config.out_dir)
    seeds = config.seeds()

    base = generate_er(config.n, config.p, seeds["graph"])
    base_dir = make_output_dir(out_dir / "base")
    write_edge_list(base, base_dir / "edges.tsv")
    logger.info("Base graph: %d nodes, %d undirected edges.", base.n, base.undirected_edge_count)

    cells = []
    for index, (node_pct, edge_pct) in enumerate(perturbation_grid(config)):
        target, record = perturb(base, node_pct, edge_pct, cell_seed(seeds["perturbation"], index), config.attach_degree)
        correspondence = [(i, i) for i in range(base.n)]
        anchors, test_pairs = sample_anchors(base, target, correspondence, config.anchor_ratio, cell_seed(seeds["split"], index))

        pair_dir = make_output_dir(out_dir / f"pair_{index:02d}")
        write_edge_list(base, pair_dir / "source.edges")
        write_edge_list(target, pair_dir / "target.edges")
        write_pairs_file(correspondence, pair_dir / "correspondence.tsv", base, target)
        write_anchor_file(anchors, pair_dir / "anchors.tsv", base, target)
        write_pairs_file(test_pairs, pair_dir / "test.tsv", base, target)
        write_json({"node_pct": node_pct,
                    "edge_pct": edge_pct,
                    "original_n": record.original_n,
                    "added_nodes": len(record.added_nodes),
                    "added_edges": len(record.added_edges),
                    "seed": record.seed},
                   pair_dir / "perturbation.json")

        cells.append({"pair": pair_dir.name, "node_pct": node_pct, "edge_pct": edge_pct})
        logger.info("Pair %s: node_pct=%s, edge_pct=%s, %d nodes added, %d edges added.",
                    pair_dir.name, node_pct, edge_pct, len(record.added_nodes), len(record.added_edges))

    write_json({"pairs": cells}, out_dir / "grid.json")
    write_manifest("synth", config, out_dir)
    return EXIT_OK


def load_pair(config:ExperimentConfig) -> Tuple[Graph, Graph]:
    """Loads both edge lists, keeping the nodes of the anchor and correspondence files that are isolated in them."""
    extra_s, extra_t = [], []
    for pairs_file in [config.anchors_file, config.correspondence_file]:
        if pairs_file:
            pairs = read_pairs_file(pairs_file)
            extra_s.extend(s for s, _ in pairs)
            extra_t.extend(t for _, t in pairs)
    return load_edge_list(config.edges_s, config.directed, extra_s), load_edge_list(config.edges_t, config.directed, extra_t)


def cmd_relabel(config:ExperimentConfig) -> int:
    """Relabels a pair to convergence and writes labels.tsv, label_quality.json and round_trace.csv."""
    if not config.anchors_file:
        raise MissingAnchorsException()

    out_dir = make_output_dir(config.out_dir)
    g_s, g_t = load_pair(config)
    anchors = AnchorSet(load_anchor_pairs(config.anchors_file, g_s, g_t), g_s.n, g_t.n)

    if config.correspondence_file:
        evaluated = load_anchor_pairs(config.correspondence_file, g_s, g_t)
    else:
        logger.warning("No correspondence file: label quality is measured on the anchors.")
        evaluated = list(anchors)
    test_pairs = sorted(set(evaluated) - set(anchors))

    pipeline = WlAlign(config)
    pipeline.set_graphs(g_s, g_t)
    pipeline.set_anchors(anchors, test_pairs)
    state = pipeline.relabel()

    write_label_dump(state.labels_s, state.labels_t, state.label_count, out_dir / "labels.tsv", g_s, g_t)
    state.trace_frame().to_csv(out_dir / "round_trace.csv", index=False)

    quality = pipeline.label_quality()
    quality["mode"] = pipeline.relabel_mode().value
    write_json(quality, out_dir / "label_quality.json")
    write_manifest("relabel", config, out_dir)

    if not state.converged:
        raise NonConvergenceException("relabeling", state.rounds)
    return EXIT_OK


def cmd_align(config:ExperimentConfig) -> int:
    """Runs the configured variant end to end and writes the report, the embeddings and the trace."""
    pairs_file = config.correspondence_file or config.anchors_file
    if not pairs_file:
        raise MissingAnchorsException()

    out_dir = make_output_dir(config.out_dir)
    g_s, g_t = load_pair(config)

    pipeline = WlAlign(config)
    pipeline.set_graphs(g_s, g_t)
    pipeline.split_anchors(load_anchor_pairs(pairs_file, g_s, g_t))
    write_anchor_file(pipeline.get_anchors(), out_dir / "train_anchors.tsv", g_s, g_t)
    write_pairs_file(pipeline.get_test_pairs(), out_dir / "test_pairs.tsv", g_s, g_t)

    report = pipeline.run()
    report.write(out_dir)

    if PipelineVariant(config.variant) in [PipelineVariant.FULL, PipelineVariant.WO_WL, PipelineVariant.WO_SIM]:
        pipeline.export_embeddings(out_dir / "embeddings.tsv")
        pipeline.get_trace(as_dataframe=True).to_csv(out_dir / "training_trace.csv", index=False)

    state = pipeline.get_labels()
    write_label_dump(state.labels_s, state.labels_t, state.label_count, out_dir / "labels.tsv", g_s, g_t)
    write_id_mapping(g_s, out_dir / "source_ids.tsv")
    write_id_mapping(g_t, out_dir / "target_ids.tsv")
    write_manifest("align", config, out_dir)

    logger.info("Precision@1 = %.4f", report.precision.get(1, float("nan")))

    if not state.converged:
        raise NonConvergenceException("relabeling", state.rounds)
    return EXIT_OK


COMMANDS = {"synth": cmd_synth, "relabel": cmd_relabel, "align": cmd_align}


def build_parser() -> argparse.ArgumentParser:
    parser = UsageArgumentParser(prog="wlalign", description="Across-network WL relabeling and alignment experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=UsageArgumentParser)

    for name, help_text in [("synth", "generate the synthetic graph pairs"),
                            ("relabel", "relabel a graph pair until convergence"),
                            ("align", "train, rank and evaluate a graph pair")]:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", default=None, help="flat key = value file, or a manifest.json")
        sub.add_argument("--seed", type=int, default=None, help="master seed")
        sub.add_argument("--out-dir", dest="out_dir", default=None, help="output directory")
        sub.add_argument("--variant", choices=[v.value for v in PipelineVariant], default=None)
        sub.add_argument("--mode", choices=[m.value for m in RelabelMode], default=None)
        sub.add_argument("--train-ratio", dest="train_ratio", type=float, default=None)
        sub.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                         help="any other configuration key, may be repeated")
        sub.add_argument("--verbose", action="store_true", help="debug logging")

        if name in ["relabel", "align"]:
            sub.add_argument("--edges-s", dest="edges_s", default=None, help="source edge list")
            sub.add_argument("--edges-t", dest="edges_t", default=None, help="target edge list")
            sub.add_argument("--anchors", dest="anchors_file", default=None, help="anchor file")
            sub.add_argument("--correspondence", dest="correspondence_file", default=None, help="ground truth pairs")
        if name == "align":
            sub.add_argument("--epochs", type=int, default=None)
            sub.add_argument("--schedule", choices=["interleaved", "fcl"], default=None)

    return parser


def resolve_config(args:argparse.Namespace) -> ExperimentConfig:
    """Defaults, then the configuration file, then the command-line flags."""
    config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()

    overrides:Dict[str, object] = {}
    for item in args.overrides:
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"--set expects KEY=VALUE, found '{item}'")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()

    for key in ["seed", "out_dir", "variant", "mode", "train_ratio", "edges_s", "edges_t",
                "anchors_file", "correspondence_file", "epochs", "schedule"]:
        if getattr(args, key, None) is not None:
            overrides[key] = getattr(args, key)

    return config.updated(overrides)


def main(argv:List[str] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT)

    try:
        config = resolve_config(args)
        return COMMANDS[args.command](config)
    except (WlAlignUsageException, argparse.ArgumentTypeError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except WlAlignDataException as e:
        logger.error("%s", e)
        return EXIT_DATA
    except WlAlignRunException as e:
        logger.error("%s", e)
        return EXIT_NON_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
