"""Text formats read and written by wlalign.

    -   edge lists : one ``src dst`` pair per line (tab or spaces), ``#`` comments
    -   anchor files : one ``s_id<TAB>t_id`` pair per line, original ids
    -   id mapping sidecar : ``original_id<TAB>dense_id`` per line
    -   label dump : header ``label_count=<k>`` then ``network<TAB>node<TAB>label``
    -   embedding export : JSON header line then ``network<TAB>node<TAB>v1,...,vd``
"""

import json
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np
import pandas as pd

from .graph_core import AnchorSet, Graph
from .wlalign_enum import Network
from .wlalign_exceptions import (EdgeListFormatException, EdgeListReadException,
                                 EmptyEdgeListException, InvalidAnchorSetException,
                                 OutputDirectoryException)

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def read_int_pairs(path:PathLike) -> np.ndarray:
    """Reads a two column file of non-negative integers.

    Parameters
    ----------
    path : PathLike
        File to read

    Returns
    -------
    np.ndarray
        (count, 2) array of the pairs, in file order

    Raises
    ------
    EdgeListReadException
        The file can't be opened.
    EdgeListFormatException
        A non comment line is not made of exactly two non-negative integers.
    """
    try:
        with open(path, "r", encoding="utf-8") as file:
            lines = file.readlines()
    except OSError as e:
        raise EdgeListReadException(str(path), e.strerror or str(e))
    except UnicodeDecodeError as e:
        raise EdgeListReadException(str(path), str(e))

    pairs = []
    for line_number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue

        fields = stripped.split()
        if len(fields) != 2 or not all(f.isascii() and f.isdecimal() for f in fields):
            raise EdgeListFormatException(str(path), line_number, line)

        pairs.append((int(fields[0]), int(fields[1])))

    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2)


def load_edge_list(path:PathLike, directed:bool, extra_ids:Iterable[int] = None) -> Graph:
    """Loads an edge list and remaps its node ids to 0..n-1.

    Original ids are sorted and numbered in increasing order, the mapping is kept in
    ``Graph.node_ids``. Duplicated edges and self-loops are dropped, nodes only present
    through a self-loop are kept.

    Parameters
    ----------
    path : PathLike
        Edge list file
    directed : bool
        If False, every edge is also added reversed.
    extra_ids : Iterable[int], optional
        Original ids that must exist in the graph even if absent from the edge list
        (e.g. anchors isolated in the network), by default None

    Returns
    -------
    Graph
        Loaded graph

    Raises
    ------
    EmptyEdgeListException
        The file does not contain any pair.
    """
    pairs = read_int_pairs(path)
    if len(pairs) == 0:
        raise EmptyEdgeListException(str(path))

    all_ids = pairs.ravel()
    if extra_ids is not None:
        all_ids = np.concatenate([all_ids, np.asarray(list(extra_ids), dtype=np.int64)])

    node_ids, dense = np.unique(all_ids, return_inverse=True)
    dense = dense[:pairs.size].reshape(-1, 2)

    graph = Graph(len(node_ids), dense[:, 0], dense[:, 1], directed=directed, node_ids=node_ids)
    logger.info("Loaded %s: %d nodes, %d directed edges.", path, graph.n, graph.edge_count)

    return graph


def write_edge_list(graph:Graph, path:PathLike, original_ids:bool = True):
    """Writes the graph edges, one pair per line. An undirected graph is written once per pair."""
    edges = graph.edges()
    if not graph.directed:
        edges = edges[edges[:, 0] < edges[:, 1]]
    if original_ids:
        edges = graph.node_ids[edges]

    pd.DataFrame(edges, columns=["src", "dst"]).to_csv(path, sep="\t", header=False, index=False)


def write_id_mapping(graph:Graph, path:PathLike):
    pd.DataFrame({"original_id": graph.node_ids, "dense_id": np.arange(graph.n)}) \
        .to_csv(path, sep="\t", header=False, index=False)


def read_id_mapping(path:PathLike) -> Dict[int, int]:
    pairs = read_int_pairs(path)
    return dict(zip(pairs[:, 0].tolist(), pairs[:, 1].tolist()))


def to_dense_ids(graph:Graph, original:np.ndarray) -> np.ndarray:
    """Translates original ids to dense ids.

    Raises
    ------
    InvalidAnchorSetException
        An id is not a node of the graph.
    """
    original = np.asarray(original, dtype=np.int64)
    position = np.searchsorted(graph.node_ids, original)
    position = np.minimum(position, max(graph.n - 1, 0))
    if graph.n == 0 or not np.array_equal(graph.node_ids[position], original):
        missing = original[graph.node_ids[position] != original] if graph.n else original
        raise InvalidAnchorSetException(f"node id(s) {missing[:5].tolist()} absent from the graph")
    return position


def read_pairs_file(path:PathLike) -> List[Tuple[int, int]]:
    """Reads an anchor / correspondence file, original ids."""
    return [(int(s), int(t)) for s, t in read_int_pairs(path)]


def load_anchor_pairs(path:PathLike, g_s:Graph, g_t:Graph) -> List[Tuple[int, int]]:
    """Reads an anchor file and translates its original ids to the dense ids of the graphs."""
    pairs = read_int_pairs(path)
    s_nodes = to_dense_ids(g_s, pairs[:, 0])
    t_nodes = to_dense_ids(g_t, pairs[:, 1])
    return list(zip(s_nodes.tolist(), t_nodes.tolist()))


def write_pairs_file(pairs:Iterable[Tuple[int, int]], path:PathLike, g_s:Graph = None, g_t:Graph = None):
    """Writes node pairs, translated to original ids when the graphs are provided."""
    pairs = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    if g_s is not None:
        pairs = np.stack([g_s.node_ids[pairs[:, 0]], g_t.node_ids[pairs[:, 1]]], axis=1)
    pd.DataFrame(pairs, columns=["s_id", "t_id"]).to_csv(path, sep="\t", header=False, index=False)


def write_anchor_file(anchors:AnchorSet, path:PathLike, g_s:Graph = None, g_t:Graph = None):
    write_pairs_file(anchors.pairs, path, g_s, g_t)


def write_label_dump(labels_s:np.ndarray, labels_t:np.ndarray, label_count:int, path:PathLike,
                     g_s:Graph = None, g_t:Graph = None):
    """Writes a label state: ``label_count=<k>`` header, then one ``network node label`` line per node."""
    nodes_s = g_s.node_ids if g_s is not None else np.arange(len(labels_s))
    nodes_t = g_t.node_ids if g_t is not None else np.arange(len(labels_t))

    frame = pd.concat([pd.DataFrame({"network": Network.SOURCE.value, "node": nodes_s, "label": labels_s}),
                       pd.DataFrame({"network": Network.TARGET.value, "node": nodes_t, "label": labels_t})])

    with open(path, "w") as file:
        file.write(f"label_count={label_count}\n")
        frame.to_csv(file, sep="\t", header=False, index=False)


def read_label_dump(path:PathLike) -> Tuple[np.ndarray, np.ndarray, int]:
    """Reads a label dump written with dense ids. Returns (labels_s, labels_t, label_count)."""
    with open(path, "r") as file:
        header = file.readline().strip()
        if not header.startswith("label_count="):
            raise EdgeListFormatException(str(path), 1, header)
        label_count = int(header.split("=", 1)[1])
        frame = pd.read_csv(file, sep="\t", header=None, names=["network", "node", "label"])

    result = []
    for network in Network:
        part = frame[frame["network"] == network.value].sort_values("node")
        result.append(part["label"].to_numpy(dtype=np.int64))

    return result[0], result[1], label_count


def format_vector(vector:np.ndarray) -> str:
    """9 significant digits per coordinate."""
    return ",".join(f"{x:.9g}" for x in vector)


def write_embeddings(vectors_s:np.ndarray, vectors_t:np.ndarray, path:PathLike, header:dict,
                     g_s:Graph = None, g_t:Graph = None):
    """Writes the node vectors of both networks, after a one line JSON header."""
    nodes_s = g_s.node_ids if g_s is not None else np.arange(len(vectors_s))
    nodes_t = g_t.node_ids if g_t is not None else np.arange(len(vectors_t))

    with open(path, "w") as file:
        file.write(json.dumps(header, sort_keys=True) + "\n")
        for network, nodes, vectors in [(Network.SOURCE, nodes_s, vectors_s), (Network.TARGET, nodes_t, vectors_t)]:
            for node, vector in zip(nodes, vectors):
                file.write(f"{network.value}\t{node}\t{format_vector(vector)}\n")


def read_embeddings(path:PathLike) -> Tuple[dict, Dict[str, Dict[int, np.ndarray]]]:
    """Reads an embedding export. Returns the header and {network: {node: vector}}."""
    vectors = {network.value: {} for network in Network}
    with open(path, "r") as file:
        header = json.loads(file.readline())
        for line in file:
            network, node, values = line.rstrip("\n").split("\t")
            vectors[network][int(node)] = np.array([float(x) for x in values.split(",")])
    return header, vectors


def write_json(document:dict, path:PathLike):
    with open(path, "w") as file:
        json.dump(document, file, indent=2, sort_keys=True)
        file.write("\n")


def read_json(path:PathLike) -> dict:
    with open(path, "r") as file:
        return json.load(file)


def make_output_dir(path:PathLike) -> Path:
    """Creates the output directory if needed and checks it is writable.

    Raises
    ------
    OutputDirectoryException
        The directory can't be created or written.
    """
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputDirectoryException(str(path), e.strerror or str(e))
    if not os.access(path, os.W_OK):
        raise OutputDirectoryException(str(path), "not writable")
    return path
