import json

import numpy as np
import pytest

from wlalign.graph_core import Graph
from wlalign.wlalign_exceptions import (EdgeListFormatException, EdgeListReadException,
                                        EmptyEdgeListException, InvalidAnchorSetException,
                                        OutputDirectoryException)
from wlalign.wlalign_io import (load_anchor_pairs, load_edge_list, make_output_dir, read_embeddings,
                                read_id_mapping, read_label_dump, write_edge_list, write_embeddings,
                                write_id_mapping, write_label_dump)


@pytest.mark.Unit
@pytest.mark.io
def test_load_edge_list_remaps_ids(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("# comment\n10 20\n\n20\t30\n30 30\n")

    g = load_edge_list(path, directed=False)

    assert g.n == 3
    assert list(g.node_ids) == [10, 20, 30]
    assert g.has_edge(0, 1) and g.has_edge(1, 0) and g.has_edge(2, 1)
    assert g.undirected_edge_count == 2


@pytest.mark.Unit
@pytest.mark.io
def test_load_edge_list_directed(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("1 2\n2 3\n")

    g = load_edge_list(path, directed=True)

    assert g.has_edge(0, 1)
    assert not g.has_edge(1, 0)


@pytest.mark.Unit
@pytest.mark.io
def test_load_edge_list_extra_ids(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("1 2\n")

    g = load_edge_list(path, directed=False, extra_ids=[5])

    assert g.n == 3
    assert list(g.node_ids) == [1, 2, 5]
    assert g.out_degree()[2] == 0


@pytest.mark.Unit
@pytest.mark.io
def test_malformed_line(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("1 2\n3 x\n")

    try:
        load_edge_list(path, directed=False)
        assert False, "Accepted a malformed line"
    except EdgeListFormatException as e:
        assert e.line_number == 2


@pytest.mark.Unit
@pytest.mark.io
def test_empty_edge_list(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("# nothing here\n")

    try:
        load_edge_list(path, directed=False)
        assert False, "Accepted an empty edge list"
    except EmptyEdgeListException:
        assert True


@pytest.mark.Unit
@pytest.mark.io
def test_missing_edge_list(tmp_path):
    try:
        load_edge_list(tmp_path / "missing.txt", directed=False)
        assert False, "Read a missing file"
    except EdgeListReadException:
        assert True


@pytest.mark.Unit
@pytest.mark.io
def test_anchor_ids_translated(tmp_path):
    edges = tmp_path / "edges.txt"
    edges.write_text("10 20\n20 30\n")
    anchors = tmp_path / "anchors.txt"
    anchors.write_text("30\t10\n")

    g = load_edge_list(edges, directed=False)

    assert load_anchor_pairs(anchors, g, g) == [(2, 0)]

    anchors.write_text("40\t10\n")
    try:
        load_anchor_pairs(anchors, g, g)
        assert False, "Accepted an anchor absent from the graph"
    except InvalidAnchorSetException:
        assert True


@pytest.mark.Unit
@pytest.mark.io
def test_edge_list_written_with_original_ids(tmp_path):
    g = Graph(3, [0, 1], [1, 2], directed=False, node_ids=[4, 8, 15])
    path = tmp_path / "edges.tsv"

    write_edge_list(g, path)

    assert path.read_text().splitlines() == ["4\t8", "8\t15"]
    assert load_edge_list(path, directed=False) == g


@pytest.mark.Unit
@pytest.mark.io
def test_label_dump(tmp_path):
    path = tmp_path / "labels.tsv"
    write_label_dump(np.array([1, 0, 2]), np.array([2, 1]), 2, path)

    assert path.read_text().splitlines()[0] == "label_count=2"

    labels_s, labels_t, label_count = read_label_dump(path)
    assert list(labels_s) == [1, 0, 2]
    assert list(labels_t) == [2, 1]
    assert label_count == 2


@pytest.mark.Unit
@pytest.mark.io
def test_embedding_export(tmp_path):
    path = tmp_path / "embeddings.tsv"
    vectors_s = np.array([[0.1, -0.2], [1. / 3., 2.]])
    vectors_t = np.array([[5e-10, 7.]])
    g_s = Graph(2, node_ids=[7, 9])

    write_embeddings(vectors_s, vectors_t, path, {"d": 2, "config_hash": "abc"}, g_s=g_s)

    lines = path.read_text().splitlines()
    assert json.loads(lines[0]) == {"config_hash": "abc", "d": 2}
    assert lines[2] == "s\t9\t0.333333333,2"

    header, vectors = read_embeddings(path)
    assert header["d"] == 2
    assert np.allclose(vectors["s"][7], [0.1, -0.2])
    assert np.allclose(vectors["t"][0], [5e-10, 7.])


@pytest.mark.Unit
@pytest.mark.io
def test_output_directory_is_a_file(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")

    try:
        make_output_dir(blocker)
        assert False, "Used a file as output directory"
    except OutputDirectoryException:
        assert True


@pytest.mark.Unit
@pytest.mark.io
def test_id_mapping_sidecar(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("7 3\n3 12\n")
    g = load_edge_list(path, directed=True)

    write_id_mapping(g, tmp_path / "ids.tsv")

    assert read_id_mapping(tmp_path / "ids.tsv") == {3: 0, 7: 1, 12: 2}


@pytest.mark.Unit
@pytest.mark.io
def test_non_ascii_digits_are_malformed(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("1 2\n3 ²\n", encoding="utf-8")

    try:
        load_edge_list(path, directed=True)
        assert False, "Accepted a superscript digit"
    except EdgeListFormatException as e:
        assert e.line_number == 2


@pytest.mark.Unit
@pytest.mark.io
def test_write_directed_symmetric_graph(tmp_path):
    g = Graph(2, [0, 1], [1, 0], directed=True, node_ids=[3, 9])
    path = tmp_path / "edges.tsv"

    write_edge_list(g, path)

    assert path.read_text().splitlines() == ["3\t9", "9\t3"]
    assert load_edge_list(path, directed=True) == g
