import json

import pytest

from litvista.dataset import (
    candidates_from_graph,
    dumps_graph,
    graph_from_dict,
    graph_from_rows,
    load_dataset,
    load_split,
    read_graph,
    rows_from_graph,
    verify_spans,
    write_graph,
)
from litvista.errors import InvalidGoldGraph, MissingSplit
from litvista.prompts import load_resource, oneshot_graph
from litvista.tables import PredictionRow, parse_prediction_table_strict
from litvista.topology import Anchor, NarrativeGraph, Role, Span


def test_graph_json_round_trip(tmp_path):
    g = oneshot_graph()
    write_graph(g, tmp_path / "g.json")
    assert read_graph(tmp_path / "g.json") == g
    assert graph_from_dict(json.loads(dumps_graph(g))) == g


def test_graph_constructor_sorts_by_span():
    g = NarrativeGraph("t", "ab cd", (Anchor(1, Span(3, 5), "cd", Role.RESONANCE, 0), Anchor(0, Span(0, 2), "ab", Role.IMPULSE)))
    assert [a.id for a in g.anchors] == [0, 1]


def test_rows_and_candidates_drop_nonevents():
    g = NarrativeGraph("t", "ab cd", (Anchor(0, Span(0, 2), "ab", Role.IMPULSE), Anchor(1, Span(3, 5), "cd", Role.NON_EVENT)))
    assert rows_from_graph(g) == [PredictionRow(0, Role.IMPULSE, Span(0, 2), "ab", -1)]
    assert list(candidates_from_graph(g)) == [(0, Span(0, 2), "ab")]


def test_oneshot_offsets_verify_against_text():
    rows = parse_prediction_table_strict(load_resource("oneshot_output.txt"))
    assert len(rows) == 18
    assert verify_spans(rows, load_resource("oneshot_text.txt")) == []


def test_verify_spans_case_and_punctuation():
    text = "He TOOK it, 'quickly'."
    rows = [PredictionRow(0, Role.RESONANCE, Span(3, 7), "took", -1),
            PredictionRow(1, Role.RESONANCE, Span(12, 21), "quickly", -1),
            PredictionRow(2, Role.RESONANCE, Span(0, 2), "she", -1),
            PredictionRow(3, Role.RESONANCE, Span(40, 45), "gone", -1)]
    bad = verify_spans(rows, text)
    assert [(m.anchor_id, m.found) for m in bad] == [(2, "He"), (3, "")]


def _write(path, graph):
    path.mkdir(parents=True, exist_ok=True)
    write_graph(graph, path / f"{graph.doc_id}.json")


def test_load_dataset(tmp_path):
    g = oneshot_graph()
    for split in ("train", "val", "test"):
        _write(tmp_path / split, graph_from_rows(f"{split}-doc", g.text, rows_from_graph(g)))
    data = load_dataset(tmp_path)
    assert {k: [x.doc_id for x in v] for k, v in data.items()} == {
        "train": ["train-doc"], "val": ["val-doc"], "test": ["test-doc"]}


def test_missing_split(tmp_path):
    (tmp_path / "train").mkdir()
    (tmp_path / "val").mkdir()
    with pytest.raises(MissingSplit):
        load_dataset(tmp_path)


def test_cyclic_gold_is_rejected(tmp_path):
    cyc = NarrativeGraph("cyc", "a b", (Anchor(0, Span(0, 1), "a", Role.IMPULSE, 1),
                                        Anchor(1, Span(2, 3), "b", Role.IMPULSE, 0)))
    _write(tmp_path, cyc)
    with pytest.raises(InvalidGoldGraph):
        load_split(tmp_path)
