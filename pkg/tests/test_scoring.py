import csv
import math

import pytest
from hypothesis import given, settings, strategies as st

from litvista.dataset import rows_from_graph
from litvista.errors import DomainError
from litvista.prompts import oneshot_graph
from litvista.scoring import (
    MatchConfig,
    Prf,
    anchor_prf,
    dependency_prf,
    harmonic_mean,
    max_matching,
    results_csv,
    score_run,
)
from litvista.tables import PredictionRow
from litvista.topology import ROOT, Anchor, NarrativeGraph, Role, Span

from oracles import anchor_counts, brute_matching, dependency_counts, prf
from strategies import predictions_for, valid_graphs

I, R, P = Role.IMPULSE, Role.RESONANCE, Role.PAUSE


def four_anchor_gold():
    text = "aa bb cc dd"
    roles = [I, R, P, I]
    heads = [ROOT, 0, 0, 0]
    return NarrativeGraph("g4", text, tuple(Anchor(i, Span(3 * i, 3 * i + 2), text[3 * i:3 * i + 2], roles[i], heads[i])
                                            for i in range(4)))


def test_prf_conventions():
    assert Prf.from_counts(0, 0, 5) == Prf(0.0, 0.0, 0.0, 0, 0, 5)
    p = Prf.from_counts(1, 1, 2)
    assert (p.precision, p.recall) == (0.5, 1 / 3)
    assert p.f1 == pytest.approx(0.4)


def test_self_match_is_perfect():
    g = oneshot_graph()
    rows = rows_from_graph(g)
    a, d = anchor_prf(rows, g), dependency_prf(rows, g)
    assert (a.precision, a.recall, a.f1) == (1.0, 1.0, 1.0)
    assert (d.precision, d.recall, d.f1) == (1.0, 1.0, 1.0)


def test_two_wrong_roles_halves_anchor_scores():
    g = four_anchor_gold()
    rows = rows_from_graph(g)
    rows[1] = PredictionRow(1, P, rows[1].span, rows[1].word, 0)
    rows[2] = PredictionRow(2, R, rows[2].span, rows[2].word, 0)
    a = anchor_prf(rows, g)
    assert (a.precision, a.recall, a.f1) == (0.5, 0.5, 0.5)
    # role-free matching ignores the label
    assert anchor_prf(rows, g, MatchConfig(role_required_for_anchor=False)).f1 == 1.0
    # unlabeled dependencies still match, labeled ones do not
    assert dependency_prf(rows, g).f1 == 1.0
    assert dependency_prf(rows, g, MatchConfig(dep_labeled=True)).tp == 2


def test_empty_prediction():
    g = four_anchor_gold()
    a = anchor_prf([], g)
    assert (a.precision, a.recall, a.f1, a.tp, a.fn) == (0.0, 0.0, 0.0, 0, 4)


def test_duplicates_count_as_false_positives():
    g = four_anchor_gold()
    rows = rows_from_graph(g)
    a = anchor_prf(rows + [rows[0]], g)
    assert (a.tp, a.fp, a.fn) == (4, 1, 0)


def test_dangling_head_is_a_false_positive():
    g = four_anchor_gold()
    notes = []
    d = dependency_prf([PredictionRow(0, R, Span(3, 5), "bb", 42)], g, notes=notes)
    assert (d.tp, d.fp) == (0, 1)
    assert notes and "DanglingHead" in notes[0]


def test_root_and_backbone_switches():
    g = four_anchor_gold()
    rows = rows_from_graph(g)
    assert dependency_prf(rows, g).tp == 4
    assert dependency_prf(rows, g, MatchConfig(include_root_edges=False)).tp == 3
    assert dependency_prf(rows, g, MatchConfig(include_backbone_edges=False)).tp == 3


def test_word_window_tolerance():
    g = four_anchor_gold()
    shifted = [PredictionRow(0, I, Span(1, 3), "AA", -1)]
    assert anchor_prf(shifted, g).tp == 0
    assert anchor_prf(shifted, g, MatchConfig(span_match="word_window", window=1)).tp == 1
    assert anchor_prf(shifted, g, MatchConfig(span_match="word_window", window=0)).tp == 0


def test_micro_pooling_example():
    text = "aa bb cc"
    d1 = NarrativeGraph("d1", text, (Anchor(0, Span(0, 2), "aa", I),))
    d2 = NarrativeGraph("d2", text, (Anchor(0, Span(0, 2), "aa", I), Anchor(1, Span(3, 5), "bb", R, 0)))
    preds = {"d1": [PredictionRow(0, I, Span(0, 2), "aa", -1), PredictionRow(1, I, Span(6, 8), "cc", -1)],
             "d2": []}
    res = score_run(preds, [d1, d2])
    assert [(p.tp, p.fp, p.fn) for p, _ in (res.per_doc["d1"], res.per_doc["d2"])] == [(1, 1, 0), (0, 0, 2)]
    assert res.anchor.precision == 0.5
    assert res.anchor.recall == pytest.approx(1 / 3)
    assert res.anchor.f1 == pytest.approx(0.4)
    macro = score_run(preds, [d1, d2], MatchConfig(aggregation="macro"))
    assert macro.anchor.f1 == pytest.approx((2 / 3 + 0) / 2)


def test_missing_and_extra_documents_warn(caplog):
    g = four_anchor_gold()
    res = score_run({"other": []}, [g])
    assert res.anchor.f1 == 0.0 and res.harmonic == 0.0
    assert "no predictions" in caplog.text and "unknown document" in caplog.text


def test_gold_replay_is_perfect_and_serializes():
    g = oneshot_graph()
    res = score_run({g.doc_id: rows_from_graph(g)}, [g])
    assert res.harmonic == 1.0
    line = results_csv([("gold", res)]).splitlines()[1]
    assert line == "gold,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000,1.0000"
    assert res.to_json() == score_run({g.doc_id: rows_from_graph(g)}, [g]).to_json()


@pytest.mark.parametrize("a,d,h", [(0.4914, 0.5624, 0.5245), (0.2519, 0.7333, 0.3750), (0.2669, 0.3365, 0.2977)])
def test_harmonic_spot_values(a, d, h):
    assert abs(harmonic_mean(a, d) - h) < 5e-5


def test_harmonic_published_rows(fixtures):
    with open(fixtures / "oracle_results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 27
    for r in rows:
        got = harmonic_mean(float(r["anchor_f1"]), float(r["dep_f1"]))
        assert abs(got - float(r["harmonic"])) < 2e-3, r["model"]


def test_harmonic_domain():
    assert harmonic_mean(0.0, 0.0) == 0.0
    for bad in ((-0.1, 0.5), (0.5, 1.1), (math.nan, 0.5)):
        with pytest.raises(DomainError):
            harmonic_mean(*bad)


@given(st.floats(0, 1), st.floats(0, 1))
def test_harmonic_bounds_and_symmetry(a, d):
    h = harmonic_mean(a, d)
    assert h == harmonic_mean(d, a)
    assert min(a, d) - 1e-12 <= h <= max(a, d) + 1e-12
    assert harmonic_mean(a, 0.0) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.data())
def test_max_matching_matches_exhaustive_search(n_left, n_right, data):
    edges = data.draw(st.sets(st.tuples(st.integers(0, max(n_left - 1, 0)), st.integers(0, max(n_right - 1, 0)))))
    edges = {(u, v) for u, v in edges if u < n_left and v < n_right}
    adj = [[v for v in range(n_right) if (u, v) in edges] for u in range(n_left)]
    assert max_matching(n_left, adj) == brute_matching(n_left, n_right, lambda u, v: (u, v) in edges)


def _scorer_agrees(g, rows, window):
    cfg = MatchConfig() if window is None else MatchConfig(span_match="word_window", window=window)
    a = anchor_prf(rows, g, cfg)
    tp, fp, fn = anchor_counts(rows, g, window)
    assert (a.tp, a.fp, a.fn) == (tp, fp, fn)
    assert (a.precision, a.recall, a.f1) == pytest.approx(prf(tp, fp, fn))
    d = dependency_prf(rows, g)
    tp, fp, fn = dependency_counts(rows, g)
    assert (d.tp, d.fp, d.fn) == (tp, fp, fn)
    assert (d.precision, d.recall, d.f1) == pytest.approx(prf(tp, fp, fn))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_scorer_matches_brute_force_oracle(data):
    g = data.draw(valid_graphs("relaxed", max_anchors=12))
    rows = data.draw(predictions_for(g))
    window = data.draw(st.sampled_from([None, 0, 1, 3]))
    _scorer_agrees(g, rows, window)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_monotonicity(data):
    g = data.draw(valid_graphs("relaxed", min_anchors=1, max_anchors=10))
    rows = data.draw(predictions_for(g))
    base = anchor_prf(rows, g)
    matched = {(r.span, r.category) for r in rows}
    missing = [a for a in g.event_anchors if (a.span, a.role) not in matched]
    if missing:
        a = missing[0]
        better = anchor_prf(rows + [PredictionRow(999, a.role, a.span, a.word, -1)], g)
        assert better.recall >= base.recall
    wrong = PredictionRow(998, I, Span(10**6, 10**6 + 1), "zz", -1)
    worse = anchor_prf(rows + [wrong], g)
    assert worse.precision <= base.precision
