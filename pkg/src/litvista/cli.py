"""Command-line entry point.

Exit codes: 0 success, 1 validation or scoring failure, 2 usage error,
3 I/O or network failure. Data goes to stdout (or --out); logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import analysis, svg
from .baseline import heuristic_baseline
from .client import ModelConfig
from .dataset import (
    SPLITS,
    candidates_from_graph,
    dumps_graph,
    graph_from_rows,
    load_dataset,
    load_split,
    read_graph,
    rows_from_graph,
)
from .errors import RequestError, VistaError
from .inline import parse_inline, serialize_inline
from .runner import run_evaluation
from .scoring import MatchConfig, results_csv, score_run
from .tables import parse_model_output_tolerant, parse_prediction_table_strict, serialize_prediction_table
from .topology import DeltaConfig, validate

log = logging.getLogger("litvista")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_graph(path: str, fmt: str, text_path: str | None, doc_id: str | None):
    if fmt == "graph":
        return read_graph(path)
    name = doc_id or Path(path).stem
    if fmt == "inline":
        return parse_inline(_read(path), doc_id=name).graph
    if text_path is None:
        raise UsageError("--text is required to read a tsv table as a graph")
    rows = parse_prediction_table_strict(_read(path))
    return graph_from_rows(name, _read(text_path), rows)


def _graphs(args) -> list:
    if getattr(args, "files", None):
        return [read_graph(p) for p in args.files]
    if not args.data:
        raise UsageError("give graph files or --data with --split")
    return load_split(Path(args.data) / args.split)


def _match_config(args) -> MatchConfig:
    return MatchConfig(
        span_match="word_window" if args.window is not None else "exact",
        window=args.window or 0,
        role_required_for_anchor=not args.role_free,
        dep_labeled=args.labeled,
        include_root_edges=not args.no_root_edges,
        include_backbone_edges=not args.no_backbone_edges,
        aggregation=args.aggregation,
    )


def cmd_validate(args) -> int:
    lines, bad = [], 0
    for path in args.files:
        graph = _load_graph(path, args.input_format, args.text, None)
        report = validate(graph, args.mode)
        bad += not report.ok
        lines.append(json.dumps({
            "file": path, "doc_id": graph.doc_id, "mode": report.mode, "ok": report.ok,
            "violations": [{"anchor_id": v.anchor_id, "kind": v.kind, "message": v.message}
                           for v in report.violations],
            "notes": list(report.notes),
        }, ensure_ascii=False))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_convert(args) -> int:
    graph = _load_graph(args.input, args.source, args.text, args.doc_id)
    if args.target == "graph":
        out = dumps_graph(graph)
    elif args.target == "tsv":
        out = serialize_prediction_table(rows_from_graph(graph))
    else:
        out = serialize_inline(graph, args.index_policy)
    _emit(out, args.out)
    return EXIT_OK


def _read_predictions(pred_dir: Path, gold) -> dict:
    preds = {}
    for g in gold:
        for suffix in (".tsv", ".txt"):
            p = pred_dir / f"{g.doc_id}{suffix}"
            if p.exists():
                rows, diag = parse_model_output_tolerant(p.read_bytes())
                if diag.skipped_lines or diag.repaired_rows:
                    log.info("%s: %s", p.name, json.dumps(diag.as_dict()))
                preds[g.doc_id] = rows
                break
    return preds


def cmd_score(args) -> int:
    gold = load_split(args.gold)
    preds = _read_predictions(Path(args.pred), gold)
    result = score_run(preds, gold, _match_config(args))
    text = results_csv([(args.model, result)])
    if args.per_doc:
        text += results_csv([(f"{args.model}:{doc}", _doc_result(a, d))
                             for doc, (a, d) in sorted(result.per_doc.items())]).split("\n", 1)[1]
    _emit(text, args.out)
    return EXIT_OK


def _doc_result(a, d):
    from .scoring import EvalResult, harmonic_mean
    return EvalResult(a, d, harmonic_mean(a.f1, d.f1))


def cmd_run(args) -> int:
    cfg = ModelConfig.from_file(args.model)
    if args.jobs:
        cfg = ModelConfig(**{**cfg.snapshot(), "parallelism": args.jobs})
    graphs = load_split(Path(args.data) / args.split)
    manifest, _, result = run_evaluation(
        graphs, cfg, args.mode, _match_config(args), split=args.split,
        cache_dir=args.cache, run_dir=args.runs)
    counts = manifest.counts()
    log.info("run %s: %s", manifest.run_id, counts)
    _emit(results_csv([(cfg.name, result)]), args.out)
    if graphs and counts.get("failed", 0) == len(graphs):
        return EXIT_IO
    return EXIT_OK


def cmd_stats(args) -> int:
    data = load_dataset(args.data, args.splits)
    stats = {name: analysis.corpus_stats(graphs, args.cross, args.threshold) for name, graphs in data.items()}
    _emit(analysis.stats_csv(stats), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.what == "shape":
        if len(args.files or []) != 1:
            raise UsageError("analyze shape takes exactly one graph file")
        records = analysis.story_shape_export(read_graph(args.files[0]), DeltaConfig(args.delta))
        _emit(analysis.shape_csv(records), args.out)
        if args.svg:
            pts = [(f"{r.anchor_id}:{r.word}", r.x, r.y + r.z, r.role) for r in records]
            svg.emit_svg(pts, "scatter", args.svg, title="story shape",
                         x_label="narrative progress (tau)", y_label="lateral N*delta (+1 for Pause)")
        return EXIT_OK
    graphs = _graphs(args)
    if args.what == "distances":
        edges = [int(e) for e in args.buckets.split(",")] if args.buckets else analysis.DEFAULT_BUCKETS
        table = analysis.distance_histogram(graphs, edges, args.classify)
        _emit(table.to_csv(), args.out)
        if args.svg:
            svg.emit_svg(table, "heatmap", args.svg, title="dependency distance",
                         x_label="absolute character distance", y_label="dependency type")
        return EXIT_OK
    lexicon = analysis.lexical_role_space(graphs, args.min_freq)
    _emit(analysis.lexicon_csv(lexicon), args.out)
    if args.json:
        Path(args.json).write_text(analysis.lexicon_to_json(lexicon), encoding="utf-8")
    if args.svg and lexicon:
        pts = [(w, s.x, s.y, s.majority().value) for w, s in lexicon.items()]
        svg.emit_svg(pts, "scatter", args.svg, title="lexical role preference",
                     x_label="Impulse-Resonance preference", y_label="Pause-Resonance preference",
                     extents=(-1, 1, -1, 1))
    return EXIT_OK


def cmd_baseline(args) -> int:
    graphs = load_split(Path(args.data) / args.split)
    lexicon = None
    if args.lexicon:
        lexicon = analysis.load_lexicon(args.lexicon)
    elif args.lexicon_from:
        lexicon = analysis.lexical_role_space(load_split(Path(args.data) / args.lexicon_from))
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    chunks = []
    for g in graphs:
        cands = candidates_from_graph(g) if args.mode == "oracle" else None
        table = serialize_prediction_table(heuristic_baseline(g.text, cands, lexicon))
        if out_dir:
            (out_dir / f"{g.doc_id}.tsv").write_text(table, encoding="utf-8")
        else:
            chunks.append(f"# {g.doc_id}\n{table}")
    if not out_dir:
        sys.stdout.write("".join(chunks))
    return EXIT_OK


def _add_match_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--window", type=int, default=None,
                   help="diagnostic word-window span matching with tolerance K (default: exact)")
    p.add_argument("--role-free", action="store_true", help="anchor matches ignore the role")
    p.add_argument("--labeled", action="store_true", help="dependency matches also require roles")
    p.add_argument("--no-root-edges", action="store_true")
    p.add_argument("--no-backbone-edges", action="store_true")
    p.add_argument("--aggregation", choices=("micro", "macro"), default="micro")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="litvista", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check graphs against the dependency layers")
    p.add_argument("files", nargs="+")
    p.add_argument("--mode", choices=("strict", "relaxed"), default="strict")
    p.add_argument("--from", dest="input_format", choices=("graph", "inline", "tsv"), default="graph")
    p.add_argument("--text", help="document text for --from tsv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", help="convert between tsv, inline and graph formats")
    p.add_argument("input")
    p.add_argument("--from", dest="source", choices=("tsv", "inline", "graph"), required=True)
    p.add_argument("--to", dest="target", choices=("tsv", "inline", "graph"), required=True)
    p.add_argument("--text", help="document text for --from tsv")
    p.add_argument("--doc-id")
    p.add_argument("--index-policy", choices=("all", "minimal"), default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("score", help="score prediction tables against gold graphs")
    p.add_argument("--pred", required=True, help="directory of <doc_id>.tsv model outputs")
    p.add_argument("--gold", required=True, help="directory of gold graph files")
    p.add_argument("--model", default="model")
    p.add_argument("--per-doc", action="store_true")
    p.add_argument("--out")
    _add_match_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("run", help="run a model over a split and score it")
    p.add_argument("--model", required=True, help="model config JSON")
    p.add_argument("--mode", choices=("oracle", "e2e"), default="oracle")
    p.add_argument("--data", required=True)
    p.add_argument("--split", choices=SPLITS, default="test")
    p.add_argument("--cache", default=".litvista-cache")
    p.add_argument("--runs", default="runs")
    p.add_argument("--jobs", type=int)
    p.add_argument("--out")
    _add_match_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stats", help="corpus statistics per split")
    p.add_argument("--data", required=True)
    p.add_argument("--splits", nargs="+", default=list(SPLITS))
    p.add_argument("--cross", choices=("crossing", "long_range"), default="crossing")
    p.add_argument("--threshold", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("analyze", help="distance histogram, lexical role space, story shape")
    p.add_argument("what", choices=("distances", "lexicon", "shape"))
    p.add_argument("files", nargs="*")
    p.add_argument("--data")
    p.add_argument("--split", choices=SPLITS, default="test")
    p.add_argument("--buckets", help="comma-separated bucket edges")
    p.add_argument("--classify", choices=("child_role", "role_pair"), default="child_role")
    p.add_argument("--min-freq", type=int, default=1)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--json", help="also write the lexicon as JSON (usable by the baseline)")
    p.add_argument("--svg")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("baseline", help="heuristic baseline predictions")
    p.add_argument("--data", required=True)
    p.add_argument("--split", choices=SPLITS, default="test")
    p.add_argument("--mode", choices=("oracle", "e2e"), default="oracle")
    p.add_argument("--lexicon", help="lexicon JSON from 'analyze lexicon --json'")
    p.add_argument("--lexicon-from", choices=SPLITS, help="build the lexicon from this split")
    p.add_argument("--out", help="directory for <doc_id>.tsv files (default: stdout)")
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"litvista: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RequestError, OSError) as exc:
        print(f"litvista: {exc}", file=sys.stderr)
        return EXIT_IO
    except (VistaError, ValueError, KeyError) as exc:
        print(f"litvista: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
