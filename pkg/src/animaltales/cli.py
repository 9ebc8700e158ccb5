"""Command-line interface.

Subcommands mirror the pipeline stages (`parse`, `extract`, `cooccur`,
`motifs`, `pca`, `overlay`) plus `run` for the whole chain. Every stage
reads the persisted intermediate of the stage before it, so partial reruns
are cheap and reproducible.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import corpus_to_dict, parse_corpus
from .cooccurrence import build_graph, export_graph, filter_graph, graph_to_dict
from .errors import EXIT_VALIDATION, StageFailure, ValidationError, exit_code_for
from .extraction import extract_mentions, table_to_dict
from .motifs import (
    KIND_RAW,
    KIND_RELATIVE,
    animal_motif_matrix,
    category_motif_matrix,
    center_columns,
    letter_counts_to_csv,
    matrix_from_csv,
    matrix_to_csv,
    motif_letter_counts,
    to_relative,
)
from .pca import (
    biplot_coordinates,
    loadings_to_csv,
    pca,
    ratios_to_csv,
    scores_from_csv,
    scores_to_csv,
)
from .pipeline import (
    PipelineConfig,
    load_config,
    load_corpus_json,
    load_graph_json,
    load_lexicon_with_tables,
    load_mentions_json,
    run_pipeline,
)
from .plotting import render_biplot_svg, render_overlay


class _Parser(argparse.ArgumentParser):
    # Usage problems are validation errors (exit 1), not I/O errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _write_json(path: str, data: dict) -> None:
    Path(path).write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _lexicon_from_args(args):
    return load_lexicon_with_tables(
        args.lexicon,
        alias_path=args.aliases,
        exclusions_path=args.exclusions,
        rollup_targets_path=args.rollup_targets,
        min_count=args.min_count,
    )


def _add_lexicon_args(parser) -> None:
    parser.add_argument("--lexicon", required=True, help="WordNet noun directory or lexicon TSV")
    parser.add_argument("--aliases", help="alias table TSV (default: packaged table)")
    parser.add_argument("--exclusions", help="exclusions file (default: packaged table)")
    parser.add_argument("--rollup-targets", dest="rollup_targets", help="rollup targets file")
    parser.add_argument("--min-count", dest="min_count", type=int, default=5,
                        help="rollup threshold (names rarer than this roll up)")


def _cmd_parse(args) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        corpus = parse_corpus(fh)
    _write_json(args.out, corpus_to_dict(corpus))
    for line in corpus.diagnostics:
        print(line, file=sys.stderr)
    print(f"parsed {len(corpus.tales)} records ({len(corpus.analyzable())} analyzable)")
    return 0


def _cmd_extract(args) -> int:
    corpus = load_corpus_json(args.corpus_json)
    lexicon = _lexicon_from_args(args)
    table = extract_mentions(corpus, lexicon, count_mode=args.count_mode)
    _write_json(args.out, table_to_dict(table))
    print(f"extracted {len(table.mentions)} mentions of {len(table.counts)} animals")
    return 0


def _cmd_cooccur(args) -> int:
    table = load_mentions_json(args.mentions)
    graph = build_graph(table, multiset=args.multiset)
    _write_json(args.out_json, graph_to_dict(graph))
    filtered = filter_graph(graph, args.min_weight)
    with open(args.out_graph, "w", encoding="utf-8") as fh:
        export_graph(filtered, args.format, fh)
    print(
        f"graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges; "
        f"{len(filtered.edges)} edges above weight {args.min_weight}"
    )
    return 0


def _cmd_motifs(args) -> int:
    corpus = load_corpus_json(args.corpus_json)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts = motif_letter_counts(corpus, per_tale=args.per_tale)
    (out_dir / "motif_counts.csv").write_text(letter_counts_to_csv(counts), encoding="utf-8")
    category_rel = to_relative(category_motif_matrix(corpus, per_tale=args.per_tale))
    (out_dir / "category_motif_relative.csv").write_text(
        matrix_to_csv(category_rel), encoding="utf-8"
    )
    (out_dir / "category_motif_centered.csv").write_text(
        matrix_to_csv(center_columns(category_rel)), encoding="utf-8"
    )
    if args.mentions:
        table = load_mentions_json(args.mentions)
        animal = animal_motif_matrix(corpus, table, args.animal_min_freq, per_tale=args.per_tale)
        (out_dir / "animal_motif.csv").write_text(matrix_to_csv(animal), encoding="utf-8")
    print(f"motif tables written to {out_dir}")
    return 0


def _cmd_pca(args) -> int:
    text = Path(args.matrix).read_text(encoding="utf-8")
    matrix = matrix_from_csv(text, kind=args.kind)
    if matrix.kind == KIND_RAW and not args.keep_raw:
        matrix = to_relative(matrix)
    result = pca(matrix, k=args.components, standardize=args.standardize)
    prefix = args.out_prefix
    Path(f"{prefix}_scores.csv").write_text(
        scores_to_csv(result, matrix.row_labels), encoding="utf-8"
    )
    Path(f"{prefix}_loadings.csv").write_text(
        loadings_to_csv(result, matrix.col_labels), encoding="utf-8"
    )
    Path(f"{prefix}_ratios.csv").write_text(ratios_to_csv(result), encoding="utf-8")
    if args.biplot:
        points, arrows = biplot_coordinates(result, args.loading_scale)
        with open(args.biplot, "w", encoding="utf-8") as fh:
            render_biplot_svg(points, arrows, matrix.row_labels, matrix.col_labels, fh)
    print(
        "explained ratios: "
        + ", ".join(f"PC{i + 1}={r:.4f}" for i, r in enumerate(result.explained_ratio))
    )
    return 0


def _cmd_overlay(args) -> int:
    graph = load_graph_json(args.graph)
    if args.min_weight is not None:
        graph = filter_graph(graph, args.min_weight)
    labels, rows = scores_from_csv(Path(args.scores).read_text(encoding="utf-8"))
    coordinates = {label: (row[0], row[1]) for label, row in zip(labels, rows)}
    with open(args.out, "w", encoding="utf-8") as fh:
        diagnostics = render_overlay(graph, coordinates, fh)
    for line in diagnostics:
        print(line, file=sys.stderr)
    print(f"overlay written to {args.out}")
    return 0


def _cmd_run(args) -> int:
    overrides = {
        "corpus_path": args.corpus,
        "lexicon_source": args.lexicon,
        "alias_path": args.aliases,
        "exclusions_path": args.exclusions,
        "rollup_targets_path": args.rollup_targets,
        "min_count": args.min_count,
        "cooccur_threshold": args.cooccur_threshold,
        "animal_min_freq": args.animal_min_freq,
        "count_mode": args.count_mode,
        "output_dir": args.out_dir,
    }
    if args.config:
        config = load_config(args.config, overrides)
    else:
        present = {k: v for k, v in overrides.items() if v is not None}
        for required in ("corpus_path", "lexicon_source", "output_dir"):
            if required not in present:
                raise ValidationError(
                    f"missing {required}: pass --config or the corresponding flag"
                )
        config = PipelineConfig(**present)
    summary = run_pipeline(config)
    for line in summary.diagnostics:
        print(line, file=sys.stderr)
    print(f"analyzable tale types: {summary.analyzable_count}")
    print(f"most frequent motif letter: {summary.top_motif_letter}")
    print(f"category PCA cumulative contribution (2 PCs): {summary.category_cumulative_2:.4f}")
    print(f"animal PCA cumulative contribution (2 PCs): {summary.animal_cumulative_2:.4f}")
    print(f"wrote {len(summary.artifacts)} artifacts to {config.output_dir}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="animaltales", description=__doc__)
    parser.add_argument("--version", action="version", version=f"animaltales {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a catalogue file to corpus.json")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("extract", help="extract animal mentions to mentions.json")
    p.add_argument("--corpus-json", dest="corpus_json", required=True)
    _add_lexicon_args(p)
    p.add_argument("--count-mode", dest="count_mode", default="occurrences",
                   choices=["occurrences", "tale-presence"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("cooccur", help="build the co-occurrence graph")
    p.add_argument("--mentions", required=True)
    p.add_argument("--min-weight", dest="min_weight", type=int, default=10,
                   help="export edges strictly heavier than this")
    p.add_argument("--multiset", action="store_true",
                   help="weigh pairs by mention multiplicity instead of presence")
    p.add_argument("--format", default="dot", choices=["dot", "graphml", "json"])
    p.add_argument("--out-json", dest="out_json", required=True)
    p.add_argument("--out-graph", dest="out_graph", required=True)
    p.set_defaults(func=_cmd_cooccur)

    p = sub.add_parser("motifs", help="write motif statistics CSVs")
    p.add_argument("--corpus-json", dest="corpus_json", required=True)
    p.add_argument("--mentions", help="mentions.json (needed for the animal matrix)")
    p.add_argument("--animal-min-freq", dest="animal_min_freq", type=int, default=30)
    p.add_argument("--per-tale", dest="per_tale", action="store_true",
                   help="count each letter at most once per tale")
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.set_defaults(func=_cmd_motifs)

    p = sub.add_parser("pca", help="principal components of a motif matrix CSV")
    p.add_argument("--matrix", required=True)
    p.add_argument("--kind", default=KIND_RAW, choices=[KIND_RAW, KIND_RELATIVE],
                   help="what the input CSV contains")
    p.add_argument("--keep-raw", dest="keep_raw", action="store_true",
                   help="skip row normalization of raw counts (sensitivity mode)")
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--standardize", action="store_true",
                   help="scale centered columns to unit variance")
    p.add_argument("--loading-scale", dest="loading_scale", type=float,
                   help="arrow scale; default fits the longest arrow to the score cloud")
    p.add_argument("--biplot", help="also render a biplot SVG here")
    p.add_argument("--out-prefix", dest="out_prefix", required=True)
    p.set_defaults(func=_cmd_pca)

    p = sub.add_parser("overlay", help="draw co-occurrence edges over biplot coordinates")
    p.add_argument("--graph", required=True, help="cooccurrence.json")
    p.add_argument("--scores", required=True, help="pca scores CSV for the animals")
    p.add_argument("--min-weight", dest="min_weight", type=int,
                   help="filter the graph before drawing")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_overlay)

    p = sub.add_parser("run", help="run the full pipeline")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--corpus", help="catalogue file (overrides config)")
    p.add_argument("--lexicon", help="WordNet directory or lexicon TSV (overrides config)")
    p.add_argument("--aliases")
    p.add_argument("--exclusions")
    p.add_argument("--rollup-targets", dest="rollup_targets")
    p.add_argument("--min-count", dest="min_count", type=int)
    p.add_argument("--cooccur-threshold", dest="cooccur_threshold", type=int)
    p.add_argument("--animal-min-freq", dest="animal_min_freq", type=int)
    p.add_argument("--count-mode", dest="count_mode",
                   choices=["occurrences", "tale-presence"])
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StageFailure as exc:
        print(f"animaltales: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except Exception as exc:  # noqa: BLE001 - boundary maps errors to exit codes
        print(f"animaltales: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
