"""Pipeline orchestration: configuration, stages, artifacts, manifest.

The ``run`` entry point chains parse -> extract -> cooccur -> motifs ->
pca -> overlay, persisting every intermediate under the output directory.
Each stage can also be re-run standalone from the persisted intermediate of
the stage before it (see the CLI subcommands). Outputs are deterministic;
the only timestamp lives in one field of ``run_manifest.json``.
"""

from __future__ import annotations

import datetime
import hashlib
import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from . import __version__
from .corpus import corpus_from_dict, corpus_to_dict, parse_corpus
from .cooccurrence import build_graph, export_dot, filter_graph, graph_from_dict, graph_to_dict
from .errors import StageFailure, ValidationError
from .extraction import extract_mentions, table_from_dict, table_to_dict
from .lexicon import load_alias_table, load_lexicon, load_name_set
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
from .plotting import render_biplot_svg, render_overlay

_INT_KEYS = ("min_count", "cooccur_threshold", "animal_min_freq")
_COUNT_MODES = ("occurrences", "tale-presence")


def default_table_path(name: str) -> Path:
    """Path of a packaged default table (aliases, exclusions, rollup targets)."""
    return Path(str(resources.files("animaltales").joinpath("data", name)))


@dataclass
class PipelineConfig:
    """Validated configuration for a full pipeline run."""

    corpus_path: str
    lexicon_source: str
    output_dir: str
    alias_path: str | None = None
    exclusions_path: str | None = None
    rollup_targets_path: str | None = None
    min_count: int = 5
    cooccur_threshold: int = 10
    animal_min_freq: int = 30
    count_mode: str = "occurrences"

    def __post_init__(self):
        for name in ("corpus_path", "lexicon_source", "output_dir"):
            if not getattr(self, name):
                raise ValidationError(f"config field {name} must be a non-empty path")
        for name in _INT_KEYS:
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValidationError(f"config field {name} must be a non-negative integer")
        if self.count_mode not in _COUNT_MODES:
            raise ValidationError(
                f"count_mode must be one of {_COUNT_MODES}, got {self.count_mode!r}"
            )


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; unknown keys are rejected."""
    known = {f.name for f in fields(PipelineConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in known:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError as exc:
                raise ValidationError(f"config line {lineno}: {key} needs an integer") from exc
        else:
            values[key] = value
    return values


def load_config(path: str | Path, overrides: dict | None = None) -> PipelineConfig:
    """Read a config file, apply CLI overrides (overrides win), and validate.

    Relative paths inside the file resolve against the file's directory;
    override paths are taken as given.
    """
    path = Path(path)
    values = parse_config_text(path.read_text(encoding="utf-8"))
    base = path.parent
    for key in ("corpus_path", "lexicon_source", "alias_path", "exclusions_path",
                "rollup_targets_path", "output_dir"):
        if key in values and not Path(values[key]).is_absolute():
            values[key] = str(base / values[key])
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return PipelineConfig(**values)


def load_lexicon_with_tables(
    lexicon_source: str,
    alias_path: str | None = None,
    exclusions_path: str | None = None,
    rollup_targets_path: str | None = None,
    min_count: int = 5,
):
    """Load a lexicon plus its side tables, falling back to the packaged defaults."""
    with open(alias_path or default_table_path("aliases.tsv"), encoding="utf-8") as fh:
        aliases = load_alias_table(fh)
    with open(exclusions_path or default_table_path("exclusions.txt"), encoding="utf-8") as fh:
        exclusions = load_name_set(fh)
    with open(
        rollup_targets_path or default_table_path("rollup_targets.txt"), encoding="utf-8"
    ) as fh:
        rollup_targets = load_name_set(fh)
    return load_lexicon(
        lexicon_source,
        aliases=aliases,
        exclusions=exclusions,
        rollup_targets=rollup_targets,
        min_count=min_count,
    )


def load_lexicon_from_config(config: PipelineConfig):
    return load_lexicon_with_tables(
        config.lexicon_source,
        alias_path=config.alias_path,
        exclusions_path=config.exclusions_path,
        rollup_targets_path=config.rollup_targets_path,
        min_count=config.min_count,
    )


@dataclass
class PipelineSummary:
    """The headline statistics printed after a full run."""

    analyzable_count: int
    top_motif_letter: str
    category_cumulative_2: float
    animal_cumulative_2: float
    artifacts: list[str] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


def _write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _sha256_of(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _input_digests(config: PipelineConfig) -> dict:
    digests = {"corpus": _sha256_of(config.corpus_path)}
    lexicon = Path(config.lexicon_source)
    if lexicon.is_dir():
        digests["lexicon.index"] = _sha256_of(lexicon / "index.noun")
        digests["lexicon.data"] = _sha256_of(lexicon / "data.noun")
    else:
        digests["lexicon"] = _sha256_of(lexicon)
    digests["aliases"] = _sha256_of(config.alias_path or default_table_path("aliases.tsv"))
    digests["exclusions"] = _sha256_of(
        config.exclusions_path or default_table_path("exclusions.txt")
    )
    digests["rollup_targets"] = _sha256_of(
        config.rollup_targets_path or default_table_path("rollup_targets.txt")
    )
    return digests


def run_pipeline(config: PipelineConfig) -> PipelineSummary:
    """Run every stage and write all artifacts under ``config.output_dir``.

    On failure the partially written artifacts are removed and the failing
    stage is named in the raised :class:`StageFailure`.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    diagnostics: list[str] = []
    stage = "setup"

    def emit(name: str, text: str) -> Path:
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)
        return path

    try:
        stage = "parse"
        with open(config.corpus_path, encoding="utf-8") as fh:
            corpus = parse_corpus(fh)
        diagnostics.extend(corpus.diagnostics)
        _write_json(out / "corpus.json", corpus_to_dict(corpus))
        written.append(out / "corpus.json")

        stage = "extract"
        lexicon = load_lexicon_from_config(config)
        table = extract_mentions(corpus, lexicon, count_mode=config.count_mode)
        _write_json(out / "mentions.json", table_to_dict(table))
        written.append(out / "mentions.json")

        stage = "cooccur"
        graph = build_graph(table)
        _write_json(out / "cooccurrence.json", graph_to_dict(graph))
        written.append(out / "cooccurrence.json")
        filtered = filter_graph(graph, config.cooccur_threshold)
        emit("cooccurrence.dot", export_dot(filtered))

        stage = "motifs"
        per_tale = config.count_mode == "tale-presence"
        letter_counts = motif_letter_counts(corpus, per_tale=per_tale)
        emit("motif_counts.csv", letter_counts_to_csv(letter_counts))
        category_rel = to_relative(category_motif_matrix(corpus, per_tale=per_tale))
        emit("category_motif_relative.csv", matrix_to_csv(category_rel))
        emit("category_motif_centered.csv", matrix_to_csv(center_columns(category_rel)))
        animal_raw = animal_motif_matrix(
            corpus, table, config.animal_min_freq, per_tale=per_tale
        )
        emit("animal_motif.csv", matrix_to_csv(animal_raw))

        # Each later stage re-reads the persisted artifact it depends on, so
        # a standalone subcommand rerun reproduces the full run byte for byte.
        stage = "pca"
        category_in = matrix_from_csv(
            (out / "category_motif_relative.csv").read_text(encoding="utf-8"), KIND_RELATIVE
        )
        category_pca = pca(category_in, k=2)
        emit("pca_category_scores.csv", scores_to_csv(category_pca, category_in.row_labels))
        emit("pca_category_loadings.csv", loadings_to_csv(category_pca, category_in.col_labels))
        emit("pca_category_ratios.csv", ratios_to_csv(category_pca))
        animal_in = to_relative(
            matrix_from_csv((out / "animal_motif.csv").read_text(encoding="utf-8"), KIND_RAW)
        )
        animal_pca = pca(animal_in, k=2)
        emit("pca_animal_scores.csv", scores_to_csv(animal_pca, animal_in.row_labels))
        emit("pca_animal_loadings.csv", loadings_to_csv(animal_pca, animal_in.col_labels))
        emit("pca_animal_ratios.csv", ratios_to_csv(animal_pca))

        points, arrows = biplot_coordinates(category_pca)
        with open(out / "biplot_category.svg", "w", encoding="utf-8") as fh:
            render_biplot_svg(points, arrows, category_in.row_labels, category_in.col_labels, fh)
        written.append(out / "biplot_category.svg")
        animal_points, animal_arrows = biplot_coordinates(animal_pca)
        with open(out / "biplot_animal.svg", "w", encoding="utf-8") as fh:
            render_biplot_svg(
                animal_points, animal_arrows, animal_in.row_labels, animal_in.col_labels, fh
            )
        written.append(out / "biplot_animal.svg")

        stage = "overlay"
        labels, rows = scores_from_csv(
            (out / "pca_animal_scores.csv").read_text(encoding="utf-8")
        )
        coordinates = {label: (row[0], row[1]) for label, row in zip(labels, rows)}
        with open(out / "overlay.svg", "w", encoding="utf-8") as fh:
            diagnostics.extend(render_overlay(filtered, coordinates, fh))
        written.append(out / "overlay.svg")

        stage = "manifest"
        manifest = {
            "tool": "animaltales",
            "version": __version__,
            "config": {f.name: getattr(config, f.name) for f in fields(PipelineConfig)},
            "input_digests": _input_digests(config),
            "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
        _write_json(out / "run_manifest.json", manifest)
        written.append(out / "run_manifest.json")
    except Exception as exc:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise StageFailure(stage, exc) from exc

    letters_max = max(letter_counts.values(), default=0)
    top_letter = min(
        (letter for letter, n in letter_counts.items() if n == letters_max), default="-"
    )
    return PipelineSummary(
        analyzable_count=len(corpus.analyzable()),
        top_motif_letter=top_letter,
        category_cumulative_2=category_pca.cumulative_ratio[1],
        animal_cumulative_2=animal_pca.cumulative_ratio[1],
        artifacts=[str(p) for p in written],
        diagnostics=diagnostics,
    )


def load_corpus_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return corpus_from_dict(json.load(fh))


def load_mentions_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return table_from_dict(json.load(fh))


def load_graph_json(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return graph_from_dict(json.load(fh))
