"""Quantitative analysis of animal tale-type catalogues.

Parse an ATU-style catalogue, extract canonical animal mentions through a
lexical database, build the substitution-adjusted co-occurrence network,
tabulate motif-letter statistics, and run PCA biplots - as a library or via
the ``animaltales`` command-line tool.
"""

__version__ = "0.1.0"

from .corpus import (
    AtuId,
    Category,
    Corpus,
    MotifCode,
    TaleType,
    category_of,
    extract_motif_codes,
    parse_corpus,
    serialize_corpus,
)
from .cooccurrence import CooccurrenceGraph, build_graph, export_graph, filter_graph
from .errors import ConvergenceError, InvariantError, ParseError, StageFailure, ValidationError
from .extraction import Mention, MentionTable, detect_substitutions, extract_mentions, tokenize
from .lexicon import Lexicon, Synset, apply_rollup, load_lexicon, load_lexicon_tsv, load_wordnet_nouns
from .motifs import (
    MotifMatrix,
    animal_motif_matrix,
    category_motif_matrix,
    center_columns,
    motif_letter_counts,
    to_relative,
)
from .pca import PcaResult, biplot_coordinates, pca
from .pipeline import PipelineConfig, PipelineSummary, run_pipeline

__all__ = [
    "AtuId",
    "Category",
    "ConvergenceError",
    "Corpus",
    "CooccurrenceGraph",
    "InvariantError",
    "Lexicon",
    "Mention",
    "MentionTable",
    "MotifCode",
    "MotifMatrix",
    "ParseError",
    "PcaResult",
    "PipelineConfig",
    "PipelineSummary",
    "StageFailure",
    "Synset",
    "TaleType",
    "ValidationError",
    "animal_motif_matrix",
    "apply_rollup",
    "biplot_coordinates",
    "build_graph",
    "category_motif_matrix",
    "category_of",
    "center_columns",
    "detect_substitutions",
    "export_graph",
    "extract_mentions",
    "extract_motif_codes",
    "filter_graph",
    "load_lexicon",
    "load_lexicon_tsv",
    "load_wordnet_nouns",
    "motif_letter_counts",
    "parse_corpus",
    "pca",
    "run_pipeline",
    "serialize_corpus",
    "to_relative",
    "tokenize",
]
