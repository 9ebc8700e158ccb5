"""Motif-letter statistics: corpus counts, category and animal matrices.

All matrices share one fixed column order, the 23 motif-index letters, so
CSV layouts and downstream PCA runs are reproducible. Motif counting is by
occurrence: a tale tagged twice with K contributes 2. ``per_tale=True``
switches to presence counting (at most 1 per tale) for sensitivity checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import CATEGORY_ORDER, MOTIF_LETTERS, Corpus
from .errors import ValidationError
from .extraction import MentionTable

KIND_RAW = "raw-counts"
KIND_RELATIVE = "relative"
KIND_CENTERED = "centered"


@dataclass
class MotifMatrix:
    """A labeled numeric matrix over the fixed 23-letter column set."""

    row_labels: list[str]
    col_labels: list[str]
    values: list[list[float]]
    kind: str

    def row(self, label: str) -> list[float]:
        return self.values[self.row_labels.index(label)]

    def cell(self, row_label: str, letter: str) -> float:
        return self.row(row_label)[self.col_labels.index(letter)]


def _letter_counts_for_tale(tale, per_tale: bool) -> dict[str, int]:
    counts: dict[str, int] = {}
    for code in tale.motifs:
        counts[code.letter] = counts.get(code.letter, 0) + 1
    if per_tale:
        counts = {letter: 1 for letter in counts}
    return counts


def motif_letter_counts(corpus: Corpus, per_tale: bool = False) -> dict[str, int]:
    """Count motif occurrences in analyzable tales, keyed by leading letter."""
    totals = {letter: 0 for letter in MOTIF_LETTERS}
    for tale in corpus.analyzable():
        for letter, n in _letter_counts_for_tale(tale, per_tale).items():
            totals[letter] += n
    return totals


def category_motif_matrix(corpus: Corpus, per_tale: bool = False) -> MotifMatrix:
    """Raw motif-letter counts per category: 5 rows in index-range order."""
    letters = list(MOTIF_LETTERS)
    index = {cat: i for i, cat in enumerate(CATEGORY_ORDER)}
    values = [[0.0] * len(letters) for _ in CATEGORY_ORDER]
    for tale in corpus.analyzable():
        row = values[index[tale.category]]
        for letter, n in _letter_counts_for_tale(tale, per_tale).items():
            row[letters.index(letter)] += n
    return MotifMatrix(
        row_labels=[cat.value for cat in CATEGORY_ORDER],
        col_labels=letters,
        values=values,
        kind=KIND_RAW,
    )


def animal_motif_matrix(
    corpus: Corpus, table: MentionTable, min_freq: int, per_tale: bool = False
) -> MotifMatrix:
    """Motif-letter counts per animal, restricted to animals mentioned more
    than ``min_freq`` times corpus-wide.

    A tale's motifs are attributed to every animal present in that tale.
    """
    if min_freq < 0:
        raise ValidationError(f"min_freq must be >= 0, got {min_freq}")
    animals = sorted(name for name, count in table.counts.items() if count > min_freq)
    letters = list(MOTIF_LETTERS)
    values = [[0.0] * len(letters) for _ in animals]
    row_index = {name: i for i, name in enumerate(animals)}
    for tale in corpus.analyzable():
        present = table.per_tale_sets.get(str(tale.id), set())
        counts = _letter_counts_for_tale(tale, per_tale)
        for name in present:
            if name in row_index:
                row = values[row_index[name]]
                for letter, n in counts.items():
                    row[letters.index(letter)] += n
    return MotifMatrix(row_labels=animals, col_labels=letters, values=values, kind=KIND_RAW)


def to_relative(m: MotifMatrix) -> MotifMatrix:
    """Divide each row by its sum; all-zero rows stay zero."""
    if m.kind != KIND_RAW:
        raise ValidationError(f"to_relative expects raw counts, got kind {m.kind!r}")
    values = []
    for row in m.values:
        total = sum(row)
        values.append([x / total for x in row] if total else list(row))
    return MotifMatrix(
        row_labels=list(m.row_labels),
        col_labels=list(m.col_labels),
        values=values,
        kind=KIND_RELATIVE,
    )


def center_columns(m: MotifMatrix) -> MotifMatrix:
    """Subtract each column's mean over the rows."""
    if m.kind != KIND_RELATIVE:
        raise ValidationError(f"center_columns expects a relative matrix, got kind {m.kind!r}")
    n = len(m.values)
    means = [sum(row[j] for row in m.values) / n for j in range(len(m.col_labels))]
    values = [[x - means[j] for j, x in enumerate(row)] for row in m.values]
    return MotifMatrix(
        row_labels=list(m.row_labels),
        col_labels=list(m.col_labels),
        values=values,
        kind=KIND_CENTERED,
    )


def _fmt(x: float) -> str:
    return format(x, ".12g")


def matrix_to_csv(m: MotifMatrix) -> str:
    """Serialize with the letters as header and 12 significant digits."""
    lines = ["," + ",".join(m.col_labels)]
    for label, row in zip(m.row_labels, m.values):
        lines.append(label + "," + ",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str, kind: str) -> MotifMatrix:
    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise ValidationError("empty matrix CSV")
    header = lines[0].split(",")
    col_labels = header[1:]
    row_labels = []
    values = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(col_labels) + 1:
            raise ValidationError(f"matrix CSV row has {len(parts)} fields, expected {len(col_labels) + 1}")
        row_labels.append(parts[0])
        values.append([float(x) for x in parts[1:]])
    return MotifMatrix(row_labels=row_labels, col_labels=col_labels, values=values, kind=kind)


def letter_counts_to_csv(counts: dict[str, int]) -> str:
    """One-row matrix CSV for the corpus-wide letter tally."""
    m = MotifMatrix(
        row_labels=["all"],
        col_labels=list(MOTIF_LETTERS),
        values=[[float(counts.get(letter, 0)) for letter in MOTIF_LETTERS]],
        kind=KIND_RAW,
    )
    return matrix_to_csv(m)
