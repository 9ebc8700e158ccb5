"""Tale-type catalogue: data model, parser, and canonical serializer.

The catalogue file format is plain UTF-8 text. Records are separated by one
or more blank lines:

    ATU 60 — Fox and Crane Invite Each Other
    The fox invites the crane to dinner and serves the broth on a flat
    stone J1565.1.
    Remarks: Documented since antiquity.

Line 1 carries ``ATU``, the index number (1-299), an optional variant
marker (an uppercase letter, optionally starred), an em-dash and the title.
Free description text follows. Trailing ``Combinations:``, ``Remarks:`` and
``Literature:`` sections run to the end of the record; they are retained
verbatim but excluded from the analysed description.

Motif tokens (``K371.1``, ``K1700-2099``) are read straight out of the
description text. A record whose whole body is a cross-reference such as
``See ATU 122.`` is kept but flagged, and excluded from every analysis.
"""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass, field
from typing import TextIO

from .errors import ParseError, ValidationError

# Thompson's motif index has 23 single-letter divisions: A-Z without I, O, Y.
MOTIF_LETTERS = "ABCDEFGHJKLMNPQRSTUVWXZ"

SECTION_NAMES = ("Combinations", "Remarks", "Literature")

_HEADER_RE = re.compile(r"^ATU\s+(\d+)([A-Z]\*?|\*)?\s+—\s+(.+?)\s*$")
_SECTION_RE = re.compile(r"^(Combinations|Remarks|Literature):(.*)$")
_CROSSREF_RE = re.compile(r"^see atu \d+(?:[a-z]\*?|\*)?\s*[.;!]?$")

# A motif token is an uppercase letter glued to a number, optionally with a
# dotted sub-path (K371.1) or a range end (K1700-2099), free-standing in text.
_MOTIF_RE = re.compile(
    r"(?<![A-Za-z0-9])([A-Z])(\d+)((?:\.\d+)+)?(?:-(\d+))?(?![A-Za-z0-9])"
)


class Category(enum.Enum):
    """The five minor categories of animal tales, by index range."""

    WILD_ANIMALS = "Wild Animals"
    WILD_AND_DOMESTIC = "Wild Animals and Domestic Animals"
    WILD_AND_HUMANS = "Wild Animals and Humans"
    DOMESTIC_ANIMALS = "Domestic Animals"
    OTHER_ANIMALS_AND_OBJECTS = "Other Animals and Objects"


_CATEGORY_RANGES = (
    (1, 99, Category.WILD_ANIMALS),
    (100, 149, Category.WILD_AND_DOMESTIC),
    (150, 199, Category.WILD_AND_HUMANS),
    (200, 219, Category.DOMESTIC_ANIMALS),
    (220, 299, Category.OTHER_ANIMALS_AND_OBJECTS),
)

CATEGORY_ORDER = tuple(cat for _, _, cat in _CATEGORY_RANGES)


def category_of(number: int) -> Category:
    """Map a tale-type number to its category by index range."""
    for lo, hi, cat in _CATEGORY_RANGES:
        if lo <= number <= hi:
            return cat
    raise ValidationError(f"tale-type number {number} outside the animal-tale range 1-299")


@dataclass(frozen=True, order=True)
class AtuId:
    """A tale-type index: number 1-299 plus an optional variant marker."""

    number: int
    variant: str | None = None

    def __post_init__(self):
        if not 1 <= self.number <= 299:
            raise ValidationError(f"ATU number {self.number} outside 1-299")
        if self.variant is not None and not re.fullmatch(r"[A-Z]\*?|\*", self.variant):
            raise ValidationError(f"bad variant marker {self.variant!r}")

    def __str__(self) -> str:
        return f"{self.number}{self.variant or ''}"


@dataclass(frozen=True)
class MotifCode:
    """One motif token: leading letter, major number, optional sub-path or range."""

    letter: str
    major: int
    sub: str | None = None
    range_end: int | None = None

    def __post_init__(self):
        if self.letter not in MOTIF_LETTERS:
            raise ValidationError(f"motif letter {self.letter!r} outside the 23-letter set")
        if self.range_end is not None:
            if self.sub is not None:
                raise ValidationError("motif range cannot carry a sub-path")
            if self.range_end < self.major:
                raise ValidationError(f"motif range end {self.range_end} below {self.major}")

    def __str__(self) -> str:
        text = f"{self.letter}{self.major}"
        if self.sub is not None:
            text += f".{self.sub}"
        if self.range_end is not None:
            text += f"-{self.range_end}"
        return text


def parse_motif_token(token: str) -> MotifCode:
    """Parse a single motif token string, e.g. ``K371.1`` or ``K1700-2099``."""
    m = re.fullmatch(r"([A-Z])(\d+)((?:\.\d+)+)?(?:-(\d+))?", token)
    if not m:
        raise ValidationError(f"not a motif token: {token!r}")
    letter, major, sub, range_end = m.groups()
    return MotifCode(
        letter=letter,
        major=int(major),
        sub=sub[1:] if sub else None,
        range_end=int(range_end) if range_end else None,
    )


def extract_motif_codes(description: str, diagnostics: list[str] | None = None) -> list[MotifCode]:
    """Scan description text for motif tokens, in order, duplicates preserved.

    Near-matches (letter outside the 23-letter set, a range combined with a
    sub-path, or a descending range) are skipped; a message is appended to
    ``diagnostics`` when a list is supplied.
    """
    codes = []
    for m in _MOTIF_RE.finditer(description):
        letter, major, sub, range_end = m.groups()
        token = m.group(0)
        if letter not in MOTIF_LETTERS:
            if diagnostics is not None:
                diagnostics.append(f"skipped motif token {token!r}: letter outside the 23-letter set")
            continue
        if range_end is not None and sub is not None:
            if diagnostics is not None:
                diagnostics.append(f"skipped motif token {token!r}: range combined with sub-path")
            continue
        if range_end is not None and int(range_end) < int(major):
            if diagnostics is not None:
                diagnostics.append(f"skipped motif token {token!r}: descending range")
            continue
        codes.append(
            MotifCode(
                letter=letter,
                major=int(major),
                sub=sub[1:] if sub else None,
                range_end=int(range_end) if range_end else None,
            )
        )
    return codes


@dataclass
class TaleType:
    """One parsed catalogue record."""

    id: AtuId
    title: str
    category: Category
    description: str
    motifs: list[MotifCode] = field(default_factory=list)
    is_reference_only: bool = False
    # Trailing sections, as (name, raw text after the colon) in file order.
    sections: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class Corpus:
    """A parsed catalogue: records plus a checksum of the source text."""

    tales: list[TaleType]
    source_digest: str
    diagnostics: list[str] = field(default_factory=list)

    def analyzable(self) -> list[TaleType]:
        return [t for t in self.tales if not t.is_reference_only]


def _is_cross_reference(description: str) -> bool:
    normalized = " ".join(description.split()).lower()
    return bool(_CROSSREF_RE.fullmatch(normalized))


def _parse_record(lines: list[str], start_line: int, diagnostics: list[str]) -> TaleType:
    header = lines[0]
    m = _HEADER_RE.match(header)
    if not m:
        raise ParseError(f"malformed record header: {header!r}", line=start_line)
    number_text, variant, title = m.groups()
    try:
        tale_id = AtuId(number=int(number_text), variant=variant)
    except ValidationError as exc:
        raise ParseError(str(exc), line=start_line) from exc

    desc_lines: list[str] = []
    sections: list[tuple[str, str]] = []
    for line in lines[1:]:
        sec = _SECTION_RE.match(line)
        if sec:
            sections.append((sec.group(1), sec.group(2)))
        elif sections:
            # Continuation of the open trailing section.
            name, text = sections[-1]
            sections[-1] = (name, text + "\n" + line)
        else:
            desc_lines.append(line)
    description = "\n".join(desc_lines)

    reference_only = _is_cross_reference(description)
    if reference_only:
        motifs = []
    else:
        tale_diags: list[str] = []
        motifs = extract_motif_codes(description, tale_diags)
        diagnostics.extend(f"ATU {tale_id}: {msg}" for msg in tale_diags)

    return TaleType(
        id=tale_id,
        title=title,
        category=category_of(tale_id.number),
        description=description,
        motifs=motifs,
        is_reference_only=reference_only,
        sections=sections,
    )


def parse_corpus(source: str | TextIO) -> Corpus:
    """Parse catalogue text into a validated :class:`Corpus`.

    Raises :class:`ParseError` (with a line number) for malformed record
    headers and :class:`ValidationError` for duplicate tale-type ids.
    Motif tokens with letters outside the 23-letter set are skipped and
    reported in ``Corpus.diagnostics``.
    """
    text = source if isinstance(source, str) else source.read()
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()

    tales: list[TaleType] = []
    diagnostics: list[str] = []
    block: list[str] = []
    block_start = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if line.strip():
            if not block:
                block_start = lineno
            block.append(line)
        elif block:
            tales.append(_parse_record(block, block_start, diagnostics))
            block = []
    if block:
        tales.append(_parse_record(block, block_start, diagnostics))

    seen: dict[AtuId, None] = {}
    for tale in tales:
        if tale.id in seen:
            raise ValidationError(f"duplicate tale-type id ATU {tale.id}")
        seen[tale.id] = None

    return Corpus(tales=tales, source_digest=digest, diagnostics=diagnostics)


def serialize_corpus(corpus: Corpus) -> str:
    """Render a corpus in the canonical record format (single blank-line separators)."""
    records = []
    for tale in corpus.tales:
        lines = [f"ATU {tale.id} — {tale.title}"]
        if tale.description:
            lines.extend(tale.description.split("\n"))
        for name, text in tale.sections:
            lines.extend(f"{name}:{text}".split("\n"))
        records.append("\n".join(lines))
    return "\n\n".join(records) + "\n"


def corpus_to_dict(corpus: Corpus) -> dict:
    return {
        "source_digest": corpus.source_digest,
        "diagnostics": list(corpus.diagnostics),
        "tales": [
            {
                "id": str(t.id),
                "number": t.id.number,
                "variant": t.id.variant,
                "title": t.title,
                "category": t.category.value,
                "description": t.description,
                "motifs": [str(code) for code in t.motifs],
                "is_reference_only": t.is_reference_only,
                "sections": [[name, text] for name, text in t.sections],
            }
            for t in corpus.tales
        ],
    }


def corpus_from_dict(data: dict) -> Corpus:
    tales = []
    for entry in data["tales"]:
        tale_id = AtuId(number=entry["number"], variant=entry["variant"])
        tales.append(
            TaleType(
                id=tale_id,
                title=entry["title"],
                category=Category(entry["category"]),
                description=entry["description"],
                motifs=[parse_motif_token(tok) for tok in entry["motifs"]],
                is_reference_only=entry["is_reference_only"],
                sections=[(name, text) for name, text in entry["sections"]],
            )
        )
    return Corpus(
        tales=tales,
        source_digest=data["source_digest"],
        diagnostics=list(data.get("diagnostics", [])),
    )
