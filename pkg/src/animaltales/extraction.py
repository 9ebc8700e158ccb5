"""Animal mention extraction from tale descriptions.

Descriptions are tokenized into lowercased word tokens annotated with
parenthesis nesting depth. Singular/plural variation is folded by a small
suffix-stripping rule plus an irregulars table. A token is an animal
mention when the lexicon's hypernym closure says so; canonicalization then
applies the alias table and, once corpus-wide counts are known, the rare-
name rollup.

Parenthetical alternatives in catalogue style ("fox (jackal)") mark
substitutable pairs: regional stand-ins, not true co-occurrence. The
detector is pure token syntax: an animal at depth 0 directly followed by a
depth-1 group consisting only of animal mentions.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .corpus import Corpus
from .lexicon import Lexicon, apply_rollup

_TOKEN_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)*|[()]")

IRREGULAR_PLURALS = {
    "mice": "mouse",
    "geese": "goose",
    "wolves": "wolf",
    "oxen": "ox",
}


def normalize_word(word: str) -> str:
    """Lowercase a word and strip possessives and plural suffixes."""
    w = word.lower()
    if w.endswith("'s"):
        w = w[:-2]
    w = w.rstrip("'")
    if w in IRREGULAR_PLURALS:
        return IRREGULAR_PLURALS[w]
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("es") and len(w) > 3 and w[:-2].endswith(("ss", "x", "z", "ch", "sh")):
        return w[:-2]
    if w.endswith("s") and len(w) > 3 and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


@dataclass(frozen=True)
class Token:
    """One word token: normalized text, parenthesis depth, position."""

    text: str
    depth: int
    index: int


def tokenize(description: str) -> list[Token]:
    """Split text into normalized word tokens annotated with parenthesis depth."""
    tokens = []
    depth = 0
    index = 0
    for m in _TOKEN_RE.finditer(description):
        piece = m.group(0)
        if piece == "(":
            depth += 1
        elif piece == ")":
            depth = max(0, depth - 1)
        else:
            tokens.append(Token(text=normalize_word(piece), depth=depth, index=index))
            index += 1
    return tokens


def detect_substitutions(tokens: list[Token], lex: Lexicon) -> list[tuple[str, str]]:
    """Find parenthetical-alternative pairs in one token stream.

    For each animal mention at depth 0 whose immediately following token
    opens a depth-1 group made up solely of animal mentions, one unordered
    pair per (outer, inner) combination is emitted, canonicalized at the
    alias level. Self-pairs are dropped. The result is a multiset.
    """
    pairs: list[tuple[str, str]] = []
    n = len(tokens)
    for i, tok in enumerate(tokens):
        if tok.depth != 0 or not lex.is_animal(tok.text):
            continue
        j = i + 1
        if j >= n or tokens[j].depth != 1:
            continue
        group = []
        while j < n and tokens[j].depth >= 1:
            group.append(tokens[j])
            j += 1
        if any(t.depth != 1 for t in group):
            continue
        if not all(lex.is_animal(t.text) for t in group):
            continue
        outer = lex.canonicalize(tok.text)
        for inner_tok in group:
            inner = lex.canonicalize(inner_tok.text)
            if inner != outer:
                pairs.append(tuple(sorted((outer, inner))))
    return pairs


@dataclass(frozen=True)
class Mention:
    """One animal mention inside a tale description."""

    tale_id: str
    lemma: str
    canonical: str
    token_index: int
    in_parenthetical: bool


@dataclass
class MentionTable:
    """All mentions of a corpus, with per-tale sets and substitution pairs."""

    mentions: list[Mention]
    per_tale_sets: dict[str, set[str]]
    substitution_pairs: dict[str, list[tuple[str, str]]]
    counts: dict[str, int]


def extract_mentions(corpus: Corpus, lex: Lexicon, count_mode: str = "occurrences") -> MentionTable:
    """Extract and canonicalize animal mentions from all analyzable tales.

    ``count_mode`` selects how corpus-wide counts are taken: ``occurrences``
    counts every mention, ``tale-presence`` counts each name once per tale.
    The same counts feed the rare-name rollup threshold.
    """
    if count_mode not in ("occurrences", "tale-presence"):
        raise ValueError(f"unknown count_mode {count_mode!r}")

    raw: list[tuple[str, str, int, bool]] = []  # (tale_id, lemma, index, in_paren)
    raw_subs: dict[str, list[tuple[str, str]]] = {}
    for tale in corpus.analyzable():
        tid = str(tale.id)
        tokens = tokenize(tale.description)
        for tok in tokens:
            if lex.is_animal(tok.text):
                raw.append((tid, tok.text, tok.index, tok.depth > 0))
        subs = detect_substitutions(tokens, lex)
        if subs:
            raw_subs[tid] = subs

    aliased = Counter()
    if count_mode == "occurrences":
        for _, lemma, _, _ in raw:
            aliased[lex.canonicalize(lemma)] += 1
    else:
        seen_per_tale: dict[str, set[str]] = {}
        for tid, lemma, _, _ in raw:
            seen_per_tale.setdefault(tid, set()).add(lex.canonicalize(lemma))
        for names in seen_per_tale.values():
            aliased.update(names)

    rollup = apply_rollup(lex, dict(aliased))

    mentions = []
    per_tale_sets: dict[str, set[str]] = {}
    for tid, lemma, index, in_paren in raw:
        canonical = rollup[lex.canonicalize(lemma)]
        mentions.append(
            Mention(
                tale_id=tid,
                lemma=lemma,
                canonical=canonical,
                token_index=index,
                in_parenthetical=in_paren,
            )
        )
        per_tale_sets.setdefault(tid, set()).add(canonical)

    # Substitution pairs are mapped through the rollup and de-duplicated per
    # tale so they never exceed the tale's set-based pair multiset.
    substitution_pairs: dict[str, list[tuple[str, str]]] = {}
    for tid, pairs in raw_subs.items():
        mapped = set()
        for a, b in pairs:
            ra, rb = rollup[a], rollup[b]
            if ra != rb:
                mapped.add(tuple(sorted((ra, rb))))
        if mapped:
            substitution_pairs[tid] = sorted(mapped)

    if count_mode == "occurrences":
        counts = Counter(m.canonical for m in mentions)
    else:
        counts = Counter()
        for names in per_tale_sets.values():
            counts.update(names)

    return MentionTable(
        mentions=mentions,
        per_tale_sets=per_tale_sets,
        substitution_pairs=substitution_pairs,
        counts=dict(counts),
    )


def table_to_dict(table: MentionTable) -> dict:
    return {
        "mentions": [
            {
                "tale_id": m.tale_id,
                "lemma": m.lemma,
                "canonical": m.canonical,
                "token_index": m.token_index,
                "in_parenthetical": m.in_parenthetical,
            }
            for m in table.mentions
        ],
        "per_tale_sets": {tid: sorted(names) for tid, names in table.per_tale_sets.items()},
        "substitution_pairs": {
            tid: [list(pair) for pair in pairs]
            for tid, pairs in table.substitution_pairs.items()
        },
        "counts": dict(sorted(table.counts.items())),
    }


def table_from_dict(data: dict) -> MentionTable:
    return MentionTable(
        mentions=[
            Mention(
                tale_id=m["tale_id"],
                lemma=m["lemma"],
                canonical=m["canonical"],
                token_index=m["token_index"],
                in_parenthetical=m["in_parenthetical"],
            )
            for m in data["mentions"]
        ],
        per_tale_sets={tid: set(names) for tid, names in data["per_tale_sets"].items()},
        substitution_pairs={
            tid: [tuple(pair) for pair in pairs]
            for tid, pairs in data["substitution_pairs"].items()
        },
        counts=dict(data["counts"]),
    )
