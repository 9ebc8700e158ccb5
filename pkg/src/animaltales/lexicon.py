"""Lexical database: noun synsets, hypernym closure, and name canonicalization.

Two loaders produce the same synset map: one reads the WordNet 3.0 noun
database files (``index.noun``/``data.noun``), the other a three-column TSV
(``lemma<TAB>synset_id<TAB>hypernym_id``, empty hypernym for roots).

A :class:`Lexicon` bundles the synset map with an animal root synset, an
alias table (``rooster -> chicken``), a set of rollup targets for rare
names, and an exclusion list for lemmas that must never count as animals
(the classic case being the verb reading of "fly").
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class Synset:
    """One noun synset: an id, its lemmas, and hypernym edges (by synset id)."""

    id: str
    words: tuple[str, ...]
    hypernyms: tuple[str, ...]


def _read_text(source: str | TextIO) -> str:
    return source if isinstance(source, str) else source.read()


def validate_synsets(synsets: dict[str, Synset]) -> None:
    """Reject dangling hypernym references and hypernym cycles."""
    indegree = {sid: 0 for sid in synsets}
    for syn in synsets.values():
        for hid in syn.hypernyms:
            if hid not in synsets:
                raise ValidationError(f"synset {syn.id} has dangling hypernym reference {hid}")
            indegree[hid] += 1
    # Kahn's algorithm on the hypernym relation; leftovers mean a cycle.
    queue = deque(sid for sid, deg in indegree.items() if deg == 0)
    seen = 0
    while queue:
        sid = queue.popleft()
        seen += 1
        for hid in synsets[sid].hypernyms:
            indegree[hid] -= 1
            if indegree[hid] == 0:
                queue.append(hid)
    if seen != len(synsets):
        raise ValidationError("hypernym relation contains a cycle")


def load_wordnet_nouns(
    index_source: str | TextIO, data_source: str | TextIO
) -> tuple[dict[str, Synset], dict[str, list[str]]]:
    """Parse WordNet 3.0 noun database files.

    Parameters
    ----------
    index_source : str or file
        Contents of ``index.noun``. Used for the per-lemma sense order.
    data_source : str or file
        Contents of ``data.noun``. Lines beginning with two spaces are the
        license header. Each data line is::

            offset lex_filenum ss_type w_cnt (word lex_id)+ p_cnt (ptr)* | gloss

        where ``w_cnt`` is two hex digits and each pointer is
        ``symbol offset pos source/target``. Only the hypernym pointers
        ``@`` and ``@i`` are kept.

    Returns
    -------
    synsets : dict
        Synset id (the zero-padded offset) to :class:`Synset`. Lemmas are
        lowercased with underscores mapped to spaces.
    sense_order : dict
        Lemma to the list of its synset ids in index order (most common
        sense first).
    """
    synsets: dict[str, Synset] = {}
    for lineno, line in enumerate(_read_text(data_source).splitlines(), start=1):
        if not line.strip() or line.startswith("  "):
            continue
        fields = line.split(" ")
        try:
            offset = fields[0]
            ss_type = fields[2]
            w_cnt = int(fields[3], 16)
            words = tuple(
                fields[4 + 2 * i].lower().replace("_", " ") for i in range(w_cnt)
            )
            p_cnt_pos = 4 + 2 * w_cnt
            p_cnt = int(fields[p_cnt_pos])
            hypernyms = []
            for i in range(p_cnt):
                base = p_cnt_pos + 1 + 4 * i
                symbol, target, pos = fields[base], fields[base + 1], fields[base + 2]
                if symbol in ("@", "@i") and pos == "n":
                    hypernyms.append(target)
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed data.noun line: {line[:60]!r}", line=lineno) from exc
        if ss_type != "n":
            raise ParseError(f"unexpected synset type {ss_type!r}", line=lineno)
        synsets[offset] = Synset(id=offset, words=words, hypernyms=tuple(hypernyms))

    sense_order: dict[str, list[str]] = {}
    for lineno, line in enumerate(_read_text(index_source).splitlines(), start=1):
        if not line.strip() or line.startswith("  "):
            continue
        fields = line.split(" ")
        try:
            lemma = fields[0].lower().replace("_", " ")
            synset_cnt = int(fields[2])
            offsets = fields[-synset_cnt:]
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed index.noun line: {line[:60]!r}", line=lineno) from exc
        for offset in offsets:
            if offset not in synsets:
                raise ValidationError(
                    f"index.noun line {lineno}: lemma {lemma!r} points at missing synset {offset}"
                )
        sense_order[lemma] = list(offsets)

    validate_synsets(synsets)
    return synsets, sense_order


def load_lexicon_tsv(source: str | TextIO) -> tuple[dict[str, Synset], dict[str, list[str]]]:
    """Parse the three-column lexicon TSV into a synset map plus lemma order.

    Rows are ``lemma<TAB>synset_id<TAB>hypernym_id``; the hypernym column is
    empty for root synsets. Repeating a synset id with different lemmas or
    hypernyms accumulates words and edges.
    """
    words: dict[str, list[str]] = {}
    hypernyms: dict[str, list[str]] = {}
    sense_order: dict[str, list[str]] = {}
    for lineno, line in enumerate(_read_text(source).splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated columns, got {len(parts)}", line=lineno)
        lemma, sid, hid = (p.strip() for p in parts)
        if not lemma or not sid:
            raise ParseError("empty lemma or synset id", line=lineno)
        lemma = lemma.lower().replace("_", " ")
        bucket = words.setdefault(sid, [])
        if lemma not in bucket:
            bucket.append(lemma)
        edges = hypernyms.setdefault(sid, [])
        if hid and hid not in edges:
            edges.append(hid)
        order = sense_order.setdefault(lemma, [])
        if sid not in order:
            order.append(sid)

    synsets = {
        sid: Synset(id=sid, words=tuple(words[sid]), hypernyms=tuple(hypernyms[sid]))
        for sid in words
    }
    validate_synsets(synsets)
    return synsets, sense_order


def load_alias_table(source: str | TextIO) -> dict[str, str]:
    """Parse an alias TSV (``variant<TAB>canonical``) into a lemma map."""
    aliases: dict[str, str] = {}
    for lineno, line in enumerate(_read_text(source).splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(f"expected 2 tab-separated columns, got {len(parts)}", line=lineno)
        variant, canonical = (p.strip().lower() for p in parts)
        aliases[variant] = canonical
    return aliases


def load_name_set(source: str | TextIO) -> set[str]:
    """Parse a one-name-per-line file (used for exclusions and rollup targets)."""
    names = set()
    for line in _read_text(source).splitlines():
        name = line.strip().lower()
        if name and not name.startswith("#"):
            names.add(name)
    return names


def resolve_animal_root(
    synsets: dict[str, Synset], sense_order: dict[str, list[str]], root: str = "animal"
) -> str:
    """Resolve the animal root to a synset id.

    ``root`` may be a synset id already present in the map, or a lemma whose
    first sense (per the loader's sense order) is taken.
    """
    if root in synsets:
        return root
    candidates = sense_order.get(root.lower(), [])
    if not candidates:
        raise ValidationError(f"animal root {root!r} not found in the lexical database")
    return candidates[0]


@dataclass
class Lexicon:
    """Immutable bundle of synsets plus the canonicalization configuration."""

    synsets: dict[str, Synset]
    animal_root: str
    aliases: dict[str, str] = field(default_factory=dict)
    rollup_targets: set[str] = field(default_factory=set)
    exclusions: set[str] = field(default_factory=set)
    min_count: int = 5

    def __post_init__(self):
        validate_synsets(self.synsets)
        if self.animal_root not in self.synsets:
            raise ValidationError(f"animal root synset {self.animal_root!r} not loaded")
        for target in set(self.aliases.values()):
            if self.aliases.get(target, target) != target:
                raise ValidationError(f"alias table not idempotent: {target!r} maps onward")
        clash = self.exclusions & set(self.aliases.values())
        if clash:
            raise ValidationError(f"excluded lemmas used as alias targets: {sorted(clash)}")
        self._lemma_index: dict[str, list[str]] = {}
        for sid in self.synsets:
            for word in self.synsets[sid].words:
                self._lemma_index.setdefault(word, []).append(sid)
        # Reflexive-transitive closure under the animal root, precomputed by
        # walking the reversed hypernym edges once.
        children: dict[str, list[str]] = {sid: [] for sid in self.synsets}
        for syn in self.synsets.values():
            for hid in syn.hypernyms:
                children[hid].append(syn.id)
        reachable = {self.animal_root}
        queue = deque([self.animal_root])
        while queue:
            for child in children[queue.popleft()]:
                if child not in reachable:
                    reachable.add(child)
                    queue.append(child)
        self._animal_synsets = reachable

    def synsets_of(self, lemma: str) -> list[str]:
        return self._lemma_index.get(lemma, [])

    def is_animal(self, lemma: str) -> bool:
        """True iff the lemma is not excluded and some sense reaches the animal root."""
        if lemma in self.exclusions:
            return False
        return any(sid in self._animal_synsets for sid in self.synsets_of(lemma))

    def canonicalize(self, lemma: str) -> str:
        """Alias lookup for an animal lemma; unmapped lemmas name themselves."""
        if not self.is_animal(lemma):
            raise ValidationError(f"cannot canonicalize non-animal lemma {lemma!r}")
        return self.aliases.get(lemma, lemma)

    def nearest_rollup_target(self, name: str) -> str | None:
        """Nearest hypernym ancestor (BFS, reflexive) carrying a rollup-target lemma.

        Depth ties are broken by the lexicographically smallest target name.
        Returns None when no ancestor carries one.
        """
        frontier = list(self.synsets_of(name))
        visited = set(frontier)
        while frontier:
            found = sorted(
                word
                for sid in frontier
                for word in self.synsets[sid].words
                if word in self.rollup_targets
            )
            if found:
                return found[0]
            nxt = []
            for sid in frontier:
                for hid in self.synsets[sid].hypernyms:
                    if hid not in visited:
                        visited.add(hid)
                        nxt.append(hid)
            frontier = nxt
        return None


def apply_rollup(lex: Lexicon, counts: dict[str, int]) -> dict[str, str]:
    """Build the rollup map from corpus-wide post-alias occurrence counts.

    Names whose count is below ``lex.min_count`` map to their nearest
    hypernym ancestor among the rollup targets; everything else (including
    names with no such ancestor) maps to itself.
    """
    rollup = {}
    for name, count in counts.items():
        target = None
        if count < lex.min_count:
            target = lex.nearest_rollup_target(name)
        rollup[name] = target if target is not None else name
    return rollup


def load_lexicon(
    source,
    aliases: dict[str, str] | None = None,
    exclusions: Iterable[str] | None = None,
    rollup_targets: Iterable[str] | None = None,
    min_count: int = 5,
    animal_root: str = "animal",
) -> Lexicon:
    """Load a lexicon from a WordNet directory or a TSV file path.

    ``source`` is either a directory containing ``index.noun`` and
    ``data.noun`` or the path of a lexicon TSV.
    """
    from pathlib import Path

    path = Path(source)
    if path.is_dir():
        index_path = path / "index.noun"
        data_path = path / "data.noun"
        with open(index_path, encoding="utf-8") as idx, open(data_path, encoding="utf-8") as dat:
            synsets, sense_order = load_wordnet_nouns(idx, dat)
    else:
        with open(path, encoding="utf-8") as fh:
            synsets, sense_order = load_lexicon_tsv(fh)
    return Lexicon(
        synsets=synsets,
        animal_root=resolve_animal_root(synsets, sense_order, animal_root),
        aliases=dict(aliases or {}),
        rollup_targets=set(rollup_targets or ()),
        exclusions=set(exclusions or ()),
        min_count=min_count,
    )
