import io
import json
import random
import xml.etree.ElementTree as ET

import pytest

from animaltales import (
    InvariantError,
    ValidationError,
    build_graph,
    export_graph,
    extract_mentions,
    filter_graph,
    parse_corpus,
)
from animaltales.cooccurrence import export_dot, graph_from_dict, graph_to_dict
from animaltales.extraction import Mention, MentionTable

from support import naive_cooccurrence, random_mention_table


def _table(per_tale_sets, substitutions=None, counts=None):
    mentions = [
        Mention(tale_id=tid, lemma=n, canonical=n, token_index=i, in_parenthetical=False)
        for tid, names in per_tale_sets.items()
        for i, n in enumerate(sorted(names))
    ]
    if counts is None:
        counts = {}
        for m in mentions:
            counts[m.canonical] = counts.get(m.canonical, 0) + 1
    return MentionTable(
        mentions=mentions,
        per_tale_sets={tid: set(ns) for tid, ns in per_tale_sets.items()},
        substitution_pairs=substitutions or {},
        counts=counts,
    )


class TestBuildGraph:
    def test_direct_pair_count(self):
        table = _table({"A": {"fox", "chicken"}, "B": {"fox", "chicken"}, "C": {"fox", "wolf"}})
        g = build_graph(table)
        assert g.edges[("chicken", "fox")] == 2
        assert g.edges[("fox", "wolf")] == 1

    def test_substitution_adjustment(self, lexicon):
        corpus = parse_corpus("ATU 61 — Tale\nThe fox (jackal) steals the goose.\n")
        # Neutralize the rare-name rollup so the raw adjustment shows through.
        bare = type(lexicon)(
            synsets=lexicon.synsets,
            animal_root=lexicon.animal_root,
            aliases=lexicon.aliases,
            rollup_targets=set(),
            exclusions=lexicon.exclusions,
            min_count=lexicon.min_count,
        )
        g = build_graph(extract_mentions(corpus, bare))
        assert g.edges[("fox", "jackal")] == 0
        assert g.edges[("fox", "goose")] == 1
        assert g.edges[("goose", "jackal")] == 1

    def test_empty_corpus(self):
        g = build_graph(_table({}))
        assert g.nodes == {} and g.edges == {}

    def test_repeated_mentions_count_once(self):
        table = _table({"A": {"fox", "wolf"}})
        table.mentions.append(
            Mention(tale_id="A", lemma="fox", canonical="fox", token_index=9, in_parenthetical=False)
        )
        assert build_graph(table).edges[("fox", "wolf")] == 1

    def test_multiset_mode(self):
        table = _table({"A": {"fox", "wolf"}})
        table.mentions.append(
            Mention(tale_id="A", lemma="fox", canonical="fox", token_index=9, in_parenthetical=False)
        )
        assert build_graph(table, multiset=True).edges[("fox", "wolf")] == 2

    def test_oversubtraction_is_hard_error(self):
        table = _table({"A": {"fox", "wolf"}}, substitutions={"A": [("fox", "wolf"), ("fox", "wolf")]})
        with pytest.raises(InvariantError):
            build_graph(table)

    def test_fixture_edges(self, mention_table, manifest):
        g = build_graph(mention_table)
        got = {f"{a}|{b}": w for (a, b), w in g.edges.items()}
        assert got == manifest["edges"]

    def test_matches_naive_oracle_on_random_tables(self):
        rng = random.Random(99)
        for _ in range(100):
            table = random_mention_table(rng)
            g = build_graph(table)
            oracle = naive_cooccurrence(table)
            got = {pair: w for pair, w in g.edges.items()}
            assert got == oracle

    def test_tale_order_invariance(self, mention_table):
        reordered = MentionTable(
            mentions=list(reversed(mention_table.mentions)),
            per_tale_sets=dict(reversed(list(mention_table.per_tale_sets.items()))),
            substitution_pairs=dict(reversed(list(mention_table.substitution_pairs.items()))),
            counts=mention_table.counts,
        )
        assert build_graph(mention_table).edges == build_graph(reordered).edges


class TestFilterGraph:
    def _graph(self):
        table = _table({"A": {"a", "b"}})
        g = build_graph(table)
        g.edges = {("a", "b"): 2, ("a", "c"): 11, ("b", "c"): 15}
        g.nodes = {"a": 1, "b": 1, "c": 1, "lonely": 1}
        return g

    def test_strict_threshold(self):
        kept = filter_graph(self._graph(), 10)
        assert set(kept.edges.values()) == {11, 15}
        assert kept.threshold == 10

    def test_figure_thresholds(self):
        kept = filter_graph(self._graph(), 14)
        assert list(kept.edges.values()) == [15]

    def test_zero_keeps_positive(self):
        kept = filter_graph(self._graph(), 0)
        assert set(kept.edges.values()) == {2, 11, 15}

    def test_isolated_nodes_dropped(self):
        kept = filter_graph(self._graph(), 10)
        assert set(kept.nodes) == {"a", "b", "c"}
        kept = filter_graph(self._graph(), 14)
        assert set(kept.nodes) == {"b", "c"}

    def test_monotone_shrinking(self, mention_table):
        g = build_graph(mention_table)
        base = set(filter_graph(g, 0).edges)
        for k in range(0, 5):
            assert set(filter_graph(g, k).edges) <= base

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValidationError):
            filter_graph(self._graph(), -1)


class TestExports:
    def _two_node(self):
        return build_graph(_table({"A": {"fox", "wolf"}}))

    def test_dot_minimal(self):
        text = export_dot(self._two_node())
        assert text.startswith("graph cooccurrence {")
        assert '"fox" -- "wolf"' in text.replace('"wolf" -- "fox"', '"fox" -- "wolf"')
        assert text.count("--") == 1

    def test_dot_deterministic(self):
        g = self._two_node()
        buf1, buf2 = io.StringIO(), io.StringIO()
        export_graph(g, "dot", buf1)
        export_graph(g, "dot", buf2)
        assert buf1.getvalue() == buf2.getvalue()

    def test_dot_penwidth_scaling(self, mention_table):
        g = build_graph(mention_table)
        text = export_dot(filter_graph(g, 0))
        assert "penwidth=4.00" in text  # heaviest edge
        assert "penwidth=1.00" in text  # lightest edge

    def test_graphml_parses_and_keeps_weights(self, mention_table):
        g = filter_graph(build_graph(mention_table), 1)
        buf = io.StringIO()
        export_graph(g, "graphml", buf)
        root = ET.fromstring(buf.getvalue())
        ns = "{http://graphml.graphdrawing.org/xmlns}"
        edges = root.findall(f"{ns}graph/{ns}edge")
        assert len(edges) == len(g.edges)

    def test_json_round_trip(self, mention_table):
        g = build_graph(mention_table)
        buf = io.StringIO()
        export_graph(g, "json", buf)
        restored = graph_from_dict(json.loads(buf.getvalue()))
        assert restored.edges == g.edges
        assert restored.nodes == g.nodes

    def test_unknown_format(self):
        with pytest.raises(ValidationError):
            export_graph(self._two_node(), "turtle", io.StringIO())

    def test_dict_round_trip_preserves_threshold(self, mention_table):
        g = filter_graph(build_graph(mention_table), 1)
        assert graph_from_dict(graph_to_dict(g)).threshold == 1
