import json
from pathlib import Path

import pytest

from animaltales import parse_corpus
from animaltales.pipeline import load_lexicon_with_tables

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def manifest() -> dict:
    with open(DATA_DIR / "fixture_manifest.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fixture_text() -> str:
    return (DATA_DIR / "fixture_corpus.atu").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def corpus(fixture_text):
    return parse_corpus(fixture_text)


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon_with_tables(
        str(DATA_DIR / "lexicon.tsv"),
        alias_path=str(DATA_DIR / "aliases.tsv"),
        exclusions_path=str(DATA_DIR / "exclusions.txt"),
        rollup_targets_path=str(DATA_DIR / "rollup_targets.txt"),
        min_count=5,
    )


@pytest.fixture(scope="session")
def mention_table(corpus, lexicon):
    from animaltales import extract_mentions

    return extract_mentions(corpus, lexicon)
