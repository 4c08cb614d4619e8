import pytest

from cnlwiki.lexicon import Lexicon, WordCategory as W


def build_lexicon(words):
    lex = Lexicon()
    entries = {}
    for category, forms in words:
        lex, entry = lex.add_word(category, forms)
        entries[entry.base_surface] = entry
    return lex, entries


#: Prediction-oracle lexicon: six words, one per category plus a second noun.
LEX6_WORDS = [
    (W.PROPER_NAME, {"base": "Zurich"}),
    (W.NOUN, {"singular": "city", "plural": "cities"}),
    (W.NOUN, {"singular": "area", "plural": "areas"}),
    (W.TRANSITIVE_VERB, {"third_sg": "borders", "bare": "border"}),
    (W.OF_CONSTRUCT, {"base": "part"}),
    (W.TRANSITIVE_ADJECTIVE, {"base": "located-in"}),
]

#: End-to-end geography lexicon.
GEO_WORDS = [
    (W.PROPER_NAME, {"base": "Zurich"}),
    (W.PROPER_NAME, {"base": "Switzerland"}),
    (W.PROPER_NAME, {"base": "Europe"}),
    (W.PROPER_NAME, {"base": "Germany"}),
    (W.NOUN, {"singular": "city", "plural": "cities"}),
    (W.NOUN, {"singular": "country", "plural": "countries"}),
    (W.NOUN, {"singular": "area", "plural": "areas"}),
    (W.NOUN, {"singular": "continent", "plural": "continents"}),
    (W.TRANSITIVE_VERB, {"third_sg": "borders", "bare": "border"}),
    (W.OF_CONSTRUCT, {"base": "part"}),
    (W.TRANSITIVE_ADJECTIVE, {"base": "located-in"}),
]

GEO_SENTENCES = [
    ("Zurich", "Zurich is a city."),
    ("city", "Every city is an area."),
    ("Switzerland", "Switzerland is a country."),
    ("Germany", "Germany is a country."),
    ("country", "Every country is an area."),
    ("Germany", "Germany borders Switzerland."),
    ("Switzerland", "Switzerland is a part of Europe."),
    ("Europe", "Europe is a continent."),
    ("borders", "If X borders Y then Y borders X."),
    ("Zurich", "Zurich is not a city."),
]


@pytest.fixture(scope="session")
def lex6():
    return build_lexicon(LEX6_WORDS)[0]


@pytest.fixture(scope="session")
def geo():
    lex, entries = build_lexicon(GEO_WORDS)
    return lex, {surface: e.entity_id for surface, e in entries.items()}


@pytest.fixture()
def geo_lex(geo):
    return geo[0]
