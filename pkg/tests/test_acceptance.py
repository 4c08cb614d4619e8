"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

Budgets are asserted: prediction equivalence < 120 s, reasoner agreement
< 300 s, the end-to-end scenario < 10 s.
"""

import contextlib
import io
import os
import random
import time

import pytest

from cnlwiki import cli
from cnlwiki import grammar as g
from cnlwiki import semantics as s
from cnlwiki import wiki as w
from cnlwiki.errors import OutOfFragmentError
from cnlwiki.reasoner import check_model, exists_model, is_consistent
from cnlwiki.verbalizer import verbalize_axiom
from cnlwiki.wiki import SentenceStatus

from conftest import build_lexicon, LEX6_WORDS
from oracle_utils import (
    _search_order,
    oracle_completions,
    random_kb,
    token_alphabet,
)

FIXTURE = os.path.join(os.path.dirname(__file__), "fixtures", "geography.corpus")
MAX_LEN = 12


@contextlib.contextmanager
def criterion(name):
    start = time.time()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL ({time.time() - start:.1f}s)")
        raise
    print(f"ACCEPTANCE {name}: PASS ({time.time() - start:.1f}s)")


@pytest.fixture(scope="module")
def lex6_sentences():
    lexicon = build_lexicon(LEX6_WORDS)[0]
    return lexicon, list(g.enumerate_sentences(lexicon, MAX_LEN))


def test_prediction_oracle_equivalence(lex6_sentences):
    """complete() equals brute-force extendability on every prefix of every
    sentence up to 12 tokens over the six-word lexicon."""
    lexicon, sentences = lex6_sentences
    with criterion("prediction-oracle-equivalence"):
        start = time.time()
        trie: dict = {}
        for sentence in sentences:
            node = trie
            for token in sentence:
                node = node.setdefault(token, {})
        alphabet = token_alphabet(lexicon)
        order = _search_order(lexicon)
        predictor = g.Predictor(lexicon)
        checked = 0
        spot_check = random.Random(2024)

        def walk(node, prefix):
            nonlocal checked
            got = set(predictor.completion_tokens())
            expected = oracle_completions(
                prefix, lexicon, alphabet, children=node.keys(), order=order
            )
            assert got == expected, (
                f"disagreement after {g.render(prefix, lexicon)!r}: "
                f"engine-only={got - expected} oracle-only={expected - got}"
            )
            checked += 1
            if spot_check.random() < 0.01:
                assert g.complete(prefix, lexicon).tokens() == got
            for token, child in node.items():
                assert predictor.push(token)
                walk(child, prefix + [token])
                predictor.pop()

        walk(trie, [])
        elapsed = time.time() - start
        print(f"  {checked} prefixes over {len(sentences)} sentences in {elapsed:.1f}s")
        assert checked > 30_000
        assert elapsed < 120.0


def test_grammar_unambiguity(lex6_sentences):
    """Every enumerated sentence has exactly one derivation and one AST."""
    lexicon, sentences = lex6_sentences
    with criterion("grammar-unambiguity"):
        for sentence in sentences:
            ast = g.parse_checked(sentence, lexicon)  # AmbiguityError must not fire
            assert ast is not None
        print(f"  {len(sentences)} sentences, all unambiguous")


def test_reasoner_vs_oracle():
    """Tableau verdicts agree with direct model search on 1000 random KBs."""
    with criterion("reasoner-oracle-agreement"):
        start = time.time()
        rng = random.Random(20080902)
        consistent_count = 0
        for index in range(1000):
            kb = random_kb(rng)
            verdict, witness = is_consistent(kb)
            if verdict:
                consistent_count += 1
                assert check_model(witness, kb), f"bad witness for KB #{index}: {kb}"
            else:
                # emptiness of enumerate_models(kb, 4), decided by the
                # equivalent pruned-complete search
                assert exists_model(kb, 4) is None, f"oracle found a model for KB #{index}: {kb}"
        elapsed = time.time() - start
        print(f"  1000 KBs ({consistent_count} consistent) in {elapsed:.1f}s")
        assert elapsed < 300.0


def test_round_trip(lex6_sentences):
    """translate(parse(verbalize(a))) == [a] for every axiom the enumerated
    sentences produce."""
    lexicon, sentences = lex6_sentences
    with criterion("verbalizer-round-trip"):
        axioms = 0
        for sentence in sentences:
            try:
                form = s.translate(g.parse(sentence, lexicon))
            except OutOfFragmentError:
                continue
            if not isinstance(form, s.Axioms):
                continue
            for axiom in form.axioms:
                rendered = verbalize_axiom(axiom, lexicon)
                back = s.translate(g.parse(list(rendered.tokens), lexicon))
                assert back == s.Axioms((axiom,)), rendered.text
                axioms += 1
        print(f"  {axioms} axioms round-tripped")
        assert axioms > 1000


def test_end_to_end_geography_scenario(tmp_path):
    with criterion("end-to-end-geography"):
        start = time.time()
        store = str(tmp_path / "geo.json")
        out = io.StringIO()
        assert cli.import_corpus(store, FIXTURE, out=out) == 0
        state = w.load(store)
        by_text = {x.text: x.status for x in state.sentences.values()}
        assert by_text["If X borders Y then Y borders X."] is SentenceStatus.BEYOND_FRAGMENT
        assert by_text["Zurich is not a city."] is SentenceStatus.REJECTED_INCONSISTENT
        accepted = [t for t, status in by_text.items() if status is SentenceStatus.ACCEPTED]
        assert len(accepted) == 8

        answers = w.ask(state, g.tokenize("What is Zurich?", state.lexicon))
        assert [x.text for x in answers] == ["Zurich is a city.", "Zurich is an area."]
        answers = w.ask(
            state, g.tokenize("Which countries border Switzerland?", state.lexicon)
        )
        assert [x.text for x in answers] == ["Germany borders Switzerland."]

        from cnlwiki.reasoner import Reasoner

        hierarchy = Reasoner(w.current_kb(state)).classify()
        ids = {
            entry.base_surface: entry.entity_id for entry in state.lexicon.entries()
        }
        assert (ids["city"], ids["area"]) in hierarchy.edges
        assert (ids["country"], ids["area"]) in hierarchy.edges
        elapsed = time.time() - start
        print(f"  scenario in {elapsed:.2f}s")
        assert elapsed < 10.0


def test_persistence_round_trip_and_reproducible_report(tmp_path):
    with criterion("persistence-round-trip"):
        store1 = str(tmp_path / "one.json")
        out = io.StringIO()
        assert cli.import_corpus(store1, FIXTURE, out=out) == 0
        state = w.load(store1)
        resaved = str(tmp_path / "resaved.json")
        w.save(state, resaved)
        again = w.load(resaved)
        assert again.lexicon == state.lexicon
        assert again.sentences == state.sentences
        assert again.articles == state.articles
        assert again.next_sentence_id == state.next_sentence_id

        report1 = io.StringIO()
        cli.report(store1, out=report1)
        store2 = str(tmp_path / "two.json")
        assert cli.import_corpus(store2, FIXTURE, out=io.StringIO()) == 0
        report2 = io.StringIO()
        cli.report(store2, out=report2)
        assert report1.getvalue() == report2.getvalue()
        assert report1.getvalue().encode() == report2.getvalue().encode()
