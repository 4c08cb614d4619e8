import pytest

from cnlwiki import grammar as g
from cnlwiki import semantics as s
from cnlwiki.errors import NotVerbalizableError, OutOfFragmentError
from cnlwiki.verbalizer import (
    verbalize_answer,
    verbalize_axiom,
    verbalize_hierarchy_edge,
    verbalize_membership,
)


def test_class_assertion(geo):
    lex, ids = geo
    rendered = verbalize_axiom(s.ClassAssertion(s.Atom(ids["country"]), ids["Switzerland"]), lex)
    assert rendered.text == "Switzerland is a country."


def test_subclass_with_vowel_article(geo):
    lex, ids = geo
    rendered = verbalize_axiom(s.SubClassOf(s.Atom(ids["city"]), s.Atom(ids["area"])), lex)
    assert rendered.text == "Every city is an area."


def test_complex_left_side_not_verbalizable(geo):
    lex, ids = geo
    axiom = s.SubClassOf(s.Exists(ids["borders"], s.Atom(ids["city"])), s.Atom(ids["area"]))
    with pytest.raises(NotVerbalizableError):
        verbalize_axiom(axiom, lex)


def test_property_assertions(geo):
    lex, ids = geo
    assert (
        verbalize_axiom(
            s.PropertyAssertion(ids["borders"], ids["Germany"], ids["Switzerland"]), lex
        ).text
        == "Germany borders Switzerland."
    )
    assert (
        verbalize_axiom(
            s.PropertyAssertion(ids["part"], ids["Switzerland"], ids["Europe"]), lex
        ).text
        == "Switzerland is a part of Europe."
    )
    assert (
        verbalize_axiom(
            s.PropertyAssertion(ids["located-in"], ids["Zurich"], ids["Europe"]), lex
        ).text
        == "Zurich is located-in Europe."
    )


def test_negative_class_assertion(geo):
    lex, ids = geo
    rendered = verbalize_axiom(
        s.ClassAssertion(s.Not(s.Atom(ids["city"])), ids["Switzerland"]), lex
    )
    assert rendered.text == "Switzerland is not a city."


def test_no_quantifier_form(geo):
    lex, ids = geo
    rendered = verbalize_axiom(
        s.SubClassOf(s.Atom(ids["city"]), s.Not(s.Atom(ids["country"]))), lex
    )
    assert rendered.text == "No city is a country."


def test_hierarchy_edge_and_membership(geo):
    lex, ids = geo
    assert verbalize_hierarchy_edge(ids["city"], ids["area"], lex).text == "Every city is an area."
    assert verbalize_membership(ids["Zurich"], ids["city"], lex).text == "Zurich is a city."
    with pytest.raises(ValueError):
        verbalize_hierarchy_edge(ids["country"], ids["country"], lex)


def test_answers_rendering_and_order(geo):
    lex, ids = geo
    sentences = verbalize_answer(
        s.ClassesOf(ids["Zurich"]), (ids["city"], ids["area"]), lex
    )
    assert [x.text for x in sentences] == ["Zurich is a city.", "Zurich is an area."]
    sentences = verbalize_answer(
        s.SubjectsSuchThat(ids["country"], s.RoleCondition(ids["borders"], ids["Switzerland"])),
        (ids["Germany"],),
        lex,
    )
    assert [x.text for x in sentences] == ["Germany borders Switzerland."]
    assert verbalize_answer(s.ClassesOf(ids["Zurich"]), (), lex) == []


def test_round_trip_tokens_parse_back(geo):
    lex, ids = geo
    axiom = s.ClassAssertion(
        s.And(s.Atom(ids["city"]), s.Exists(ids["borders"], s.Atom(ids["country"]))),
        ids["Zurich"],
    )
    rendered = verbalize_axiom(axiom, lex)
    assert rendered.text == "Zurich is a city that borders a country."
    form = s.translate(g.parse(list(rendered.tokens), lex))
    assert form == s.Axioms((axiom,))


def test_round_trip_over_enumerated_sentences(lex6):
    """Every axiom translate produces comes back unchanged through
    verbalize -> parse -> translate."""
    seen = 0
    for sentence in g.enumerate_sentences(lex6, 9):
        ast = g.parse(sentence, lex6)
        try:
            form = s.translate(ast)
        except OutOfFragmentError:
            continue
        if not isinstance(form, s.Axioms):
            continue
        for axiom in form.axioms:
            rendered = verbalize_axiom(axiom, lex6)
            back = s.translate(g.parse(list(rendered.tokens), lex6))
            assert back == s.Axioms((axiom,)), rendered.text
            seen += 1
    assert seen > 200


def test_deterministic_output(geo):
    lex, ids = geo
    axiom = s.SubClassOf(
        s.Atom(ids["country"]),
        s.And(s.Atom(ids["area"]), s.Exists(ids["part"], s.Atom(ids["continent"]))),
    )
    first = verbalize_axiom(axiom, lex)
    second = verbalize_axiom(axiom, lex)
    assert first == second
    assert first.text == "Every country is an area and is a part of a continent."
