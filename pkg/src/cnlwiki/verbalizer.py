"""Rendering axioms, inferred facts, and query answers back into sentences.

Verbalization is the inverse of translation on translation's canonical
image: conjunctions render as "and"-chains where every conjunct stands
alone as a verb phrase, as a "that" relative clause where the axiom is a
single class assertion over noun-plus-condition, and as "No ..." when a
subclass axiom's right side is one big negation.  Axioms outside that image
(complex left sides, disjunctive assertions, anything needing a nominal)
raise NotVerbalizableError.

Output is deterministic: same axiom, same tokens, byte-identical text.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import grammar as g
from .errors import NotVerbalizableError
from .lexicon import Lexicon, WordCategory
from .semantics import (
    And,
    Atom,
    Axiom,
    ClassAssertion,
    ClassesOf,
    ClassCondition,
    ClassExpr,
    Exists,
    Not,
    Or,
    PropertyAssertion,
    Query,
    SubClassOf,
)


@dataclass(frozen=True)
class RenderedSentence:
    tokens: tuple[g.Token, ...]
    text: str


def _article_for(surface: str) -> g.FunctionWord:
    return g.FunctionWord("an" if surface[:1].lower() in "aeiou" else "a")


class _Verbalizer:
    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon

    def _entry(self, entity_id: str, category: WordCategory, slot: str) -> g.ContentWord:
        entry = self.lexicon.entry(entity_id)
        if entry.category is not category:
            raise NotVerbalizableError(
                f"entity {entity_id} is a {entry.category.value}, expected {category.value}"
            )
        return g.ContentWord(entity_id, slot)

    def _noun_phrase(self, noun_id: str) -> list[g.Token]:
        """Article plus singular noun."""
        noun = self._entry(noun_id, WordCategory.NOUN, "singular")
        return [_article_for(self.lexicon.entry(noun_id).form("singular")), noun]

    def np(self, expr: ClassExpr) -> tuple[list[g.Token], bool]:
        """Indefinite object: "a noun" or "a noun that <vp>"."""
        if isinstance(expr, Atom):
            return self._noun_phrase(expr.entity_id), False
        if isinstance(expr, And) and isinstance(expr.left, Atom):
            rest, _ = self.vp(expr.right)
            return self._noun_phrase(expr.left.entity_id) + [g.FunctionWord("that")] + rest, True
        raise NotVerbalizableError("object is not a noun or noun-with-relative-clause")

    def relation_phrase(self, relation_id: str, obj: list[g.Token]) -> list[g.Token]:
        entry = self.lexicon.entry(relation_id)
        if entry.category is WordCategory.TRANSITIVE_VERB:
            return [g.ContentWord(relation_id, "third_sg")] + obj
        if entry.category is WordCategory.OF_CONSTRUCT:
            return [
                g.FunctionWord("is"),
                _article_for(entry.form("base")),
                g.ContentWord(relation_id, "base"),
                g.FunctionWord("of"),
            ] + obj
        if entry.category is WordCategory.TRANSITIVE_ADJECTIVE:
            return [g.FunctionWord("is"), g.ContentWord(relation_id, "base")] + obj
        raise NotVerbalizableError(f"entity {relation_id} is not a relation word")

    def v1(self, expr: ClassExpr) -> tuple[list[g.Token], bool]:
        """One verb phrase; returns (tokens, ends-with-relative-clause)."""
        if isinstance(expr, Atom):
            return [g.FunctionWord("is")] + self._noun_phrase(expr.entity_id), False
        if isinstance(expr, And) and isinstance(expr.left, Atom):
            rest, _ = self.vp(expr.right)
            tokens = (
                [g.FunctionWord("is")]
                + self._noun_phrase(expr.left.entity_id)
                + [g.FunctionWord("that")]
                + rest
            )
            return tokens, True
        if isinstance(expr, Not):
            inner = expr.arg
            if isinstance(inner, Atom):
                tokens = [g.FunctionWord("is"), g.FunctionWord("not")] + self._noun_phrase(
                    inner.entity_id
                )
                return tokens, False
            if isinstance(inner, And) and isinstance(inner.left, Atom):
                rest, _ = self.vp(inner.right)
                tokens = (
                    [g.FunctionWord("is"), g.FunctionWord("not")]
                    + self._noun_phrase(inner.left.entity_id)
                    + [g.FunctionWord("that")]
                    + rest
                )
                return tokens, True
            if isinstance(inner, Exists):
                entry = self.lexicon.entry(inner.relation)
                if entry.category is not WordCategory.TRANSITIVE_VERB:
                    # "is not a part of ..." has no grammar form
                    raise NotVerbalizableError("negation is only expressible for nouns and verbs")
                obj, open_ = self.np(inner.arg)
                tokens = [
                    g.FunctionWord("does"),
                    g.FunctionWord("not"),
                    g.ContentWord(inner.relation, "bare"),
                ] + obj
                return tokens, open_
            raise NotVerbalizableError("negation too complex to verbalize")
        if isinstance(expr, Exists):
            obj, open_ = self.np(expr.arg)
            return self.relation_phrase(expr.relation, obj), open_
        raise NotVerbalizableError("class expression outside the verbalizable image")

    def vp(self, expr: ClassExpr) -> tuple[list[g.Token], bool]:
        """A coordination chain (or a single verb phrase)."""
        if isinstance(expr, (And, Or)):
            kind = And if isinstance(expr, And) else Or
            joiner = g.FunctionWord("and" if kind is And else "or")
            spine: list[ClassExpr] = []
            node: ClassExpr = expr
            while isinstance(node, kind):
                spine.append(node.left)
                node = node.right
            spine.append(node)
            if isinstance(expr, And) and isinstance(expr.left, Atom):
                # noun head: prefer the relative-clause reading only when the
                # chain reading is impossible (an Or element cannot stand in
                # an "and" chain)
                if any(isinstance(e, Or) for e in spine):
                    return self.v1(expr)
            rendered = [self.v1(element) for element in spine]
            for tokens, open_ in rendered[:-1]:
                if open_:
                    raise NotVerbalizableError(
                        "relative clause would capture the following coordinator"
                    )
            out: list[g.Token] = []
            for index, (tokens, _) in enumerate(rendered):
                if index:
                    out.append(joiner)
                out.extend(tokens)
            return out, rendered[-1][1]
        return self.v1(expr)

    def proper_name(self, individual: str) -> g.ContentWord:
        return self._entry(individual, WordCategory.PROPER_NAME, "base")

    def axiom(self, axiom: Axiom) -> list[g.Token]:
        if isinstance(axiom, SubClassOf):
            if not isinstance(axiom.sub, Atom):
                raise NotVerbalizableError("complex left side of a subclass axiom")
            subject = self._entry(axiom.sub.entity_id, WordCategory.NOUN, "singular")
            if isinstance(axiom.sup, Not):
                body, _ = self.vp(axiom.sup.arg)
                return [g.FunctionWord("no"), subject] + body + [g.Terminator(".")]
            body, _ = self.vp(axiom.sup)
            return [g.FunctionWord("every"), subject] + body + [g.Terminator(".")]
        if isinstance(axiom, ClassAssertion):
            subject_token = self.proper_name(axiom.individual)
            body, _ = self.v1(axiom.cls)
            return [subject_token] + body + [g.Terminator(".")]
        rel = self.relation_phrase(axiom.relation, [self.proper_name(axiom.object)])
        return [self.proper_name(axiom.subject)] + rel + [g.Terminator(".")]


def verbalize_axiom(axiom: Axiom, lexicon: Lexicon) -> RenderedSentence:
    """The canonical sentence for an axiom in translation's image."""
    tokens = tuple(_Verbalizer(lexicon).axiom(axiom))
    return RenderedSentence(tokens, g.render(tokens, lexicon))


def verbalize_membership(individual: str, noun: str, lexicon: Lexicon) -> RenderedSentence:
    return verbalize_axiom(ClassAssertion(Atom(noun), individual), lexicon)


def verbalize_hierarchy_edge(sub: str, sup: str, lexicon: Lexicon) -> RenderedSentence:
    if sub == sup:
        raise ValueError("hierarchy views never contain reflexive edges")
    return verbalize_axiom(SubClassOf(Atom(sub), Atom(sup)), lexicon)


def verbalize_answer(query: Query, answers, lexicon: Lexicon) -> list[RenderedSentence]:
    """One sentence per answer, sorted by rendered text."""
    rendered: list[RenderedSentence] = []
    if isinstance(query, ClassesOf):
        for cls in answers:
            rendered.append(verbalize_membership(query.individual, cls, lexicon))
    else:
        for individual in answers:
            condition = query.condition
            if isinstance(condition, ClassCondition):
                rendered.append(
                    verbalize_axiom(ClassAssertion(condition.expr, individual), lexicon)
                )
            else:
                rendered.append(
                    verbalize_axiom(
                        PropertyAssertion(condition.relation, individual, condition.target),
                        lexicon,
                    )
                )
    return sorted(rendered, key=lambda s: s.text)
