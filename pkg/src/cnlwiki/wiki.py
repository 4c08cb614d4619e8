"""Articles, the sentence submission pipeline, views, and persistence.

State is an immutable snapshot; every mutating operation returns a new
state.  The ``Wiki`` wrapper serializes mutations behind one lock (single
writer), persists each change atomically, and serves readers from whatever
snapshot is current.

Pipeline for a submitted sentence: parse, translate, then gate.  Questions
and beyond-fragment rules are stored without touching the knowledge base;
axiom sentences are accepted only if the grown knowledge base stays
consistent, otherwise they are stored as rejected (displayed, never
reasoned with).  Rejected sentences stay rejected until an explicit
recheck.  A sentence is cross-listed on the article of every entity its
logic form mentions.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import time
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

from . import grammar as g
from . import reasoner as r
from . import semantics as s
from . import verbalizer as v
from .errors import (
    CnlWikiError,
    FormatError,
    HomeEntityNotMentionedError,
    IoError,
    NotAQuestionError,
    NotRejectedError,
    UnknownEntityError,
    UnknownSentenceError,
)
from .lexicon import FORM_SLOTS, Lexicon, LexiconEntry, WordCategory

FORMAT_VERSION = 1


class SentenceStatus(Enum):
    ACCEPTED = "Accepted"
    BEYOND_FRAGMENT = "BeyondFragment"
    REJECTED_INCONSISTENT = "RejectedInconsistent"
    QUESTION = "QuestionSentence"


@dataclass(frozen=True)
class WikiSentence:
    id: str
    home_entity: str
    tokens: tuple[g.Token, ...]
    text: str
    logic: s.LogicForm
    status: SentenceStatus
    created_at: float


@dataclass(frozen=True)
class Article:
    entity_id: str
    sentence_ids: tuple[str, ...]


@dataclass(frozen=True)
class WikiState:
    lexicon: Lexicon
    sentences: dict[str, WikiSentence]
    articles: dict[str, Article]
    kb_version: int
    next_sentence_id: int


@dataclass(frozen=True)
class EntityViews:
    entity_id: str
    asserted: tuple[WikiSentence, ...]
    inferred_memberships: tuple[v.RenderedSentence, ...]
    inferred_superclasses: tuple[v.RenderedSentence, ...]
    inferred_subclasses: tuple[v.RenderedSentence, ...]
    inferred_instances: tuple[v.RenderedSentence, ...]


def empty_state() -> WikiState:
    return WikiState(Lexicon(), {}, {}, 0, 1)


# ---------------------------------------------------------------------------
# Token wire/persistence form


def token_to_ref(token: g.Token) -> dict:
    if isinstance(token, g.FunctionWord):
        return {"fw": token.word}
    if isinstance(token, g.ContentWord):
        return {"cw": token.entity_id, "slot": token.slot}
    if isinstance(token, g.Variable):
        return {"var": token.letter}
    return {"term": token.mark}


def ref_to_token(ref: dict) -> g.Token:
    try:
        if "fw" in ref:
            return g.FunctionWord(str(ref["fw"]))
        if "cw" in ref:
            return g.ContentWord(str(ref["cw"]), str(ref["slot"]))
        if "var" in ref:
            return g.Variable(str(ref["var"]))
        if "term" in ref:
            return g.Terminator(str(ref["term"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed token reference {ref!r}") from exc
    raise FormatError(f"unrecognized token reference {ref!r}")


def validate_tokens(tokens, lexicon: Lexicon) -> None:
    """Every content word must resolve to an existing entity and slot."""
    for token in tokens:
        if isinstance(token, g.ContentWord):
            entry = lexicon.entry(token.entity_id)  # raises UnknownEntity
            if token.slot not in dict(entry.forms):
                raise UnknownEntityError(
                    f"entity {token.entity_id} has no form slot {token.slot!r}"
                )


# ---------------------------------------------------------------------------
# Pure state transitions


def add_word(
    state: WikiState, category: WordCategory, forms
) -> tuple[WikiState, LexiconEntry]:
    lexicon, entry = state.lexicon.add_word(category, forms)
    articles = dict(state.articles)
    articles[entry.entity_id] = Article(entry.entity_id, ())
    new_state = replace(
        state, lexicon=lexicon, articles=articles, kb_version=state.kb_version + 1
    )
    return new_state, entry


def remove_word(state: WikiState, entity_id: str) -> WikiState:
    state.lexicon.entry(entity_id)  # raises UnknownEntity first
    used = {
        token.entity_id
        for sentence in state.sentences.values()
        for token in sentence.tokens
        if isinstance(token, g.ContentWord)
    }
    state.lexicon.ensure_unused(entity_id, used)
    articles = dict(state.articles)
    articles.pop(entity_id, None)
    return replace(
        state,
        lexicon=state.lexicon.remove_word(entity_id),
        articles=articles,
        kb_version=state.kb_version + 1,
    )


def current_kb(state: WikiState) -> r.KnowledgeBase:
    axioms: list[s.Axiom] = []
    for sentence in state.sentences.values():
        if sentence.status is SentenceStatus.ACCEPTED:
            assert isinstance(sentence.logic, s.Axioms)
            axioms.extend(sentence.logic.axioms)
    return r.KnowledgeBase.from_axioms(axioms)


def _cross_list(articles: dict[str, Article], entities, sentence_id: str) -> dict[str, Article]:
    out = dict(articles)
    for entity in sorted(entities, key=lambda e: int(e)):
        article = out[entity]
        out[entity] = Article(entity, article.sentence_ids + (sentence_id,))
    return out


def submit_sentence(
    state: WikiState,
    home_entity: str,
    tokens,
    now: Optional[float] = None,
    node_budget: int = r.DEFAULT_NODE_BUDGET,
) -> tuple[WikiState, WikiSentence]:
    state.lexicon.entry(home_entity)
    tokens = tuple(tokens)
    validate_tokens(tokens, state.lexicon)
    ast = g.parse(tokens, state.lexicon)
    logic = s.translate(ast)  # OutOfFragment propagates; sentence not stored
    entities = s.entities_of(logic)
    if home_entity not in entities:
        raise HomeEntityNotMentionedError(
            f"entity {home_entity} is not mentioned by the sentence"
        )
    kb_version = state.kb_version
    if isinstance(logic, s.QuestionForm):
        status = SentenceStatus.QUESTION
    elif isinstance(logic, s.BeyondFragment):
        status = SentenceStatus.BEYOND_FRAGMENT
    else:
        grown = current_kb(state).with_axioms(logic.axioms)
        if r.is_consistent(grown, node_budget)[0]:
            status = SentenceStatus.ACCEPTED
            kb_version += 1
        else:
            status = SentenceStatus.REJECTED_INCONSISTENT
    sentence = WikiSentence(
        id=str(state.next_sentence_id),
        home_entity=home_entity,
        tokens=tokens,
        text=g.render(tokens, state.lexicon),
        logic=logic,
        status=status,
        created_at=time.time() if now is None else now,
    )
    sentences = dict(state.sentences)
    sentences[sentence.id] = sentence
    new_state = replace(
        state,
        sentences=sentences,
        articles=_cross_list(state.articles, entities, sentence.id),
        kb_version=kb_version,
        next_sentence_id=state.next_sentence_id + 1,
    )
    return new_state, sentence


def retract_sentence(state: WikiState, sentence_id: str) -> WikiState:
    if sentence_id not in state.sentences:
        raise UnknownSentenceError(f"no sentence {sentence_id!r}")
    was_accepted = state.sentences[sentence_id].status is SentenceStatus.ACCEPTED
    sentences = dict(state.sentences)
    del sentences[sentence_id]
    articles = {
        entity: Article(
            entity, tuple(i for i in article.sentence_ids if i != sentence_id)
        )
        for entity, article in state.articles.items()
    }
    return replace(
        state,
        sentences=sentences,
        articles=articles,
        kb_version=state.kb_version + 1 if was_accepted else state.kb_version,
    )


def recheck_sentence(
    state: WikiState, sentence_id: str, node_budget: int = r.DEFAULT_NODE_BUDGET
) -> tuple[WikiState, WikiSentence]:
    if sentence_id not in state.sentences:
        raise UnknownSentenceError(f"no sentence {sentence_id!r}")
    sentence = state.sentences[sentence_id]
    if sentence.status is not SentenceStatus.REJECTED_INCONSISTENT:
        raise NotRejectedError(f"sentence {sentence_id} is {sentence.status.value}")
    assert isinstance(sentence.logic, s.Axioms)
    grown = current_kb(state).with_axioms(sentence.logic.axioms)
    if not r.is_consistent(grown, node_budget)[0]:
        return state, sentence
    flipped = replace(sentence, status=SentenceStatus.ACCEPTED)
    sentences = dict(state.sentences)
    sentences[sentence_id] = flipped
    return replace(state, sentences=sentences, kb_version=state.kb_version + 1), flipped


def _asserted_atom_classes(kb: r.KnowledgeBase, individual: str) -> set[str]:
    return {
        ca.cls.entity_id
        for ca in kb.abox_c
        if ca.individual == individual and isinstance(ca.cls, s.Atom)
    }


def views(
    state: WikiState, entity_id: str, reasoner: Optional[r.Reasoner] = None
) -> EntityViews:
    entry = state.lexicon.entry(entity_id)
    if reasoner is None:
        reasoner = r.Reasoner(current_kb(state))
    article = state.articles.get(entity_id, Article(entity_id, ()))
    asserted = tuple(state.sentences[i] for i in article.sentence_ids)
    lexicon = state.lexicon
    memberships: tuple[v.RenderedSentence, ...] = ()
    superclasses: tuple[v.RenderedSentence, ...] = ()
    subclasses: tuple[v.RenderedSentence, ...] = ()
    instances: tuple[v.RenderedSentence, ...] = ()
    classes, _, _ = reasoner.kb.signature
    if entry.category is WordCategory.PROPER_NAME:
        entailed = reasoner.answer(s.ClassesOf(entity_id))
        direct = _asserted_atom_classes(reasoner.kb, entity_id)
        memberships = tuple(
            sorted(
                (
                    v.verbalize_membership(entity_id, cls, lexicon)
                    for cls in entailed
                    if cls not in direct
                ),
                key=lambda x: x.text,
            )
        )
    elif entry.category is WordCategory.NOUN:
        supers = [
            c
            for c in classes
            if c != entity_id
            and reasoner.entails(s.SubClassOf(s.Atom(entity_id), s.Atom(c)))
        ]
        subs = [
            c
            for c in classes
            if c != entity_id
            and reasoner.entails(s.SubClassOf(s.Atom(c), s.Atom(entity_id)))
        ]
        superclasses = tuple(
            sorted(
                (v.verbalize_hierarchy_edge(entity_id, c, lexicon) for c in supers),
                key=lambda x: x.text,
            )
        )
        subclasses = tuple(
            sorted(
                (v.verbalize_hierarchy_edge(c, entity_id, lexicon) for c in subs),
                key=lambda x: x.text,
            )
        )
        instances = tuple(
            sorted(
                (
                    v.verbalize_membership(ind, entity_id, lexicon)
                    for ind in reasoner.instances_of(s.Atom(entity_id))
                ),
                key=lambda x: x.text,
            )
        )
    return EntityViews(entity_id, asserted, memberships, superclasses, subclasses, instances)


def ask(
    state: WikiState, tokens, reasoner: Optional[r.Reasoner] = None
) -> list[v.RenderedSentence]:
    tokens = tuple(tokens)
    validate_tokens(tokens, state.lexicon)
    ast = g.parse(tokens, state.lexicon)
    if not isinstance(ast, g.Question):
        raise NotAQuestionError("only questions can be asked")
    logic = s.translate(ast)
    assert isinstance(logic, s.QuestionForm)
    if reasoner is None:
        reasoner = r.Reasoner(current_kb(state))
    answers = reasoner.answer(logic.query)
    return v.verbalize_answer(logic.query, answers, state.lexicon)


# ---------------------------------------------------------------------------
# Persistence


def _state_to_doc(state: WikiState) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "next_entity_id": state.lexicon.next_id,
        "next_sentence_id": state.next_sentence_id,
        "kb_version": state.kb_version,
        "lexicon": [
            {
                "entity_id": e.entity_id,
                "category": e.category.value,
                "forms": dict(e.forms),
            }
            for e in state.lexicon.entries()
        ],
        "sentences": [
            {
                "id": ws.id,
                "home_entity": ws.home_entity,
                "status": ws.status.value,
                "created_at": ws.created_at,
                "tokens": [token_to_ref(t) for t in ws.tokens],
                "text": ws.text,
            }
            for ws in sorted(state.sentences.values(), key=lambda w: int(w.id))
        ],
        "articles": [
            {"entity_id": a.entity_id, "sentence_ids": list(a.sentence_ids)}
            for a in sorted(state.articles.values(), key=lambda a: int(a.entity_id))
        ],
    }


def save(state: WikiState, path: str) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    doc = _state_to_doc(state)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".cnlwiki-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(doc, handle, ensure_ascii=False, indent=1)
                handle.write("\n")
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load(path: str) -> WikiState:
    """Rebuild a state; logic forms are re-derived by re-running translation."""
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"corrupt store file {path}: {exc}") from exc
    try:
        if doc["format_version"] != FORMAT_VERSION:
            raise FormatError(f"unsupported format version {doc['format_version']!r}")
        entries = [
            LexiconEntry(
                str(item["entity_id"]),
                WordCategory(item["category"]),
                tuple(
                    (slot, item["forms"][slot])
                    for slot in FORM_SLOTS[WordCategory(item["category"])]
                ),
            )
            for item in doc["lexicon"]
        ]
        lexicon = Lexicon(entries, int(doc["next_entity_id"]))
        sentences: dict[str, WikiSentence] = {}
        for item in doc["sentences"]:
            tokens = tuple(ref_to_token(ref) for ref in item["tokens"])
            validate_tokens(tokens, lexicon)
            ast = g.parse(tokens, lexicon)
            logic = s.translate(ast)
            sentences[str(item["id"])] = WikiSentence(
                id=str(item["id"]),
                home_entity=str(item["home_entity"]),
                tokens=tokens,
                text=g.render(tokens, lexicon),
                logic=logic,
                status=SentenceStatus(item["status"]),
                created_at=float(item["created_at"]),
            )
        articles = {
            str(item["entity_id"]): Article(
                str(item["entity_id"]), tuple(str(i) for i in item["sentence_ids"])
            )
            for item in doc["articles"]
        }
        return WikiState(
            lexicon=lexicon,
            sentences=sentences,
            articles=articles,
            kb_version=int(doc.get("kb_version", 0)),
            next_sentence_id=int(doc["next_sentence_id"]),
        )
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, CnlWikiError) as exc:
        raise FormatError(f"corrupt store file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Thread-safe single-writer facade


class Wiki:
    """Single-writer wrapper: mutations are serialized and persisted;
    readers use immutable snapshots and a per-KB-version reasoner cache."""

    def __init__(
        self,
        state: Optional[WikiState] = None,
        store_path: Optional[str] = None,
        node_budget: int = r.DEFAULT_NODE_BUDGET,
        clock: Callable[[], float] = time.time,
    ):
        self._lock = threading.RLock()
        self.store_path = store_path
        self.node_budget = node_budget
        self.clock = clock
        if state is None and store_path and os.path.exists(store_path):
            state = load(store_path)
        self.state = state if state is not None else empty_state()
        self._reasoners: dict[int, r.Reasoner] = {}

    # -- reads ------------------------------------------------------------

    def snapshot(self) -> WikiState:
        return self.state

    def reasoner(self, state: Optional[WikiState] = None) -> r.Reasoner:
        state = state or self.state
        cached = self._reasoners.get(state.kb_version)
        if cached is None:
            cached = r.Reasoner(current_kb(state), self.node_budget)
            self._reasoners = {state.kb_version: cached}
        return cached

    def views(self, entity_id: str) -> EntityViews:
        state = self.state
        return views(state, entity_id, self.reasoner(state))

    def ask(self, tokens) -> list[v.RenderedSentence]:
        state = self.state
        return ask(state, tokens, self.reasoner(state))

    def complete(self, prefix) -> g.CompletionSet:
        state = self.state
        validate_tokens(prefix, state.lexicon)
        return g.complete(list(prefix), state.lexicon)

    def hierarchy(self) -> r.Hierarchy:
        return self.reasoner().classify()

    # -- mutations ---------------------------------------------------------

    def _commit(self, state: WikiState) -> None:
        if self.store_path:
            save(state, self.store_path)
        self.state = state

    def add_word(self, category: WordCategory, forms) -> LexiconEntry:
        with self._lock:
            state, entry = add_word(self.state, category, forms)
            self._commit(state)
            return entry

    def remove_word(self, entity_id: str) -> None:
        with self._lock:
            self._commit(remove_word(self.state, entity_id))

    def submit_sentence(self, home_entity: str, tokens) -> WikiSentence:
        with self._lock:
            state, sentence = submit_sentence(
                self.state, home_entity, tokens, now=self.clock(), node_budget=self.node_budget
            )
            self._commit(state)
            return sentence

    def retract_sentence(self, sentence_id: str) -> None:
        with self._lock:
            self._commit(retract_sentence(self.state, sentence_id))

    def recheck_sentence(self, sentence_id: str) -> WikiSentence:
        with self._lock:
            state, sentence = recheck_sentence(
                self.state, sentence_id, node_budget=self.node_budget
            )
            self._commit(state)
            return sentence
