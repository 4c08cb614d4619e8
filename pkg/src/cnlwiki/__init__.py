"""cnlwiki: a semantic wiki over a small controlled English.

Knowledge is entered as sentences of a predictive, menu-driven controlled
language, compiled to description-logic axioms, consistency-gated by a
built-in tableau reasoner, and every inference or query answer is rendered
back as a sentence of the same language.
"""

from .errors import CnlWikiError
from .grammar import (
    CompletionSet,
    ContentWord,
    FunctionWord,
    Terminator,
    Token,
    Variable,
    complete,
    enumerate_sentences,
    parse,
    render,
    tokenize,
)
from .lexicon import Lexicon, LexiconEntry, WordCategory
from .reasoner import (
    KnowledgeBase,
    Model,
    Reasoner,
    check_model,
    classify,
    entails,
    enumerate_models,
    exists_model,
    instances_of,
    is_consistent,
)
from .semantics import entities_of, nnf, translate
from .verbalizer import (
    RenderedSentence,
    verbalize_answer,
    verbalize_axiom,
    verbalize_hierarchy_edge,
    verbalize_membership,
)
from .wiki import SentenceStatus, Wiki, WikiState, empty_state, load, save

__all__ = [
    "CnlWikiError",
    "CompletionSet",
    "ContentWord",
    "FunctionWord",
    "KnowledgeBase",
    "Lexicon",
    "LexiconEntry",
    "Model",
    "Reasoner",
    "RenderedSentence",
    "SentenceStatus",
    "Terminator",
    "Token",
    "Variable",
    "Wiki",
    "WikiState",
    "WordCategory",
    "check_model",
    "classify",
    "complete",
    "empty_state",
    "entails",
    "entities_of",
    "enumerate_models",
    "enumerate_sentences",
    "exists_model",
    "instances_of",
    "is_consistent",
    "load",
    "nnf",
    "parse",
    "render",
    "save",
    "tokenize",
    "translate",
    "verbalize_answer",
    "verbalize_axiom",
    "verbalize_hierarchy_edge",
    "verbalize_membership",
]

__version__ = "0.1.0"
