"""The controlled language: tokens, parsing, prediction, and generation.

The language is a fixed context-free grammar over function words plus the
lexicon's categories.  Sentences come in four shapes: quantified statements
("Every city is an area."), instance statements ("Zurich is a city."),
variable rules ("If X borders Y then Y borders X."), and questions
("Which countries border Switzerland ?").

Two independent mechanisms implement it:

* ``parse`` is a deterministic recursive-descent parser with exact error
  positions; it is the ground truth for language membership.
* ``complete`` predicts the exact set of next tokens for a prefix using an
  Earley chart over an explicit production table; the test suite checks it
  against a brute-force extendability oracle built on ``parse``.

Coordination is right-associated, single-kind per chain, and binds to the
innermost verb phrase: after a verb phrase that ends with a "that" relative
clause, a following "and"/"or" always belongs to the relative clause's own
chain, so the outer chain cannot continue past it.  This rule is what makes
the grammar unambiguous.

Token positions in errors are 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import (
    AmbiguityError,
    CnlSyntaxError,
    DeadPrefixError,
    UnknownWordError,
)
from .lexicon import (
    FUNCTION_WORDS,
    VARIABLE_LETTERS,
    Lexicon,
    WordCategory,
)

# ---------------------------------------------------------------------------
# Tokens


@dataclass(frozen=True)
class FunctionWord:
    word: str


@dataclass(frozen=True)
class ContentWord:
    entity_id: str
    slot: str


@dataclass(frozen=True)
class Variable:
    letter: str


@dataclass(frozen=True)
class Terminator:
    mark: str


Token = Union[FunctionWord, ContentWord, Variable, Terminator]


def token_text(token: Token, lexicon: Lexicon, sentence_initial: bool = False) -> str:
    """Display form of a token; function words capitalize sentence-initially."""
    if isinstance(token, FunctionWord):
        return token.word[:1].upper() + token.word[1:] if sentence_initial else token.word
    if isinstance(token, ContentWord):
        return lexicon.entry(token.entity_id).form(token.slot)
    if isinstance(token, Variable):
        return token.letter
    return token.mark


def render(tokens, lexicon: Lexicon) -> str:
    """Tokens to display text: spaces between words, terminator attached."""
    parts: list[str] = []
    for i, tok in enumerate(tokens):
        text = token_text(tok, lexicon, sentence_initial=(i == 0))
        if isinstance(tok, Terminator) and parts:
            parts[-1] += text
        else:
            parts.append(text)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Sentence ASTs


@dataclass(frozen=True)
class Named:
    entity_id: str


@dataclass(frozen=True)
class Indef:
    entity_id: str
    rel: Optional["VP"] = None  # the "that ..." relative clause, if any


NP = Union[Named, Indef]


@dataclass(frozen=True)
class IsA:
    np: Indef


@dataclass(frozen=True)
class IsNotA:
    np: Indef


@dataclass(frozen=True)
class Verb:
    verb: str
    np: NP


@dataclass(frozen=True)
class DoesNotVerb:
    verb: str
    np: NP


@dataclass(frozen=True)
class IsOf:
    of: str
    np: NP


@dataclass(frozen=True)
class IsAdj:
    adj: str
    np: NP


@dataclass(frozen=True)
class AndVP:
    left: "VP"
    right: "VP"


@dataclass(frozen=True)
class OrVP:
    left: "VP"
    right: "VP"


VP = Union[IsA, IsNotA, Verb, DoesNotVerb, IsOf, IsAdj, AndVP, OrVP]


@dataclass(frozen=True)
class VarClass:
    var: str
    noun: str


@dataclass(frozen=True)
class VarRole:
    subject_var: str
    relation: str
    object_var: str


RuleAtom = Union[VarClass, VarRole]


@dataclass(frozen=True)
class QuantStatement:
    quantifier: str  # "every" | "no"
    subject: str  # noun entity
    vp: VP


@dataclass(frozen=True)
class InstStatement:
    subject: str  # proper-name entity
    vp: VP


@dataclass(frozen=True)
class RuleStatement:
    body: tuple[RuleAtom, ...]
    head: RuleAtom


@dataclass(frozen=True)
class WhatIs:
    individual: str


@dataclass(frozen=True)
class WhatVP:
    vp: VP


@dataclass(frozen=True)
class WhichNVP:
    noun: str
    vp: VP


@dataclass(frozen=True)
class Question:
    form: Union[WhatIs, WhatVP, WhichNVP]


SentenceAST = Union[QuantStatement, InstStatement, RuleStatement, Question]


# ---------------------------------------------------------------------------
# Production table (used by the Earley predictor, the derivation counter,
# and the sentence generator; the recursive-descent parser is a second,
# independent encoding of the same grammar)


@dataclass(frozen=True)
class _Lit:
    word: str


@dataclass(frozen=True)
class _Cat:
    kind: str  # noun_sg noun_pl pn v3 vb of adj var dot qmark


_TSym = Union[_Lit, _Cat]
_Sym = Union[str, _TSym]

_DOT = _Cat("dot")
_QMARK = _Cat("qmark")

# V1C: verb phrase that cannot absorb a following coordinator (no trailing
# relative clause); V1O: one that would ("open").  An open phrase may only
# end a chain.
_PRODUCTIONS: list[tuple[str, tuple[_Sym, ...]]] = [
    ("_start", ("S",)),
    ("S", ("QUANT",)),
    ("S", ("INST",)),
    ("S", ("RULE",)),
    ("S", ("QUES",)),
    ("QUANT", (_Lit("every"), _Cat("noun_sg"), "VP", _DOT)),
    ("QUANT", (_Lit("no"), _Cat("noun_sg"), "VP", _DOT)),
    ("INST", (_Cat("pn"), "VP", _DOT)),
    ("RULE", (_Lit("if"), "BODY", _Lit("then"), "ATOM", _DOT)),
    ("BODY", ("ATOM",)),
    ("BODY", ("ATOM", _Lit("and"), "BODY")),
    ("ATOM", (_Cat("var"), _Lit("is"), "ART", _Cat("noun_sg"))),
    ("ATOM", (_Cat("var"), _Cat("v3"), _Cat("var"))),
    ("ATOM", (_Cat("var"), _Lit("is"), "ART", _Cat("of"), _Lit("of"), _Cat("var"))),
    ("ATOM", (_Cat("var"), _Lit("is"), _Cat("adj"), _Cat("var"))),
    ("QUES", (_Lit("what"), _Lit("is"), _Cat("pn"), _QMARK)),
    ("QUES", (_Lit("what"), "VPQ", _QMARK)),
    ("QUES", (_Lit("which"), _Cat("noun_pl"), "VPPL", _QMARK)),
    ("VPQ", (_Cat("v3"), "NPX")),
    ("VPQ", (_Lit("is"), "ART", "NOUN_N")),
    ("VPQ", (_Lit("is"), "ART", _Cat("of"), _Lit("of"), "NPX")),
    ("VPQ", (_Lit("is"), _Cat("adj"), "NPX")),
    ("VPPL", (_Cat("vb"), "NPX")),
    ("VPPL", (_Lit("is"), "ART", "NOUN_N")),
    ("VPPL", (_Lit("is"), "ART", _Cat("of"), _Lit("of"), "NPX")),
    ("VPPL", (_Lit("is"), _Cat("adj"), "NPX")),
    ("VP", ("V1C",)),
    ("VP", ("V1O",)),
    ("VP", ("V1C", _Lit("and"), "CAND")),
    ("VP", ("V1C", _Lit("or"), "COR")),
    ("CAND", ("V1C",)),
    ("CAND", ("V1O",)),
    ("CAND", ("V1C", _Lit("and"), "CAND")),
    ("COR", ("V1C",)),
    ("COR", ("V1O",)),
    ("COR", ("V1C", _Lit("or"), "COR")),
    ("V1C", (_Lit("is"), "ART", _Cat("noun_sg"))),
    ("V1C", (_Lit("is"), _Lit("not"), "ART", _Cat("noun_sg"))),
    ("V1C", (_Cat("v3"), "NPC")),
    ("V1C", (_Lit("does"), _Lit("not"), _Cat("vb"), "NPC")),
    ("V1C", (_Lit("is"), "ART", _Cat("of"), _Lit("of"), "NPC")),
    ("V1C", (_Lit("is"), _Cat("adj"), "NPC")),
    ("V1O", (_Lit("is"), "ART", _Cat("noun_sg"), _Lit("that"), "VP")),
    ("V1O", (_Lit("is"), _Lit("not"), "ART", _Cat("noun_sg"), _Lit("that"), "VP")),
    ("V1O", (_Cat("v3"), "NPO")),
    ("V1O", (_Lit("does"), _Lit("not"), _Cat("vb"), "NPO")),
    ("V1O", (_Lit("is"), "ART", _Cat("of"), _Lit("of"), "NPO")),
    ("V1O", (_Lit("is"), _Cat("adj"), "NPO")),
    ("NPC", (_Cat("pn"),)),
    ("NPC", ("ART", _Cat("noun_sg"))),
    ("NPO", ("ART", _Cat("noun_sg"), _Lit("that"), "VP")),
    ("NPX", (_Cat("pn"),)),
    ("NPX", ("ART", "NOUN_N")),
    ("NOUN_N", (_Cat("noun_sg"),)),
    ("NOUN_N", (_Cat("noun_sg"), _Lit("that"), "VP")),
    ("ART", (_Lit("a"),)),
    ("ART", (_Lit("an"),)),
]

_CAT_SLOTS = {
    "noun_sg": (WordCategory.NOUN, "singular"),
    "noun_pl": (WordCategory.NOUN, "plural"),
    "pn": (WordCategory.PROPER_NAME, "base"),
    "v3": (WordCategory.TRANSITIVE_VERB, "third_sg"),
    "vb": (WordCategory.TRANSITIVE_VERB, "bare"),
    "of": (WordCategory.OF_CONSTRUCT, "base"),
    "adj": (WordCategory.TRANSITIVE_ADJECTIVE, "base"),
}


def _term_matches(term: _TSym, token: Token, lexicon: Lexicon) -> bool:
    if isinstance(term, _Lit):
        return isinstance(token, FunctionWord) and token.word == term.word
    if term.kind == "dot":
        return isinstance(token, Terminator) and token.mark == "."
    if term.kind == "qmark":
        return isinstance(token, Terminator) and token.mark == "?"
    if term.kind == "var":
        return isinstance(token, Variable)
    if not isinstance(token, ContentWord) or token.entity_id not in lexicon:
        return False
    category, slot = _CAT_SLOTS[term.kind]
    return lexicon.entry(token.entity_id).category is category and token.slot == slot


def _usable_productions(lexicon: Lexicon) -> list[int]:
    """Production indices whose symbols are all realizable with this lexicon.

    A category terminal with no lexicon entries makes every production that
    mentions it dead; the predictor must not offer paths through dead
    productions (they could never finish a sentence).
    """
    inhabited = {
        "noun_sg": bool(lexicon.entries_of(WordCategory.NOUN)),
        "noun_pl": bool(lexicon.entries_of(WordCategory.NOUN)),
        "pn": bool(lexicon.entries_of(WordCategory.PROPER_NAME)),
        "v3": bool(lexicon.entries_of(WordCategory.TRANSITIVE_VERB)),
        "vb": bool(lexicon.entries_of(WordCategory.TRANSITIVE_VERB)),
        "of": bool(lexicon.entries_of(WordCategory.OF_CONSTRUCT)),
        "adj": bool(lexicon.entries_of(WordCategory.TRANSITIVE_ADJECTIVE)),
        "var": True,
        "dot": True,
        "qmark": True,
    }

    def sym_ok(sym: _Sym, productive: set[str]) -> bool:
        if isinstance(sym, _Lit):
            return True
        if isinstance(sym, _Cat):
            return inhabited[sym.kind]
        return sym in productive

    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in _PRODUCTIONS:
            if lhs not in productive and all(sym_ok(s, productive) for s in rhs):
                productive.add(lhs)
                changed = True
    return [
        i
        for i, (lhs, rhs) in enumerate(_PRODUCTIONS)
        if all(sym_ok(s, productive) for s in rhs)
    ]


# ---------------------------------------------------------------------------
# Earley predictor


class Predictor:
    """Incremental Earley recognizer over the production table.

    ``push``/``pop`` let callers walk a prefix tree without re-scanning the
    whole prefix; ``completion_tokens`` materializes the exact set of legal
    next tokens for the current prefix.
    """

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon
        self._usable = set(_usable_productions(lexicon))
        self._by_lhs: dict[str, list[int]] = {}
        for i, (lhs, _) in enumerate(_PRODUCTIONS):
            if i in self._usable:
                self._by_lhs.setdefault(lhs, []).append(i)
        self.tokens: list[Token] = []
        first = self._close([(0, 0, 0)] if 0 in self._usable else [], [])
        self._columns: list[list[tuple[int, int, int]]] = [first]

    def _close(
        self, seed: list[tuple[int, int, int]], columns: list[list[tuple[int, int, int]]]
    ) -> list[tuple[int, int, int]]:
        col = list(seed)
        seen = set(col)
        here = len(columns)
        i = 0
        while i < len(col):
            prod, dot, origin = col[i]
            i += 1
            rhs = _PRODUCTIONS[prod][1]
            if dot == len(rhs):
                lhs = _PRODUCTIONS[prod][0]
                source = columns[origin] if origin < here else col
                for p2, d2, o2 in source:
                    rhs2 = _PRODUCTIONS[p2][1]
                    if d2 < len(rhs2) and rhs2[d2] == lhs:
                        item = (p2, d2 + 1, o2)
                        if item not in seen:
                            seen.add(item)
                            col.append(item)
            else:
                sym = rhs[dot]
                if isinstance(sym, str):
                    for p2 in self._by_lhs.get(sym, ()):
                        item = (p2, 0, here)
                        if item not in seen:
                            seen.add(item)
                            col.append(item)
        return col

    def push(self, token: Token) -> bool:
        """Scan one token; False (and no state change) if the prefix dies."""
        seed = []
        for prod, dot, origin in self._columns[-1]:
            rhs = _PRODUCTIONS[prod][1]
            if dot < len(rhs) and not isinstance(rhs[dot], str):
                if _term_matches(rhs[dot], token, self.lexicon):
                    seed.append((prod, dot + 1, origin))
        if not seed:
            return False
        self._columns.append(self._close(seed, self._columns))
        self.tokens.append(token)
        return True

    def pop(self) -> None:
        if len(self._columns) > 1:
            self._columns.pop()
            self.tokens.pop()

    def accepts(self) -> bool:
        return any(
            prod == 0 and dot == 1 and origin == 0 for prod, dot, origin in self._columns[-1]
        )

    def _expected_terminals(self) -> set[_TSym]:
        out: set[_TSym] = set()
        for prod, dot, _ in self._columns[-1]:
            rhs = _PRODUCTIONS[prod][1]
            if dot < len(rhs) and not isinstance(rhs[dot], str):
                out.add(rhs[dot])
        return out

    def _allowed_variables(self) -> tuple[str, ...]:
        then = FunctionWord("then")
        if then in self.tokens:
            cut = self.tokens.index(then)
            body = tuple(
                sorted({t.letter for t in self.tokens[:cut] if isinstance(t, Variable)})
            )
            return body
        return VARIABLE_LETTERS

    def completion_tokens(self) -> list[Token]:
        """Every token that keeps the prefix extensible to a full sentence."""
        tokens: list[Token] = []
        for term in self._expected_terminals():
            if isinstance(term, _Lit):
                tokens.append(FunctionWord(term.word))
            elif term.kind == "dot":
                tokens.append(Terminator("."))
            elif term.kind == "qmark":
                tokens.append(Terminator("?"))
            elif term.kind == "var":
                tokens.extend(Variable(v) for v in self._allowed_variables())
            else:
                category, slot = _CAT_SLOTS[term.kind]
                for entry in self.lexicon.entries_of(category):
                    tokens.append(ContentWord(entry.entity_id, slot))
        return tokens


# ---------------------------------------------------------------------------
# Completion sets


GROUP_ORDER = (
    "FunctionWords",
    "ProperNames",
    "Nouns",
    "Verbs",
    "OfConstructs",
    "Adjectives",
    "Variables",
    "Terminators",
)

_CATEGORY_GROUP = {
    WordCategory.PROPER_NAME: "ProperNames",
    WordCategory.NOUN: "Nouns",
    WordCategory.TRANSITIVE_VERB: "Verbs",
    WordCategory.OF_CONSTRUCT: "OfConstructs",
    WordCategory.TRANSITIVE_ADJECTIVE: "Adjectives",
}


@dataclass(frozen=True)
class CompletionItem:
    token: Token
    display: str


@dataclass(frozen=True)
class CompletionSet:
    """Legal next tokens, grouped for display; groups in fixed order,
    alphabetical within a group, empty groups omitted."""

    groups: tuple[tuple[str, tuple[CompletionItem, ...]], ...]

    def group(self, name: str) -> tuple[CompletionItem, ...]:
        for group_name, items in self.groups:
            if group_name == name:
                return items
        return ()

    def tokens(self) -> set[Token]:
        return {item.token for _, items in self.groups for item in items}

    def displays(self) -> set[str]:
        return {item.display for _, items in self.groups for item in items}


def _group_of(token: Token, lexicon: Lexicon) -> str:
    if isinstance(token, FunctionWord):
        return "FunctionWords"
    if isinstance(token, Variable):
        return "Variables"
    if isinstance(token, Terminator):
        return "Terminators"
    return _CATEGORY_GROUP[lexicon.entry(token.entity_id).category]


def build_completion_set(
    tokens: list[Token], lexicon: Lexicon, sentence_initial: bool
) -> CompletionSet:
    buckets: dict[str, list[CompletionItem]] = {}
    for token in set(tokens):
        display = token_text(token, lexicon, sentence_initial=sentence_initial)
        buckets.setdefault(_group_of(token, lexicon), []).append(
            CompletionItem(token, display)
        )
    groups = []
    for name in GROUP_ORDER:
        if name in buckets:
            items = sorted(buckets[name], key=lambda it: (it.display, repr(it.token)))
            groups.append((name, tuple(items)))
    return CompletionSet(tuple(groups))


def complete(prefix: list[Token], lexicon: Lexicon) -> CompletionSet:
    """Exactly the tokens t such that prefix + [t] starts some sentence."""
    predictor = Predictor(lexicon)
    for i, token in enumerate(prefix):
        if not predictor.push(token):
            raise DeadPrefixError(f"prefix dies at token {i}")
    return build_completion_set(
        predictor.completion_tokens(), lexicon, sentence_initial=not prefix
    )


# ---------------------------------------------------------------------------
# Tokenizer

_MARK_CHARS = {".", "?"}


def _split_words(text: str) -> list[str]:
    words: list[str] = []
    for raw in text.split():
        if len(raw) > 1 and raw[-1] in _MARK_CHARS:
            words.append(raw[:-1])
            words.append(raw[-1])
        else:
            words.append(raw)
    return words


def _candidate_order(token: Token) -> tuple:
    if isinstance(token, ContentWord):
        return (0, int(token.entity_id), token.slot)
    return (1, repr(token))


def _segment(words: list[str], lexicon: Lexicon) -> list[tuple[str, list[Token]]]:
    """Greedy longest-match segmentation into per-position candidate tokens."""
    max_words = lexicon.max_surface_words()
    segments: list[tuple[str, list[Token]]] = []
    i = 0
    while i < len(words):
        matched = False
        for width in range(min(max_words, len(words) - i), 1, -1):
            surface = " ".join(words[i : i + width])
            hits = lexicon.lookup(surface)
            if hits:
                candidates = [ContentWord(e.entity_id, slot) for e, slot in hits]
                segments.append((surface, sorted(candidates, key=_candidate_order)))
                i += width
                matched = True
                break
        if matched:
            continue
        word = words[i]
        folded = word[:1].lower() + word[1:]
        if word in _MARK_CHARS:
            segments.append((word, [Terminator(word)]))
        elif word in VARIABLE_LETTERS:
            segments.append((word, [Variable(word)]))
        elif folded in FUNCTION_WORDS:
            segments.append((word, [FunctionWord(folded)]))
        else:
            hits = lexicon.lookup(word)
            if not hits:
                raise UnknownWordError(len(segments), word)
            candidates = [ContentWord(e.entity_id, slot) for e, slot in hits]
            segments.append((word, sorted(candidates, key=_candidate_order)))
        i += 1
    return segments


def tokenize(text: str, lexicon: Lexicon, partial: bool = False) -> list[Token]:
    """Text to tokens.

    Cross-category homonyms make some surfaces ambiguous; the grammar makes
    at most one reading viable at each position, so candidate readings are
    resolved against the predictor.  With ``partial`` a terminator is not
    required and the first viable reading wins.  A lexically known but
    ungrammatical text still tokenizes (committing to the furthest-viable
    reading) so that ``parse`` can report the error position.
    """
    segments = _segment(_split_words(text), lexicon)
    branches: list[tuple[list[Token], Predictor]] = [([], Predictor(lexicon))]
    best_dead: list[Token] = []
    for position, (_, candidates) in enumerate(segments):
        extended: list[tuple[list[Token], Predictor]] = []
        for tokens, predictor in branches:
            for candidate in candidates:
                if len(extended) >= 16:
                    break
                if predictor.push(candidate):
                    clone = Predictor(lexicon)
                    for t in tokens + [candidate]:
                        clone.push(t)
                    predictor.pop()
                    extended.append((tokens + [candidate], clone))
        if not extended:
            # Grammar rejects every reading here; commit to first candidates
            # so the parser can point at this position.
            committed = branches[0][0] if branches else best_dead
            committed = list(committed)
            for _, later in segments[position:]:
                committed.append(later[0])
            return committed
        branches = extended
        best_dead = branches[0][0]
    if not partial:
        accepting = [(toks, p) for toks, p in branches if p.accepts()]
        if len(accepting) > 1 and any(t != accepting[0][0] for t, _ in accepting[1:]):
            raise AmbiguityError("multiple token readings parse; lexicon homonyms collide")
        if accepting:
            return accepting[0][0]
    return branches[0][0]


# ---------------------------------------------------------------------------
# Recursive-descent parser

_EOI = object()


class _IncompletePrefix(Exception):
    pass


class _RD:
    def __init__(self, tokens, lexicon: Lexicon, prefix_mode: bool = False):
        self.tokens = list(tokens)
        self.lexicon = lexicon
        self.prefix_mode = prefix_mode
        self.i = 0

    # -- stream primitives --

    def peek(self, ahead: int = 0):
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else _EOI

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: tuple[str, ...], at: int | None = None):
        pos = self.i if at is None else at
        if self.prefix_mode and pos >= len(self.tokens):
            raise _IncompletePrefix
        raise CnlSyntaxError(pos, expected)

    def at_fw(self, word: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return isinstance(tok, FunctionWord) and tok.word == word

    def expect_fw(self, word: str) -> None:
        if not self.at_fw(word):
            self.fail((f"'{word}'",))
        self.take()

    def at_content(self, category: WordCategory, slot: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return (
            isinstance(tok, ContentWord)
            and tok.slot == slot
            and tok.entity_id in self.lexicon
            and self.lexicon.entry(tok.entity_id).category is category
        )

    def expect_content(self, category: WordCategory, slot: str, label: str) -> str:
        if not self.at_content(category, slot):
            self.fail((label,))
        return self.take().entity_id

    def expect_terminator(self, mark: str) -> None:
        tok = self.peek()
        if not (isinstance(tok, Terminator) and tok.mark == mark):
            self.fail((f"'{mark}'",))
        self.take()

    def at_article(self, ahead: int = 0) -> bool:
        return self.at_fw("a", ahead) or self.at_fw("an", ahead)

    def expect_article(self) -> None:
        if not self.at_article():
            self.fail(("'a'", "'an'"))
        self.take()

    # -- grammar --

    def parse_sentence(self) -> SentenceAST:
        tok = self.peek()
        if self.at_fw("every") or self.at_fw("no"):
            quantifier = self.take().word
            subject = self.expect_content(WordCategory.NOUN, "singular", "singular noun")
            vp, _ = self.parse_vp()
            self.expect_terminator(".")
            ast: SentenceAST = QuantStatement(quantifier, subject, vp)
        elif self.at_content(WordCategory.PROPER_NAME, "base"):
            subject = self.take().entity_id
            vp, _ = self.parse_vp()
            self.expect_terminator(".")
            ast = InstStatement(subject, vp)
        elif self.at_fw("if"):
            ast = self.parse_rule()
        elif self.at_fw("what") or self.at_fw("which"):
            ast = self.parse_question()
        elif tok is _EOI:
            self.fail(("'every'", "'no'", "'if'", "'what'", "'which'", "proper name"))
        else:
            self.fail(("'every'", "'no'", "'if'", "'what'", "'which'", "proper name"))
        if self.i < len(self.tokens):
            self.fail(("end of sentence",))
        return ast

    def parse_vp(self) -> tuple[VP, bool]:
        """A coordination chain; returns (vp, last-element-open?)."""
        first, open_ = self.parse_v1()
        items = [first]
        kind: str | None = None
        while (self.at_fw("and") or self.at_fw("or")) and not open_:
            word = self.peek().word
            if kind is None:
                kind = word
            elif kind != word:
                break
            self.take()
            nxt, open_ = self.parse_v1()
            items.append(nxt)
        vp = items[-1]
        for item in reversed(items[:-1]):
            vp = AndVP(item, vp) if kind == "and" else OrVP(item, vp)
        return vp, open_

    def parse_v1(self) -> tuple[VP, bool]:
        if self.at_fw("is"):
            self.take()
            if self.at_fw("not"):
                self.take()
                self.expect_article()
                noun = self.expect_content(WordCategory.NOUN, "singular", "singular noun")
                rel = self.maybe_relative()
                return IsNotA(Indef(noun, rel)), rel is not None
            if self.at_article():
                self.take()
                if self.at_content(WordCategory.NOUN, "singular"):
                    noun = self.take().entity_id
                    rel = self.maybe_relative()
                    return IsA(Indef(noun, rel)), rel is not None
                if self.at_content(WordCategory.OF_CONSTRUCT, "base"):
                    of = self.take().entity_id
                    self.expect_fw("of")
                    np, open_ = self.parse_np()
                    return IsOf(of, np), open_
                self.fail(("singular noun", "of-construct"))
            if self.at_content(WordCategory.TRANSITIVE_ADJECTIVE, "base"):
                adj = self.take().entity_id
                np, open_ = self.parse_np()
                return IsAdj(adj, np), open_
            self.fail(("'not'", "'a'", "'an'", "adjective"))
        if self.at_content(WordCategory.TRANSITIVE_VERB, "third_sg"):
            verb = self.take().entity_id
            np, open_ = self.parse_np()
            return Verb(verb, np), open_
        if self.at_fw("does"):
            self.take()
            self.expect_fw("not")
            verb = self.expect_content(WordCategory.TRANSITIVE_VERB, "bare", "bare verb")
            np, open_ = self.parse_np()
            return DoesNotVerb(verb, np), open_
        self.fail(("'is'", "'does'", "verb"))

    def parse_np(self) -> tuple[NP, bool]:
        if self.at_content(WordCategory.PROPER_NAME, "base"):
            return Named(self.take().entity_id), False
        if self.at_article():
            self.take()
            noun = self.expect_content(WordCategory.NOUN, "singular", "singular noun")
            rel = self.maybe_relative()
            return Indef(noun, rel), rel is not None
        self.fail(("proper name", "'a'", "'an'"))

    def maybe_relative(self) -> Optional[VP]:
        if self.at_fw("that"):
            self.take()
            vp, _ = self.parse_vp()
            return vp
        return None

    def parse_rule(self) -> RuleStatement:
        self.expect_fw("if")
        body = [self.parse_atom(None)]
        while self.at_fw("and"):
            self.take()
            body.append(self.parse_atom(None))
        self.expect_fw("then")
        bound = sorted(
            {a.var for a in body if isinstance(a, VarClass)}
            | {v for a in body if isinstance(a, VarRole) for v in (a.subject_var, a.object_var)}
        )
        head = self.parse_atom(tuple(bound))
        self.expect_terminator(".")
        return RuleStatement(tuple(body), head)

    def expect_var(self, allowed: Optional[tuple[str, ...]]) -> str:
        tok = self.peek()
        if not isinstance(tok, Variable):
            self.fail(tuple(f"'{v}'" for v in (allowed or VARIABLE_LETTERS)))
        if allowed is not None and tok.letter not in allowed:
            self.fail(tuple(f"'{v}'" for v in allowed))
        return self.take().letter

    def parse_atom(self, allowed: Optional[tuple[str, ...]]) -> RuleAtom:
        subject = self.expect_var(allowed)
        if self.at_content(WordCategory.TRANSITIVE_VERB, "third_sg"):
            verb = self.take().entity_id
            obj = self.expect_var(allowed)
            return VarRole(subject, verb, obj)
        if self.at_fw("is"):
            self.take()
            if self.at_article():
                self.take()
                if self.at_content(WordCategory.NOUN, "singular"):
                    return VarClass(subject, self.take().entity_id)
                if self.at_content(WordCategory.OF_CONSTRUCT, "base"):
                    of = self.take().entity_id
                    self.expect_fw("of")
                    obj = self.expect_var(allowed)
                    return VarRole(subject, of, obj)
                self.fail(("singular noun", "of-construct"))
            if self.at_content(WordCategory.TRANSITIVE_ADJECTIVE, "base"):
                adj = self.take().entity_id
                obj = self.expect_var(allowed)
                return VarRole(subject, adj, obj)
            self.fail(("'a'", "'an'", "adjective"))
        self.fail(("verb", "'is'"))

    def parse_question(self) -> Question:
        if self.at_fw("what"):
            self.take()
            if self.at_fw("is"):
                self.take()
                if self.at_content(WordCategory.PROPER_NAME, "base"):
                    form: Union[WhatIs, WhatVP, WhichNVP] = WhatIs(self.take().entity_id)
                else:
                    form = WhatVP(self.parse_question_is_form())
            elif self.at_content(WordCategory.TRANSITIVE_VERB, "third_sg"):
                verb = self.take().entity_id
                np, _ = self.parse_np()
                form = WhatVP(Verb(verb, np))
            else:
                self.fail(("'is'", "verb"))
            self.expect_terminator("?")
            return Question(form)
        self.expect_fw("which")
        noun = self.expect_content(WordCategory.NOUN, "plural", "plural noun")
        if self.at_fw("is"):
            self.take()
            vp = self.parse_question_is_form()
        elif self.at_content(WordCategory.TRANSITIVE_VERB, "bare"):
            verb = self.take().entity_id
            np, _ = self.parse_np()
            vp = Verb(verb, np)
        else:
            self.fail(("'is'", "verb"))
        self.expect_terminator("?")
        return Question(WhichNVP(noun, vp))

    def parse_question_is_form(self) -> VP:
        """The is-forms shared by question verb phrases ("is" already taken)."""
        if self.at_article():
            self.take()
            if self.at_content(WordCategory.NOUN, "singular"):
                noun = self.take().entity_id
                rel = self.maybe_relative()
                return IsA(Indef(noun, rel))
            if self.at_content(WordCategory.OF_CONSTRUCT, "base"):
                of = self.take().entity_id
                self.expect_fw("of")
                np, _ = self.parse_np()
                return IsOf(of, np)
            self.fail(("singular noun", "of-construct"))
        if self.at_content(WordCategory.TRANSITIVE_ADJECTIVE, "base"):
            adj = self.take().entity_id
            np, _ = self.parse_np()
            return IsAdj(adj, np)
        self.fail(("'a'", "'an'", "adjective"))


def parse(tokens, lexicon: Lexicon) -> SentenceAST:
    """The unique AST of a complete sentence; CnlSyntaxError otherwise."""
    return _RD(tokens, lexicon).parse_sentence()


def parse_checked(tokens, lexicon: Lexicon) -> SentenceAST:
    """Like ``parse`` but also verifies the derivation is unique."""
    ast = parse(tokens, lexicon)
    count = derivation_count(tokens, lexicon)
    if count != 1:
        raise AmbiguityError(f"{count} derivations for {render(tokens, lexicon)!r}")
    return ast


def parse_prefix(tokens, lexicon: Lexicon) -> Optional[SentenceAST]:
    """Classify a token sequence: an AST if it is a complete sentence, None
    if it is a proper prefix of one, CnlSyntaxError if it is neither."""
    try:
        return _RD(tokens, lexicon, prefix_mode=True).parse_sentence()
    except _IncompletePrefix:
        return None


# ---------------------------------------------------------------------------
# Derivation counting (ambiguity detection, independent of both parsers)


def derivation_count(tokens, lexicon: Lexicon) -> int:
    toks = list(tokens)
    n = len(toks)
    usable = set(_usable_productions(lexicon))
    by_lhs: dict[str, list[int]] = {}
    for i, (lhs, _) in enumerate(_PRODUCTIONS):
        if i in usable:
            by_lhs.setdefault(lhs, []).append(i)

    memo: dict[tuple[str, int], dict[int, int]] = {}

    def nt_counts(sym: str, start: int) -> dict[int, int]:
        key = (sym, start)
        if key in memo:
            return memo[key]
        memo[key] = {}  # cycle guard; no left recursion consumes zero tokens
        out: dict[int, int] = {}
        for prod in by_lhs.get(sym, ()):
            for end, count in seq_counts(_PRODUCTIONS[prod][1], start).items():
                out[end] = out.get(end, 0) + count
        memo[key] = out
        return out

    def seq_counts(rhs: tuple[_Sym, ...], start: int) -> dict[int, int]:
        positions = {start: 1}
        for sym in rhs:
            nxt: dict[int, int] = {}
            for pos, count in positions.items():
                if isinstance(sym, str):
                    for end, c2 in nt_counts(sym, pos).items():
                        nxt[end] = nxt.get(end, 0) + count * c2
                elif pos < n and _term_matches(sym, toks[pos], lexicon):
                    nxt[pos + 1] = nxt.get(pos + 1, 0) + count
            positions = nxt
            if not positions:
                break
        return positions

    return nt_counts("S", 0).get(n, 0)


# ---------------------------------------------------------------------------
# Exhaustive sentence generation


def _min_lengths(usable: set[int]) -> dict[str, int]:
    inf = 10**9
    minlen: dict[str, int] = {}
    changed = True
    while changed:
        changed = False
        for i, (lhs, rhs) in enumerate(_PRODUCTIONS):
            if i not in usable:
                continue
            total = 0
            for sym in rhs:
                total += minlen.get(sym, inf) if isinstance(sym, str) else 1
            if total < minlen.get(lhs, inf):
                minlen[lhs] = total
                changed = True
    return minlen


def _abstract_sentences(lexicon: Lexicon, max_len: int) -> Iterator[tuple[_TSym, ...]]:
    """Every terminal-category string of the grammar with length <= max_len."""
    usable = set(_usable_productions(lexicon))
    by_lhs: dict[str, list[int]] = {}
    for i, (lhs, _) in enumerate(_PRODUCTIONS):
        if i in usable:
            by_lhs.setdefault(lhs, []).append(i)
    minlen = _min_lengths(usable)
    if "S" not in minlen:
        return

    def form_min(form: tuple[_Sym, ...]) -> int:
        return sum(minlen[s] if isinstance(s, str) else 1 for s in form)

    stack: list[tuple[_Sym, ...]] = [("S",)]
    while stack:
        form = stack.pop()
        nt_index = next((k for k, s in enumerate(form) if isinstance(s, str)), None)
        if nt_index is None:
            yield form  # type: ignore[misc]
            continue
        head, sym, tail = form[:nt_index], form[nt_index], form[nt_index + 1 :]
        # reversed keeps production-order output from the LIFO stack
        for prod in reversed(by_lhs.get(sym, ())):
            candidate = head + _PRODUCTIONS[prod][1] + tail
            if form_min(candidate) <= max_len:
                stack.append(candidate)


def _category_tokens(lexicon: Lexicon, term: _TSym) -> list[Token]:
    if isinstance(term, _Lit):
        return [FunctionWord(term.word)]
    if term.kind == "dot":
        return [Terminator(".")]
    if term.kind == "qmark":
        return [Terminator("?")]
    if term.kind == "var":
        return [Variable(v) for v in VARIABLE_LETTERS]
    category, slot = _CAT_SLOTS[term.kind]
    return [ContentWord(e.entity_id, slot) for e in lexicon.entries_of(category)]


def _rule_vars_ok(tokens: tuple[Token, ...]) -> bool:
    then = FunctionWord("then")
    if then not in tokens:
        return True
    cut = tokens.index(then)
    body = {t.letter for t in tokens[:cut] if isinstance(t, Variable)}
    head = {t.letter for t in tokens[cut:] if isinstance(t, Variable)}
    return head <= body


def enumerate_sentences(lexicon: Lexicon, max_len: int) -> Iterator[tuple[Token, ...]]:
    """Every sentence of the language with at most ``max_len`` tokens.

    No duplicates: the grammar is unambiguous and lexical assignments are
    enumerated once each.  Rule sentences whose head would use a variable
    not bound in the body are excluded (they are not in the language).
    The shortest sentences have four tokens, so smaller bounds yield nothing.
    """
    for abstract in _abstract_sentences(lexicon, max_len):
        choices = [_category_tokens(lexicon, term) for term in abstract]
        if any(not c for c in choices):
            continue
        for assignment in itertools.product(*choices):
            if _rule_vars_ok(assignment):
                yield assignment
