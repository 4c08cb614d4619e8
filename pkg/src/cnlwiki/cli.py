"""Batch companion: import a sentence corpus, print reports, run questions,
and export a store back to corpus form.

Corpus files are plain UTF-8, one directive per line, '#' starts a comment:

    word propername Zurich
    word noun city cities
    word verb borders border
    word of part
    word adjective located-in
    sentence Zurich Zurich is a city.
    ask What is Zurich?

Exit code 0 means no syntax or I/O errors; a sentence stored as
rejected-inconsistent is a domain outcome, not an error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import grammar as g
from . import wiki as w
from .errors import CnlWikiError, CorpusFormatError, IoError
from .lexicon import WordCategory
from .reasoner import Reasoner, is_consistent
from .semantics import ClassesOf
from .verbalizer import verbalize_hierarchy_edge, verbalize_membership
from .wiki import SentenceStatus

_CATEGORY_NAMES = {
    "propername": WordCategory.PROPER_NAME,
    "noun": WordCategory.NOUN,
    "verb": WordCategory.TRANSITIVE_VERB,
    "of": WordCategory.OF_CONSTRUCT,
    "adjective": WordCategory.TRANSITIVE_ADJECTIVE,
}
_CATEGORY_LABELS = {v: k for k, v in _CATEGORY_NAMES.items()}


def _word_forms(category: WordCategory, parts: list[str], line_no: int) -> dict:
    if category is WordCategory.NOUN:
        if len(parts) != 2:
            raise CorpusFormatError(line_no, "noun needs singular and plural forms")
        return {"singular": parts[0], "plural": parts[1]}
    if category is WordCategory.TRANSITIVE_VERB:
        if len(parts) != 2:
            raise CorpusFormatError(line_no, "verb needs third-singular and bare forms")
        return {"third_sg": parts[0], "bare": parts[1]}
    if category is WordCategory.OF_CONSTRUCT:
        if not parts:
            raise CorpusFormatError(line_no, "of-construct needs a base form")
        return {"base": " ".join(parts)}  # bases may be multi-word phrases
    if len(parts) != 1:
        raise CorpusFormatError(line_no, f"{_CATEGORY_LABELS[category]} needs exactly one form")
    return {"base": parts[0]}


def _resolve_home(state: w.WikiState, surface: str, line_no: int) -> str:
    hits = {entry.entity_id for entry, _ in state.lexicon.lookup(surface)}
    if not hits:
        raise CorpusFormatError(line_no, f"unknown home word {surface!r}")
    if len(hits) > 1:
        raise CorpusFormatError(line_no, f"ambiguous home word {surface!r}")
    return next(iter(hits))


def import_corpus(store_path: str, corpus_path: str, out=None) -> int:
    """Apply corpus directives in order; returns the process exit code."""
    out = out if out is not None else sys.stdout
    try:
        with open(corpus_path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {corpus_path}: {exc}") from exc
    state = w.empty_state()
    errors = 0
    tick = 0.0
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            parts = line.split()
            directive = parts[0]
            if directive == "word":
                if len(parts) < 3 or parts[1] not in _CATEGORY_NAMES:
                    raise CorpusFormatError(line_no, f"bad word directive {line!r}")
                category = _CATEGORY_NAMES[parts[1]]
                forms = _word_forms(category, parts[2:], line_no)
                state, entry = w.add_word(state, category, forms)
                print(f"line {line_no}: word {entry.base_surface} -> entity {entry.entity_id}", file=out)
            elif directive == "sentence":
                if len(parts) < 3:
                    raise CorpusFormatError(line_no, f"bad sentence directive {line!r}")
                home = _resolve_home(state, parts[1], line_no)
                text = " ".join(parts[2:])
                tokens = g.tokenize(text, state.lexicon)
                state, sentence = w.submit_sentence(state, home, tokens, now=tick)
                tick += 1.0
                print(f"line {line_no}: sentence -> {sentence.status.value}", file=out)
            elif directive == "ask":
                if len(parts) < 2:
                    raise CorpusFormatError(line_no, f"bad ask directive {line!r}")
                answers = w.ask(state, g.tokenize(" ".join(parts[1:]), state.lexicon))
                print(f"line {line_no}: ask -> {len(answers)} answers", file=out)
                for answer in answers:
                    print(f"  {answer.text}", file=out)
            else:
                raise CorpusFormatError(line_no, f"unknown directive {directive!r}")
        except CnlWikiError as exc:
            errors += 1
            print(f"line {line_no}: error {exc.code}: {exc}", file=out)
    w.save(state, store_path)
    print(f"imported: {len(state.sentences)} sentences, {len(state.lexicon)} words, {errors} errors", file=out)
    return 0 if errors == 0 else 1


def report(store_path: str, out=None) -> int:
    """Deterministic plain-text view of consistency, hierarchy, memberships."""
    out = out if out is not None else sys.stdout
    state = w.load(store_path)
    kb = w.current_kb(state)
    reasoner = Reasoner(kb)
    print("consistency:", "OK" if is_consistent(kb)[0] else "INCONSISTENT", file=out)
    hierarchy = reasoner.classify()
    print("hierarchy:", file=out)
    edge_lines = sorted(
        verbalize_hierarchy_edge(sub, sup, state.lexicon).text
        for sub, sup in hierarchy.edges
    )
    for line in edge_lines:
        print(f"  {line}", file=out)
    print("memberships:", file=out)
    _, _, individuals = kb.signature
    membership_lines = []
    for individual in individuals:
        for cls in reasoner.answer(ClassesOf(individual)):
            membership_lines.append(
                verbalize_membership(individual, cls, state.lexicon).text
            )
    for line in sorted(membership_lines):
        print(f"  {line}", file=out)
    by_status = {status: 0 for status in SentenceStatus}
    for sentence in state.sentences.values():
        by_status[sentence.status] += 1
    print("counts:", file=out)
    print(f"  words: {len(state.lexicon)}", file=out)
    print(f"  sentences: {len(state.sentences)}", file=out)
    print(f"  accepted: {by_status[SentenceStatus.ACCEPTED]}", file=out)
    print(f"  beyond-fragment: {by_status[SentenceStatus.BEYOND_FRAGMENT]}", file=out)
    print(f"  rejected: {by_status[SentenceStatus.REJECTED_INCONSISTENT]}", file=out)
    print(f"  questions: {by_status[SentenceStatus.QUESTION]}", file=out)
    return 0


def ask(store_path: str, question: str, out=None) -> int:
    out = out if out is not None else sys.stdout
    state = w.load(store_path)
    answers = w.ask(state, g.tokenize(question, state.lexicon))
    for answer in answers:
        print(answer.text, file=out)
    return 0


def export(store_path: str, out=None) -> int:
    """Dump a store as a corpus that reproduces it when imported."""
    out = out if out is not None else sys.stdout
    state = w.load(store_path)
    for entry in state.lexicon.entries():
        label = _CATEGORY_LABELS[entry.category]
        forms = " ".join(surface for _, surface in entry.forms)
        print(f"word {label} {forms}", file=out)
    lexicon = state.lexicon
    for sentence in sorted(state.sentences.values(), key=lambda x: int(x.id)):
        home = lexicon.entry(sentence.home_entity).base_surface
        print(f"sentence {home} {g.render(sentence.tokens, lexicon)}", file=out)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="cnlwiki", description=__doc__.splitlines()[0])
    parser.add_argument("--store", required=True, help="store file path")
    commands = parser.add_subparsers(dest="command", required=True)
    import_cmd = commands.add_parser("import", help="apply a corpus to a fresh store")
    import_cmd.add_argument("corpus")
    commands.add_parser("report", help="print hierarchy, memberships, counts")
    ask_cmd = commands.add_parser("ask", help="answer one question against the store")
    ask_cmd.add_argument("question")
    commands.add_parser("export", help="dump the store as a corpus")
    args = parser.parse_args(argv)
    try:
        if args.command == "import":
            return import_corpus(args.store, args.corpus)
        if args.command == "report":
            return report(args.store)
        if args.command == "ask":
            return ask(args.store, args.question)
        return export(args.store)
    except CnlWikiError as exc:
        print(f"error {exc.code}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
