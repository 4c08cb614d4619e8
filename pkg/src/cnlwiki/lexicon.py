"""Content words: categories, inflected surface forms, and denoted entities.

The lexicon is the single source of terminals for the grammar beyond its
fixed function words.  It is an immutable value: mutating operations return
an updated copy, so a reference to a lexicon is always a consistent
snapshot and safe to share across threads.

Surface matching policy: proper names match case-sensitively; every other
category matches with the first letter case-folded, so sentence-initial
capitalization ("Every country ...") still resolves mid-sentence words.
Two entries of the same category may never share a surface (compared after
first-letter folding for non-proper-name categories); cross-category
homonyms are allowed and are disambiguated by grammatical position.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import (
    DuplicateSurfaceError,
    EntityInUseError,
    InvalidFormError,
    MissingFormError,
    ReservedWordError,
    UnknownEntityError,
)

# The grammar's fixed function words; kept here so word validation does not
# need a grammar import.
FUNCTION_WORDS = frozenset(
    {
        "a", "an", "every", "no", "if", "then", "and", "or", "not",
        "is", "does", "that", "of", "what", "which",
    }
)
VARIABLE_LETTERS = ("X", "Y", "Z")
TERMINATORS = (".", "?")


class WordCategory(Enum):
    PROPER_NAME = "ProperName"
    NOUN = "Noun"
    TRANSITIVE_VERB = "TransitiveVerb"
    OF_CONSTRUCT = "OfConstruct"
    TRANSITIVE_ADJECTIVE = "TransitiveAdjective"


#: Required form slots per category, in canonical order.
FORM_SLOTS: dict[WordCategory, tuple[str, ...]] = {
    WordCategory.PROPER_NAME: ("base",),
    WordCategory.NOUN: ("singular", "plural"),
    WordCategory.TRANSITIVE_VERB: ("third_sg", "bare"),
    WordCategory.OF_CONSTRUCT: ("base",),
    WordCategory.TRANSITIVE_ADJECTIVE: ("base",),
}

#: Categories that denote binary relations.
RELATION_CATEGORIES = frozenset(
    {
        WordCategory.TRANSITIVE_VERB,
        WordCategory.OF_CONSTRUCT,
        WordCategory.TRANSITIVE_ADJECTIVE,
    }
)


def _fold(surface: str) -> str:
    """Lower-case the first letter only."""
    return surface[:1].lower() + surface[1:]


def _match_key(category: WordCategory, surface: str) -> str:
    if category is WordCategory.PROPER_NAME:
        return surface
    return _fold(surface)


def _validate_surface(category: WordCategory, slot: str, surface: str) -> None:
    if not surface or surface != surface.strip():
        raise InvalidFormError(f"form {slot!r} must be a non-empty trimmed string")
    if any(c in surface for c in "\t\n\r"):
        raise InvalidFormError(f"form {slot!r} may not contain control whitespace")
    if " " in surface:
        # Only of-construct bases may be multi-word phrases.
        if category is not WordCategory.OF_CONSTRUCT:
            raise InvalidFormError(f"form {slot!r} may not contain spaces")
        if "  " in surface:
            raise InvalidFormError(f"form {slot!r} may not contain double spaces")
    if _fold(surface) in FUNCTION_WORDS or surface in VARIABLE_LETTERS or surface in TERMINATORS:
        raise ReservedWordError(f"{surface!r} collides with a reserved function word")


@dataclass(frozen=True, eq=True)
class LexiconEntry:
    entity_id: str
    category: WordCategory
    forms: tuple[tuple[str, str], ...]  # (slot, surface) in canonical slot order

    def form(self, slot: str) -> str:
        for s, surface in self.forms:
            if s == slot:
                return surface
        raise KeyError(slot)

    @property
    def forms_map(self) -> dict[str, str]:
        return dict(self.forms)

    @property
    def base_surface(self) -> str:
        """The entry's display surface (first declared form)."""
        return self.forms[0][1]


class Lexicon:
    """Immutable word store; ``add_word``/``remove_word`` return a new Lexicon."""

    def __init__(self, entries: Iterable[LexiconEntry] = (), next_id: int = 1):
        self._entries: dict[str, LexiconEntry] = {e.entity_id: e for e in entries}
        self._next_id = next_id
        # match key -> tuple of (entity_id, slot)
        self._index: dict[str, tuple[tuple[str, str], ...]] = {}
        for entry in self._entries.values():
            self._index_entry(entry)

    def _index_entry(self, entry: LexiconEntry) -> None:
        for slot, surface in entry.forms:
            key = _match_key(entry.category, surface)
            self._index[key] = self._index.get(key, ()) + ((entry.entity_id, slot),)

    # -- queries ---------------------------------------------------------

    def __contains__(self, entity_id: str) -> bool:
        return entity_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self._entries == other._entries and self._next_id == other._next_id

    @property
    def next_id(self) -> int:
        return self._next_id

    def entry(self, entity_id: str) -> LexiconEntry:
        try:
            return self._entries[entity_id]
        except KeyError:
            raise UnknownEntityError(f"no entity {entity_id!r}") from None

    def entries(self) -> list[LexiconEntry]:
        """All entries, ordered by numeric entity id."""
        return sorted(self._entries.values(), key=lambda e: int(e.entity_id))

    def entries_of(self, category: WordCategory) -> list[LexiconEntry]:
        return [e for e in self.entries() if e.category is category]

    def lookup(self, surface: str) -> set[tuple[LexiconEntry, str]]:
        """Every (entry, slot) whose surface form matches ``surface``.

        Empty set for unknown surfaces; never raises.
        """
        hits: set[tuple[LexiconEntry, str]] = set()
        for key in {surface, _fold(surface)}:
            for entity_id, slot in self._index.get(key, ()):
                entry = self._entries[entity_id]
                if entry.category is WordCategory.PROPER_NAME:
                    if entry.form(slot) == surface:
                        hits.add((entry, slot))
                elif _fold(entry.form(slot)) == _fold(surface):
                    hits.add((entry, slot))
        return hits

    def max_surface_words(self) -> int:
        """Longest surface length in words (tokenizer lookahead bound)."""
        longest = 1
        for entry in self._entries.values():
            for _, surface in entry.forms:
                longest = max(longest, surface.count(" ") + 1)
        return longest

    # -- mutations (return a new Lexicon) --------------------------------

    def add_word(
        self, category: WordCategory, forms: Mapping[str, str]
    ) -> tuple["Lexicon", LexiconEntry]:
        slots = FORM_SLOTS[category]
        unexpected = set(forms) - set(slots)
        if unexpected:
            raise InvalidFormError(f"unexpected form slots {sorted(unexpected)} for {category.value}")
        ordered: list[tuple[str, str]] = []
        for slot in slots:
            surface = forms.get(slot, "")
            if not surface:
                raise MissingFormError(f"missing form {slot!r} for {category.value}")
            _validate_surface(category, slot, surface)
            ordered.append((slot, surface))
        for slot, surface in ordered:
            key = _match_key(category, surface)
            for other_id, other_slot in self._index.get(key, ()):
                other = self._entries[other_id]
                if other.category is category:
                    raise DuplicateSurfaceError(
                        f"{surface!r} already used by {category.value} entry {other_id}"
                    )
        entry = LexiconEntry(str(self._next_id), category, tuple(ordered))
        updated = Lexicon(list(self._entries.values()) + [entry], self._next_id + 1)
        return updated, entry

    def remove_word(self, entity_id: str) -> "Lexicon":
        if entity_id not in self._entries:
            raise UnknownEntityError(f"no entity {entity_id!r}")
        remaining = [e for e in self._entries.values() if e.entity_id != entity_id]
        return Lexicon(remaining, self._next_id)

    def ensure_unused(self, entity_id: str, used_ids: Iterable[str]) -> None:
        """Raise EntityInUse if any sentence still references the entity."""
        if entity_id in set(used_ids):
            raise EntityInUseError(f"entity {entity_id!r} is referenced by sentences")
