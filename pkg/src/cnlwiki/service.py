"""HTTP/JSON facade over the wiki for the web editor and other clients.

Tokens cross the wire as tagged references ({"fw": "every"},
{"cw": "<entity>", "slot": "..."}, {"var": "X"}, {"term": "."}) so clients
never deal with surface-string ambiguity.  Domain outcomes such as a
rejected-inconsistent sentence travel as HTTP 200 with a status field; HTTP
errors are reserved for transport and precondition failures.
"""

from __future__ import annotations

import argparse
import os
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import grammar as g
from .errors import (
    CnlWikiError,
    DuplicateSurfaceError,
    EntityInUseError,
    FormatError,
    IoError,
    ResourceLimitError,
    UnknownEntityError,
    UnknownSentenceError,
)
from .lexicon import FUNCTION_WORDS, TERMINATORS, VARIABLE_LETTERS, WordCategory
from .verbalizer import verbalize_hierarchy_edge
from .wiki import SentenceStatus, Wiki, ref_to_token, token_to_ref

DEFAULT_BIND = "127.0.0.1:8710"


class WordIn(BaseModel):
    category: str
    forms: dict[str, str]


class TokensIn(BaseModel):
    tokens: list[dict]


class PrefixIn(BaseModel):
    prefix: list[dict]


def _status_for(error: CnlWikiError) -> int:
    if isinstance(error, (UnknownEntityError, UnknownSentenceError)):
        return 404
    if isinstance(error, (DuplicateSurfaceError, EntityInUseError)):
        return 409
    if isinstance(error, (ResourceLimitError, IoError)):
        return 500
    return 400


def _decode_tokens(refs: list[dict]) -> list[g.Token]:
    tokens = []
    for ref in refs:
        token = ref_to_token(ref)
        if isinstance(token, g.FunctionWord) and token.word not in FUNCTION_WORDS:
            raise FormatError(f"unknown function word {token.word!r}")
        if isinstance(token, g.Variable) and token.letter not in VARIABLE_LETTERS:
            raise FormatError(f"unknown variable {token.letter!r}")
        if isinstance(token, g.Terminator) and token.mark not in TERMINATORS:
            raise FormatError(f"unknown terminator {token.mark!r}")
        tokens.append(token)
    return tokens


def _sentence_payload(wiki: Wiki, sentence) -> dict:
    payload = {
        "id": sentence.id,
        "home_entity": sentence.home_entity,
        "text": sentence.text,
        "status": sentence.status.value,
        "tokens": [token_to_ref(t) for t in sentence.tokens],
        "created_at": sentence.created_at,
    }
    if sentence.status is SentenceStatus.QUESTION:
        payload["answers"] = [a.text for a in wiki.ask(sentence.tokens)]
    return payload


def _rendered_payload(rendered) -> dict:
    return {"text": rendered.text, "tokens": [token_to_ref(t) for t in rendered.tokens]}


def _completion_payload(completion: g.CompletionSet) -> dict:
    return {
        "groups": {
            name: [{"token": token_to_ref(i.token), "display": i.display} for i in items]
            for name, items in completion.groups
        }
    }


def _entry_payload(entry, sentence_count: Optional[int] = None) -> dict:
    payload = {
        "entity_id": entry.entity_id,
        "category": entry.category.value,
        "display": entry.base_surface,
        "forms": dict(entry.forms),
    }
    if sentence_count is not None:
        payload["sentence_count"] = sentence_count
    return payload


def create_app(wiki: Wiki, static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="cnlwiki", docs_url=None, redoc_url=None)

    @app.exception_handler(CnlWikiError)
    async def domain_error(_: Request, error: CnlWikiError):
        body = {"code": error.code, "message": str(error)}
        position = getattr(error, "position", None)
        if position is not None:
            body["position"] = position
        return JSONResponse(status_code=_status_for(error), content=body)

    @app.get("/api/health")
    def health():
        state = wiki.snapshot()
        by_status = {status: 0 for status in SentenceStatus}
        for sentence in state.sentences.values():
            by_status[sentence.status] += 1
        return {
            "kb_version": state.kb_version,
            "counts": {
                "words": len(state.lexicon),
                "sentences": len(state.sentences),
                "accepted": by_status[SentenceStatus.ACCEPTED],
                "rejected": by_status[SentenceStatus.REJECTED_INCONSISTENT],
                "beyond_fragment": by_status[SentenceStatus.BEYOND_FRAGMENT],
                "questions": by_status[SentenceStatus.QUESTION],
            },
        }

    @app.get("/api/articles")
    def list_articles():
        state = wiki.snapshot()
        return {
            "articles": [
                _entry_payload(
                    entry,
                    len(state.articles[entry.entity_id].sentence_ids)
                    if entry.entity_id in state.articles
                    else 0,
                )
                for entry in state.lexicon.entries()
            ]
        }

    @app.get("/api/articles/{entity_id}")
    def article(entity_id: str):
        state = wiki.snapshot()
        bundle = wiki.views(entity_id)
        entry = state.lexicon.entry(entity_id)
        return {
            "entity": _entry_payload(entry, len(bundle.asserted)),
            "asserted": [_sentence_payload(wiki, s) for s in bundle.asserted],
            "inferred": {
                "memberships": [_rendered_payload(x) for x in bundle.inferred_memberships],
                "superclasses": [_rendered_payload(x) for x in bundle.inferred_superclasses],
                "subclasses": [_rendered_payload(x) for x in bundle.inferred_subclasses],
                "instances": [_rendered_payload(x) for x in bundle.inferred_instances],
            },
        }

    @app.post("/api/words")
    def add_word(body: WordIn):
        try:
            category = WordCategory(body.category)
        except ValueError:
            raise FormatError(f"unknown category {body.category!r}") from None
        entry = wiki.add_word(category, body.forms)
        return _entry_payload(entry, 0)

    @app.delete("/api/words/{entity_id}")
    def remove_word(entity_id: str):
        wiki.remove_word(entity_id)
        return {"removed": entity_id}

    @app.post("/api/complete")
    def complete(body: PrefixIn):
        prefix = _decode_tokens(body.prefix)
        return _completion_payload(wiki.complete(prefix))

    @app.post("/api/articles/{entity_id}/sentences")
    def submit_sentence(entity_id: str, body: TokensIn):
        tokens = _decode_tokens(body.tokens)
        sentence = wiki.submit_sentence(entity_id, tokens)
        return _sentence_payload(wiki, sentence)

    @app.delete("/api/sentences/{sentence_id}")
    def retract(sentence_id: str):
        wiki.retract_sentence(sentence_id)
        return {"removed": sentence_id}

    @app.post("/api/sentences/{sentence_id}/recheck")
    def recheck(sentence_id: str):
        sentence = wiki.recheck_sentence(sentence_id)
        return _sentence_payload(wiki, sentence)

    @app.post("/api/ask")
    def ask(body: TokensIn):
        tokens = _decode_tokens(body.tokens)
        return {"answers": [_rendered_payload(x) for x in wiki.ask(tokens)]}

    @app.get("/api/hierarchy")
    def hierarchy():
        state = wiki.snapshot()
        result = wiki.hierarchy()
        return {
            "edges": [
                {
                    "sub": sub,
                    "sup": sup,
                    "text": verbalize_hierarchy_edge(sub, sup, state.lexicon).text,
                }
                for sub, sup in result.edges
            ],
            "equivalences": [list(group) for group in result.equivalences],
        }

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="editor")

    return app


def main(argv: Optional[list[str]] = None) -> None:
    parser = argparse.ArgumentParser(prog="cnlwiki-serve", description="Run the wiki server")
    parser.add_argument("--store", help="store file path (env CNLWIKI_STORE overrides)")
    parser.add_argument("--bind", default=DEFAULT_BIND, help=f"addr:port (default {DEFAULT_BIND})")
    parser.add_argument("--static", help="directory with the web editor bundle")
    parser.add_argument("--node-budget", type=int, default=100_000)
    args = parser.parse_args(argv)
    store = os.environ.get("CNLWIKI_STORE") or args.store
    if not store:
        parser.error("--store is required (or set CNLWIKI_STORE)")
    host, _, port = args.bind.rpartition(":")
    wiki = Wiki(store_path=store, node_budget=args.node_budget)
    if not os.path.exists(store):
        from .wiki import save

        save(wiki.snapshot(), store)
    app = create_app(wiki, static_dir=args.static)

    import uvicorn

    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
