"""Grammar bundles: the per-language data files that drive the parser.

A bundle names the root node type, the comment/string syntax, and the
import/function matcher configurations. Bundles load from a directory so
deployments can adjust or extend them without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class LineComment:
    marker: str
    guard: str | None = None  # e.g. "haskell_operator"


@dataclass(frozen=True)
class BlockComment:
    open: str
    close: str
    nested: bool = False


@dataclass(frozen=True)
class StringSyntax:
    open: str
    close: str
    escape: str | None = "\\"


@dataclass(frozen=True)
class ImportMatcher:
    node_type: str
    keywords: tuple[str, ...]  # keyword sequence, e.g. ("open", "import")
    modifiers: tuple[str, ...] = ()  # optional tokens allowed before the keyword
    end: str = "line"  # line | semicolon | balanced_line | group_or_line
    payload: str = "dotted_list"
    path_separators: tuple[str, ...] = (".",)
    strip_words: tuple[str, ...] = ()
    not_followed_by: str = ""


@dataclass(frozen=True)
class FunctionMatcher:
    style: str  # keyword | c_signature | objc_method | equation
    node_type: str
    keywords: tuple[str, ...] = ()
    body: str = "brace"  # brace | indent | brace_or_expr
    allow_receiver: bool = False
    allow_generics: bool = False
    signature_marker: str = ""  # equation style: marker of type-signature lines
    keyword_blacklist: tuple[str, ...] = ()


@dataclass(frozen=True)
class GrammarBundle:
    language: str
    root_node_type: str
    line_comments: tuple[LineComment, ...] = ()
    block_comments: tuple[BlockComment, ...] = ()
    line_comment_node_type: str = "comment"
    block_comment_node_type: str = "comment"
    strings: tuple[StringSyntax, ...] = ()
    imports: tuple[ImportMatcher, ...] = ()
    functions: tuple[FunctionMatcher, ...] = field(default_factory=tuple)


def _bundle_from_payload(payload: dict) -> GrammarBundle:
    comments = payload.get("comments", {})
    return GrammarBundle(
        language=payload["language"],
        root_node_type=payload["root_node_type"],
        line_comments=tuple(
            LineComment(marker=m["marker"], guard=m.get("guard"))
            for m in comments.get("line", [])
        ),
        block_comments=tuple(
            BlockComment(open=m["open"], close=m["close"], nested=m.get("nested", False))
            for m in comments.get("block", [])
        ),
        line_comment_node_type=comments.get("line_node_type", "comment"),
        block_comment_node_type=comments.get("block_node_type", "comment"),
        strings=tuple(
            StringSyntax(open=s["open"], close=s["close"], escape=s.get("escape"))
            for s in payload.get("strings", [])
        ),
        imports=tuple(
            ImportMatcher(
                node_type=m["node_type"],
                keywords=tuple(m["keywords"]),
                modifiers=tuple(m.get("modifiers", ())),
                end=m.get("end", "line"),
                payload=m.get("payload", "dotted_list"),
                path_separators=tuple(m.get("path_separators", (".",))),
                strip_words=tuple(m.get("strip_words", ())),
                not_followed_by=m.get("not_followed_by", ""),
            )
            for m in payload.get("imports", [])
        ),
        functions=tuple(
            FunctionMatcher(
                style=m["style"],
                node_type=m["node_type"],
                keywords=tuple(m.get("keywords", ())),
                body=m.get("body", "brace"),
                allow_receiver=m.get("allow_receiver", False),
                allow_generics=m.get("allow_generics", False),
                signature_marker=m.get("signature_marker", ""),
                keyword_blacklist=tuple(m.get("keyword_blacklist", ())),
            )
            for m in payload.get("functions", [])
        ),
    )


class GrammarDirectory:
    """Loads and caches grammar bundles from a directory of JSON files."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._cache: dict[str, GrammarBundle] = {}

    def available(self) -> list[str]:
        return sorted(p.stem for p in self.path.glob("*.json"))

    def load(self, language: str) -> GrammarBundle:
        if language not in self._cache:
            file = self.path / f"{language}.json"
            if not file.is_file():
                raise FileNotFoundError(
                    f"no grammar bundle for language {language!r} in {self.path}"
                )
            self._cache[language] = _bundle_from_payload(
                json.loads(file.read_text("utf-8"))
            )
        return self._cache[language]


@lru_cache(maxsize=1)
def default_grammars() -> GrammarDirectory:
    return GrammarDirectory(str(resources.files("codeprof.data").joinpath("grammars")))
