"""Single-pass string/comment scanner shared by every grammar bundle.

Produces the comment regions (one per comment token) and a "blanked" copy of
the source in which string and comment interiors are replaced by spaces
(newlines preserved), so structural matchers never fire inside literals.
"""

from __future__ import annotations

from dataclasses import dataclass

#: operator characters that disqualify a Haskell-family ``--`` line comment
_OPERATOR_TAIL = frozenset(b"!#$%&*+./<=>?@\\^|~:")

_IDENT_BYTES = frozenset(
    b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"
)


def is_ident_byte(b: int) -> bool:
    return b in _IDENT_BYTES or b >= 0x80


@dataclass(frozen=True)
class Region:
    start: int
    end: int
    kind: str  # "line_comment" | "block_comment" | "string" | "error"


@dataclass(frozen=True)
class LexResult:
    regions: tuple[Region, ...]
    blanked: bytes  # literal interiors spaced out, newlines kept


def _blank(buf: bytearray, start: int, end: int) -> None:
    for i in range(start, end):
        if buf[i] not in (0x0A, 0x0D):
            buf[i] = 0x20


def scan(source: bytes, grammar) -> LexResult:
    """Scan ``source`` for strings and comments per the grammar bundle."""
    line_markers = [(m.marker.encode(), m.guard) for m in grammar.line_comments]
    block_markers = [
        (b.open.encode(), b.close.encode(), b.nested) for b in grammar.block_comments
    ]
    strings = [
        (s.open.encode(), s.close.encode(), s.escape.encode() if s.escape else b"")
        for s in grammar.strings
    ]
    # longest opener first so (e.g.) triple quotes win over single quotes
    strings.sort(key=lambda s: -len(s[0]))

    regions: list[Region] = []
    blanked = bytearray(source)
    i, n = 0, len(source)

    while i < n:
        matched = False

        for opener, closer, nested in block_markers:
            if source.startswith(opener, i):
                end, ok = _scan_block(source, i, opener, closer, nested)
                regions.append(Region(i, end, "block_comment" if ok else "error"))
                _blank(blanked, i, end)
                i = end
                matched = True
                break
        if matched:
            continue

        for marker, guard in line_markers:
            if source.startswith(marker, i) and _guard_ok(source, i, marker, guard):
                end = source.find(b"\n", i)
                end = n if end < 0 else end
                regions.append(Region(i, end, "line_comment"))
                _blank(blanked, i, end)
                i = end
                matched = True
                break
        if matched:
            continue

        for opener, closer, escape in strings:
            if source.startswith(opener, i):
                end = _scan_string(source, i, opener, closer, escape)
                regions.append(Region(i, end, "string"))
                _blank(blanked, i + len(opener), max(i + len(opener), end - len(closer)))
                i = end
                matched = True
                break
        if matched:
            continue

        i += 1

    return LexResult(regions=tuple(regions), blanked=bytes(blanked))


def _guard_ok(source: bytes, i: int, marker: bytes, guard: str | None) -> bool:
    if guard == "haskell_operator":
        # consume the full dash run; a trailing operator char means this is an
        # operator like -->, not a comment
        j = i + len(marker)
        while j < len(source) and source[j : j + 1] == b"-":
            j += 1
        return j >= len(source) or source[j] not in _OPERATOR_TAIL
    return True


def _scan_block(
    source: bytes, i: int, opener: bytes, closer: bytes, nested: bool
) -> tuple[int, bool]:
    depth = 1
    j = i + len(opener)
    n = len(source)
    while j < n:
        if nested and source.startswith(opener, j):
            depth += 1
            j += len(opener)
        elif source.startswith(closer, j):
            depth -= 1
            j += len(closer)
            if depth == 0:
                return j, True
        else:
            j += 1
    return n, False  # unterminated


def _scan_string(source: bytes, i: int, opener: bytes, closer: bytes, escape: bytes) -> int:
    j = i + len(opener)
    n = len(source)
    single_line = len(opener) == 1 and opener not in (b"`",)
    while j < n:
        if escape and source.startswith(escape, j):
            j += len(escape) + 1
        elif source.startswith(closer, j):
            return j + len(closer)
        elif single_line and source[j : j + 1] == b"\n":
            return j  # unterminated single-line literal: stop at EOL
        else:
            j += 1
    return n
