"""Statement-level construct detection over the blanked source.

Matchers work on the lexer's blanked bytes (literals spaced out), so keywords
inside strings or comments never fire. They emit flat RawNode lists; the
parser assembles them into a tree by span containment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .grammars import FunctionMatcher, GrammarBundle, ImportMatcher
from .lexer import is_ident_byte

_WS = b" \t"
_OPEN = {ord("("): ord(")"), ord("["): ord("]"), ord("{"): ord("}")}
_CLOSE = set(_OPEN.values())

#: tokens that can never be a function name in c-signature languages
C_SIG_BLACKLIST = frozenset(
    {
        "if", "for", "while", "switch", "catch", "return", "sizeof", "foreach",
        "synchronized", "using", "new", "delete", "throw", "assert", "typeof",
        "typeid", "decltype", "alignof", "static_assert", "version", "lock",
        "fixed", "do", "else", "case",
    }
)

EQUATION_BLACKLIST = frozenset(
    {
        "module", "import", "open", "data", "type", "newtype", "class",
        "instance", "where", "infix", "infixl", "infixr", "deriving",
        "foreign", "let", "in", "do", "if", "then", "else", "case", "of",
        "port", "effect", "record", "postulate", "mutual", "private",
        "abstract", "field", "constructor",
    }
)

#: leading words folded into a keyword-style function's span (pub fn, export
#: async function, private suspend fun, ...)
_FUNC_MODIFIERS = frozenset(
    {
        "pub", "export", "default", "async", "static", "private", "public",
        "protected", "internal", "suspend", "inline", "override", "final",
        "sealed", "open", "tailrec", "operator", "unsafe", "const", "extern",
        "declare", "abstract", "external", "implicit", "lazy", "crate",
    }
)


@dataclass(frozen=True)
class RawNode:
    start: int
    end: int
    node_type: str
    hint: int = 0  # orders same-span nesting: smaller hint is the outer node


def iter_lines(blanked: bytes):
    """Yield (start, end) spans of each line, end excluding the newline."""
    start = 0
    n = len(blanked)
    while start <= n - 1:
        end = blanked.find(b"\n", start)
        if end < 0:
            yield start, n
            return
        yield start, end
        start = end + 1
    if n == 0:
        yield 0, 0


def _skip_ws(buf: bytes, i: int, end: int) -> int:
    while i < end and buf[i] in _WS:
        i += 1
    return i


def _word_at(buf: bytes, i: int, word: bytes) -> bool:
    if not buf.startswith(word, i):
        return False
    j = i + len(word)
    before_ok = i == 0 or not is_ident_byte(buf[i - 1])
    after_ok = j >= len(buf) or not is_ident_byte(buf[j])
    return before_ok and after_ok


def _read_ident(buf: bytes, i: int, extra: bytes = b"$") -> tuple[int, int]:
    start = i
    n = len(buf)
    while i < n and (is_ident_byte(buf[i]) or buf[i] in extra):
        i += 1
    return start, i


def _match_close(buf: bytes, i: int, open_byte: int, close_byte: int) -> int:
    """Index just past the close matching the opener at ``i``; -1 if none."""
    depth = 0
    n = len(buf)
    while i < n:
        b = buf[i]
        if b == open_byte:
            depth += 1
        elif b == close_byte:
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return -1


def _line_indent(blanked: bytes, line_start: int) -> int:
    i = line_start
    indent = 0
    while i < len(blanked) and blanked[i] in _WS:
        indent += 8 if blanked[i] == 9 else 1
        i += 1
    return indent


def _line_start_of(blanked: bytes, pos: int) -> int:
    nl = blanked.rfind(b"\n", 0, pos)
    return nl + 1


def _line_end_of(blanked: bytes, pos: int) -> int:
    nl = blanked.find(b"\n", pos)
    return len(blanked) if nl < 0 else nl


# ---------------------------------------------------------------------------
# imports
# ---------------------------------------------------------------------------


def find_imports(source: bytes, blanked: bytes, grammar: GrammarBundle) -> list[RawNode]:
    nodes: list[RawNode] = []
    resume = 0
    for line_start, line_end in iter_lines(blanked):
        if line_start < resume:
            continue
        p = _skip_ws(blanked, line_start, line_end)
        if p >= line_end:
            continue
        for matcher in grammar.imports:
            hit = _match_import(source, blanked, p, line_end, matcher)
            if hit is not None:
                span_end, children = hit
                nodes.append(RawNode(p, span_end, matcher.node_type, hint=0))
                nodes.extend(children)
                resume = span_end
                break
    return nodes


def _match_import(
    source: bytes, blanked: bytes, p: int, line_end: int, matcher: ImportMatcher
):
    q = p
    # optional leading modifiers (e.g. rust `pub use`)
    changed = True
    while changed:
        changed = False
        for mod in matcher.modifiers:
            word = mod.encode()
            if _word_at(blanked, q, word):
                q = _skip_ws(blanked, q + len(word), line_end)
                changed = True
                break
    for keyword in matcher.keywords:
        word = keyword.encode()
        if not _word_at(blanked, q, word):
            return None
        q = _skip_ws(blanked, q + len(word), line_end)
    if matcher.not_followed_by and blanked[q : q + 1] == matcher.not_followed_by.encode():
        return None

    span_end = _find_import_end(blanked, p, q, line_end, matcher.end)
    children = _decorate_import(source, blanked, p, q, span_end, matcher)
    return span_end, children


def _find_import_end(blanked: bytes, start: int, content: int, line_end: int, mode: str) -> int:
    n = len(blanked)
    if mode == "line":
        return line_end
    if mode == "semicolon":
        depth = 0
        i = content
        limit = min(n, content + 4000)
        while i < limit:
            b = blanked[i]
            if b in _OPEN:
                depth += 1
            elif b in _CLOSE:
                depth = max(0, depth - 1)
            elif b == ord(";") and depth == 0:
                return i + 1
            i += 1
        return line_end
    if mode == "balanced_line":
        depth = 0
        i = content
        while i < n:
            b = blanked[i]
            if b in _OPEN:
                depth += 1
            elif b in _CLOSE:
                depth = max(0, depth - 1)
            elif b == ord("\n") and depth == 0:
                break
            i += 1
        end = min(i, n)
        # optional trailing semicolon on the closing line
        j = _skip_ws(blanked, end if end == i else end, n)
        if j < n and blanked[j : j + 1] == b";":
            return j + 1
        return end
    if mode == "group_or_line":
        if blanked[content : content + 1] == b"(":
            close = _match_close(blanked, content, ord("("), ord(")"))
            if close > 0:
                return close
        return line_end
    raise ValueError(f"unknown import end mode {mode!r}")


_PATH_EXTRA = b".:/$-"


def _path_token(source: bytes, i: int, end: int) -> tuple[int, int]:
    start = i
    while i < end and (is_ident_byte(source[i]) or source[i] in _PATH_EXTRA):
        i += 1
    # trim trailing separators (e.g. the dot in "a.b.{C, D}")
    while i > start and source[i - 1] in _PATH_EXTRA:
        i -= 1
    return start, i


def _split_top_level(blanked: bytes, start: int, end: int, sep: int):
    """Spans between top-level ``sep`` bytes (nesting-aware)."""
    depth = 0
    item_start = start
    for i in range(start, end):
        b = blanked[i]
        if b in _OPEN:
            depth += 1
        elif b in _CLOSE:
            depth = max(0, depth - 1)
        elif b == sep and depth == 0:
            yield item_start, i
            item_start = i + 1
    yield item_start, end


def _dotted_name_nodes(
    source: bytes, start: int, end: int, separators: tuple[str, ...], node_type: str
) -> list[RawNode]:
    """A container node over the path at [start, end) plus identifier leaves."""
    if start >= end:
        return []
    nodes = [RawNode(start, end, node_type, hint=1)]
    text = source[start:end]
    pattern = b"|".join(re.escape(s.encode()) for s in separators)
    pos = 0
    for part in re.split(pattern, text) if pattern else [text]:
        offset = text.find(part, pos)
        pos = offset + len(part)
        if part:
            nodes.append(RawNode(start + offset, start + offset + len(part), "identifier", hint=2))
    return nodes


def _decorate_import(
    source: bytes, blanked: bytes, start: int, content: int, end: int, matcher: ImportMatcher
) -> list[RawNode]:
    payload = matcher.payload
    body_end = end
    if blanked[end - 1 : end] == b";":
        body_end = end - 1

    if payload == "include_path":
        m = re.search(rb"<[^>\n]*>|\"[^\"\n]*\"", source[content:body_end])
        if not m:
            return []
        node_type = "system_lib_string" if source[content + m.start()] == ord("<") else "string_literal"
        return [RawNode(content + m.start(), content + m.end(), node_type, hint=1)]

    if payload == "string_source":
        m = None
        for m in re.finditer(rb"'[^'\n]*'|\"[^\"\n]*\"", source[content:body_end]):
            pass
        if not m:
            return []
        return [RawNode(content + m.start(), content + m.end(), "string", hint=1)]

    if payload == "es_import":
        nodes: list[RawNode] = []
        last = None
        for last in re.finditer(rb"'[^'\n]*'|\"[^\"\n]*\"|`[^`\n]*`", source[content:body_end]):
            pass
        clause_end = body_end
        if last is not None:
            nodes.append(RawNode(content + last.start(), content + last.end(), "string", hint=1))
            clause_end = content + last.start()
            for m in re.finditer(rb"(?<!\w)from(?!\w)", blanked[content:clause_end]):
                clause_end = content + m.start()
        clause_start = _skip_ws(blanked, content, clause_end)
        while clause_end > clause_start and blanked[clause_end - 1] in _WS:
            clause_end -= 1
        if clause_end > clause_start:
            nodes.append(RawNode(clause_start, clause_end, "import_clause", hint=1))
            for m in re.finditer(rb"[A-Za-z_$][\w$]*", source[clause_start:clause_end]):
                word = m.group()
                if word not in (b"as", b"type", b"default"):
                    nodes.append(
                        RawNode(clause_start + m.start(), clause_start + m.end(), "identifier", hint=2)
                    )
        return nodes

    if payload == "go_group":
        nodes = []
        for m in re.finditer(rb"(?:(\w+|\.|_)[ \t]+)?(\"[^\"\n]*\"|`[^`\n]*`)", source[content:end]):
            spec_start = content + m.start()
            spec_end = content + m.end()
            nodes.append(RawNode(spec_start, spec_end, "import_spec", hint=1))
            nodes.append(
                RawNode(content + m.start(2), content + m.end(2), "interpreted_string_literal", hint=2)
            )
        return nodes

    if payload == "from_import":
        # <from-kw> module <import-kw> names
        kw_match = re.search(rb"(?<!\w)import(?!\w)", blanked[content:end])
        import_kw = content + kw_match.start() if kw_match else -1
        nodes = []
        module_start = _skip_ws(blanked, content, end)
        if import_kw > 0:
            m_start, m_end = _path_token(source, module_start, import_kw)
            nodes.extend(
                _dotted_name_nodes(source, m_start, m_end, matcher.path_separators, "dotted_name")
            )
            names_start = _skip_ws(blanked, import_kw + len(b"import"), end)
            for item_start, item_end in _split_top_level(blanked, names_start, body_end, ord(",")):
                i0 = _skip_ws(blanked, item_start, item_end)
                n_start, n_end = _path_token(source, i0, item_end)
                nodes.extend(
                    _dotted_name_nodes(source, n_start, n_end, matcher.path_separators, "dotted_name")
                )
        return nodes

    # default: dotted_list
    nodes = []
    list_start = _skip_ws(blanked, content, body_end)
    for word in matcher.strip_words:
        w = word.encode()
        if _word_at(blanked, list_start, w):
            list_start = _skip_ws(blanked, list_start + len(w), body_end)
    for item_start, item_end in _split_top_level(blanked, list_start, body_end, ord(",")):
        i0 = _skip_ws(blanked, item_start, item_end)
        p_start, p_end = _path_token(source, i0, item_end)
        nodes.extend(
            _dotted_name_nodes(source, p_start, p_end, matcher.path_separators, "dotted_name")
        )
    return nodes


# ---------------------------------------------------------------------------
# functions
# ---------------------------------------------------------------------------


def find_functions(source: bytes, blanked: bytes, grammar: GrammarBundle) -> list[RawNode]:
    nodes: list[RawNode] = []
    for matcher in grammar.functions:
        if matcher.style == "keyword":
            nodes.extend(_keyword_functions(blanked, matcher))
        elif matcher.style == "c_signature":
            nodes.extend(_c_signature_functions(blanked, matcher))
        elif matcher.style == "objc_method":
            nodes.extend(_objc_methods(blanked, matcher))
        elif matcher.style == "equation":
            nodes.extend(_equation_functions(blanked, matcher))
        else:
            raise ValueError(f"unknown function matcher style {matcher.style!r}")
    return nodes


def _keyword_functions(blanked: bytes, matcher: FunctionMatcher) -> list[RawNode]:
    nodes: list[RawNode] = []
    n = len(blanked)
    occurrences: list[tuple[int, bytes]] = []
    for keyword in matcher.keywords:
        word = keyword.encode()
        i = blanked.find(word)
        while i >= 0:
            if _word_at(blanked, i, word) and (i == 0 or blanked[i - 1: i] != b"."):
                occurrences.append((i, word))
            i = blanked.find(word, i + 1)
    occurrences.sort()

    for i, word in occurrences:
        j = _skip_ws(blanked, i + len(word), n)
        if blanked[j : j + 1] == b"*":  # generator functions
            j = _skip_ws(blanked, j + 1, n)
        if matcher.allow_generics and blanked[j : j + 1] == b"<":
            close = _match_close(blanked, j, ord("<"), ord(">"))
            if close < 0:
                continue
            j = _skip_ws(blanked, close, n)
        if matcher.allow_receiver and blanked[j : j + 1] == b"(":
            close = _match_close(blanked, j, ord("("), ord(")"))
            if close < 0:
                continue
            j = _skip_ws(blanked, close, n)
        name_start, name_end = _read_ident(blanked, j)
        if name_end == name_start:
            continue

        sig_end = name_end
        params = None
        for open_char, close_char in ((b"[", b"]"), (b"<", b">"), (b"(", b")")):
            k = _skip_ws(blanked, sig_end, n)
            if blanked[k : k + 1] == open_char:
                close = _match_close(blanked, k, open_char[0], close_char[0])
                if close < 0:
                    break
                if open_char == b"(":
                    params = (k, close)
                sig_end = close

        span = _function_body_span(blanked, i, sig_end, matcher.body)
        if span is None:
            continue
        span_end, block = span
        start = _modifier_run_start(blanked, i)
        nodes.append(RawNode(start, span_end, matcher.node_type, hint=0))
        nodes.append(RawNode(name_start, name_end, "identifier", hint=2))
        if params:
            nodes.append(RawNode(params[0], params[1], "parameters", hint=1))
        if block:
            nodes.append(RawNode(block[0], block[1], "block", hint=1))
    return nodes


def _modifier_run_start(blanked: bytes, keyword_pos: int) -> int:
    """Fold a line-leading run of modifier words (``pub``, ``export async``,
    ``pub(crate)``, ...) into the function span."""
    line_start = _line_start_of(blanked, keyword_pos)
    p = _skip_ws(blanked, line_start, keyword_pos)
    if p >= keyword_pos:
        return keyword_pos
    j = p
    while j < keyword_pos:
        word_start, word_end = _read_ident(blanked, j)
        if word_end == word_start:
            return keyword_pos
        if blanked[word_start:word_end].decode("ascii", "replace") not in _FUNC_MODIFIERS:
            return keyword_pos
        j = word_end
        if blanked[j : j + 1] == b"(":
            close = _match_close(blanked, j, ord("("), ord(")"))
            if close < 0 or close > keyword_pos:
                return keyword_pos
            j = close
        j = _skip_ws(blanked, j, keyword_pos)
    return p


def _function_body_span(blanked: bytes, start: int, sig_end: int, body_mode: str):
    n = len(blanked)
    if body_mode == "indent":
        def_line_start = _line_start_of(blanked, start)
        def_indent = _line_indent(blanked, def_line_start)
        i = _line_end_of(blanked, sig_end)
        depth = blanked.count(b"(", start, min(i, n)) - blanked.count(b")", start, min(i, n))
        last_content_end = i
        while i < n:
            line_start = i + 1
            line_end = _line_end_of(blanked, line_start)
            stripped = blanked[line_start:line_end].strip()
            if stripped and depth <= 0 and _line_indent(blanked, line_start) <= def_indent:
                break
            depth += blanked.count(b"(", line_start, line_end) - blanked.count(
                b")", line_start, line_end
            )
            if stripped:
                last_content_end = line_end
            i = line_end
        body_start = _line_end_of(blanked, sig_end)
        block = (body_start, last_content_end) if last_content_end > body_start else None
        return last_content_end, block

    i = sig_end
    saw_eq = False
    depth = 0
    while i < n:
        b = blanked[i]
        if depth == 0:
            if b == ord("{"):
                close = _match_close(blanked, i, ord("{"), ord("}"))
                if close < 0:
                    return _line_end_of(blanked, i), None
                return close, (i, close)
            if b == ord("}"):
                return None  # escaped the enclosing scope without a body
            if b == ord(";"):
                return i + 1, None
            if b == ord("=") and body_mode == "brace_or_expr":
                nxt = blanked[i + 1 : i + 2]
                prev = blanked[i - 1 : i]
                if nxt not in (b"=",) and prev not in (b"=", b"<", b">", b"!", b":"):
                    saw_eq = True
            if b == ord("\n") and body_mode == "brace_or_expr":
                if saw_eq:
                    # expression body: swallow indented continuation lines
                    end = _indented_continuation_end(blanked, start, i)
                    return end, (sig_end, end)
                return i, None
            # plain brace bodies may have multi-line headers (where-clauses)
        if b in _OPEN and not (depth == 0 and b == ord("{")):
            depth += 1
        elif b in _CLOSE and not (depth == 0 and b == ord("}")):
            depth = max(0, depth - 1)
        i += 1
    return n, None


def _indented_continuation_end(blanked: bytes, start: int, line_break: int) -> int:
    base_indent = _line_indent(blanked, _line_start_of(blanked, start))
    end = line_break
    i = line_break
    n = len(blanked)
    while i < n:
        line_start = i + 1
        line_end = _line_end_of(blanked, line_start)
        stripped = blanked[line_start:line_end].strip()
        if stripped:
            if _line_indent(blanked, line_start) <= base_indent:
                break
            end = line_end
        i = line_end
    return end


def _c_signature_functions(blanked: bytes, matcher: FunctionMatcher) -> list[RawNode]:
    nodes: list[RawNode] = []
    blacklist = set(matcher.keyword_blacklist) | C_SIG_BLACKLIST
    n = len(blanked)
    search = 0
    while True:
        i = blanked.find(b"(", search)
        if i < 0:
            break
        search = i + 1

        k = i
        while k > 0 and blanked[k - 1] in _WS:
            k -= 1
        name_end = k
        while k > 0 and (is_ident_byte(blanked[k - 1]) or blanked[k - 1 : k] == b"~"):
            k -= 1
        name_start = k
        if name_end == name_start:
            continue
        name = blanked[name_start:name_end].decode("ascii", "replace")
        if name in blacklist:
            continue
        if blanked[name_start - 1 : name_start] == b"." or blanked[
            name_start - 2 : name_start
        ] == b"->":
            continue
        w = name_start
        while w > 0 and blanked[w - 1] in _WS:
            w -= 1
        w_end = w
        while w > 0 and is_ident_byte(blanked[w - 1]):
            w -= 1
        if blanked[w:w_end] == b"new":
            continue

        close = _match_close(blanked, i, ord("("), ord(")"))
        if close < 0:
            continue
        body = _c_residue_body(blanked, close)
        if body is None:
            continue
        body_open, body_end = body
        line_start = _line_start_of(blanked, name_start)
        span_start = _skip_ws(blanked, line_start, name_start)
        nodes.append(RawNode(span_start, body_end, matcher.node_type, hint=0))
        nodes.append(RawNode(name_start, name_end, "identifier", hint=2))
        nodes.append(RawNode(i, close, "parameters", hint=1))
        nodes.append(RawNode(body_open, body_end, "block", hint=1))
        search = close
    return nodes


def _c_residue_body(blanked: bytes, i: int):
    """After a parameter list: find the body brace, rejecting calls/declarations.

    Tolerates specifier residue (const/noexcept/throws, trailing returns,
    constructor initializer lists); bails on ``;``, ``=``, an unbalanced close,
    or a scope boundary, all of which mean "not a definition body".
    """
    depth = 0
    n = len(blanked)
    while i < n:
        b = blanked[i]
        if b == ord("("):
            depth += 1
        elif b == ord(")"):
            if depth == 0:
                return None
            depth -= 1
        elif depth == 0:
            if b == ord("{"):
                close = _match_close(blanked, i, ord("{"), ord("}"))
                if close < 0:
                    return None
                return i, close
            if b in (ord(";"), ord("="), ord("}")):
                return None
        i += 1
    return None


def _objc_methods(blanked: bytes, matcher: FunctionMatcher) -> list[RawNode]:
    nodes: list[RawNode] = []
    for line_start, line_end in iter_lines(blanked):
        p = _skip_ws(blanked, line_start, line_end)
        if blanked[p : p + 1] not in (b"-", b"+"):
            continue
        q = _skip_ws(blanked, p + 1, line_end)
        if blanked[q : q + 1] != b"(":
            continue
        ret_close = _match_close(blanked, q, ord("("), ord(")"))
        if ret_close < 0:
            continue
        body = _c_residue_body(blanked, ret_close)
        if body is None:
            continue
        body_open, body_end = body
        nodes.append(RawNode(p, body_end, matcher.node_type, hint=0))
        name_start, name_end = _read_ident(blanked, _skip_ws(blanked, ret_close, body_open))
        if name_end > name_start:
            nodes.append(RawNode(name_start, name_end, "identifier", hint=2))
        nodes.append(RawNode(body_open, body_end, "block", hint=1))
    return nodes


_EQUATION_NAME = re.compile(rb"^[a-z_][A-Za-z0-9_']*")


def _equation_functions(blanked: bytes, matcher: FunctionMatcher) -> list[RawNode]:
    blacklist = set(matcher.keyword_blacklist) | EQUATION_BLACKLIST
    marker = matcher.signature_marker.encode() if matcher.signature_marker else b""
    nodes: list[RawNode] = []
    current: list | None = None  # [name, start, end, name_start, name_end]

    def finalize():
        nonlocal current
        if current is not None:
            _, start, end, n0, n1 = current
            nodes.append(RawNode(start, end, matcher.node_type, hint=0))
            nodes.append(RawNode(n0, n1, "identifier", hint=2))
            current = None

    for line_start, line_end in iter_lines(blanked):
        line = blanked[line_start:line_end]
        if not line.strip():
            continue
        if line[0] in _WS:  # continuation of the open equation group
            if current is not None:
                current[2] = line_end
            continue
        m = _EQUATION_NAME.match(line)
        if not m:
            finalize()
            continue
        name = m.group()
        if name.decode("ascii", "replace") in blacklist:
            finalize()
            continue
        after = _skip_ws(line, m.end(), len(line))
        if marker and line.startswith(marker, after):
            finalize()
            continue
        if not _has_top_level_eq(line):
            finalize()
            continue
        if current is not None and current[0] == name:
            current[2] = line_end
        else:
            finalize()
            current = [name, line_start, line_end, line_start + m.start(), line_start + m.end()]
    finalize()
    return nodes


def _has_top_level_eq(line: bytes) -> bool:
    depth = 0
    for i, b in enumerate(line):
        if b in _OPEN:
            depth += 1
        elif b in _CLOSE:
            depth = max(0, depth - 1)
        elif b == ord("=") and depth == 0:
            prev = line[i - 1 : i]
            nxt = line[i + 1 : i + 2]
            if prev not in (b"=", b"<", b">", b"!", b"/", b":") and nxt != b"=":
                return True
    return False
