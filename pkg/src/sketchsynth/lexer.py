"""Tokenizer for the subject language.

Sketch extensions get their own token kinds: ``??`` (HOLE), ``{|`` (LCHOICE),
``|}`` (RCHOICE), and the ``minrepeat``/``harness``/``generator`` keywords.
Comments and whitespace are discarded; every token carries a SourceSpan.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast_nodes import SourceSpan
from .errors import LexError

KEYWORDS = {
    "class", "interface", "extends", "implements", "new", "return",
    "if", "else", "while", "assert", "this", "true", "false", "null",
    "static", "final", "public", "private", "protected", "abstract",
    "void", "int", "boolean", "char",
    "minrepeat", "harness", "generator",
}

# multi-char operators first so maximal munch works by ordered scan
SYMBOLS = [
    "??", "{|", "|}", "==", "!=", "<=", ">=", "&&", "||",
    "{", "}", "(", ")", ";", ",", ".", "<", ">",
    "+", "-", "*", "/", "%", "=", "!",
]


@dataclass(frozen=True)
class Token:
    kind: str   # keyword text, symbol text, or IDENT/INT/STRING/CHAR/EOF
    text: str
    span: SourceSpan

    def __repr__(self):
        return f"Token({self.kind!r}, {self.text!r})"


def tokenize(source_text, file_id="<input>"):
    """Scan ``source_text`` into a token list (without the trailing EOF)."""
    toks = []
    i = 0
    line = 1
    col = 1
    n = len(source_text)
    file_id = str(file_id)

    def span(length, l=None, c=None):
        return SourceSpan(file_id, l if l is not None else line, c if c is not None else col, length)

    def advance(text):
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    while i < n:
        ch = source_text[i]
        if ch in " \t\r\n":
            advance(ch)
            i += 1
            continue
        if source_text.startswith("//", i):
            end = source_text.find("\n", i)
            end = n if end < 0 else end
            advance(source_text[i:end])
            i = end
            continue
        if source_text.startswith("/*", i):
            end = source_text.find("*/", i + 2)
            if end < 0:
                raise LexError("unterminated block comment", span(2))
            advance(source_text[i:end + 2])
            i = end + 2
            continue
        if ch.isdigit():
            j = i
            while j < n and source_text[j].isdigit():
                j += 1
            text = source_text[i:j]
            toks.append(Token("INT", text, span(len(text))))
            advance(text)
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source_text[j].isalnum() or source_text[j] == "_"):
                j += 1
            text = source_text[i:j]
            kind = text if text in KEYWORDS else "IDENT"
            toks.append(Token(kind, text, span(len(text))))
            advance(text)
            i = j
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while True:
                if j >= n or source_text[j] == "\n":
                    raise LexError("unterminated string literal", span(j - i))
                c = source_text[j]
                if c == '"':
                    break
                if c == "\\":
                    if j + 1 >= n:
                        raise LexError("unterminated string literal", span(j - i))
                    buf.append(_unescape(source_text[j + 1], span(2)))
                    j += 2
                else:
                    buf.append(c)
                    j += 1
            raw = source_text[i:j + 1]
            toks.append(Token("STRING", "".join(buf), span(len(raw))))
            advance(raw)
            i = j + 1
            continue
        if ch == "'":
            j = i + 1
            if j < n and source_text[j] == "\\":
                if j + 2 >= n or source_text[j + 2] != "'":
                    raise LexError("malformed char literal", span(2))
                value = _unescape(source_text[j + 1], span(2))
                raw = source_text[i:j + 3]
            else:
                if j + 1 >= n or source_text[j + 1] != "'":
                    raise LexError("malformed char literal", span(2))
                value = source_text[j]
                raw = source_text[i:j + 2]
            toks.append(Token("CHAR", value, span(len(raw))))
            advance(raw)
            i += len(raw)
            continue
        for sym in SYMBOLS:
            if source_text.startswith(sym, i):
                toks.append(Token(sym, sym, span(len(sym))))
                advance(sym)
                i += len(sym)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", span(1))
    return toks


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"', "0": "\0"}


def _unescape(ch, at):
    try:
        return _ESCAPES[ch]
    except KeyError:
        raise LexError(f"unknown escape '\\{ch}'", at) from None
