"""Tokenizer for the query subset.

Tracks line/column for every token so syntax errors can point at the
offending position.  Keywords are case-insensitive; identifiers keep their
case.  `1..3` lexes as INT DOTDOT INT, never as floats.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import QuerySyntaxError

KEYWORDS = {
    "MATCH", "WHERE", "RETURN", "AND", "OR", "NOT", "IN", "STARTS", "WITH",
    "DISTINCT", "ORDER", "BY", "ASC", "DESC", "LIMIT", "SKIP", "AS",
    "MERGE", "CREATE", "TRUE", "FALSE", "NULL", "IS",
    # Recognized only to reject them with a clear unsupported-feature error:
    "OPTIONAL", "UNION", "CALL", "UNWIND", "DELETE", "SET", "REMOVE", "FOREACH",
    "CONTAINS", "ENDS", "XOR", "CASE", "EXISTS",
}

SYMBOLS = (
    "<=", ">=", "<>", "<-", "->", "..",
    "(", ")", "[", "]", "{", "}", ":", ",", ".", "|", "-", "*",
    "=", "<", ">", "=~", "+", "/", "%", "^",
)


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD | IDENT | INT | FLOAT | STRING | PARAM | SYMBOL | EOF
    value: object
    line: int
    column: int

    @property
    def text(self) -> str:
        return str(self.value)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    # Longest symbols first so `<=` wins over `<`.
    symbols = sorted(SYMBOLS, key=len, reverse=True)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == "$":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i + 1:
                raise QuerySyntaxError("empty parameter name", line, col)
            tokens.append(Token("PARAM", text[i + 1:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            # A dot starts a fraction only if not the `..` range operator.
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            raw = text[i:j]
            tokens.append(Token("FLOAT" if is_float else "INT",
                                float(raw) if is_float else int(raw),
                                start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            upper = word.upper()
            if upper in KEYWORDS:
                tokens.append(Token("KEYWORD", upper, start_line, start_col))
            else:
                tokens.append(Token("IDENT", word, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch in ("'", '"'):
            quote = ch
            j = i + 1
            chars = []
            while j < n:
                c = text[j]
                if c == "\\":
                    if j + 1 >= n:
                        raise QuerySyntaxError("unterminated string", start_line, start_col)
                    esc = text[j + 1]
                    chars.append({"n": "\n", "t": "\t", "\\": "\\",
                                  "'": "'", '"': '"'}.get(esc, esc))
                    j += 2
                    continue
                if c == quote:
                    break
                if c == "\n":
                    raise QuerySyntaxError("unterminated string", start_line, start_col)
                chars.append(c)
                j += 1
            else:
                raise QuerySyntaxError("unterminated string", start_line, start_col)
            tokens.append(Token("STRING", "".join(chars), start_line, start_col))
            col += (j + 1) - i
            i = j + 1
            continue
        for sym in symbols:
            if text.startswith(sym, i):
                tokens.append(Token("SYMBOL", sym, start_line, start_col))
                col += len(sym)
                i += len(sym)
                break
        else:
            raise QuerySyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens
