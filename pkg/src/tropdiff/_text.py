"""Small helpers shared by the literal parsers."""

from __future__ import annotations

from .errors import ParseError

_OPEN = "({["
_CLOSE = ")}]"


def split_top(text: str, seps: str, offset: int = 0):
    """Split ``text`` at top-level occurrences of characters in ``seps``.

    Returns ``(sep, piece, start)`` triples where ``sep`` is the separator that
    preceded the piece ("" for the first one).  A ``-`` directly after ``^``
    or ``/`` or at the very start is treated as a sign, not a separator.
    """
    pieces = []
    depth = 0
    start = 0
    prev_sep = ""
    last_nonspace = ""
    for i, ch in enumerate(text):
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced closing bracket", text, offset + i)
        elif depth == 0 and ch in seps:
            is_sign = ch == "-" and last_nonspace in ("", "^", "/", "*", "+", "-")
            if not is_sign:
                pieces.append((prev_sep, text[start:i], offset + start))
                prev_sep = ch
                start = i + 1
                last_nonspace = ch
                continue
        if not ch.isspace():
            last_nonspace = ch
    if depth != 0:
        raise ParseError("unbalanced opening bracket", text, offset + len(text))
    pieces.append((prev_sep, text[start:], offset + start))
    return pieces


def strip_parens(text: str) -> str:
    """Remove one pair of enclosing parentheses if they wrap the whole string."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        return s
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0 and i != len(s) - 1:
                return s
    return s[1:-1].strip()
