"""Words over a generator alphabet.

A word is a tuple of ``(generator_index, exponent)`` syllables with nonzero
exponents and distinct indices on adjacent syllables.  Only syntactic
merging happens here; semantic reduction belongs to each group class.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

Word = tuple

EMPTY: Word = ()


def word(letters: Iterable[Sequence[int]] = ()) -> Word:
    """Build a word from ``(gen, exp)`` pairs, merging adjacent syllables."""
    out: list[list[int]] = []
    for g, e in letters:
        g, e = int(g), int(e)
        if g < 0:
            raise ValueError(f"negative generator index {g}")
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


def gen(i: int, e: int = 1) -> Word:
    return word([(i, e)])


def mul(*ws: Word) -> Word:
    return word(s for w in ws for s in w)


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def power(w: Word, n: int) -> Word:
    if n < 0:
        w, n = inverse(w), -n
    return word(s for _ in range(n) for s in w)


def free_reduce(w: Word) -> Word:
    """Free reduction; for syllable-merged words this is ``word`` itself."""
    return word(w)


def length(w: Word) -> int:
    return sum(abs(e) for _, e in w)


def letters(w: Word) -> list[tuple[int, int]]:
    """Expand into unit letters ``(gen, +-1)``."""
    out = []
    for g, e in w:
        s = 1 if e > 0 else -1
        out.extend([(g, s)] * abs(e))
    return out


def commutator(u: Word, v: Word) -> Word:
    """``u^-1 v^-1 u v``."""
    return mul(inverse(u), inverse(v), u, v)


def conjugate(u: Word, v: Word) -> Word:
    """``v^-1 u v``."""
    return mul(inverse(v), u, v)


def max_gen(w: Word) -> int:
    return max((g for g, _ in w), default=-1)


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Replace generator ``i`` by ``images[i]`` (a free-group homomorphism)."""
    parts = []
    for g, e in w:
        parts.append(power(images[g], e))
    return mul(*parts)


def from_json(data) -> Word:
    return word((int(g), int(e)) for g, e in data)


def to_json(w: Word) -> list[list[int]]:
    return [[g, e] for g, e in w]


# --- element grammar -------------------------------------------------------

class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1}: {text!r}")


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<op>[*^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text) - len(text[pos:].lstrip())
            raise WordSyntaxError("unexpected character", text, stripped)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_word(text: str, names: Mapping[str, int]) -> Word:
    """Parse ``expr := term ('*' term)*`` with ``term := atom ('^' int)?``.

    An atom is a generator name, a parenthesised expression, or ``1`` for the
    identity.
    """
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def advance():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr() -> Word:
        parts = [term()]
        while peek()[0] == "op" and peek()[1] == "*":
            advance()
            parts.append(term())
        return mul(*parts)

    def exponent() -> int:
        if peek()[0] == "op" and peek()[1] == "^":
            caret = advance()[2]
            kind, val, pos = peek()
            if kind != "int":
                raise WordSyntaxError("expected integer exponent after '^'", text, caret)
            advance()
            return int(val)
        return 1

    def term() -> Word:
        kind, val, pos = peek()
        if kind == "name":
            advance()
            if val not in names:
                raise WordSyntaxError(f"unknown generator {val!r}", text, pos)
            return gen(names[val], exponent())
        if kind == "int" and val == "1":
            advance()
            exponent()
            return EMPTY
        if kind == "op" and val == "(":
            advance()
            inner = expr()
            k2, v2, p2 = peek()
            if not (k2 == "op" and v2 == ")"):
                raise WordSyntaxError("expected ')'", text, p2)
            advance()
            return power(inner, exponent())
        raise WordSyntaxError("expected generator or '('", text, pos)

    if peek()[0] == "end":
        return EMPTY
    w = expr()
    kind, val, pos = peek()
    if kind != "end":
        raise WordSyntaxError(f"unexpected {val!r}", text, pos)
    return w


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    for g, e in w:
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
    return "*".join(parts)
