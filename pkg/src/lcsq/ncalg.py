"""Words, sparse noncommutative polynomials over the integers, and a parser.

A word is a tuple of generator indices; the empty tuple is the unit.
Polynomials are immutable maps from words to nonzero Python ints.

>>> x, y = NcPoly.gen(0), NcPoly.gen(1)
>>> print(commutator(x, commutator(x, y)))
x^2*y - 2*x*y*x + y*x^2
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Iterable, Mapping, Sequence

Word = tuple  # tuple[int, ...]

_LETTERS = "xyzw"


class ParseError(ValueError):
    """Syntax or semantic error in polynomial text, with a character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def variable_names(n: int) -> list[str]:
    if n < 1:
        raise ValueError("need at least one generator")
    if n <= len(_LETTERS):
        return list(_LETTERS[:n])
    return [f"x{i + 1}" for i in range(n)]


def multidegree(word: Sequence[int], n: int) -> tuple[int, ...]:
    deg = [0] * n
    for letter in word:
        deg[letter] += 1
    return tuple(deg)


def multinomial(delta: Sequence[int]) -> int:
    out = factorial(sum(delta))
    for e in delta:
        out //= factorial(e)
    return out


@lru_cache(maxsize=4096)
def _words(delta: tuple[int, ...]) -> tuple[Word, ...]:
    if not any(delta):
        return ((),)
    out = []
    for i, e in enumerate(delta):
        if e:
            rest = delta[:i] + (e - 1,) + delta[i + 1:]
            out.extend((i,) + w for w in _words(rest))
    return tuple(out)


def enumerate_words(delta: Sequence[int]) -> tuple[Word, ...]:
    """All words of multidegree ``delta`` in lexicographic order."""
    delta = tuple(delta)
    if any(e < 0 for e in delta):
        raise ValueError(f"negative exponent in multidegree {delta}")
    return _words(delta)


def enumerate_words_total(n: int, d: int) -> tuple[Word, ...]:
    """All ``n**d`` words of length ``d`` in lexicographic order."""
    if d < 0:
        raise ValueError("negative degree")
    return tuple(product(range(n), repeat=d))


class NcPoly:
    """An element of the free associative ring Z<x_1..x_n>.

    The generator count is not stored; it is a property of the
    :class:`Presentation` a polynomial is used with.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        acc: dict[Word, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            w = tuple(w)
            acc[w] = acc.get(w, 0) + int(c)
        self._terms = {w: c for w, c in sorted(acc.items(), key=_word_order) if c}
        self._hash = None

    @classmethod
    def gen(cls, i: int) -> NcPoly:
        return cls({(i,): 1})

    @classmethod
    def word(cls, w: Sequence[int], coeff: int = 1) -> NcPoly:
        return cls({tuple(w): coeff})

    @classmethod
    def const(cls, c: int) -> NcPoly:
        return cls({(): c})

    @property
    def terms(self) -> dict[Word, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def words(self) -> list[Word]:
        return list(self._terms)

    def coeff(self, w: Sequence[int]) -> int:
        return self._terms.get(tuple(w), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = NcPoly.const(other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> NcPoly:
        other = _coerce(other)
        return NcPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> NcPoly:
        return NcPoly({w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> NcPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> NcPoly:
        return _coerce(other) - self

    def __mul__(self, other) -> NcPoly:
        if isinstance(other, int):
            return NcPoly({w: c * other for w, c in self._terms.items()})
        return multiply(self, other)

    def __rmul__(self, other) -> NcPoly:
        if isinstance(other, int):
            return self * other
        return multiply(_coerce(other), self)

    def __pow__(self, e: int) -> NcPoly:
        if e < 0:
            raise ValueError("negative power")
        out = NcPoly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {len(w) for w in self._terms}

    def total_degree(self) -> int:
        """Degree of a homogeneous polynomial; raises otherwise."""
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError(f"{self} is not homogeneous")
        return degs.pop()

    def multidegrees(self, n: int) -> set[tuple[int, ...]]:
        return {multidegree(w, n) for w in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_multihomogeneous(self, n: int) -> bool:
        return len(self.multidegrees(n)) <= 1

    def max_generator(self) -> int:
        return max((max(w) for w in self._terms if w), default=-1)

    def render(self, n: int | None = None) -> str:
        return render_poly(self, n)

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"NcPoly({render_poly(self)!r})"


def _word_order(item):
    w = item[0]
    return (len(w), w)


def _coerce(p) -> NcPoly:
    if isinstance(p, NcPoly):
        return p
    if isinstance(p, int):
        return NcPoly.const(p)
    raise TypeError(f"cannot treat {p!r} as a polynomial")


def multiply(p: NcPoly, q: NcPoly) -> NcPoly:
    acc: dict[Word, int] = {}
    for u, a in p.items():
        for v, b in q.items():
            w = u + v
            acc[w] = acc.get(w, 0) + a * b
    return NcPoly(acc)


def commutator(p: NcPoly, q: NcPoly) -> NcPoly:
    """``[p, q] = pq - qp``."""
    return multiply(p, q) - multiply(q, p)


def abelianize(p: NcPoly, n: int) -> dict[tuple[int, ...], int]:
    """Image of ``p`` in the commutative ring Z[x_1..x_n], keyed by exponent vector."""
    acc: dict[tuple[int, ...], int] = {}
    for w, c in p.items():
        e = multidegree(w, n)
        acc[e] = acc.get(e, 0) + c
    return {e: c for e, c in acc.items() if c}


def render_poly(p: NcPoly, n: int | None = None) -> str:
    if n is None:
        n = max(p.max_generator() + 1, 1)
    names = variable_names(max(n, 1))
    if p.is_zero():
        return "0"
    parts = []
    for w, c in p.items():
        factors = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = names[w[i]]
            factors.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+|[a-zA-Z]\w*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", m.group(1), start))
        elif m.group(2):
            out.append(("var", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            out.append((ch, ch, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0
        names = variable_names(n)
        self.vars = {name: k for k, name in enumerate(names)}
        for k in range(n):
            self.vars.setdefault(f"x{k + 1}", k)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str | None = None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind}, found {what}", tok[2], self.text)
        self.i += 1
        return tok

    def poly(self) -> NcPoly:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            acc = acc + self.term() * sign
        return acc

    def term(self) -> NcPoly:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            acc = NcPoly.const(int(tok[1]))
        else:
            acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> NcPoly:
        tok = self.peek()
        if tok[0] == "var":
            self.take()
            if tok[1] not in self.vars:
                raise ParseError(f"unknown variable {tok[1]!r} for n={self.n}", tok[2], self.text)
            base = NcPoly.gen(self.vars[tok[1]])
        elif tok[0] == "(":
            self.take()
            base = self.poly()
            self.take(")")
        else:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected variable, found {what}", tok[2], self.text)
        if self.peek()[0] == "^":
            self.take()
            etok = self.peek()
            if etok[0] == "-":
                raise ParseError("exponent must be at least 1", etok[2], self.text)
            e = int(self.take("int")[1])
            if e < 1:
                raise ParseError("exponent must be at least 1", etok[2], self.text)
            base = base ** e
        return base


def parse_poly(text: str, n: int) -> NcPoly:
    """Parse ``text`` into a polynomial in ``n`` noncommuting generators.

    Products must be written with ``*``; ``^`` binds tighter than ``*``.
    Parenthesised subexpressions are accepted as factors.

    >>> print(parse_poly("y*x - 3*x*y", 2))
    -3*x*y + y*x
    """
    p = _Parser(text, n)
    if p.peek()[0] == "end":
        raise ParseError("empty polynomial", 0, text)
    out = p.poly()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2], text)
    return out


@dataclass(frozen=True)
class Presentation:
    """``Z<x_1..x_n> / (relation)`` with a chosen grading mode.

    ``grading_mode`` is ``"multi"`` (multidegree cells) or ``"total"``.
    Passing ``None`` selects multidegree whenever the relation allows it.
    """

    n: int
    relation: NcPoly | None = None
    grading_mode: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("generator count must be at least 1")
        rel = self.relation
        if rel is not None:
            if rel.is_zero():
                object.__setattr__(self, "relation", None)
                rel = None
            else:
                if rel.max_generator() >= self.n:
                    raise ValueError(f"relation uses a generator beyond n={self.n}")
                if not rel.is_homogeneous():
                    raise ValueError(f"relation {rel.render(self.n)} is not homogeneous")
                if rel.total_degree() < 1:
                    raise ValueError("relation must have positive degree")
        mode = self.grading_mode
        if mode is None:
            mode = "multi" if self.multihomogeneous else "total"
            object.__setattr__(self, "grading_mode", mode)
        if mode not in ("multi", "total"):
            raise ValueError(f"unknown grading mode {mode!r}")
        if mode == "multi" and not self.multihomogeneous:
            raise GradingError(
                f"relation {rel.render(self.n)} is not multihomogeneous; use total grading")

    @classmethod
    def parse(cls, n: int, relation: str | None = None, grading_mode: str | None = None):
        rel = parse_poly(relation, n) if relation else None
        return cls(n, rel, grading_mode)

    @property
    def multihomogeneous(self) -> bool:
        return self.relation is None or self.relation.is_multihomogeneous(self.n)

    @property
    def relation_text(self) -> str | None:
        return None if self.relation is None else self.relation.render(self.n)

    def free(self) -> Presentation:
        return Presentation(self.n)


class GradingError(ValueError):
    """A cell or grading mode the presentation's relation does not support."""
