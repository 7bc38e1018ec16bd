"""
Words, presentations and the small text format used to write them down.

A word is a tuple of ``(generator_index, exponent)`` pairs.  Generator
indices are dense integers; names only matter at the text boundary.

Conventions shared by the whole package:

    [x, y] = x y x^-1 y^-1        commutator
    x^y    = x y x^-1             left conjugation (``conj(x, y)``)

Text format::

    group S3 { gens: a, b; rels: a^2, b^3, (a*b)^2; }
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lattice import IntMatrix


class Word(tuple):
    """Freely reduced word, stored as ``((gen, exp), ...)``.

    Constructing a Word normalizes its letters, so ``Word([(0, 2), (0, -2)])``
    is the identity.
    """

    def __new__(cls, letters: Iterable[tuple[int, int]] = ()):
        return super().__new__(cls, _reduce(letters))

    @classmethod
    def gen(cls, i: int, exp: int = 1) -> "Word":
        return cls(((i, exp),))

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return Word(tuple.__add__(self, other))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** -n
        out = Word()
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self))

    def length(self) -> int:
        return sum(abs(e) for _, e in self)

    def flat(self) -> list[int]:
        """Letters as coset-table columns: ``2*g`` for g, ``2*g+1`` for g^-1."""
        out = []
        for g, e in self:
            col = 2 * g if e > 0 else 2 * g + 1
            out.extend([col] * abs(e))
        return out

    def generators(self) -> set[int]:
        return {g for g, _ in self}

    def rename(self, mapping: Sequence[int]) -> "Word":
        return Word((mapping[g], e) for g, e in self)

    def __repr__(self):
        return f"Word({tuple(self)!r})"


def _reduce(letters):
    out: list[list[int]] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


def normalize_word(w) -> Word:
    """Free reduction with exponent merging; idempotent."""
    return Word(w)


def comm(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


def conj(x: Word, y: Word) -> Word:
    """The left conjugate x y x^-1."""
    return x * y * x.inverse()


def cyclic_reduce(w: Word) -> Word:
    letters = list(w)
    while len(letters) > 1 and letters[0][0] == letters[-1][0]:
        g, e1 = letters[0]
        e2 = letters[-1][1]
        letters = letters[1:-1]
        if e1 + e2:
            letters = [(g, e1 + e2)] + letters
    return Word(letters)


@dataclass(frozen=True)
class Presentation:
    gens: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    name: str = "G"

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "relators", tuple(Word(r) for r in self.relators))
        if len(set(self.gens)) != len(self.gens):
            raise PresentationError("duplicate generator name")
        for name in self.gens:
            if not _IDENT.fullmatch(name):
                raise PresentationError(f"bad generator name {name!r}")
        k = len(self.gens)
        for r in self.relators:
            for g, _ in r:
                if not 0 <= g < k:
                    raise PresentationError(f"relator uses generator index {g} >= {k}")

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def gen(self, name: str) -> Word:
        return Word.gen(self.gens.index(name))

    def word(self, text: str) -> Word:
        """Parse a single word over this presentation's generators."""
        parser = _Parser(text)
        w = parser.word(self.gens)
        parser.expect_end()
        return w

    def __str__(self):
        return print_presentation(self)


class PresentationError(ValueError):
    pass


class PresentationSyntaxError(PresentationError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKEN = re.compile(
    r"(?P<ws>\s+|#[^\n]*)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<int>-?[0-9]+)"
    r"|(?P<punct>[{}\[\]();:,*^])"
)


class _Parser:
    def __init__(self, text: str):
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise PresentationSyntaxError(
                    f"unexpected character {text[pos]!r}", *_linecol(text, pos)
                )
            if m.lastgroup != "ws":
                self.toks.append((m.lastgroup, m.group(), *_linecol(text, pos)))
            pos = m.end()
        self.end = _linecol(text, len(text))
        self.i = 0

    def peek(self):
        if self.i < len(self.toks):
            return self.toks[self.i]
        return ("eof", "", *self.end)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = repr(value) if value else kind
            got = repr(tok[1]) if tok[0] != "eof" else "end of input"
            raise PresentationSyntaxError(f"expected {want}, got {got}", tok[2], tok[3])
        self.i += 1
        return tok

    def at(self, value):
        return self.peek()[1] == value and self.peek()[0] == "punct"

    def expect_end(self):
        self.take("eof")

    def presentation(self) -> Presentation:
        self.take("ident", "group")
        name = self.take("ident")[1]
        self.take("punct", "{")
        self.take("ident", "gens")
        self.take("punct", ":")
        gens = []
        seen = set()
        if not self.at(";"):
            while True:
                tok = self.take("ident")
                if tok[1] in seen:
                    raise PresentationSyntaxError(
                        f"duplicate generator {tok[1]!r}", tok[2], tok[3]
                    )
                seen.add(tok[1])
                gens.append(tok[1])
                if not self.at(","):
                    break
                self.take("punct", ",")
        self.take("punct", ";")
        self.take("ident", "rels")
        self.take("punct", ":")
        rels = []
        if not self.at(";"):
            while True:
                w = self.word(gens)
                if w:
                    rels.append(w)
                if not self.at(","):
                    break
                self.take("punct", ",")
        self.take("punct", ";")
        self.take("punct", "}")
        self.expect_end()
        return Presentation(tuple(gens), tuple(rels), name)

    def word(self, gens) -> Word:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            if tok[1] != "1":
                raise PresentationSyntaxError("only 1 may stand for a word", tok[2], tok[3])
            return Word()
        w = self.term(gens)
        while self.at("*"):
            self.take()
            w = w * self.term(gens)
        return w

    def term(self, gens) -> Word:
        tok = self.peek()
        if tok[0] == "ident":
            self.take()
            if tok[1] not in gens:
                raise PresentationSyntaxError(
                    f"undeclared generator {tok[1]!r}", tok[2], tok[3]
                )
            w = Word.gen(gens.index(tok[1]))
        elif self.at("["):
            self.take()
            x = self.word(gens)
            self.take("punct", ",")
            y = self.word(gens)
            self.take("punct", "]")
            w = comm(x, y)
        elif self.at("("):
            self.take()
            w = self.word(gens)
            self.take("punct", ")")
        else:
            got = repr(tok[1]) if tok[0] != "eof" else "end of input"
            raise PresentationSyntaxError(f"expected a term, got {got}", tok[2], tok[3])
        if self.at("^"):
            self.take()
            etok = self.take("int")
            e = int(etok[1])
            if e == 0:
                raise PresentationSyntaxError("exponent must be nonzero", etok[2], etok[3])
            w = w ** e
        return w


def _linecol(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_presentation(text: str) -> Presentation:
    """Parse the ``group NAME { gens: ...; rels: ...; }`` format.

    Raises PresentationSyntaxError (carrying ``line`` and ``col``) on bad
    input, duplicate generators or undeclared generators.  Identity
    relators are dropped.
    """
    return _Parser(text).presentation()


def print_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    for g, e in w:
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
    return "*".join(parts)


def print_presentation(p: Presentation) -> str:
    rels = ", ".join(print_word(r, p.gens) for r in p.relators)
    return f"group {p.name} {{ gens: {', '.join(p.gens)}; rels: {rels}; }}"


def direct_product(p: Presentation, q: Presentation, name=None) -> Presentation:
    """Disjoint union of generators, both relator sets, and all [g_p, g_q]."""
    k = p.ngens
    names = list(p.gens)
    taken = set(names)
    for nm in q.gens:
        new = nm
        i = 1
        while new in taken:
            new = f"{nm}_{i}"
            i += 1
        taken.add(new)
        names.append(new)
    shift = [k + i for i in range(q.ngens)]
    rels = list(p.relators) + [r.rename(shift) for r in q.relators]
    for i in range(k):
        for j in range(q.ngens):
            rels.append(comm(Word.gen(i), Word.gen(k + j)))
    return Presentation(tuple(names), tuple(rels), name or f"{p.name}x{q.name}")


def free_abelian(rank: int, prefix="z", name=None) -> Presentation:
    gens = tuple(f"{prefix}{i + 1}" for i in range(rank))
    rels = [comm(Word.gen(i), Word.gen(j)) for i in range(rank) for j in range(i + 1, rank)]
    return Presentation(gens, tuple(rels), name or f"Z{rank}")


def cyclic(n: int, gen="a", name=None) -> Presentation:
    return Presentation((gen,), (Word.gen(0, n),), name or f"C{n}")


def exponent_sums(w: Word, ngens: int) -> list[int]:
    row = [0] * ngens
    for g, e in w:
        row[g] += e
    return row


def abelianized_relation_matrix(p: Presentation) -> IntMatrix:
    """One row per relator, one column per generator, entries exponent sums."""
    return IntMatrix.from_rows([exponent_sums(r, p.ngens) for r in p.relators], p.ngens)


def same_up_to_renaming(p: Presentation, q: Presentation) -> dict | None:
    """Search for a signed renaming of generators carrying p's relators onto q's.

    Relators are compared as sets of cyclic words up to inversion, so
    ``t^3`` matches ``t^-3`` and ``[a, b]`` matches ``[b, a]``.  Returns the
    mapping ``{p_gen_name: q_word_text}`` or None.  Exhaustive; meant for
    the handful of generators in the named presentations.
    """
    from itertools import permutations, product

    if p.ngens != q.ngens or len(set(map(_cyclic_key, p.relators))) != len(
        set(map(_cyclic_key, q.relators))
    ):
        return None
    target = {_cyclic_key(r) for r in q.relators}
    k = p.ngens
    for perm in permutations(range(k)):
        for signs in product((1, -1), repeat=k):
            moved = set()
            for r in p.relators:
                moved.add(_cyclic_key(Word((perm[g], signs[g] * e) for g, e in r)))
            if moved == target:
                return {
                    p.gens[i]: q.gens[perm[i]] + ("" if signs[i] == 1 else "^-1")
                    for i in range(k)
                }
    return None


def _cyclic_key(w: Word):
    w = cyclic_reduce(w)
    best = None
    for cand in (w, w.inverse()):
        flat = [(g, 1 if e > 0 else -1) for g, e in cand for _ in range(abs(e))]
        for i in range(max(1, len(flat))):
            rot = tuple(flat[i:] + flat[:i])
            if best is None or rot < best:
                best = rot
    return best
