"""Pregroup grammar: simple types, the lexicon, and grammaticality by reduction.

A word's type is a sequence of atomic types decorated with adjoint markers.
A token sequence is grammatical when the concatenation of its word types
contracts, pairwise and planarly, down to a single plain sentence atom.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence


class Atom(Enum):
    """The two atomic grammar types: noun and sentence."""

    N = "n"
    S = "s"

    def __str__(self) -> str:
        return self.value


_WINDING_SUFFIX = {-1: ".l", 0: "", 1: ".r"}


@dataclass(frozen=True)
class SimpleType:
    """An atomic type with an adjoint marker.

    ``winding`` is 0 for the plain type, -1 for the left adjoint (x.l) and
    +1 for the right adjoint (x.r).  Higher adjoints never occur in this
    grammar and are rejected.
    """

    base: Atom
    winding: int = 0

    def __post_init__(self) -> None:
        if self.winding not in (-1, 0, 1):
            raise ValueError(f"winding must be -1, 0 or +1, got {self.winding}")

    def __str__(self) -> str:
        return self.base.value + _WINDING_SUFFIX[self.winding]


# A word type is an ordered, non-empty sequence of simple types.
PregroupType = tuple[SimpleType, ...]

N = SimpleType(Atom.N, 0)
S = SimpleType(Atom.S, 0)
N_L = SimpleType(Atom.N, -1)
N_R = SimpleType(Atom.N, 1)
S_L = SimpleType(Atom.S, -1)
S_R = SimpleType(Atom.S, 1)

_TYPE_TOKENS = {"n": N, "s": S, "n.l": N_L, "n.r": N_R, "s.l": S_L, "s.r": S_R}


class ParseError(ValueError):
    """Raised for malformed type strings or lexicon files."""


class UnknownWordError(ValueError):
    """Raised when a token is missing from the lexicon."""


def parse_type(text: str) -> PregroupType:
    """Parse a whitespace-separated type string such as ``"n.r s n.l"``."""
    simples = []
    for match in re.finditer(r"\S+", text):
        token = match.group()
        if token not in _TYPE_TOKENS:
            raise ParseError(
                f"unknown type token {token!r} at column {match.start() + 1}"
            )
        simples.append(_TYPE_TOKENS[token])
    return tuple(simples)


def format_type(ptype: Iterable[SimpleType]) -> str:
    return " ".join(str(t) for t in ptype)


POS_TAGS = ("noun", "adjective", "transitive-verb")
POS_TYPES: dict[str, PregroupType] = {
    "noun": parse_type("n"),
    "adjective": parse_type("n n.l"),
    "transitive-verb": parse_type("n.r s n.l"),
}
POLARITIES = ("positive", "negative", "neutral")

_WORD_RE = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class LexEntry:
    ptype: PregroupType
    pos: str
    polarity: str


@dataclass(frozen=True)
class Lexicon:
    """Word -> (type, part of speech, sentiment polarity)."""

    entries: Mapping[str, LexEntry]

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def type_of(self, word: str) -> PregroupType:
        return self.entries[word].ptype

    def words_with_pos(self, pos: str) -> list[str]:
        return sorted(w for w, e in self.entries.items() if e.pos == pos)


def make_lexicon(items: Iterable[tuple[str, str, str]]) -> Lexicon:
    """Build a lexicon from ``(word, pos, polarity)`` triples.

    The type is implied by the part of speech; only the three fixed type
    shapes are permitted.
    """
    entries: dict[str, LexEntry] = {}
    for word, pos, polarity in items:
        _validate_entry(word, POS_TYPES[pos], pos, polarity, entries)
        entries[word] = LexEntry(POS_TYPES[pos], pos, polarity)
    return Lexicon(entries)


def _validate_entry(
    word: str,
    ptype: PregroupType,
    pos: str,
    polarity: str,
    entries: Mapping[str, LexEntry],
) -> None:
    if not _WORD_RE.fullmatch(word):
        raise ParseError(f"word {word!r} must match [a-z]+")
    if word in entries:
        raise ParseError(f"duplicate lexicon entry for {word!r}")
    if pos not in POS_TYPES:
        raise ParseError(f"unknown part of speech {pos!r} for {word!r}")
    if polarity not in POLARITIES:
        raise ParseError(f"unknown polarity {polarity!r} for {word!r}")
    if ptype != POS_TYPES[pos]:
        raise ParseError(
            f"type {format_type(ptype)!r} of {word!r} does not match"
            f" the {pos} shape {format_type(POS_TYPES[pos])!r}"
        )


def parse_lexicon(text: str) -> Lexicon:
    """Parse lexicon text: ``word<TAB>type<TAB>pos<TAB>polarity`` per line.

    Blank lines and ``#`` comments are skipped.
    """
    entries: dict[str, LexEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(f"line {lineno}: expected 4 tab-separated fields")
        word, type_text, pos, polarity = (f.strip() for f in fields)
        try:
            ptype = parse_type(type_text)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        _validate_entry(word, ptype, pos, polarity, entries)
        entries[word] = LexEntry(ptype, pos, polarity)
    return Lexicon(entries)


def load_lexicon(path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh.read())


def format_lexicon(lexicon: Lexicon) -> str:
    lines = []
    for word in sorted(lexicon.entries):
        e = lexicon.entries[word]
        lines.append(f"{word}\t{format_type(e.ptype)}\t{e.pos}\t{e.polarity}")
    return "\n".join(lines) + "\n"


def assign_types(
    tokens: Sequence[str], lexicon: Lexicon
) -> list[tuple[str, PregroupType]]:
    """Look up the type of every token, in order."""
    typed = []
    for token in tokens:
        if token not in lexicon:
            raise UnknownWordError(f"out-of-vocabulary token {token!r}")
        typed.append((token, lexicon.type_of(token)))
    return typed


@dataclass(frozen=True)
class ReductionWitness:
    """The contraction structure found by :func:`reduce`.

    ``pairs`` are index pairs (i, j), i < j, over the concatenated simple
    type sequence; ``residual`` are the surviving indices.  ``grammatical``
    is true when the residual is exactly one plain sentence atom.
    """

    pairs: tuple[tuple[int, int], ...]
    residual: tuple[int, ...]
    grammatical: bool

    def validate(self, types: Sequence[SimpleType]) -> None:
        """Check the witness against a type sequence; raise ValueError if inconsistent."""
        n = len(types)
        seen: set[int] = set()
        for i, j in self.pairs:
            if not (0 <= i < j < n):
                raise ValueError(f"pair ({i}, {j}) out of range for {n} types")
            if i in seen or j in seen:
                raise ValueError(f"index reused in pair ({i}, {j})")
            seen.update((i, j))
            t, u = types[i], types[j]
            if t.base != u.base or u.winding != t.winding + 1:
                raise ValueError(
                    f"pair ({i}, {j}) does not contract: {t} . {u}"
                )
        for (i, j) in self.pairs:
            for (k, l) in self.pairs:
                if i < k < j < l:
                    raise ValueError(f"crossing pairs ({i},{j}) and ({k},{l})")
        expected_residual = tuple(x for x in range(n) if x not in seen)
        if tuple(self.residual) != expected_residual:
            raise ValueError(
                f"residual {self.residual} does not match unpaired indices"
                f" {expected_residual}"
            )
        is_sentence = len(expected_residual) == 1 and types[expected_residual[0]] == S
        if self.grammatical != is_sentence:
            raise ValueError("grammatical flag inconsistent with residual")


def _cancels(t: SimpleType, u: SimpleType) -> bool:
    # the contraction rule x^z . x^(z+1) -> 1
    return t.base == u.base and u.winding == t.winding + 1


def _stack_pass(types: Sequence[SimpleType]):
    """Single greedy left-to-right pass: cancel with the stack top when possible."""
    stack: list[int] = []
    pairs: list[tuple[int, int]] = []
    for j, u in enumerate(types):
        if stack and _cancels(types[stack[-1]], u):
            pairs.append((stack.pop(), j))
        else:
            stack.append(j)
    return pairs, stack


def _search_sentence(types: Sequence[SimpleType]):
    """Depth-first search over stack runs for a pairing whose residual is [s].

    Cancellation is tried before pushing, so on sequences where the greedy
    pass succeeds this returns the greedy pairing.  The greedy pass alone is
    not complete (e.g. ``n.l n n.r n s`` needs the nested pairing), hence the
    backtracking.
    """
    n = len(types)
    dead: set[tuple[int, tuple[int, ...]]] = set()

    def go(i: int, stack: tuple[int, ...], pairs: tuple[tuple[int, int], ...]):
        if i == n:
            if len(stack) == 1 and types[stack[0]] == S:
                return pairs, stack
            return None
        key = (i, stack)
        if key in dead:
            return None
        if stack and _cancels(types[stack[-1]], types[i]):
            found = go(i + 1, stack[:-1], pairs + ((stack[-1], i),))
            if found is not None:
                return found
        found = go(i + 1, stack + (i,), pairs)
        if found is not None:
            return found
        dead.add(key)
        return None

    return go(0, (), ())


def reduce(types: Sequence[SimpleType]) -> ReductionWitness:
    """Decide grammaticality of a concatenated type sequence.

    Returns a witness with ``grammatical=True`` and a planar contraction
    pairing whose residual is exactly one plain ``s`` if such a pairing
    exists; otherwise a witness carrying the greedy pass's residual for
    diagnostics, with ``grammatical=False``.
    """
    types = tuple(types)
    pairs, stack = _stack_pass(types)
    if len(stack) == 1 and types[stack[0]] == S:
        return ReductionWitness(tuple(sorted(pairs)), tuple(stack), True)
    found = _search_sentence(types)
    if found is not None:
        fpairs, fstack = found
        return ReductionWitness(tuple(sorted(fpairs)), tuple(fstack), True)
    return ReductionWitness(tuple(sorted(pairs)), tuple(stack), False)


def concat_types(typed_sentence: Iterable[tuple[str, PregroupType]]) -> PregroupType:
    """Concatenate the word types of a typed sentence into one sequence."""
    out: list[SimpleType] = []
    for _, ptype in typed_sentence:
        out.extend(ptype)
    return tuple(out)
