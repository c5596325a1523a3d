import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ALPHABET, all_type_sequences, grammatical_by_enumeration, sentence_pairings
from qnlp.pregroup import (
    N,
    N_L,
    N_R,
    S,
    Atom,
    Lexicon,
    ParseError,
    SimpleType,
    UnknownWordError,
    assign_types,
    concat_types,
    format_lexicon,
    make_lexicon,
    parse_lexicon,
    parse_type,
    reduce,
)

FIG1_LEXICON = make_lexicon(
    [
        ("siva", "noun", "neutral"),
        ("comics", "noun", "neutral"),
        ("thrilling", "adjective", "neutral"),
        ("hates", "transitive-verb", "negative"),
    ]
)

EQ1 = (N, N_R, S, N_L, N, N_L, N)


def test_parse_type_verb():
    assert parse_type("n.r s n.l") == (N_R, S, N_L)


def test_parse_type_single_atom():
    assert parse_type("n") == (N,)


def test_parse_type_unknown_token_names_token_and_column():
    with pytest.raises(ParseError, match=r"'x'.*column 3"):
        parse_type("n x")


def test_parse_type_all_six_tokens():
    assert parse_type("n n.l n.r s s.l s.r") == (
        N,
        N_L,
        N_R,
        S,
        SimpleType(Atom.S, -1),
        SimpleType(Atom.S, 1),
    )


def test_simple_type_rejects_higher_adjoints():
    with pytest.raises(ValueError):
        SimpleType(Atom.N, 2)


def test_assign_types_fig1_sentence():
    typed = assign_types("siva hates thrilling comics".split(), FIG1_LEXICON)
    assert [t for _, t in typed] == [(N,), (N_R, S, N_L), (N, N_L), (N,)]
    assert concat_types(typed) == EQ1


def test_assign_types_empty():
    assert assign_types([], FIG1_LEXICON) == []


def test_assign_types_out_of_vocabulary():
    with pytest.raises(UnknownWordError, match="xyzzy"):
        assign_types(["siva", "xyzzy"], FIG1_LEXICON)


def test_reduce_eq1_is_grammatical_with_unique_pairing():
    witness = reduce(EQ1)
    assert witness.grammatical
    assert witness.pairs == ((0, 1), (3, 4), (5, 6))
    assert witness.residual == (2,)
    witness.validate(EQ1)
    # exhaustive search over planar pairings confirms this is the only one
    assert list(sentence_pairings(EQ1)) == [(witness.pairs, witness.residual)]


def test_reduce_bare_sentence_atom():
    witness = reduce((S,))
    assert witness.grammatical and witness.pairs == () and witness.residual == (0,)


def test_reduce_noun_sentence_not_grammatical():
    witness = reduce((N, S))
    assert not witness.grammatical
    assert not grammatical_by_enumeration((N, S))


def test_reduce_noun_leftadjoint_not_grammatical():
    # n . n.l does not contract (only x.l x and x x.r do), so both survive
    witness = reduce((N, N_L))
    assert not witness.grammatical
    assert witness.residual == (0, 1)
    assert not grammatical_by_enumeration((N, N_L))


def test_reduce_needs_backtracking_beyond_greedy():
    # greedy cancellation of n.l n strands the n.r; the nested pairing works
    types = (N_L, N, N_R, N, S)
    witness = reduce(types)
    assert witness.grammatical
    assert witness.pairs == ((0, 3), (1, 2))
    assert grammatical_by_enumeration(types)


def test_reduce_is_deterministic():
    for types in (EQ1, (N, S), (N_L, N, N_R, N, S)):
        assert reduce(types) == reduce(types)


def _replayable_innermost_first(pairs):
    # replaying contractions innermost-first must only ever contract
    # survivors that are adjacent
    alive = set()
    for i, j in pairs:
        alive.update((i, j))
    for i, j in sorted(pairs, key=lambda p: p[1] - p[0]):
        assert not any(i < k < j for k in alive if k not in (i, j)), (i, j)
        alive.discard(i)
        alive.discard(j)


def test_reduce_agrees_with_enumeration_exhaustively_short():
    # unit-level slice of the oracle equivalence; the acceptance suite
    # pushes the exhaustive bound further
    for types in all_type_sequences(0, 5):
        witness = reduce(types)
        assert witness.grammatical == grammatical_by_enumeration(types), types
        if witness.grammatical:
            witness.validate(types)
            _replayable_innermost_first(witness.pairs)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(ALPHABET), min_size=0, max_size=10))
def test_reduce_agrees_with_enumeration_random(seq):
    types = tuple(seq)
    witness = reduce(types)
    assert witness.grammatical == grammatical_by_enumeration(types)
    if witness.grammatical:
        witness.validate(types)
        _replayable_innermost_first(witness.pairs)


def test_witness_validate_rejects_crossing_and_mismatch():
    from qnlp.pregroup import ReductionWitness

    types = (N, N_R, N, N_R)
    with pytest.raises(ValueError, match="crossing"):
        ReductionWitness(((0, 2), (1, 3)), (), False).validate((N, N, N_R, N_R))
    with pytest.raises(ValueError, match="does not contract"):
        ReductionWitness(((0, 2),), (1, 3), False).validate(types)


def test_lexicon_roundtrip_and_queries():
    text = format_lexicon(FIG1_LEXICON)
    again = parse_lexicon(text)
    assert again == FIG1_LEXICON
    assert again.words_with_pos("noun") == ["comics", "siva"]
    assert "hates" in again and "xyzzy" not in again


def test_lexicon_comments_and_blank_lines():
    lex = parse_lexicon("# header\n\nsiva\tn\tnoun\tneutral\n")
    assert lex.type_of("siva") == (N,)


@pytest.mark.parametrize(
    "line,message",
    [
        ("Siva\tn\tnoun\tneutral", "[a-z]+"),
        ("siva\tn n.l\tnoun\tneutral", "shape"),
        ("siva\tn\tnoun\tupbeat", "polarity"),
        ("siva\tn\tnoun", "4 tab-separated"),
        ("siva\tq\tnoun\tneutral", "unknown type token"),
    ],
)
def test_lexicon_rejects_malformed_entries(line, message):
    with pytest.raises(ParseError, match=message):
        parse_lexicon(line)


def test_lexicon_rejects_duplicates():
    with pytest.raises(ParseError, match="duplicate"):
        parse_lexicon("siva\tn\tnoun\tneutral\nsiva\tn\tnoun\tneutral")


def test_make_lexicon_shapes():
    lex = FIG1_LEXICON
    assert lex.type_of("siva") == (N,)
    assert lex.type_of("thrilling") == (N, N_L)
    assert lex.type_of("hates") == (N_R, S, N_L)
