import pytest

from qnlp.diagram import (
    EFFECT,
    STATE,
    DiagramError,
    ResourceCount,
    StringDiagram,
    build_diagram,
    count_resources,
    remove_cups,
    render,
)
from qnlp.pregroup import ReductionWitness, S, assign_types, concat_types, make_lexicon, reduce

LEXICON = make_lexicon(
    [
        ("siva", "noun", "neutral"),
        ("comics", "noun", "neutral"),
        ("thrilling", "adjective", "neutral"),
        ("hates", "transitive-verb", "negative"),
    ]
)


def sentence_diagram(text):
    typed = assign_types(text.split(), LEXICON)
    return build_diagram(typed, reduce(concat_types(typed)))


def test_build_fig1_diagram_shape():
    d = sentence_diagram("siva hates thrilling comics")
    assert len(d.boxes) == 4
    assert len(d.cups) == 3
    assert len(d.open_wires) == 1
    assert d.wires[d.open_wires[0]].stype == S
    assert all(box.kind == STATE for box in d.boxes)


def test_build_single_word_sentence():
    d = build_diagram([("it", (S,))], ReductionWitness((), (0,), True))
    assert len(d.boxes) == 1 and d.cups == () and d.open_wires == (0,)


def test_build_three_word_sentence():
    d = sentence_diagram("siva hates comics")
    assert len(d.boxes) == 3
    assert d.cups == ((0, 1), (3, 4))
    assert d.open_wires == (2,)


def test_build_rejects_mismatched_witness():
    typed = assign_types("siva hates comics".split(), LEXICON)
    bad = ReductionWitness(((0, 1),), (2, 3, 4), False)
    with pytest.raises(DiagramError):
        build_diagram(typed, bad)


def test_count_resources_fig1_before_and_after_rewrite():
    d = sentence_diagram("siva hates thrilling comics")
    assert count_resources(d) == ResourceCount(7, 6, 1)
    r = remove_cups(d)
    assert count_resources(r) == ResourceCount(4, 3, 1)


def test_count_resources_three_word_sentence():
    d = sentence_diagram("siva hates comics")
    assert count_resources(d) == ResourceCount(5, 4, 1)
    assert count_resources(remove_cups(d)) == ResourceCount(3, 2, 1)


def test_count_resources_single_word():
    d = build_diagram([("it", (S,))], ReductionWitness((), (0,), True))
    assert count_resources(d) == ResourceCount(1, 0, 1)


def test_remove_cups_without_cups_is_identity():
    d = build_diagram([("it", (S,))], ReductionWitness((), (0,), True))
    assert remove_cups(d) == d


def test_remove_cups_is_idempotent():
    d = sentence_diagram("siva hates thrilling comics")
    once = remove_cups(d)
    assert remove_cups(once) == once


def test_remove_cups_never_increases_and_strictly_decreases():
    for text in ("siva hates comics", "siva hates thrilling comics"):
        d = sentence_diagram(text)
        before = count_resources(d)
        after = count_resources(remove_cups(d))
        assert after.qubits_total < before.qubits_total


def test_remove_cups_bend_log_fig1():
    r = remove_cups(sentence_diagram("siva hates thrilling comics"))
    assert r.cups == ()
    words = [r.boxes[s.box].word for s in r.bent]
    assert words == ["comics", "thrilling", "siva"]
    assert [r.boxes[i].kind for i in range(4)] == [EFFECT, STATE, EFFECT, EFFECT]
    # comics' effect was swallowed by the thrilling fold
    assert r.bent[1].absorbed == (0,)
    assert r.top_level_bends() == [1, 2]
    assert r.open_wires == (2,)


def test_remove_cups_bend_log_three_words():
    r = remove_cups(sentence_diagram("siva hates comics"))
    assert [r.boxes[s.box].word for s in r.bent] == ["comics", "siva"]
    assert r.top_level_bends() == [0, 1]
    assert {s.onto for s in r.bent} == {1, 3}


def test_render_text_single_word():
    d = build_diagram([("it", (S,))], ReductionWitness((), (0,), True))
    text = render(d, "text")
    assert "it" in text and ": s" in text


def test_render_dot_fig1_counts():
    d = sentence_diagram("siva hates thrilling comics")
    dot = render(d, "dot")
    assert dot.startswith("graph") and dot.rstrip().endswith("}")
    assert sum(line.count("[shape=triangle") for line in dot.splitlines()) == 4
    assert sum("cup" in line for line in dot.splitlines()) == 3


def test_render_empty_diagram():
    empty = StringDiagram((), (), (), ())
    assert render(empty, "text") == ""
    assert render(empty, "dot") == "graph diagram {\n}"


def test_render_is_stable():
    d = sentence_diagram("siva hates thrilling comics")
    assert render(d, "text") == render(d, "text")
    assert render(d, "dot") == render(d, "dot")
