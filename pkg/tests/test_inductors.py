import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import chains_of, corpus_and_labels, streams_and_spans, table_and_labels
from oracles import lr_delimiters, lr_extract, table_extract, xpath_extract
from ntw.docmodel import Corpus, NodeRef, parse_html
from ntw.errors import EmptyLabelSet, NotFeatureBased, NotTextNode
from ntw.inductors import KINDS, Wrapper, get_inductor, induce, induce_from_features
from ntw.inductors.base import Inductor, features_of, require_feature_based
from ntw.inductors.lr import LR, LRRule, lr_matches
from ntw.inductors.table import TABLE
from ntw.inductors.xpath import XPATH, feature_rule_to_path


def test_table_on_example(example1):
    corpus, cells, _ = example1
    col1 = TABLE.extract(corpus, [cells["n1"], cells["n2"]])
    assert {corpus.node(r).text for r in col1} == {f"n{i}" for i in range(1, 6)}
    row4 = TABLE.extract(corpus, [cells["n4"], cells["z4"]])
    assert {corpus.node(r).text for r in row4} == {"n4", "a4", "z4", "p4"}
    assert TABLE.extract(corpus, [cells["a2"]]) == {cells["a2"]}
    assert len(TABLE.extract(corpus, [cells["n1"], cells["a2"]])) == 20


def test_table_rejects_text_outside_cells():
    corpus = Corpus([parse_html("p", "<body><p>x</p><table><tr><td>a</td></tr></table></body>")])
    outside = NodeRef("p", 3)
    assert corpus.node(outside).text == "x"
    with pytest.raises(NotTextNode):
        TABLE.induce(corpus, [outside])


@pytest.mark.parametrize("kind", KINDS)
def test_empty_and_non_text_labels_rejected(kind, example1):
    corpus, _, _ = example1
    with pytest.raises(EmptyLabelSet):
        induce(kind, corpus, [])
    with pytest.raises(NotTextNode):
        induce(kind, corpus, [NodeRef("example.html", 0)])


def test_xpath_rule_text():
    corpus = Corpus([parse_html("p", '<body><div class="r"><b>A</b></div><div class="r"><b>B</b></div></body>')])
    a, b = (NodeRef("p", i) for i in corpus.doc("p").text_indices)
    w = XPATH.induce(corpus, [a, b])
    assert w.describe() == "//html[1]/body[1]/div[@class='r']/b[1]/text()"
    assert XPATH.apply(w, corpus) == {a, b}
    assert XPATH.induce(corpus, [a]).describe() == "//html[1]/body[1]/div[@class='r'][1]/b[1]/text()"


def test_xpath_quotes_awkward_attribute_values():
    corpus = Corpus([parse_html("p", """<body><div title="it's &quot;x&quot;">A</div></body>""")])
    ref = NodeRef("p", corpus.doc("p").text_indices[0])
    assert "concat(" in XPATH.induce(corpus, [ref]).describe()


def test_lr_matches_are_minimal():
    assert lr_matches("<b>x<b>y</b>", "<b>", "</b>") == [(7, 8)]
    assert lr_matches("[a][b]", "[", "]") == [(1, 2), (4, 5)]
    assert lr_matches("[a", "[", "]") == []


def test_lr_example_delimiters(example1):
    corpus, cells, _ = example1
    w = LR.induce(corpus, [cells["n1"], cells["n2"]])
    assert w.rule == LRRule("><tr><td>", "</td><td>a")
    assert LR.apply(w, corpus) == {cells[f"n{i}"] for i in range(1, 6)}


def test_lr_single_label_extracts_itself(example1):
    corpus, cells, _ = example1
    assert LR.extract(corpus, [cells["a3"]]) == {cells["a3"]}


@pytest.mark.parametrize("kind", KINDS)
def test_wrapper_json_roundtrip(kind, example1):
    corpus, cells, L = example1
    for labels in ([cells["n1"]], [cells["n1"], cells["n2"]], sorted(L)):
        for w in (induce(kind, corpus, labels), induce_from_features(kind, corpus, labels)):
            back = Wrapper.from_json(json.loads(json.dumps(w.to_json())))
            assert back.rule == w.rule
            assert get_inductor(kind).apply(back, corpus) == get_inductor(kind).apply(w, corpus)


def test_registry_and_feature_based_checks(example1):
    corpus, cells, _ = example1
    with pytest.raises(ValueError):
        get_inductor("nope")

    class Blackbox(Inductor):
        kind = "blackbox"

    with pytest.raises(NotFeatureBased):
        require_feature_based(Blackbox())
    assert features_of("table", corpus, cells["a4"]) == {("row", "4"), ("col", "2")}
    with pytest.raises(NotTextNode):
        features_of("table", corpus, NodeRef("example.html", 0))


def test_feature_rule_renders_as_path(example1):
    corpus, cells, _ = example1
    w = XPATH.induce_from_features(corpus, [cells["n1"], cells["n3"]])
    assert feature_rule_to_path(w.rule).render() == XPATH.induce(corpus, [cells["n1"], cells["n3"]]).describe()


# ---------------------------------------------------------------- oracles

@settings(max_examples=150)
@given(table_and_labels())
def test_table_matches_oracle(sample):
    corpus, positions, L = sample
    assert TABLE.extract(corpus, L) == table_extract(positions, L)


@settings(max_examples=150)
@given(corpus_and_labels())
def test_xpath_matches_oracle(sample):
    corpus, infos, L = sample
    assert XPATH.extract(corpus, L) == xpath_extract(chains_of(infos), L)


@settings(max_examples=150)
@given(corpus_and_labels())
def test_lr_matches_oracle(sample):
    corpus, _, L = sample
    streams, spans = streams_and_spans(corpus)
    w = LR.induce(corpus, L)
    assert (w.rule.left, w.rule.right) == lr_delimiters(streams, spans, L)
    assert LR.apply(w, corpus) == lr_extract(streams, spans, L)


@settings(max_examples=100)
@given(corpus_and_labels(), st.sampled_from(("xpath", "lr")))
def test_well_behaved_small(sample, kind):
    corpus, _, L = sample
    inductor = get_inductor(kind)
    out = inductor.extract(corpus, L)
    assert L <= out
    assert inductor.extract(corpus, out) == out
    part = frozenset(sorted(L)[: max(1, len(L) // 2)])
    assert inductor.extract(corpus, part) <= out


def test_xpath_features_keep_depth_of_bare_steps():
    doc = parse_html("p", "<body>top<a>x</a><div></div><div><b></b><b><em>y</em></b></div></body>")
    corpus = Corpus([doc])
    top, x, y = (NodeRef("p", i) for i in doc.text_indices)
    path = XPATH.induce(corpus, [x, y])
    assert path.describe() == "//*/*/*[1]/text()"
    assert XPATH.apply(path, corpus) == {x, y}
    # "top" sits directly under body, one ancestor short of the path
    assert XPATH.apply(XPATH.induce_from_features(corpus, [x, y]), corpus) == {x, y}
