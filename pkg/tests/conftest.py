from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from oracles import Elem, TextInfo, page_html, text_infos  # noqa: E402

from ntw.docmodel import Corpus, NodeRef, parse_html  # noqa: E402
from ntw.synth import example_table  # noqa: E402

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

EXAMPLE_LABELS = ("n1", "n2", "n4", "a4", "z5")


@pytest.fixture
def example1():
    """The 5x4 business table with labels n1, n2, n4, a4, z5."""
    corpus, cells = example_table()
    return corpus, cells, frozenset(cells[c] for c in EXAMPLE_LABELS)


# ------------------------------------------------------------- strategies

WORDS = ("Ann", "Bob", "Lee", "x", "12 Oak St", "Tupelo", "38801", "a&b", "<i>", "Joe's")
TAGS = ("div", "span", "b", "em", "section", "a")
CLASSES = ("", "name", "addr", "row")


@st.composite
def elements(draw, depth=0):
    tag = draw(st.sampled_from(TAGS))
    cls = draw(st.sampled_from(CLASSES))
    attrs = (("class", cls),) if cls else ()
    children = []
    n = draw(st.integers(0, 4 if depth < 3 else 0))
    for _ in range(n):
        want_text = draw(st.booleans())
        if want_text and not (children and isinstance(children[-1], str)):
            children.append(draw(st.sampled_from(WORDS)))
        elif depth < 3:
            children.append(draw(elements(depth + 1)))
    return Elem(tag, attrs, children)


@st.composite
def bodies(draw):
    children = []
    for _ in range(draw(st.integers(1, 4))):
        if draw(st.booleans()) and not (children and isinstance(children[-1], str)):
            children.append(draw(st.sampled_from(WORDS)))
        else:
            children.append(draw(elements()))
    return children


def build_corpus(page_bodies) -> tuple[Corpus, dict]:
    """Parse generated pages; returns the corpus and NodeRef -> TextInfo from the generator."""
    docs, infos = [], {}
    for k, body in enumerate(page_bodies):
        pid = f"p{k}.html"
        docs.append(parse_html(pid, page_html(body)))
        root = Elem("html", (), [Elem("body", (), list(body))])
        for info in text_infos(root):
            infos[NodeRef(pid, info.index)] = info
    return Corpus(docs), infos


@st.composite
def corpora(draw, min_texts=1, max_pages=3):
    """A small random corpus with at least ``min_texts`` text nodes."""
    page_bodies = draw(st.lists(bodies(), min_size=1, max_size=max_pages))
    corpus, infos = build_corpus(page_bodies)
    if len(infos) < min_texts:
        extra = [Elem("div", (("class", "name"),), [w]) for w in WORDS[:min_texts]]
        page_bodies = page_bodies + [extra]
        corpus, infos = build_corpus(page_bodies)
    return corpus, infos


@st.composite
def corpus_and_labels(draw, max_labels=10, max_pages=3):
    corpus, infos = draw(corpora(max_pages=max_pages))
    refs = sorted(infos)
    size = draw(st.integers(1, min(max_labels, len(refs))))
    L = frozenset(draw(st.lists(st.sampled_from(refs), min_size=size, max_size=size, unique=True)))
    return corpus, infos, L


@st.composite
def tables(draw, max_pages=3, max_rows=5, max_cols=4):
    """Pages each holding one (possibly ragged) table plus some text outside it.

    Returns the corpus and NodeRef -> (row, column) computed by the generator.
    """
    page_bodies, positions = [], {}
    for _ in range(draw(st.integers(1, max_pages))):
        rows = []
        for _ in range(draw(st.integers(1, max_rows))):
            cells = [Elem("td", (), [draw(st.sampled_from(WORDS))])
                     for _ in range(draw(st.integers(1, max_cols)))]
            rows.append(Elem("tr", (), cells))
        body = [Elem("p", (), ["intro"]), Elem("table", (), rows)]
        page_bodies.append(body)
    corpus, infos = build_corpus(page_bodies)
    for ref, info in infos.items():
        td, tr = info.chain[0], info.chain[1]
        if td[0] == "td" and tr[0] == "tr":
            positions[ref] = (tr[1], td[1])
    return corpus, positions


@st.composite
def table_and_labels(draw, max_labels=10):
    corpus, positions = draw(tables())
    refs = sorted(positions)
    size = draw(st.integers(1, min(max_labels, len(refs))))
    L = frozenset(draw(st.lists(st.sampled_from(refs), min_size=size, max_size=size, unique=True)))
    return corpus, positions, L


def streams_and_spans(corpus):
    streams = {d.page_id: d.char_stream for d in corpus}
    spans = {NodeRef(d.page_id, i): se for d in corpus for i, se in d.spans.items()}
    return streams, spans


def chains_of(infos) -> dict:
    return {ref: info.chain for ref, info in infos.items()}


__all__ = ["TextInfo"]
