"""Tolerant HTML parsing into immutable, pre-order addressed DOM trees.

Normalization rules (fixed, so every other module sees the same tree):

* tag and attribute names are lowercased, attribute values keep their case;
  a repeated attribute name keeps its first value;
* unclosed elements are closed when their parent closes, and a small set of
  elements (``p``, ``li``, ``tr``, ``td`` ...) are implicitly closed by the
  start tags that cannot nest inside them;
* comments, ``<script>`` and ``<style>`` are dropped;
* adjacent text runs are coalesced and whitespace-only text nodes dropped;
* the tree is always rooted at ``html`` with a ``body`` child.
"""

from __future__ import annotations

import html
import os
from functools import cached_property
from html.parser import HTMLParser
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .errors import EmptyDocument, InputError

TEXT_TOKEN = "<#text>"

VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
_DROPPED = frozenset({"script", "style"})

_BLOCK = frozenset(
    "p div table ul ol dl h1 h2 h3 h4 h5 h6 pre blockquote form hr section "
    "article header footer nav address fieldset aside main figure".split()
)
# tag -> start tags that implicitly close it
_CLOSED_BY = {
    "p": _BLOCK,
    "li": frozenset({"li"}),
    "dt": frozenset({"dt", "dd"}),
    "dd": frozenset({"dt", "dd"}),
    "tr": frozenset({"tr", "tbody", "thead", "tfoot"}),
    "td": frozenset({"td", "th", "tr", "tbody", "thead", "tfoot"}),
    "th": frozenset({"td", "th", "tr", "tbody", "thead", "tfoot"}),
    "thead": frozenset({"tbody", "tfoot"}),
    "tbody": frozenset({"tbody", "tfoot"}),
    "option": frozenset({"option", "optgroup"}),
}
# implicit closing never reaches past these
_SCOPE = frozenset(
    "html body table ul ol dl div td th li section article form blockquote".split()
)


class NodeRef(NamedTuple):
    """Stable address of a node: page id plus pre-order index."""

    page_id: str
    index: int


class DomNode:
    """One element or text node of a normalized tree."""

    __slots__ = ("kind", "tag", "attrs", "text", "children", "preorder_index", "child_number")

    def __init__(self, kind, tag=None, attrs=(), text=None, children=(),
                 preorder_index=-1, child_number=None):
        self.kind = kind
        self.tag = tag
        self.attrs = attrs
        self.text = text
        self.children = children
        self.preorder_index = preorder_index
        self.child_number = child_number

    @property
    def is_text(self) -> bool:
        return self.kind == "text"

    def attr(self, name, default=None):
        for key, value in self.attrs:
            if key == name:
                return value
        return default

    def __repr__(self):
        if self.is_text:
            return f"DomNode(#{self.preorder_index} text={self.text!r})"
        return f"DomNode(#{self.preorder_index} <{self.tag}> [{self.child_number}])"


class Document:
    """A parsed page. Nodes are addressed by their pre-order index."""

    def __init__(self, page_id: str, root: DomNode):
        if root.is_text:
            raise ValueError("document root must be an element")
        self.page_id = page_id
        self.root = root
        nodes: list[DomNode] = []
        parents: list[int] = []
        stack = [(root, -1)]
        while stack:
            node, parent = stack.pop()
            nodes.append(node)
            parents.append(parent)
            for child in reversed(node.children):
                stack.append((child, node.preorder_index))
        self.nodes = tuple(nodes)
        self.parents = tuple(parents)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def node(self, index: int) -> DomNode:
        return self.nodes[index]

    def parent(self, index: int) -> DomNode | None:
        p = self.parents[index]
        return None if p < 0 else self.nodes[p]

    def ancestors(self, index: int) -> Iterator[DomNode]:
        """Element ancestors, nearest first."""
        p = self.parents[index]
        while p >= 0:
            yield self.nodes[p]
            p = self.parents[p]

    @cached_property
    def text_indices(self) -> tuple[int, ...]:
        return tuple(n.preorder_index for n in self.nodes if n.is_text)

    @cached_property
    def _tokens(self):
        tokens: list[str] = []
        positions: dict[int, int] = {}

        def walk(node):
            positions[node.preorder_index] = len(tokens)
            if node.is_text:
                tokens.append(TEXT_TOKEN)
                return
            tokens.append(node.tag)
            for child in node.children:
                walk(child)
            tokens.append("/" + node.tag)

        walk(self.root)
        return tuple(tokens), positions

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens[0]

    @property
    def token_positions(self) -> dict[int, int]:
        """Pre-order index -> position of the node's opening/text token."""
        return self._tokens[1]

    @cached_property
    def _char_stream(self):
        parts: list[str] = []
        spans: dict[int, tuple[int, int]] = {}
        offset = 0

        def emit(s):
            nonlocal offset
            parts.append(s)
            offset += len(s)

        def walk(node):
            if node.is_text:
                start = offset
                emit(html.escape(node.text, quote=False))
                spans[node.preorder_index] = (start, offset)
                return
            attrs = "".join(f' {k}="{html.escape(v)}"' for k, v in node.attrs)
            emit(f"<{node.tag}{attrs}>")
            for child in node.children:
                walk(child)
            if node.tag not in VOID_TAGS:
                emit(f"</{node.tag}>")

        walk(self.root)
        return "".join(parts), spans

    @property
    def char_stream(self) -> str:
        return self._char_stream[0]

    @property
    def spans(self) -> dict[int, tuple[int, int]]:
        """Text node index -> (start, end) in :attr:`char_stream`."""
        return self._char_stream[1]


def text_serialization(doc: Document) -> list[str]:
    """Pre-order open/close tag tokens with every text replaced by ``<#text>``."""
    return list(doc.tokens)


def char_stream(doc: Document) -> tuple[str, dict[int, tuple[int, int]]]:
    """Re-serialize ``doc`` and return the string with each text node's span.

    Text and attribute values are HTML-escaped, so markup characters only
    ever come from tags; ``html.unescape`` of a span gives back the node text.
    """
    return doc.char_stream, dict(doc.spans)


class _El:
    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag, attrs=()):
        self.tag = tag
        self.attrs = attrs
        self.children: list = []


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.top = _El("#document")
        self.stack = [self.top]
        self.skip = 0

    def _append_text(self, data):
        children = self.stack[-1].children
        if children and isinstance(children[-1], str):
            children[-1] += data
        else:
            children.append(data)

    def _implicit_close(self, tag):
        while True:
            for i in range(len(self.stack) - 1, 0, -1):
                open_tag = self.stack[i].tag
                if tag in _CLOSED_BY.get(open_tag, ()):
                    del self.stack[i:]
                    break
                if open_tag in _SCOPE:
                    return
            else:
                return

    def handle_starttag(self, tag, attrs):
        if self.skip or tag in _DROPPED:
            if tag in _DROPPED and tag not in VOID_TAGS:
                self.skip += 1
            return
        seen = {}
        for name, value in attrs:
            seen.setdefault(name, "" if value is None else value)
        self._implicit_close(tag)
        el = _El(tag, tuple(seen.items()))
        self.stack[-1].children.append(el)
        if tag not in VOID_TAGS:
            self.stack.append(el)

    def handle_startendtag(self, tag, attrs):
        if self.skip or tag in _DROPPED:
            return
        self.handle_starttag(tag, attrs)
        if tag not in VOID_TAGS:
            self.handle_endtag(tag)

    def handle_endtag(self, tag):
        if tag in _DROPPED:
            self.skip = max(0, self.skip - 1)
            return
        if self.skip:
            return
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if not self.skip:
            self._append_text(data)


def _ensure_html_body(tops: list) -> _El:
    html_el = next((n for n in tops if isinstance(n, _El) and n.tag == "html"), None)
    if html_el is None:
        html_el = _El("html")
        html_el.children = list(tops)
    else:
        for n in tops:
            if n is not html_el:
                html_el.children.append(n)
    if not any(isinstance(c, _El) and c.tag == "body" for c in html_el.children):
        head = [c for c in html_el.children if isinstance(c, _El) and c.tag == "head"]
        body = _El("body")
        body.children = [c for c in html_el.children if not (isinstance(c, _El) and c.tag == "head")]
        html_el.children = head + [body]
    return html_el


def _freeze(el: _El) -> DomNode:
    counter = 0

    def build(item, child_number):
        nonlocal counter
        index = counter
        counter += 1
        if isinstance(item, str):
            return DomNode("text", text=item, preorder_index=index)
        kept = [c for c in item.children if not (isinstance(c, str) and not c.strip())]
        # re-coalesce text that became adjacent after dropping whitespace-only runs
        merged: list = []
        for c in kept:
            if isinstance(c, str) and merged and isinstance(merged[-1], str):
                merged[-1] += c
            else:
                merged.append(c)
        seen: dict[str, int] = {}
        children = []
        for c in merged:
            if isinstance(c, str):
                children.append(build(c, None))
            else:
                seen[c.tag] = seen.get(c.tag, 0) + 1
                children.append(build(c, seen[c.tag]))
        return DomNode("element", tag=item.tag, attrs=item.attrs, children=tuple(children),
                       preorder_index=index, child_number=child_number)

    return build(el, 1)


def parse_html(page_id: str, data: bytes | str) -> Document:
    """Parse raw page bytes into a normalized :class:`Document`."""
    text = data.decode("utf-8", errors="replace") if isinstance(data, bytes) else data
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    tops = [c for c in builder.top.children if not (isinstance(c, str) and not c.strip())]
    if not tops:
        raise EmptyDocument(f"page {page_id!r} has no content after normalization")
    return Document(page_id, _freeze(_ensure_html_body(tops)))


class Corpus:
    """An ordered collection of documents with unique page ids."""

    def __init__(self, docs: Iterable[Document]):
        self.docs = tuple(docs)
        self._by_id = {}
        for d in self.docs:
            if d.page_id in self._by_id:
                raise InputError(f"duplicate page id {d.page_id!r}")
            self._by_id[d.page_id] = d
        self.page_order = {d.page_id: i for i, d in enumerate(self.docs)}
        self._cache: dict = {}

    def __len__(self):
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)

    def doc(self, page_id: str) -> Document:
        try:
            return self._by_id[page_id]
        except KeyError:
            raise InputError(f"unknown page {page_id!r}") from None

    def node(self, ref: NodeRef) -> DomNode:
        doc = self.doc(ref.page_id)
        if not 0 <= ref.index < doc.node_count:
            raise InputError(f"node {ref} out of range")
        return doc.nodes[ref.index]

    def is_text(self, ref: NodeRef) -> bool:
        try:
            return self.node(ref).is_text
        except InputError:
            return False

    def text_refs(self) -> tuple[NodeRef, ...]:
        return self.cached("text_refs", lambda: tuple(
            NodeRef(d.page_id, i) for d in self.docs for i in d.text_indices))

    def sort_key(self, ref: NodeRef):
        return (self.page_order[ref.page_id], ref.index)

    def sorted_refs(self, refs) -> list[NodeRef]:
        return sorted(refs, key=self.sort_key)

    def cached(self, key, factory):
        """Memoize a derived index; the corpus is immutable so entries never go stale."""
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = factory()
            return value

    def subset(self, page_ids) -> "Corpus":
        keep = set(page_ids)
        return Corpus(d for d in self.docs if d.page_id in keep)


def load_corpus(directory: str | os.PathLike) -> Corpus:
    """Read every file under ``directory``; page id is the relative path."""
    root = Path(directory)
    if not root.is_dir():
        raise InputError(f"{directory} is not a directory")
    files = sorted(p for p in root.rglob("*") if p.is_file())
    return Corpus(parse_html(p.relative_to(root).as_posix(), p.read_bytes()) for p in files)
