"""LR: left/right delimiter wrappers over the re-serialized character stream.

As a feature-based inductor every text span carries ``L_k`` (the ``k``
characters before it) and ``R_k`` (the ``k`` characters after it) for every
``k``. Those features are never materialized: the feature route keeps only
the longest shared context, and TopDown refines label sets along the
context trie (:meth:`LRInductor.refine`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from ..docmodel import Corpus, NodeRef
from .base import FeatureBasedInductor, Wrapper, register


class LRRule(NamedTuple):
    left: str
    right: str


@dataclass(frozen=True)
class LRFeatureRule:
    """Intersection of ``L_k``/``R_k`` features, kept as the longest shared strings."""

    left: str
    right: str


def _span(corpus: Corpus, ref: NodeRef) -> tuple[str, int, int]:
    doc = corpus.doc(ref.page_id)
    start, end = doc.spans[ref.index]
    return doc.char_stream, start, end


def common_left(corpus: Corpus, labels) -> str:
    """Longest string that ends right before every label span."""
    spans = [_span(corpus, r) for r in labels]
    stream0, s0, _ = spans[0]
    k = 0
    limit = min(s for _, s, _ in spans)
    while k < limit:
        c = stream0[s0 - k - 1]
        if any(stream[s - k - 1] != c for stream, s, _ in spans):
            break
        k += 1
    return stream0[s0 - k:s0]


def common_right(corpus: Corpus, labels) -> str:
    """Longest string that starts right after every label span."""
    spans = [_span(corpus, r) for r in labels]
    stream0, _, e0 = spans[0]
    k = 0
    limit = min(len(stream) - e for stream, _, e in spans)
    while k < limit:
        c = stream0[e0 + k]
        if any(stream[e + k] != c for stream, _, e in spans):
            break
        k += 1
    return stream0[e0:e0 + k]


def _occurrences(text: str, needle: str):
    pos = text.find(needle)
    while pos >= 0:
        yield pos
        pos = text.find(needle, pos + 1)


def lr_matches(stream: str, left: str, right: str) -> list[tuple[int, int]]:
    """Minimal spans bounded by ``left`` and the nearest following ``right``.

    Every left occurrence proposes the span up to the nearest right
    occurrence; a proposal that contains another one is not minimal and is
    dropped (right ends are non-decreasing, so the latest start wins).
    """
    best: dict[int, int] = {}
    for pos in _occurrences(stream, left):
        start = pos + len(left)
        end = stream.find(right, start)
        if end < 0:
            break
        best[end] = max(best.get(end, -1), start)
    return sorted((s, e) for e, s in best.items())


class LRInductor(FeatureBasedInductor):
    kind = "lr"

    def induce(self, corpus, labels) -> Wrapper:
        labels = self._check_labels(corpus, labels)
        ordered = sorted(labels)
        return Wrapper(self.kind, LRRule(common_left(corpus, ordered), common_right(corpus, ordered)),
                       labels)

    def apply(self, wrapper, corpus) -> frozenset:
        rule = wrapper.rule
        if isinstance(rule, LRFeatureRule):
            return self.apply_features(rule, corpus)
        out = set()
        for doc in corpus:
            by_start = {s: (e, i) for i, (s, e) in doc.spans.items()}
            for s, e in lr_matches(doc.char_stream, rule.left, rule.right):
                hit = by_start.get(s)
                if hit is not None and hit[0] == e:
                    out.add(NodeRef(doc.page_id, hit[1]))
        return frozenset(out)

    # feature view -------------------------------------------------------

    def induce_from_features(self, corpus, labels) -> Wrapper:
        labels = self._check_labels(corpus, labels)
        spans = [_span(corpus, r) for r in sorted(labels)]
        left = self._shared(spans, lambda st, s, e, k: st[s - k:s] if k <= s else None)
        right = self._shared(spans, lambda st, s, e, k: st[e:e + k] if e + k <= len(st) else None)
        return Wrapper(self.kind, LRFeatureRule(left, right), labels)

    @staticmethod
    def _shared(spans, value_at) -> str:
        # largest k such that every label has the same L_k (resp. R_k) value;
        # the shared values for smaller k follow from it
        shared = ""
        k = 1
        while True:
            values = {value_at(*sp, k) for sp in spans}
            if len(values) != 1 or None in values:
                return shared
            shared = values.pop()
            k += 1

    def apply_features(self, rule, corpus) -> frozenset:
        out = set()
        for doc in corpus:
            stream = doc.char_stream
            for i, (s, e) in doc.spans.items():
                if stream.endswith(rule.left, 0, s) and stream.startswith(rule.right, e):
                    out.add(NodeRef(doc.page_id, i))
        return frozenset(out)

    def features(self, corpus, node):
        raise NotImplementedError("LR features are not materialized; use subdivision/refine")

    def attribute_families(self, corpus, labels) -> list:
        return ["L", "R"]

    def _value(self, corpus, ref, attribute):
        family, k = attribute[0], int(attribute[2:])
        stream, s, e = _span(corpus, ref)
        if family == "L":
            return stream[s - k:s] if k <= s else None
        return stream[e:e + k] if e + k <= len(stream) else None

    def subdivision(self, corpus, s, attribute) -> list[frozenset]:
        """Subdivide by one materialized attribute ``L_k`` or ``R_k``."""
        groups: dict[str, set] = {}
        for ref in s:
            v = self._value(corpus, ref, attribute)
            if v is not None:
                groups.setdefault(v, set()).add(ref)
        return [frozenset(g) for _, g in sorted(groups.items())]

    def refine(self, corpus, s, family) -> list[frozenset]:
        """Union of ``subdivision(s, family_k)`` over all ``k``, computed lazily.

        Walks the trie of the members' left (or right) contexts and emits a
        part only at depths where the grouping actually changes.
        """
        def char_at(ref, k):
            stream, start, end = _span(corpus, ref)
            if family == "L":
                return stream[start - k] if k <= start else None
            return stream[end + k - 1] if end + k <= len(stream) else None

        parts: list[frozenset] = []
        work = [(frozenset(s), 0)]
        while work:
            group, depth = work.pop()
            if len(group) == 1:
                continue
            k = depth + 1
            while True:
                chars = {char_at(r, k) for r in group}
                if len(chars) != 1 or None in chars:
                    break
                k += 1
            buckets: dict[str, set] = {}
            for r in group:
                c = char_at(r, k)
                if c is not None:
                    buckets.setdefault(c, set()).add(r)
            for _, members in sorted(buckets.items()):
                part = frozenset(members)
                parts.append(part)
                work.append((part, k))
        return parts

    def describe(self, rule) -> str:
        return f"LR({rule.left[-40:]!r}, {rule.right[:40]!r})"

    def rule_to_json(self, rule):
        return {"left": rule.left, "right": rule.right,
                "features": isinstance(rule, LRFeatureRule)}

    def rule_from_json(self, data):
        cls = LRFeatureRule if data.get("features") else LRRule
        return cls(data["left"], data["right"])


LR = register(LRInductor())
