"""XPATH: most specific path rule (tags, child numbers, attributes) covering the labels.

Two equivalent routes are kept on purpose. :meth:`XPathInductor.induce`
builds a path expression from the labels' ancestor chains and evaluates it
top-down from the root; :meth:`induce_from_features` intersects per-node
feature sets and answers through an inverted index.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..docmodel import Corpus, Document, NodeRef
from .base import Feature, FeatureBasedInductor, FeatureRule, Wrapper, register


@dataclass(frozen=True)
class Step:
    """One location step. ``tag=None`` is ``*``.

    ``child_number`` always counts same-tag siblings, also under ``*``
    (this differs from standard XPath positional predicates).
    """

    tag: str | None = None
    child_number: int | None = None
    attrs: tuple = ()

    def matches(self, node) -> bool:
        if node.is_text:
            return False
        if self.tag is not None and node.tag != self.tag:
            return False
        if self.child_number is not None and node.child_number != self.child_number:
            return False
        return all(node.attr(k) == v for k, v in self.attrs)

    def render(self) -> str:
        out = self.tag or "*"
        for k, v in self.attrs:
            out += f"[@{k}={_quote(v)}]"
        if self.child_number is not None:
            out += f"[{self.child_number}]"
        return out


def _quote(v: str) -> str:
    if "'" not in v:
        return f"'{v}'"
    if '"' not in v:
        return f'"{v}"'
    return "concat(" + ", \"'\", ".join(f"'{p}'" for p in v.split("'")) + ")"


@dataclass(frozen=True)
class PathRule:
    """``//steps[0]/steps[1]/.../text()``, outermost step first."""

    steps: tuple

    def render(self) -> str:
        return "//" + "/".join(s.render() for s in self.steps) + "/text()"


def _chain(doc: Document, index: int) -> list:
    return list(doc.ancestors(index))


def evaluate_path(rule: PathRule, doc: Document) -> list[int]:
    """Top-down evaluation of ``rule`` on one document."""
    first, rest = rule.steps[0], rule.steps[1:]
    current = [n for n in doc.nodes if first.matches(n)]
    for step in rest:
        current = [c for n in current for c in n.children if step.matches(c)]
    return [c.preorder_index for n in current for c in n.children if c.is_text]


def _node_features(doc: Document, index: int) -> frozenset:
    feats = []
    for d, anc in enumerate(doc.ancestors(index), 1):
        # existence of the ancestor, so a bare ``*`` step still constrains depth
        feats.append(Feature(f"{d}:node", "*"))
        feats.append(Feature(f"{d}:tagname", anc.tag))
        feats.append(Feature(f"{d}:childnumber", str(anc.child_number)))
        for k, v in anc.attrs:
            feats.append(Feature(f"{d}:attr:{k}", v))
    return frozenset(feats)


def _feature_table(corpus: Corpus):
    def build():
        table = {}
        index: dict[Feature, set] = {}
        for doc in corpus:
            for i in doc.text_indices:
                ref = NodeRef(doc.page_id, i)
                f = table[ref] = _node_features(doc, i)
                for feat in f:
                    index.setdefault(feat, set()).add(ref)
        return table, {k: frozenset(v) for k, v in index.items()}

    return corpus.cached("xpath.features", build)


class XPathInductor(FeatureBasedInductor):
    kind = "xpath"

    def induce(self, corpus, labels) -> Wrapper:
        labels = self._check_labels(corpus, labels)
        chains = [_chain(corpus.doc(r.page_id), r.index) for r in sorted(labels)]
        depth = min(len(c) for c in chains)
        steps = []
        for d in range(depth):
            column = [c[d] for c in chains]
            tags = {n.tag for n in column}
            numbers = {n.child_number for n in column}
            common = set(column[0].attrs)
            for n in column[1:]:
                common &= set(n.attrs)
            steps.append(Step(
                tag=tags.pop() if len(tags) == 1 else None,
                child_number=numbers.pop() if len(numbers) == 1 else None,
                attrs=tuple(sorted(common)),
            ))
        return Wrapper(self.kind, PathRule(tuple(reversed(steps))), labels)

    def apply(self, wrapper, corpus) -> frozenset:
        rule = wrapper.rule
        if isinstance(rule, FeatureRule):
            return self.apply_features(rule, corpus)
        return frozenset(
            NodeRef(doc.page_id, i) for doc in corpus for i in evaluate_path(rule, doc))

    def features(self, corpus, node) -> frozenset:
        return _feature_table(corpus)[0][node]

    def apply_features(self, rule, corpus) -> frozenset:
        _, index = _feature_table(corpus)
        postings = []
        for feat in rule.features:
            hit = index.get(feat)
            if not hit:
                return frozenset()
            postings.append(hit)
        if not postings:
            return frozenset(corpus.text_refs())
        postings.sort(key=len)
        out = set(postings[0])
        for p in postings[1:]:
            out &= p
            if not out:
                break
        return frozenset(out)

    def attribute_order(self, attribute: str):
        position, _, kind = attribute.partition(":")
        return (int(position), kind)

    def describe(self, rule) -> str:
        if isinstance(rule, FeatureRule):
            return feature_rule_to_path(rule).render()
        return rule.render()

    def rule_to_json(self, rule):
        if isinstance(rule, FeatureRule):
            return {"features": [list(f) for f in rule.sorted()]}
        return {"steps": [
            {"tag": s.tag, "child_number": s.child_number, "attrs": [list(a) for a in s.attrs]}
            for s in rule.steps]}

    def rule_from_json(self, data):
        if "features" in data:
            return FeatureRule(frozenset(Feature(*f) for f in data["features"]))
        return PathRule(tuple(
            Step(s["tag"], s["child_number"], tuple(tuple(a) for a in s["attrs"]))
            for s in data["steps"]))


def feature_rule_to_path(rule: FeatureRule) -> PathRule:
    """Rebuild the path expression denoted by an XPATH feature set."""
    by_pos: dict[int, dict] = {}
    for attr, value in rule.features:
        pos, _, kind = attr.partition(":")
        slot = by_pos.setdefault(int(pos), {"attrs": []})
        if kind == "tagname":
            slot["tag"] = value
        elif kind == "childnumber":
            slot["child_number"] = int(value)
        elif kind == "node":
            continue
        else:
            slot["attrs"].append((kind.split(":", 1)[1], value))
    depth = max(by_pos, default=0)
    steps = []
    for d in range(depth, 0, -1):
        slot = by_pos.get(d, {"attrs": []})
        steps.append(Step(slot.get("tag"), slot.get("child_number"), tuple(sorted(slot["attrs"]))))
    if not steps:
        steps = [Step()]
    return PathRule(tuple(steps))


XPATH = register(XPathInductor())
