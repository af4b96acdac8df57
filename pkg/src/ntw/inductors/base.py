from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple

from ..docmodel import Corpus, NodeRef
from ..errors import EmptyLabelSet, NotFeatureBased, NotTextNode


class Feature(NamedTuple):
    attribute: str
    value: str


@dataclass(frozen=True)
class Wrapper:
    """A learned rule. Two wrappers are interchangeable iff their outputs agree."""

    kind: str
    rule: Any
    trained_on: frozenset = field(default_factory=frozenset, compare=False)

    def describe(self) -> str:
        return get_inductor(self.kind).describe(self.rule)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "rule": get_inductor(self.kind).rule_to_json(self.rule),
            "description": self.describe(),
            "trained_on": [list(r) for r in sorted(self.trained_on)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Wrapper":
        kind = data["kind"]
        return cls(kind, get_inductor(kind).rule_from_json(data["rule"]),
                   frozenset(NodeRef(p, i) for p, i in data.get("trained_on", [])))


class Inductor:
    """A wrapper inductor: generalizes labeled text nodes into a rule."""

    kind = ""
    feature_based = False

    def induce(self, corpus: Corpus, labels: Iterable[NodeRef]) -> Wrapper:
        raise NotImplementedError

    def apply(self, wrapper: Wrapper, corpus: Corpus) -> frozenset:
        raise NotImplementedError

    def describe(self, rule) -> str:
        return repr(rule)

    def rule_to_json(self, rule):
        raise NotImplementedError

    def rule_from_json(self, data):
        raise NotImplementedError

    def extract(self, corpus, labels) -> frozenset:
        return self.apply(self.induce(corpus, labels), corpus)

    def _check_labels(self, corpus: Corpus, labels) -> frozenset:
        labels = frozenset(labels)
        if not labels:
            raise EmptyLabelSet("cannot induce a wrapper from no labels")
        for ref in labels:
            if not corpus.is_text(ref):
                raise NotTextNode(f"{ref} is not a text node")
        return labels


class FeatureBasedInductor(Inductor):
    """An inductor equivalent to ``{n | F(n) >= intersection of F(labels)}``."""

    feature_based = True

    def features(self, corpus: Corpus, node: NodeRef) -> frozenset:
        raise NotImplementedError

    def induce_from_features(self, corpus: Corpus, labels) -> Wrapper:
        labels = self._check_labels(corpus, labels)
        common = None
        for ref in labels:
            f = self.features(corpus, ref)
            common = f if common is None else common & f
        return Wrapper(self.kind, FeatureRule(common), labels)

    def universe(self, corpus: Corpus) -> tuple:
        return corpus.text_refs()

    def apply_features(self, rule: "FeatureRule", corpus: Corpus) -> frozenset:
        need = rule.features
        return frozenset(n for n in self.universe(corpus) if need <= self.features(corpus, n))

    def attribute_families(self, corpus: Corpus, labels) -> list:
        """Attributes TopDown iterates over, in a fixed order."""
        attrs = {f.attribute for ref in labels for f in self.features(corpus, ref)}
        return sorted(attrs, key=self.attribute_order)

    def attribute_order(self, attribute: str):
        return attribute

    def subdivision(self, corpus: Corpus, s, attribute) -> list[frozenset]:
        """Group the members of ``s`` carrying ``attribute`` by its value."""
        groups: dict[str, set] = {}
        for ref in s:
            for f in self.features(corpus, ref):
                if f.attribute == attribute:
                    groups.setdefault(f.value, set()).add(ref)
                    break
        return [frozenset(g) for _, g in sorted(groups.items())]

    def refine(self, corpus: Corpus, s, family) -> list[frozenset]:
        """All parts TopDown derives from ``s`` for one attribute family."""
        return self.subdivision(corpus, s, family)


@dataclass(frozen=True)
class FeatureRule:
    features: frozenset

    def sorted(self):
        return sorted(self.features)


_REGISTRY: dict[str, Inductor] = {}


def register(inductor: Inductor) -> Inductor:
    _REGISTRY[inductor.kind] = inductor
    return inductor


def get_inductor(kind: str) -> Inductor:
    try:
        return _REGISTRY[kind]
    except KeyError:
        raise ValueError(f"unknown inductor kind {kind!r}") from None


def require_feature_based(inductor: Inductor) -> FeatureBasedInductor:
    if not getattr(inductor, "feature_based", False):
        raise NotFeatureBased(f"{inductor.kind or type(inductor).__name__} is not feature-based")
    return inductor


def apply(wrapper: Wrapper, corpus: Corpus) -> frozenset:
    return get_inductor(wrapper.kind).apply(wrapper, corpus)


def features_of(kind: str, corpus: Corpus, node: NodeRef) -> frozenset:
    inductor = require_feature_based(get_inductor(kind))
    if not corpus.is_text(node):
        raise NotTextNode(f"{node} is not a text node")
    return inductor.features(corpus, node)
