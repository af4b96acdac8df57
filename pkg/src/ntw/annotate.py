"""Automatic, noisy annotators and estimation of their (p, r) parameters."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .docmodel import Corpus, NodeRef
from .errors import BadPattern, NoGold
from .ranking.scoring import AnnotatorModel

CLAMP = 1e-4


class Label(NamedTuple):
    node: NodeRef
    type: str


class LabelSet(frozenset):
    """A frozenset of :class:`Label` with per-type views."""

    def nodes(self, type: str | None = None) -> frozenset:
        return frozenset(l.node for l in self if type is None or l.type == type)

    def types(self) -> list[str]:
        return sorted({l.type for l in self})

    @classmethod
    def of(cls, nodes: Iterable[NodeRef], type: str) -> "LabelSet":
        return cls(Label(n, type) for n in nodes)


def _normalize(text: str, casefold: bool) -> str:
    text = " ".join(text.split())
    return text.casefold() if casefold else text


@dataclass
class DictionaryAnnotator:
    type: str
    entries: frozenset
    casefold: bool = True

    def __post_init__(self):
        cleaned = {_normalize(e, self.casefold) for e in self.entries}
        cleaned.discard("")
        if not cleaned:
            raise ValueError("dictionary annotator needs at least one entry")
        self.entries = frozenset(cleaned)
        alternatives = "|".join(re.escape(e) for e in sorted(cleaned, key=lambda e: (-len(e), e)))
        self._regex = re.compile(rf"(?<!\w)(?:{alternatives})(?!\w)")

    @classmethod
    def from_file(cls, type: str, path, casefold: bool = True) -> "DictionaryAnnotator":
        with open(path, encoding="utf-8") as fh:
            return cls(type, frozenset(line.strip() for line in fh if line.strip()), casefold)

    def matches(self, text: str) -> bool:
        return self._regex.search(_normalize(text, self.casefold)) is not None


@dataclass
class PatternAnnotator:
    type: str
    pattern: str

    def __post_init__(self):
        try:
            self._regex = re.compile(self.pattern)
        except re.error as exc:
            raise BadPattern(f"bad pattern {self.pattern!r}: {exc}") from exc

    def matches(self, text: str) -> bool:
        return self._regex.search(text) is not None


ZIPCODE = r"(?<!\d)\d{5}(?!\d)"


@dataclass(frozen=True)
class SyntheticAnnotatorConfig:
    p1: float  # hit rate on correct nodes
    p2: float  # hit rate on incorrect nodes
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError("p1 and p2 must be probabilities")

    @classmethod
    def for_target(cls, precision: float, recall: float, n_correct: int, n_incorrect: int,
                   seed: int = 0) -> "SyntheticAnnotatorConfig":
        """Pick (p1, p2) whose expected precision and recall hit the targets."""
        p1 = recall
        p2 = n_correct * p1 * (1 - precision) / (precision * n_incorrect) if n_incorrect else 0.0
        return cls(p1, min(1.0, p2), seed)

    def expected_precision(self, n_correct: int, n_incorrect: int) -> float:
        hits = n_correct * self.p1
        total = hits + n_incorrect * self.p2
        return hits / total if total else 1.0


def _scan(corpus: Corpus, matcher, type: str) -> LabelSet:
    return LabelSet(
        Label(NodeRef(doc.page_id, i), type)
        for doc in corpus for i in doc.text_indices if matcher.matches(doc.nodes[i].text)
    )


def annotate_dictionary(corpus: Corpus, annot: DictionaryAnnotator) -> LabelSet:
    """Label text nodes containing a whole-word mention of a dictionary entry."""
    return _scan(corpus, annot, annot.type)


def annotate_pattern(corpus: Corpus, annot: PatternAnnotator) -> LabelSet:
    """Label text nodes containing a match of the annotator's regular expression."""
    return _scan(corpus, annot, annot.type)


def annotate_synthetic(corpus: Corpus, gold, cfg: SyntheticAnnotatorConfig,
                       type: str = "target") -> LabelSet:
    """Label gold nodes with prob. ``p1`` and other text nodes with prob. ``p2``."""
    gold = frozenset(gold)
    rng = random.Random(cfg.seed)
    out = []
    for ref in corpus.text_refs():
        if rng.random() < (cfg.p1 if ref in gold else cfg.p2):
            out.append(Label(ref, type))
    return LabelSet(out)


def pr_counts(L, gold, corpus: Corpus, labeled_pages_only: bool = False) -> tuple[int, int, int, int]:
    """``(|L & gold|, |gold|, |L - gold|, |non-gold text nodes|)``."""
    L = frozenset(L)
    gold = frozenset(gold)
    refs = corpus.text_refs()
    if labeled_pages_only:
        pages = {r.page_id for r in L}
        gold = frozenset(g for g in gold if g.page_id in pages)
        refs = [r for r in refs if r.page_id in pages]
    return len(L & gold), len(gold), len(L - gold), len(refs) - len(gold)


def model_from_counts(type: str, hits: int, n_gold: int, false: int, n_other: int) -> AnnotatorModel:
    if n_gold == 0:
        raise NoGold("cannot estimate recall without gold nodes")
    if n_other <= 0:
        raise NoGold("need text nodes outside the gold set to estimate p")

    def clamp(v):
        return min(1.0 - CLAMP, max(CLAMP, v))

    r = clamp(hits / n_gold)
    p = clamp(1.0 - false / n_other)
    if 1.0 - p >= r:
        # complementing the annotator's output swaps the roles of the two rates
        return AnnotatorModel(type, clamp(1.0 - p), clamp(1.0 - r), flipped=True)
    return AnnotatorModel(type, p, r)


def estimate_pr(L, gold, corpus: Corpus, type: str = "target",
                labeled_pages_only: bool = False) -> AnnotatorModel:
    """Estimate annotator parameters from a gold-labeled sample."""
    nodes = L.nodes() if isinstance(L, LabelSet) else frozenset(L)
    return model_from_counts(type, *pr_counts(nodes, gold, corpus, labeled_pages_only))
