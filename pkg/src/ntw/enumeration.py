"""Enumerating the wrapper space: every distinct wrapper inducible from subsets of the labels."""

from __future__ import annotations

import heapq
import itertools
import json
import time
from dataclasses import dataclass, field

from .docmodel import Corpus, NodeRef
from .errors import EmptyLabelSet, TooManyLabels
from .inductors import Inductor, Wrapper, require_feature_based

NAIVE_CAP = 15


def canonical(s) -> tuple:
    """Dedup key for label subsets: sorted (page_id, preorder_index) pairs."""
    return tuple(sorted(s))


@dataclass
class WrapperSpace:
    """Distinct wrappers keyed by their output node set on the training corpus."""

    wrappers: dict = field(default_factory=dict)    # output -> Wrapper
    provenance: dict = field(default_factory=dict)  # output -> label subset
    inductor_calls: int = 0
    method: str = ""
    seconds: float = 0.0
    family: list = field(default_factory=list)  # closed sets expanded (bottomup) or induced on (topdown)
    readd_attempts: int = 0                      # BottomUp closures that hit a processed set

    def add(self, wrapper: Wrapper, output: frozenset, subset: frozenset) -> bool:
        if output in self.wrappers:
            return False
        self.wrappers[output] = wrapper
        self.provenance[output] = frozenset(subset)
        return True

    def __len__(self):
        return len(self.wrappers)

    def __iter__(self):
        return iter(self.wrappers.items())

    def outputs(self) -> set:
        return set(self.wrappers)

    def report(self, **extra) -> dict:
        return {"method": self.method, "k": len(self), "calls": self.inductor_calls,
                "seconds": round(self.seconds, 6), **extra}

    def report_json(self, **extra) -> str:
        return json.dumps(self.report(**extra), sort_keys=True)


class _Counted:
    """Counts inductor invocations made by an enumerator."""

    def __init__(self, inductor: Inductor, corpus: Corpus, space: WrapperSpace):
        self.inductor = inductor
        self.corpus = corpus
        self.space = space

    def __call__(self, subset) -> tuple[Wrapper, frozenset]:
        self.space.inductor_calls += 1
        w = self.inductor.induce(self.corpus, subset)
        return w, self.inductor.apply(w, self.corpus)


def _labels(L) -> frozenset:
    L = frozenset(L)
    if not L:
        raise EmptyLabelSet("label set is empty")
    return L


def closure(inductor: Inductor, corpus: Corpus, s, L) -> frozenset:
    """The labels a wrapper trained on ``s`` also extracts: ``phi(s) & L``."""
    s = frozenset(s)
    if not s:
        raise EmptyLabelSet("closure of the empty set is undefined")
    return inductor.extract(corpus, s) & frozenset(L)


def bottom_up(inductor: Inductor, corpus: Corpus, L) -> WrapperSpace:
    """Blackbox enumeration for well-behaved inductors.

    Expands the smallest pending closed set by one label in every way,
    queueing the closure of each expansion. At most ``k * |L|`` calls.
    """
    L = _labels(L)
    t0 = time.perf_counter()
    space = WrapperSpace(method="bottomup")
    call = _Counted(inductor, corpus, space)
    order = sorted(L)
    start = frozenset()
    heap = [(0, (), start)]
    pending = {canonical(start)}
    processed = set()
    while heap:
        _, key, s = heapq.heappop(heap)
        pending.discard(key)
        for label in order:
            if label in s:
                continue
            grown = s | {label}
            w, out = call(grown)
            space.add(w, out, grown)
            s_new = out & L
            new_key = canonical(s_new)
            if new_key in processed:
                space.readd_attempts += 1
            elif new_key not in pending:
                pending.add(new_key)
                heapq.heappush(heap, (len(s_new), new_key, s_new))
        processed.add(key)
    space.seconds = time.perf_counter() - t0
    space.family = [processed_set for processed_set in map(frozenset, sorted(processed)) if processed_set]
    return space


def subdivision(inductor: Inductor, corpus: Corpus, s, attribute) -> list[frozenset]:
    """Partition the members of ``s`` that carry ``attribute`` by its value."""
    return require_feature_based(inductor).subdivision(corpus, frozenset(s), attribute)


def top_down(inductor: Inductor, corpus: Corpus, L) -> WrapperSpace:
    """Feature-based enumeration: exactly one inductor call per wrapper."""
    inductor = require_feature_based(inductor)
    L = _labels(L)
    t0 = time.perf_counter()
    space = WrapperSpace(method="topdown")
    family = {canonical(L): L}
    for attribute in inductor.attribute_families(corpus, L):
        for s in list(family.values()):
            for part in inductor.refine(corpus, s, attribute):
                if part:
                    family.setdefault(canonical(part), part)
    call = _Counted(inductor, corpus, space)
    for key in sorted(family):
        s = family[key]
        w, out = call(s)
        space.add(w, out, s)
    space.family = [family[k] for k in sorted(family)]
    space.seconds = time.perf_counter() - t0
    return space


def naive_enumerate(inductor: Inductor, corpus: Corpus, L, cap: int = NAIVE_CAP) -> WrapperSpace:
    """Call the inductor on every non-empty subset of ``L`` (the ground-truth oracle)."""
    L = _labels(L)
    if len(L) > cap:
        raise TooManyLabels(f"{len(L)} labels exceed the naive enumeration cap of {cap}")
    t0 = time.perf_counter()
    space = WrapperSpace(method="naive")
    call = _Counted(inductor, corpus, space)
    order = sorted(L)
    for size in range(1, len(order) + 1):
        for combo in itertools.combinations(order, size):
            subset = frozenset(combo)
            w, out = call(subset)
            space.add(w, out, subset)
    space.seconds = time.perf_counter() - t0
    return space


ENUMERATORS = {"bottomup": bottom_up, "topdown": top_down, "naive": naive_enumerate}


def enumerate_space(method: str, inductor: Inductor, corpus: Corpus, L) -> WrapperSpace:
    try:
        fn = ENUMERATORS[method]
    except KeyError:
        raise ValueError(f"unknown enumerator {method!r}") from None
    return fn(inductor, corpus, L)


def closed_subsets(inductor: Inductor, corpus: Corpus, L, cap: int = NAIVE_CAP) -> set:
    """Distinct closures of all non-empty subsets (exponential; oracle scale only)."""
    L = _labels(L)
    if len(L) > cap:
        raise TooManyLabels(f"{len(L)} labels exceed the cap of {cap}")
    order = sorted(L)
    return {
        closure(inductor, corpus, combo, L)
        for size in range(1, len(order) + 1)
        for combo in itertools.combinations(order, size)
    }


__all__ = [
    "NodeRef", "WrapperSpace", "bottom_up", "closed_subsets", "closure", "enumerate_space",
    "naive_enumerate", "subdivision", "top_down", "canonical", "ENUMERATORS",
]
