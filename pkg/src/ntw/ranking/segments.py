"""Record segmentation and the two list-structure features (schema size, alignment)."""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from ..docmodel import TEXT_TOKEN, Corpus, NodeRef

ALL_PAIRS_LIMIT = 30
SAMPLED_PAIRS = 200


def is_text_token(tok: str) -> bool:
    return tok.startswith(TEXT_TOKEN[:-1])


@dataclass(frozen=True)
class Segment:
    page_id: str
    tokens: tuple
    tail: bool = False  # runs from the page's last boundary node to the end of the page

    @property
    def text_count(self) -> int:
        return sum(1 for t in self.tokens if is_text_token(t))


def _by_page(corpus: Corpus, X) -> dict[str, list[int]]:
    pages: dict[str, list[int]] = {}
    for ref in X:
        pages.setdefault(ref.page_id, []).append(ref.index)
    return pages


def segment(corpus: Corpus, X, relabel: dict | None = None) -> list[Segment]:
    """Cut each page's token stream at the members of ``X``.

    A segment runs from one member's token up to (not including) the next
    member's token; the last member on a page runs to the end of the page.
    ``relabel`` optionally maps NodeRefs to replacement text tokens (used for
    typed alignment).
    """
    pages = _by_page(corpus, X)
    out = []
    for doc in corpus:
        members = pages.get(doc.page_id)
        if not members:
            continue
        tokens = doc.tokens
        if relabel:
            tokens = list(tokens)
            for ref, tok in relabel.items():
                if ref.page_id == doc.page_id:
                    tokens[doc.token_positions[ref.index]] = tok
            tokens = tuple(tokens)
        cuts = sorted(doc.token_positions[i] for i in members)
        for a, b in zip(cuts, cuts[1:]):
            out.append(Segment(doc.page_id, tokens[a:b]))
        out.append(Segment(doc.page_id, tokens[cuts[-1]:], tail=True))
    return out


def record_segments(corpus: Corpus, X, relabel: dict | None = None) -> list[Segment]:
    """Segments used for scoring: interior ones, or the tails if there are none."""
    segs = segment(corpus, X, relabel)
    interior = [s for s in segs if not s.tail]
    return interior or segs


@lru_cache(maxsize=200_000)
def _common_substring_texts(a: tuple, b: tuple) -> int:
    # longest common contiguous run; ties broken towards more text tokens
    best = (0, 0)
    prev = [(0, 0)] * (len(b) + 1)
    for x in a:
        cur = [(0, 0)]
        tx = 1 if is_text_token(x) else 0
        for j, y in enumerate(b, 1):
            if x == y:
                length, texts = prev[j - 1]
                cell = (length + 1, texts + tx)
                if cell > best:
                    best = cell
            else:
                cell = (0, 0)
            cur.append(cell)
        prev = cur
    return best[1]


def common_substring_texts(a: Sequence[str], b: Sequence[str]) -> int:
    """Text tokens inside the longest common contiguous token run of ``a`` and ``b``."""
    return _common_substring_texts(tuple(a), tuple(b))


def schema_size(segments: Sequence[Segment]) -> int:
    """Median (low) over adjacent segment pairs of the shared-run text count."""
    if not segments:
        raise ValueError("schema size needs at least one segment")
    if len(segments) == 1:
        return segments[0].text_count
    values = [_common_substring_texts(a.tokens, b.tokens) for a, b in zip(segments, segments[1:])]
    return statistics.median_low(values)


def unit_cost(x: str, y: str) -> float:
    return 0.0 if x == y else 1.0


def typed_cost(x: str, y: str) -> float:
    """Substitution cost where two differently typed field tokens may never align."""
    if x == y:
        return 0.0
    if ":" in x and ":" in y and is_text_token(x) and is_text_token(y):
        return float("inf")
    return 1.0


def _bit_parallel(a: tuple, b: tuple) -> int:
    # Myers/Hyyro bit-vector recurrence over the columns of ``a``
    if not a:
        return len(b)
    peq: dict = {}
    for i, tok in enumerate(a):
        peq[tok] = peq.get(tok, 0) | (1 << i)
    mask = (1 << len(a)) - 1
    last = 1 << (len(a) - 1)
    pv, mv, score = mask, 0, len(a)
    for tok in b:
        eq = peq.get(tok, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | ~(xh | pv)
        mh = pv & xh
        if ph & last:
            score += 1
        elif mh & last:
            score -= 1
        ph = (ph << 1) | 1
        mh <<= 1
        pv = (mh | ~(xv | ph)) & mask
        mv = ph & xv & mask
    return score


@lru_cache(maxsize=200_000)
def _levenshtein(a: tuple, b: tuple, typed: bool) -> int:
    if not typed:
        return _bit_parallel(a, b)
    return _dp_levenshtein(a, b, typed_cost)


def _dp_levenshtein(a: tuple, b: tuple, cost) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        row = [cost(x, y) for y in b]
        cur = [i]
        left = i
        for j, c in enumerate(row):
            left = min(prev[j + 1] + 1, left + 1, prev[j] + c)
            cur.append(left)
        prev = cur
    return int(prev[-1])


def edit_distance(a: Sequence[str], b: Sequence[str], typed: bool = False) -> int:
    """Token-level Levenshtein distance with unit indel cost."""
    return _levenshtein(tuple(a), tuple(b), typed)


def evaluated_pairs(n: int) -> list[tuple[int, int]]:
    """All pairs up to ``ALL_PAIRS_LIMIT`` segments, else adjacent pairs plus a fixed sample."""
    if n <= ALL_PAIRS_LIMIT:
        return list(combinations(range(n), 2))
    rng = random.Random(n)
    pairs = {(i, i + 1) for i in range(n - 1)}
    for _ in range(SAMPLED_PAIRS):
        i, j = rng.sample(range(n), 2)
        pairs.add((min(i, j), max(i, j)))
    return sorted(pairs)


def alignment(segments: Sequence[Segment], typed: bool = False) -> int:
    """Maximum edit distance over the evaluated segment pairs (0 = perfect list)."""
    if not segments:
        raise ValueError("alignment needs at least one segment")
    pairs = [(segments[i].tokens, segments[j].tokens) for i, j in evaluated_pairs(len(segments))]
    pairs = [(a, b) for a, b in pairs if a != b]
    if not typed:
        return max((_levenshtein(a, b, False) for a, b in pairs), default=0)
    # unit <= typed <= 2 * unit, so visit pairs by unit distance and stop early
    bounded = sorted(((_levenshtein(a, b, False), a, b) for a, b in pairs),
                     key=lambda t: -t[0])
    best = 0
    for unit, a, b in bounded:
        if 2 * unit <= best:
            break
        best = max(best, _levenshtein(a, b, True))
    return best


FEATURES: dict[str, Callable] = {"schema_size": schema_size, "alignment": alignment}
