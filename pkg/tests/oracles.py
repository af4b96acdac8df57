"""Reference implementations used to check the package.

Everything here is written from the definitions, without calling into the
code under test except to read parsed documents. They are slow and only meant
for small inputs.
"""

from __future__ import annotations

import html
import itertools
import math
import os
from dataclasses import dataclass, field


# --------------------------------------------------------------- page trees

@dataclass
class Elem:
    tag: str
    attrs: tuple = ()
    children: list = field(default_factory=list)


def render(node) -> str:
    if isinstance(node, str):
        return html.escape(node, quote=False)
    attrs = "".join(f' {k}="{html.escape(v)}"' for k, v in node.attrs)
    inner = "".join(render(c) for c in node.children)
    return f"<{node.tag}{attrs}>{inner}</{node.tag}>"


def page_html(body_children) -> str:
    return render(Elem("html", (), [Elem("body", (), list(body_children))]))


@dataclass(frozen=True)
class TextInfo:
    """What the generator knows about one text leaf."""

    index: int   # pre-order position, counting elements and texts
    text: str
    chain: tuple  # (tag, same-tag child number, attrs) per ancestor, nearest first


def text_infos(root: Elem) -> list[TextInfo]:
    out = []
    counter = itertools.count()

    def walk(node, chain, number):
        idx = next(counter)
        if isinstance(node, str):
            out.append(TextInfo(idx, node, tuple(chain)))
            return
        link = (node.tag, number, tuple(node.attrs))
        seen: dict[str, int] = {}
        for child in node.children:
            if isinstance(child, str):
                walk(child, [link] + chain, None)
            else:
                seen[child.tag] = seen.get(child.tag, 0) + 1
                walk(child, [link] + chain, seen[child.tag])

    walk(root, [], 1)
    return out


# ------------------------------------------------------ wrapper semantics

def brute_space(extract, L) -> set:
    """Distinct outputs over every non-empty subset of ``L``."""
    L = sorted(L)
    return {frozenset(extract(frozenset(c)))
            for n in range(1, len(L) + 1) for c in itertools.combinations(L, n)}


def brute_closed_sets(extract, L) -> set:
    L = frozenset(L)
    return {frozenset(extract(frozenset(c))) & L
            for n in range(1, len(L) + 1) for c in itertools.combinations(sorted(L), n)}


def table_extract(positions: dict, labels) -> frozenset:
    """TABLE from its definition: cell, row, column or the whole table."""
    rows = {positions[l][0] for l in labels}
    cols = {positions[l][1] for l in labels}
    keep_row = rows.pop() if len(rows) == 1 else None
    keep_col = cols.pop() if len(cols) == 1 else None
    return frozenset(ref for ref, (r, c) in positions.items()
                     if (keep_row is None or r == keep_row) and (keep_col is None or c == keep_col))


def xpath_extract(chains: dict, labels) -> frozenset:
    """Nodes agreeing with every label on each step all labels share."""
    picked = [chains[l] for l in labels]
    depth = min(len(c) for c in picked)
    steps = []
    for d in range(depth):
        col = [c[d] for c in picked]
        tag = col[0][0] if all(x[0] == col[0][0] for x in col) else None
        num = col[0][1] if all(x[1] == col[0][1] for x in col) else None
        attrs = set(col[0][2]).intersection(*(set(x[2]) for x in col))
        steps.append((tag, num, attrs))

    def ok(chain):
        if len(chain) < depth:
            return False
        for (tag, num, attrs), (t, n, a) in zip(steps, chain):
            if tag is not None and t != tag:
                return False
            if num is not None and n != num:
                return False
            if not attrs <= set(a):
                return False
        return True

    return frozenset(ref for ref, chain in chains.items() if ok(chain))


def common_suffix(strings) -> str:
    return os.path.commonprefix([s[::-1] for s in strings])[::-1]


def lr_delimiters(streams: dict, spans: dict, labels) -> tuple[str, str]:
    lefts = [streams[l.page_id][:spans[l][0]] for l in labels]
    rights = [streams[l.page_id][spans[l][1]:] for l in labels]
    return common_suffix(lefts), os.path.commonprefix(rights)


def lr_extract(streams: dict, spans: dict, labels) -> frozenset:
    """A node is extracted when its span is a minimal left..right match.

    The span must follow ``left``, the first ``right`` at or after its start
    must begin exactly at its end, and no other ``left`` may end inside it.
    """
    left, right = lr_delimiters(streams, spans, labels)
    out = set()
    for ref, (s, e) in spans.items():
        st = streams[ref.page_id]
        if not st[:s].endswith(left):
            continue
        if st.find(right, s) != e:
            continue
        if any(st[:t].endswith(left) for t in range(s + 1, e + 1)):
            continue
        out.add(ref)
    return frozenset(out)


# -------------------------------------------------------------- distances

def levenshtein(a, b, cost=lambda x, y: 0 if x == y else 1) -> float:
    """Plain recursion with memoization."""
    a, b = tuple(a), tuple(b)
    memo: dict = {}

    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        if (i, j) not in memo:
            memo[(i, j)] = min(d(i - 1, j) + 1, d(i, j - 1) + 1,
                               d(i - 1, j - 1) + cost(a[i - 1], b[j - 1]))
        return memo[(i, j)]

    return d(len(a), len(b))


def typed_cost(x, y):
    if x == y:
        return 0
    if x.startswith("<#text:") and y.startswith("<#text:"):
        return math.inf
    return 1


def longest_common_run_texts(a, b) -> int:
    """Text tokens in the longest common contiguous run (ties: most texts)."""
    best = (0, 0)
    for i in range(len(a)):
        for j in range(len(b)):
            k = 0
            while i + k < len(a) and j + k < len(b) and a[i + k] == b[j + k]:
                k += 1
                texts = sum(1 for t in a[i:i + k] if t.startswith("<#text"))
                best = max(best, (k, texts))
    return best[1]


# ------------------------------------------------------------ probability

def full_likelihood(X, L, universe, p, r) -> float:
    """Log P(L | X) with every node's factor, not just the varying ones."""
    total = 0.0
    for n in universe:
        if n in X:
            total += math.log(r if n in L else 1 - r)
        else:
            total += math.log(1 - p if n in L else p)
    return total


def gaussian_kde_pmf(samples, h, lo, hi, floor) -> list[float]:
    dens = [sum(math.exp(-0.5 * ((g - x) / h) ** 2) for x in samples) for g in range(lo, hi + 1)]
    total = sum(dens)
    dens = [max(v / total, floor) for v in dens]
    total = sum(dens)
    return [v / total for v in dens]


def prf(extracted, gold) -> tuple[float, float, float]:
    extracted, gold = set(extracted), set(gold)
    hit = len(extracted & gold)
    p = hit / len(extracted) if extracted else 0.0
    r = hit / len(gold)
    f = 0.0 if hit == 0 else 2 * p * r / (p + r)
    return p, r, f
