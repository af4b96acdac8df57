"""TABLE: the toy inductor over table cells (cell, row, column or whole table)."""

from __future__ import annotations

from typing import NamedTuple

from ..docmodel import Corpus, NodeRef
from ..errors import NotTextNode
from .base import Feature, FeatureBasedInductor, FeatureRule, Wrapper, register

_CELL_TAGS = ("td", "th")


class TableRule(NamedTuple):
    scope: str  # "cell" | "row" | "col" | "table"
    row: int | None = None
    col: int | None = None


def _cell_index(corpus: Corpus) -> dict[NodeRef, tuple[int, int]]:
    def build():
        pos = {}
        for doc in corpus:
            for i in doc.text_indices:
                cell = doc.parent(i)
                if cell is None or cell.tag not in _CELL_TAGS:
                    continue
                row = doc.parent(cell.preorder_index)
                if row is None or row.tag != "tr":
                    continue
                cells = [c for c in row.children if not c.is_text and c.tag in _CELL_TAGS]
                col = next(k for k, c in enumerate(cells, 1) if c is cell)
                pos[NodeRef(doc.page_id, i)] = (row.child_number, col)
        return pos

    return corpus.cached("table.cells", build)


class TableInductor(FeatureBasedInductor):
    kind = "table"

    def position(self, corpus, ref) -> tuple[int, int]:
        try:
            return _cell_index(corpus)[ref]
        except KeyError:
            raise NotTextNode(f"{ref} is not a text node inside a table cell") from None

    def _check_labels(self, corpus, labels):
        labels = super()._check_labels(corpus, labels)
        for ref in labels:
            self.position(corpus, ref)
        return labels

    def induce(self, corpus, labels) -> Wrapper:
        labels = self._check_labels(corpus, labels)
        rows = {self.position(corpus, r)[0] for r in labels}
        cols = {self.position(corpus, r)[1] for r in labels}
        if len(rows) == 1 and len(cols) == 1:
            rule = TableRule("cell", rows.pop(), cols.pop())
        elif len(rows) == 1:
            rule = TableRule("row", row=rows.pop())
        elif len(cols) == 1:
            rule = TableRule("col", col=cols.pop())
        else:
            rule = TableRule("table")
        return Wrapper(self.kind, rule, labels)

    def apply(self, wrapper, corpus) -> frozenset:
        rule = wrapper.rule
        if isinstance(rule, FeatureRule):
            return self.apply_features(rule, corpus)
        cells = _cell_index(corpus)
        return frozenset(
            ref for ref, (row, col) in cells.items()
            if (rule.row is None or row == rule.row) and (rule.col is None or col == rule.col)
        )

    def universe(self, corpus):
        return tuple(_cell_index(corpus))

    def features(self, corpus, node) -> frozenset:
        row, col = self.position(corpus, node)
        return frozenset({Feature("row", str(row)), Feature("col", str(col))})

    def describe(self, rule) -> str:
        if isinstance(rule, FeatureRule):
            return "cells with " + (", ".join(f"{a}={v}" for a, v in rule.sorted()) or "any position")
        if rule.scope == "cell":
            return f"cell ({rule.row}, {rule.col})"
        if rule.scope == "row":
            return f"row {rule.row}"
        if rule.scope == "col":
            return f"column {rule.col}"
        return "whole table"

    def rule_to_json(self, rule):
        if isinstance(rule, FeatureRule):
            return {"features": [list(f) for f in rule.sorted()]}
        return rule._asdict()

    def rule_from_json(self, data):
        if "features" in data:
            return FeatureRule(frozenset(Feature(*f) for f in data["features"]))
        return TableRule(**data)


TABLE = register(TableInductor())
