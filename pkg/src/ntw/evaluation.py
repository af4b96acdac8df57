"""Precision, recall and F1 over extracted node sets and assembled records."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from statistics import fmean

from .errors import EmptyGold


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    extracted: int
    gold: int
    correct: int

    def to_json(self) -> dict:
        return asdict(self)


def _metrics(correct: int, extracted: int, gold: int) -> Metrics:
    if gold == 0:
        raise EmptyGold("gold set is empty")
    precision = correct / extracted if extracted else 0.0
    recall = correct / gold
    f1 = 2 * precision * recall / (precision + recall) if precision and recall else 0.0
    return Metrics(precision, recall, f1, extracted, gold, correct)


def evaluate(extracted, gold) -> Metrics:
    """Node-level scores; an empty extraction scores precision 0."""
    extracted, gold = frozenset(extracted), frozenset(gold)
    return _metrics(len(extracted & gold), len(extracted), len(gold))


def record_key(page_id: str, fields: dict, types) -> tuple:
    return (page_id,) + tuple(fields.get(t) for t in types)


def evaluate_records(records, gold_records, types) -> Metrics:
    """A predicted record counts only if every listed field matches a gold record."""
    predicted = {record_key(r.page_id, dict(r.fields), types) for r in records}
    truth = {record_key(page, fields, types) for page, fields in gold_records}
    return _metrics(len(predicted & truth), len(predicted), len(truth))


def mean_metrics(rows) -> dict:
    rows = list(rows)
    if not rows:
        return {"precision": 0.0, "recall": 0.0, "f1": 0.0, "n": 0}
    return {"precision": fmean(m.precision for m in rows), "recall": fmean(m.recall for m in rows),
            "f1": fmean(m.f1 for m in rows), "n": len(rows)}
