"""Scoring candidate outputs by annotation likelihood plus list-structure prior."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..docmodel import Corpus
from ..enumeration import WrapperSpace
from ..errors import DegenerateModel, InputError, UnfittedModel
from ..inductors import Wrapper
from .kde import FeatureModel, fit_feature_model
from .segments import alignment, record_segments, schema_size


@dataclass(frozen=True)
class AnnotatorModel:
    """Annotator labels a true node with prob. ``r`` and a wrong node with prob. ``1 - p``.

    ``flipped`` marks a model estimated from an annotator that prefers wrong
    nodes; its labels must be complemented before scoring.
    """

    type: str
    p: float
    r: float
    flipped: bool = False

    def __post_init__(self):
        for name, v in (("p", self.p), ("r", self.r)):
            if not 0.0 < v < 1.0:
                raise DegenerateModel(f"annotator {name}={v} must lie strictly inside (0, 1)")
        if not 1.0 - self.p < self.r:
            raise InputError(f"annotator needs 1 - p < r (p={self.p}, r={self.r}); flip it")

    def to_json(self) -> dict:
        return {"type": self.type, "p": self.p, "r": self.r, "flipped": self.flipped}

    @classmethod
    def from_json(cls, data) -> "AnnotatorModel":
        return cls(data["type"], data["p"], data["r"], data.get("flipped", False))


def annotation_log_likelihood(X, L, model: AnnotatorModel) -> float:
    """Log of ``(r/(1-p))^|L&X| * ((1-r)/p)^|X-L|``; wrapper-invariant factors dropped."""
    X = frozenset(X)
    L = frozenset(L)
    hits = len(X & L)
    misses = len(X) - hits
    return hits * math.log(model.r / (1.0 - model.p)) + misses * math.log((1.0 - model.r) / model.p)


@dataclass
class ListModel:
    """Fitted distributions of the list features for one domain."""

    schema_size: FeatureModel | None = None
    alignment: FeatureModel | None = None

    def require(self):
        if self.schema_size is None or self.alignment is None:
            raise UnfittedModel("list prior needs fitted schema_size and alignment models")

    def to_json(self) -> dict:
        self.require()
        return {"schema_size": self.schema_size.to_json(), "alignment": self.alignment.to_json()}

    @classmethod
    def from_json(cls, data) -> "ListModel":
        return cls(FeatureModel.from_json(data["schema_size"]),
                   FeatureModel.from_json(data["alignment"]))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "ListModel":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def list_features(segments, typed: bool = False) -> tuple[int, int]:
    return schema_size(segments), alignment(segments, typed)


def fit_list_model(feature_samples) -> ListModel:
    """Fit both feature distributions from ``(schema_size, alignment)`` pairs."""
    pairs = list(feature_samples)
    return ListModel(fit_feature_model([s for s, _ in pairs], "schema_size"),
                     fit_feature_model([a for _, a in pairs], "alignment"))


def list_log_prior(segments, models: ListModel, typed: bool = False) -> float:
    models.require()
    size, align = list_features(segments, typed)
    return models.schema_size.logpmf(size) + models.alignment.logpmf(align)


@dataclass
class RankedWrapper:
    wrapper: Wrapper
    X: frozenset
    log_likelihood: float
    log_prior: float
    log_score: float
    features: tuple = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {"wrapper": self.wrapper.to_json(), "size": len(self.X),
                "log_likelihood": self.log_likelihood, "log_prior": self.log_prior,
                "log_score": self.log_score, "features": list(self.features)}


def effective_labels(corpus: Corpus, L, model: AnnotatorModel) -> frozenset:
    """Labels as the model sees them (complemented for a flipped annotator)."""
    L = frozenset(L)
    if model.flipped:
        return frozenset(corpus.text_refs()) - L
    return L


def score_output(corpus: Corpus, X, L, annotator: AnnotatorModel, models: ListModel | None,
                 use_likelihood: bool = True, use_prior: bool = True):
    """``(log_likelihood, log_prior, features)`` of one candidate output."""
    ll = annotation_log_likelihood(X, effective_labels(corpus, L, annotator), annotator) \
        if use_likelihood else 0.0
    lp, feats = 0.0, ()
    if use_prior:
        if models is None:
            raise UnfittedModel("prior requested without feature models")
        segs = record_segments(corpus, X) if X else []
        if segs:
            feats = list_features(segs)
            lp = models.schema_size.logpmf(feats[0]) + models.alignment.logpmf(feats[1])
        else:
            lp = models.schema_size.logpmf(0) + models.alignment.logpmf(0)
    return ll, lp, feats


def rank(space: WrapperSpace, corpus: Corpus, L, annotator: AnnotatorModel,
         models: ListModel | None, use_likelihood: bool = True,
         use_prior: bool = True) -> list[RankedWrapper]:
    """Score every wrapper by log P(L|X) + log P(X) and sort best first.

    Ties go to more covered labels, then fewer extracted nodes, then the
    rule description. With the likelihood switched off the label-coverage
    tie-break is skipped so that the prior alone decides.
    """
    L = frozenset(L)
    ranked = []
    for X, wrapper in space:
        ll, lp, feats = score_output(corpus, X, L, annotator, models, use_likelihood, use_prior)
        ranked.append(RankedWrapper(wrapper, X, ll, lp, ll + lp, feats))

    def key(rw: RankedWrapper):
        covered = len(rw.X & L) if use_likelihood else 0
        return (-rw.log_score, -covered, len(rw.X), rw.wrapper.describe())

    ranked.sort(key=key)
    return ranked
