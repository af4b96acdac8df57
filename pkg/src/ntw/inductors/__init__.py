"""Wrapper inductors: TABLE, LR and XPATH."""

from .base import (Feature, FeatureBasedInductor, FeatureRule, Inductor, Wrapper, apply,
                   features_of, get_inductor, require_feature_based)
from .lr import LR, LRFeatureRule, LRInductor, LRRule, lr_matches
from .table import TABLE, TableInductor, TableRule
from .xpath import XPATH, PathRule, Step, XPathInductor, evaluate_path, feature_rule_to_path

KINDS = ("table", "lr", "xpath")


def induce(kind: str, corpus, labels) -> Wrapper:
    return get_inductor(kind).induce(corpus, labels)


def induce_from_features(kind: str, corpus, labels) -> Wrapper:
    return require_feature_based(get_inductor(kind)).induce_from_features(corpus, labels)


__all__ = [
    "Feature", "FeatureBasedInductor", "FeatureRule", "Inductor", "Wrapper", "apply",
    "features_of", "get_inductor", "require_feature_based", "LR", "LRFeatureRule",
    "LRInductor", "LRRule", "lr_matches", "TABLE", "TableInductor", "TableRule", "XPATH",
    "PathRule", "Step", "XPathInductor", "evaluate_path", "feature_rule_to_path", "KINDS",
    "induce", "induce_from_features",
]
