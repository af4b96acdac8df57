"""Ranking candidate wrappers by annotation likelihood and list prior."""

from .kde import FLOOR, FeatureModel, fit_feature_model
from .scoring import (AnnotatorModel, ListModel, RankedWrapper, annotation_log_likelihood,
                      effective_labels, fit_list_model, list_features, list_log_prior, rank,
                      score_output)
from .segments import (Segment, alignment, common_substring_texts, edit_distance,
                       record_segments, schema_size, segment)

__all__ = [
    "FLOOR", "FeatureModel", "fit_feature_model", "AnnotatorModel", "ListModel", "RankedWrapper",
    "annotation_log_likelihood", "effective_labels", "fit_list_model", "list_features",
    "list_log_prior", "rank", "score_output", "Segment", "alignment", "common_substring_texts",
    "edit_distance", "record_segments", "schema_size", "segment",
]
