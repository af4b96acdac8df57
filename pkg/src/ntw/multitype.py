"""Records with several typed fields: per-type enumeration, record assembly,
joint ranking, and the one-item-per-page selection mode."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .docmodel import TEXT_TOKEN, Corpus, NodeRef
from .enumeration import WrapperSpace, enumerate_space
from .errors import AssemblyFailure, MissingType, NoSingleEntityWrapper
from .inductors import Inductor, Wrapper
from .ranking.scoring import (AnnotatorModel, ListModel, annotation_log_likelihood,
                              effective_labels, rank)
from .ranking.segments import alignment, record_segments, schema_size
from .synth import RecordSchema

TOP_M = 10


def typed_token(type_: str) -> str:
    return f"{TEXT_TOKEN[:-1]}:{type_}>"


@dataclass(frozen=True)
class TypedWrapper:
    """One wrapper per schema type; records are assembled by segmenting at the key type."""

    schema: RecordSchema
    wrappers: tuple  # (type, Wrapper) in schema order
    assembly_mode: str = "segment-by-key"

    def of(self, type_: str) -> Wrapper:
        return dict(self.wrappers)[type_]

    def describe(self) -> str:
        return " & ".join(f"{t}={w.describe()}" for t, w in self.wrappers)

    def to_json(self) -> dict:
        return {"schema": list(self.schema.types), "key_type": self.schema.key_type,
                "assembly_mode": self.assembly_mode,
                "wrappers": {t: w.to_json() for t, w in self.wrappers}}

    @classmethod
    def from_json(cls, data) -> "TypedWrapper":
        schema = RecordSchema(tuple(data["schema"]), data["key_type"])
        return cls(schema, tuple((t, Wrapper.from_json(data["wrappers"][t])) for t in schema.types),
                   data.get("assembly_mode", "segment-by-key"))


@dataclass(frozen=True)
class Record:
    page_id: str
    fields: tuple  # (type, NodeRef) for the present fields, schema order

    def get(self, type_: str):
        return dict(self.fields).get(type_)

    def to_json(self, corpus: Corpus | None = None) -> dict:
        if corpus is None:
            return {"page_id": self.page_id, "fields": {t: r.index for t, r in self.fields}}
        return {"page_id": self.page_id,
                "fields": {t: corpus.node(r).text.strip() for t, r in self.fields}}


@dataclass
class Assembly:
    records: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # AssemblyFailure per failed page

    def outputs(self, schema: RecordSchema) -> dict:
        """Per-type node sets that survive assembly."""
        out = {t: set() for t in schema.types}
        for rec in self.records:
            for t, ref in rec.fields:
                out[t].add(ref)
        return {t: frozenset(v) for t, v in out.items()}


def _labels_of_type(L, type_: str) -> frozenset:
    return frozenset(l.node for l in L if l.type == type_)


def enumerate_multitype(inductor: Inductor, corpus: Corpus, L, schema: RecordSchema,
                        method: str = "bottomup") -> dict[str, WrapperSpace]:
    """Enumerate independently for each type on that type's labels."""
    spaces = {}
    for t in schema.types:
        labels = _labels_of_type(L, t)
        if not labels:
            raise MissingType(f"no labels of type {t!r}")
        spaces[t] = enumerate_space(method, inductor, corpus, labels)
    return spaces


def assemble_page(corpus: Corpus, page_id: str, outputs: dict, schema: RecordSchema) -> list[Record]:
    """Records of one page, or AssemblyFailure if a segment repeats a type.

    Nodes before the first key node belong to no segment and are ignored.
    """
    corpus.doc(page_id)  # raises for unknown pages
    typed = sorted((ref.index, t) for t in schema.types
                   for ref in outputs.get(t, ()) if ref.page_id == page_id)
    records, current = [], None
    for index, t in typed:
        if t == schema.key_type:
            if current is not None:
                records.append(current)
            current = {t: index}
        elif current is not None:
            if t in current:
                raise AssemblyFailure(page_id, tuple(sorted(current.values())) + (index,))
            current[t] = index
    if current is not None:
        records.append(current)
    return [Record(page_id, tuple((t, NodeRef(page_id, rec[t])) for t in schema.types if t in rec))
            for rec in records]


def assemble_records(corpus: Corpus, outputs: dict, schema: RecordSchema) -> Assembly:
    """Assemble every page; failing pages contribute no records."""
    result = Assembly()
    key_pages = {ref.page_id for ref in outputs.get(schema.key_type, ())}
    for doc in corpus:
        if doc.page_id not in key_pages:
            continue
        try:
            result.records.extend(assemble_page(corpus, doc.page_id, outputs, schema))
        except AssemblyFailure as exc:
            result.failures.append(exc)
    return result


@dataclass
class RankedTypedWrapper:
    typed: TypedWrapper
    outputs: dict  # per-type node sets after assembly
    assembly: Assembly
    log_likelihood: float
    log_prior: float
    log_score: float
    features: tuple = ()

    def to_json(self) -> dict:
        return {"wrapper": self.typed.to_json(), "records": len(self.assembly.records),
                "failed_pages": len(self.assembly.failures), "log_likelihood": self.log_likelihood,
                "log_prior": self.log_prior, "log_score": self.log_score,
                "features": list(self.features)}


def typed_prior(corpus: Corpus, outputs: dict, schema: RecordSchema, models: ListModel):
    """List prior over key-type segments, with field texts relabelled by type."""
    models.require()
    key_nodes = outputs.get(schema.key_type, frozenset())
    if not key_nodes:
        return models.schema_size.logpmf(0) + models.alignment.logpmf(0), ()
    relabel = {ref: typed_token(t) for t in schema.types for ref in outputs.get(t, ())}
    segs = record_segments(corpus, key_nodes, relabel)
    feats = (schema_size(segs), alignment(segs, typed=True))
    return models.schema_size.logpmf(feats[0]) + models.alignment.logpmf(feats[1]), feats


def rank_multitype(spaces: dict, corpus: Corpus, L, annotators: dict, models: ListModel | None,
                   schema: RecordSchema, m: int = TOP_M, use_likelihood: bool = True,
                   use_prior: bool = True) -> list:
    """Jointly rank the cross product of each type's top-``m`` wrappers.

    A schema with a single type returns :func:`ranking.rank` unchanged.
    """
    if len(schema.types) == 1:
        t = schema.types[0]
        return rank(spaces[t], corpus, _labels_of_type(L, t), annotators[t], models,
                    use_likelihood, use_prior)
    labels = {t: _labels_of_type(L, t) for t in schema.types}
    shortlists = {}
    for t in schema.types:
        ranked = rank(spaces[t], corpus, labels[t], annotators[t], models, use_likelihood, use_prior)
        shortlists[t] = ranked[:m]
    effective = {t: effective_labels(corpus, labels[t], annotators[t]) for t in schema.types}
    out = []
    for combo in itertools.product(*(shortlists[t] for t in schema.types)):
        raw = {t: rw.X for t, rw in zip(schema.types, combo)}
        assembly = assemble_records(corpus, raw, schema)
        outputs = assembly.outputs(schema)
        ll = sum(annotation_log_likelihood(outputs[t], effective[t], annotators[t])
                 for t in schema.types) if use_likelihood else 0.0
        lp, feats = typed_prior(corpus, outputs, schema, models) if use_prior else (0.0, ())
        typed = TypedWrapper(schema, tuple((t, rw.wrapper) for t, rw in zip(schema.types, combo)))
        out.append(RankedTypedWrapper(typed, outputs, assembly, ll, lp, ll + lp, feats))

    def key(r: RankedTypedWrapper):
        covered = sum(len(r.outputs[t] & labels[t]) for t in schema.types) if use_likelihood else 0
        size = sum(len(x) for x in r.outputs.values())
        return (-r.log_score, -covered, size, r.typed.describe())

    out.sort(key=key)
    return out


@dataclass
class SingleEntityChoice:
    winner: Wrapper
    X: frozenset
    covered: int
    co_maximal: list  # (Wrapper, X) pairs tied on label coverage, winner first


def single_entity_select(space: WrapperSpace, corpus: Corpus, L) -> SingleEntityChoice:
    """Pick the label-coverage-maximal wrapper extracting at most one node per page.

    Wrappers must also extract a node on every labelled page. Ties on coverage
    prefer more extracted pages, then the shorter mean node text (the tighter
    mention), then the rule description.
    """
    labels = frozenset(l.node if hasattr(l, "node") else l for l in L)
    labelled_pages = {r.page_id for r in labels}
    survivors = []
    for X, wrapper in space:
        pages = [r.page_id for r in X]
        if len(pages) != len(set(pages)) or not labelled_pages <= set(pages):
            continue
        mean_len = sum(len(corpus.node(r).text.strip()) for r in X) / max(1, len(X))
        survivors.append((len(X & labels), len(X), mean_len, wrapper.describe(), wrapper, X))
    if not survivors:
        raise NoSingleEntityWrapper("every wrapper extracts several nodes on some page")
    survivors.sort(key=lambda s: (-s[0], -s[1], s[2], s[3]))
    best = survivors[0][0]
    tied = [(s[4], s[5]) for s in survivors if s[0] == best]
    return SingleEntityChoice(tied[0][0], tied[0][1], best, tied)


def annotator_for(annotators: dict, type_: str) -> AnnotatorModel:
    try:
        return annotators[type_]
    except KeyError:
        raise MissingType(f"no annotator model for type {type_!r}") from None


__all__ = [
    "TOP_M", "TypedWrapper", "Record", "Assembly", "RankedTypedWrapper", "SingleEntityChoice",
    "enumerate_multitype", "assemble_page", "assemble_records", "typed_prior", "rank_multitype",
    "single_entity_select", "typed_token",
]
