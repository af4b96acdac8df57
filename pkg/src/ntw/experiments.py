"""End-to-end pipelines: annotate, learn (NTW, NAIVE and the two ablations), evaluate.

Domains are lists of :class:`synth.Site`. Models are fitted on one half of a
domain from gold outputs and annotator runs, then applied to the other half.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .annotate import (LabelSet, PatternAnnotator, SyntheticAnnotatorConfig, ZIPCODE, DictionaryAnnotator,
                       annotate_dictionary, annotate_pattern, annotate_synthetic, model_from_counts,
                       pr_counts)
from .docmodel import Corpus
from .enumeration import enumerate_space
from .evaluation import Metrics, evaluate, evaluate_records, mean_metrics
from .inductors import FeatureBasedInductor, Inductor, Wrapper, get_inductor
from .multitype import (assemble_records, enumerate_multitype, rank_multitype,
                        single_entity_select)
from .ranking.scoring import AnnotatorModel, ListModel, fit_list_model, list_features, rank
from .ranking.segments import record_segments
from .synth import RecordSchema, Site

MODES = ("ntw", "naive", "ntw-l", "ntw-x")


def default_enumerator(inductor: Inductor) -> str:
    return "topdown" if isinstance(inductor, FeatureBasedInductor) else "bottomup"


@dataclass
class LearnResult:
    mode: str
    wrapper: Wrapper
    X: frozenset
    ranked: list = field(default_factory=list, repr=False)
    space_size: int = 0
    calls: int = 0


def learn(corpus: Corpus, labels, inductor: Inductor, mode: str = "ntw",
          annotator: AnnotatorModel | None = None, models: ListModel | None = None,
          enumerator: str | None = None) -> LearnResult:
    """NAIVE induces once on every label; the NTW variants enumerate and rank."""
    labels = frozenset(l.node if hasattr(l, "node") else l for l in labels)
    if mode == "naive":
        w = inductor.induce(corpus, labels)
        return LearnResult(mode, w, inductor.apply(w, corpus), space_size=1, calls=1)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    space = enumerate_space(enumerator or default_enumerator(inductor), inductor, corpus, labels)
    ranked = rank(space, corpus, labels, annotator, models,
                  use_likelihood=mode in ("ntw", "ntw-l"), use_prior=mode in ("ntw", "ntw-x"))
    top = ranked[0]
    return LearnResult(mode, top.wrapper, top.X, ranked, len(space), space.inductor_calls)


# ------------------------------------------------------------ annotators

@dataclass(frozen=True)
class SyntheticRecipe:
    """Controlled annotator aimed at a target precision and recall on each site."""

    precision: float
    recall: float
    type: str = "name"

    def config(self, site: Site, seed: int) -> SyntheticAnnotatorConfig:
        gold = site.gold.of(self.type)
        n_other = len(site.corpus.text_refs()) - len(gold)
        return SyntheticAnnotatorConfig.for_target(self.precision, self.recall, len(gold), n_other, seed)

    def annotate(self, site: Site, seed: int) -> LabelSet:
        return annotate_synthetic(site.corpus, site.gold.of(self.type), self.config(site, seed), self.type)


@dataclass(frozen=True)
class DictionaryRecipe:
    """Exact-mention dictionary annotator (deterministic; the seed is ignored)."""

    dictionary: frozenset
    type: str = "name"

    def annotate(self, site: Site, seed: int = 0) -> LabelSet:
        return annotate_dictionary(site.corpus, DictionaryAnnotator(self.type, self.dictionary))


def site_seed(site: Site, trial: int, salt: int = 0) -> int:
    return random.Random(f"{site.template.seed}:{trial}:{salt}").randrange(2**31)


def pooled_annotator_model(sites, labelsets, type_: str) -> AnnotatorModel:
    """Estimate (p, r) from counts pooled over gold-labelled sites."""
    totals = [0, 0, 0, 0]
    for site, L in zip(sites, labelsets):
        counts = pr_counts(L.nodes(type_), site.gold.of(type_), site.corpus)
        totals = [a + b for a, b in zip(totals, counts)]
    return model_from_counts(type_, *totals)


def gold_feature_samples(sites, type_: str) -> list[tuple[int, int]]:
    return [list_features(record_segments(s.corpus, s.gold.of(type_))) for s in sites if s.gold.of(type_)]


def fit_domain_models(sites, type_: str) -> ListModel:
    return fit_list_model(gold_feature_samples(sites, type_))


# --------------------------------------------------------- single type

@dataclass
class SiteOutcome:
    site: str
    mode: str
    metrics: Metrics
    wrapper: str
    labels: int


def _run_site(args) -> list[SiteOutcome]:
    site, recipe, kind, modes, annotator, models, trial, enumerator = args
    inductor = get_inductor(kind)
    L = recipe.annotate(site, site_seed(site, trial))
    labels = L.nodes(recipe.type)
    gold = site.gold.of(recipe.type)
    out = []
    if not labels:
        return [SiteOutcome(site.name, m, evaluate(frozenset(), gold), "", 0) for m in modes]
    for mode in modes:
        res = learn(site.corpus, labels, inductor, mode, annotator, models, enumerator)
        out.append(SiteOutcome(site.name, mode, evaluate(res.X, gold), res.wrapper.describe(), len(labels)))
    return out


def _map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass
class DomainSetup:
    fit_sites: list
    eval_sites: list
    models: ListModel
    annotator: AnnotatorModel


def prepare(sites, recipe, split: int | None = None) -> DomainSetup:
    half = len(sites) // 2 if split is None else split
    fit, evals = sites[:half], sites[half:]
    models = fit_domain_models(fit, recipe.type)
    labelsets = [recipe.annotate(s, site_seed(s, 0, salt=1)) for s in fit]
    return DomainSetup(fit, evals, models, pooled_annotator_model(fit, labelsets, recipe.type))


def run_domain(sites, recipe, kind: str = "xpath", modes=MODES, trial: int = 0,
               jobs: int = 1, setup: DomainSetup | None = None, enumerator: str | None = None) -> dict:
    """Mean metrics per mode over the evaluation half, plus per-site outcomes."""
    setup = setup or prepare(sites, recipe)
    tasks = [(s, recipe, kind, tuple(modes), setup.annotator, setup.models, trial, enumerator)
             for s in setup.eval_sites]
    outcomes = [o for batch in _map(_run_site, tasks, jobs) for o in batch]
    summary = {m: mean_metrics(o.metrics for o in outcomes if o.mode == m) for m in modes}
    return {"summary": summary, "outcomes": outcomes, "annotator": setup.annotator}


def sweep(sites, precisions, recalls, trials: int = 10, kind: str = "xpath", type_: str = "name",
          jobs: int = 1) -> dict:
    """Mean NTW F1 per (precision, recall) cell; trial ``t`` annotates eval site ``t``."""
    half = len(sites) // 2
    fit, evals = sites[:half], sites[half:]
    models = fit_domain_models(fit, type_)
    grid = {}
    for p in precisions:
        for r in recalls:
            recipe = SyntheticRecipe(p, r, type_)
            labelsets = [recipe.annotate(s, site_seed(s, 0, salt=1)) for s in fit]
            annotator = pooled_annotator_model(fit, labelsets, type_)
            tasks = [(evals[t % len(evals)], recipe, kind, ("ntw",), annotator, models, t, None)
                     for t in range(trials)]
            outcomes = [o for batch in _map(_run_site, tasks, jobs) for o in batch]
            grid[(p, r)] = mean_metrics(o.metrics for o in outcomes)["f1"]
    return grid


# ----------------------------------------------------------- multi type

@dataclass(frozen=True)
class MultiRecipe:
    """Dictionary annotator for names, zip pattern annotator for zips."""

    dictionary: frozenset
    name_type: str = "name"
    zip_type: str = "zip"

    def annotate(self, site: Site) -> LabelSet:
        names = annotate_dictionary(site.corpus, DictionaryAnnotator(self.name_type, self.dictionary))
        zips = annotate_pattern(site.corpus, PatternAnnotator(self.zip_type, ZIPCODE))
        return LabelSet(names | zips)


def domain_dictionary(sites, type_: str = "name", share: float = 0.25, seed: int = 0) -> frozenset:
    """A random share of the domain's name pool (or of its gold texts without a pool)."""
    pools = {s.name_pool for s in sites if s.name_pool}
    if len(pools) == 1:
        texts = sorted(pools.pop())
    else:
        texts = sorted({s.corpus.node(r).text.strip() for s in sites for r in s.gold.of(type_)})
    rng = random.Random(seed)
    return frozenset(rng.sample(texts, max(1, round(share * len(texts)))))


def _run_multitype_site(args):
    site, recipe, kind, schema, annotators, models = args
    inductor = get_inductor(kind)
    L = recipe.annotate(site)
    gold_records = [(page, {t: f[t] for t in schema.types if t in f}) for page, f in site.gold.records]
    out = {}
    present = {l.type for l in L}
    if not set(schema.types) <= present:
        empty = evaluate_records([], gold_records, schema.types)
        return {"site": site.name, "naive": empty, "ntw": empty,
                "ntw_fields": {t: evaluate(frozenset(), site.gold.of(t)) for t in schema.types},
                "single_fields": {t: evaluate(frozenset(), site.gold.of(t)) for t in schema.types}}
    naive_outputs = {}
    for t in schema.types:
        naive_outputs[t] = inductor.extract(site.corpus, L.nodes(t))
    naive = assemble_records(site.corpus, naive_outputs, schema)
    out["naive"] = evaluate_records(naive.records, gold_records, schema.types)
    spaces = enumerate_multitype(inductor, site.corpus, L, schema, default_enumerator(inductor))
    joint = rank_multitype(spaces, site.corpus, L, annotators, models, schema)[0]
    out["ntw"] = evaluate_records(joint.assembly.records, gold_records, schema.types)
    out["ntw_fields"] = {t: evaluate(joint.outputs[t], site.gold.of(t)) for t in schema.types}
    out["single_fields"] = {}
    for t in schema.types:
        top = rank(spaces[t], site.corpus, L.nodes(t), annotators[t], models)[0]
        out["single_fields"][t] = evaluate(top.X, site.gold.of(t))
    out["site"] = site.name
    return out


def run_multitype(sites, kind: str = "xpath", schema: RecordSchema | None = None,
                  dictionary_share: float = 0.25, seed: int = 0, jobs: int = 1) -> dict:
    schema = schema or RecordSchema(("name", "zip"))
    half = len(sites) // 2
    fit, evals = sites[:half], sites[half:]
    recipe = MultiRecipe(domain_dictionary(sites, schema.key_type, dictionary_share, seed),
                         schema.types[0], schema.types[1])
    models = fit_domain_models(fit, schema.key_type)
    labelsets = [recipe.annotate(s) for s in fit]
    annotators = {t: pooled_annotator_model(fit, labelsets, t) for t in schema.types}
    tasks = [(s, recipe, kind, schema, annotators, models) for s in evals]
    rows = _map(_run_multitype_site, tasks, jobs)
    summary = {
        "naive": mean_metrics(r["naive"] for r in rows),
        "ntw": mean_metrics(r["ntw"] for r in rows),
        "ntw_fields": {t: mean_metrics(r["ntw_fields"][t] for r in rows) for t in schema.types},
        "single_fields": {t: mean_metrics(r["single_fields"][t] for r in rows) for t in schema.types},
    }
    return {"summary": summary, "rows": rows, "annotators": annotators}


# --------------------------------------------------------- single entity

def run_single_entity(site: Site, dictionary, kind: str = "xpath", type_: str = "title") -> dict:
    inductor = get_inductor(kind)
    L = annotate_dictionary(site.corpus, DictionaryAnnotator(type_, dictionary))
    space = enumerate_space(default_enumerator(inductor), inductor, site.corpus, L.nodes(type_))
    choice = single_entity_select(space, site.corpus, L.nodes(type_))
    gold = site.gold.of(type_)
    return {"site": site.name, "choice": choice, "labels": len(L),
            "winner_exact": choice.X == gold,
            "any_exact": any(X == gold for _, X in choice.co_maximal),
            "winner_texts": _texts(site.corpus, choice.X) == _texts(site.corpus, gold)}


def _texts(corpus: Corpus, X) -> dict:
    return {r.page_id: corpus.node(r).text.strip() for r in X}
