"""Command-line driver: synth, annotate, fit, learn, extract, evaluate, sweep, bench-enum.

Reports are JSON lines on stdout; ``--format text`` prints aligned tables.
Exit codes: 0 ok, 2 input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import io
from .annotate import (ZIPCODE, DictionaryAnnotator, LabelSet, PatternAnnotator,
                       SyntheticAnnotatorConfig, annotate_dictionary, annotate_pattern,
                       annotate_synthetic)
from .docmodel import Corpus, NodeRef
from .enumeration import ENUMERATORS, bottom_up, naive_enumerate, top_down
from .errors import InputError, NotFeatureBased, NTWError
from .evaluation import evaluate
from .experiments import (MODES, DictionaryRecipe, SyntheticRecipe, default_enumerator,
                          domain_dictionary, fit_domain_models, learn, pooled_annotator_model,
                          sweep)
from .inductors import KINDS, get_inductor, require_feature_based
from .multitype import (TypedWrapper, assemble_records, enumerate_multitype, rank_multitype)
from .ranking.scoring import AnnotatorModel, ListModel
from .synth import (MULTI_SCHEMA, SINGLE_SCHEMA, RecordSchema, example_table, generate_album_site,
                    generate_domain)

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


class InvariantViolation(NTWError):
    pass


@dataclass(frozen=True)
class RunConfig:
    inductor: str = "xpath"
    enumerator: str | None = None
    mode: str = "ntw"
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.enumerator == "topdown":
            require_feature_based(get_inductor(self.inductor))

    @property
    def method(self) -> str:
        return self.enumerator or default_enumerator(get_inductor(self.inductor))


# ---------------------------------------------------------------- output

def emit(rows, fmt: str = "json", columns=None, out=None):
    out = out or sys.stdout
    rows = list(rows)
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row, sort_keys=True, default=str) + "\n")
        return
    if not rows:
        return
    columns = columns or list(rows[0])
    cells = [[_fmt(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _fmt(v) -> str:
    return f"{v:.3f}" if isinstance(v, float) else str(v)


# ---------------------------------------------------------- annotators

def parse_annotator(spec: str):
    """``TYPE=dict:FILE``, ``TYPE=pattern:REGEX`` (``pattern:zip`` for 5-digit zips),
    ``TYPE=synthetic:PRECISION:RECALL`` (needs gold)."""
    type_, sep, rest = spec.partition("=")
    if not sep or not type_:
        raise InputError(f"annotator spec {spec!r} must look like TYPE=KIND:ARG")
    kind, _, arg = rest.partition(":")
    if kind == "dict":
        return type_, ("dict", DictionaryAnnotator.from_file(type_, arg))
    if kind == "pattern":
        return type_, ("pattern", PatternAnnotator(type_, ZIPCODE if arg == "zip" else arg))
    if kind == "synthetic":
        try:
            precision, recall = (float(x) for x in arg.split(":"))
        except ValueError:
            raise InputError(f"synthetic spec needs PRECISION:RECALL, got {arg!r}") from None
        return type_, ("synthetic", SyntheticRecipe(precision, recall, type_))
    raise InputError(f"unknown annotator kind {kind!r}")


def run_annotator(corpus: Corpus, type_: str, annotator, gold=None, seed: int = 0) -> LabelSet:
    kind, obj = annotator
    if kind == "dict":
        return annotate_dictionary(corpus, obj)
    if kind == "pattern":
        return annotate_pattern(corpus, obj)
    if gold is None or not gold.of(type_):
        raise InputError(f"synthetic annotator for {type_!r} needs gold nodes")
    g = gold.of(type_)
    cfg = SyntheticAnnotatorConfig.for_target(obj.precision, obj.recall, len(g),
                                              len(corpus.text_refs()) - len(g), seed)
    return annotate_synthetic(corpus, g, cfg, type_)


# -------------------------------------------------------------- commands

def cmd_synth(args, cfg: RunConfig) -> int:
    out = Path(args.out)
    if args.kind == "albums":
        rng = random.Random(cfg.seed)
        names = []
        for i in range(args.sites):
            site, dictionary = generate_album_site(rng.randrange(2**31), args.pages,
                                                   details_tab=i % 5 == 0, name=f"site{i:03d}")
            io.write_site(site, out / site.name)
            (out / site.name / "dictionary.txt").write_text("\n".join(sorted(dictionary)) + "\n")
            names.append(site.name)
        io.write_json(out / "domain.json", {"sites": names, "kind": "albums", "seed": cfg.seed})
        emit([{"sites": len(names), "out": str(out), "kind": "albums"}], args.format)
        return EXIT_OK
    schema = RecordSchema(MULTI_SCHEMA if args.kind == "multi" else SINGLE_SCHEMA)
    sites = generate_domain(args.sites, args.family, cfg.seed, args.pages, tuple(args.records),
                            schema, args.ambiguous_fraction)
    io.write_domain(sites, out, kind=args.kind, seed=cfg.seed, family=args.family)
    dictionary = domain_dictionary(sites, share=args.dictionary_share, seed=cfg.seed)
    (out / "dictionary.txt").write_text("\n".join(sorted(dictionary)) + "\n", encoding="utf-8")
    emit([{"site": s.name, "family": s.template.rendering.family, "pages": len(s.corpus),
           "fingerprint": s.template.fingerprint()[:12], "lr_ambiguous": s.template.lr_ambiguous,
           **{f"gold_{t}": len(v) for t, v in s.gold.nodes.items()}} for s in sites], args.format)
    return EXIT_OK


def _site_inputs(path):
    corpus, gold, _ = io.load_site_dir(path)
    return corpus, gold


def cmd_annotate(args, cfg: RunConfig) -> int:
    corpus, gold = _site_inputs(args.pages)
    if args.gold:
        gold = io.read_gold(args.gold, corpus)
    labels = set()
    for spec in args.annotator:
        type_, annotator = parse_annotator(spec)
        labels |= run_annotator(corpus, type_, annotator, gold, cfg.seed)
    rows = io.label_rows(LabelSet(labels))
    if args.out:
        io.write_jsonl(args.out, rows)
        emit([{"labels": len(rows), "out": args.out}], args.format)
    else:
        emit(rows, args.format)
    return EXIT_OK


def cmd_fit(args, cfg: RunConfig) -> int:
    sites = io.load_domain(args.domain)
    half = max(1, round(len(sites) * args.fit_fraction))
    fit = sites[:half]
    specs = [parse_annotator(s) for s in args.annotator]
    if not specs:
        raise InputError("fit needs at least one --annotator TYPE=SPEC")
    key_type = specs[0][0]
    models = fit_domain_models(fit, key_type)
    annotators = {}
    for type_, annotator in specs:
        labelsets = [run_annotator(s.corpus, type_, annotator, s.gold, cfg.seed + i)
                     for i, s in enumerate(fit)]
        annotators[type_] = pooled_annotator_model(fit, labelsets, type_).to_json()
    doc = {"list_model": models.to_json(), "annotators": annotators, "fit_sites": [s.name for s in fit]}
    io.write_json(args.out, doc)
    emit([{"out": args.out, "fit_sites": len(fit), **{f"{t}_p": a["p"] for t, a in annotators.items()},
           **{f"{t}_r": a["r"] for t, a in annotators.items()}}], args.format)
    return EXIT_OK


def _load_models(path):
    if not path:
        return None, {}
    doc = io.read_json(path)
    try:
        models = ListModel.from_json(doc["list_model"])
        annotators = {t: AnnotatorModel.from_json(a) for t, a in doc["annotators"].items()}
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a model document") from exc
    return models, annotators


def cmd_learn(args, cfg: RunConfig) -> int:
    corpus, _ = _site_inputs(args.pages)
    labels = io.read_labels(args.labels, corpus)
    models, annotators = _load_models(args.model)
    inductor = get_inductor(cfg.inductor)
    if args.schema:
        schema = RecordSchema(tuple(args.schema.split(",")))
        return _learn_multitype(args, cfg, corpus, labels, schema, models, annotators)
    type_ = args.type or (labels.types()[0] if labels.types() else "target")
    nodes = labels.nodes(type_)
    if cfg.mode != "naive":
        if models is None or type_ not in annotators:
            raise InputError(f"mode {cfg.mode} needs --model with an annotator for {type_!r}")
    result = learn(corpus, nodes, inductor, cfg.mode, annotators.get(type_), models, cfg.enumerator)
    doc = {"wrapper": result.wrapper.to_json(), "mode": cfg.mode, "type": type_,
           "extracted": len(result.X), "space_size": result.space_size, "calls": result.calls}
    if args.out:
        io.write_json(args.out, doc)
    if args.report:
        io.write_jsonl(args.report, (r.to_json() for r in result.ranked))
    emit([{k: v for k, v in doc.items() if k != "wrapper"} | {"rule": result.wrapper.describe()}],
         args.format)
    return EXIT_OK


def _learn_multitype(args, cfg, corpus, labels, schema, models, annotators) -> int:
    inductor = get_inductor(cfg.inductor)
    if cfg.mode == "naive":
        typed = TypedWrapper(schema, tuple((t, inductor.induce(corpus, labels.nodes(t)))
                                           for t in schema.types))
        doc = {"typed_wrapper": typed.to_json(), "mode": "naive"}
    else:
        missing = [t for t in schema.types if t not in annotators]
        if models is None or missing:
            raise InputError(f"joint ranking needs --model with annotators for {missing or schema.types}")
        spaces = enumerate_multitype(inductor, corpus, labels, schema, cfg.method)
        ranked = rank_multitype(spaces, corpus, labels, annotators, models, schema,
                                use_likelihood=cfg.mode in ("ntw", "ntw-l"),
                                use_prior=cfg.mode in ("ntw", "ntw-x"))
        typed = ranked[0].typed
        doc = {"typed_wrapper": typed.to_json(), "mode": cfg.mode,
               "records": len(ranked[0].assembly.records)}
        if args.report:
            io.write_jsonl(args.report, (r.to_json() for r in ranked))
    if args.out:
        io.write_json(args.out, doc)
    emit([{"mode": doc["mode"], "rule": typed.describe()}], args.format)
    return EXIT_OK


def cmd_extract(args, cfg: RunConfig) -> int:
    corpus, _ = _site_inputs(args.pages)
    doc = io.read_json(args.wrapper)
    if "typed_wrapper" in doc:
        typed = TypedWrapper.from_json(doc["typed_wrapper"])
        outputs = {t: get_inductor(w.kind).apply(w, corpus) for t, w in typed.wrappers}
        assembly = assemble_records(corpus, outputs, typed.schema)
        rows = [r.to_json(corpus) for r in assembly.records]
    else:
        wrapper = io.read_wrapper(args.wrapper)
        type_ = doc.get("type", "target")
        X = corpus.sorted_refs(get_inductor(wrapper.kind).apply(wrapper, corpus))
        rows = [{"page_id": r.page_id, "preorder_index": r.index, "type": type_,
                 "text": corpus.node(r).text.strip()} for r in X]
    if args.out:
        io.write_jsonl(args.out, rows)
        emit([{"extracted": len(rows), "out": args.out}], args.format)
    else:
        emit(rows, args.format)
    return EXIT_OK


def cmd_evaluate(args, cfg: RunConfig) -> int:
    extracted = io.read_labels(args.extracted)
    gold = io.read_labels(args.gold)
    types = [args.type] if args.type else gold.types()
    rows = []
    for t in types:
        m = evaluate(extracted.nodes(t), gold.nodes(t))
        rows.append({"type": t, **m.to_json()})
    emit(rows, args.format, ["type", "precision", "recall", "f1", "extracted", "gold", "correct"])
    return EXIT_OK


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_sweep(args, cfg: RunConfig) -> int:
    if args.domain:
        sites = io.load_domain(args.domain)
    else:
        sites = generate_domain(args.sites, seed=cfg.seed, pages=args.pages)
    ps, rs = _floats(args.precisions), _floats(args.recalls)
    grid = sweep(sites, ps, rs, args.trials, cfg.inductor, args.type, cfg.jobs)
    if args.format == "json":
        emit([{"precision": p, "recall": r, "f1": f} for (p, r), f in grid.items()])
    else:
        emit([{"p\\r": p, **{str(r): grid[(p, r)] for r in rs}} for p in ps], "text")
    return EXIT_OK


def _bench_instances(args, cfg: RunConfig):
    rng = random.Random(cfg.seed)
    if args.domain:
        for site in io.load_domain(args.domain):
            gold = sorted(site.gold.of(args.type))
            noise = [r for r in site.corpus.text_refs() if r not in site.gold.of(args.type)]
            k = min(args.labels, len(gold))
            L = rng.sample(gold, max(1, k - k // 4)) + rng.sample(noise, k // 4)
            yield site.name, site.corpus, frozenset(L)
    else:
        corpus, cells = example_table()
        yield "example1", corpus, frozenset(cells[c] for c in ("n1", "n2", "n4", "a4", "z5"))


def cmd_bench_enum(args, cfg: RunConfig) -> int:
    inductor = get_inductor(cfg.inductor)
    rows, violations = [], []
    for name, corpus, L in _bench_instances(args, cfg):
        runs = {"bottomup": bottom_up(inductor, corpus, L), "topdown": top_down(inductor, corpus, L)}
        if len(L) <= args.naive_cap:
            runs["naive"] = naive_enumerate(inductor, corpus, L, args.naive_cap)
        k = len(runs["topdown"])
        row = {"site": name, "labels": len(L), "k": k}
        for method, space in runs.items():
            row[f"{method}_calls"] = space.inductor_calls
            row[f"{method}_seconds"] = round(space.seconds, 4)
        checks = [
            (runs["topdown"].inductor_calls == k, "topdown calls != k"),
            (runs["bottomup"].inductor_calls <= k * len(L), "bottomup calls > k|L|"),
            (runs["bottomup"].outputs() == runs["topdown"].outputs(), "bottomup and topdown disagree"),
        ]
        if "naive" in runs:
            checks.append((runs["naive"].outputs() == runs["topdown"].outputs(), "naive disagrees"))
            # reported, not enforced: tiny label sets can cost BottomUp more than 2^|L| - 1
            row["ordered"] = (runs["topdown"].inductor_calls <= runs["bottomup"].inductor_calls
                              <= runs["naive"].inductor_calls)
        violations += [f"{name}: {msg}" for ok, msg in checks if not ok]
        rows.append(row)
    emit(rows, args.format)
    if violations:
        raise InvariantViolation("; ".join(violations))
    return EXIT_OK


# ----------------------------------------------------------------- parser

def _common(suppress: bool) -> argparse.ArgumentParser:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--inductor", choices=KINDS, default=d("xpath"))
    p.add_argument("--enumerator", choices=sorted(ENUMERATORS), default=d(None))
    p.add_argument("--mode", choices=MODES, default=d("ntw"))
    p.add_argument("--jobs", type=int, default=d(1))
    p.add_argument("--format", choices=("json", "text"), default=d("json"))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ntw", parents=[_common(False)],
                                     description="Noise-tolerant wrapper induction.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic domain")
    p.add_argument("out")
    p.add_argument("--sites", type=int, default=10)
    p.add_argument("--kind", choices=("single", "multi", "albums"), default="single")
    p.add_argument("--family", default="mixed", choices=("mixed", "table", "div", "list"))
    p.add_argument("--pages", type=int, default=25)
    p.add_argument("--records", type=int, nargs=2, default=(3, 8), metavar=("LO", "HI"))
    p.add_argument("--ambiguous-fraction", type=float, default=0.0)
    p.add_argument("--dictionary-share", type=float, default=0.2)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("annotate", parents=[common], help="label pages with noisy annotators")
    p.add_argument("pages")
    p.add_argument("--annotator", action="append", required=True, metavar="TYPE=SPEC")
    p.add_argument("--gold")
    p.add_argument("--out")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("fit", parents=[common], help="fit list and annotator models on a domain")
    p.add_argument("domain")
    p.add_argument("--annotator", action="append", default=[], metavar="TYPE=SPEC")
    p.add_argument("--fit-fraction", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("learn", parents=[common], help="learn a wrapper from noisy labels")
    p.add_argument("pages")
    p.add_argument("--labels", required=True)
    p.add_argument("--model")
    p.add_argument("--type")
    p.add_argument("--schema", help="comma-separated types for joint multi-type learning")
    p.add_argument("--out")
    p.add_argument("--report")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("extract", parents=[common], help="apply a learned wrapper")
    p.add_argument("pages")
    p.add_argument("--wrapper", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", parents=[common], help="precision, recall and F1")
    p.add_argument("--extracted", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--type")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", parents=[common], help="F1 over an annotator precision/recall grid")
    p.add_argument("--domain")
    p.add_argument("--sites", type=int, default=20)
    p.add_argument("--pages", type=int, default=25)
    p.add_argument("--precisions", default="0.1,0.3,0.5,0.7,0.9")
    p.add_argument("--recalls", default="0.05,0.1,0.15,0.2,0.25,0.3")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--type", default="name")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench-enum", parents=[common], help="count inductor calls per enumerator")
    p.add_argument("--domain")
    p.add_argument("--type", default="name")
    p.add_argument("--labels", type=int, default=10)
    p.add_argument("--naive-cap", type=int, default=12)
    p.set_defaults(func=cmd_bench_enum)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.inductor, args.enumerator, args.mode, args.seed, args.jobs)
        return args.func(args, cfg)
    except (InputError, NotFeatureBased) as exc:
        print(f"ntw: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NTWError, AssertionError) as exc:
        print(f"ntw: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"ntw: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
