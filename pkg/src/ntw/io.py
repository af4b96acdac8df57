"""JSON and JSONL formats for labels, gold sets, wrappers and sites."""

from __future__ import annotations

import json
from pathlib import Path

from .annotate import Label, LabelSet
from .docmodel import Corpus, NodeRef, load_corpus
from .errors import InputError, NotTextNode
from .inductors import Wrapper
from .synth import GoldSet, Site, SiteTemplate, write_site


def read_jsonl(path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}:{lineno}: bad JSON ({exc.msg})") from None
    return rows


def write_jsonl(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def label_rows(labels: LabelSet) -> list[dict]:
    return [{"page_id": l.node.page_id, "preorder_index": l.node.index, "type": l.type}
            for l in sorted(labels)]


def read_labels(path, corpus: Corpus | None = None) -> LabelSet:
    """Read ``{page_id, preorder_index, type}`` rows, checking them against ``corpus``."""
    out = []
    for row in read_jsonl(path):
        try:
            ref = NodeRef(str(row["page_id"]), int(row["preorder_index"]))
            type_ = str(row.get("type", "target"))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: malformed label row {row!r}") from exc
        if corpus is not None and not corpus.is_text(ref):
            raise NotTextNode(f"{path}: {ref} is not a text node")
        out.append(Label(ref, type_))
    return LabelSet(out)


def write_labels(path, labels: LabelSet) -> None:
    write_jsonl(path, label_rows(labels))


def read_gold(path, corpus: Corpus | None = None) -> GoldSet:
    labels = read_labels(path, corpus)
    return GoldSet({t: labels.nodes(t) for t in labels.types()})


def write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: bad JSON ({exc.msg})") from None


def read_wrapper(path) -> Wrapper:
    data = read_json(path)
    try:
        return Wrapper.from_json(data.get("wrapper", data))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a wrapper document") from exc


def load_site_dir(directory) -> tuple[Corpus, GoldSet | None, dict]:
    """Read a directory written by :func:`synth.write_site`."""
    root = Path(directory)
    pages = root / "pages" if (root / "pages").is_dir() else root
    corpus = load_corpus(pages)
    gold = read_gold(root / "gold.jsonl", corpus) if (root / "gold.jsonl").exists() else None
    manifest = read_json(root / "manifest.json") if (root / "manifest.json").exists() else {}
    return corpus, gold, manifest


def manifest_template(manifest: dict) -> SiteTemplate | None:
    return SiteTemplate.from_json(manifest["template"]) if "template" in manifest else None


def load_site(directory) -> Site:
    """Rebuild a :class:`synth.Site` (template, corpus, gold nodes and records) from disk."""
    root = Path(directory)
    corpus, gold, manifest = load_site_dir(root)
    gold = gold or GoldSet()
    if (root / "records.jsonl").exists():
        for row in read_jsonl(root / "records.jsonl"):
            page = row["page_id"]
            gold.records.append((page, {t: NodeRef(page, int(i)) for t, i in row["fields"].items()}))
    tmpl = manifest_template(manifest)
    return Site(manifest.get("name", root.name), tmpl, corpus, gold)


def write_domain(sites, directory, **meta) -> Path:
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    for site in sites:
        write_site(site, root / site.name)
    pools = {s.name_pool for s in sites if s.name_pool}
    doc = {"sites": [s.name for s in sites], **meta}
    if len(pools) == 1:
        doc["name_pool"] = list(pools.pop())
    write_json(root / "domain.json", doc)
    return root


def load_domain(directory) -> list[Site]:
    root = Path(directory)
    if not (root / "domain.json").exists():
        raise InputError(f"{directory}: no domain.json (write one with the synth command)")
    doc = read_json(root / "domain.json")
    pool = tuple(doc.get("name_pool", ()))
    sites = []
    for name in doc["sites"]:
        site = load_site(root / name)
        site.name_pool = pool
        sites.append(site)
    return sites
