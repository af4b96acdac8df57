"""Synthetic script-generated websites with known gold extractions.

A site is one rendering template applied to many pages of records, so
structure repeats within a site and differs across sites. Decorations
(headers, navigation, promos, sidebars, footers) add realistic text that
collides with annotators.
"""

from __future__ import annotations

import hashlib
import html
import json
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .docmodel import Corpus, NodeRef, parse_html
from .errors import BadTemplate

FAMILIES = ("table", "div", "list")
DECORATIONS = ("header", "nav", "search", "promo", "sidebar", "footer")

_SURNAMES = """Porter Woodland Albany Bennett Carter Dawson Ellis Foster Garrison Hale Irving
Jensen Keller Lawson Mercer Norris Oakley Prescott Quinn Ramsey Sutton Thornton Upton Vance
Walker Yates Abbott Barlow Crane Dalton Emery Fletcher Granger Holt Ingram Judd Kirby Lyle
Monroe Nash Osborne Pryor Reeves Shelton Tate Whitley""".split()
_ADJ = """Oak Valley Pine River Golden Eagle Summit Heritage Liberty Maple Cedar Lakeside
Northern Southern Royal Premier Classic Modern Country Hometown Sunrise Pioneer""".split()
_NOUNS = """Furniture Appliances Electronics Interiors Home Outfitters Supply Hardware Lighting
Flooring Mattress Decor Outlet Gallery Design Living Comfort""".split()
_SUFFIX = ["Inc.", "Co.", "LLC", "& Sons", "Center", "Store", "Showroom", "Warehouse"]
_STREETS = """Main Oak Maple Cedar Elm Park Washington Lake Hill Pine Church Spring Highland
Jackson Franklin Madison Sunset River Market Center""".split()
_STREET_SUFFIX = ["St.", "Ave.", "Rd.", "Blvd.", "Dr.", "Hwy.", "Ln."]
_CITIES = """New Albany|Tupelo|Oxford|Jackson|Memphis|Starkville|Corinth|Columbus|Meridian|
Hattiesburg|Biloxi|Greenville|Southaven|Olive Branch|Clarksdale|Batesville""".replace("\n", "").split("|")
_STATES = ["MS", "TN", "AL", "AR", "LA", "GA", "KY"]
_PRODUCTS = """Sofas Recliners Dining Sets Bedroom Sets Mattresses Office Chairs Bookcases
Entertainment Centers Outdoor Patio Lamps Rugs""".split()
_CLASS_WORDS = """dealer dealers store stores listing result results loc location item entry
row record biz shop vendor retailer outlet info data box card panel block""".split()
_HEADERS = {"name": "Dealer", "street": "Address", "city": "City", "zip": "Zip",
            "citystatezip": "Location", "phone": "Phone"}

SINGLE_SCHEMA = ("name", "street", "citystatezip", "phone")
MULTI_SCHEMA = ("name", "street", "city", "zip", "phone")


@dataclass(frozen=True)
class RecordSchema:
    types: tuple
    key_type: str = ""

    def __post_init__(self):
        if not self.types or len(set(self.types)) != len(self.types):
            raise BadTemplate("schema types must be non-empty and distinct")
        if not self.key_type:
            object.__setattr__(self, "key_type", self.types[0])
        if self.key_type not in self.types:
            raise BadTemplate(f"key type {self.key_type!r} not in schema")


@dataclass(frozen=True)
class Rendering:
    family: str
    container_class: str
    record_class: str
    field_tags: tuple            # (type, tag, class) per schema type
    name_wrap: str = ""          # "", "b", "u", "strong", "link"
    phone_link: bool = False
    header_row: bool = False
    record_ids: bool = False     # per-record id attribute with varying value
    inline: bool = False         # fields side by side in one element, each followed by <br>
    promo_rate: float = 1.0      # share of pages showing the featured-dealer box
    decorations: tuple = ()


@dataclass(frozen=True)
class SiteTemplate:
    schema: RecordSchema
    rendering: Rendering
    field_optionality: tuple = ()  # (type, drop probability)
    seed: int = 0
    brand: str = "Acme"

    def __post_init__(self):
        r = self.rendering
        if r.family not in FAMILIES:
            raise BadTemplate(f"unknown template family {r.family!r}")
        if [t for t, _, _ in r.field_tags] != list(self.schema.types):
            raise BadTemplate("field_tags must follow the schema order")
        drops = dict(self.field_optionality)
        if drops.get(self.schema.key_type, 0) > 0:
            raise BadTemplate("the key type can never be dropped")
        if any(not 0 <= p < 1 for p in drops.values()):
            raise BadTemplate("drop probabilities must lie in [0, 1)")
        if r.family == "list" and len(self.schema.types) > 4:
            raise BadTemplate("list templates hold at most four fields")

    @property
    def lr_ambiguous(self) -> bool:
        """Names and phones share link delimiters, so no exact LR wrapper exists."""
        r = self.rendering
        return r.inline and r.name_wrap == "link" and r.phone_link

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d) -> "SiteTemplate":
        r = d["rendering"]
        rendering = Rendering(**{**r, "field_tags": tuple(tuple(x) for x in r["field_tags"]),
                                 "decorations": tuple(r["decorations"])})
        return cls(RecordSchema(tuple(d["schema"]["types"]), d["schema"]["key_type"]), rendering,
                   tuple(tuple(x) for x in d["field_optionality"]), d["seed"], d["brand"])

    def fingerprint(self) -> str:
        return hashlib.sha1(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()


@dataclass
class GoldSet:
    """Per-type gold node sets plus the gold records (type -> NodeRef) per page."""

    nodes: dict = field(default_factory=dict)
    records: list = field(default_factory=list)  # (page_id, {type: NodeRef})

    def of(self, type: str) -> frozenset:
        return self.nodes.get(type, frozenset())

    def to_jsonl(self) -> str:
        lines = [json.dumps({"page_id": r.page_id, "preorder_index": r.index, "type": t})
                 for t in sorted(self.nodes) for r in sorted(self.nodes[t])]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class Site:
    name: str
    template: SiteTemplate
    corpus: Corpus
    gold: GoldSet
    html_pages: dict = field(default_factory=dict, repr=False)
    name_pool: tuple = field(default=(), repr=False)


# ---------------------------------------------------------------- text pools

def business_name(rng: random.Random) -> str:
    style = rng.random()
    if style < 0.4:
        return f"{rng.choice(_SURNAMES)} {rng.choice(_NOUNS)}"
    if style < 0.75:
        return f"{rng.choice(_ADJ)} {rng.choice(_NOUNS)} {rng.choice(_SUFFIX)}"
    return f"{rng.choice(_SURNAMES)} {rng.choice(_SURNAMES)} {rng.choice(_NOUNS)}"


def street(rng: random.Random) -> str:
    number = rng.randint(10000, 99999) if rng.random() < 0.15 else rng.randint(1, 9999)
    return f"{number} {rng.choice(_STREETS)} {rng.choice(_STREET_SUFFIX)}"


def zipcode(rng: random.Random) -> str:
    return f"{rng.randint(30000, 39999)}"


def phone(rng: random.Random) -> str:
    return f"({rng.randint(200, 999)}) {rng.randint(200, 999)}-{rng.randint(0, 9999):04d}"


def name_pool(rng: random.Random, size: int) -> tuple:
    """Distinct business names shared by every site of a domain."""
    pool: dict[str, None] = {}
    while len(pool) < size:
        pool.setdefault(business_name(rng))
    return tuple(pool)


def _field_text(rng, type_, names=()):
    if type_ == "name":
        return rng.choice(names) if names else business_name(rng)
    if type_ == "street":
        return street(rng)
    if type_ == "city":
        return f"{rng.choice(_CITIES)}, {rng.choice(_STATES)}"
    if type_ == "zip":
        return zipcode(rng)
    if type_ == "citystatezip":
        return f"{rng.choice(_CITIES)}, {rng.choice(_STATES)} {zipcode(rng)}"
    if type_ == "phone":
        return phone(rng)
    raise BadTemplate(f"no generator for field type {type_!r}")


# ------------------------------------------------------------------ writing

class _Writer:
    """Emits HTML and remembers the order in which text nodes are produced."""

    def __init__(self):
        self.parts: list[str] = []
        self.texts: list[tuple[str, str | None]] = []
        self._last_was_text = False

    def open(self, tag, **attrs):
        a = "".join(f' {k.rstrip("_")}="{html.escape(str(v))}"' for k, v in attrs.items())
        self.parts.append(f"<{tag}{a}>")
        self._last_was_text = False

    def close(self, tag):
        self.parts.append(f"</{tag}>")
        self._last_was_text = False

    def void(self, tag, **attrs):
        self.open(tag, **attrs)

    def text(self, s, gold=None):
        assert not self._last_was_text, "adjacent text runs would coalesce"
        self.parts.append(html.escape(s, quote=False))
        self.texts.append((s, gold))
        self._last_was_text = True

    def elem(self, tag, s, gold=None, **attrs):
        self.open(tag, **attrs)
        self.text(s, gold)
        self.close(tag)

    def html(self) -> str:
        return "".join(self.parts)


def _cls(tag_class: str) -> dict:
    return {"class_": tag_class} if tag_class else {}


def _render_field(w: _Writer, tmpl: SiteTemplate, type_, text, rid, gold_key):
    r = tmpl.rendering
    if type_ == tmpl.schema.key_type and r.name_wrap:
        if r.name_wrap == "link":
            w.elem("a", text, gold_key, href=f"/dealer/{rid}")
        else:
            w.elem(r.name_wrap, text, gold_key)
    elif type_ == "phone" and r.phone_link:
        digits = "".join(ch for ch in text if ch.isdigit())
        w.elem("a", text, gold_key, href=f"tel:{digits}")
    else:
        w.text(text, gold_key)


def _render_inline(w: _Writer, tmpl: SiteTemplate, rid, k, rec):
    for t in tmpl.schema.types:
        if t in rec:
            _render_field(w, tmpl, t, rec[t], rid, (k, t))
            w.void("br")


def _render_records(w: _Writer, tmpl: SiteTemplate, records):
    r = tmpl.rendering
    tags = {t: (tag, c) for t, tag, c in r.field_tags}
    if r.inline:
        outer, rec_tag = {"table": ("table", "tr"), "div": ("div", "div"), "list": ("ul", "li")}[r.family]
        w.open(outer, **_cls(r.container_class))
        for k, (rid, rec) in enumerate(records):
            w.open(rec_tag, **_cls(r.record_class))
            if r.family == "table":
                w.open("td")
            _render_inline(w, tmpl, rid, k, rec)
            if r.family == "table":
                w.close("td")
                w.open("td")
                w.elem("a", "Directions", href=f"/map/{rid}")
                w.close("td")
            w.close(rec_tag)
        w.close(outer)
    elif r.family == "table":
        w.open("div", **_cls(r.container_class))
        w.open("table", **_cls(r.record_class + "-table"))
        if r.header_row:
            w.open("tr")
            for t in tmpl.schema.types:
                w.elem("th", _HEADERS.get(t, t.title()))
            w.close("tr")
        for k, (rid, rec) in enumerate(records):
            attrs = {"id": f"r{rid}"} if r.record_ids else _cls(r.record_class)
            w.open("tr", **attrs)
            for t in tmpl.schema.types:
                tag, c = tags[t]
                w.open("td", **_cls(c))
                if t in rec:
                    _render_field(w, tmpl, t, rec[t], rid, (k, t))
                w.close("td")
            w.close("tr")
        w.close("table")
        w.close("div")
    elif r.family == "div":
        w.open("div", **_cls(r.container_class))
        for k, (rid, rec) in enumerate(records):
            attrs = {"id": f"r{rid}", **_cls(r.record_class)} if r.record_ids else _cls(r.record_class)
            w.open("div", **attrs)
            for t in tmpl.schema.types:
                if t not in rec:
                    continue
                tag, c = tags[t]
                w.open(tag, **_cls(c))
                _render_field(w, tmpl, t, rec[t], rid, (k, t))
                w.close(tag)
            w.close("div")
        w.close("div")
    else:
        w.open("ul", **_cls(r.container_class))
        for k, (rid, rec) in enumerate(records):
            w.open("li", **_cls(r.record_class))
            first = True
            for t in tmpl.schema.types:
                if t not in rec:
                    continue
                if not first:
                    w.void("br")
                first = False
                tag, c = tags[t]
                if tag:
                    w.open(tag, **_cls(c))
                    _render_field(w, tmpl, t, rec[t], rid, (k, t))
                    w.close(tag)
                else:
                    _render_field(w, tmpl, t, rec[t], rid, (k, t))
            w.close("li")
        w.close("ul")


def _render_page(tmpl: SiteTemplate, rng: random.Random, records, page_zip: str,
                 names=()) -> _Writer:
    w = _Writer()
    brand = tmpl.brand
    deco = tmpl.rendering.decorations
    w.open("html")
    w.open("head")
    w.elem("title", f"{brand} - Dealer Locator")
    w.close("head")
    w.open("body")
    if "header" in deco:
        w.open("div", id="header")
        w.elem("h1", f"{brand} Dealer Locator")
        w.elem("p", f"Find an authorized {brand} dealer near you")
        w.close("div")
    if "nav" in deco:
        w.open("ul", class_="nav")
        for item in ("Home", "Products", "Dealers", "About Us", "Contact"):
            w.open("li")
            w.elem("a", item, href="/" + item.lower().replace(" ", "-"))
            w.close("li")
        w.close("ul")
    if "search" in deco:
        w.open("form", action="/dealers")
        w.elem("label", "Zip code")
        w.void("input", name="zip", value=page_zip)
        w.elem("p", f"Showing {len(records)} dealers near {page_zip}")
        w.close("form")
    w.open("div", id="content")
    _render_records(w, tmpl, records)
    w.close("div")
    if "promo" in deco and rng.random() < tmpl.rendering.promo_rate:
        w.open("div", class_="promo")
        w.elem("h4", "Featured dealer")
        w.elem("p", rng.choice(names) if names else business_name(rng))
        w.close("div")
    if "sidebar" in deco:
        w.open("div", class_="sidebar")
        w.elem("h4", "Popular products")
        w.open("ul")
        for product in rng.sample(_PRODUCTS, 4):
            w.elem("li", product)
        w.close("ul")
        w.close("div")
    if "footer" in deco:
        w.open("div", id="footer")
        w.elem("p", f"Copyright 2010 {brand} Inc.")
        w.elem("p", "100 Corporate Dr., Tupelo, MS 38801")
        w.close("div")
    w.close("body")
    w.close("html")
    return w


def _draw_records(tmpl: SiteTemplate, rng: random.Random, count: int, next_id, names=()):
    drops = dict(tmpl.field_optionality)
    out = []
    for _ in range(count):
        rec = {}
        for t in tmpl.schema.types:
            if rng.random() < drops.get(t, 0.0):
                continue
            rec[t] = _field_text(rng, t, names)
        out.append((next_id(), rec))
    return out


def generate_site(tmpl: SiteTemplate, pages: int, records_per_page=(3, 8),
                  name: str = "site", names: tuple = ()) -> Site:
    """Render ``pages`` pages of records with ``tmpl`` and return corpus plus gold.

    ``names`` is an optional shared pool for business names (records and promos).
    """
    if pages < 1:
        raise BadTemplate("need at least one page")
    lo, hi = records_per_page
    if not 1 <= lo <= hi:
        raise BadTemplate("records_per_page must satisfy 1 <= lo <= hi")
    rng = random.Random(tmpl.seed)
    counter = iter(range(rng.randint(100, 900), 10**9))
    docs, sources = [], {}
    gold_nodes: dict[str, set] = {t: set() for t in tmpl.schema.types}
    gold_records = []
    for p in range(pages):
        page_id = f"page{p:03d}.html"
        records = _draw_records(tmpl, rng, rng.randint(lo, hi), lambda: next(counter), names)
        w = _render_page(tmpl, rng, records, zipcode(rng), names)
        source = w.html()
        doc = parse_html(page_id, source)
        texts = doc.text_indices
        if len(texts) != len(w.texts):
            raise BadTemplate(f"{page_id}: rendered {len(w.texts)} texts, parsed {len(texts)}")
        per_record: dict[int, dict] = {}
        for index, (expected, gold) in zip(texts, w.texts):
            if doc.nodes[index].text != expected:
                raise BadTemplate(f"{page_id}: text mismatch at node {index}")
            if gold is not None:
                k, t = gold
                ref = NodeRef(page_id, index)
                gold_nodes[t].add(ref)
                per_record.setdefault(k, {})[t] = ref
        gold_records.extend((page_id, per_record[k]) for k in sorted(per_record))
        docs.append(doc)
        sources[page_id] = source
    gold = GoldSet({t: frozenset(v) for t, v in gold_nodes.items()}, gold_records)
    return Site(name, tmpl, Corpus(docs), gold, sources, tuple(names))


# ---------------------------------------------------------------- templates

def random_template(rng: random.Random, schema: RecordSchema, family: str | None = None,
                    ambiguous: bool = False, decorations=None, optional: bool = True) -> SiteTemplate:
    """Draw a rendering for ``schema``; ``ambiguous`` forces shared LR delimiters."""
    if family is None:
        family = rng.choice([f for f in FAMILIES if f != "list" or len(schema.types) <= 4])
    words = rng.sample(_CLASS_WORDS, 4)
    container = f"{words[0]}-{words[1]}" if rng.random() < 0.8 else ""
    record = words[2]
    field_tags = []
    for i, t in enumerate(schema.types):
        if family == "table":
            field_tags.append((t, "td", f"{words[3]}{i}" if rng.random() < 0.3 else ""))
        elif family == "div":
            tag = rng.choice(["span", "div", "p"]) if t != schema.key_type else rng.choice(["h3", "h4", "div", "span"])
            field_tags.append((t, tag, f"{t[:4]}-{words[3]}"))
        else:
            field_tags.append((t, "strong" if t == schema.key_type else "", ""))
    if ambiguous:
        name_wrap, phone_link = "link", True
    elif family == "list":
        name_wrap, phone_link = "", False
    else:
        name_wrap = rng.choice(["", "", "b", "u", "strong", "link"])
        phone_link = False
    if "phone" not in schema.types:
        phone_link = False
    if decorations is None:
        decorations = tuple(d for d in DECORATIONS if rng.random() < 0.6)
    drops = []
    if optional:
        for t in schema.types:
            if t != schema.key_type and t == "phone" and rng.random() < 0.3:
                drops.append((t, round(rng.uniform(0.05, 0.2), 3)))
    rendering = Rendering(
        family=family, container_class=container, record_class=record,
        field_tags=tuple(field_tags), name_wrap=name_wrap, phone_link=phone_link,
        header_row=family == "table" and rng.random() < 0.6,
        record_ids=rng.random() < 0.2, inline=ambiguous, promo_rate=round(rng.uniform(0.1, 0.5), 3), decorations=tuple(decorations),
    )
    brand = f"{rng.choice(_SURNAMES)} & {rng.choice(_SURNAMES)}"
    return SiteTemplate(schema, rendering, tuple(drops), rng.randrange(2**31), brand)


def table_template(schema: RecordSchema | None = None, seed: int = 0, **kw) -> SiteTemplate:
    """Plain table: one ``tr`` per record, one ``td`` per field, no decorations."""
    schema = schema or RecordSchema(SINGLE_SCHEMA)
    rendering = Rendering("table", kw.pop("container_class", "dealerlinks"), "dealer",
                          tuple((t, "td", "") for t in schema.types), **kw)
    return SiteTemplate(schema, rendering, (), seed, "Acme Furniture")


def generate_domain(site_count: int, template_family: str = "mixed", seed: int = 0,
                    pages=25, records_per_page=(3, 8), schema: RecordSchema | None = None,
                    ambiguous_fraction: float = 0.0, pool_size: int = 4000) -> list[Site]:
    """Draw ``site_count`` distinct templates and generate one site for each.

    All sites draw business names from one pool, so a dictionary built from
    the pool also fires on featured-dealer promos.
    """
    schema = schema or RecordSchema(SINGLE_SCHEMA)
    rng = random.Random(seed)
    pool = name_pool(rng, pool_size)
    family = None if template_family == "mixed" else template_family
    if family is not None and family not in FAMILIES:
        raise BadTemplate(f"unknown template family {template_family!r}")
    n_ambiguous = round(site_count * ambiguous_fraction)
    ambiguous_ids = set(rng.sample(range(site_count), n_ambiguous))
    sites, seen = [], set()
    for i in range(site_count):
        while True:
            tmpl = random_template(rng, schema, family, ambiguous=i in ambiguous_ids)
            fp = tmpl.fingerprint()
            if fp not in seen:
                seen.add(fp)
                break
        n_pages = rng.randint(*pages) if isinstance(pages, tuple) else pages
        sites.append(generate_site(tmpl, n_pages, records_per_page, f"site{i:03d}", pool))
    return sites


def split_domain(sites: list) -> tuple[list, list]:
    """First half for fitting models, second half for evaluation."""
    half = len(sites) // 2
    return sites[:half], sites[half:]


def write_site(site: Site, directory) -> Path:
    """Write ``pages/``, ``gold.jsonl`` and ``manifest.json`` for one site."""
    root = Path(directory)
    (root / "pages").mkdir(parents=True, exist_ok=True)
    for page_id, source in site.html_pages.items():
        (root / "pages" / page_id).write_text(source, encoding="utf-8")
    (root / "gold.jsonl").write_text(site.gold.to_jsonl(), encoding="utf-8")
    records = [json.dumps({"page_id": page, "fields": {t: r.index for t, r in fields.items()}},
                          sort_keys=True) for page, fields in site.gold.records]
    (root / "records.jsonl").write_text("".join(line + "\n" for line in records), encoding="utf-8")
    manifest = {"name": site.name, "template": site.template.to_json(),
                "fingerprint": site.template.fingerprint(), "pages": len(site.html_pages),
                "lr_ambiguous": site.template.lr_ambiguous}
    (root / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return root


def example_table(rows: int = 5, cols: int = 4, letters: str = "nazp",
                  page_id: str = "example.html") -> tuple[Corpus, dict]:
    """One page holding a ``rows`` x ``cols`` table whose cells read ``n1``, ``a1``, ...

    Returns the corpus and a map from cell text to its NodeRef.
    """
    def cell(i, j):
        return f"{letters[j]}{i}" if j < len(letters) else f"c{j + 1}_{i}"

    body = "".join("<tr>" + "".join(f"<td>{cell(i, j)}</td>" for j in range(cols)) + "</tr>"
                   for i in range(1, rows + 1))
    doc = parse_html(page_id, f"<html><body><table>{body}</table></body></html>")
    cells = {doc.nodes[i].text: NodeRef(page_id, i) for i in doc.text_indices}
    return Corpus([doc]), cells


# ---------------------------------------------------------- single entity

_ALBUM_WORDS = """Abbey Road Midnight Blue Strangers Night Summer Rain Golden Hour Silver Lining
Lullabies Breakfast Answer Heart Francisco Beauty Forever Yesterday Tuesday Morning Echoes
River Songs Wild Hearts Open Roads Quiet Storm Paper Moon Electric Dreams Velvet Sky""".split()


def album_title(rng: random.Random) -> str:
    return " ".join(rng.sample(_ALBUM_WORDS, rng.randint(2, 3)))


def generate_album_site(seed: int, pages: int = 20, head_title: bool = True,
                        details_tab: bool = False, dictionary_share: float = 0.5,
                        name: str = "albums") -> tuple[Site, frozenset]:
    """One album per page; the album title repeats in head, comments and tracks.

    Returns the site (gold type ``title`` is the ``h1`` text) and a
    dictionary holding a share of the site's album titles.
    """
    rng = random.Random(seed)
    site_name = f"{rng.choice(_SURNAMES)} Music"
    h1_class = rng.choice(["album-title", "title", "name", "heading"])
    titles = []
    while len(titles) < pages:
        t = album_title(rng)
        if t not in titles:
            titles.append(t)
    docs, sources, gold, records = [], {}, set(), []
    for p, title in enumerate(titles):
        w = _Writer()
        w.open("html")
        w.open("head")
        if head_title:
            w.elem("title", f"{title} - {site_name}")
        else:
            w.elem("title", site_name)
        w.close("head")
        w.open("body")
        w.open("div", id="nav")
        for item in ("Home", "New Releases", "Charts"):
            w.elem("a", item, href="/" + item.lower().replace(" ", "-"))
        w.close("div")
        w.elem("h1", title, "title", class_=h1_class)
        w.elem("p", f"by {rng.choice(_SURNAMES)} {rng.choice(_SURNAMES)}", class_="artist")
        if details_tab:
            w.open("table", class_="details")
            w.open("tr")
            w.elem("th", "Album")
            w.elem("td", title)
            w.close("tr")
            w.open("tr")
            w.elem("th", "Year")
            w.elem("td", str(rng.randint(1960, 2010)))
            w.close("tr")
            w.close("table")
        w.open("ol", class_="tracks")
        tracks = [album_title(rng) for _ in range(rng.randint(6, 12))]
        if rng.random() < 0.3:
            tracks[rng.randrange(len(tracks))] = title
        for t in tracks:
            w.elem("li", t)
        w.close("ol")
        w.open("div", class_="comments")
        for _ in range(rng.randint(0, 4)):
            w.open("div", class_="comment")
            w.elem("b", rng.choice(_SURNAMES))
            if rng.random() < 0.5:
                w.elem("p", f"I love {title}, a classic.")
            else:
                w.elem("p", "Great record, highly recommended.")
            w.close("div")
        w.close("div")
        w.close("body")
        w.close("html")
        page_id = f"page{p:03d}.html"
        source = w.html()
        doc = parse_html(page_id, source)
        for index, (_, g) in zip(doc.text_indices, w.texts):
            if g == "title":
                gold.add(NodeRef(page_id, index))
                records.append((page_id, {"title": NodeRef(page_id, index)}))
        docs.append(doc)
        sources[page_id] = source
    dictionary = frozenset(rng.sample(titles, max(1, round(dictionary_share * pages))))
    tmpl = SiteTemplate(RecordSchema(("title",)), Rendering("div", "", "album", (("title", "h1", h1_class),)),
                        (), seed, site_name)
    return Site(name, tmpl, Corpus(docs), GoldSet({"title": frozenset(gold)}, records), sources), dictionary
