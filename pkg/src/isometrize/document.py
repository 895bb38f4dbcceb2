"""Instance documents: JSON text in, validated objects out, and back again.

Top-level keys (all optional except ``points`` unless ``horizons`` is given)::

    points       integer n, or a list of point labels (points are 0..n-1)
    labels       list of labels when ``points`` is an integer
    basis        list of point lists
    bornology    "all" or a list of generator point lists
    frontier     point list (windowed instances)
    group        {"generators": [...], "cap": N} or {"elements": [...], "generators": [...]}
                 (elements may contain null for partial maps)
    covers       {name: [[...], ...]}
    developments {name: [cover, cover, ...]}
    gauges       {name: matrix of value strings}
    tunnels      {name: [[a, b, length], ...]}
    exhaustion   list of point lists
    targets      [[x, [U...]], ...]
    horizons     {"name": str, "probes": [[labels]], "radii": [values],
                  "windows": [{"m": int, ...instance keys...}]}

Inside a window, gauges, tunnel systems and the exhaustion chain are attached
to the horizon by name (``rho`` and ``tunnels`` are the names the family
checks look for).  JSON lists used as labels become tuples.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .covers import Cover, Development, validate_cover
from .dyadic import format_value, to_value
from .errors import InvalidTunnels, IsometrizeError, ParseError, ValidationError
from .gauge import ExtGauge
from .horizon import Horizon, HorizonFamily
from .space import Bornology, GroupAction, SpaceInstance, enumerate_group, windowed_action
from .tunnels import TunnelSystem

KEYS = ("points", "labels", "basis", "bornology", "frontier", "group", "covers", "developments", "gauges",
        "tunnels", "exhaustion", "targets", "horizons")
WINDOW_KEYS = tuple(k for k in KEYS if k != "horizons") + ("m",)


@dataclass(frozen=True)
class Bundle:
    """Everything one document describes."""

    inst: SpaceInstance
    group: GroupAction
    covers: dict = field(default_factory=dict)
    developments: dict = field(default_factory=dict)
    gauges: dict = field(default_factory=dict)
    tunnels: dict = field(default_factory=dict)
    exhaustion: Optional[tuple] = None
    targets: Optional[tuple] = None
    family: Optional[HorizonFamily] = None

    def first(self, kind: str):
        table = getattr(self, kind)
        if not table:
            raise ValidationError(f"document has no {kind}", witness={"field": kind})
        return table[sorted(table)[0]]


class _Ctx:
    """Locates fields in the source text for diagnostics."""

    def __init__(self, text: str):
        self.text = text

    def line_of(self, key: str) -> Optional[int]:
        m = re.search(r'"%s"\s*:' % re.escape(key), self.text)
        return self.text.count("\n", 0, m.start()) + 1 if m else None

    def fail(self, path: str, message: str, cls=ParseError):
        top = path.split(".")[-1].split("[")[0]
        line = self.line_of(top)
        where = f"line {line}, " if line else ""
        return cls(f"{where}field {path}: {message}", witness={"line": line, "field": path})


def _tupled(v):
    return tuple(_tupled(x) for x in v) if isinstance(v, list) else v


def _points(ctx, raw, path, n) -> frozenset:
    if not isinstance(raw, list) or not all(isinstance(p, int) and not isinstance(p, bool) for p in raw):
        raise ctx.fail(path, "expected a list of point indices")
    bad = [p for p in raw if not 0 <= p < n]
    if bad:
        raise ctx.fail(path, f"points {bad} outside 0..{n - 1}", ValidationError)
    return frozenset(raw)


def _set_list(ctx, raw, path, n) -> tuple:
    if not isinstance(raw, list):
        raise ctx.fail(path, "expected a list of point lists")
    return tuple(_points(ctx, s, f"{path}[{i}]", n) for i, s in enumerate(raw))


def _named(ctx, raw, path) -> dict:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ctx.fail(path, "expected an object mapping names to values")
    return raw


def _value(ctx, raw, path):
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ctx.fail(path, "values must be exact strings such as \"3/2^3\" or \"inf\"")
    try:
        return to_value(raw)
    except ValueError as exc:
        raise ctx.fail(path, str(exc)) from None


def _perm(ctx, raw, path, n, partial) -> tuple:
    if not isinstance(raw, list):
        raise ctx.fail(path, "expected an array")
    for v in raw:
        if v is None and partial:
            continue
        if not isinstance(v, int) or isinstance(v, bool):
            raise ctx.fail(path, "entries must be point indices" + (" or null" if partial else ""))
    return tuple(raw)


def _instance(ctx, doc, prefix="") -> tuple:
    """Space instance and group of a document or window."""
    raw = doc.get("points")
    if isinstance(raw, int) and not isinstance(raw, bool):
        n, labels = raw, doc.get("labels")
        if labels is not None:
            if not isinstance(labels, list):
                raise ctx.fail(prefix + "labels", "expected a list")
            labels = tuple(_tupled(x) for x in labels)
    elif isinstance(raw, list):
        n, labels = len(raw), tuple(_tupled(x) for x in raw)
    else:
        raise ctx.fail(prefix + "points", "expected a point count or a list of labels")
    if n < 1:
        raise ctx.fail(prefix + "points", "an instance needs at least one point", ValidationError)
    basis = _set_list(ctx, doc.get("basis", [list(range(n))]), prefix + "basis", n)
    born = doc.get("bornology", "all")
    if born == "all":
        bornology = Bornology.everything()
    else:
        bornology = Bornology(_set_list(ctx, born, prefix + "bornology", n))
    frontier = _points(ctx, doc.get("frontier", []), prefix + "frontier", n)
    try:
        inst = SpaceInstance(n, basis, bornology, labels, frontier)
    except IsometrizeError as exc:
        raise ctx.fail(prefix + "basis", str(exc), ValidationError) from None
    cover = validate_cover(inst, inst.given_basis)
    if cover.failed:
        raise ctx.fail(prefix + "basis", f"basis does not cover point {cover.witness}", ValidationError)
    return inst, _group(ctx, doc.get("group"), prefix + "group", inst)


def _group(ctx, raw, path, inst) -> GroupAction:
    if raw is None:
        return GroupAction.trivial(inst.n)
    if isinstance(raw, list):
        raw = {"generators": raw}
    if not isinstance(raw, dict):
        raise ctx.fail(path, "expected generators or an object")
    try:
        if "elements" in raw:
            elems = [_perm(ctx, g, f"{path}.elements[{i}]", inst.n, True) for i, g in enumerate(raw["elements"])]
            gens = raw.get("generators")
            gens = [_perm(ctx, g, f"{path}.generators[{i}]", inst.n, True) for i, g in enumerate(gens)] if gens else None
            return windowed_action(inst, elems, gens)
        gens = [_perm(ctx, g, f"{path}.generators[{i}]", inst.n, False) for i, g in enumerate(raw.get("generators", []))]
        cap = raw.get("cap", 512)
        if not isinstance(cap, int) or cap < 1:
            raise ctx.fail(path + ".cap", "cap must be a positive integer")
        return enumerate_group(inst, gens, cap)
    except ParseError:
        raise
    except IsometrizeError as exc:
        raise ctx.fail(path, str(exc), ValidationError) from None


def _objects(ctx, doc, inst, prefix="") -> dict:
    n = inst.n
    out = {"covers": {}, "developments": {}, "gauges": {}, "tunnels": {}}
    for name, raw in sorted(_named(ctx, doc.get("covers"), prefix + "covers").items()):
        path = f"{prefix}covers.{name}"
        c = Cover(_set_list(ctx, raw, path, n))
        bad = validate_cover(inst, c)
        if bad.failed:
            raise ctx.fail(path, f"{bad.note}: {bad.witness}", ValidationError)
        out["covers"][name] = c
    for name, raw in sorted(_named(ctx, doc.get("developments"), prefix + "developments").items()):
        path = f"{prefix}developments.{name}"
        if not isinstance(raw, list) or not raw:
            raise ctx.fail(path, "expected a non-empty list of covers")
        levels = [Cover(_set_list(ctx, lv, f"{path}[{i}]", n)) for i, lv in enumerate(raw)]
        for i, c in enumerate(levels):
            bad = validate_cover(inst, c)
            if bad.failed:
                raise ctx.fail(f"{path}[{i}]", f"{bad.note}: {bad.witness}", ValidationError)
        out["developments"][name] = Development(tuple(levels))
    for name, raw in sorted(_named(ctx, doc.get("gauges"), prefix + "gauges").items()):
        path = f"{prefix}gauges.{name}"
        if not isinstance(raw, list) or len(raw) != n or any(not isinstance(r, list) or len(r) != n for r in raw):
            raise ctx.fail(path, f"expected a {n}x{n} matrix")
        out["gauges"][name] = ExtGauge(tuple(tuple(_value(ctx, v, f"{path}[{i}][{j}]") for j, v in enumerate(r))
                                             for i, r in enumerate(raw)))
    for name, raw in sorted(_named(ctx, doc.get("tunnels"), prefix + "tunnels").items()):
        path = f"{prefix}tunnels.{name}"
        if not isinstance(raw, list):
            raise ctx.fail(path, "expected a list of [a, b, length] triples")
        triples = []
        for i, t in enumerate(raw):
            if not (isinstance(t, list) and len(t) == 3):
                raise ctx.fail(f"{path}[{i}]", "expected [a, b, length]")
            _points(ctx, t[:2], f"{path}[{i}]", n)
            a, b = t[0], t[1]
            if a == b:
                raise ctx.fail(f"{path}[{i}]", "a tunnel joins two distinct points", ValidationError)
            triples.append((a, b, _value(ctx, t[2], f"{path}[{i}][2]")))
        try:
            out["tunnels"][name] = TunnelSystem(tuple(triples))
        except InvalidTunnels as exc:
            raise ctx.fail(path, str(exc), ValidationError) from None
    ex = doc.get("exhaustion")
    out["exhaustion"] = None if ex is None else _set_list(ctx, ex, prefix + "exhaustion", n)
    tg = doc.get("targets")
    if tg is not None:
        if not isinstance(tg, list):
            raise ctx.fail(prefix + "targets", "expected a list of [x, U] pairs")
        targets = []
        for i, t in enumerate(tg):
            path = f"{prefix}targets[{i}]"
            if not (isinstance(t, list) and len(t) == 2 and isinstance(t[0], int)):
                raise ctx.fail(path, "expected [x, U]")
            (x,), u = _points(ctx, [t[0]], path, n), _points(ctx, t[1], path, n)
            if x not in u or not inst.is_open(u):
                raise ctx.fail(path, "target U must be an open set containing x", ValidationError)
            targets.append((x, u))
        out["targets"] = tuple(targets)
    else:
        out["targets"] = None
    return out


def _family(ctx, raw) -> HorizonFamily:
    if not isinstance(raw, dict) or not isinstance(raw.get("windows"), list) or not raw["windows"]:
        raise ctx.fail("horizons", "expected {\"windows\": [...]} with at least one window")
    hs = []
    for i, w in enumerate(raw["windows"]):
        prefix = f"horizons.windows[{i}]."
        if not isinstance(w, dict) or not isinstance(w.get("m"), int):
            raise ctx.fail(prefix + "m", "each window needs an integer m")
        unknown = sorted(set(w) - set(WINDOW_KEYS))
        if unknown:
            raise ctx.fail(prefix + unknown[0], "unknown key")
        inst, G = _instance(ctx, w, prefix)
        if inst.labels is None:
            raise ctx.fail(prefix + "points", "windows need point labels", ValidationError)
        objs = _objects(ctx, w, inst, prefix)
        aux = {}
        for kind in ("covers", "developments", "gauges", "tunnels"):
            aux.update(objs[kind])
        if objs["exhaustion"] is not None:
            aux["exhaustion"] = objs["exhaustion"]
        if objs["targets"] is not None:
            aux["targets"] = objs["targets"]
        hs.append(Horizon(w["m"], inst, G, aux))
    probes = tuple(frozenset(_tupled(p) for p in pr) for pr in raw.get("probes", []))
    radii = tuple(_value(ctx, r, "horizons.radii") for r in raw.get("radii", []))
    return HorizonFamily(str(raw.get("name", "family")), tuple(hs), probes, radii)


def parse_document(text: str) -> Bundle:
    """Parse and cross-validate an instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: {exc.msg}", witness={"line": exc.lineno, "field": None}) from None
    ctx = _Ctx(text)
    if not isinstance(doc, dict):
        raise ParseError("line 1: the document must be a JSON object", witness={"line": 1, "field": None})
    unknown = sorted(set(doc) - set(KEYS))
    if unknown:
        raise ctx.fail(unknown[0], "unknown key")
    family = _family(ctx, doc["horizons"]) if "horizons" in doc else None
    if "points" not in doc:
        if family is None:
            raise ParseError("field points: missing", witness={"line": None, "field": "points"})
        h = family.last
        return Bundle(h.inst, h.group, family=family)
    inst, G = _instance(ctx, doc)
    objs = _objects(ctx, doc, inst)
    return Bundle(inst, G, objs["covers"], objs["developments"], objs["gauges"], objs["tunnels"],
                  objs["exhaustion"], objs["targets"], family)


def load_document(path: str) -> Bundle:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None
    return parse_document(text)


# -- emission ------------------------------------------------------------------------


def _sets(sets) -> list:
    return [sorted(s) for s in sets]


def _label(v):
    return list(_label(x) for x in v) if isinstance(v, tuple) else v


def _instance_doc(inst: SpaceInstance, G: GroupAction) -> dict:
    out = {"points": inst.n, "basis": _sets(inst.given_basis)}
    if inst.labels is not None:
        out["points"] = [_label(x) for x in inst.labels]
    out["bornology"] = "all" if inst.bornology.full else _sets(inst.bornology.generators)
    if inst.frontier:
        out["frontier"] = sorted(inst.frontier)
    if G.windowed:
        out["group"] = {"elements": [list(g) for g in G.elements], "generators": [list(g) for g in G.generators]}
    elif len(G.elements) > 1:
        out["group"] = {"generators": [list(g) for g in G.generators], "cap": G.cap}
    return out


def _objects_doc(covers, devs, gauges, tunnels, exhaustion, targets) -> dict:
    out = {}
    if covers:
        out["covers"] = {k: _sets(c) for k, c in covers.items()}
    if devs:
        out["developments"] = {k: [_sets(c) for c in d.levels] for k, d in devs.items()}
    if gauges:
        out["gauges"] = {k: [[format_value(v) for v in row] for row in g.values] for k, g in gauges.items()}
    if tunnels:
        out["tunnels"] = {k: [[a, b, format_value(v)] for a, b, v in t.triples] for k, t in tunnels.items()}
    if exhaustion is not None:
        out["exhaustion"] = _sets(exhaustion)
    if targets is not None:
        out["targets"] = [[x, sorted(u)] for x, u in targets]
    return out


def bundle_document(b: Bundle) -> dict:
    out = {}
    if b.family is None or b.covers or b.developments or b.gauges or b.tunnels or b.targets or b.exhaustion:
        out.update(_instance_doc(b.inst, b.group))
        out.update(_objects_doc(b.covers, b.developments, b.gauges, b.tunnels, b.exhaustion, b.targets))
    if b.family is not None:
        out["horizons"] = family_document(b.family)
    return out


def family_document(fam: HorizonFamily) -> dict:
    windows = []
    for h in fam:
        w = {"m": h.m}
        w.update(_instance_doc(h.inst, h.group))
        pick = {k: {n: v for n, v in h.aux.items() if isinstance(v, cls)}
                for k, cls in (("covers", Cover), ("developments", Development), ("gauges", ExtGauge),
                               ("tunnels", TunnelSystem))}
        w.update(_objects_doc(pick["covers"], pick["developments"], pick["gauges"], pick["tunnels"],
                              h.aux.get("exhaustion"), h.aux.get("targets")))
        windows.append(w)
    probes = []
    for p in fam.probes:
        try:
            probes.append(sorted(_label(x) for x in p))
        except TypeError:
            probes.append(sorted((_label(x) for x in p), key=repr))
    return {"name": fam.name, "probes": probes, "radii": [format_value(r) for r in fam.radii], "windows": windows}


def emit_document(b: Bundle) -> str:
    return json.dumps(bundle_document(b), sort_keys=True, indent=1, ensure_ascii=False) + "\n"
