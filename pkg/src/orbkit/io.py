"""Structured-text workspaces: parse, validate, and serialize named entities.

One file holds any number of named blocks, each opened by a kind and a
name and closed by `end`.  Tokens are whitespace separated, `/` splits
rows or triples, and `#` starts a comment.  Kinds: group (a
multiplication table), groupoid (full arrow tables), functor, bundle,
category (a strict index), lax (a groupoid diagram over an index),
descent (a cover with a value groupoid), and orbspace (a free diagram
over named groups).  Every entity is validated as it is built, all names
share one namespace, and references resolve across the loaded files.
"""

from . import bundles
from . import core
from . import functors
from . import laxcolim
from .errors import OrbkitError, ParseError, UnknownEntity

KINDS = ("group", "groupoid", "category", "functor", "bundle",
         "orbspace", "descent", "lax")
# builders run in this order so references only look backwards
_STAGE = {"group": 0, "groupoid": 0, "category": 0, "functor": 1,
          "bundle": 1, "orbspace": 1, "descent": 1, "lax": 2}


class DescentProblem:
    """A cover map onto base points plus the value groupoid to descend."""

    def __init__(self, cover, value_name, value):
        self.cover = tuple(cover)
        self.value_name = value_name
        self.value = value


class OrbSpaceSpec:
    """A free diagram recipe: named family groups and cell counts."""

    def __init__(self, family_names, groups, cells):
        self.family_names = tuple(family_names)
        self.groups = tuple(groups)
        self.cells = tuple(cells)


class Workspace:
    """Loaded entities in one namespace, with kind-checked lookup."""

    def __init__(self):
        self.entities = {}

    def add(self, name, kind, obj, line=0):
        if name in self.entities:
            raise ParseError(line, "duplicate entity name %r" % name)
        self.entities[name] = (kind, obj)

    def get(self, name, kind=None):
        if name not in self.entities:
            raise UnknownEntity(name)
        have, obj = self.entities[name]
        if kind is not None and have != kind:
            raise UnknownEntity("%s (not a %s)" % (name, kind))
        return obj

    def names(self, kind=None):
        return sorted(n for n, (k, _) in self.entities.items()
                      if kind is None or k == kind)


def parse_file(path):
    """Raw blocks (kind, name, fields, line) in file order."""
    blocks, cur = [], None
    try:
        handle = open(path)
    except OSError as err:
        raise ParseError(0, "cannot read %r: %s" % (path, err.strerror))
    with handle:
        for lineno, raw in enumerate(handle, 1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            tokens = text.split()
            if cur is None:
                if len(tokens) != 2:
                    raise ParseError(lineno, "expected 'kind name'")
                if tokens[0] not in KINDS:
                    raise ParseError(lineno, "unknown kind %r" % tokens[0])
                cur = {"kind": tokens[0], "name": tokens[1],
                       "line": lineno, "fields": {}}
            elif tokens == ["end"]:
                blocks.append(cur)
                cur = None
            else:
                cur["fields"].setdefault(tokens[0], []).append(
                    (lineno, tokens[1:]))
    if cur is not None:
        raise ParseError(cur["line"], "block %r is never closed" % cur["name"])
    return blocks


def _field(block, key):
    lines = block["fields"].get(key)
    if lines is None:
        raise ParseError(block["line"],
                         "%s %r needs a %r line"
                         % (block["kind"], block["name"], key))
    return lines


def _one(block, key):
    lines = _field(block, key)
    if len(lines) != 1:
        raise ParseError(lines[1][0], "field %r given twice" % key)
    return lines[0]


def _ints(tokens, line):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(line, "expected integers, got %r" % (tokens,))


def _int_line(block, key):
    line, tokens = _one(block, key)
    return _ints(tokens, line)


def _scalar(block, key):
    line, tokens = _one(block, key)
    if len(tokens) != 1:
        raise ParseError(line, "field %r takes one value" % key)
    return line, tokens[0]


def _rows(block, key):
    """'/'-separated runs across all lines of the field."""
    rows, line0 = [], None
    for line, tokens in _field(block, key):
        line0 = line if line0 is None else line0
        cur = []
        for t in tokens:
            if t == "/":
                rows.append(cur)
                cur = []
            else:
                cur.append(t)
        rows.append(cur)
    return line0, [r for r in rows if r]


def _bounded(values, bound, line, what):
    for v in values:
        if not (0 <= v < bound):
            raise ParseError(line, "%s id %d out of range" % (what, v))
    return values


def _build_group(ws, block):
    line, rows = _rows(block, "mul")
    mul = [_ints(r, line) for r in rows]
    labels = None
    if "labels" in block["fields"]:
        lline, tokens = _one(block, "labels")
        if len(tokens) != len(mul):
            raise ParseError(lline, "labels do not match the table size")
        labels = tokens
    return core.FinGroup(mul, labels=labels, name=block["name"])


def _arrow_tables(block):
    n_obj = _int_line(block, "objects")
    if len(n_obj) != 1 or n_obj[0] < 0:
        raise ParseError(block["line"], "objects takes one count")
    n_obj = n_obj[0]
    src = _int_line(block, "src")
    tgt = _int_line(block, "tgt")
    n_arr = len(src)
    line = block["line"]
    if len(tgt) != n_arr:
        raise ParseError(line, "src and tgt lengths differ")
    _bounded(src, n_obj, line, "object")
    _bounded(tgt, n_obj, line, "object")
    ident = _bounded(_int_line(block, "ident"), n_arr, line, "arrow")
    if len(ident) != n_obj:
        raise ParseError(line, "ident needs one arrow per object")
    cline, rows = _rows(block, "comp")
    comp = {}
    for r in rows:
        triple = _ints(r, cline)
        if len(triple) != 3:
            raise ParseError(cline, "comp entries are triples")
        _bounded(triple, n_arr, cline, "arrow")
        comp[(triple[0], triple[1])] = triple[2]
    return n_obj, src, tgt, comp, ident


def _build_groupoid(ws, block):
    n_obj, src, tgt, comp, ident = _arrow_tables(block)
    inv = _bounded(_int_line(block, "inv"), len(src), block["line"], "arrow")
    if len(inv) != len(src):
        raise ParseError(block["line"], "inv needs one arrow per arrow")
    return core.validate_groupoid(
        core.FinGroupoid(n_obj, src, tgt, comp, ident, inv))


def _build_category(ws, block):
    n_obj, src, tgt, comp, ident = _arrow_tables(block)
    return laxcolim.index_from_category(n_obj, src, tgt, comp, ident)


def _build_functor(ws, block):
    dom = ws.get(_scalar(block, "dom")[1], "groupoid")
    cod = ws.get(_scalar(block, "cod")[1], "groupoid")
    obj = _int_line(block, "obj")
    arr = _int_line(block, "arr")
    line = block["line"]
    if len(obj) != dom.n_objects or len(arr) != dom.n_arrows:
        raise ParseError(line, "functor tables do not match the domain")
    _bounded(obj, cod.n_objects, line, "object")
    _bounded(arr, cod.n_arrows, line, "arrow")
    return functors.GroupoidFunctor(dom, cod, obj, arr).verify()


def _build_bundle(ws, block):
    group = ws.get(_scalar(block, "group")[1], "group")
    base = _int_line(block, "base")
    if len(base) != 1:
        raise ParseError(block["line"], "base takes one count")
    proj = _int_line(block, "proj")
    line, rows = _rows(block, "act")
    act = [_ints(r, line) for r in rows]
    return bundles.validate_bundle(
        bundles.PrincipalBundle(group, base[0], proj, act))


def _build_orbspace(ws, block):
    _, names = _one(block, "family")
    groups = [ws.get(n, "group") for n in names]
    line, tokens = _one(block, "cells")
    cells = _ints(tokens, line)
    if len(cells) != len(groups) or any(c < 0 for c in cells):
        raise ParseError(line, "cells needs one count per family member")
    return OrbSpaceSpec(names, groups, cells)


def _build_descent(ws, block):
    line, tokens = _one(block, "cover")
    cover = _ints(tokens, line)
    if not cover or sorted(set(cover)) != list(range(max(cover) + 1)):
        raise ParseError(line, "cover must hit every base point")
    name = _scalar(block, "value")[1]
    return DescentProblem(cover, name, ws.get(name, "groupoid"))


def _build_lax(ws, block):
    index = ws.get(_scalar(block, "index")[1], "category")
    _, names = _one(block, "values")
    values = [ws.get(n, "groupoid") for n in names]
    if len(values) != index.n_objects:
        raise ParseError(block["line"], "values needs one groupoid per object")
    on_arrow = {}
    for line, tokens in block["fields"].get("arrow", []):
        if len(tokens) != 2:
            raise ParseError(line, "arrow lines read 'arrow p functor'")
        p = _ints(tokens[:1], line)[0]
        if not (0 <= p < index.n_arrows):
            raise ParseError(line, "arrow id %d out of range" % p)
        on_arrow[p] = ws.get(tokens[1], "functor")
    return laxcolim.validate_diagram(
        laxcolim.LaxDiagram(index, values, on_arrow))


_BUILDERS = {"group": _build_group, "groupoid": _build_groupoid,
             "category": _build_category, "functor": _build_functor,
             "bundle": _build_bundle, "orbspace": _build_orbspace,
             "descent": _build_descent, "lax": _build_lax}


def load_workspace(paths, collect=False, ws=None):
    """Parse and build all entities; collect=True records per-entity errors."""
    blocks = []
    for path in paths:
        blocks.extend(parse_file(path))
    order = sorted(range(len(blocks)), key=lambda i: _STAGE[blocks[i]["kind"]])
    ws = Workspace() if ws is None else ws
    results = []
    for i in order:
        block = blocks[i]
        try:
            obj = _BUILDERS[block["kind"]](ws, block)
            ws.add(block["name"], block["kind"], obj, block["line"])
            results.append((i, block["name"], block["kind"], None))
        except OrbkitError as err:
            if not collect:
                raise
            results.append((i, block["name"], block["kind"], err))
    if collect:
        return ws, [r[1:] for r in sorted(results)]
    return ws


def _chunk(items, width):
    return [items[i:i + width] for i in range(0, len(items), width)]


def entity_text(kind, name, obj):
    """Serialize a group or groupoid back into block form."""
    out = ["%s %s" % (kind, name)]
    if kind == "group":
        out.append("mul " + " / ".join(" ".join(str(v) for v in row)
                                       for row in obj.mul))
        if all(isinstance(l, str) for l in obj.labels):
            out.append("labels " + " ".join(obj.labels))
    elif kind == "groupoid":
        out.append("objects %d" % obj.n_objects)
        out.append("src " + " ".join(str(v) for v in obj.src))
        out.append("tgt " + " ".join(str(v) for v in obj.tgt))
        out.append("ident " + " ".join(str(v) for v in obj.ident))
        out.append("inv " + " ".join(str(v) for v in obj.inv))
        triples = ["%d %d %d" % (a, b, c)
                   for (a, b), c in sorted(obj.comp.items())]
        for row in _chunk(triples, 8):
            out.append("comp " + " / ".join(row))
    else:
        raise UnknownEntity("%s (not serializable)" % kind)
    out.append("end")
    return "\n".join(out) + "\n"
