"""Command line front end over structured-text workspaces.

Subcommands: validate, build, homology, map, equiv, hocolim, descent,
orb, lr-check, tvc.  Entities are referenced as PATH:NAME, as a bare
PATH holding a single entity of the needed kind, or as a NAME inside
files already listed on the command line.  Reports are plain text with
a fixed line order; --format machine emits the same keys as one JSON
object.  Identical inputs and budgets produce byte-identical output.
The exit code is 0 when every check passes and 1 on a failed check or
reported error.  --budget falls back to the ORBKIT_BUDGET environment
variable, then to each operation's own default.
"""

import argparse
import json
import os

from . import bundles
from . import core
from . import equivariant
from . import functors
from . import io
from . import laxcolim
from . import orb
from .nerve import chain_complex, homology, nerve
from .errors import (BudgetExceeded, NotASubgroup, OrbkitError, ParseError,
                     UnknownEntity)


class _Store:
    """Lazy file loader sharing one namespace across all references."""

    def __init__(self):
        self.ws = io.Workspace()
        self.by_file = {}

    def load(self, path):
        if path not in self.by_file:
            before = set(self.ws.entities)
            io.load_workspace([path], ws=self.ws)
            self.by_file[path] = sorted(set(self.ws.entities) - before)
        return self.by_file[path]

    def load_all(self, paths):
        for path in paths:
            self.load(path)

    def resolve(self, ref, kind):
        if ":" in ref:
            path, name = ref.rsplit(":", 1)
            self.load(path)
            return self.ws.get(name, kind)
        if os.path.exists(ref):
            names = [n for n in self.load(ref)
                     if self.ws.entities[n][0] == kind]
            if len(names) != 1:
                raise UnknownEntity("%s (no single %s inside)" % (ref, kind))
            return self.ws.get(names[0], kind)
        return self.ws.get(ref, kind)

    def resolve_any(self, ref, kinds):
        for kind in kinds:
            try:
                return kind, self.resolve(ref, kind)
            except UnknownEntity:
                pass
        raise UnknownEntity(ref)


def _yn(flag):
    return "yes" if flag else "no"


def _ok(flag):
    return "ok" if flag else "FAIL"


def _budget_kw(args):
    if getattr(args, "budget", None) is not None:
        return {"budget": args.budget}
    env = os.environ.get("ORBKIT_BUDGET")
    if env:
        try:
            return {"budget": int(env)}
        except ValueError:
            raise ParseError(0, "ORBKIT_BUDGET must be an integer")
    return {}


def _emit(args, lines, data):
    if args.format == "machine":
        print(json.dumps(data))
    else:
        for line in lines:
            print(line)


def _homology_term(rank, torsion):
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append("Z^%d" % rank)
    parts.extend("Z/%d" % t for t in torsion)
    return " + ".join(parts) if parts else "0"


def _cmd_validate(store, args):
    ws, results = io.load_workspace(args.files, collect=True)
    lines, entities, code = [], [], 0
    for name, kind, err in results:
        if err is None:
            lines.append("%s: ok" % name)
            entities.append({"name": name, "kind": kind, "ok": True,
                             "error": None})
        else:
            code = 1
            text = "%s: %s" % (type(err).__name__, err)
            lines.append("%s: FAIL %s" % (name, text))
            entities.append({"name": name, "kind": kind, "ok": False,
                             "error": text})
    _emit(args, lines, {"entities": entities})
    return code


def _cmd_build(store, args):
    kind, name = "groupoid", args.name or args.construction
    what, refs = args.construction, args.args
    if what in ("unit", "pair"):
        n = int(refs[0])
        obj = core.unit_groupoid(n) if what == "unit" else core.pair_groupoid(n)
    elif what == "delooping":
        obj = core.delooping(store.resolve(refs[0], "group"))
    elif what == "translation":
        obj = core.translation_groupoid(store.resolve(refs[0], "groupoid"))
    elif what == "gauge":
        obj = core.gauge_groupoid(store.resolve(refs[0], "bundle"))
    elif what == "cosets":
        group = store.resolve(refs[0], "group")
        sub = tuple(int(t) for t in refs[1].split(","))
        if not group.is_subgroup(sub):
            raise NotASubgroup(sub)
        obj = core.action_groupoid(group, core.coset_gset(group, sub))
    elif what == "product":
        ka, a = store.resolve_any(refs[0], ("group", "groupoid"))
        b = store.resolve(refs[1], ka)
        if ka == "group":
            kind, obj = "group", core.product_group(a, b)
        else:
            obj = core.product(a, b)
    elif what == "coproduct":
        obj = core.coproduct(store.resolve(refs[0], "groupoid"),
                             store.resolve(refs[1], "groupoid"))
    else:
        raise UnknownEntity(what)
    print(io.entity_text(kind, name, obj), end="")
    return 0


def _cmd_homology(store, args):
    g = store.resolve(args.entity, "groupoid")
    nv = nerve(g, args.degree, **_budget_kw(args))
    table = homology(chain_complex(nv))
    lines, data = [], {}
    for n, rank, torsion in table.rows:
        term = _homology_term(rank, torsion)
        lines.append("H%d = %s" % (n, term))
        data["H%d" % n] = term
    _emit(args, lines, data)
    return 0


def _cmd_map(store, args):
    h = store.resolve(args.source, "groupoid")
    g = store.resolve(args.target, "groupoid")
    mg = functors.mapping_groupoid(h, g, args.mode)
    data = {"objects": mg.n_objects, "pi0": len(mg.components())}
    _emit(args, ["objects: %d, pi0: %d" % (data["objects"], data["pi0"])],
          data)
    return 0


def _cmd_equiv(store, args):
    f = store.resolve(args.entity, "functor")
    cert = functors.categorical_equivalence(f)
    data = {"faithful": f.is_faithful(), "full": f.is_full(),
            "essentially_surjective": f.is_essentially_surjective(),
            "equivalence": cert is not None}
    lines = ["faithful: %s" % _yn(data["faithful"]),
             "full: %s" % _yn(data["full"]),
             "essentially surjective: %s" % _yn(data["essentially_surjective"]),
             "equivalence: %s" % _yn(data["equivalence"])]
    _emit(args, lines, data)
    return 0 if cert is not None else 1


def _cmd_hocolim(store, args):
    d = store.resolve(args.entity, "lax")
    pres = laxcolim.hocolim_presentation(d)
    data = {"vertices": pres.n_vertices, "generators": pres.n_gens,
            "relations": len(pres.relations)}
    lines = ["vertices: %d" % data["vertices"],
             "generators: %d" % data["generators"],
             "relations: %d" % data["relations"]]
    code = 0
    if args.target is not None:
        w = store.resolve(args.target, "groupoid")
        good = laxcolim.universal_property_check(d, w, **_budget_kw(args))
        data["universal_property"] = good
        lines.append("universal property: %s" % _ok(good))
        code = 0 if good else 1
    _emit(args, lines, data)
    return code


def _cmd_descent(store, args):
    store.load_all(args.files)
    names = store.ws.names("descent")
    if not names:
        raise UnknownEntity("descent (no entities loaded)")
    lines, checks, code = [], {}, 0
    for name in names:
        prob = store.ws.get(name, "descent")
        if args.cover_bound is not None:
            depth = max(prob.cover.count(t) for t in set(prob.cover))
            if depth > args.cover_bound:
                raise BudgetExceeded("descent cover bound", depth)
        rep = bundles.descent_check(prob.cover, prob.value,
                                    **_budget_kw(args))
        checks[name] = rep.ok
        lines.append("%s: %s" % (name, _ok(rep.ok)))
        if not rep.ok:
            code = 1
    _emit(args, lines, {"checks": checks})
    return code


def _cmd_orb(store, args):
    store.load_all(args.files)
    names = args.family.split(",")
    groups = [store.resolve(n, "group") for n in names]
    cat = orb.build_orb(groups, args.mode)
    lines = ["family: %s" % " ".join(names), "mode: %s" % args.mode]
    homs = {}
    for i in range(len(groups)):
        for j in range(len(groups)):
            h = cat.hom(i, j)
            row = {"objects": h.n_objects, "arrows": h.n_arrows,
                   "pi0": len(h.components())}
            homs["%d,%d" % (i, j)] = row
            lines.append("hom (%d, %d): objects %d, arrows %d, pi0 %d"
                         % (i, j, row["objects"], row["arrows"], row["pi0"]))
    _emit(args, lines, {"family": names, "mode": args.mode, "homs": homs})
    return 0


def _cmd_lr(store, args):
    store.load_all(args.files)
    spec = store.resolve(args.space, "orbspace")
    cat = orb.build_orb(spec.groups, functors.ALL)
    x = orb.free_orbspace(cat, spec.cells)
    w = store.resolve(args.target, "groupoid")
    kw = _budget_kw(args)
    data = {"adjunction": bool(orb.adjunction_check(x, w, **kw)),
            "unit": bool(orb.unit_check(x, **kw)),
            "counit": bool(orb.counit_check(w, cat, **kw))}
    lines = ["adjunction: %s" % _ok(data["adjunction"]),
             "unit: %s" % _ok(data["unit"]),
             "counit: %s" % _ok(data["counit"])]
    _emit(args, lines, data)
    return 0 if all(data.values()) else 1


def _cmd_tvc(store, args):
    store.load_all(args.files)
    group = store.resolve(args.group, "group")
    family = []
    if args.family:
        for part in args.family.split(";"):
            family.append(tuple(int(t) for t in part.split(",")))
    for elems in family:
        if not group.is_subgroup(set(elems)):
            raise NotASubgroup(elems)
    if family:
        subs = [group.subgroup_as_group(elems) for elems in family]
        cat = orb.build_orb(subs, args.mode)
        rep = equivariant.tvc_compare(group, family, cat)
    else:
        rep = equivariant.tvc_compare(group, (), None, mode=args.mode)
    pairs = {"%d,%d" % key: dict(sorted(val.items()))
             for key, val in sorted(rep.pairs.items())}
    _emit(args, rep.lines(), {"ok": rep.ok, "mode": rep.mode, "pairs": pairs})
    return 0 if rep.ok else 1


def _parser():
    parser = argparse.ArgumentParser(
        prog="orbkit",
        description="finite groupoid calculus over structured-text files")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("text", "machine"),
                       default="text")
        return p

    p = cmd("validate", _cmd_validate, "build and check every entity")
    p.add_argument("files", nargs="+")

    p = cmd("build", _cmd_build, "print a constructed entity as text")
    p.add_argument("construction",
                   choices=("delooping", "unit", "pair", "product",
                            "coproduct", "translation", "gauge", "cosets"))
    p.add_argument("args", nargs="+")
    p.add_argument("--name")

    p = cmd("homology", _cmd_homology, "homology of the nerve")
    p.add_argument("entity")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--budget", type=int)

    p = cmd("map", _cmd_map, "size of a mapping groupoid")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--mode", choices=(functors.ALL, functors.FAITHFUL),
                   default=functors.ALL)

    p = cmd("equiv", _cmd_equiv, "certify a functor as an equivalence")
    p.add_argument("entity")

    p = cmd("hocolim", _cmd_hocolim, "present a lax colimit")
    p.add_argument("entity")
    p.add_argument("--target")
    p.add_argument("--budget", type=int)

    p = cmd("descent", _cmd_descent, "check covers against their values")
    p.add_argument("files", nargs="+")
    p.add_argument("--budget", type=int)
    p.add_argument("--cover-bound", type=int, dest="cover_bound")

    p = cmd("orb", _cmd_orb, "orbit category of named groups")
    p.add_argument("files", nargs="+")
    p.add_argument("--family", required=True)
    p.add_argument("--mode", choices=(functors.ALL, functors.FAITHFUL),
                   default=functors.ALL)

    p = cmd("lr-check", _cmd_lr, "adjunction checks for a free diagram")
    p.add_argument("files", nargs="+")
    p.add_argument("--space", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--budget", type=int)

    p = cmd("tvc", _cmd_tvc, "compare concrete and abstract orbits")
    p.add_argument("group")
    p.add_argument("family", help="subgroups as 'e,e;e,e,e' element lists")
    p.add_argument("files", nargs="*")
    p.add_argument("--mode", choices=(functors.ALL, functors.FAITHFUL),
                   default=functors.ALL)
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    store = _Store()
    try:
        return args.func(store, args)
    except OrbkitError as err:
        print("error: %s: %s" % (type(err).__name__, err))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
