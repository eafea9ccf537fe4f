import json

import pytest

from orbkit import bundles, cli, core, io
from orbkit.errors import (NonAssociative, ParseError, PreconditionFailed,
                           UnknownEntity)

Z2 = core.cyclic_group(2)
Z3 = core.cyclic_group(3)
S3 = core.symmetric_group(3)

BROKEN = """groupoid broken
objects 1
src 0 0 0
tgt 0 0 0
ident 0
inv 0 2 1
comp 0 0 0 / 0 1 1 / 0 2 2 / 1 0 1 / 1 1 1 / 1 2 0
comp 2 0 2 / 2 1 0 / 2 2 1
end
"""

SPAN = """category span
objects 3
src 0 1 2 0 1
tgt 0 1 2 2 2
ident 0 1 2
comp 0 0 0 / 1 1 1 / 2 2 2 / 2 3 3 / 2 4 4 / 3 0 3 / 4 1 4
end
"""

FUNCTORS = """functor j2
dom T
cod BZ2
obj 0
arr 0
end

functor j3
dom T
cod BZ3
obj 0
arr 0
end

functor incl
dom BZ2
cod BS3
obj 0
arr 0 1
end

functor same
dom BZ2
cod BZ2
obj 0
arr 0 1
end

lax push
index span
values BZ2 BZ3 T
arrow 3 j2
arrow 4 j3
end

descent cech2
cover 0 0 1 1 2 2
value BZ2
end

orbspace X1
family Z2 Z3
cells 1 1
end
"""


def _entities():
    parts = [io.entity_text("group", "Z2", Z2),
             io.entity_text("group", "Z3", Z3),
             io.entity_text("group", "S3", S3),
             io.entity_text("groupoid", "BZ2", core.delooping(Z2)),
             io.entity_text("groupoid", "BZ3", core.delooping(Z3)),
             io.entity_text("groupoid", "BS3", core.delooping(S3)),
             io.entity_text("groupoid", "T", core.unit_groupoid(1)),
             SPAN, FUNCTORS]
    return "\n".join(parts)


@pytest.fixture()
def ws_file(tmp_path):
    path = tmp_path / "all.ws"
    path.write_text(_entities())
    return str(path)


def _run(capsys, argv):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_groupoid_file_round_trip(tmp_path):
    for g in (core.delooping(S3), core.pair_groupoid(3),
              core.action_groupoid(S3, core.coset_gset(S3, (0, 1)))):
        path = tmp_path / "g.gpd"
        path.write_text(io.entity_text("groupoid", "g", g))
        h = io.load_workspace([str(path)]).get("g", "groupoid")
        assert (h.n_objects, h.src, h.tgt, h.ident, h.inv) == (
            g.n_objects, g.src, g.tgt, g.ident, g.inv)
        assert h.comp == g.comp


def test_group_file_round_trip(tmp_path):
    path = tmp_path / "g.grp"
    path.write_text(io.entity_text("group", "G", S3))
    h = io.load_workspace([str(path)]).get("G", "group")
    assert h.mul == S3.mul


def test_parse_errors_carry_line_numbers(tmp_path):
    cases = [("group G\nmul 0\n", "never closed"),
             ("widget W\nend\n", "unknown kind"),
             ("group G extra\nend\n", "expected"),
             ("groupoid g\nobjects 1\nsrc x\ntgt 0\nident 0\ninv 0\n"
              "comp 0 0 0\nend\n", "integers"),
             ("group A\nmul 0\nend\ngroup A\nmul 0\nend\n", "duplicate"),
             ("groupoid g\nobjects 1\nend\n", "needs"),
             ("groupoid g\nobjects 1\nsrc 0\ntgt 0\nident 0\ninv 0\n"
              "comp 0 0\nend\n", "triples")]
    for text, needle in cases:
        path = tmp_path / "bad.ws"
        path.write_text(text)
        with pytest.raises(ParseError) as info:
            io.load_workspace([str(path)])
        assert needle in str(info.value)
        assert isinstance(info.value.line, int)


def test_unknown_references_and_kind_mismatch(tmp_path):
    path = tmp_path / "w.ws"
    path.write_text(io.entity_text("group", "G", Z2)
                    + "functor f\ndom NOPE\ncod NOPE\nobj 0\narr 0\nend\n")
    with pytest.raises(UnknownEntity):
        io.load_workspace([str(path)])
    ws = io.Workspace()
    ws.add("G", "group", Z2)
    with pytest.raises(UnknownEntity):
        ws.get("G", "groupoid")


def test_validate_reports_failures_per_entity(tmp_path, capsys):
    path = tmp_path / "mixed.ws"
    path.write_text(io.entity_text("group", "G", Z2) + "\n" + BROKEN)
    code, out = _run(capsys, ["validate", str(path)])
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "G: ok"
    assert lines[1].startswith("broken: FAIL NonAssociative:")
    assert "composition not associative at" in lines[1]


def test_validate_machine_format(tmp_path, capsys):
    path = tmp_path / "mixed.ws"
    path.write_text(io.entity_text("group", "G", Z2) + "\n" + BROKEN)
    code, out = _run(capsys, ["validate", str(path), "--format", "machine"])
    assert code == 1
    doc = json.loads(out)
    by_name = {e["name"]: e for e in doc["entities"]}
    assert by_name["G"]["ok"] is True
    assert by_name["broken"]["ok"] is False
    assert "NonAssociative" in by_name["broken"]["error"]


def test_homology_matches_reference_table(ws_file, capsys):
    code, out = _run(capsys, ["homology", ws_file + ":BZ2", "--degree", "5"])
    assert code == 0
    assert out == "H0 = Z\nH1 = Z/2\nH2 = 0\nH3 = Z/2\nH4 = 0\n"


def test_map_line_matches_reference(ws_file, capsys):
    code, out = _run(capsys, ["map", ws_file + ":BZ2", ws_file + ":BS3",
                              "--mode", "all"])
    assert code == 0
    assert out == "objects: 4, pi0: 2\n"
    code, out = _run(capsys, ["map", ws_file + ":BZ2", ws_file + ":BS3",
                              "--mode", "all", "--format", "machine"])
    assert json.loads(out) == {"objects": 4, "pi0": 2}


def test_equiv_flags_and_exit_codes(ws_file, capsys):
    code, out = _run(capsys, ["equiv", ws_file + ":incl"])
    assert code == 1
    assert "full: no" in out and "equivalence: no" in out
    code, out = _run(capsys, ["equiv", ws_file + ":same"])
    assert code == 0
    assert out.endswith("equivalence: yes\n")


def test_hocolim_universal_property_from_files(ws_file, capsys):
    code, out = _run(capsys, ["hocolim", ws_file + ":push",
                              "--target", ws_file + ":BS3"])
    assert code == 0
    assert "universal property: ok" in out
    code, out = _run(capsys, ["hocolim", ws_file + ":push",
                              "--target", ws_file + ":BS3", "--budget", "1"])
    assert code == 1
    assert out.startswith("error: BudgetExceeded")


def test_descent_and_cover_bound(ws_file, capsys):
    code, out = _run(capsys, ["descent", ws_file])
    assert code == 0
    assert out == "cech2: ok\n"
    code, out = _run(capsys, ["descent", ws_file, "--cover-bound", "1"])
    assert code == 1
    assert out.startswith("error: BudgetExceeded: budget exceeded in "
                          "descent cover bound")
    code, out = _run(capsys, ["descent", ws_file, "--cover-bound", "2"])
    assert code == 0


def test_orb_report_table(ws_file, capsys):
    code, out = _run(capsys, ["orb", ws_file, "--family", "Z2,Z3",
                              "--mode", "all"])
    assert code == 0
    # two self-maps of Z2 with Z2 transformations; only the trivial map
    # across the pair; three self-maps of Z3, abelian so three components
    assert out.splitlines() == [
        "family: Z2 Z3",
        "mode: all",
        "hom (0, 0): objects 2, arrows 4, pi0 2",
        "hom (0, 1): objects 1, arrows 3, pi0 1",
        "hom (1, 0): objects 1, arrows 2, pi0 1",
        "hom (1, 1): objects 3, arrows 9, pi0 3"]


def test_lr_check_report(ws_file, capsys):
    code, out = _run(capsys, ["lr-check", ws_file, "--space", "X1",
                              "--target", "BZ2"])
    assert code == 0
    assert out == "adjunction: ok\nunit: ok\ncounit: ok\n"


def test_tvc_cli_positive_and_refusals(ws_file, capsys):
    code, out = _run(capsys, ["tvc", "S3", "0,1,2,3,4,5", ws_file,
                              "--mode", "faithful"])
    assert code == 0
    assert out.splitlines()[-1] == "overall: equivalent"
    code, out = _run(capsys, ["tvc", "S3", "0;0,1", ws_file])
    assert code == 1
    assert out.startswith("error: PreconditionFailed")
    code, out = _run(capsys, ["tvc", "S3", "0,1,2", ws_file])
    assert code == 1
    assert out.startswith("error: NotASubgroup")


def test_build_outputs_reload(ws_file, tmp_path, capsys):
    jobs = [(["build", "delooping", ws_file + ":Z3", "--name", "B"],
             "groupoid", 1),
            (["build", "pair", "3", "--name", "B"], "groupoid", 3),
            (["build", "cosets", ws_file + ":S3", "0,1", "--name", "B"],
             "groupoid", 3),
            (["build", "product", ws_file + ":Z2", ws_file + ":Z2",
              "--name", "B"], "group", None),
            (["build", "coproduct", ws_file + ":BZ2", ws_file + ":BZ3",
              "--name", "B"], "groupoid", 2),
            (["build", "gauge", str(tmp_path / "bnd.ws") + ":P",
              "--name", "B"], "groupoid", 3)]
    b = bundles.trivial_bundle(Z2, 3)
    act = " / ".join(" ".join(str(b._dict[(g, p)]) for p in range(b.n_total))
                     for g in Z2.elements)
    (tmp_path / "bnd.ws").write_text(
        io.entity_text("group", "Z2", Z2)
        + "bundle P\ngroup Z2\nbase 3\nproj "
        + " ".join(str(v) for v in b.proj) + "\nact " + act + "\nend\n")
    for argv, kind, n_objects in jobs:
        code, out = _run(capsys, argv)
        assert code == 0
        path = tmp_path / "built.ws"
        path.write_text(out)
        obj = io.load_workspace([str(path)]).get("B", kind)
        if kind == "group":
            assert obj.n == 4
        else:
            assert obj.n_objects == n_objects


def test_byte_identical_reports(ws_file, capsys):
    runs = [["homology", ws_file + ":BZ2", "--degree", "4"],
            ["map", ws_file + ":BZ2", ws_file + ":BS3", "--mode", "faithful"],
            ["orb", ws_file, "--family", "Z2,Z3", "--mode", "all",
             "--format", "machine"],
            ["validate", ws_file],
            ["tvc", "S3", "0,1,2,3,4,5", ws_file, "--mode", "faithful"]]
    for argv in runs:
        first = _run(capsys, argv)
        second = _run(capsys, argv)
        assert first == second


def test_missing_file_and_ambiguous_refs(tmp_path, capsys):
    code, out = _run(capsys, ["validate", str(tmp_path / "nope.ws")])
    assert code == 1
    assert out.startswith("error: ParseError: parse error at 0: cannot read")
    path = tmp_path / "two.ws"
    path.write_text(io.entity_text("groupoid", "A", core.unit_groupoid(1))
                    + io.entity_text("groupoid", "B", core.unit_groupoid(1)))
    code, out = _run(capsys, ["homology", str(path), "--degree", "2"])
    assert code == 1
    assert out.startswith("error: UnknownEntity")


def test_comments_and_blank_lines_are_ignored(tmp_path):
    path = tmp_path / "c.ws"
    path.write_text("# leading comment\n\ngroup G # trailing\nmul 0 1 / 1 0\n"
                    "\nend\n")
    assert io.load_workspace([str(path)]).get("G", "group").n == 2


def test_descent_cover_must_hit_every_base_point(tmp_path):
    path = tmp_path / "d.ws"
    path.write_text(io.entity_text("groupoid", "V", core.delooping(Z2))
                    + "descent d\ncover 0 0 2\nvalue V\nend\n")
    with pytest.raises(ParseError):
        io.load_workspace([str(path)])
