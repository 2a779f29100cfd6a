"""Command-line front end: workspace loading, the cover expression
language, per-command output shapes, the JSON document schema, and exit
codes."""

from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from covercalc import FiniteGroup, GroupHom, fiber_product, same_group
from covercalc.cli import (
    Workspace,
    main,
    parse_cover,
    parse_group,
    parse_module,
    parse_workspace,
    run_command,
)
from covercalc.errors import UnknownReference, UsageError

INTRO = "examples/intro.grp"


@pytest.fixture(scope="module")
def ws():
    return parse_workspace([INTRO])


# ---------------------------------------------------------------------------
# workspace loading and built-in groups


def test_workspace_object_count(ws):
    assert ws.object_count() == 5
    assert set(ws.groups) == {"C2", "V4", "C4"}
    assert set(ws.homs) == {"eta0", "eta1"}


def test_file_groups_shadow_builtins(ws):
    # the file defines C4 itself; the workspace returns that object
    assert ws.group("C4") is ws.groups["C4"]


@pytest.mark.parametrize(
    "name,order",
    [
        ("1", 1),
        ("C6", 6),
        ("C11", 11),
        ("V4", 4),
        ("S3", 6),
        ("S4", 24),
        ("A4", 12),
        ("A5", 60),
        ("D4", 8),
        ("Q8", 8),
    ],
)
def test_builtin_groups(name, order):
    ws = Workspace()
    g = ws.group(name)
    assert g.order == order
    assert ws.group(name) is g  # cached


def test_unknown_group_name():
    ws = Workspace()
    with pytest.raises(UnknownReference):
        ws.group("H31")
    with pytest.raises(UsageError):
        ws.group("C0")


def test_unknown_hom_name(ws):
    with pytest.raises(UnknownReference):
        ws.hom("zeta")


def test_duplicate_hom_across_files(tmp_path):
    clash = tmp_path / "clash.grp"
    clash.write_text("hom eta0 : C4 -> C2\na -> t\n")
    with pytest.raises(UsageError):
        parse_workspace([INTRO, str(clash)])


# ---------------------------------------------------------------------------
# expression language


def test_parse_cover_named_hom(ws):
    cov = parse_cover(ws, "eta1")
    assert cov.source.order == 4 and cov.target.order == 2


def test_parse_cover_fprod(ws):
    cov = parse_cover(ws, "fprod(eta0,eta1)")
    assert cov.source.order == 8 and cov.target.order == 2


def test_parse_cover_nested_fprod(ws):
    cov = parse_cover(ws, "fprod(fprod(eta0,eta0),eta1)")
    assert cov.source.order == 16


def test_parse_cover_identity_and_terminal(ws):
    assert parse_cover(ws, "id(C2)").kernel().is_trivial()
    cov = parse_cover(ws, "S3->1")
    assert cov.source.order == 6 and cov.target.order == 1


def test_parse_cover_errors(ws):
    with pytest.raises(UsageError):
        parse_cover(ws, "eta1 junk")
    with pytest.raises(UsageError):
        parse_cover(ws, "fprod(")
    with pytest.raises(UnknownReference):
        parse_cover(ws, "zeta")
    with pytest.raises(UnknownReference):
        parse_cover(ws, "eta0->1")  # eta0 is a hom, not a group
    with pytest.raises(UsageError):
        parse_cover(ws, "fprod(eta0 eta1)")


def test_parse_group_and_module(ws):
    g = parse_group(ws, "C2")
    mod = parse_module(ws, g, "F2triv")
    assert mod.p == 2 and mod.dim == 1
    mod3 = parse_module(ws, g, "F3triv")
    assert mod3.p == 3
    ker = parse_module(ws, g, "ker(eta1)")
    assert ker.p == 2 and ker.dim == 1
    with pytest.raises(UsageError):
        parse_module(ws, parse_group(ws, "V4"), "ker(eta1)")
    with pytest.raises(UsageError):
        parse_module(ws, g, "F2")


# ---------------------------------------------------------------------------
# command output shapes


def test_cmd_fprod_lines(ws):
    lines, doc = run_command(ws, "fprod", ["eta1", "eta1"])
    assert lines[0] == "fiber product of 2 covers over C2"
    assert lines[1] == "carrier order: 8"
    assert "element orders: [1, 2, 2, 2, 4, 4, 4, 4]" in lines
    assert lines[-1] == "compact: false"
    assert doc["schema"] == 1 and doc["compact"] is False


def test_cmd_fprod_compactness_distinguishes(ws):
    _, doc01 = run_command(ws, "fprod", ["eta0", "eta1"])
    _, doc00 = run_command(ws, "fprod", ["eta0", "eta0"])
    assert doc01["compact"] is True
    assert doc00["compact"] is False


def test_cmd_check_square_cartesian(tmp_path):
    # the two coordinate projections of V4 form a cartesian square over
    # the trivial group, with the diagonal as a proper full subgroup
    other = tmp_path / "other.grp"
    other.write_text("hom eta0b : V4 -> C2\na -> 1\nb -> t\n")
    ws2 = parse_workspace([INTRO, str(other)])
    lines, doc = run_command(
        ws2, "check-square", ["eta0", "eta0b", "C2->1", "C2->1"]
    )
    assert lines[0] == "commutes: true"
    assert doc["cartesian"] is True
    assert doc["semi_cartesian"] is True
    assert doc["compact"] is False


def test_cmd_check_square_not_semi(ws):
    # the diagonal square of one projection: the universal map hits only
    # the diagonal of the order-8 fiber product
    lines, doc = run_command(
        ws, "check-square", ["id(V4)", "id(V4)", "eta0", "eta0"]
    )
    assert lines[0] == "commutes: true"
    assert doc["cartesian"] is False
    assert doc["semi_cartesian"] is False
    assert doc["compact"] is None
    assert "compact: n/a" in lines


def test_cmd_check_square_noncommuting(tmp_path):
    other = tmp_path / "other.grp"
    other.write_text("hom eta0b : V4 -> C2\na -> 1\nb -> t\n")
    ws2 = parse_workspace([INTRO, str(other)])
    lines, doc = run_command(
        ws2, "check-square", ["id(V4)", "id(V4)", "eta0", "eta0b"]
    )
    assert lines == ["commutes: false"]
    assert doc["commutes"] is False


@pytest.mark.parametrize(
    "group,dim_f",
    [("C2", 1), ("V4", 3), ("C3", 0)],
)
def test_cmd_h2(ws, group, dim_f):
    lines, doc = run_command(ws, "h2", [group, "F2triv"])
    assert f"dim_F = {dim_f}" in lines
    assert doc["dim_F"] == dim_f


def test_cmd_cocycle(ws):
    lines1, doc1 = run_command(ws, "cocycle", ["eta1"])
    assert "split: false" in lines1
    assert doc1["coordinates"] == [1]
    lines0, doc0 = run_command(ws, "cocycle", ["eta0"])
    assert "split: true" in lines0
    assert doc0["coordinates"] == [0]


def test_cmd_fundament(ws):
    lines, doc = run_command(ws, "fundament", ["C4->1"])
    assert "kernel size: 4" in lines
    assert "fundament kernel size: 2" in lines
    assert "already fundamental: false" in lines
    assert doc["fundament_kernel"] == [0, 2]


def test_cmd_series(ws):
    lines, doc = run_command(ws, "series", ["C4->1"])
    assert lines == ["[4, 2, 1]"]
    assert doc["sizes"] == [4, 2, 1]
    lines_s3, _ = run_command(ws, "series", ["S3->1"])
    assert lines_s3 == ["[6, 3, 1]"]


def test_cmd_invariants(ws):
    lines, doc = run_command(ws, "invariants", ["fprod(eta1,eta1)"])
    assert lines[0] == "base: C2"
    assert "non-abelian classes: 0" in lines
    assert "abelian classes: 1" in lines
    (ab,) = doc["ab_classes"]
    assert ab["mult"] == 1
    assert ab["supp"] == [[1]]
    assert doc["empty"] is False
    _, doc_id = run_command(ws, "invariants", ["id(C2)"])
    assert doc_id["empty"] is True


def test_cmd_dominates(ws):
    lines, _ = run_command(ws, "dominates", ["eta1", "fprod(eta0,eta1)"])
    assert lines[-1] == "true"
    lines2, _ = run_command(ws, "dominates", ["fprod(eta0,eta1)", "eta1"])
    assert lines2[-1] == "false"


def test_cmd_isomorphic(ws):
    lines, _ = run_command(
        ws, "isomorphic", ["fprod(eta1,eta1)", "fprod(eta0,eta1)"]
    )
    assert lines[-1] == "true"
    lines2, _ = run_command(ws, "isomorphic", ["eta0", "eta1"])
    assert lines2[-1] == "false"


def test_cmd_lift(ws):
    lines, _ = run_command(ws, "lift", ["C2->1", "eta1", "id(1)"])
    assert lines[-1] == "true"
    lines2, _ = run_command(ws, "lift", ["eta1", "id(C4)", "eta1"])
    assert lines2[-1] == "false"


def test_cmd_decompose(ws):
    lines, doc = run_command(ws, "decompose", ["fprod(eta0,eta1)"])
    assert lines[0] == "indecomposable factors: 2"
    assert lines[-1] == "isomorphism onto fiber product: true"
    assert len(doc["factors"]) == 2
    lines_id, _ = run_command(ws, "decompose", ["id(C2)"])
    assert lines_id[0] == "indecomposable factors: 0"
    lines_one, _ = run_command(ws, "decompose", ["eta1"])
    assert lines_one[0] == "indecomposable factors: 1"


def test_unknown_command(ws):
    with pytest.raises(UsageError):
        run_command(ws, "frobnicate", [])


def test_command_arity_errors(ws):
    for cmd, args in [
        ("fprod", []),
        ("check-square", ["eta0"]),
        ("h2", ["C2"]),
        ("cocycle", []),
        ("fundament", []),
        ("series", []),
        ("invariants", []),
        ("dominates", ["eta0"]),
        ("isomorphic", ["eta0"]),
        ("lift", ["eta0", "eta1"]),
        ("decompose", []),
    ]:
        with pytest.raises(UsageError):
            run_command(ws, cmd, args)


# ---------------------------------------------------------------------------
# JSON schema and round trips


def test_json_fprod_round_trip(ws, capsys):
    rc = main(["-f", INTRO, "--json", "fprod", "eta1", "eta1"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1
    carrier = FiniteGroup(np.array(doc["carrier"]["mul"]))
    assert carrier.order == doc["carrier"]["order"] == 8
    sm = doc["structure_map"]
    target = FiniteGroup(np.array(sm["target"]["mul"]))
    hom = GroupHom(carrier, target, np.array(sm["image"]))
    assert hom.is_surjective()
    # the rebuilt map matches a fresh construction up to nothing at all:
    # the document pins element numbering, so tables agree exactly
    direct = fiber_product(
        ws.hom("eta1").target, [ws.hom("eta1"), ws.hom("eta1")]
    )
    assert same_group(carrier, direct.carrier)
    assert np.array_equal(np.array(sm["image"]), direct.structure_map.image)
    assert sorted(doc["kernel"]) == [
        int(x) for x in direct.structure_map.kernel().elements
    ]


def test_json_series(capsys):
    rc = main(["--json", "series", "C4->1"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1
    assert doc["sizes"] == [4, 2, 1]
    assert len(doc["stage_covers"]) == 2
    stage = doc["stage_covers"][0]
    g = FiniteGroup(np.array(stage["source"]["mul"]))
    assert g.order == 2


def test_json_decision_result(capsys):
    rc = main(
        ["-f", INTRO, "--json", "isomorphic", "fprod(eta1,eta1)", "fprod(eta0,eta1)"]
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"schema": 1, "command": "isomorphic", "result": True}


# ---------------------------------------------------------------------------
# main(): exit codes and the error channel


def test_main_success_plain(capsys):
    rc = main(["series", "C4->1"])
    assert rc == 0
    out = capsys.readouterr()
    assert out.out.strip() == "[4, 2, 1]"
    assert out.err == ""


def test_main_unknown_command(capsys):
    rc = main(["frobnicate"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_main_unknown_reference(capsys):
    rc = main(["series", "zeta"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_main_missing_file(capsys):
    rc = main(["-f", "no/such/file.grp", "series", "C4->1"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_main_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.grp"
    bad.write_text("group X\ngen a = (1 2\n")
    rc = main(["-f", str(bad), "series", "X->1"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_main_duplicate_group(tmp_path, capsys):
    dup = tmp_path / "dup.grp"
    dup.write_text("group C2\ngen t = (1 2)\n")
    rc = main(["-f", INTRO, "-f", str(dup), "series", "C2->1"])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_main_noncommuting_square_still_succeeds(tmp_path, capsys):
    other = tmp_path / "other.grp"
    other.write_text("hom eta0b : V4 -> C2\na -> 1\nb -> t\n")
    rc = main(
        ["-f", INTRO, "-f", str(other), "check-square",
         "id(V4)", "id(V4)", "eta0", "eta0b"]
    )
    assert rc == 0
    assert capsys.readouterr().out.strip() == "commutes: false"


def test_main_max_order_cap(capsys):
    rc = main(["--max-order", "3", "series", "C4->1"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
    rc2 = main(["-f", INTRO, "--max-order", "7", "fprod", "eta1", "eta1"])
    assert rc2 == 1  # carrier would have order 8


def test_main_seed_accepted(capsys):
    rc = main(["--seed", "7", "series", "C2->1"])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "[2, 1]"


def test_console_script_runs():
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "covercalc",
            "-f",
            INTRO,
            "isomorphic",
            "fprod(eta1,eta1)",
            "fprod(eta0,eta1)",
        ],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "true"
