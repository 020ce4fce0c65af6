import dataclasses
import json
import re
from collections import Counter
from fractions import Fraction

import pytest

from smallcuts import cli
from smallcuts.certify import verify_basic
from smallcuts.construction import build_incidence_matrix, build_instance
from smallcuts.cuts import enumerate_bruteforce
from smallcuts.formats import (
    dump_json,
    frac_str,
    instance_from_doc,
    instance_to_doc,
    parse_frac,
    write_dot_capgraph,
    write_dot_links,
    write_lp,
)

# --- tiny independent parsers used as oracles -------------------------------

DOT_EDGE = re.compile(r'^\s*v(\d+) -- v(\d+) \[([^\]]*)\];$')
DOT_NODE = re.compile(r"^\s*v(\d+);$")
DOT_ATTR = re.compile(r"^\s*\w+=\S+;$|^\s*node \[[^\]]*\];$")
LP_CONSTRAINT = re.compile(r"^(\w+): ([x_\d +]+) >= 1;$")


def check_dot_syntax(text: str) -> tuple[int, int, list[dict]]:
    """Validates the narrow DOT dialect we emit; returns (nodes, edges, attrs)."""
    lines = text.strip().splitlines()
    assert lines[0].startswith("graph ") and lines[0].endswith("{")
    assert lines[-1] == "}"
    nodes = 0
    edges = []
    for line in lines[1:-1]:
        if DOT_NODE.match(line):
            nodes += 1
            continue
        m = DOT_EDGE.match(line)
        if m:
            attrs = {}
            for part in m.group(3).split(", "):
                key, val = part.split("=")
                attrs[key] = val.strip('"')
            edges.append({"lo": int(m.group(1)), "hi": int(m.group(2)), **attrs})
            continue
        assert DOT_ATTR.match(line), f"unexpected DOT line: {line!r}"
    return nodes, len(edges), edges


def parse_lp(text: str):
    """Constraint rows (name, 0/1 coefficient vector) plus variable count."""
    lines = [l for l in text.splitlines() if l and not l.startswith("/*")]
    obj = lines[0]
    assert obj.startswith("min: ") and obj.endswith(";")
    variables = obj[len("min: ") : -1].split(" + ")
    m = len(variables)
    assert variables == [f"x_{i}" for i in range(1, m + 1)]
    constraints = []
    bounds = []
    for line in lines[1:]:
        cm = LP_CONSTRAINT.match(line)
        if cm:
            row = [0] * m
            for term in cm.group(2).split(" + "):
                row[int(term.removeprefix("x_")) - 1] = 1
            constraints.append((cm.group(1), row))
            continue
        bm = re.match(r"^0 <= x_(\d+) <= 1;$", line)
        assert bm, f"unexpected LP line: {line!r}"
        bounds.append(int(bm.group(1)))
    assert bounds == list(range(1, m + 1))
    return constraints, m


# --- JSON documents ----------------------------------------------------------


class TestInstanceDoc:
    @pytest.mark.parametrize("k", (4, 6, 8, 10, 12))
    def test_round_trip(self, k):
        inst = build_instance(k)
        doc = json.loads(dump_json(instance_to_doc(inst)))
        assert instance_from_doc(doc) == inst

    def test_fields_k4(self):
        doc = instance_to_doc(build_instance(4))
        assert doc["schema_version"] == "1"
        assert (doc["k"], doc["n"], doc["m"], doc["lambda"]) == (4, 8, 10, 5)
        assert doc["xstar"] == ["1/4"] * 10
        assert doc["links"][4] == [5, 2, 4, 1]

    def test_rationals_never_floats(self):
        doc = instance_to_doc(build_instance(6))
        assert all(isinstance(s, str) and "/" in s for s in doc["xstar"])
        assert parse_frac(doc["xstar"][0]) == Fraction(1, 6)
        assert frac_str(Fraction(1, 6)) == "1/6"

    def test_unknown_schema_rejected(self):
        doc = instance_to_doc(build_instance(4))
        doc["schema_version"] = "99"
        with pytest.raises(ValueError, match="schema_version"):
            instance_from_doc(doc)

    def test_tampered_doc_rejected(self):
        doc = instance_to_doc(build_instance(4))
        doc["links"][0] = [1, 1, 3, 1]  # wrong target for source link of path 1
        with pytest.raises(ValueError):
            instance_from_doc(doc)


# --- LP export ---------------------------------------------------------------


class TestLpExport:
    def test_k4_named_constraints(self):
        text = write_lp(build_instance(4))
        assert "cut_N_1: x_1 + x_2 + x_3 + x_4 >= 1;" in text
        assert "cut_Q_1: x_1 + x_3 + x_5 + x_6 >= 1;" in text

    def test_k4_counts(self):
        constraints, m = parse_lp(write_lp(build_instance(4)))
        assert m == 10
        assert len(constraints) == 10

    @pytest.mark.parametrize("k", (4, 6))
    def test_reparsed_matrix_matches_incidence(self, k):
        inst = build_instance(k)
        constraints, m = parse_lp(write_lp(inst))
        names = [name for name, _ in constraints]
        expected_names = [f"cut_Q_{j}" for j in range(1, k)] + [
            f"cut_N_{i}" for i in range(1, inst.n)
        ]
        assert names == expected_names
        a = build_incidence_matrix(inst)
        assert [row for _, row in constraints] == a.to_rows()

    def test_byte_stable(self):
        assert write_lp(build_instance(4)) == write_lp(build_instance(4))


# --- DOT export ---------------------------------------------------------------


class TestDotExport:
    def test_capgraph_k4_labels(self):
        inst = build_instance(4)
        nodes, nedges, edges = check_dot_syntax(write_dot_capgraph(inst))
        assert nodes == 8
        assert nedges == 10
        assert Counter(e["label"] for e in edges) == Counter(
            ["2", "3", "1", "3", "1", "3", "2", "1", "1", "1"]
        )

    def test_links_k4_color_classes(self):
        inst = build_instance(4)
        nodes, nedges, edges = check_dot_syntax(write_dot_links(inst))
        assert nodes == 8
        assert nedges == 10
        sizes = sorted(Counter(e["color"] for e in edges).values())
        assert sizes == [1, 3, 3, 3]

    @pytest.mark.parametrize("k", (6, 8))
    def test_counts_scale(self, k):
        inst = build_instance(k)
        _, nedges, _ = check_dot_syntax(write_dot_capgraph(inst))
        assert nedges == len(inst.graph.edges)
        _, nlinks, edges = check_dot_syntax(write_dot_links(inst))
        assert nlinks == inst.m
        assert len({e["color"] for e in edges}) == k


# --- CLI ----------------------------------------------------------------------


class TestCli:
    def test_gen_json(self, tmp_path):
        out = tmp_path / "inst.json"
        assert cli.main(["gen", "-k", "4", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["n"] == 8 and doc["m"] == 10
        assert instance_from_doc(doc) == build_instance(4)

    def test_gen_dot_variants(self, tmp_path):
        for fmt in ("dot-capgraph", "dot-links"):
            out = tmp_path / f"{fmt}.dot"
            assert cli.main(["gen", "-k", "4", "--format", fmt, "--out", str(out)]) == 0
            check_dot_syntax(out.read_text())

    def test_export_lp(self, tmp_path):
        out = tmp_path / "cover.lp"
        assert cli.main(["export-lp", "-k", "4", "--out", str(out)]) == 0
        constraints, m = parse_lp(out.read_text())
        assert m == 10 and len(constraints) == 10

    def test_verify_brute_k4(self, tmp_path, capsys):
        out = tmp_path / "cert.json"
        code = cli.main(["verify", "-k", "4", "--strategy", "brute", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["is_basic"] is True
        assert doc["max_coordinate"] == "1/4"
        assert doc["rank_A"] == 10
        assert doc["reduction_ok"] is True

    def test_verify_both_k6(self, tmp_path):
        out = tmp_path / "cert.json"
        code = cli.main(
            ["verify", "-k", "6", "--strategy", "both", "--trials", "2000",
             "--seed", "5", "--trace", "--out", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["family_size"] == 21
        assert doc["strategies_agree"] is True
        assert doc["probe"]["contained_in_family"] is True
        assert len(doc["traces"]) == 5
        assert all(len(t["final"]) == 3 for t in doc["traces"])

    def test_verify_flow_k8(self, tmp_path):
        out = tmp_path / "cert.json"
        code = cli.main(["verify", "-k", "8", "--strategy", "flow", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["family_size"] == 36
        assert doc["max_coordinate"] == "1/8"

    def test_odd_k_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "-k", "5"])
        assert exc.value.code == 2

    def test_too_small_k_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["gen", "-k", "2"])
        assert exc.value.code == 2

    def test_brute_guard_usage_error(self, capsys):
        assert cli.main(["verify", "-k", "8", "--strategy", "brute"]) == 2
        assert "enumerate_flow" in capsys.readouterr().err

    def test_reduce_text_k4(self, capsys):
        assert cli.main(["reduce", "-k", "4"]) == 0
        text = capsys.readouterr().out
        assert "split -N_3 +N_1 -> 2*{1,3}" in text
        assert "move -N_2 +N_1 -> {1,2}" in text
        assert "move -N_5 +N_4 -> {2,6}" in text
        assert "move -N_3 +N_2 -> {2,3}" in text

    def test_reduce_trace_json_k4(self, capsys):
        assert cli.main(["reduce", "-k", "4", "--trace"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert [t["halved"] for t in doc["traces"]] == [[1, 3], [2, 5], [6, 8]]
        assert [t["paths"] for t in doc["traces"]] == [[1, 3], [1, 2], [2, 3]]

    def test_reduce_k6_final_sizes(self, capsys):
        assert cli.main(["reduce", "-k", "6", "--trace"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["traces"]) == 5
        assert all(len(t["final"]) == 3 for t in doc["traces"])

    def test_certification_failure_exit(self, tmp_path, monkeypatch, capsys):
        # force a failing verdict to check the exit-code contract
        real_verify = cli.verify_basic

        def sabotaged(inst, family):
            xs = list(inst.xstar)
            xs[0] = Fraction(1, 2)
            return real_verify(dataclasses.replace(inst, xstar=tuple(xs)), family)

        monkeypatch.setattr(cli, "verify_basic", sabotaged)
        out = tmp_path / "cert.json"
        code = cli.main(["verify", "-k", "4", "--out", str(out)])
        assert code == 1
        assert "is_basic" in capsys.readouterr().err
        assert json.loads(out.read_text())["is_basic"] is False

    def test_unwritable_path(self, capsys):
        code = cli.main(["gen", "-k", "4", "--out", "/nonexistent-dir/x.json"])
        assert code == 1

    def test_verify_doc_written_before_exit_check(self, tmp_path):
        # even a passing run writes the document
        out = tmp_path / "c.json"
        cli.main(["verify", "-k", "4", "--out", str(out)])
        assert out.exists()


def test_verify_basic_with_mutated_family_fails_cli_style():
    inst = build_instance(4)
    family = enumerate_bruteforce(inst.graph)
    cert = verify_basic(inst, family)
    assert cert.family_exact and cert.is_basic
