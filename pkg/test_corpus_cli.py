#!/usr/bin/env python3
"""
Tests for poset files, the built-in corpus, the oracles and the command line
"""

import io
import json
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import numpy as np
import pytest

from corpus import (
    CorpusError,
    corpus_file,
    corpus_member,
    list_members,
    load_poset_file,
    parse_poset_file,
    random_facets,
    random_simplicial_poset,
)
from linalg_exact import Field
from oracles import closure, link_oracle, link_reduced_cohomology, run_oracles
from poset_core import NonBooleanInterval, from_facets, is_meet_semilattice
from posetring import EXIT_INVALID_INPUT, EXIT_OK, run
from testing_support import main

QQ = Field.rationals()
GF2 = Field.gf(2)


def run_cli_with_errors(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


def run_cli(*argv):
    code, out, _ = run_cli_with_errors(*argv)
    return code, out


# ============================================================================
# FILES AND CORPUS
# ============================================================================

def test_corpus_members_parse():
    assert "digon" in list_members()
    for name in list_members():
        data = corpus_file(name)
        assert data["name"] == name
        assert parse_poset_file(json.loads(json.dumps(data))).size > 0


def test_parametric_members():
    assert corpus_member("boolean(0)").size == 1
    assert corpus_member("simplex_boundary(2)").d == 2
    assert corpus_member("cone(rp2_six_vertex)").d == 4
    for bad in ("boolean(-1)", "boolean(x)", "klein_bottle", "cone()"):
        with pytest.raises(CorpusError):
            corpus_file(bad)


def test_schema_errors():
    with pytest.raises(CorpusError):
        parse_poset_file({"facets": [[1]], "hasse": []})
    with pytest.raises(CorpusError):
        parse_poset_file({"facets": [[]]})
    with pytest.raises(CorpusError):
        parse_poset_file({"hasse": [{"id": "{}", "covers": []}]})
    with pytest.raises(CorpusError):
        parse_poset_file({"hasse": [{"id": "a"}]})
    with pytest.raises(NonBooleanInterval):
        parse_poset_file({"hasse": [
            {"id": "a", "covers": []}, {"id": "b", "covers": []}, {"id": "c", "covers": []},
            {"id": "t", "covers": ["a", "b", "c"]},
        ]})


def test_load_poset_file():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "digon.json"
        path.write_text(json.dumps(corpus_file("digon")))
        P, data = load_poset_file(str(path))
        assert P.size == 5 and data["name"] == "digon"
        bad = Path(tmp) / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(CorpusError):
            load_poset_file(str(bad))
        with pytest.raises(CorpusError):
            load_poset_file(str(Path(tmp) / "missing.json"))


def test_random_posets_are_reproducible():
    for seed in range(20):
        data = random_simplicial_poset(seed)
        assert data == random_simplicial_poset(seed), f"seed {seed}"
        P = parse_poset_file(data)
        if "facets" in data:
            assert is_meet_semilattice(P), f"seed {seed}"
    doubled = [s for s in range(40) if "hasse" in random_simplicial_poset(s)]
    assert any(not is_meet_semilattice(parse_poset_file(random_simplicial_poset(s))) for s in doubled)


# ============================================================================
# ORACLES
# ============================================================================

def test_link_of_hollow_triangle():
    faces = closure([[1, 2], [1, 3], [2, 3]])
    assert link_reduced_cohomology(faces, frozenset(), QQ) == {-1: 0, 0: 0, 1: 1}
    assert link_reduced_cohomology(faces, frozenset({1}), QQ) == {-1: 0, 0: 1}
    assert link_reduced_cohomology(faces, frozenset({1, 2}), QQ) == {-1: 1}


def test_link_oracle_on_random_complexes():
    rng = np.random.default_rng(7)
    for trial in range(25):
        P = from_facets(random_facets(rng))
        for field in (QQ, GF2):
            assert link_oracle(P, field), f"trial {trial} over {field} (seed 7)"


def test_link_oracle_on_projective_plane():
    P = corpus_member("rp2_six_vertex")
    assert link_oracle(P, GF2)
    assert link_oracle(P, QQ)


def test_run_oracles_small_members():
    for name in ("boolean(1)", "digon"):
        report = run_oracles(corpus_member(name), QQ, seed=5)
        assert report.passed, f"{name}: {report.failures()}"
        assert "link_cohomology" in report.checks or name == "digon"


# ============================================================================
# COMMAND LINE
# ============================================================================

def test_cli_classify():
    code, out = run_cli("classify", "corpus:digon")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["cm"] and report["gorenstein_star"]
    assert report["h_vector"] == [1, 0, 1]

    code, out = run_cli("classify", "corpus:rp2_six_vertex", "--field", "gf:2")
    assert code == EXIT_OK
    assert json.loads(out)["max_serre_r"] == "2"


def test_cli_report_and_validate():
    code, out = run_cli("report", "corpus:digon")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["reduced_cohomology_X"] == [0, 1]
    assert {"element": "{}", "degree": 2, "dim": 1} in report["local_cohomology"]

    code, out = run_cli("validate", "corpus:glued_simplices(2)")
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["incidence_ok"]
    assert not summary["boolean"] and not summary["simplicial_complex"]
    summary = json.loads(run_cli("validate", "corpus:boolean(2)")[1])
    assert summary["boolean"] and summary["simplicial_complex"]


def test_cli_report_is_reproducible():
    first = run_cli("report", "corpus:rp2_six_vertex", "--field", "gf:2")
    second = run_cli("report", "corpus:rp2_six_vertex", "--field", "gf:2")
    assert first[0] == EXIT_OK
    assert first == second


def test_cli_rejection_is_structured():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "claw.json"
        path.write_text(json.dumps({"hasse": [
            {"id": "a", "covers": []}, {"id": "b", "covers": []}, {"id": "c", "covers": []},
            {"id": "t", "covers": ["a", "b", "c"]},
        ]}))
        code, out, err = run_cli_with_errors("validate", str(path))
        assert code == EXIT_INVALID_INPUT and out == ""
        diagnostic = json.loads(err.strip().splitlines()[-1])
        assert diagnostic["error"] == "NonBooleanInterval"
        assert diagnostic["element"] == "t"
        assert diagnostic["witness"] == {"interval_size": 5, "atoms": [1, 2, 3]}

        path.write_text(json.dumps({"hasse": [
            {"id": "a", "covers": ["b"]}, {"id": "b", "covers": ["a"]},
        ]}))
        code, _, err = run_cli_with_errors("validate", str(path))
        assert code == EXIT_INVALID_INPUT
        diagnostic = json.loads(err.strip().splitlines()[-1])
        assert diagnostic["error"] == "NotAPoset"
        assert diagnostic["element"] == "a" and diagnostic["witness"] == ["a", "b"]


def test_cli_corpus_and_random():
    code, out = run_cli("corpus", "list")
    assert code == EXIT_OK and "digon" in json.loads(out)
    code, out = run_cli("corpus", "emit", "boolean(2)")
    assert code == EXIT_OK and json.loads(out)["facets"] == [[1, 2]]
    code, out = run_cli("random", "12")
    assert code == EXIT_OK and json.loads(out) == random_simplicial_poset(12)


def test_cli_oracle():
    code, out = run_cli("oracle", "corpus:boolean(1)", "--seed", "3")
    assert code == EXIT_OK
    assert json.loads(out)["passed"]


def test_cli_invalid_input():
    assert run_cli()[0] == EXIT_INVALID_INPUT
    assert run_cli("classify", "corpus:nope")[0] == EXIT_INVALID_INPUT
    assert run_cli("classify", "corpus:digon", "--field", "gf:4")[0] == EXIT_INVALID_INPUT
    assert run_cli("classify", "/nonexistent/poset.json")[0] == EXIT_INVALID_INPUT
    assert run_cli("random", "abc")[0] == EXIT_INVALID_INPUT
    assert run_cli("frobnicate", "x")[0] == EXIT_INVALID_INPUT


if __name__ == "__main__":
    main("CORPUS, ORACLE AND CLI TESTS", globals())
