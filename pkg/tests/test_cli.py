import json
import subprocess
import sys

BASE = [sys.executable, "-m", "operahedra.cli"]


def run(*argv):
    return subprocess.run(
        BASE + list(argv), capture_output=True, text=True, check=False
    )


def out_json(result):
    return json.loads(result.stdout)


def test_gen_linear4_reports_f_vector():
    r = run("gen", "--linear", "4")
    assert r.returncode == 0
    data = out_json(r)
    assert data["f_vector"] == [5, 5, 1]
    assert data["shapes"]["pentagon"] == 1


def test_gen_corolla3():
    r = run("gen", "--corolla-children", "3")
    assert out_json(r)["f_vector"] == [6, 6, 1]


def test_gen_fixture_outgoingpoly():
    r = run("gen", "--fixture", "outgoingpoly")
    data = out_json(r)
    assert [data["vertices"], data["edges"], data["cells"]] == [16, 24, 9]


def test_gen_parse_error_is_exit_2():
    assert run("gen", "--tree", "/nonexistent.json").returncode == 2
    assert run("gen", "--linear", "3", "--corolla-children", "2").returncode == 2
    assert run("check", "coherence", "--expr", "k:", "--w1", "", "--w2", "").returncode == 2


def test_check_morse_linear5_certified():
    r = run("check", "morse", "--linear", "5")
    assert r.returncode == 0
    assert out_json(r)["certified"] is True


def test_check_morse_fixture_samples_counterexample():
    r = run(
        "check", "morse", "--fixture", "outgoingpoly", "--samples", "3", "--seed", "9"
    )
    assert r.returncode == 1
    data = out_json(r)
    assert data["all_counterexamples"] is True
    assert all(s["condition"] == "disconnected_link" for s in data["samples"])


def test_check_homology_fixture_and_control(tmp_path):
    r = run("check", "homology", "--fixture", "outgoingpoly")
    assert r.returncode == 0
    assert out_json(r)["betti"] == [1, 0, 0]
    cycle = {
        "schema": "v1",
        "vertices": 5,
        "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]],
        "cells": [],
    }
    path = tmp_path / "cycle.json"
    path.write_text(json.dumps(cycle))
    r = run("check", "homology", "--complex", str(path))
    assert r.returncode == 1
    assert out_json(r)["betti"][1] == 1


def test_check_confluence():
    r = run("check", "confluence", "--linear", "5", "--strategies", "10", "--seed", "3")
    assert r.returncode == 0
    data = out_json(r)
    assert data["all_joinable"] is True
    assert data["results"][0]["by_shape"] == {"pentagon": 6, "square": 3}


def test_coherence_witness_verify_round_trip(tmp_path):
    pent = tmp_path / "pent.json"
    cert = tmp_path / "cert.json"
    r = run("gen", "--linear", "4", "--complex-out", str(pent))
    assert r.returncode == 0
    r = run(
        "witness",
        "--expr",
        "(((k:1 o1 t:1) o1 m:1) o1 n:1)",
        "--w1",
        "beta@0.1.2 beta@0.1",
        "--w2",
        "beta@0.1 beta@0.1.2 beta@1.2",
        "--emit-cert",
        str(cert),
    )
    assert r.returncode == 0
    assert out_json(r)["equal"] is True
    r = run("check", "verify", "--complex", str(pent), "--cert", str(cert))
    assert r.returncode == 0

    # corrupt the certificate: verification must exit 3
    data = json.loads(cert.read_text())
    for move in data["moves"]:
        if move["op"] == "face":
            move["offset"] = (move["offset"] + 1) % 5
            break
    cert.write_text(json.dumps(data))
    r = run("check", "verify", "--complex", str(pent), "--cert", str(cert))
    assert r.returncode == 3


def test_check_coherence_maclane():
    r = run(
        "check",
        "coherence",
        "--maclane",
        "((ab)c)d",
        "--w1",
        "beta@0.1.2 beta@0.1",
        "--w2",
        "beta@0.1 beta@0.1.2 beta@1.2",
    )
    assert r.returncode == 0
    assert out_json(r)["equal"] is True


def test_geom_orient():
    r = run("geom", "orient", "--linear", "4", "--vec", "2,1,0")
    assert r.returncode == 0
    data = out_json(r)
    assert data["matches_rewrite_orientation"] is True
    assert data["morse_certified"] is True


def test_geom_orient_not_generic_exit_1():
    r = run("geom", "orient", "--linear", "4", "--vec", "1,1,1")
    assert r.returncode == 1


def test_normalize():
    r = run("normalize", "--expr", "((a:1 o1 b:1) o1 c:1)")
    assert out_json(r)["normal_form"] == "(a:1 o1 (b:1 o1 c:1))"
    r = run("normalize", "--maclane", "((ab)c)d")
    assert out_json(r)["normal_form"] == "(a:1 o1 (b:1 o1 (c:1 o1 d:1)))"


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("--report", str(a), "gen", "--linear", "5")
    run("--report", str(b), "gen", "--linear", "5")
    assert a.read_bytes() == b.read_bytes()

    c1, c2 = tmp_path / "c1.json", tmp_path / "c2.json"
    run("gen", "--linear", "5", "--complex-out", str(c1))
    run("gen", "--linear", "5", "--complex-out", str(c2))
    assert c1.read_bytes() == c2.read_bytes()


def test_check_morse_all_trees_with_jobs():
    r = run("check", "morse", "--all-trees", "4", "--jobs", "2")
    assert r.returncode == 0
    assert out_json(r)["all_certified"] is True
