"""The command-line interface: flows, exit codes, deterministic output."""

from __future__ import annotations

import json


from contractmatch.cli import main
from contractmatch.corpus import fixture_path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def test_validate_coherent_fixture(capsys):
    code, out, _ = run_cli(capsys, "validate", str(fixture_path("marriage_2x2")))
    assert code == 0
    assert "valid" in out
    assert "side1/m1: coherent" in out


def test_validate_flags_incoherent_side(capsys):
    code, out, _ = run_cli(
        capsys, "validate", str(fixture_path("no_stable_agreement"))
    )
    assert code == 1
    assert "NOT coherent" in out
    assert "substitutes" in out
    # The witness names both menus of the counterexample.
    assert "{a, b}" in out and "{b}" in out


def test_validate_json_payload(capsys):
    code, out, _ = run_cli(
        capsys, "validate", str(fixture_path("no_stable_agreement")), "--json"
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False
    assert payload["side1"]["coherent"] is False
    assert payload["side1"]["substitutes"]
    assert payload["side2"]["coherent"] is True


def test_validate_checks_market_sections(capsys):
    code, out, _ = run_cli(
        capsys, "validate", str(fixture_path("market_price_gap"))
    )
    assert code == 1
    assert "no-shortage FAILED" in out


def test_validate_conforming_economy(capsys):
    code, out, _ = run_cli(capsys, "validate", str(fixture_path("economy_small")))
    assert code == 0
    assert "no-shortage ok" in out and "money-monotone ok" in out


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def test_solve_stable_default_proposer(capsys):
    code, out, _ = run_cli(capsys, "solve", str(fixture_path("marriage_2x2")))
    assert code == 0
    assert "chosen: {m1_w1, m2_w2}" in out
    assert "stable: yes" in out


def test_solve_trace_and_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "solve",
        str(fixture_path("no_stable_agreement")),
        "--trace",
        "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["chosen"] == []
    assert payload["iterations"] == 2
    assert payload["agreement"] is True
    assert payload["stable"] is False
    assert payload["blocking_contract"] == "a"
    assert payload["trace"] == [
        {"step": 0, "pool": ["a", "b"], "offer": ["a", "b"], "accepted": ["b"]},
        {"step": 1, "pool": ["b"], "offer": [], "accepted": []},
    ]


def test_solve_require_stable_exit(capsys):
    code, _, _ = run_cli(
        capsys,
        "solve",
        str(fixture_path("no_stable_agreement")),
        "--require-stable",
    )
    assert code == 1


def test_solve_proposer_two(capsys):
    code, out, _ = run_cli(
        capsys, "solve", str(fixture_path("marriage_3x3")), "--proposer", "2"
    )
    assert code == 0
    assert "chosen: {m1_w3, m2_w1, m3_w2}" in out


# ---------------------------------------------------------------------------
# lattice / oracle
# ---------------------------------------------------------------------------


def test_lattice_verifies_against_brute_force(capsys):
    code, out, _ = run_cli(capsys, "lattice", str(fixture_path("marriage_3x3")))
    assert code == 0
    assert "3 stable agreement(s)" in out
    assert "meet/join verified against brute force on 6 pair(s)" in out


def test_lattice_json_structure(capsys):
    code, out, _ = run_cli(
        capsys, "lattice", str(fixture_path("marriage_3x3")), "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 3
    assert payload["verified"] is True
    assert len(payload["meet"]) == 6 and len(payload["join"]) == 6


def test_oracle_catalog_json(capsys):
    code, out, _ = run_cli(
        capsys, "oracle", str(fixture_path("no_stable_agreement")), "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload == {"below": [], "count": 0, "stable_agreements": []}


def test_oracle_human_output(capsys):
    code, out, _ = run_cli(capsys, "oracle", str(fixture_path("marriage_3x3")))
    assert code == 0
    assert "3 stable agreement(s)" in out
    assert "is below" in out


# ---------------------------------------------------------------------------
# market
# ---------------------------------------------------------------------------


def test_market_all_checks_pass(capsys):
    code, out, _ = run_cli(capsys, "market", str(fixture_path("economy_small")))
    assert code == 0
    assert "no-shortage: ok" in out
    assert "money-monotone: ok" in out
    assert "two-prices" in out


def test_market_gap_fixture_advisory(capsys):
    code, out, _ = run_cli(
        capsys, "market", str(fixture_path("market_price_gap"))
    )
    assert code == 1  # premises fail
    assert "no-shortage: FAILED" in out
    assert "gap (advisory)" in out


def test_market_single_check(capsys):
    code, out, _ = run_cli(
        capsys,
        "market",
        str(fixture_path("market_price_gap")),
        "--check",
        "money",
    )
    assert code == 0
    assert "money-monotone: ok" in out
    assert "no-shortage" not in out


def test_market_requires_market_section(capsys):
    code, _, err = run_cli(capsys, "market", str(fixture_path("marriage_2x2")))
    assert code == 2
    assert "no market section" in err


def test_market_json(capsys):
    code, out, _ = run_cli(
        capsys, "market", str(fixture_path("market_price_gap")), "--json"
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False
    assert payload["two_prices"]["advisory"] is True


# ---------------------------------------------------------------------------
# query
# ---------------------------------------------------------------------------


def test_query_prefers(capsys):
    code, out, _ = run_cli(
        capsys,
        "query",
        str(fixture_path("marriage_3x3")),
        "--op",
        "prefers",
        "--side",
        "1",
        "-A",
        "m1_w1",
        "-B",
        "m1_w2",
    )
    assert code == 0
    assert "at least as good as" in out and ": yes" in out


def test_query_closure_json(capsys):
    code, out, _ = run_cli(
        capsys,
        "query",
        str(fixture_path("no_stable_agreement")),
        "--op",
        "closure",
        "--side",
        "2",
        "-A",
        "b",
        "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == ["a", "b"]
    assert payload["coherence"] == "checked"  # f2 is coherent and small


def test_query_indifferent(capsys):
    code, out, _ = run_cli(
        capsys,
        "query",
        str(fixture_path("no_stable_agreement")),
        "--op",
        "indifferent",
        "--side",
        "2",
        "-A",
        "a,b",
        "-B",
        "b",
    )
    assert code == 0
    assert "equivalent" in out and ": yes" in out
    # f2 is coherent, so no caveat is printed.
    assert "note:" not in out


def test_query_uncoherent_side_carries_note(capsys):
    code, out, _ = run_cli(
        capsys,
        "query",
        str(fixture_path("no_stable_agreement")),
        "--op",
        "prefers",
        "--side",
        "1",
        "-A",
        "a",
        "-B",
        "b",
    )
    assert code == 0
    assert "note: coherence not verified" in out


def test_query_needs_b_for_prefers(capsys):
    code, _, err = run_cli(
        capsys,
        "query",
        str(fixture_path("no_stable_agreement")),
        "--op",
        "prefers",
        "-A",
        "a",
    )
    assert code == 2
    assert "-B" in err


def test_query_unknown_name(capsys):
    code, _, err = run_cli(
        capsys,
        "query",
        str(fixture_path("no_stable_agreement")),
        "--op",
        "closure",
        "-A",
        "zz",
    )
    assert code == 2
    assert "unknown contract" in err


# ---------------------------------------------------------------------------
# exit codes and determinism
# ---------------------------------------------------------------------------


def test_exit_2_on_bad_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, _, err = run_cli(capsys, "validate", str(bad))
    assert code == 2
    assert "not valid JSON" in err


def test_exit_2_on_missing_file(capsys):
    code, _, err = run_cli(capsys, "solve", "/nonexistent/file.json")
    assert code == 2
    assert "error" in err


def test_exit_3_on_oversized_exhaustive_check(tmp_path, capsys):
    doc = {
        "schema_version": 1,
        "contracts": [f"x{i}" for i in range(13)],
        "choice": {
            "side1": {"variant": "identity"},
            "side2": {"variant": "identity"},
        },
    }
    path = tmp_path / "big.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "validate", str(path))
    assert code == 3
    assert "refused" in err


def test_json_output_is_byte_deterministic(capsys):
    outputs = []
    for _ in range(2):
        code, out, _ = run_cli(
            capsys, "lattice", str(fixture_path("marriage_3x3")), "--json"
        )
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]
    # Canonical form: keys sorted, two-space indent, trailing newline.
    assert outputs[0] == json.dumps(json.loads(outputs[0]), indent=2, sort_keys=True) + "\n"
