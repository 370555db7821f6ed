import io
import json
import subprocess
import sys

import pytest

from orbitspace.cli import run

EXPECTED = {
    "a_rotation_order4": (0, "MANIFOLD"),
    "b_binary_icosahedral": (0, "HOMOLOGY_ONLY"),
    "c_minus_identity_r3": (1, "NOT_HOMOLOGY"),
    "d_torus2_with_conjugation": (0, "MANIFOLD"),
    "e_torus2_without_conjugation": (1, "NOT_HOMOLOGY"),
    "f_torus2_two_lines": (1, "NOT_MANIFOLD_HOMOLOGY_UNKNOWN"),
    "g_circle_weights_1_2": (3, "UNKNOWN"),
}


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_decide_exit_codes(name):
    code, text = call("decide", "--json", f"curated:{name}")
    exp_code, exp_verdict = EXPECTED[name]
    assert code == exp_code
    assert json.loads(text)["verdict"] == exp_verdict


def test_decide_text_output():
    code, text = call("decide", "curated:b_binary_icosahedral")
    assert code == 0
    assert text.startswith("verdict: HOMOLOGY_ONLY")
    assert "k = 1, V₀ = 0" in text
    code, text = call("decide", "curated:d_torus2_with_conjugation", "--sampling-count", "3")
    assert "condition_iv_sampled_only" in text


def test_analyze_line():
    code, text = call("analyze", "curated:d_torus2_with_conjugation")
    assert code == 0
    assert "2-stable: yes; components: 1; ‖P‖ = m + 2: yes" in text
    code, text = call("analyze", "--json", "curated:f_torus2_two_lines")
    data = json.loads(text)
    assert data["stable"]["1"] is False and data["norm"] == 2


def test_stab(tmp_path):
    p = tmp_path / "pt.json"
    p.write_text(json.dumps({"lines": [{"magnitude": 1}, {"magnitude": 1}, {"magnitude": 1}, {"magnitude": 1}]}))
    code, text = call("stab", "--json", "curated:d_torus2_with_conjugation", "--point", str(p))
    assert code == 0
    d = json.loads(text)
    # trivial torus kernel; the conjugation coset fixes the real point
    assert d["finite"] and d["order"] == 2
    assert sum(e["in_Omega"] for e in d["elements"]) == 2
    p.write_text(json.dumps({"lines": [{"magnitude": 1}, None, None, None]}))
    code, text = call("stab", "curated:d_torus2_with_conjugation", "--point", str(p))
    assert code == 0 and "infinite" in text


def test_verify_empty_suite():
    code, text = call("verify", "--seed", "1", "--count", "0")
    assert code == 0 and "empty suite" in text


def test_verify_small_suite():
    code, text = call("verify", "--json", "--seed", "2", "--count", "3")
    data = json.loads(text)
    assert code == 0 and data["passed"] and data["cases"]


def test_error_exit_codes(tmp_path):
    assert call("bogus")[0] == 64
    assert call()[0] == 64
    assert call("decide")[0] == 64
    assert call("decide", str(tmp_path / "missing.json"))[0] == 2
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert call("decide", str(empty))[0] == 2
    bad = tmp_path / "schema.json"
    bad.write_text(json.dumps({"schema": 1, "torus_rank": "x"}))
    assert call("decide", str(bad))[0] == 4
    inv = tmp_path / "invalid.json"
    inv.write_text(json.dumps({"schema": 1, "torus_rank": 1, "cyclotomic_order": 1, "weights": [[2], [4]]}))
    code, text = call("decide", "--json", str(inv))
    assert code == 5 and json.loads(text)["pointer"] == "/weights"
    assert call("decide", "--closure-bound", "10", "curated:b_binary_icosahedral")[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "orbitspace", "decide", "curated:c_minus_identity_r3"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "NOT_HOMOLOGY" in proc.stdout
