import json
import os
import subprocess
import sys

from dcr.cli import main

from test_dot import parse_dot


def run_cli(*argv, capsys):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_doc(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


# validate

def test_validate_fixture_ok(g1_path, capsys):
    code, out, _ = run_cli("validate", str(g1_path), capsys=capsys)
    assert code == 0
    assert "ok:" in out


def test_validate_conflicting_pair_fails(tmp_path, capsys):
    path = write_doc(
        tmp_path,
        "bad.json",
        {"events": ["a", "b"], "includes": [["a", "b"]], "excludes": [["a", "b"]]},
    )
    code, out, _ = run_cli("validate", path, capsys=capsys)
    assert code == 1
    assert "include-exclude-conflict" in out
    assert len([l for l in out.splitlines() if l.startswith("error")]) == 1


def test_validate_malformed_json_exits_2_with_line(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "events": [,]\n}', encoding="utf-8")
    code, _, err = run_cli("validate", str(path), capsys=capsys)
    assert code == 2
    assert "line 2" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run_cli("validate", "no-such-file.json", capsys=capsys)
    assert code == 2
    assert err


# enabled

def test_enabled_initially_lists_prescribe(g1_path, capsys):
    code, out, _ = run_cli("enabled", str(g1_path), capsys=capsys)
    assert code == 0
    assert out.splitlines() == ["pm\tprescribe medicine"]


def test_enabled_for_ann_is_empty(g1_path, capsys):
    code, out, _ = run_cli("enabled", str(g1_path), "--principal", "Ann", capsys=capsys)
    assert code == 0
    assert out == ""


def test_enabled_unknown_principal_fails(g1_path, capsys):
    code, _, err = run_cli("enabled", str(g1_path), "--principal", "Bob", capsys=capsys)
    assert code == 1
    assert "Bob" in err


def test_enabled_verbose_lists_blocking_sets(g1_path, capsys):
    code, out, _ = run_cli("enabled", str(g1_path), "--verbose", capsys=capsys)
    assert code == 0
    assert out.splitlines() == [
        "pm\tprescribe medicine",
        "s\tsign\tblocked by {pm}",
        "gm\tgive medicine\tblocked by {s}",
    ]


# exec and check-run

def test_exec_distrust_narrative(g2_path, capsys):
    code, out, _ = run_cli("exec", str(g2_path), "pm", "s", "dt", "s", "gm", capsys=capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "ACCEPTING"
    marking_lines = [l for l in lines if "\t" in l]
    assert len(marking_lines) == 6
    assert marking_lines[3].endswith("included={dt,pm,s}")  # gm excluded after dt


def test_exec_blocked_step_reports_index(g1_path, capsys):
    code, _, err = run_cli("exec", str(g1_path), "s", capsys=capsys)
    assert code == 1
    assert "step 0" in err


def test_exec_rejects_outstanding_obligations(g1_path, capsys):
    code, out, _ = run_cli("exec", str(g1_path), "pm", capsys=capsys)
    assert code == 1
    assert out.splitlines()[-1] == "NOT-ACCEPTING"


def test_exec_with_principal_tokens(g2_path, capsys):
    code, out, _ = run_cli(
        "exec", str(g2_path), "Peter:pm", "Peter:s", "Ann:gm", capsys=capsys
    )
    assert code == 0
    assert out.splitlines()[-1] == "ACCEPTING"


def test_exec_unauthorized_principal_token(g2_path, capsys):
    code, _, err = run_cli("exec", str(g2_path), "Ann:pm", capsys=capsys)
    assert code == 1
    assert "Ann" in err


def test_check_run_lasso_accepting(g1_path, capsys):
    code, out, _ = run_cli(
        "check-run", str(g1_path), "--run", "pm,s", "--loop", "gm", capsys=capsys
    )
    assert code == 0
    assert out.splitlines()[-1] == "ACCEPTING"


def test_check_run_lasso_starving(g1_path, capsys):
    code, out, _ = run_cli(
        "check-run", str(g1_path), "--run", "pm,s", "--loop", "pm", capsys=capsys
    )
    assert code == 1
    assert out.splitlines()[-1] == "NOT-ACCEPTING"


def test_check_run_finite(g1_path, capsys):
    code, out, _ = run_cli("check-run", str(g1_path), "--run", "pm,s,gm", capsys=capsys)
    assert code == 0
    assert out.splitlines()[-1] == "ACCEPTING"


# explore and buchi

def test_explore_counts_match_snapshot(g1_path, capsys):
    code, out, _ = run_cli("explore", str(g1_path), capsys=capsys)
    assert code == 0
    assert "states: 8" in out
    assert "transitions: 21" in out
    assert "accepting: 2" in out
    assert "truncated: no" in out


def test_explore_empty_graph(tmp_path, capsys):
    path = write_doc(tmp_path, "empty.json", {"events": []})
    code, out, _ = run_cli("explore", path, capsys=capsys)
    assert code == 0
    assert "states: 1" in out
    assert "transitions: 0" in out


def test_explore_strict_truncation(g2_path, capsys):
    code, out, _ = run_cli(
        "explore", str(g2_path), "--max-states", "2", "--strict", capsys=capsys
    )
    assert code == 1
    assert "truncated: yes" in out
    code, _, _ = run_cli("explore", str(g2_path), "--max-states", "2", capsys=capsys)
    assert code == 0


def test_explore_writes_dot(g1_path, tmp_path, capsys):
    out_path = tmp_path / "lts.dot"
    code, _, _ = run_cli("explore", str(g1_path), "--dot", str(out_path), capsys=capsys)
    assert code == 0
    parse_dot(out_path.read_text(encoding="utf-8"))


def test_buchi_counts_and_dot(g1_path, tmp_path, capsys):
    out_path = tmp_path / "buchi.dot"
    code, out, _ = run_cli(
        "buchi",
        str(g1_path),
        "--rank",
        "s,gm,pm",
        "--dot",
        str(out_path),
        "--stratified",
        capsys=capsys,
    )
    assert code == 0
    assert "states:" in out and "accepting:" in out and "silent:" in out
    text = out_path.read_text(encoding="utf-8")
    assert "subgraph cluster_1" in text


def test_buchi_bad_rank_fails(g1_path, capsys):
    code, _, err = run_cli("buchi", str(g1_path), "--rank", "s,gm", capsys=capsys)
    assert code == 1
    assert "permutation" in err


def test_buchi_on_plain_graph(tmp_path, capsys):
    path = write_doc(tmp_path, "plain.json", {"events": ["a"], "responses": [["a", "a"]]})
    code, out, _ = run_cli("buchi", path, capsys=capsys)
    assert code == 0
    assert "states:" in out


# determinism across interpreter hash seeds

def test_stdout_is_byte_identical_across_hash_seeds(g2_path, tmp_path):
    def run(seed):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        result = subprocess.run(
            [sys.executable, "-m", "dcr.cli", "explore", str(g2_path), "--dot",
             str(tmp_path / f"out-{seed}.dot")],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        return result.stdout + (tmp_path / f"out-{seed}.dot").read_text(encoding="utf-8")

    first, second = run("0"), run("4242")
    assert first == second

    def run_exec(seed):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        return subprocess.run(
            [sys.executable, "-m", "dcr.cli", "exec", str(g2_path), "pm", "s", "dt"],
            capture_output=True,
            text=True,
            env=env,
        ).stdout

    assert run_exec("1") == run_exec("99")
