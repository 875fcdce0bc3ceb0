import json
import subprocess
import sys

CLI = [sys.executable, "-m", "persinet.cli"]


def run(*args, env=None):
    return subprocess.run(CLI + list(args), capture_output=True, text=True,
                          env=env)


def test_classify_fig1():
    out = run("classify", "fig1_basic")
    assert out.returncode == 0
    assert "plain: yes" in out.stdout
    assert "dissymmetric_choice: no" in out.stdout
    assert "asymmetric_choice: yes" in out.stdout
    assert "safe: yes" in out.stdout


def test_classify_fig16():
    out = run("classify", "fig16_appendix")
    assert "dissymmetric_choice: yes" in out.stdout
    assert "dc_tilde: yes" in out.stdout
    assert "free_choice: no" in out.stdout


def test_rg_with_dot(tmp_path):
    dot = tmp_path / "g.dot"
    out = run("rg", "fig1_basic", "--dot", str(dot))
    assert out.returncode == 0
    assert "states: 8" in out.stdout and "edges: 10" in out.stdout
    assert dot.read_text().startswith("digraph")


def test_persistence():
    out = run("persistence", "fig1_basic")
    assert "persistent: no" in out.stdout and "M4" in out.stdout
    out = run("persistence", "fig5_acbc")
    assert "persistent: yes" in out.stdout


def test_seq_modes():
    out = run("seq", "fig1_basic", "--run", "c d a", "--persistence")
    assert "persistent: no" in out.stdout
    out = run("seq", "fig1_basic", "--run", "c a d", "--parikh")
    assert "a:1" in out.stdout and "b:0" in out.stdout
    out = run("seq", "fig1_basic", "--run", "c d a")
    assert "p4" in out.stdout


def test_equiv():
    out = run("equiv", "fig1_basic", "--a", "d c a", "--b", "c a d")
    assert "equivalent: yes" in out.stdout
    out = run("equiv", "fig12_spar", "--a", "a b c", "--b", "c b a")
    assert "equivalent: no" in out.stdout


def test_spe():
    out = run("spe", "fig10_fpe_not_spe", "--bound", "2")
    assert "refuted" in out.stdout and "y b" in out.stdout
    out = run("spe", "fig1_basic", "--bound", "8", "--parikh")
    assert "holds-up-to-bound" in out.stdout


def test_pattern():
    out = run("pattern", "fig1_basic", "--name", "nonpers")
    assert "embedding: found" in out.stdout and "1 -> M4" in out.stdout
    out = run("pattern", "fig1_basic", "--derive-nondc")
    assert "embedding found (constructed)" in out.stdout


def test_pattern_file(tmp_path):
    doc = tmp_path / "p.pat"
    doc.write_text("pattern twojump\nstate u\nstate v\nstate w\n"
                   "arc u a v\narc v a w\n")
    out = run("pattern", "fig1_basic", "--file", str(doc))
    assert out.returncode == 0


def test_fairness():
    out = run("fairness", "fig6_unfair", "--lasso", "y ; x a c",
              "--search-equivalent")
    assert "strongly_fair: no" in out.stdout
    assert "persistent: no" in out.stdout
    assert "none-within-bounds" in out.stdout


def test_pe_matrix():
    out = run("pe-matrix", "fig14_counterexample")
    assert out.returncode == 0
    assert "SPE:  holds-up-to-bound" in out.stdout
    assert "FPE:  refuted-within-bounds" in out.stdout


def test_pe_matrix_probes_file(tmp_path):
    probes = tmp_path / "probes.txt"
    probes.write_text("y ; x a c\n")
    out = run("pe-matrix", "fig6_unfair", "--probes", str(probes))
    assert out.returncode == 0
    assert "JPE:  refuted-within-bounds" in out.stdout


def test_pattern_on_lts_file(tmp_path):
    from persinet import corpus_load

    doc = tmp_path / "ts.lts"
    doc.write_text(corpus_load("fig2_confuse").lts_text)
    out = run("pattern", str(doc), "--name", "nonpers")
    assert out.returncode == 0
    assert "embedding: found" in out.stdout
    assert "not persistent" in out.stdout


def test_verify_corpus_subset():
    out = run("verify-corpus", "fig5_acbc", "fig12_spar")
    assert out.returncode == 0
    assert "FAIL" not in out.stdout


def test_explore(tmp_path):
    out = run("explore", "--theorem", "CF-persistent", "--seeds", "0..9")
    assert out.returncode == 0
    assert "violations: 0" in out.stdout
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"places": 3, "transitions": 3,
                               "class_constraint": ["CF"], "seed": 0}))
    out = run("explore", "--theorem", "CF-persistent", "--seeds", "0..4",
              "--config", str(cfg))
    assert out.returncode == 0


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("net x\nplace p\nplace p\n")
    assert run("classify", str(bad)).returncode == 2
    assert run("classify", "not_a_thing").returncode == 2
    assert run("seq", "fig1_basic", "--run", "a").returncode == 2
    out = run("persistence", "fig1_basic")
    assert out.returncode == 0


def test_resource_exit_code(monkeypatch):
    import os

    env = dict(os.environ, PERSINET_MAX_STATES="3")
    out = run("persistence", "fig1_basic", env=env)
    assert out.returncode == 3


def test_dump_is_versioned(tmp_path):
    dump = tmp_path / "r.json"
    out = run("classify", "fig1_basic", "--dump", str(dump))
    assert out.returncode == 0
    doc = json.loads(dump.read_text())
    assert doc["format"] == "persinet-report" and doc["version"] == 1
    assert doc["report"]["classify"]["plain"] is True
