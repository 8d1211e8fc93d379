import subprocess
import sys

import pytest

from chromalab import cli
from chromalab import graph as G


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "chromalab", *args], capture_output=True,
                          text=True, cwd=cwd)


@pytest.fixture
def k5(tmp_path):
    path = tmp_path / "k5.col"
    path.write_text(G.format_dimacs(G.complete_graph(5)))
    return path


def test_sample_p0():
    out = run("sample", "--n", "5", "--p", "0", "--seed", "1")
    assert out.returncode == 0 and out.stdout == "p edge 5 0\n" and out.stderr == ""


def test_sample_round_trips():
    out = run("sample", "--n", "30", "--p", "0.4", "--seed", "9", "--trial", "2")
    g = G.parse_dimacs(out.stdout)
    assert g == G.sample_gnp(G.SampleSpec(30, 0.4, 9, 2))


def test_oracle_k5(k5):
    out = run("oracle", "--file", str(k5))
    assert out.returncode == 0 and out.stdout == "chi=5 alpha=1 matching=2\n"


def test_oracle_budget_is_domain_error(tmp_path):
    path = tmp_path / "big.col"
    path.write_text(G.format_dimacs(G.empty_graph(70)))
    out = run("oracle", "--file", str(path))
    assert out.returncode == 1 and "budget" in out.stderr and out.stdout == ""


def test_color_csv_and_explain(k5, capsys):
    assert cli.main(["color", "--file", str(k5), "--method", "degeneracy", "--explain"]) == 0
    captured = capsys.readouterr()
    assert captured.out == "vertex,color\n" + "".join(f"{v},{4 - v}\n" for v in range(5)) or \
        sorted(line.split(",")[1] for line in captured.out.splitlines()[1:]) == list("01234")
    assert "colors=5" in captured.err


@pytest.mark.parametrize("method", ["regime", "first-fit", "sparse-two-phase",
                                    "direct-degeneracy", "dense-two-phase"])
def test_color_methods_are_proper(method, capsys, tmp_path):
    out = tmp_path / "c.csv"
    p = {"direct-degeneracy": "0.01", "dense-two-phase": "0.8"}.get(method, "0.3")
    assert cli.main(["color", "--n", "60", "--p", p, "--seed", "3", "--method", method,
                     "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    g = G.sample_gnp(G.SampleSpec(60, float(p), 3))
    colours = {int(a): int(b) for a, b in (line.split(",") for line in out.read_text().splitlines()[1:])}
    assert all(colours[u] != colours[v] for u, v in g.edges())


def test_color_clique_partition_needs_r(capsys):
    assert cli.main(["color", "--n", "20", "--p", "0.9", "--method", "clique-partition"]) == 1
    assert cli.main(["color", "--n", "20", "--p", "0.9", "--method", "clique-partition",
                     "--r", "2"]) == 0


def test_dense_analyze_rows_reproduce(capsys):
    assert cli.main(["dense-analyze", "--n", "40", "--phi", "2", "--trials", "3", "--seed", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "seed,n,p,M,X1,X2,Y_components,chi_lower,chi_upper"
    assert len(lines) == 4
    seed, n, p, M, X1, X2, Yc, lo, hi = lines[1].split(",")
    g = G.sample_gnp(G.SampleSpec(int(n), float(p), int(seed)))
    from chromalab import dense

    assert int(M) == dense.max_matching(G.complement(g)) and int(X1) + int(X2) == int(M)
    assert int(lo) <= int(hi) == int(n) - int(M)


def test_experiment_config_rerun_identical(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("n = 80\nphi_grid = 1, 4\nstatistic = N_MINUS_M\ntrials = 6\nmaster_seed = 11\n")
    a = run("experiment", "--config", str(cfg), "--workers", "1")
    b = run("experiment", "--config", str(cfg), "--workers", "2")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout.startswith("grid_index,n,p,phi,statistic")


def test_experiment_flags_match_config(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("n = 50\np_grid = 0.1\nstatistic = CHI_UPPER_SPARSE\ntrials = 3\n")
    a = run("experiment", "--config", str(cfg))
    b = run("experiment", "--n", "50", "--p-grid", "0.1", "--statistic", "chi_upper_sparse",
            "--trials", "3")
    assert a.stdout == b.stdout != ""


def test_usage_and_domain_exit_codes(tmp_path):
    assert run("sample", "--n", "5", "--p", "0.5", "--seed", "1", "--bogus").returncode == 2
    assert run("sample", "--n", "5", "--p", "1e", "--seed", "1").returncode == 2
    assert run("nonsense").returncode == 2
    bad_p = run("sample", "--n", "5", "--p", "1.5", "--seed", "1")
    assert bad_p.returncode == 1 and "p must lie in" in bad_p.stderr and bad_p.stdout == ""
    mismatch = run("experiment", "--n", "50", "--p-grid", "0.9", "--statistic", "CHI_UPPER_SPARSE",
                   "--trials", "1")
    assert mismatch.returncode == 1 and "gamma" in mismatch.stderr
    window = run("typical-value", "--n", "100", "--r", "2", "--q-grid", "0.5", "--trials", "0")
    assert window.returncode == 1 and "window" in window.stderr
    missing = run("oracle", "--file", str(tmp_path / "none.col"))
    assert missing.returncode == 1


def test_version_names_backend():
    out = run("--version")
    assert out.returncode == 0
    from chromalab import __version__, kernels

    assert out.stdout.strip() == f"chromalab {__version__} ({kernels.BUILD_ID})"


def test_help_per_subcommand():
    for sub in ("sample", "color", "dense-analyze", "oracle", "experiment", "jump-profile",
                "typical-value"):
        out = run(sub, "--help")
        assert out.returncode == 0 and "usage:" in out.stdout


def test_typical_value_conjecture_and_jump_svg(tmp_path, capsys):
    assert cli.main(["typical-value", "--n", "500", "--r", "2", "--conjecture", "3", "--trials", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4 and lines[0].startswith("grid_index,n,r,q,p")
    svg = tmp_path / "j.svg"
    assert cli.main(["jump-profile", "--n", "60", "--phi-grid", "1,3", "--trials", "4",
                     "--svg", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")
    assert capsys.readouterr().out.startswith("grid_index,n,phi")
