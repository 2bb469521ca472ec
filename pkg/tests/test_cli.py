import json
import subprocess
import sys

import pytest

from hyperturan.cli import main
from hyperturan.core import loads
from hyperturan.formulas import p3_size


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_writes_edge_list(tmp_path, capsys):
    out = tmp_path / "p8.u3"
    code, _, _ = run_cli(["gen", "--spec", "p3:n=8", "-o", str(out)], capsys)
    assert code == 0
    h = loads(out.read_text())
    assert len(h.edges) == p3_size(8) == 48


def test_count_fano_in_complete_host(tmp_path, capsys):
    import hyperturan as ht

    host = tmp_path / "k7.u3"
    host.write_text(ht.dumps(ht.complete(7)))
    code, out, _ = run_cli(["count", "--pattern", "fano", "--input", str(host)], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["total_copies"] == 30
    assert payload["millis"] == 0
    assert list(payload) == ["pattern", "n", "m", "total_copies", "nodes", "millis"]


def test_count_per_edge_sums(tmp_path, capsys):
    code, out, _ = run_cli(
        ["count", "--pattern", "fano", "--spec", "p3:n=8+zero2:q=2", "--per-edge"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["total_copies"] == 60
    assert sum(payload["per_edge"].values()) == 7 * 60


def test_cexact_cli(capsys):
    code, out, _ = run_cli(["cexact", "--pattern", "fano", "--n", "8"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == 30
    assert payload["provenance"] == "engine-min"
    assert payload["witness"].count(" ") == 2


def test_search_cli(capsys):
    code, out, _ = run_cli(
        ["search", "--n", "5", "--pattern", "f5", "--pattern", "k4minus"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["best_size"] == 4
    assert payload["proved_optimal"] is True
    for w in payload["witnesses"]:
        assert len(loads(w).edges) == 4


def test_audit_cli(capsys):
    code, out, _ = run_cli(
        ["audit", "--spec", "p3:n=8+zero2:q=4", "--pattern", "fano", "--q", "4"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["total_copies"] == 120
    assert payload["margin"] == 0


def test_formulas_tsv(capsys):
    code, out, _ = run_cli(["formulas", "--n", "8", "--to", "10"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].split("\t")[0] == "n"
    assert len(lines) == 4
    row8 = dict(zip(lines[0].split("\t"), lines[1].split("\t")))
    assert row8["p3"] == "48" and row8["c_fano"] == "30" and row8["q_fano"] == "8"


def test_formulas_json_and_domain_dashes(capsys):
    code, out, _ = run_cli(["formulas", "--n", "6", "--json"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["c_fano"] == "-"  # below the formula's domain
    assert rows[0]["t3"] == "8"


def test_determinism_across_runs_and_workers(capsys):
    outs = []
    for workers in ("1", "2", "4"):
        code, out, _ = run_cli(
            [
                "count", "--pattern", "fano", "--spec", "p3:n=8+zero2:q=2",
                "--workers", workers,
            ],
            capsys,
        )
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]
    code, out, _ = run_cli(
        ["count", "--pattern", "fano", "--spec", "p3:n=8+zero2:q=2", "--workers", "1"],
        capsys,
    )
    assert out == outs[0]


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(["cexact", "--pattern", "fano", "--n", "3"], capsys)
    assert code == 1
    assert "error" in err
    code, _, err = run_cli(["count", "--pattern", "nonesuch", "--spec", "p3:n=8"], capsys)
    assert code == 1
    code, _, err = run_cli(["gen", "--spec", "p3:n=8+zero2:q=99"], capsys)
    assert code == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["count"])  # missing required --pattern
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_config_batch_gen(tmp_path, capsys):
    cfg = tmp_path / "batch.txt"
    cfg.write_text("p3:n=8\nt3:n=9\n")
    prefix = str(tmp_path / "out-")
    code, _, _ = run_cli(["gen", "--config", str(cfg), "-o", prefix], capsys)
    assert code == 0
    assert len(loads((tmp_path / "out-000.u3").read_text()).edges) == 48
    assert len(loads((tmp_path / "out-001.u3").read_text()).edges) == 27


def test_count_per_vertex(capsys):
    code, out, _ = run_cli(
        ["count", "--pattern", "fano", "--spec", "p3:n=8+zero2:q=1", "--per-vertex"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert sum(payload["per_vertex"].values()) == 7 * payload["total_copies"]


@pytest.mark.parametrize(
    "cmd", ["gen", "count", "cexact", "search", "audit", "formulas"]
)
def test_help_describes_each_construct(cmd, capsys):
    with pytest.raises(SystemExit) as exc:
        main([cmd, "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "--" in out and len(out) > 100


def test_workers_env_default(tmp_path):
    import hyperturan as ht

    host = tmp_path / "k7.u3"
    host.write_text(ht.dumps(ht.complete(7)))
    proc = subprocess.run(
        [sys.executable, "-m", "hyperturan.cli", "count", "--pattern", "fano",
         "--input", str(host)],
        capture_output=True, text=True,
        env={"PATH": "", "HYPERTURAN_WORKERS": "2", "PYTHONPATH": ":".join(sys.path)},
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["total_copies"] == 30
