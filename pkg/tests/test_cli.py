"""End-to-end CLI behavior: output schemas, exit codes, manifests, determinism."""

import json

import pytest

from pertree.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_bounds_period2(capsys):
    code, out = run(capsys, "bounds", "--degrees", "3,4")
    assert code == 0
    payload = json.loads(out.strip().splitlines()[-1])
    assert payload["lambda_g"] == pytest.approx(0.223607, abs=1e-6)
    assert payload["lambda1_upper"] == pytest.approx(0.405827, abs=1e-6)
    assert payload["lambda_ell_lower"] == pytest.approx(0.267949, abs=1e-6)


def test_bounds_period3(capsys):
    code, out = run(capsys, "bounds", "--degrees", "2,3,4")
    payload = json.loads(out.strip().splitlines()[-1])
    assert code == 0
    assert payload["x0"] == pytest.approx(11.847, abs=1e-3)
    assert payload["lambda_ell_lower"] == pytest.approx(0.2905, abs=1e-4)
    assert payload["lambda1_upper"] == pytest.approx(0.5306, abs=1e-4)


def test_bounds_subcritical_note(capsys):
    code, out = run(capsys, "bounds", "--degrees", "1,1")
    assert code == 0
    assert "unavailable" in out
    assert "subcritical" in out


def test_table_x0(capsys):
    code, out = run(capsys, "table", "--which", "period3_x0")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "a,b,c,x0,lambda_ell_lower"
    assert lines[1] == "2,3,4,11.847,0.2905"
    assert lines[4] == "6,8,10,31.774,0.1774"


def test_table_lambda1(capsys):
    code, out = run(capsys, "table", "--which", "period3_lambda1")
    lines = out.strip().splitlines()
    assert code == 0
    # the lambda_g column carries the spectral definition, hence the
    # annotated header name
    assert lines[0] == "a,b,c,lambda_g_spectral,lambda1_upper"
    values = [float(line.split(",")[4]) for line in lines[1:]]
    for got, ref in zip(values, (0.5306, 0.3430, 0.2097, 0.1464)):
        assert got == pytest.approx(ref, abs=1e-4)


def test_predict(capsys):
    code, out = run(capsys, "predict", "--degrees", "1,n",
                    "--n-range", "100:200:100")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "n,c,prediction"
    assert all(row.split(",")[1] == "0.5" for row in lines[1:])


def test_predict_k_slots(capsys):
    code, out = run(capsys, "predict", "--degrees", "1,1,1,n",
                    "--n-range", "1000:1000:1")
    assert code == 0
    assert out.strip().splitlines()[1].split(",")[1] == "1.5"


def test_walks_csv(capsys):
    code, out = run(capsys, "walks", "--degrees", "3,4", "--nmax", "10")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "n,count,root,running_max"
    assert len(lines) == 11
    rmax = [float(line.split(",")[3]) for line in lines[1:]]
    assert rmax == sorted(rmax)


def test_oracle_star(capsys):
    code, out = run(capsys, "oracle", "--star-n", "10", "--lambda", "1.0")
    payload = json.loads(out)
    assert code == 0
    assert payload["expected_time_from_center"] == pytest.approx(
        14.81880649062323, rel=1e-9)


def test_oracle_edges(capsys):
    code, out = run(capsys, "oracle", "--edges", "0-1", "--lambda", "1.0")
    payload = json.loads(out)
    assert code == 0
    assert payload["mean_extinction_time"] == pytest.approx(1.5, rel=1e-9)
    assert payload["mean_root_visits"] == pytest.approx(0.25, rel=1e-9)


def test_oracle_enumerate(capsys):
    code, out = run(capsys, "oracle", "--enumerate-degrees", "3,4",
                    "--two-n", "6")
    payload = json.loads(out)
    assert code == 0
    assert payload["count"] == 304


def test_simulate_stdout(capsys):
    code, out = run(capsys, "simulate", "--degrees", "3,4", "--lambda", "0",
                    "--horizon", "10", "--replicas", "5", "--seed", "7")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "seed_index,extinct,extinction_time,root_visits,peak,events,truncated"
    assert len(lines) == 7     # header + 5 rows + summary json
    summary = json.loads(lines[-1])
    assert summary["survived_global"] == 0


def test_simulate_deterministic_files(tmp_path, capsys):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["simulate", "--degrees", "3,4", "--lambda", "0.3", "--horizon",
            "10", "--replicas", "50", "--seed", "7"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "simulate"
    assert manifest["seed"] == 7
    assert manifest["parameters"]["lam"] == 0.3
    assert str(out1) in manifest["outputs"]
    summary = json.loads((tmp_path / "a.csv.summary.json").read_text())
    assert summary["replicas"] == 50


def test_sweep_csv(capsys):
    code, out = run(capsys, "sweep", "--degrees", "3,4", "--lambda-grid",
                    "0.1:0.3:0.1", "--horizon", "5", "--replicas", "100",
                    "--seed", "3")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "lambda,probability,ci_low,ci_high,replicas"
    assert len(lines) == 4


def test_star_csv(capsys):
    code, out = run(capsys, "star", "--n", "5", "--lambda", "0.5",
                    "--replicas", "10", "--seed", "1")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "replica,hit,time,peak,time_avg_leaves"
    assert len(lines) == 11
    assert all(line.split(",")[1] == "absorb" for line in lines[1:])


def test_config_file_merge(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"degrees": "3,4", "lambda-grid": "0.1:0.1:0.1",
                               "horizon": 5.0, "replicas": 100, "seed": 3}))
    code, out = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    assert len(out.strip().splitlines()) == 2
    # explicit flag wins over the config value
    code, out = run(capsys, "sweep", "--config", str(cfg),
                    "--lambda-grid", "0.1:0.2:0.1")
    assert code == 0
    assert len(out.strip().splitlines()) == 3


def test_usage_exit_codes(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds"])                               # missing --degrees
    assert exc.value.code == 1
    assert main(["simulate", "--degrees", "3,4"]) == 1  # missing lambda/horizon
    assert main(["bounds", "--degrees", "3,x"]) == 1
    capsys.readouterr()


def test_numerical_exit_code(capsys):
    # period-2 weights do not exist above the bound; InvalidShape from predict
    assert main(["predict", "--degrees", "5,n", "--n-range", "1:1:1"]) == 2
    capsys.readouterr()


def test_capacity_exit_code(capsys):
    assert main(["walks", "--degrees", "3,4", "--nmax", "100"]) == 3
    edges = ",".join(f"0-{i}" for i in range(1, 15))   # 15 vertices
    assert main(["oracle", "--edges", edges, "--lambda", "0.5"]) == 3
    capsys.readouterr()
