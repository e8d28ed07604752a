import json
import subprocess
import sys

import pytest

from pentagon_periods import cli
from pentagon_periods.orbit import read_census
from pentagon_periods.sieve import prime_mask


def run(*argv):
    code, report, text = cli.run_command(list(argv))
    return code, report, text


def test_spectrum_4000(tmp_path):
    code, report, _ = run("spectrum", "--max-period", "4000", "--cache-dir", str(tmp_path))
    assert code == 0
    assert report["payload"]["missing_asym"] == [2, 12, 14, 18]
    assert set(report) >= {"command", "timestamp", "version", "payload", "summary"}
    assert read_census(tmp_path / "orbit_l2000.pspc").bound == 2000
    # second run reads the cache
    assert run("spectrum", "--max-period", "4000", "--cache-dir", str(tmp_path))[1]["payload"] == report["payload"]


def test_cache_env_and_flag_precedence(tmp_path, monkeypatch):
    env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
    monkeypatch.setenv("PENTA_CACHE", str(env_dir))
    run("spectrum", "--max-period", "100")
    assert (env_dir / "orbit_l50.pspc").exists()
    run("spectrum", "--max-period", "100", "--cache-dir", str(flag_dir))
    assert (flag_dir / "orbit_l50.pspc").exists()


def test_corrupt_cache_is_ignored(tmp_path):
    (tmp_path / "orbit_l50.pspc").write_bytes(b"PSPC1garbage")
    code, report, _ = run("spectrum", "--max-period", "100", "--cache-dir", str(tmp_path))
    assert code == 0


def test_congruence_12():
    code, report, _ = run("congruence", "--q", "12")
    assert code == 0 and report["payload"]["index"] == 72


def test_congruence_25_needs_slow():
    assert run("congruence", "--q", "25")[0] == 2
    code, report, _ = run("congruence", "--q", "25", "--slow")
    assert code == 0 and report["payload"]["method"] == "schreier-kernel"
    assert report["payload"]["gamma_order"] == 15000 * 15625


def test_sieve_cubic_layer1():
    code, report, _ = run("sieve-cubic", "--limit", "1000", "--layers", "1")
    assert code == 0
    primes = [int(p) for p in range(1001) if prime_mask(1000)[p]]
    assert report["payload"]["unrepresented"]["1"] == [1] + primes


def test_csv_outputs(tmp_path):
    out = tmp_path / "q.csv"
    assert cli.main(["sieve-quad", "--limit", "50", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,represented,witness_x,witness_y" and len(lines) == 52
    code, _, text = run("sieve-cubic", "--limit", "30", "--format", "csv")
    assert text.splitlines()[0] == "n,represented,layer"
    assert text.splitlines()[4] == "4,1,1"
    _, _, text = run("spectrum", "--max-period", "20", "--format", "csv")
    assert text.splitlines()[0] == "n,asymmetric,symmetric"


def test_families_reports_printed_typo():
    code, report, _ = run("families", "--bound", "10")
    assert code == 1
    assert report["summary"]["failed"] == ["family1_printed_polynomial"]
    assert report["payload"]["families"]["1"]["derived"]["c_n"] == 15


def test_recip_commands():
    code, report, _ = run("recip-orbit", "--bound", "10000")
    assert code == 0 and report["payload"]["symbols"] == [-1]
    code, report, _ = run("recip-scan", "--poly", "f-paper", "--limit", "10000")
    assert code == 0 and report["payload"]["squares_found"]
    code, report, _ = run("recip-scan", "--poly", "q-paper", "--limit", "10000")
    assert code == 0 and report["summary"]["checks"]["no_squares"]["ok"]


def test_simulate(tmp_path):
    svg = tmp_path / "p.svg"
    code, report, _ = run("simulate", "--vector", "0,1,1,0", "--svg", str(svg))
    assert code == 0
    assert report["payload"]["traces"][0]["counters"] == [0, 1, 1, 0]
    assert svg.read_text().startswith("<svg")
    code, report, _ = run("simulate", "--max-ell", "8")
    assert code == 0 and len(report["payload"]["traces"]) > 5
    code, report, _ = run("simulate", "--vector", "1,1,1,1")
    assert code == 0 and not report["payload"]["traces"][0]["in_orbit"]


def test_admissible_and_identities():
    assert run("admissible", "--q", "8")[0] == 0
    code, report, _ = run("verify-identities")
    assert code == 0 and all(report["payload"].values())


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--bogus"],
        ["congruence", "--format", "csv"],
        ["simulate", "--vector", "1,2,3"],
        ["simulate", "--vector", "-1,0,0,1"],
        ["recip-scan", "--poly", "nope"],
        ["sieve-quad", "--limit", "x"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as err:
        cli.main(argv)
    assert err.value.code == 2


def test_bad_form_exits_2():
    assert cli.main(["sieve-quad", "--A", "2", "--B", "4"]) == 2


def test_console_script_json(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "pentagon_periods.cli", "congruence", "--q", "5", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    report = json.loads(out.read_text())
    assert report["payload"]["index"] == 1 and report["summary"]["passed"]
