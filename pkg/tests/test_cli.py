import struct
import subprocess
import sys

import numpy as np
import pytest

from alpharng.cli import main, render
from alpharng.generator import MIN_SEED, MODULUS, generate, seed_residue

Z1 = 2138759898642167


def _gen(tmp_path, name, *args):
    out = tmp_path / name
    assert main(["gen", "--out", str(out), *args]) == 0
    return out.read_bytes()


def test_gen_text(tmp_path):
    data = _gen(tmp_path, "t.txt", "--n", "5", "--seed", "5559060566555623", "--format", "text")
    lines = data.decode().splitlines()
    assert len(lines) == 5
    assert all(0 < float(x) < 1 for x in lines)


def test_gen_raw_u64_golden(tmp_path):
    data = _gen(tmp_path, "z.bin", "--n", "1", "--seed", "5559060566555623", "--format", "raw-u64")
    assert data == struct.pack("<Q", Z1)


def test_gen_raw_f64(tmp_path):
    data = _gen(tmp_path, "f.bin", "--n", "100", "--format", "raw-f64", "--workers", "3")
    expected = generate(seed_residue(MIN_SEED), 100)[0]
    assert np.array_equal(np.frombuffer(data, "<f8"), expected)


def test_gen_worker_invariance(tmp_path):
    a = _gen(tmp_path, "a", "--n", "10000", "--format", "raw-f64", "--workers", "1")
    b = _gen(tmp_path, "b", "--n", "10000", "--format", "raw-f64", "--workers", "8", "--layout", "interleaved")
    assert a == b


def test_gen_keep_physical(tmp_path):
    a = _gen(tmp_path, "a", "--n", "8", "--format", "raw-u64", "--workers", "2", "--layout", "interleaved", "--keep-physical")
    vals = np.frombuffer(a, "<u8")
    logical = generate(seed_residue(MIN_SEED), 8, kind="residue")[0]
    assert np.array_equal(vals, logical[[0, 4, 1, 5, 2, 6, 3, 7]])


def test_bcn_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("BCN_THREADS", "4")
    a = _gen(tmp_path, "a", "--n", "1000", "--format", "raw-f64")
    monkeypatch.setenv("BCN_THREADS", "zero")
    assert main(["gen", "--n", "3"]) == 2
    monkeypatch.delenv("BCN_THREADS")
    assert a == _gen(tmp_path, "b", "--n", "1000", "--format", "raw-f64")


def test_text_round_trip():
    x = generate(seed_residue(MIN_SEED), 1000)[0]
    text = render(x, "text")
    parsed = np.array([float(s) for s in text.decode().split()])
    assert np.array_equal(parsed, x)
    assert render(parsed, "text") == text


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--n", "0"],
        ["gen", "--n", "5", "--seed", str(MODULUS + 99)],
        ["gen", "--n", "5", "--method", "nope"],
        ["gen", "--n", "5", "--format", "csv"],
        ["seed-info", str(MODULUS + 99)],
        ["seed-info", str(2**53 + 1)],
        ["bench", "--n", "1000", "--repeats", "1"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_io_error_exit_3_and_cleanup(tmp_path):
    target = tmp_path / "missing_dir" / "out.bin"
    assert main(["gen", "--n", "10", "--out", str(target)]) == 3
    assert not target.exists()


def test_seed_info(capsys):
    assert main(["seed-info", str(MODULUS + 100)]) == 0
    out = capsys.readouterr().out
    assert "4258649398211344" in out and "a - 3**33   100" in out
    assert main(["seed-info", str(2**53)]) == 0


def test_selftest_fast(capsys):
    assert main(["selftest", "--fast"]) == 0
    assert "8/8 checks passed" in capsys.readouterr().out


def test_selftest_corrupted_mu(capsys):
    assert main(["selftest", "--fast", "--mu", hex(0x33D9481681D79D ^ 1)]) == 1
    out = capsys.readouterr().out
    assert "modred.mu_constant" in out and "FAIL" in out
    assert any(line.startswith("modred.equivalence") and "FAIL" in line for line in out.splitlines())


def test_bench_table(capsys, monkeypatch):
    monkeypatch.setattr("alpharng.bench.MIN_RUN_SECONDS", 0.0)
    assert main(["bench", "--n", "300000", "--repeats", "1", "--methods", "BarrettModified", "--csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("method,elements") and len(lines) == 3
    assert lines[1].startswith("BarrettModified,300000,") and lines[2].startswith("Constant,")


def test_bench_report_shape():
    from alpharng.bench import run_bench

    rows = run_bench(200_000, methods=["Barrett"], repeats=2, min_seconds=0, workers=2, layout="interleaved")
    assert [r.method for r in rows] == ["Barrett", "Constant"]
    for r in rows:
        assert r.rate_with_setup <= r.rate
        assert r.rate == pytest.approx(r.elements / r.seconds / 1e9)


def test_bench_does_not_change_results():
    from alpharng.parallel import fill, make_plan

    plan = make_plan(5000, 3)
    timed, untimed = np.empty(5000), np.empty(5000)
    fill(timed, plan, MIN_SEED)
    fill(untimed, make_plan(5000, 1), MIN_SEED)
    assert timed.tobytes() == untimed.tobytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "alpharng", "gen", "--n", "2", "--format", "text"],
        capture_output=True, text=True, check=True,
    )
    assert len(proc.stdout.splitlines()) == 2
