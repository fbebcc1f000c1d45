import io
import subprocess
import sys

import pytest

from lanehash import cli, vectors
from lanehash.registry import VECTOR_ALGORITHMS


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_covers_all_algorithms_and_lengths():
    records = vectors.generate()
    assert len(records) == len(VECTOR_ALGORITHMS) * len(vectors.DEFAULT_LENGTHS)
    lengths = {
        len(r.message_hex) // 2 for r in records if r.algo == "highway64"
    }
    for n in (0, 31, 32, 33, 64, 256, 1023, 1024):
        assert n in lengths
    assert {r.algo for r in records} == set(VECTOR_ALGORITHMS)
    # Controls never appear in the conformance file.
    assert "first8bytes" not in {r.algo for r in records}


def test_vector_round_trip_and_verify():
    records = vectors.generate(lengths=[0, 5, 32, 33])
    buf = io.StringIO()
    vectors.write(records, buf)
    buf.seek(0)
    parsed = vectors.read(buf)
    assert parsed == records
    assert vectors.verify(parsed) == []


def test_verify_flags_corrupt_digest():
    records = vectors.generate(algos=["siphash24"], lengths=[3])
    bad = vectors.VectorRecord(
        records[0].algo, records[0].key_hex, records[0].message_hex, "00" * 8
    )
    assert vectors.verify([bad]) == [bad]


def test_read_skips_comments_and_blank_lines():
    line = vectors.generate(algos=["siphash24"], lengths=[1])[0].to_line()
    buf = io.StringIO(f"# header\n\n{line}\n")
    assert len(vectors.read(buf)) == 1
    with pytest.raises(ValueError):
        vectors.VectorRecord.from_line("only,three,fields")


def test_cli_vectors_stdout_format(capsys):
    code, out, _ = run_cli(capsys, "vectors")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == len(VECTOR_ALGORITHMS) * len(vectors.DEFAULT_LENGTHS)
    first = lines[0].split(",")
    assert len(first) == 4
    assert first[0] == "highway64"


def test_cli_vectors_to_file_verifies(tmp_path, capsys):
    out_path = tmp_path / "vectors.csv"
    code, _, _ = run_cli(capsys, "vectors", "--out", str(out_path))
    assert code == 0
    with open(out_path) as f:
        assert vectors.verify(vectors.read(f)) == []


def test_cli_hash_published_sip_vector(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.write_bytes(b"")
    code, out, _ = run_cli(
        capsys,
        "hash",
        "--algo",
        "siphash24",
        "--key",
        "000102030405060708090a0b0c0d0e0f",
        str(empty),
    )
    assert code == 0
    assert out.split()[0] == "310e0edd47db6f72"


def test_cli_hash_stdin_matches_file(tmp_path, capsys, monkeypatch):
    data = bytes(range(200))
    path = tmp_path / "data"
    path.write_bytes(data)
    code, out_file, _ = run_cli(capsys, "hash", str(path))
    monkeypatch.setattr(sys, "stdin", type("S", (), {"buffer": io.BytesIO(data)})())
    code2, out_stdin, _ = run_cli(capsys, "hash")
    assert code == code2 == 0
    assert out_file.split()[0] == out_stdin.split()[0]
    assert out_stdin.split()[1] == "-"


def test_cli_hash_width_256(tmp_path, capsys):
    path = tmp_path / "data"
    path.write_bytes(b"abc")
    code, out, _ = run_cli(capsys, "hash", "--algo", "highway", "--width", "256", str(path))
    assert code == 0
    assert len(out.split()[0]) == 64


def test_cli_hash_bad_key_exits_2(tmp_path, capsys):
    path = tmp_path / "data"
    path.write_bytes(b"")
    with pytest.raises(SystemExit) as exc:
        cli.main(["hash", "--key", "zz", str(path)])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["hash", "--key", "00", str(path)])
    assert exc.value.code == 2


def test_cli_hash_unreadable_input_exits_1(tmp_path, capsys):
    code, _, err = run_cli(capsys, "hash", str(tmp_path / "missing"))
    assert code == 1
    assert "cannot read" in err


def test_cli_unknown_algo_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["hash", "--algo", "md5", "/dev/null"])
    assert exc.value.code == 2


def test_cli_avalanche_weak_hash_fails(capsys):
    code, out, _ = run_cli(
        capsys,
        "avalanche",
        "--algo",
        "first8bytes",
        "--sizes",
        "8",
        "--iters",
        "50",
        "--samples",
        "3",
    )
    assert code == 1
    assert "FAIL" in out


def test_cli_avalanche_real_hash_passes(capsys):
    code, out, _ = run_cli(
        capsys,
        "avalanche",
        "--algo",
        "siphash24",
        "--sizes",
        "4",
        "--iters",
        "100000",
        "--samples",
        "3",
    )
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert len(rows) == 1
    algo, size, bias, threshold, state = rows[0].split(",")
    assert (algo, size, state) == ("siphash24", "4", "pass")
    assert float(bias) < float(threshold)


def test_cli_avalanche_validation():
    with pytest.raises(SystemExit):
        cli.main(["avalanche", "--sizes", "40", "--iters", "10"])
    with pytest.raises(SystemExit):
        cli.main(["avalanche", "--samples", "4", "--iters", "10"])
    with pytest.raises(SystemExit):
        cli.main(["avalanche", "--sizes", "abc"])


def test_cli_bench_rows(capsys):
    code, out, _ = run_cli(
        capsys,
        "bench",
        "--algo",
        "siphash13",
        "--sizes",
        "8,64",
        "--reps",
        "9",
        "--runs",
        "1",
    )
    assert code == 0
    machine_rows = [l for l in out.splitlines() if l.startswith("siphash13,")]
    assert len(machine_rows) == 2
    assert machine_rows[0].split(",")[1] == "8"


def test_cli_size_range_parsing(capsys):
    parser = cli.build_parser()
    assert cli._parse_sizes(parser, "4..6") == [4, 5, 6]
    assert cli._parse_sizes(parser, "1,8..10,32") == [1, 8, 9, 10, 32]


def test_installed_entry_point_smoke(tmp_path):
    path = tmp_path / "data"
    path.write_bytes(b"hello")
    proc = subprocess.run(
        ["lanehash", "hash", str(path)], capture_output=True, text=True
    )
    assert proc.returncode == 0
    digest = proc.stdout.split()[0]
    assert len(digest) == 16
    int(digest, 16)
