import json
from fractions import Fraction

import pytest

from smalldoubling import GAP2, IntSet, Progression1D
from smalldoubling import reports
from smalldoubling.cli import InputError, main, parse_set_text
from smalldoubling.constructions import a1_set, evens, gap_subset, random_sparse


def write_set(path, S, header=None):
    lines = ([header] if header else []) + [str(x) for x in S]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSetFiles:
    def test_comments_duplicates_and_hex(self):
        S = parse_set_text("base=16\n# comment\nff\n10\n10\n\n-1\n")
        assert S == IntSet([255, 16, -1])

    def test_line_numbered_error(self):
        with pytest.raises(InputError, match=r":3:"):
            parse_set_text("1\n2\nthree\n", "x.txt")

    def test_bad_header(self):
        with pytest.raises(InputError):
            parse_set_text("base=8\n1\n")
        with pytest.raises(InputError):
            parse_set_text("1\nbase=16\n")


class TestReports:
    def test_round_trip(self):
        payload = {"x": Fraction(3, 7), "P": Progression1D(1, 2, 3), "Q": GAP2(0, 1, 10, 3, 3),
                   "S": IntSet([1, 5]), "big": 2 ** 100, "nested": [Fraction(1, 2), None, True]}
        doc = reports.loads(reports.dumps("demo", payload))
        assert doc["kind"] == "demo" and doc["report"] == payload

    def test_fractions_are_not_floated(self):
        text = reports.dumps("demo", {"v": Fraction(1, 3)})
        assert json.loads(text)["report"]["v"] == {"num": 1, "den": 3}

    def test_schema_version_checked(self):
        with pytest.raises(ValueError):
            reports.loads(json.dumps({"schema_version": 99, "kind": "x", "report": {}}))


class TestCommands:
    def test_doubling_a1(self, tmp_path, capsys):
        f = write_set(tmp_path / "a1.txt", a1_set(100))
        code, out, _ = run(capsys, "doubling", "--in", f)
        assert code == 0 and out.strip() == "1194/300"

    def test_sumset_and_variants(self, tmp_path, capsys):
        f = write_set(tmp_path / "a.txt", [0, 1, 3])
        code, out, _ = run(capsys, "sumset", "--in", f)
        assert [int(x) for x in out.split()] == [0, 1, 2, 3, 4, 6]
        code, out, _ = run(capsys, "sumset", "--in", f, "--iterate", "4")
        assert [int(x) for x in out.split()] == [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12]
        code, out, _ = run(capsys, "sumset", "--in", f, "--minus")
        assert [int(x) for x in out.split()] == [-3, -2, -1, 0, 1, 2, 3]
        code, out, _ = run(capsys, "sumset", "--in", f, "--signed", "1,0")
        assert [int(x) for x in out.split()] == [0, 1, 3]

    def test_energy(self, tmp_path, capsys):
        f = write_set(tmp_path / "a.txt", [1, 2])
        assert run(capsys, "energy", "--in", f)[1].strip() == "6"

    def test_cover_sharpness(self, tmp_path, capsys):
        f = write_set(tmp_path / "evens.txt", evens(10))
        code, out, _ = run(capsys, "cover", "--lemma", "5x4", "--in", f, "--no-precheck")
        assert code == 1 and "witness=1" in out
        code, _, err = run(capsys, "cover", "--lemma", "5x4", "--in", f)
        assert code == 2 and "error" in err

    def test_cover_lev_and_41(self, tmp_path, capsys):
        f = write_set(tmp_path / "x.txt", [0, 1, 2, 7])
        assert run(capsys, "cover", "--lemma", "lev", "--in", f)[0] == 0
        A, Q = gap_subset(0)
        qf = tmp_path / "q.json"
        qf.write_text(json.dumps({"a0": Q.a0, "a1": Q.a1, "a2": Q.a2, "L1": Q.L1, "L2": Q.L2}))
        fa = write_set(tmp_path / "gap.txt", A)
        assert run(capsys, "cover", "--lemma", "41x40", "--in", fa, "--q", str(qf))[0] == 0

    def test_freiman(self, tmp_path, capsys):
        a = write_set(tmp_path / "a.txt", [0, 1, 2])
        b = write_set(tmp_path / "b.txt", [0, 1, 3])
        m = write_set(tmp_path / "m.txt", [0, 1, 2])
        code, out, _ = run(capsys, "freiman", "verify", "--a", a, "--b", b, "--map", m, "--k", "2")
        assert code == 1 and "witness_indices=(0, 2, 1, 1)" in out

    def test_bohr(self, tmp_path, capsys):
        code, out, _ = run(capsys, "bohr", "set", "--alpha", "1/2", "--sigma", "9/1000", "--n", "6")
        assert code == 0 and [int(x) for x in out.split()] == [-6, -4, -2, 0, 2, 4, 6]
        code, out, _ = run(capsys, "bohr", "extract", "--cf", "0" + ",1" * 25, "--sigma", "1/128",
                           "--n", "100000")
        assert code == 0 and "certified=True" in out

    def test_bohr_verify_pass(self, tmp_path, capsys):
        code, out, _ = run(capsys, "bohr", "extract", "--alpha", "123/1001", "--sigma", "1/150",
                           "--n", "100000", "--json")
        assert code == 0
        rp = tmp_path / "r.json"
        rp.write_text(out)
        code, out, _ = run(capsys, "verify", "--report", str(rp))
        assert code == 0 and out.strip() == "verified"

    def test_norms(self, tmp_path, capsys):
        f = tmp_path / "f.txt"
        f.write_text("\n".join(["1"] * 32) + "\n")
        a = float(run(capsys, "norms", "--in", str(f), "--which", "u2")[1])
        b = float(run(capsys, "norms", "--in", str(f), "--which", "u2fft")[1])
        assert a == pytest.approx(1.0) and b == pytest.approx(1.0, rel=1e-9)

    def test_torus(self, capsys):
        code, out, _ = run(capsys, "torus", "kneser", "--m", "32", "--d", "1", "--trials", "20",
                           "--lambda", "0.005", "--seed", "1")
        assert code == 0 and "violations=0" in out
        code, out, _ = run(capsys, "torus", "sandwich", "--center", "0", "--halfwidth", "1/4",
                           "--tau", "1/80", "--m", "400")
        assert code == 0 and "sandwich=True" in out

    def test_analyze_random_is_expansion(self, tmp_path, capsys):
        f = write_set(tmp_path / "random.txt", random_sparse(0))
        code, out, _ = run(capsys, "analyze", "--in", f, "--delta", "1/20", "--eps", "1/10",
                           "--min-frac", "1/8")
        assert code == 0 and "branch=expansion" in out

    def test_analyze_json_verify_and_determinism(self, tmp_path, capsys):
        f = write_set(tmp_path / "a1.txt", a1_set(100))
        args = ("analyze", "--in", f, "--delta", "1/20", "--eps", "1/10", "--min-frac", "1/4", "--json")
        code, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert code == 0 and first == second
        doc = reports.loads(first)
        assert doc["report"]["branch"] == "ap_dense"
        rp = tmp_path / "r.json"
        rp.write_text(first)
        code, out, _ = run(capsys, "verify", "--report", str(rp), "--in", f)
        assert code == 0 and out.strip() == "verified"
        # the same report against a different set fails re-verification
        g = write_set(tmp_path / "other.txt", range(1, 50))
        assert run(capsys, "verify", "--report", str(rp), "--in", g)[0] == 1

    def test_usage_and_resource_errors(self, tmp_path, capsys):
        assert run(capsys, "sumset")[0] == 2
        assert run(capsys, "doubling", "--in", str(tmp_path / "missing.txt"))[0] == 2
        bad = tmp_path / "bad.txt"
        bad.write_text("1\nx\n")
        code, _, err = run(capsys, "energy", "--in", str(bad))
        assert code == 2 and ":2:" in err
        code, _, err = run(capsys, "bohr", "set", "--alpha", "1/3", "--sigma", "1/200", "--n", str(10 ** 9))
        assert code == 3

    def test_threads_flag(self, tmp_path, capsys):
        f = write_set(tmp_path / "a.txt", [1, 2])
        assert run(capsys, "--threads", "4", "energy", "--in", f)[1].strip() == "6"


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    f = write_set(tmp_path / "a.txt", [1, 2])
    out = subprocess.run([sys.executable, "-m", "smalldoubling", "energy", "--in", f],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "6"
