import pytest

from npcode import codes
from npcode.cli import ConfigError, main, parse_config

PARITY_CONFIG = """\
# five connections, one parity, no failures
code_family = parity
n = 5
rounds = 10
failure_model = none
seed = 1
"""

HAMMING_RANDOM_CONFIG = """\
code_family = hamming
mu = 3
rounds = 25
failure_model = random
t = 2
seed = 1
"""


def write_config(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestCodegen:
    def test_parity_summary_and_file(self, tmp_path, capsys):
        out = tmp_path / "parity.npc"
        rc = main(["codegen", "--family", "parity", "--n", "5", "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "5 4 2 verified"
        code = codes.parse_code_file(out.read_text())
        assert (code.n, code.k, code.d_min) == (5, 4, 2)

    def test_hamming_summary(self, tmp_path, capsys):
        out = tmp_path / "h.npc"
        rc = main(["codegen", "--family", "hamming", "--mu", "3", "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "7 4 3 verified"

    def test_bch_declared(self, tmp_path, capsys):
        out = tmp_path / "b.npc"
        rc = main(["codegen", "--family", "bch", "--n", "63", "--design-t", "2", "--out", str(out)])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "63 51 5 declared"

    def test_invalid_length_fails(self, tmp_path, capsys):
        rc = main(["codegen", "--family", "parity", "--n", "1", "--out", str(tmp_path / "x")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_missing_family_parameter(self, tmp_path, capsys):
        rc = main(["codegen", "--family", "bch", "--n", "15", "--out", str(tmp_path / "x")])
        assert rc == 2

    def test_default_output_name(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        rc = main(["codegen", "--family", "parity", "--n", "4"])
        assert rc == 0
        assert (tmp_path / "parity-n4.npc").exists()


class TestVerify:
    def make_code_file(self, tmp_path, family, **params):
        args = ["codegen", "--family", family]
        for key, value in params.items():
            args += [f"--{key.replace('_', '-')}", str(value)]
        out = tmp_path / "code.npc"
        args += ["--out", str(out)]
        assert main(args) == 0
        return out

    def test_hamming_two_erasures_ok(self, tmp_path, capsys):
        path = self.make_code_file(tmp_path, "hamming", mu=3)
        capsys.readouterr()
        assert main(["verify", str(path), "--t", "2"]) == 0
        assert capsys.readouterr().out == ""

    def test_hamming_three_erasures_fails(self, tmp_path, capsys):
        path = self.make_code_file(tmp_path, "hamming", mu=3)
        capsys.readouterr()
        assert main(["verify", str(path), "--t", "3"]) == 1
        out_lines = capsys.readouterr().out.splitlines()
        assert len(out_lines) == 7
        assert "0,1,2" in out_lines

    def test_parity_single_erasure_ok(self, tmp_path):
        path = self.make_code_file(tmp_path, "parity", n=5)
        assert main(["verify", str(path), "--t", "1"]) == 0

    def test_agrees_with_library(self, tmp_path, capsys):
        path = self.make_code_file(tmp_path, "hamming", mu=3)
        code = codes.parse_code_file(path.read_text())
        capsys.readouterr()
        for t in (1, 2, 3, 4):
            rc = main(["verify", str(path), "--t", str(t)])
            captured = capsys.readouterr()
            report = codes.verify_protection(code, t)
            assert (rc == 0) == report.recoverable
            got = [
                tuple(int(x) for x in line.split(","))
                for line in captured.out.splitlines()
            ]
            assert got == list(report.failing_patterns)

    def test_bad_file_exits_2(self, tmp_path):
        bad = tmp_path / "bad.npc"
        bad.write_text("not a code file\n")
        assert main(["verify", str(bad), "--t", "1"]) == 2

    def test_missing_file_exits_2(self, tmp_path):
        assert main(["verify", str(tmp_path / "absent.npc"), "--t", "1"]) == 2

    def test_pattern_bound_exits_2(self, tmp_path):
        path = self.make_code_file(tmp_path, "bch", n=63, design_t=1)
        assert main(["verify", str(path), "--t", "31"]) == 2


class TestConfigParsing:
    def test_full_roundtrip(self):
        cfg = parse_config(PARITY_CONFIG)
        assert cfg.code_family == "parity"
        assert cfg.n == 5 and cfg.rounds == 10 and cfg.seed == 1
        assert cfg.failure_model == "none"

    def test_fixed_failures_list(self):
        cfg = parse_config("code_family = parity\nn = 5\nrounds = 2\nfailure_model = fixed\nfailed = 1,3\n")
        assert cfg.failed == (1, 3)

    @pytest.mark.parametrize(
        "text",
        [
            "n = 5\n",  # missing family
            "code_family = parity\nwat = 1\n",
            "code_family = parity\nn = x\n",
            "code_family = parity\nn = 5\nn = 6\n",
            "code_family = parity\nrounds = 0\n",
            "code_family = parity\nfailure_model = sometimes\n",
            "code_family = parity\njust a line\n",
        ],
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)


class TestSimulate:
    def test_parity_footer_capacity(self, tmp_path):
        cfg = write_config(tmp_path, PARITY_CONFIG)
        out = tmp_path / "report.csv"
        assert main(["simulate", str(cfg), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "round,failed,outcome,queries,xor_ops,transmissions,capacity"
        assert len(lines) == 12  # header + 10 rounds + summary
        assert "avg_capacity=4/5" in lines[-1]
        assert "transmissions=50" in lines[-1]

    def test_hamming_random_outcomes_all_recoverable(self, tmp_path):
        cfg = write_config(tmp_path, HAMMING_RANDOM_CONFIG)
        out = tmp_path / "report.csv"
        assert main(["simulate", str(cfg), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        for line in lines[1:-1]:
            outcome = line.split(",")[2]
            assert outcome in ("FullRecovery", "NoActionNeeded")
        assert "unrecoverable=0" in lines[-1]
        assert "recovery_rate=1/1" in lines[-1]

    def test_reruns_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, HAMMING_RANDOM_CONFIG)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["simulate", str(cfg), "--out", str(out1)]) == 0
        assert main(["simulate", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_rows_sum_to_footer(self, tmp_path):
        cfg = write_config(tmp_path, HAMMING_RANDOM_CONFIG)
        out = tmp_path / "report.csv"
        assert main(["simulate", str(cfg), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        rows = [line.split(",") for line in lines[1:-1]]
        footer = dict(part.split("=") for part in lines[-1].split(",")[1:])
        assert sum(int(r[3]) for r in rows) == int(footer["queries"])
        assert sum(int(r[4]) for r in rows) == int(footer["xor_ops"])
        assert sum(int(r[5]) for r in rows) == int(footer["transmissions"])

    def test_stdout_when_no_out(self, tmp_path, capsys):
        cfg = write_config(tmp_path, PARITY_CONFIG)
        assert main(["simulate", str(cfg)]) == 0
        assert "avg_capacity=4/5" in capsys.readouterr().out

    def test_out_key_in_config(self, tmp_path):
        target = tmp_path / "from-config.csv"
        cfg = write_config(tmp_path, PARITY_CONFIG + f"out = {target}\n")
        assert main(["simulate", str(cfg)]) == 0
        assert target.exists()

    def test_fixed_failure_scenario(self, tmp_path):
        text = "code_family = parity\nn = 5\nrounds = 5\nfailure_model = fixed\nfailed = 2\n"
        cfg = write_config(tmp_path, text)
        out = tmp_path / "r.csv"
        assert main(["simulate", str(cfg), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert all(line.split(",")[1] == "2" for line in lines[1:-1])
        # round 2 schedules connection 2 as parity: no action needed there
        outcomes = [line.split(",")[2] for line in lines[1:-1]]
        assert outcomes.count("NoActionNeeded") == 1
        assert outcomes.count("FullRecovery") == 4

    def test_rounds_zero_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "code_family = parity\nn = 5\nrounds = 0\n")
        assert main(["simulate", str(cfg)]) == 2
        assert "error" in capsys.readouterr().err

    def test_bad_fixed_index_exits_2(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "code_family = parity\nn = 5\nrounds = 1\nfailure_model = fixed\nfailed = 9\n",
        )
        assert main(["simulate", str(cfg)]) == 2

    def test_code_file_family(self, tmp_path):
        code_path = tmp_path / "c.npc"
        assert main(["codegen", "--family", "hamming", "--mu", "3", "--out", str(code_path)]) == 0
        cfg = write_config(
            tmp_path,
            f"code_family = file\ncode_file = {code_path}\nrounds = 7\nfailure_model = none\n",
        )
        out = tmp_path / "r.csv"
        assert main(["simulate", str(cfg), "--out", str(out)]) == 0
        assert "avg_capacity=4/7" in out.read_text().splitlines()[-1]
