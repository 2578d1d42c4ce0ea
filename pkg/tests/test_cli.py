import json

from permprofile import __version__
from permprofile.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, (json.loads(out) if out.strip() else None), err


class TestProfileCommand:
    def test_running_example(self, capsys):
        code, data, _ = run_json(capsys, "profile", "--perm", "4 1 2 5 3", "--k", "3")
        assert code == 0
        assert data["version"] == __version__
        assert [d["value"] for d in data["densities"]] == [
            "1/5", "1/5", "1/5", "1/10", "3/10", "0",
        ]
        assert all(d["exact"] for d in data["densities"])
        assert data["counts"] == [2, 2, 2, 1, 3, 0]

    def test_trivial_profile(self, capsys):
        code, data, _ = run_json(capsys, "profile", "--perm", "1", "--k", "1")
        assert code == 0
        assert [d["value"] for d in data["densities"]] == ["1"]

    def test_not_a_bijection_exits_2(self, capsys):
        code, out, err = run(capsys, "profile", "--perm", "2 2", "--k", "2")
        assert code == 2
        assert "bijection" in err

    def test_budget_exit_3(self, capsys):
        code, _, err = run(
            capsys, "profile", "--perm", " ".join(map(str, range(1, 31))),
            "--k", "4", "--budget", "100",
        )
        assert code == 3
        assert "budget" in err

    def test_approx_echoes_seed(self, capsys):
        code, data, _ = run_json(
            capsys, "profile", "--perm", "4 1 2 5 3", "--k", "2",
            "--approx", "--samples", "500", "--seed", "17",
        )
        assert code == 0
        assert data["seed"] == 17
        assert data["approximate"] is True
        assert not data["densities"][0]["exact"]


class TestDecomposeCommand:
    def test_sign_projection_of_running_example(self, capsys):
        code, data, _ = run_json(capsys, "decompose", "--perm", "4 1 2 5 3", "--k", "3")
        assert code == 0
        rows = data["projections"]
        assert len(rows) == 6
        sign_row = next(r for r in rows if r["block"] == 2)
        # (1/sqrt6) * 1/5 = sqrt6/30
        assert sign_row["projection"]["value"] == "1/30√6"
        # orthonormal expansion: sum of squared projections = |P|^2
        from permprofile.perms import Permutation, profile

        dens = profile(Permutation([4, 1, 2, 5, 3]), 3).densities()
        norm_sq = float(sum(d * d for d in dens))
        total = sum(r["projection_float"] ** 2 for r in rows)
        assert abs(total - norm_sq) < 1e-12

    def test_identity_top_block(self, capsys):
        code, data, _ = run_json(capsys, "decompose", "--perm", "1 2 3 4", "--k", "2")
        assert code == 0
        top = next(r for r in data["projections"] if r["block"] == 0)
        # <(1,1)/sqrt2, (1,0)> = 1/sqrt2 = sqrt2/2
        assert top["projection"]["value"] == "1/2√2"


class TestMomentsCommand:
    def test_fixed_n_exact_matrix(self, capsys):
        code, data, _ = run_json(capsys, "moments", "--k", "2", "--n", "3")
        assert code == 0
        assert data["matrix"][0][0]["value"] == "19/54"
        assert data["matrix"][0][1]["value"] == "4/27"

    def test_polynomial_matrix(self, capsys):
        code, data, _ = run_json(capsys, "moments", "--k", "2")
        assert code == 0
        assert data["polynomials"][0][0] == ["5/36", "-5/72", "1/8"]
        assert data["polynomials"][0][1] == ["-5/36", "-13/72", "1/8"]

    def test_budget(self, capsys):
        code, _, err = run(capsys, "moments", "--k", "2", "--n", "12")
        assert code == 3

    def test_cache_dir_env_var(self, capsys, tmp_path, monkeypatch):
        from permprofile import moments as moments_mod

        monkeypatch.setenv(moments_mod.CACHE_ENV, str(tmp_path))
        moments_mod._GRAM_MEMO.clear()
        code, _, _ = run_json(capsys, "moments", "--k", "2", "--n", "4")
        assert code == 0
        assert (tmp_path / "moment_gram_k2_n4.json").exists()


class TestVerifyCommand:
    def test_k2_pass(self, capsys):
        code, data, _ = run_json(capsys, "verify", "--k", "2")
        assert code == 0
        assert data["result"] == "PASS"
        assert [d["limit"] for d in data["diagonal"]] == ["1/2", "2/9"]
        assert data["offdiagonal"] == {
            "certificate": "all off-diagonal limits exactly zero"
        }

    def test_k3_text_output(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "3")
        assert code == 0
        assert "PASS" in out
        assert "[rational]" in out

    def test_k5_requires_long(self, capsys):
        code, _, err = run(capsys, "verify", "--k", "5")
        assert code == 3
        assert "--long" in err

    def test_k6_requires_generator_file(self, capsys):
        code, _, err = run(capsys, "verify", "--k", "6", "--long")
        assert code == 2
        assert "gen-file" in err

    def test_failing_verification_exits_1(self, capsys, tmp_path):
        from test_moments import _doctored_generator_file

        path = _doctored_generator_file(tmp_path)
        code, data, _ = run_json(capsys, "verify", "--k", "3", "--gen-file", path)
        assert code == 1
        assert data["result"] == "FAIL"
        assert data["offdiagonal"]["counterexamples"]


class TestMcCommand:
    def test_scaling_run_json(self, capsys):
        code, data, _ = run_json(
            capsys, "mc", "--k", "3", "--block", "2",
            "--n", "10,14,20", "--samples", "2500", "--seed", "3",
        )
        assert code == 0
        assert data["seed"] == 3
        assert data["target_exponent"] == -2
        assert len(data["rows"]) == 3
        assert data["column_label"]["partition"] == [1, 1, 1]

    def test_csv_rows(self, capsys):
        code, out, _ = run(
            capsys, "mc", "--k", "2", "--block", "1",
            "--n", "8,12,16", "--samples", "1500", "--seed", "4",
            "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,mean,second_moment,stderr"
        assert len(lines) == 4

    def test_generated_seed_is_echoed(self, capsys):
        code, data, _ = run_json(
            capsys, "mc", "--k", "2", "--block", "1",
            "--n", "8,12,16", "--samples", "1000",
        )
        assert code == 0
        assert isinstance(data["seed"], int)


class TestTestCommand:
    def test_csv_tau_with_pvalue(self, capsys, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("y,z\n0.1,0.7\n0.2,0.1\n0.3,0.2\n0.4,0.9\n0.5,0.5\n")
        code, data, _ = run_json(
            capsys, "test", "--csv", str(path), "--statistic", "tau",
            "--pvalue-samples", "200", "--seed", "8",
        )
        assert code == 0
        assert data["value"] == {"value": "1/5", "exact": True}
        assert data["p_value"]["samples"] == 200
        assert data["seed"] == 8

    def test_ties_exit_2(self, capsys, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("1,5\n2,5\n3,7\n")
        code, _, err = run(
            capsys, "test", "--csv", str(path), "--statistic", "tau",
        )
        assert code == 2
        assert "tie" in err.lower()

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run(capsys, "test", "--csv", "/nonexistent.csv", "--statistic", "tau")
        assert code == 2


class TestQuasirandomCommand:
    def test_identity(self, capsys):
        code, data, _ = run_json(capsys, "quasirandom", "--perm", "1 2 3 4 5 6 7 8")
        assert code == 0
        assert data["score"] == {"value": "1", "exact": True}
        assert data["abs_score_float"] == 1.0
