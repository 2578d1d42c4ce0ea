from fractions import Fraction
from math import comb, factorial

import pytest

from conftest import brute_second_moment
from permprofile import moments
from permprofile.errors import Diverges, TooLarge
from permprofile.qfield import QNum, ZERO
from permprofile.ratpoly import RatPoly
from permprofile.reps import build_basis

F = Fraction


class TestExactSecondMoment:
    def test_k2_values(self):
        assert moments.exact_second_moment(2, 2) == [
            [F(1, 2), F(0)],
            [F(0), F(1, 2)],
        ]
        assert moments.exact_second_moment(2, 3) == [
            [F(19, 54), F(4, 27)],
            [F(4, 27), F(19, 54)],
        ]
        assert moments.exact_second_moment(2, 4) == [
            [F(67, 216), F(41, 216)],
            [F(41, 216), F(67, 216)],
        ]

    def test_matches_brute_average(self):
        for k, n in ((2, 4), (3, 4), (3, 5)):
            assert moments.exact_second_moment(k, n) == brute_second_moment(k, n)

    def test_matches_pair_union_oracle(self):
        # grouped-by-union-size evaluation of E[N N^T] agrees with the
        # straight S_n average
        for k, n in ((2, 4), (2, 5), (3, 5), (3, 6)):
            assert moments.pair_union_second_moment(k, n) == moments.exact_second_moment(k, n)

    def test_cost_guard(self):
        with pytest.raises(TooLarge):
            moments.exact_second_moment(2, 11)
        with pytest.raises(TooLarge):
            moments.exact_second_moment(2, 13, long_run=True)
        with pytest.raises(TooLarge):
            moments.exact_second_moment(8, 8)

    def test_disk_cache_round_trip(self, tmp_path):
        fresh = moments.profile_gram(2, 4)
        moments._GRAM_MEMO.clear()
        first = moments.exact_second_moment(2, 4, cache_dir=str(tmp_path))
        assert (tmp_path / "moment_gram_k2_n4.json").exists()
        moments._GRAM_MEMO.clear()
        again = moments.exact_second_moment(2, 4, cache_dir=str(tmp_path))
        assert first == again
        assert (moments._GRAM_MEMO[(2, 4)] == fresh).all()

    def test_parallel_enumeration_matches_serial(self):
        serial = moments.profile_gram(3, 8, threads=1)
        parallel = moments.profile_gram(3, 8, threads=2)
        assert (serial == parallel).all()


class TestInterpolation:
    def test_k2_polynomials(self):
        interp = moments.interpolate_moments(2)
        diag = RatPoly([F(5, 36), F(-5, 72), F(1, 8)])
        off = RatPoly([F(-5, 36), F(-13, 72), F(1, 8)])
        assert interp.entries[0][0] == diag
        assert interp.entries[1][1] == diag
        assert interp.entries[0][1] == off
        assert interp.entries[1][0] == off

    def test_reproduces_nodes_and_out_of_sample(self):
        # exact at the interpolation nodes and at the fresh point n = 2k+1
        for k in (2, 3, 4):
            interp = moments.interpolate_moments(k)
            for n in list(range(k, 2 * k + 1)) + [2 * k + 1]:
                exact = moments.exact_second_moment(k, n)
                c = comb(n, k)
                values = interp.evaluate(n)
                kk = factorial(k)
                for a in range(kk):
                    for b in range(kk):
                        assert values[a][b] == c * exact[a][b]

    def test_row_sums(self):
        # sum_t entry(s, t) at any n equals C(n,k)/k! since densities sum to 1
        for k in (2, 3):
            interp = moments.interpolate_moments(k)
            for n in (k, k + 3, 17, 100):
                values = interp.evaluate(n)
                for row in values:
                    assert sum(row) == F(comb(n, k), factorial(k))

    def test_symmetry(self):
        interp = moments.interpolate_moments(3)
        for a in range(6):
            for b in range(6):
                assert interp.entries[a][b] == interp.entries[b][a]


class TestNormalizedLimit:
    def test_k2_block_values(self):
        # blocks carry a symbolic n^((r+s)/2); with it multiplied in, the
        # entries read (1/4)n^2 - (1/4)n and (1/9)n^2 + (5/18)n
        basis = build_basis(2)
        conj = moments.conjugate_and_normalize(moments.interpolate_moments(2), basis)
        assert conj.entries[0][0] == RatPoly([0, F(-1, 4), F(1, 4)])
        assert conj.entries[1][1] == RatPoly([F(5, 18), F(1, 9)])
        shifted = RatPoly([0]) + RatPoly([0, 1]) * conj.entries[1][1]
        assert shifted == RatPoly([0, F(5, 18), F(1, 9)])
        assert conj.entries[0][1].degree == -1 and conj.entries[1][0].degree == -1
        assert moments.normalized_limit(conj.entries[0][0], 0, 0, 2) == QNum.from_rational(F(1, 2))
        assert moments.normalized_limit(conj.entries[1][1], 1, 1, 2) == QNum.from_rational(F(2, 9))

    def test_degree_rules_synthetic(self):
        poly = RatPoly([F(1), F(2), F(3)])  # degree 2
        assert moments.normalized_limit(poly, 0, 0, 2) == QNum.from_rational(6)
        assert moments.normalized_limit(poly, 1, 1, 3) == QNum.from_rational(18)
        assert moments.normalized_limit(RatPoly([F(7)]), 0, 0, 2) == ZERO
        assert moments.normalized_limit(RatPoly([]), 1, 2, 3) == ZERO
        with pytest.raises(Diverges):
            moments.normalized_limit(poly, 1, 1, 2)
        with pytest.raises(Diverges):
            moments.normalized_limit(poly, 1, 2, 2)

    def test_odd_block_sum_cannot_have_nonzero_limit(self):
        # deg at the odd threshold is impossible; just below gives zero
        poly = RatPoly([F(1), F(1)])  # degree 1
        assert moments.normalized_limit(poly, 0, 1, 2) == ZERO


class TestVerification:
    def test_k2_report(self):
        report = moments.verify_diagonalization(2)
        assert report.passed
        assert [str(d.limit) for d in report.diagonal] == ["1/2", "2/9"]
        assert all(d.rational for d in report.diagonal)
        assert report.checked_pairs == 3
        data = report.to_json_dict()
        assert data["result"] == "PASS"
        assert data["offdiagonal"] == {"certificate": "all off-diagonal limits exactly zero"}

    def test_k3_report(self):
        report = moments.verify_diagonalization(3)
        assert report.passed
        assert len(report.diagonal) == 6
        assert all(d.positive for d in report.diagonal)
        assert not report.violations

    def test_cross_block_limits_vanish_k3(self):
        basis = build_basis(3)
        conj = moments.conjugate_and_normalize(moments.interpolate_moments(3), basis)
        for a in range(6):
            for b in range(6):
                if conj.block[a] != conj.block[b]:
                    lim = moments.normalized_limit(
                        conj.entries[a][b], conj.block[a], conj.block[b], 3
                    )
                    assert lim.is_zero()


def _doctored_generator_file(tmp_path):
    """A valid orthogonal 2-dim representation of S_3 whose matrix elements
    span V_1 in a rotated basis: expansion must succeed, diagonalization
    must fail."""
    import json

    from permprofile._generators import q
    from permprofile.qfield import qdot
    from permprofile.reps import load_generators

    rot = [[q(1, 2), q(-1, 2, 3)], [q(1, 2, 3), q(1, 2)]]  # 60-degree rotation
    rot_t = [list(r) for r in zip(*rot)]

    def matmul(a, b):
        bt = list(zip(*b))
        return [[qdot(r, c) for c in bt] for r in a]

    tau, rho = load_generators(3, (2, 1))
    conj = {
        "tau": matmul(matmul(rot_t, [list(r) for r in tau]), rot),
        "rho": matmul(matmul(rot_t, [list(r) for r in rho]), rot),
    }
    records = [
        {
            "k": 3,
            "lambda": [2, 1],
            "tau": [[e.to_json_dict() for e in row] for row in conj["tau"]],
            "rho": [[e.to_json_dict() for e in row] for row in conj["rho"]],
        }
    ]
    path = tmp_path / "rotated_gens.json"
    path.write_text(json.dumps(records))
    return str(path)


class TestBasisChoiceMatters:
    def test_rotated_basis_fails_diagonalization(self, tmp_path):
        # a similar (conjugated) representation is still a representation,
        # but its matrix elements no longer diagonalize the limit matrix
        path = _doctored_generator_file(tmp_path)
        report = moments.verify_diagonalization(3, generator_file=path)
        assert not report.passed
        assert report.violations
        assert all(v["row"][0] == "(2, 1)" for v in report.violations)
        data = report.to_json_dict()
        assert data["result"] == "FAIL"
        assert "counterexamples" in data["offdiagonal"]


class TestCovLimit:
    def test_k2_matrix(self):
        c2 = moments.cov_limit(2)
        assert c2 == [[F(1, 9), F(-1, 9)], [F(-1, 9), F(1, 9)]]
        assert moments.rational_rank(c2) == 1

    def test_row_sums_vanish(self):
        for k in (2, 3):
            ck = moments.cov_limit(k)
            for row in ck:
                assert sum(row) == 0

    def test_rank_is_square_of_k_minus_one(self):
        assert moments.rational_rank(moments.cov_limit(3)) == 4

    def test_rank_helper(self):
        assert moments.rational_rank([[F(1), F(2)], [F(2), F(4)]]) == 1
        assert moments.rational_rank([[F(0), F(0)], [F(0), F(0)]]) == 0
        assert moments.rational_rank([[F(1), F(0)], [F(0), F(1)]]) == 2
