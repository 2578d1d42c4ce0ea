import json
from fractions import Fraction
from math import factorial

import pytest

from permprofile._generators import q
from permprofile.errors import HomomorphismViolation, InvalidTableau, MissingGenerators
from permprofile.perms import Permutation, all_permutations
from permprofile.qfield import ONE, ZERO, QNum, qdot, sqrt_rational
from permprofile.reps import (
    GroupAlgebraElt,
    build_basis,
    column_group,
    coset_sum,
    dim_partition,
    expand_rep,
    load_generators,
    partitions,
    project,
    read_generator_file,
    rep_table,
    rotation,
    row_group,
    standard_tableaux_count,
    subgroup_fixing_prefix,
    transposition,
    young_symmetrizer,
)


class TestPartitions:
    def test_canonical_order(self):
        assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
        assert partitions(5)[0] == (5,)
        # first parts are non-increasing, so blocks come out contiguous
        for k in range(1, 8):
            firsts = [lam[0] for lam in partitions(k)]
            assert firsts == sorted(firsts, reverse=True)

    def test_dimension_examples(self):
        assert dim_partition((3, 1)) == 3
        assert dim_partition((2, 2)) == 2
        assert dim_partition((2, 1, 1)) == 3
        for k in range(1, 7):
            assert dim_partition((k,)) == 1
            assert dim_partition((1,) * k) == 1

    def test_sum_of_squares(self):
        for k in range(1, 7):
            assert sum(dim_partition(lam) ** 2 for lam in partitions(k)) == factorial(k)

    def test_hook_formula_vs_tableau_enumeration(self):
        for k in range(1, 6):
            for lam in partitions(k):
                assert dim_partition(lam) == standard_tableaux_count(lam)


class TestGenerators:
    def test_embedded_literals(self):
        tau3, rho3 = load_generators(3, (2, 1))
        assert tau3 == ((q(-1, 2), q(1, 2, 3)), (q(1, 2, 3), q(1, 2)))
        assert rho3 == ((q(-1, 2), q(-1, 2, 3)), (q(1, 2, 3), q(-1, 2)))
        _, rho4 = load_generators(4, (2, 2))
        assert rho4 == ((q(1, 2), q(1, 2, 3)), (q(1, 2, 3), q(-1, 2)))

    def test_one_dimensional_reps(self):
        for k in range(2, 7):
            tau_m, rho_m = load_generators(k, (k,))
            assert tau_m == ((ONE,),) and rho_m == ((ONE,),)
            tau_m, rho_m = load_generators(k, (1,) * k)
            assert tau_m == ((-ONE,),)
            assert rho_m == ((ONE if (k - 1) % 2 == 0 else -ONE,),)

    def test_missing_generators(self):
        with pytest.raises(MissingGenerators):
            load_generators(6, (3, 2, 1))

    def test_generator_file_round_trip(self, tmp_path):
        records = []
        for lam in partitions(3):
            tau_m, rho_m = load_generators(3, lam)
            records.append(
                {
                    "k": 3,
                    "lambda": list(lam),
                    "tau": [[e.to_json_dict() for e in row] for row in tau_m],
                    "rho": [[e.to_json_dict() for e in row] for row in rho_m],
                }
            )
        path = tmp_path / "gens.json"
        path.write_text(json.dumps(records))
        table = read_generator_file(path, 3)
        assert set(table) == set(partitions(3))
        for lam in partitions(3):
            assert expand_rep(3, lam, generator_file=path).matrices == rep_table(3, lam).matrices
        # records for other k are ignored
        assert read_generator_file(path, 6) == {}


class TestExpansion:
    def test_identity_maps_to_identity(self):
        for k in (2, 3, 4):
            for lam in partitions(k):
                tab = rep_table(k, lam)
                ident = tab.matrix(Permutation.identity(k))
                assert ident == tuple(
                    tuple(ONE if i == j else ZERO for j in range(tab.dim))
                    for i in range(tab.dim)
                )

    def test_group_inverse_gives_matrix_inverse(self):
        tab = rep_table(3, (2, 1))
        for p in all_permutations(3):
            prod = _mat_mul(tab.matrix(p), tab.matrix(p.inverse()))
            assert prod == tab.matrix(Permutation.identity(3))

    def test_standard_rep_character(self):
        # independent oracle: trace of the standard rep = fixed points - 1
        tab = rep_table(3, (2, 1))
        for p in all_permutations(3):
            fixed = sum(1 for i in range(1, 4) if p(i) == i)
            trace = tab.matrix(p)[0][0] + tab.matrix(p)[1][1]
            assert trace == QNum.from_rational(fixed - 1)

    def test_homomorphism_violation_detected(self):
        tau_m, rho_m = load_generators(3, (2, 1))
        bad_tau = (tau_m[0], (-tau_m[1][0], tau_m[1][1]))  # flip one sign
        with pytest.raises(HomomorphismViolation):
            expand_rep(3, (2, 1), gens=(bad_tau, rho_m))

    def test_generators_placed_at_their_words(self):
        tab = rep_table(3, (2, 1))
        assert tab.matrix(transposition(3)) == load_generators(3, (2, 1))[0]
        assert tab.matrix(rotation(3)) == load_generators(3, (2, 1))[1]


def _mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(qdot(row, col) for col in bt) for row in a)


class TestBasis:
    def test_u2_literal(self):
        basis = build_basis(2)
        half = sqrt_rational(Fraction(1, 2))
        assert basis.columns == ((half, half), (half, -half))
        assert basis.labels == (((2,), 1, 1), ((1, 1), 1, 1))

    def test_trivial_column_is_constant(self):
        for k in (2, 3, 4):
            basis = build_basis(k)
            col = basis.columns[0]
            val = sqrt_rational(Fraction(1, factorial(k)))
            assert all(e == val for e in col)

    def test_block_dimensions(self):
        assert build_basis(3).block_dims() == [1, 4, 1]
        assert build_basis(4).block_dims() == [1, 9, 13, 1]

    def test_orthonormal_columns_small(self):
        for k in (2, 3):
            basis = build_basis(k)
            for a in range(basis.size):
                for b in range(a, basis.size):
                    want = ONE if a == b else ZERO
                    assert qdot(basis.columns[a], basis.columns[b]) == want

    def test_column_lookup_and_export(self):
        basis = build_basis(3)
        c = basis.column_of_label((2, 1), 2, 2)
        assert basis.block[c] == 1
        data = basis.to_json_dict()
        entry = QNum.from_json_dict(data["columns"][c]["entries"][0])
        assert entry == basis.columns[c][0]
        csv_text = basis.to_csv()
        assert csv_text.splitlines()[0].startswith("pattern,")
        assert len(csv_text.splitlines()) == 7


class TestProjection:
    def test_constant_vector_lives_in_block_zero(self):
        basis = build_basis(3)
        ones = [Fraction(1)] * 6
        assert project(ones, 0, basis) == tuple(QNum.from_rational(1) for _ in range(6))
        for r in (1, 2):
            assert all(e.is_zero() for e in project(ones, r, basis))

    def test_k2_projection_example(self):
        basis = build_basis(2)
        proj = project([Fraction(1), Fraction(0)], 1, basis)
        assert proj == (QNum.from_rational(Fraction(1, 2)), QNum.from_rational(Fraction(-1, 2)))

    def test_projections_sum_to_identity(self, rng):
        for k in (3, 4):
            basis = build_basis(k)
            v = [Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))
                 for _ in range(factorial(k))]
            total = [ZERO] * factorial(k)
            for r in range(k):
                part = project(v, r, basis)
                total = [a + b for a, b in zip(total, part)]
            assert tuple(total) == tuple(QNum.from_rational(x) for x in v)

    def test_parseval(self, rng):
        # sum of squared column projections recovers the squared norm
        basis = build_basis(3)
        v = [Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(6)]
        total = ZERO
        for col in basis.columns:
            c = qdot(col, v)
            total = total + c * c
        assert total == QNum.from_rational(sum(x * x for x in v))


class TestCosetSum:
    def test_single_element_coset(self, rng):
        tab = rep_table(3, (2, 1))
        for p in all_permutations(3):
            for s in all_permutations(3):
                assert coset_sum(tab, 1, p, s) == tab.matrix(p * s)

    def test_full_group_trivial_rep(self):
        tab = rep_table(4, (4,))
        total = coset_sum(tab, 4, Permutation.identity(4), Permutation.identity(4))
        assert total == ((QNum.from_rational(24),),)

    def test_zero_for_small_first_part(self):
        # spot check; the exhaustive sweep lives in the acceptance suite
        tab = rep_table(3, (1, 1, 1))
        for alpha in all_permutations(3):
            total = coset_sum(tab, 2, alpha, Permutation.identity(3))
            assert total == ((ZERO,),)

    def test_zero_cosets_sampled_k5(self, rng):
        # sampled version of the acceptance sweep at k = 5
        perms = all_permutations(5)
        cases = [
            (lam, l)
            for lam in partitions(5)
            for l in range(1, 6)
            if lam[0] < l
        ]
        for lam, l in cases:
            tab = rep_table(5, lam)
            zero = tuple(tuple(ZERO for _ in range(tab.dim)) for _ in range(tab.dim))
            for _ in range(6):
                alpha = perms[rng.integers(120)]
                beta = perms[rng.integers(120)]
                assert coset_sum(tab, l, alpha, beta) == zero

    def test_subgroup_enumeration(self):
        subgroup = subgroup_fixing_prefix(4, 2)
        assert len(subgroup) == 2
        assert all(p(1) == 1 and p(2) == 2 for p in subgroup)


class TestYoungSymmetrizer:
    def test_worked_example(self):
        rows = [(2, 1), (3,)]
        assert [p.images for p in row_group(rows)] == [(1, 2, 3), (2, 1, 3)]
        assert [p.images for p in column_group(rows)] == [(1, 2, 3), (1, 3, 2)]
        c = young_symmetrizer(rows)
        expected = GroupAlgebraElt.from_dict(
            {
                Permutation([1, 2, 3]): Fraction(1),
                Permutation([1, 3, 2]): Fraction(-1),
                Permutation([2, 1, 3]): Fraction(1),
                Permutation([2, 3, 1]): Fraction(-1),
            }
        )
        assert c == expected

    def test_single_row_gives_full_sum(self):
        c = young_symmetrizer([(1, 2, 3)])
        assert c == GroupAlgebraElt.from_dict(
            {p: Fraction(1) for p in all_permutations(3)}
        )

    def test_idempotent_up_to_scalar(self):
        shapes = {
            (2, 1): [(1, 2), (3,)],
            (3, 1): [(1, 2, 3), (4,)],
            (2, 2): [(1, 2), (3, 4)],
            (2, 1, 1): [(1, 2), (3,), (4,)],
            (1, 1, 1): [(1,), (2,), (3,)],
            (4,): [(1, 2, 3, 4)],
        }
        for lam, rows in shapes.items():
            c = young_symmetrizer(rows)
            m = (c * c).is_scalar_multiple_of(c)
            assert m is not None and m > 0
            # the scalar is k!/dim
            k = sum(lam)
            assert m == Fraction(factorial(k), dim_partition(lam))

    def test_invalid_tableaux(self):
        with pytest.raises(InvalidTableau):
            young_symmetrizer([(1, 2), (3, 4, 5)])  # not a partition shape
        with pytest.raises(InvalidTableau):
            young_symmetrizer([(1, 2), (2,)])  # repeated entry
