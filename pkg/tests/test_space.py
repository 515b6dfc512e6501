from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import clustercert as cc
from clustercert.space import SpaceFormatError

import oracles


class TestBuildSpace:
    def test_three_point_construction(self, s3):
        assert s3.n == 3
        assert s3.labels == ("p0", "p1", "p2")
        assert s3.rho(0, 1) == Fraction(1, 2)
        assert s3.rho(2, 0) == 2

    def test_singleton(self):
        space = cc.build_space(["only"], [["0"]])
        assert space.n == 1
        assert space.rho(0, 0) == 0

    def test_empty_space(self):
        assert cc.build_space([], []).n == 0

    def test_asymmetric_rejected(self):
        with pytest.raises(SpaceFormatError, match=r"asymmetric at \(0,1\)"):
            cc.build_space(["a", "b"], [["0", "1"], ["2", "0"]])

    def test_negative_entry_rejected(self):
        with pytest.raises(SpaceFormatError, match=r"negative entry at \(0,1\)"):
            cc.build_space(["a", "b"], [["0", "-1"], ["-1", "0"]])

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(SpaceFormatError, match=r"nonzero diagonal at \(1,1\)"):
            cc.build_space(["a", "b"], [["0", "1"], ["1", "0.25"]])

    def test_ragged_matrix_rejected(self):
        with pytest.raises(SpaceFormatError, match="row 1"):
            cc.build_space(["a", "b"], [["0", "1"], ["1"]])

    def test_bad_token_names_cell(self):
        with pytest.raises(SpaceFormatError, match=r"bad distance at \(0,1\)"):
            cc.build_space(["a", "b"], [["0", "x"], ["x", "0"]])

    def test_duplicate_label_rejected(self):
        with pytest.raises(SpaceFormatError, match="duplicate"):
            cc.build_space(["a", "a"], [["0", "1"], ["1", "0"]])

    def test_whitespace_label_rejected(self):
        with pytest.raises(SpaceFormatError, match="whitespace"):
            cc.build_space(["a b"], [["0"]])

    def test_floats_convert_bit_exactly(self):
        space = cc.build_space(["a", "b"], [[0, 0.5], [0.5, 0]])
        assert space.rho(0, 1) == Fraction(1, 2)

    def test_metric_flag_rejects_triangle_violation(self):
        with pytest.raises(SpaceFormatError, match="triangle violation"):
            cc.build_space(
                ["a", "b", "c"],
                [["0", "1", "5"], ["1", "0", "1"], ["5", "1", "0"]],
                require_metric=True,
            )

    def test_metric_flag_accepts_metric(self, s3):
        # s3 itself is not a metric: 4 > 0.5 + 2.
        with pytest.raises(SpaceFormatError):
            cc.build_space(list(s3.labels), [list(row) for row in s3.dist], require_metric=True)
        cc.build_space(
            ["a", "b", "c"],
            [["0", "1", "2"], ["1", "0", "1.5"], ["2", "1.5", "0"]],
            require_metric=True,
        )


class TestScaleParams:
    def test_exact_rational_scale(self):
        params = cc.ScaleParams(r="0.25", k=3)
        assert params.r == Fraction(1, 4)

    @pytest.mark.parametrize("r,k", [(0, 1), (-1, 1), (1, 0), (1, -2)])
    def test_invalid_params_rejected(self, r, k):
        with pytest.raises(ValueError):
            cc.ScaleParams(r=r, k=k)


class TestClassifyEdge:
    def test_examples(self, s3):
        assert cc.classify_edge(s3, 0, 1, 1) is cc.EdgeClass.SHORT
        assert cc.classify_edge(s3, 0, 2, 1) is cc.EdgeClass.MEDIUM
        assert cc.classify_edge(s3, 1, 2, 1) is cc.EdgeClass.LONG

    def test_inclusive_boundaries(self):
        # rho = r stays short, rho = 3r stays medium.
        space = cc.build_space(["a", "b", "c"], [["0", "1", "3"], ["1", "0", "1"], ["3", "1", "0"]])
        assert cc.classify_edge(space, 0, 1, 1) is cc.EdgeClass.SHORT
        assert cc.classify_edge(space, 0, 2, 1) is cc.EdgeClass.MEDIUM

    def test_self_edge_rejected(self, s3):
        with pytest.raises(ValueError, match="self-edge"):
            cc.classify_edge(s3, 1, 1, 1)

    @given(space=oracles.semimetric_spaces(min_n=2), r=st.sampled_from(oracles.PALETTE[1:]))
    def test_exactly_one_class_per_pair(self, space, r):
        for i in range(space.n):
            for j in range(space.n):
                if i == j:
                    continue
                cls = cc.classify_edge(space, i, j, r)
                d = space.rho(i, j)
                matches = [d <= r, r < d <= 3 * r, d > 3 * r]
                assert matches.count(True) == 1
                assert matches[[cc.EdgeClass.SHORT, cc.EdgeClass.MEDIUM, cc.EdgeClass.LONG].index(cls)]

    @given(space=oracles.semimetric_spaces(min_n=2), r=st.sampled_from(oracles.PALETTE[1:]))
    def test_classification_symmetric(self, space, r):
        for i in range(space.n):
            for j in range(i + 1, space.n):
                assert cc.classify_edge(space, i, j, r) is cc.classify_edge(space, j, i, r)


class TestSubsetDiameter:
    def test_examples(self, s3):
        assert cc.subset_diameter(s3, [0]) == 0
        assert cc.subset_diameter(s3, [0, 1, 2]) == 4
        assert cc.subset_diameter(s3, []) == 0

    @given(space=oracles.semimetric_spaces(min_n=1), data=st.data())
    def test_monotone_under_inclusion(self, space, data):
        subset = data.draw(st.sets(st.integers(0, space.n - 1)))
        superset = subset | data.draw(st.sets(st.integers(0, space.n - 1)))
        assert cc.subset_diameter(space, subset) <= cc.subset_diameter(space, superset)


class TestSetDistance:
    def test_examples(self, s3):
        assert cc.set_distance(s3, [0, 1], [2]) == 2
        assert cc.set_distance(s3, [0], [0, 1]) == 0

    def test_empty_operand_rejected(self, s3):
        with pytest.raises(ValueError, match="empty"):
            cc.set_distance(s3, [], [0])

    @given(space=oracles.semimetric_spaces(min_n=1), data=st.data())
    def test_symmetric_and_dominated_by_pairs(self, space, data):
        a = data.draw(st.sets(st.integers(0, space.n - 1), min_size=1))
        b = data.draw(st.sets(st.integers(0, space.n - 1), min_size=1))
        d = cc.set_distance(space, a, b)
        assert d == cc.set_distance(space, b, a)
        assert all(d <= space.rho(u, v) for u in a for v in b)


class TestFileFormat:
    def test_text_round_trip(self, s3):
        text = cc.dump_space(s3)
        again = cc.load_space(text)
        assert again == s3
        assert cc.dump_space(again) == text

    def test_decimal_strings_parse_exactly(self):
        space = cc.load_space("2\na b\n0 0.50\n0.50 0\n")
        assert space.rho(0, 1) == Fraction(1, 2)

    def test_non_decimal_rationals_round_trip(self):
        space = cc.build_space(["a", "b"], [["0", "1/3"], ["1/3", "0"]])
        again = cc.load_space(cc.dump_space(space))
        assert again.rho(0, 1) == Fraction(1, 3)

    def test_obj_round_trip(self, s3):
        obj = cc.space_to_obj(s3)
        assert obj["n"] == 3
        assert obj["dist"][0][1] == "0.5"
        assert cc.space_from_obj(obj) == s3

    def test_bad_count_line(self):
        with pytest.raises(SpaceFormatError, match="line 1"):
            cc.load_space("many\na b\n0 1\n1 0\n")

    def test_wrong_label_count(self):
        with pytest.raises(SpaceFormatError, match="line 2"):
            cc.load_space("2\na\n0 1\n1 0\n")

    def test_short_row_names_line(self):
        with pytest.raises(SpaceFormatError, match="line 3"):
            cc.load_space("2\na b\n0\n1 0\n")

    def test_trailing_content_rejected(self):
        with pytest.raises(SpaceFormatError, match="trailing"):
            cc.load_space("1\na\n0\nextra\n")

    def test_obj_declared_n_mismatch(self, s3):
        obj = cc.space_to_obj(s3)
        obj["n"] = 5
        with pytest.raises(SpaceFormatError, match="declared n=5"):
            cc.space_from_obj(obj)

    @given(space=oracles.semimetric_spaces())
    def test_round_trip_any_space(self, space):
        assert cc.load_space(cc.dump_space(space)) == space


@pytest.mark.parametrize(
    "value,expected",
    [
        (Fraction(7), "7"),
        (Fraction(1, 2), "0.5"),
        (Fraction(1, 250), "0.004"),
        (Fraction(1, 3), "1/3"),
        (Fraction(-3, 4), "-0.75"),
        (Fraction(0), "0"),
    ],
)
def test_format_rational(value, expected):
    assert cc.format_rational(value) == expected
    assert cc.as_fraction(expected) == value
