import itertools
import logging
import math

import numpy as np
import pytest

from quarticflex._geometry import chordal_distance, contact_order, tangent_at
from quarticflex._group import fixed_locus, klein_four, stabilizer
from quarticflex._kuribayashi import (
    CLASSIFICATION_TABLES,
    RESULTANT_CONSTANT,
    NotSmooth,
    Params,
    SpecialLoci,
    TableMismatch,
    TableRow,
    build_curve,
    classify,
    hyperflex_branch_parameters,
    permutation_matrix,
    random_params,
    reproduce_example,
    special_flex_conditions,
    sweep_resultant_identities,
    two_parameter_reduction,
    verify_resultant_identities,
    worked_examples,
)
from quarticflex._poly import UPoly
from quarticflex._solve import all_roots

#: Case III parameters, P1 vanishes on the second branch
III_PARAMS = Params(3, 6 - 3 * math.sqrt(3), 4)


def example(name):
    return next(e for e in worked_examples() if e.name == name)


def random_complex(rng, bound=4.0):
    return complex(*rng.uniform(-bound, bound, size=2))


def tangent_intersection_count(F, record):
    """Intersections of the curve with the tangent at `record`, with multiplicity."""
    line = tangent_at(F, record.point)
    restricted = line.parametrization(F)
    order = contact_order(F, line)
    assert order == record.contact_order
    remainder = UPoly(restricted.coeffs[order:])
    away = all_roots(remainder).total_multiplicity if remainder.degree() >= 1 else 0
    # Points of the line at t = ∞ lie on the curve when the degree drops
    return order + away + (4 - restricted.degree())


class Test_Params:
    def test_complex_coercion(self):
        params = Params(1, 2.5, "3-1j")
        assert params.c == 3 - 1j
        assert isinstance(params.a, complex)
        assert list(params) == [1, 2.5, 3 - 1j]

    # fmt: off
    @pytest.mark.parametrize(
        ("params", "factors"),
        [
            ((1, 0, 0),      ("a^2-1",)),
            ((0, -2, 0),     ("b^2-4", "a^2+b^2+c^2-abc-4")),
            ((0, 3, 1),      ("c^2-1",)),
            ((3, 3, 7),      ("a^2+b^2+c^2-abc-4",)),
        ],
    )
    # fmt: on
    def test_singular(self, params, factors):
        params = Params(*params)
        assert not params.smooth()
        assert params.vanishing_factors() == factors
        with pytest.raises(NotSmooth, match="is singular") as info:
            params.check_smooth()
        assert info.value.factors == factors

    def test_smooth(self):
        assert Params(3, 3, 0).smooth()
        assert Params(1 + 1e-6, 0, 0).smooth()
        Params(0, 0, 0).check_smooth()

    def test_permuted(self):
        assert Params(1, 2, 3).permuted((1, 0, 2)) == Params(1, 3, 2)
        assert Params(1, 2, 3).permuted((0, 1, 2)) == Params(1, 2, 3)

    def test_permutation_matrix(self):
        P = permutation_matrix((2, 0, 1))
        np.testing.assert_array_equal(P @ [7, 8, 9], [9, 7, 8])
        with pytest.raises(ValueError, match="permutation"):
            permutation_matrix((0, 0, 1))

    def test_to_dict(self):
        assert Params(1, 2j, 0).to_dict() == {
            "a": [1.0, 0.0],
            "b": [0.0, 2.0],
            "c": [0.0, 0.0],
        }


class Test_build_curve:
    def test_coefficients(self):
        F = build_curve((3, 1.5, 1j))
        assert F.degree() == 4
        assert F.is_homogeneous()
        assert F.coefficient((2, 2, 0)) == 3
        assert F.coefficient((2, 0, 2)) == 1.5
        assert F.coefficient((0, 2, 2)) == 1j

    def test_singular(self):
        with pytest.raises(NotSmooth):
            build_curve(Params(2, 0, 0))
        assert not build_curve(Params(2, 0, 0), check=False).is_zero


class Test_SpecialLoci:
    # fmt: off
    @pytest.mark.parametrize(
        ("params", "case", "vanishing"),
        [
            ((0, 0, 0),                             "I",   ("P1", "P2", "P3")),
            ((6, 0, 0),                             "I",   ("P3",)),
            ((1.2, 6 / 5**0.5, 6 / 5**0.5),         "II",  ("P1", "P2")),
            (tuple(III_PARAMS),                     "III", ("P1",)),
            ((3, 3, 0),                             "IV",  ()),
            ((3, 3, 3),                             "IV",  ()),
        ],
    )
    # fmt: on
    def test_cases(self, params, case, vanishing):
        loci = SpecialLoci.from_params(Params(*params))
        assert loci.case == case
        assert loci.vanishing == vanishing

    def test_near_miss(self, caplog):
        params = Params(III_PARAMS.a + 1e-5, III_PARAMS.b, III_PARAMS.c)
        with caplog.at_level(logging.WARNING):
            loci = SpecialLoci.from_params(params)
        assert loci.case == "IV"
        assert loci.near_misses(params.scale) == ("P1",)
        assert "P1 = " in caplog.text
        assert "treated as nonzero" in caplog.text


class Test_hyperflex_branch_parameters:
    def test_both_branches_on_locus(self):
        b, c = 1 + 2j, -0.5 + 0.3j
        for a in hyperflex_branch_parameters(b, c):
            assert abs(a**2 + b**2 - a * b * c) < 1e-12

    def test_case_three_parameters(self):
        first, second = hyperflex_branch_parameters(III_PARAMS.b, III_PARAMS.c)
        assert first == pytest.approx(21 - 12 * math.sqrt(3))
        assert second == pytest.approx(3)

    @pytest.mark.parametrize("seed", range(20))
    def test_hyperflexes_on_first_branch(self, seed):
        rng = np.random.default_rng(seed)
        while True:
            b, c = random_complex(rng), random_complex(rng)
            params = Params(hyperflex_branch_parameters(b, c)[0], b, c)
            if params.smooth():
                break
        report = classify(params)
        assert "P1" in report.loci.vanishing
        beta = np.sqrt(complex((-c - np.sqrt(complex(c**2 - 4))) / 2))
        for point in [(0, beta, 1), (0, -beta, 1)]:
            nearest = min(report.flexes, key=lambda r: chordal_distance(point, r.point))
            assert chordal_distance(point, nearest.point) < 1e-6
            assert nearest.contact_order == 4

    @pytest.mark.parametrize("seed", range(20))
    def test_no_flex_on_coordinate_line_off_locus(self, seed):
        params = random_params(np.random.default_rng(seed))
        report = classify(params)
        assert report.loci.vanishing == ()
        assert not any(r.point.is_on_axis_line("x") for r in report.flexes)


class Test_special_flex_conditions:
    def test_second_branch(self):
        x0, y0, z0 = special_flex_conditions(III_PARAMS)
        assert x0.vanishes
        assert x0.branch == "inverse_beta"
        assert x0.matched_formulas == ("a = (bc + b√(c²-4))/2",)
        assert x0.contact_orders == (4, 4)
        for point in x0.points:
            assert point[1] ** 2 == pytest.approx(math.sqrt(3) - 2)
        assert not y0.positive
        assert not z0.positive

    def test_no_hyperflexes(self):
        reports = special_flex_conditions(Params(3, 3, 0))
        assert [r.slice for r in reports] == ["x=0", "y=0", "z=0"]
        assert not any(r.positive for r in reports)
        assert all(r.branch is None for r in reports)

    def test_to_dict(self):
        data = special_flex_conditions(III_PARAMS)[0].to_dict()
        assert data["slice"] == "x=0"
        assert data["locus"] == "P1"
        assert data["contact_orders"] == [4, 4]
        assert len(data["points"]) == 2

    def test_singular(self):
        with pytest.raises(NotSmooth):
            special_flex_conditions(Params(1, 0, 0))


def test_table_row_label():
    assert CLASSIFICATION_TABLES["I"][0].label == "I: 0/12 (a = 0, 6)"
    assert TableRow("IV", 24, 0, "6_4", "").label == "IV: 24/0"
    for rows in CLASSIFICATION_TABLES.values():
        for row in rows:
            assert row.ordinary + 2 * row.hyperflex == 24


class Test_classify:
    def test_general_case(self):
        report = classify((3, 3, 0))
        assert report.case == "IV"
        assert (report.ordinary_count, report.hyperflex_count) == (24, 0)
        assert report.orbit_shape == "6_4"
        assert report.table_row == "IV: 24/0"
        assert report.matched
        assert report.raise_for_mismatch() is report

    def test_all_hyperflexes(self):
        report = classify(Params(6, 0, 0))
        assert report.case == "I"
        assert (report.ordinary_count, report.hyperflex_count) == (0, 12)
        assert report.hyperflex_shape == "2_2, 2_4"
        assert report.table_row == "I: 0/12 (a = 0, 6)"

    @pytest.mark.parametrize("a", [3, 5, -0.5])
    def test_single_parameter(self, a):
        report = classify(Params(a, 0, 0))
        assert (report.ordinary_count, report.hyperflex_count) == (16, 4)
        assert report.orbit_shape == "4_4 + 2_2"
        assert report.table_row == "I: 16/4 (otherwise)"

    def test_case_three(self):
        report = classify(III_PARAMS)
        assert report.case == "III"
        assert (report.ordinary_shape, report.hyperflex_shape) == ("5_4", "1_2")

    @pytest.mark.parametrize("params", [(6 / 5, 6 / 5**0.5, 6 / 5**0.5), (3, 3, 3)])
    def test_twelve_hyperflexes(self, params):
        report = classify(params)
        assert (report.ordinary_count, report.hyperflex_count) == (0, 12)
        assert report.matched

    @pytest.mark.parametrize("params", [tuple(III_PARAMS), (0.7 - 1.3j, 2.1 + 0.4j, -1.6j)])
    def test_coordinate_permutations(self, params):
        reference = classify(params)
        for order in itertools.permutations(range(3)):
            report = classify(Params(*params).permuted(order))
            assert (report.ordinary_count, report.hyperflex_count) == (
                reference.ordinary_count,
                reference.hyperflex_count,
            )
            assert report.orbit_shape == reference.orbit_shape
            assert report.case == reference.case

    def test_large_parameters(self):
        report = classify((-15.07 + 2.98j, 2.06 + 3.77j, -1.16 + 3.14j))
        assert report.ordinary_count + 2 * report.hyperflex_count == 24
        assert report.case == "IV"

    def test_fermat_is_unmatched(self, caplog):
        report = classify(Params(0, 0, 0))
        assert report.hyperflex_shape == "6_2"
        assert not report.matched
        assert "counts match row I: 0/12" in report.diagnostics["mismatch"]
        assert "counts match row" in caplog.text
        with pytest.raises(TableMismatch, match="matches no table row") as info:
            report.raise_for_mismatch()
        assert info.value.report is report

    def test_to_dict(self):
        data = classify((3, 3, 0)).to_dict()
        assert set(data) == {
            "params",
            "case",
            "ordinary",
            "hyperflex",
            "orbit_shape",
            "table_row",
            "flexes",
            "diagnostics",
        }
        assert len(data["flexes"]) == 24
        assert len(data["diagnostics"]["orbits"]) == 6
        assert data["diagnostics"]["orbits"][0]["stabilizer_order"] == 1

    def test_singular(self):
        with pytest.raises(NotSmooth, match="a\\^2-4"):
            classify((2, 0, 0))


class Test_random_curves:
    @pytest.mark.parametrize("seed", range(200))
    def test_flex_structure(self, seed):
        params = random_params(np.random.default_rng(seed))
        F = build_curve(params)
        report = classify(params)
        assert sum(r.weight for r in report.flexes) == 24

        G = klein_four()
        for flex_orbit in report.orbits:
            assert 4 % flex_orbit.orbit.size == 0
            for point in flex_orbit.orbit.points:
                nearest = min(report.flexes, key=lambda r: chordal_distance(point, r.point))
                assert chordal_distance(point, nearest.point) < 1e-6
                assert nearest.contact_order == flex_orbit.contact_order

        for fixed in fixed_locus(G, F):
            assert fixed.size * fixed.stabilizer_order == 4
            assert len(stabilizer(G, fixed.representative)) == fixed.stabilizer_order

        for record in report.flexes:
            assert tangent_intersection_count(F, record) == 4


class Test_verify_resultant_identities:
    @pytest.mark.parametrize(
        "params", [(3, 3, 0), (0.5 + 1j, -2.2, 1.7j), tuple(III_PARAMS)]
    )
    def test_identities(self, params):
        checks = verify_resultant_identities(params)
        assert [check.slice for check in checks] == ["x=0", "y=0", "z=0"]
        assert max(check.relative_error for check in checks) < 1e-8

    def test_printed_constant_is_off_by_nine(self):
        assert RESULTANT_CONSTANT == 9 * 2985984
        for check in verify_resultant_identities((0.5 + 1j, -2.2, 1.7j)):
            assert check.printed_ratio == pytest.approx(9)

    def test_vanishing_locus(self):
        x0 = verify_resultant_identities(III_PARAMS)[0]
        assert x0.closed_form == pytest.approx(0, abs=1e-3)
        assert x0.relative_error < 1e-8

    def test_singular_parameters(self):
        checks = verify_resultant_identities((2, 0, 0))
        assert max(check.relative_error for check in checks) < 1e-8


class Test_sweep_resultant_identities:
    def test_random_samples(self):
        summary = sweep_resultant_identities(3, seed=1)
        assert summary["samples"] == 3
        assert summary["passed"]
        assert summary["max_relative_error"] <= summary["threshold"]
        assert summary["printed_ratio"] == pytest.approx(9)
        assert 0 < summary["contact_checks"] <= 6
        assert summary["contact_failures"] == 0
        assert sweep_resultant_identities(3, seed=1) == summary

    def test_no_samples(self, caplog):
        summary = sweep_resultant_identities(0)
        assert summary["passed"]
        assert summary["max_relative_error"] == 0.0
        assert "passes vacuously" in caplog.text


def test_random_params():
    rng = np.random.default_rng(5)
    for _ in range(10):
        params = random_params(rng, bound=2.0)
        assert params.smooth()
        assert all(abs(v.real) <= 2 and abs(v.imag) <= 2 for v in params)


class Test_two_parameter_reduction:
    # fmt: off
    @pytest.mark.parametrize(
        ("a", "b", "block", "counts"),
        [
            (3,     0,              "b=0",  (16, 4)),
            (1.2,   6 / 5**0.5,     "P=0",  (0, 12)),
            (3,     3,              "P!=0", (0, 12)),
        ],
    )
    # fmt: on
    def test_blocks(self, a, b, block, counts):
        reduction = two_parameter_reduction(a, b)
        assert reduction.block == block
        assert reduction.consistent
        report = reduction.report
        assert (report.ordinary_count, report.hyperflex_count) == counts
        assert reduction.to_dict()["diagnostics"]["block"] == block

    @pytest.mark.parametrize("seed", range(20))
    def test_random_pairs(self, seed):
        rng = np.random.default_rng(seed)
        while True:
            a, b = random_complex(rng), random_complex(rng)
            if Params(a, b, b).smooth():
                break
        reduction = two_parameter_reduction(a, b)
        assert reduction.block == "P!=0"
        assert reduction.consistent

    @pytest.mark.parametrize("seed", range(20))
    def test_random_pairs_on_vanishing_locus(self, seed):
        rng = np.random.default_rng(seed)
        sign = 1 if seed % 2 else -1
        while True:
            b = random_complex(rng)
            a = (b**2 + sign * np.sqrt(complex(b**4 - 4 * b**2))) / 2
            if Params(a, b, b).smooth():
                break
        reduction = two_parameter_reduction(a, b)
        assert reduction.block == "P=0"
        assert reduction.consistent
        assert reduction.report.hyperflex_count > 0


class Test_worked_examples:
    def test_catalogue(self):
        names = [e.name for e in worked_examples()]
        assert names == [
            "I(a=0)",
            "I(a=6)",
            "II(1)",
            "II(2)",
            "II(3)",
            "III(1)",
            "IV(1)",
            "IV(2)",
            "IV(3)",
            "IV(4)",
        ]
        singular = [e.name for e in worked_examples() if not e.params.smooth()]
        assert singular == ["IV(2)"]

    def test_reproduce_general_case(self):
        check = reproduce_example(example("IV(1)"))
        assert check.counts_match
        assert check.shapes_match
        assert check.unmatched_representatives == ()
        assert check.reproduced
        assert check.passed

    def test_reproduce_case_three(self):
        check = reproduce_example(example("III(1)"))
        assert check.counts_match
        assert check.shapes_match
        assert check.unmatched_representatives == ()

    def test_misprinted_representative(self):
        published = example("II(1)")
        check = reproduce_example(published)
        assert check.counts_match
        assert check.shapes_match
        assert check.unmatched_representatives == (published.representatives[4],)
        assert not check.reproduced
        assert check.passed
        # The conjugate of the sixth representative is a flex
        conjugate = tuple(complex(v).conjugate() for v in published.representatives[5])
        distance = min(chordal_distance(conjugate, r.point) for r in check.report.flexes)
        assert distance < 1e-4

    def test_documented_discrepancy(self):
        check = reproduce_example(example("I(a=0)"))
        assert check.counts_match
        assert check.shapes_match is False
        assert not check.reproduced
        assert check.passed

    def test_unstated_counts(self):
        check = reproduce_example(example("IV(4)"))
        assert check.counts_match
        assert check.shapes_match is None

    def test_singular_example(self, caplog):
        caplog.set_level(logging.INFO)
        check = reproduce_example(example("IV(2)"))
        assert check.report is None
        assert check.singular == ("a^2+b^2+c^2-abc-4",)
        assert not check.reproduced
        assert check.passed
        assert "example IV(2) is singular" in caplog.text
