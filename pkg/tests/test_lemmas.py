import logging

import pytest

from app.errors import BudgetExceededError, InvalidParameterError
from app.lemmas import (
    count_n2,
    count_n3,
    count_n4,
    curve_system_histogram,
    reduced_n3_solutions,
    residue_case_histogram,
    residue_class_reconciliation,
    scaling_reduction_check,
    unit_system_histogram,
)

logger = logging.getLogger(__name__)


@pytest.fixture(params=["spec351", "spec352", "spec551"])
def spec_and_field(request):
    spec = request.getfixturevalue(request.param)
    fd = request.getfixturevalue("fd35" if spec.p == 3 else "fd55")
    return spec, fd


def test_count_n2(spec_and_field):
    spec, fd = spec_and_field
    report = count_n2(spec, fd)
    assert report.match
    assert report.computed == str(fd.q)


def test_count_n3(spec_and_field):
    spec, fd = spec_and_field
    report = count_n3(spec, fd)
    assert report.match
    assert report.computed == str(fd.q * fd.p + fd.q - fd.p)
    assert report.details["reduced_in_prime_field"]


def test_reduced_n3_solutions_are_the_prime_field(spec351, fd35):
    assert reduced_n3_solutions(spec351, fd35) == [0, 1, 2]


def test_count_n4(spec_and_field):
    spec, fd = spec_and_field
    report = count_n4(spec, fd)
    assert report.match
    assert report.details["decomposition_holds"]
    assert report.details["degenerate_buckets"] == 0
    assert report.details["pairs"] == fd.q ** 2


def test_counts_respect_budget(spec351, fd35):
    with pytest.raises(BudgetExceededError):
        count_n3(spec351, fd35, budget=1000)


def test_unit_system_histogram(spec351, fd35):
    report = unit_system_histogram(spec351, fd35)
    assert report.match
    assert report.hard
    assert report.details["unit_members"] == [0, 1, 2]
    histogram = {e.count: int(e.multiplicity) for e in report.histogram}
    assert histogram == {3: 1, 4: 30, 2: 60, 0: 242 ** 2 - 91}


def test_unit_system_histogram_p5(spec551, fd55):
    report = unit_system_histogram(spec551, fd55)
    assert report.match
    histogram = {e.count: int(e.multiplicity) for e in report.histogram}
    assert histogram[5] == 1
    assert histogram[6] == 260
    assert histogram[4] == 390


def test_scaling_reduction(spec351, fd35):
    report = scaling_reduction_check(spec351, fd35, samples=50, seed=1)
    assert report.match
    assert report.details["degenerate_solutions"] == 0


def test_scaling_reduction_rejects_empty_sample(spec351, fd35):
    with pytest.raises(InvalidParameterError):
        scaling_reduction_check(spec351, fd35, samples=0)


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_residue_case_histograms(spec351, fd35, case):
    report = residue_case_histogram(spec351, fd35, case)
    assert report.hard
    assert report.match, report.computed
    logger.info(f"case {case}: (1,1) count {report.details['unit_count']}, printed {report.details['unit_predicted']}")


def test_residue_case_counts_at_unit(spec351, fd35):
    counts = {case: residue_case_histogram(spec351, fd35, case).details["unit_count"] for case in (1, 2, 3, 4)}
    assert counts == {1: 1, 2: 1, 3: 2, 4: 1}


def test_residue_cases_are_soft_for_p_one_mod_four(spec551, fd55):
    assert not residue_case_histogram(spec551, fd55, 1).hard


def test_unknown_case(spec351, fd35):
    with pytest.raises(InvalidParameterError):
        residue_case_histogram(spec351, fd35, 5)


def test_residue_class_reconciliation(spec351, fd35):
    report = residue_class_reconciliation(spec351, fd35)
    assert report.match
    assert report.details["unit_classes"] == {
        "zero/square": 1,
        "square/zero": 1,
        "nonsquare/nonsquare": 1,
    }


def test_curve_difference_system(spec351, fd35):
    report = curve_system_histogram(spec351, fd35, "difference")
    assert report.match
    assert report.details["unit_count"] == 2
    assert report.details["total_solutions"] == 242
    histogram = {e.count: int(e.multiplicity) for e in report.histogram}
    assert histogram == {4: 60, 0: 181}


def test_curve_sum_system(spec351, fd35):
    report = curve_system_histogram(spec351, fd35, "sum")
    assert report.match
    assert report.details["unit_count"] == 4
    assert report.details["total_solutions"] == 244
    histogram = {e.count: int(e.multiplicity) for e in report.histogram}
    assert histogram == {8: 30, 0: 211}


def test_curve_rejects_unknown_sign(spec351, fd35):
    with pytest.raises(InvalidParameterError):
        curve_system_histogram(spec351, fd35, "product")
