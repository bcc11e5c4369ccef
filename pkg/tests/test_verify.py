import logging

import pytest

from app.errors import InvalidParameterError
from app.verify import SUITES, VerificationSuite, within_sigma

logger = logging.getLogger(__name__)


@pytest.fixture
def suite351(spec351, fd35):
    return VerificationSuite(spec351, fd35, samples=20, seed=0)


def test_examples_suite_needs_no_parameters():
    report = VerificationSuite(None, None).run("examples")
    assert report.passed
    assert len(report.reports) == 3
    enumerators = [r.details["enumerator"] for r in report.reports]
    assert "1+14520z^108+2548260z^144+9740258z^162+2038608z^180+7260z^216" in enumerators


def test_suite_requires_parameters():
    with pytest.raises(InvalidParameterError, match="needs --p"):
        VerificationSuite(None, None).run("n3")


def test_unknown_suite(suite351):
    with pytest.raises(InvalidParameterError):
        suite351.run("everything")


def test_lemmas_suite(suite351):
    report = suite351.run("lemmas")
    assert report.passed
    assert [r.lemma for r in report.reports] == ["N2", "N3", "N4"]


def test_appendix_suite(suite351):
    report = suite351.run("appendix")
    assert report.passed
    assert all(r.match for r in report.reports if r.hard)
    lemmas = [r.lemma for r in report.reports]
    assert lemmas[:2] == ["unit-system", "scaling"]
    assert "curve-sum" in lemmas


def test_moments_suite(suite351):
    report = suite351.run("moments")
    assert report.passed
    assert len(report.reports) == 4


def test_moments_are_soft_for_general_e():
    from app.code import validate_spec
    from app.field import construct_field

    spec = validate_spec(3, 10, 2, "t3")
    report = VerificationSuite(spec, construct_field(3, 10)).run("moments")
    assert report.passed
    assert not report.reports[0].hard


def test_frequency_system_suite(suite351):
    report = suite351.run("frequency-system")
    assert report.passed
    assert report.reports[0].computed == "[2548260, 2038608, 14520, 7260]"


def test_delsarte_suite(suite351):
    report = suite351.run("delsarte")
    assert report.passed
    assert {r.lemma for r in report.reports} == {"delsarte", "cyclic-shift", "weight-one-rejected", "codeword-weights"}


def test_sampled_suite(spec372, fd37):
    report = VerificationSuite(spec372, fd37, samples=20_000, seed=11).run("sampled")
    assert report.passed, [r for r in report.reports if not r.match]


def test_sampled_suite_p5(spec551, fd55):
    report = VerificationSuite(spec551, fd55, samples=20_000, seed=11).run("sampled")
    assert report.passed, [r for r in report.reports if not r.match]


def test_sampled_suite_general_e_rank_and_support(spec3102, fd310):
    report = VerificationSuite(spec3102, fd310, samples=3000, seed=1).run("sampled")
    records = {r.lemma: r for r in report.reports}
    for lemma in ("sampled-support", "sampled-weights", "sampled-rank-consistency"):
        assert records[lemma].match, records[lemma]
    assert records["sampled-rank-consistency"].computed == "0"


@pytest.mark.slow
def test_sampled_suite_general_e(spec3102, fd310):
    report = VerificationSuite(spec3102, fd310, samples=100_000, seed=1).run("sampled")
    assert report.passed, [r for r in report.reports if not r.match]


def test_rank_suite_over_budget_is_skipped_in_all(spec372, fd37):
    suite = VerificationSuite(spec372, fd37, budget=10 ** 8, samples=200, seed=5)
    report = suite.run("all")
    skipped = [r for r in report.reports if r.lemma == "rank"]
    assert skipped and not skipped[0].hard
    assert report.passed


@pytest.mark.slow
def test_rank_suite(spec351, fd35):
    report = VerificationSuite(spec351, fd35, jobs=2).run("rank")
    assert report.passed
    lemmas = {r.lemma: r for r in report.reports}
    assert lemmas["rank-value-consistency"].computed == "0"
    assert lemmas["exact-moments"].match


def test_within_sigma():
    verdict = within_sigma({0: 500, 1: 500}, {0: 0.5, 1: 0.5}, 1000)
    assert verdict == {0: True, 1: True}
    verdict = within_sigma({0: 900, 1: 100}, {0: 0.5, 1: 0.5}, 1000)
    assert verdict == {0: False, 1: False}


def test_suite_names():
    assert "all" in SUITES
    assert "examples" in SUITES
