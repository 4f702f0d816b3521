import pytest

from verify.suites import SUITES, run_suite


@pytest.mark.parametrize("name", ["ghost", "roundtrip", "tables", "fv", "zbasis", "eps", "exactseq", "phimod", "tangent"])
def test_suite_passes_on_small_sets(name):
    [report] = run_suite(name, max_n=3, samples=2, seed=1)
    assert report.passed, report.failures
    assert report.cases > 0
    assert (report.max, report.samples, report.seed) == (3, 2, 1)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nosuchsuite")


def test_suites_are_reproducible():
    assert run_suite("fv", 4, 3, 7) == run_suite("fv", 4, 3, 7)


@pytest.mark.slow
def test_maximal_ideal_suite():
    [report] = run_suite("maxideal", max_n=12, samples=2)
    assert report.passed, report.failures


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SUITES))
def test_acceptance_run(name):
    [report] = run_suite(name, max_n=12, samples=5)
    assert report.passed, report.failures


@pytest.mark.slow
@pytest.mark.parametrize("name", ["tables", "fv", "zbasis"])
def test_acceptance_run_up_to_24(name):
    [report] = run_suite(name, max_n=24, samples=5)
    assert report.passed, report.failures


def test_exact_sequence_suite_covers_every_truncation_set():
    [report] = run_suite("exactseq", max_n=4, samples=1)
    assert report.passed, report.failures
    # {1}, {1,2}, {1,3}, {1,2,3}, {1,2,4}, {1,2,3,4}: 15 pairs (S, n), all under the cap for Z/2, Z/3 and Z/4
    assert report.cases == 3 * 15
