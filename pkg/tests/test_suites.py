from fractions import Fraction

import pytest

from asymlin import InputError
from asymlin.suites import SUITES, SuiteOptions, run_check, run_suite

SMALL = {
    "axioms": 5,
    "conjugation": 5,
    "linear-norms": 5,
    "sup-equivalence": 5,
    "adjoint-norm-equality": 5,
    "rescaling": 3,
    "bilinear-norms": 5,
    "schauder-bilinear": 2,
    "bideal": 2,
    "closedness": 3,
    "alaoglu": 2,
    "precompactness": 6,
}


def test_every_suite_has_a_small_run():
    assert set(SMALL) == set(SUITES)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_small_runs_pass(name):
    report = run_suite(name, SuiteOptions(seed=7, count=SMALL[name]))
    assert report.ok, report.to_text()
    assert len(report.records) == SMALL[name]


@pytest.mark.parametrize("name", ["conjugation", "bilinear-norms", "precompactness"])
def test_reports_are_deterministic(name):
    opts = SuiteOptions(seed=3, count=4)
    assert run_suite(name, opts).to_json(with_time=False) == run_suite(name, opts).to_json(with_time=False)


def test_replay_matches_suite_record():
    opts = SuiteOptions(seed=2, count=4)
    report = run_suite("linear-norms", opts)
    rec = report.records[2]
    assert run_check("linear-norms", rec.instance, opts) == rec


def test_schauder_single_eps():
    report = run_suite("schauder-bilinear", SuiteOptions(count=2, eps=Fraction(1, 4)))
    assert report.ok
    assert all(set(r.values) == {"radius@1/4", "verified@1/4", "dual_net@1/4"} for r in report.records)


def test_unknown_suite_and_instance():
    with pytest.raises(InputError):
        run_suite("nope")
    with pytest.raises(InputError):
        run_check("axioms", "missing")
