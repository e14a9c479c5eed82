"""Acceptance criteria, one test each.

Each test prints a ``PASS``/``FAIL`` line; the lines are also collected and
shown in the terminal summary.  Run standalone with
``python3 tests/test_acceptance.py`` to get just the eleven lines.
"""

import sys

import pytest

from asymlin.suites import SuiteOptions, run_suite

RESULTS = {}


def _report(num, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2} {title}: {detail}"
    RESULTS[num] = line
    print(line)
    return ok


def _suite(name, **kw):
    report = run_suite(name, SuiteOptions(**kw))
    c = report.counts
    return report, c, f"{c['pass']}/{len(report.records)} pass, {report.wall_time:.1f}s"


def criterion_1():
    r, c, d = _suite("axioms")
    ok = c["pass"] == 200 == len(r.records) and r.wall_time < 30
    return _report(1, "norm and quasi-metric axioms", ok, d)


def criterion_2():
    r, c, d = _suite("conjugation")
    return _report(2, "conjugation and symmetrization", c["pass"] == 200 == len(r.records), d)


def criterion_3():
    r, c, d = _suite("linear-norms")
    ok = c["pass"] == 100 == len(r.records) and r.wall_time < 60
    return _report(3, "linear norm identities", ok, d)


def criterion_4():
    r, c, d = _suite("sup-equivalence")
    return _report(4, "sup-equivalence", c["pass"] == 100 == len(r.records), d)


def criterion_5():
    r, c, d = _suite("rescaling")
    degenerate = sum(rec.values["degenerate"] == "yes" for rec in r.records)
    ok = c["pass"] == 50 == len(r.records) and degenerate >= 5
    return _report(5, "bilinear rescaling", ok, f"{d}, {degenerate} degenerate")


def criterion_6():
    r, c, d = _suite("bilinear-norms")
    strict = sum(rec.values["gap"] == "strict" for rec in r.records)
    ok = c["fail"] == 0 and c["refused"] == 0 and strict >= 10
    return _report(6, "bilinear norm identities", ok, f"{d}, {strict} strict gaps")


def criterion_7():
    r, c, d = _suite("schauder-bilinear")
    radii = [rec.values.get("radius@1/4") for rec in r.records]
    ok = c["pass"] == 20 == len(r.records) and r.wall_time < 120 and all(radii)
    return _report(7, "Schauder dual nets", ok, d)


def criterion_8():
    r, c, d = _suite("bideal")
    transported = all("left_radius" in rec.values and "right_radius" in rec.values for rec in r.records)
    ok = c["pass"] == len(r.records) > 0 and transported
    return _report(8, "bideal transport", ok, d)


def criterion_9():
    r, c, d = _suite("closedness")
    kinds = [rec.values["kind"] for rec in r.records]
    uniform, non_uniform = kinds.count("uniform"), kinds.count("non-uniform")
    ok = c["pass"] == 15 == len(r.records) and uniform == 10 and non_uniform == 5
    return _report(9, "closedness", ok, f"{d}, {uniform} uniform, {non_uniform} refused")


def criterion_10():
    r, c, d = _suite("alaoglu")
    return _report(10, "Alaoglu extraction", c["pass"] == 20 == len(r.records), d)


def criterion_11():
    r, c, d = _suite("precompactness")
    statuses = [rec.values["status"] for rec in r.records]
    both = "Certified" in statuses and "Refuted" in statuses
    ok = c["pass"] == 100 == len(r.records) and both
    return _report(11, "precompactness decisions", ok,
                   f"{d}, {statuses.count('Certified')} certified, {statuses.count('Refuted')} refuted")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    sys.exit(0 if all([c() for c in CRITERIA]) else 1)
