# test_reproduce_examples.py
import pytest

from scripts.reproduce_examples import ExampleReproducer

ALL_CHECKS = [
    "gb-80",
    "brylawski",
    "closed-forms",
    "bad-sets",
    "evidence",
    "witnesses",
    "flocks",
    "stretching",
    "density",
]


@pytest.mark.slow
def test_every_check_passes():
    summary = ExampleReproducer(threads=2).run(ALL_CHECKS)
    assert list(summary["checks"]) == ALL_CHECKS
    assert summary["all_ok"], summary
    checks = summary["checks"]
    assert checks["gb-80"]["first"] == ExampleReproducer.GB_START
    assert checks["bad-sets"]["failing_n"] == []
    assert checks["evidence"]["GF(3^6)"] >= 1
    assert checks["flocks"]["support_is_U24"]
    assert all(diff < ExampleReproducer.DENSITY_TOLERANCE for diff in checks["density"]["differences"].values())
    assert checks["density"]["greedy_misses"] == []


def test_registered_checks():
    assert list(ExampleReproducer().checks) == ALL_CHECKS


def test_unknown_check_is_rejected():
    with pytest.raises(ValueError):
        ExampleReproducer().run(["nonexistent"])
