"""Tests for the verification suite."""

import pytest

from cavity_eh import verification
from cavity_eh.verification import CHECKS, run_verification


def test_check_names_are_unique():
    """Test that every check has its own name."""
    names = [name for name, _ in CHECKS]

    assert len(names) == len(set(names))


def test_run_subset():
    """Test running selected checks in suite order."""
    results = run_verification(["kappa_eh", "tesla_conversion"])

    assert [r.name for r in results] == ["tesla_conversion", "kappa_eh"]
    assert all(r.passed for r in results)
    assert "eV²" in results[0].detail


def test_unknown_check():
    """Test that unknown names are rejected before running anything."""
    with pytest.raises(ValueError):
        run_verification(["tesla_conversion", "nonexistent"])


def test_exception_counts_as_failure(monkeypatch):
    """Test that a raising check is reported, not propagated."""

    def broken():
        raise ZeroDivisionError("boom")

    monkeypatch.setattr(verification, "CHECKS", [("broken", broken)])

    results = run_verification()

    assert len(results) == 1
    assert results[0].passed is False
    assert results[0].detail == "ZeroDivisionError: boom"


def test_full_suite_passes():
    """Test that every cross-check passes."""
    results = run_verification()

    failed = [(r.name, r.detail) for r in results if not r.passed]
    assert failed == []
    assert len(results) == len(CHECKS)
