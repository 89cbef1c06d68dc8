import pytest

from srstris.pieces import PieceType
from srstris.verify import (
    CLOG_SECTIONS,
    SPIN_FIGURES,
    load_clog_fixtures,
    load_spin_fixtures,
    mirror_spin,
    run_clog,
    run_spin,
    validate_blockers,
)


@pytest.fixture(scope="module")
def spins():
    return load_spin_fixtures()


@pytest.fixture(scope="module")
def clogs():
    return load_clog_fixtures()


def test_every_figure_has_a_fixture(spins):
    missing = [fig for fig in SPIN_FIGURES if fig not in spins]
    assert not missing, f"missing spin fixtures: {missing}"


def test_all_spins_pass(spins):
    for figure in SPIN_FIGURES:
        report = run_spin(spins[figure])
        assert report.passed, f"{figure}: {report.reason} (trace {report.trace})"


def test_spin_traces_record_kick_tests(spins):
    assert run_spin(spins["srs-example"]).trace == [2]


def test_mirrored_spins_pass(spins):
    for figure in SPIN_FIGURES:
        scenario = spins[figure]
        if scenario.start.piece is PieceType.I:
            continue
        report = run_spin(mirror_spin(scenario))
        assert report.passed, f"{figure} mirrored: {report.reason}"


def test_blockers_are_all_load_bearing(spins):
    for figure in SPIN_FIGURES:
        inert = validate_blockers(spins[figure])
        assert not inert, f"{figure}: blockers {inert} can be removed"


def test_i_spin_never_raises_center(spins):
    scenario = spins["i-spin"]
    assert scenario.never_up
    assert run_spin(scenario).passed


def test_every_clog_letter_present(clogs):
    seen = {}
    for c in clogs:
        seen.setdefault(c.section, set()).add(c.letter)
    for section, count in CLOG_SECTIONS.items():
        letters = {chr(ord("a") + i) for i in range(count)}
        missing = letters - seen.get(section, set())
        assert not missing, f"{section}: missing letters {sorted(missing)}"
        assert "control" in seen[section], f"{section}: no control fixture"


def test_controls_are_solvable(clogs):
    for c in clogs:
        if c.claim != "control":
            continue
        report = run_clog(c)
        assert report.verdict == "counterexample", f"{c.section}: {report.verdict}"


def test_all_clogs_resolve(clogs):
    for c in clogs:
        if c.claim == "control":
            continue
        report = run_clog(c)
        if c.claim == "impossible":
            assert report.verdict == "impossible-confirmed", (
                f"{c.section}/{c.letter}: {report.verdict}"
            )
        else:
            assert report.verdict == "proven-unsolvable", (
                f"{c.section}/{c.letter}: {report.verdict}"
            )
