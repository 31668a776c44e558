import numpy as np
import pytest

from fluxgate.circuit import (TWO_PI, QubitDesign, CouplingDesign,
                              derive_pair_coefficients)
from fluxgate.hamiltonian import ReducedModel, MultiLevelModel


def make_designs():
    d1 = QubitDesign(index=1, E_J=TWO_PI * 248.72, ej_over_ec=35.0,
                     alpha=0.8, f_bias=0.5)
    d2 = QubitDesign(index=2, E_J=TWO_PI * 621.8, ej_over_ec=35.0,
                     alpha=0.8, f_bias=0.5)
    coupling = CouplingDesign.from_mutual_inductance(1.0, d1, d2)
    return d1, d2, coupling


@pytest.fixture(scope="session")
def pair():
    """Derived coefficients and eigensolutions for the default pair."""
    d1, d2, coupling = make_designs()
    coeffs, sols, elems = derive_pair_coefficients(d1, d2, coupling)
    return {"designs": (d1, d2), "coupling": coupling, "coeffs": coeffs,
            "sols": sols, "elems": elems}


@pytest.fixture(scope="session")
def reduced(pair):
    return ReducedModel(pair["coeffs"])


@pytest.fixture(scope="session")
def multilevel(pair):
    sols = pair["sols"]
    return MultiLevelModel(elems=pair["elems"],
                           energies=(sols[0].energies, sols[1].energies),
                           coupling=pair["coupling"],
                           designs=pair["designs"])


def rng(seed=7):
    return np.random.default_rng(seed)


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(num, label): groups a test under one acceptance "
        "criterion for the end-of-run summary")


_criterion_outcomes = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None and (rep.failed or rep.when == "call"):
        num = mark.kwargs.get("num", mark.args[0] if mark.args else 0)
        label = mark.kwargs.get("label", item.name)
        prev_failed = _criterion_outcomes.get(num, (label, False))[1]
        _criterion_outcomes[num] = (label, prev_failed or rep.failed
                                    or rep.skipped)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_outcomes:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for num in sorted(_criterion_outcomes):
        label, failed = _criterion_outcomes[num]
        terminalreporter.write_line(
            "  %d. %-58s %s" % (num, label, "FAIL" if failed else "PASS"))
