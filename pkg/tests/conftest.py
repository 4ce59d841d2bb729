import json

import pytest

from legdga import augment as au
from legdga import chekanov as ch
from legdga import data_path
from legdga import diagram as dg


@pytest.fixture(scope="session")
def k946():
    return dg.load(data_path("k946.front"))


@pytest.fixture(scope="session")
def K(k946):
    return ch.build_dga(k946)


@pytest.fixture(scope="session")
def arc():
    return dg.load(data_path("arc946.front"))


@pytest.fixture(scope="session")
def A_arc(arc):
    return ch.build_dga(arc)


@pytest.fixture(scope="session")
def stored_eps():
    out = {}
    for key in ("eps0", "eps1"):
        out[key] = au.Augmentation.from_json(json.loads(data_path(key + ".json").read_text()))
    return out


@pytest.fixture(scope="session")
def fillings(K):
    """The two filling augmentations computed from the bundled recipes."""
    return {key: au.filling_augmentation(au.load_recipe(data_path(f)), A=K)
            for key, f in (("eps0", "f0.steps"), ("eps1", "f1.steps"))}


@pytest.fixture(scope="session")
def arc_eps(stored_eps, arc):
    return {k: au.arc_augmentation(e, arc) for k, e in stored_eps.items()}


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in name or rep.when != "call" and outcome == "passed":
                continue
            number = name.split("test_criterion_")[1].split("_")[0]
            note = dict(rep.user_properties).get("criterion", "")
            note = note.split(": ", 1)[1] if ": " in note else name.split("::")[-1]
            lines.append((int(number), f"criterion {number}: {'PASS' if outcome == 'passed' else 'FAIL'}  {note}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
