from pathlib import Path

import pytest

from dcr.model import DcrGraph, DistributedDcrGraph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

G1_EVENTS = ("pm", "s", "gm")
G1_LABELS = {"pm": "prescribe medicine", "s": "sign", "gm": "give medicine"}
G2_LABELS = dict(G1_LABELS, dt="don't trust")


@pytest.fixture
def g1() -> DcrGraph:
    """Three events: prescribe must precede sign, sign must precede give,
    and prescribing obligates both sign and give."""
    return DcrGraph.make(
        G1_EVENTS,
        labels=G1_LABELS,
        conditions=[("pm", "s"), ("s", "gm")],
        responses=[("pm", "s"), ("pm", "gm")],
    )


@pytest.fixture
def d1(g1) -> DistributedDcrGraph:
    return DistributedDcrGraph.make(
        g1,
        roles=("Doctor", "Nurse"),
        principals=("Peter", "Ann"),
        principal_assignments=[("Peter", "Doctor"), ("Ann", "Nurse")],
        action_assignments=[
            ("prescribe medicine", "Doctor"),
            ("sign", "Doctor"),
            ("give medicine", "Nurse"),
        ],
    )


@pytest.fixture
def g2() -> DcrGraph:
    """G1 extended with a distrust event that excludes giving until a new
    signature re-includes it."""
    return DcrGraph.make(
        ("pm", "s", "gm", "dt"),
        labels=G2_LABELS,
        conditions=[("pm", "s"), ("s", "gm"), ("s", "dt")],
        responses=[("pm", "s"), ("pm", "gm"), ("dt", "s")],
        includes=[("s", "gm")],
        excludes=[("dt", "gm"), ("gm", "dt")],
    )


@pytest.fixture
def d2(g2) -> DistributedDcrGraph:
    return DistributedDcrGraph.make(
        g2,
        roles=("Doctor", "Nurse"),
        principals=("Peter", "Ann"),
        principal_assignments=[("Peter", "Doctor"), ("Ann", "Nurse")],
        action_assignments=[
            ("prescribe medicine", "Doctor"),
            ("sign", "Doctor"),
            ("give medicine", "Nurse"),
            ("don't trust", "Nurse"),
        ],
    )


@pytest.fixture
def g1_path() -> Path:
    return FIXTURES / "g1.json"


@pytest.fixture
def g2_path() -> Path:
    return FIXTURES / "g2.json"
