import random

import pytest

from dcr.errors import InvalidRun, RepeatedEvent
from dcr.eventstructures import (
    Cres,
    PrimeEventStructure,
    cres_run_accepting,
    cres_to_dcrg,
    is_configuration,
    pes_run_maximal,
    pes_run_valid,
    pes_to_cres_fair,
    pes_to_cres_plain,
    validate_cres,
    validate_pes,
)
from dcr.model import Marking, validate_graph
from dcr.semantics import enabled_events, execute, finite_run_accepting

from generators import all_small_pes, pes_runs, random_pes


def chain_ab():
    return PrimeEventStructure.make(["a", "b"], causality=[("a", "b")])


# validation

def test_two_event_chain_is_valid():
    assert validate_pes(chain_ab()).ok


def test_self_conflict_is_an_error():
    pes = PrimeEventStructure.make(["a", "b"], conflict=[("a", "a")])
    assert "conflict-irreflexive" in [f.code for f in validate_pes(pes).errors]


def test_missing_heredity_is_an_error():
    pes = PrimeEventStructure.make(
        ["a", "b", "c"], causality=[("b", "c")], conflict=[("a", "b")]
    )
    codes = [f.code for f in validate_pes(pes).errors]
    assert codes == ["conflict-heredity"]


def test_causality_cycle_is_an_error():
    pes = PrimeEventStructure.make(["a", "b"], causality=[("a", "b"), ("b", "a")])
    assert "causality-cycle" in [f.code for f in validate_pes(pes).errors]


def test_conflict_with_own_cause_is_an_error():
    pes = PrimeEventStructure.make(["a", "b"], causality=[("a", "b")], conflict=[("a", "b")])
    assert "conflict-heredity" in [f.code for f in validate_pes(pes).errors]


def test_cres_requires_acyclic_condition_response_union():
    cres = Cres.make(["a", "b"], conditions=[("a", "b")], responses=[("b", "a")])
    assert "condition-response-cycle" in [f.code for f in validate_cres(cres).errors]
    ok = Cres.make(["a", "b"], conditions=[("a", "b")], responses=[("a", "b")])
    assert validate_cres(ok).ok


def test_cres_self_response_is_a_cycle():
    cres = Cres.make(["a"], responses=[("a", "a")])
    assert not validate_cres(cres).ok


# configurations and runs

def test_configuration_examples():
    pes = chain_ab()
    assert is_configuration(pes, {"a"})
    assert not is_configuration(pes, {"b"})
    conflicting = PrimeEventStructure.make(["a", "b"], conflict=[("a", "b")])
    assert not is_configuration(conflicting, {"a", "b"})


def test_run_validity_and_maximality():
    pes = chain_ab()
    assert pes_run_valid(pes, ["a", "b"])
    assert pes_run_maximal(pes, ["a", "b"])
    assert pes_run_valid(pes, ["a"])
    assert not pes_run_maximal(pes, ["a"])  # b stays enabled forever
    assert not pes_run_valid(pes, ["b", "a"])


def test_conflict_makes_short_run_maximal():
    pes = PrimeEventStructure.make(["a", "b"], conflict=[("a", "b")])
    assert pes_run_maximal(pes, ["a"])


def test_repeated_event_raises():
    with pytest.raises(RepeatedEvent):
        pes_run_valid(chain_ab(), ["a", "a"])


# acceptance

def test_response_discharged_by_later_occurrence():
    cres = Cres.make(["a", "b"], responses=[("a", "b")])
    assert cres_run_accepting(cres, ["a", "b"])
    assert not cres_run_accepting(cres, ["a"])


def test_response_discharged_by_conflict():
    cres = Cres.make(
        ["a", "b", "r"], responses=[("a", "r")], conflict=[("r", "b")]
    )
    assert cres_run_accepting(cres, ["a", "b"])
    # brute force over every run of length <= 2 agrees with the formula
    for run in [(), ("a",), ("b",), ("r",), ("a", "b"), ("a", "r"), ("b", "a")]:
        expected = all(
            (owed in run[i + 1 :]) or any((owed, x) in {("r", "b"), ("b", "r")} for x in run)
            for i, e in enumerate(run)
            for owed in (("r",) if e == "a" else ())
        )
        assert cres_run_accepting(cres, run) == expected


def test_initial_response_must_occur_or_conflict():
    cres = Cres.make(["a", "b"], initial_responses=["b"], conflict=[("a", "b")])
    assert cres_run_accepting(cres, ["b"])
    assert cres_run_accepting(cres, ["a"])  # b conflicts with executed a
    assert not cres_run_accepting(cres, [])


def test_invalid_run_raises():
    cres = Cres.make(["a", "b"], conditions=[("a", "b")])
    with pytest.raises(InvalidRun):
        cres_run_accepting(cres, ["b"])


# embeddings

def test_plain_embedding_has_no_obligations():
    image = pes_to_cres_plain(chain_ab())
    assert image.initial_responses == frozenset()
    assert image.responses == frozenset()
    empty = pes_to_cres_plain(PrimeEventStructure.make([]))
    assert empty.events == ()


def test_fair_embedding_of_chain():
    image = pes_to_cres_fair(chain_ab())
    assert image.initial_responses == {"a"}
    assert ("a", "b") in image.responses


def test_fair_embedding_of_independent_events():
    pes = PrimeEventStructure.make(["a", "b"])
    assert pes_to_cres_fair(pes).initial_responses == {"a", "b"}


def test_conflict_encoding_excludes():
    cres = Cres.make(["a", "b"], conflict=[("a", "b")])
    g = cres_to_dcrg(cres)
    assert g.excludes == {("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")}
    assert g.includes == frozenset()
    assert g.initial_marking == Marking.of(included=["a", "b"])
    assert validate_graph(g).ok


def test_single_event_encoding_runs_once():
    g = cres_to_dcrg(Cres.make(["a"]))
    assert g.excludes == {("a", "a")}
    m = execute(g, g.initial_marking, "a")
    assert "a" not in enabled_events(g, m)


def test_encoding_carries_initial_responses():
    cres = Cres.make(["a"], initial_responses=["a"])
    g = cres_to_dcrg(cres)
    assert g.initial_marking.pending == {"a"}


# the three equivalences, spot-checked here on the exhaustive <=2 corpus
# (the acceptance suite runs the full corpus)

def _dcr_runs_up_to(g, bound):
    """All replayable event sequences up to the bound, via depth-first walk."""
    runs = [()]
    stack = [((), g.initial_marking)]
    while stack:
        run, marking = stack.pop()
        if len(run) == bound:
            continue
        for e in g.events:
            if e in enabled_events(g, marking):
                extended = run + (e,)
                runs.append(extended)
                stack.append((extended, execute(g, marking, e)))
    return runs


def _check_plain_and_fair(pes):
    runs = pes_runs(pes)
    plain = pes_to_cres_plain(pes)
    fair = pes_to_cres_fair(pes)
    for run in runs:
        # runs of the image are runs of its underlying structure, which
        # coincides with the original one
        assert pes_run_valid(plain.underlying, run)
        assert pes_run_valid(fair.underlying, run)
        assert cres_run_accepting(plain, run)
        assert cres_run_accepting(fair, run) == pes_run_maximal(pes, run)


def _check_conflict_encoding(cres):
    g = cres_to_dcrg(cres)
    assert validate_graph(g).ok
    bound = len(cres.events) + 1
    structure_runs = set(pes_runs(cres.underlying))
    graph_runs = set(_dcr_runs_up_to(g, bound))
    assert structure_runs == graph_runs
    for run in sorted(structure_runs):
        assert cres_run_accepting(cres, run) == finite_run_accepting(g, run)


def test_equivalences_on_tiny_corpus():
    for pes in all_small_pes(2):
        _check_plain_and_fair(pes)
        _check_conflict_encoding(pes_to_cres_plain(pes))
        _check_conflict_encoding(pes_to_cres_fair(pes))


def test_equivalences_on_random_structures():
    rng = random.Random(4242)
    for _ in range(25):
        pes = random_pes(rng, 4)
        _check_plain_and_fair(pes)
        _check_conflict_encoding(pes_to_cres_fair(pes))


def test_no_event_enabled_after_its_own_execution():
    rng = random.Random(99)
    for _ in range(20):
        cres = pes_to_cres_fair(random_pes(rng, 4))
        g = cres_to_dcrg(cres)
        stack = [((), g.initial_marking)]
        while stack:
            run, marking = stack.pop()
            enabled = enabled_events(g, marking)
            assert not (enabled & marking.executed)
            if len(run) > len(g.events):
                continue
            for e in enabled:
                stack.append((run + (e,), execute(g, marking, e)))
