import re

from dcr.buchi import build_buchi
from dcr.dot import buchi_dot, lts_dot, marking_label
from dcr.model import DcrGraph, DistributedDcrGraph, Marking
from dcr.semantics import explore_lts

NODE_LINE = re.compile(r"^\s*(\w+)\s*\[(.*)\];$")
EDGE_LINE = re.compile(r"^\s*(\w+)\s*->\s*(\w+)\s*(?:\[(.*)\])?;$")


def parse_dot(text: str):
    """Minimal structural check: digraph header, balanced braces, every
    edge endpoint declared, quotes balanced."""
    assert text.startswith("digraph ")
    assert text.count("{") == text.count("}")
    assert text.count('"') % 2 == 0
    nodes, edges = {}, []
    for line in text.splitlines():
        line = line.strip()
        node = NODE_LINE.match(line)
        edge = EDGE_LINE.match(line)
        if edge:
            edges.append((edge.group(1), edge.group(2), edge.group(3) or ""))
        elif node and node.group(1) != "node":
            nodes[node.group(1)] = node.group(2)
    for source, target, _ in edges:
        assert source in nodes and target in nodes
    return nodes, edges


def test_marking_label_is_sorted_triple():
    m = Marking.of(executed=["b", "a"], pending=["z"], included=["a", "b", "z"])
    assert marking_label(m) == "{a,b}/{z}/{a,b,z}"


def test_lts_dot_structure(g1):
    lts = explore_lts(g1)
    text = lts_dot(lts)
    nodes, edges = parse_dot(text)
    assert len(nodes) == len(lts.states)
    assert len(edges) == len(lts.transitions)
    # initial state double circled, accepting filled green
    initial_attrs = nodes["s0"]
    assert "peripheries=2" in initial_attrs
    assert "fillcolor=palegreen" in initial_attrs  # initial marking owes nothing
    assert sum("fillcolor=palegreen" in attrs for attrs in nodes.values()) == len(
        lts.accepting
    )
    # edges labelled with the action only
    assert any('label="prescribe medicine"' in attrs for _, _, attrs in edges)


def test_buchi_dot_structure(d1):
    automaton = build_buchi(d1)
    text = buchi_dot(automaton)
    nodes, edges = parse_dot(text)
    assert len(nodes) == len(automaton.states) + 1  # plus the entry point
    doubled = sum("peripheries=2" in attrs for attrs in nodes.values())
    assert doubled == len(automaton.accepting)
    tau_edges = [e for e in edges if "style=dashed" in e[2]]
    assert tau_edges and all('label="tau"' in attrs for _, _, attrs in tau_edges)
    assert any("| i=" in attrs for attrs in nodes.values())


def test_buchi_dot_stratified_groups_by_index(d1):
    automaton = build_buchi(d1)
    text = buchi_dot(automaton, stratified=True)
    indexes = {state.index for state in automaton.states}
    for index in indexes:
        assert f"subgraph cluster_{index} {{" in text
    parse_dot_inner = text[text.index("{") + 1 :]
    assert parse_dot_inner.count("{") == parse_dot_inner.count("}") - 1


def test_dot_output_is_deterministic(g2):
    lts = explore_lts(g2)
    assert lts_dot(lts) == lts_dot(explore_lts(g2))
    d = DistributedDcrGraph.solo(g2)
    assert buchi_dot(build_buchi(d)) == buchi_dot(build_buchi(d))


def test_quotes_escaped_in_labels():
    g = DcrGraph.make(["a"], labels={"a": 'say "hi"'})
    text = lts_dot(explore_lts(g))
    assert '\\"hi\\"' in text
    parse_dot(text)
