"""Graphviz exports of transition systems and automata.

State labels are slash-separated set triples in the order executed /
pending / included, so a node reads as the full marking at a glance.
Output is deterministic: nodes in discovery order, edges in recording
order, all identifier lists sorted.
"""

from __future__ import annotations

from .buchi import TAU, BuchiAutomaton
from .model import Marking
from .semantics import Lts


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _set(ids) -> str:
    return "{" + ",".join(sorted(ids)) + "}"


def marking_label(marking: Marking) -> str:
    return f"{_set(marking.executed)}/{_set(marking.pending)}/{_set(marking.included)}"


def lts_dot(lts: Lts) -> str:
    """LTS export: accepting states filled green, initial state double-circled,
    edges labelled with the action only."""
    names = {state: f"s{i}" for i, state in enumerate(lts.states)}
    lines = ["digraph lts {", "  rankdir=TB;", '  node [shape=ellipse];']
    for state in lts.states:
        attrs = [f"label={_quote(marking_label(state))}"]
        if state == lts.initial:
            attrs.append("peripheries=2")
        if state in lts.accepting:
            attrs.append("style=filled")
            attrs.append("fillcolor=palegreen")
        lines.append(f"  {names[state]} [{', '.join(attrs)}];")
    for source, label, target in lts.transitions:
        lines.append(
            f"  {names[source]} -> {names[target]} [label={_quote(label.action)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def buchi_dot(automaton: BuchiAutomaton, *, stratified: bool = False) -> str:
    """Automaton export: accepting states double-circled, delay edges dashed.

    With ``stratified`` the states are grouped into clusters by their rank
    index, which makes the scheduling role of the index visible.
    """
    names = {state: f"q{i}" for i, state in enumerate(automaton.states)}

    def node_line(state, indent: str) -> str:
        label = f"{marking_label(state.marking)} | i={state.index}"
        attrs = [f"label={_quote(label)}"]
        if state in automaton.accepting:
            attrs.append("peripheries=2")
        return f"{indent}{names[state]} [{', '.join(attrs)}];"

    lines = ["digraph buchi {", "  rankdir=TB;", '  node [shape=ellipse];']
    lines.append("  __init [shape=point, label=\"\"];")
    if stratified:
        by_index: dict[int, list] = {}
        for state in automaton.states:
            by_index.setdefault(state.index, []).append(state)
        for index in sorted(by_index):
            lines.append(f"  subgraph cluster_{index} {{")
            lines.append(f"    label={_quote(f'i={index}')};")
            for state in by_index[index]:
                lines.append(node_line(state, "    "))
            lines.append("  }")
    else:
        for state in automaton.states:
            lines.append(node_line(state, "  "))
    lines.append(f"  __init -> {names[automaton.initial]};")
    drawn: set[tuple[str, str, str]] = set()
    for transition in automaton.transitions:
        source = names[transition.source]
        target = names[transition.target]
        if transition.letter == TAU:
            lines.append(
                f"  {source} -> {target} [style=dashed, label=\"tau\"];"
            )
        else:
            event, _ = transition.letter
            key = (source, event, target)
            if key in drawn:
                continue  # several principals may share the same move
            drawn.add(key)
            lines.append(f"  {source} -> {target} [label={_quote(event)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
