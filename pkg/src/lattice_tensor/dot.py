"""Hasse diagrams in Graphviz DOT."""
from __future__ import annotations


def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def hasse_dot(name: str, labels, cover_pairs) -> str:
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i, lab in enumerate(labels):
        lines.append(f"  n{i} [label={_quote(lab)}];")
    for i, j in sorted(cover_pairs):
        lines.append(f"  n{i} -> n{j} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_dot(name: str, L) -> str:
    return hasse_dot(name, L.labels, L.poset.cover_pairs())
