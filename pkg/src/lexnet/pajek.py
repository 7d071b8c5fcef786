"""Pajek ``.net`` reading and writing.

Output is canonical: vertices are numbered in lexicographic label order
and arcs are sorted by (source, target), so equal graphs give equal bytes.
"""

from __future__ import annotations

import re

from .errors import InputError
from .graph import LexicalNetwork, NetworkMeta


def _quote(label: str) -> str:
    return '"' + label.replace('"', '""') + '"'


def export_pajek(g: LexicalNetwork) -> str:
    labels = sorted(g.nodes)
    index = {label: i for i, label in enumerate(labels, start=1)}
    lines = [f"*Vertices {len(labels)}"]
    lines += [f"{index[label]} {_quote(label)}" for label in labels]
    lines.append("*Arcs")
    lines += [f"{s} {t}" for s, t in sorted((index[u], index[v]) for u, v in g.arcs)]
    return "\n".join(lines) + "\n"


_VERTEX = re.compile(r'\s*(\d+)\s+"((?:[^"]|"")*)"')


def read_pajek(text: str, meta: NetworkMeta | None = None) -> LexicalNetwork:
    """Parse the ``*Vertices`` / ``*Arcs`` subset written by :func:`export_pajek`.

    ``*Edges`` lines are read as arcs in both directions.
    """
    labels: dict[int, str] = {}
    arcs: set[tuple[str, str]] = set()
    section = None
    expected = None
    for no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("%"):
            continue
        if line.startswith("*"):
            head = line.split()
            section = head[0].lower()
            if section == "*vertices":
                try:
                    expected = int(head[1])
                except (IndexError, ValueError) as exc:
                    raise InputError(f"pajek line {no}: bad *Vertices header") from exc
            elif section not in ("*arcs", "*edges"):
                raise InputError(f"pajek line {no}: unsupported section {head[0]}")
            continue
        if section == "*vertices":
            m = _VERTEX.match(line)
            if m is None:
                raise InputError(f"pajek line {no}: bad vertex line")
            labels[int(m.group(1))] = m.group(2).replace('""', '"')
        elif section in ("*arcs", "*edges"):
            parts = line.split()
            try:
                s, t = labels[int(parts[0])], labels[int(parts[1])]
            except (IndexError, ValueError, KeyError) as exc:
                raise InputError(f"pajek line {no}: bad arc line") from exc
            arcs.add((s, t))
            if section == "*edges":
                arcs.add((t, s))
        else:
            raise InputError(f"pajek line {no}: data before any section")
    if expected is not None and expected != len(labels):
        raise InputError(f"pajek: header announces {expected} vertices, found {len(labels)}")
    if len(set(labels.values())) != len(labels):
        raise InputError("pajek: duplicate vertex labels")
    return LexicalNetwork(frozenset(labels.values()), frozenset(arcs), meta or NetworkMeta())
