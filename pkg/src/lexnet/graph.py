"""Directed, unweighted word-form graphs."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from .errors import InputError

IN = "in"
OUT = "out"


@dataclass(frozen=True)
class NetworkMeta:
    child_id: str | None = None
    speaker: str | None = None
    mode: str | None = None  # "accumulative" | "stage"
    label: str = ""
    visits: tuple[int, ...] = ()
    reversed: bool = False


@dataclass(frozen=True)
class LexicalNetwork:
    """Node and arc sets plus provenance.

    Equality and hashing look at ``nodes`` and ``arcs`` only; ``meta`` is
    carried along for reporting.
    """

    nodes: frozenset[str]
    arcs: frozenset[tuple[str, str]]
    meta: NetworkMeta = field(default_factory=NetworkMeta, compare=False)

    def __post_init__(self) -> None:
        nodes = frozenset(self.nodes)
        arcs = frozenset((u, v) for u, v in self.arcs)
        missing = {x for arc in arcs for x in arc} - nodes
        if missing:
            raise ValueError(f"arc endpoints not in node set: {sorted(missing)[:5]}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_arcs(
        cls,
        arcs: Iterable[tuple[str, str]],
        nodes: Iterable[str] = (),
        meta: NetworkMeta | None = None,
    ) -> LexicalNetwork:
        arcs = frozenset(arcs)
        all_nodes = set(nodes)
        for u, v in arcs:
            all_nodes.add(u)
            all_nodes.add(v)
        return cls(frozenset(all_nodes), arcs, meta or NetworkMeta())

    @classmethod
    def empty(cls, meta: NetworkMeta | None = None) -> LexicalNetwork:
        return cls(frozenset(), frozenset(), meta or NetworkMeta())

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @cached_property
    def out_degrees(self) -> Counter:
        return Counter(u for u, _ in self.arcs)

    @cached_property
    def in_degrees(self) -> Counter:
        return Counter(v for _, v in self.arcs)

    @cached_property
    def successors(self) -> dict[str, frozenset[str]]:
        out: dict[str, set[str]] = {n: set() for n in self.nodes}
        for u, v in self.arcs:
            out[u].add(v)
        return {n: frozenset(s) for n, s in out.items()}

    @cached_property
    def predecessors(self) -> dict[str, frozenset[str]]:
        inc: dict[str, set[str]] = {n: set() for n in self.nodes}
        for u, v in self.arcs:
            inc[v].add(u)
        return {n: frozenset(s) for n, s in inc.items()}

    def __repr__(self) -> str:
        label = f" {self.meta.label!r}" if self.meta.label else ""
        return f"<LexicalNetwork{label} N={self.size} L={self.arc_count}>"


@dataclass(frozen=True)
class GrowthPoint:
    label: str
    size: int
    arcs: int
    average_degree: Fraction

    @classmethod
    def of(cls, label: str, g: LexicalNetwork) -> GrowthPoint:
        avg = average_degree(g) if g.nodes else Fraction(0)
        return cls(label, g.size, g.arc_count, avg)

    def as_row(self) -> dict:
        return {"label": self.label, "size": self.size, "arcs": self.arcs, "avg_degree": self.average_degree}


def average_degree(g: LexicalNetwork) -> Fraction:
    if not g.nodes:
        raise ValueError("average degree of an empty graph is undefined")
    return Fraction(g.arc_count, g.size)


def _check_direction(direction: str) -> None:
    if direction not in (IN, OUT):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")


def degree(g: LexicalNetwork, node: str, direction: str) -> int:
    """In- or out-degree; a self-loop counts once in each direction."""
    _check_direction(direction)
    if node not in g.nodes:
        raise KeyError(node)
    counts = g.in_degrees if direction == IN else g.out_degrees
    return counts[node]


def top_k_by_degree(g: LexicalNetwork, k: int, direction: str) -> list[str]:
    _check_direction(direction)
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = g.in_degrees if direction == IN else g.out_degrees
    return sorted(g.nodes, key=lambda n: (-counts[n], n))[:k]


def reverse(g: LexicalNetwork) -> LexicalNetwork:
    meta = replace(g.meta, reversed=not g.meta.reversed)
    return LexicalNetwork(g.nodes, frozenset((v, u) for u, v in g.arcs), meta)


def _compatible(a: str | None, b: str | None) -> bool:
    return a is None or b is None or a == b


def union(a: LexicalNetwork, b: LexicalNetwork, *, override: bool = False) -> LexicalNetwork:
    """Set union of nodes and arcs.

    Both inputs must come from the same child and speaker (unknown
    provenance matches anything) unless ``override`` is set.
    """
    if not override and not (
        _compatible(a.meta.child_id, b.meta.child_id) and _compatible(a.meta.speaker, b.meta.speaker)
    ):
        raise InputError(
            f"cannot merge networks of {a.meta.child_id}/{a.meta.speaker} "
            f"and {b.meta.child_id}/{b.meta.speaker}"
        )
    meta = replace(
        a.meta,
        child_id=a.meta.child_id if a.meta.child_id is not None else b.meta.child_id,
        speaker=a.meta.speaker if a.meta.speaker is not None else b.meta.speaker,
        visits=tuple(sorted(set(a.meta.visits) | set(b.meta.visits))),
    )
    return LexicalNetwork(a.nodes | b.nodes, a.arcs | b.arcs, meta)
