"""Hub and authority weights by mutual reinforcement, top-k lists, and
per-stage hub/authority status of chosen words."""

from __future__ import annotations

import enum
import math
import warnings
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .builder import StageWindow
from .graph import LexicalNetwork

# weights at or below this count as zero in rankings; components whose exact
# value is 0 can still sit near 1e-9 when iteration stops at tolerance 1e-10
ZERO_WEIGHT = 1e-8
# rankings compare weights at this many decimals so float noise cannot break ties
RANK_DECIMALS = 12
DEGENERATE_GAP = 1e-9


class DegenerateSpectrumWarning(UserWarning):
    """The dominant singular value is (numerically) not simple."""


@dataclass(frozen=True)
class HitsResult:
    hub: Mapping[str, float]
    authority: Mapping[str, float]
    iterations: int
    converged: bool
    tolerance: float
    spectral_gap: float | None = None


def _normalize(x: np.ndarray) -> np.ndarray:
    norm = math.sqrt(float(np.dot(x, x)))
    return x / norm if norm > 0 else x


def _spectral_gap(src: np.ndarray, dst: np.ndarray, n: int) -> float | None:
    """Relative gap between the two largest eigenvalues of AᵀA."""
    if n < 2:
        return 1.0
    try:
        if n <= 600:
            a = np.zeros((n, n))
            a[src, dst] = 1.0
            sv = np.linalg.svd(a, compute_uv=False)
        else:
            from scipy.sparse import csr_matrix
            from scipy.sparse.linalg import svds

            a = csr_matrix((np.ones(len(src)), (src, dst)), shape=(n, n))
            sv = np.sort(svds(a, k=2, return_singular_vectors=False))[::-1]
    except (np.linalg.LinAlgError, ArithmeticError, RuntimeError):
        return None
    top = sv[0] ** 2
    if top == 0:
        return None
    return float((sv[0] ** 2 - sv[1] ** 2) / top)


def hits(
    g: LexicalNetwork,
    tolerance: float = 1e-10,
    max_iterations: int = 1000,
    *,
    check_spectrum: bool = True,
) -> HitsResult:
    """Hub and authority weights of every node.

    Authorities collect the hub weight of the nodes pointing at them, hubs
    collect the authority weight of the nodes they point to, and both
    vectors are rescaled to unit Euclidean length after each pass. The hub
    vector is iterated from the uniform hub vector and the authority vector
    from the uniform authority vector, so reversing every arc swaps the two
    results exactly, even when the dominant eigenvalue is repeated.
    Iteration stops once no weight moves by ``tolerance`` or more.
    """
    if not g.nodes:
        raise ValueError("hits needs a graph with at least one node")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    words = sorted(g.nodes)
    n = len(words)
    if not g.arcs:
        zeros = {w: 0.0 for w in words}
        return HitsResult(zeros, dict(zeros), 0, True, tolerance, None)

    index = {w: i for i, w in enumerate(words)}
    arcs = sorted((index[u], index[v]) for u, v in g.arcs)
    src = np.array([u for u, _ in arcs], dtype=np.intp)
    dst = np.array([v for _, v in arcs], dtype=np.intp)

    def collect_authority(hub: np.ndarray) -> np.ndarray:
        return np.bincount(dst, weights=hub[src], minlength=n)

    def collect_hub(auth: np.ndarray) -> np.ndarray:
        return np.bincount(src, weights=auth[dst], minlength=n)

    hub = np.full(n, 1.0 / math.sqrt(n))
    auth = hub.copy()
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        new_hub = _normalize(collect_hub(_normalize(collect_authority(hub))))
        new_auth = _normalize(collect_authority(_normalize(collect_hub(auth))))
        change = max(np.max(np.abs(new_hub - hub)), np.max(np.abs(new_auth - auth)))
        hub, auth = new_hub, new_auth
        if change < tolerance:
            converged = True
            break

    gap = _spectral_gap(src, dst, n) if check_spectrum else None
    if gap is not None and gap < DEGENERATE_GAP:
        warnings.warn(
            f"dominant eigenvalue of network {g.meta.label or '<unnamed>'} is not simple; "
            "weights depend on the uniform starting vector",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
    return HitsResult(
        hub=dict(zip(words, hub.tolist())),
        authority=dict(zip(words, auth.tolist())),
        iterations=iterations,
        converged=converged,
        tolerance=tolerance,
        spectral_gap=gap,
    )


def _rank(weights: Mapping[str, float], k: int) -> list[str]:
    if k < 1:
        raise ValueError("k must be >= 1")
    positive = [(round(w, RANK_DECIMALS), word) for word, w in weights.items() if w > ZERO_WEIGHT]
    positive.sort(key=lambda item: (-item[0], item[1]))
    return [word for _, word in positive[:k]]


def top_hubs(r: HitsResult, k: int = 10) -> list[str]:
    return _rank(r.hub, k)


def top_authorities(r: HitsResult, k: int = 10) -> list[str]:
    return _rank(r.authority, k)


class Status(enum.Enum):
    HUB = "Hub"
    AUTHORITY = "Authority"
    HA = "H&A"
    NEITHER = "--"

    def __str__(self) -> str:
        return self.value


def classify_word(word: str, hubs_topk: Sequence[str], auths_topk: Sequence[str]) -> Status:
    in_hubs = word in hubs_topk
    in_auths = word in auths_topk
    if in_hubs and in_auths:
        return Status.HA
    if in_hubs:
        return Status.HUB
    if in_auths:
        return Status.AUTHORITY
    return Status.NEITHER


@dataclass(frozen=True)
class ShiftRecord:
    word: str
    statuses: tuple[tuple[str, Status], ...]

    @property
    def labels(self) -> list[Status]:
        return [s for _, s in self.statuses]


def shift_table(
    stage_networks: Sequence[tuple[StageWindow, LexicalNetwork]],
    words: Iterable[str],
    k: int = 10,
    *,
    tolerance: float = 1e-10,
    max_iterations: int = 1000,
) -> list[ShiftRecord]:
    if not stage_networks:
        raise ValueError("shift_table needs at least one stage network")
    lists = []
    for window, g in stage_networks:
        if g.nodes:
            r = hits(g, tolerance, max_iterations)
            lists.append((window.stage_label, top_hubs(r, k), top_authorities(r, k)))
        else:
            lists.append((window.stage_label, [], []))
    return [
        ShiftRecord(word, tuple((label, classify_word(word, hubs, auths)) for label, hubs, auths in lists))
        for word in words
    ]


def shift_rows(records: Sequence[ShiftRecord]) -> tuple[list[str], list[dict]]:
    """Columns and rows of the word-by-stage status table."""
    if not records:
        return ["word"], []
    columns = ["word"] + [label for label, _ in records[0].statuses]
    rows = []
    for rec in records:
        row = {"word": rec.word}
        row.update({label: str(status) for label, status in rec.statuses})
        rows.append(row)
    return columns, rows
