"""Collocation network construction: per-utterance bigrams, accumulative
series, and MLU-defined stage windows."""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .corpus import Corpus, Session, Utterance, session_mlu
from .errors import ConfigError, InputError
from .graph import LexicalNetwork, NetworkMeta


def build_network(
    utterances: Iterable[Utterance | Sequence[str]],
    meta: NetworkMeta | None = None,
    *,
    self_loops: bool = True,
) -> LexicalNetwork:
    """Every token is a node; each adjacent token pair inside one utterance is an arc.

    Accepts Utterance objects or plain token sequences. Callers are
    responsible for filtering out non-spontaneous speech.
    """
    nodes: set[str] = set()
    arcs: set[tuple[str, str]] = set()
    for utt in utterances:
        tokens = utt.tokens if isinstance(utt, Utterance) else tuple(utt)
        nodes.update(tokens)
        for u, v in zip(tokens, tokens[1:]):
            if self_loops or u != v:
                arcs.add((u, v))
    return LexicalNetwork(frozenset(nodes), frozenset(arcs), meta or NetworkMeta())


def speaker_utterances(sessions: Iterable[Session], speaker: str) -> list[Utterance]:
    return [u for s in sessions for u in s.spontaneous(speaker)]


def accumulative_series(corpus: Corpus, speaker: str, *, self_loops: bool = True) -> list[LexicalNetwork]:
    """Element t holds everything the speaker said in visits 1..t."""
    series = []
    nodes: set[str] = set()
    arcs: set[tuple[str, str]] = set()
    visits: list[int] = []
    for session in corpus.sessions:
        step = build_network(session.spontaneous(speaker), self_loops=self_loops)
        nodes |= step.nodes
        arcs |= step.arcs
        visits.append(session.visit_index)
        meta = NetworkMeta(
            child_id=corpus.child_id,
            speaker=speaker,
            mode="accumulative",
            label=f"visit {session.visit_index}",
            visits=tuple(visits),
        )
        series.append(LexicalNetwork(frozenset(nodes), frozenset(arcs), meta))
    return series


_RANGE = re.compile(r"\s*([\[(])\s*([^,\s]+)\s*,\s*([^\]\)\s]+)\s*([\])])\s*\Z")


@dataclass(frozen=True)
class MluRange:
    low: Fraction
    high: Fraction
    low_closed: bool = False
    high_closed: bool = True

    @classmethod
    def parse(cls, text: str) -> MluRange:
        """Read interval notation such as ``[1, 1.5]`` or ``(1.5, 2]``."""
        m = _RANGE.match(text)
        if m is None:
            raise ConfigError(f"bad MLU range {text!r}")
        left, lo, hi, right = m.groups()
        try:
            low, high = Fraction(lo), Fraction(hi)
        except ValueError as exc:
            raise ConfigError(f"bad MLU range {text!r}") from exc
        if high < low or (high == low and not (left == "[" and right == "]")):
            raise ConfigError(f"empty MLU range {text!r}")
        return cls(low, high, left == "[", right == "]")

    def __contains__(self, mlu: Fraction | float) -> bool:
        lo_ok = mlu >= self.low if self.low_closed else mlu > self.low
        hi_ok = mlu <= self.high if self.high_closed else mlu < self.high
        return lo_ok and hi_ok

    def __str__(self) -> str:
        left = "[" if self.low_closed else "("
        right = "]" if self.high_closed else ")"
        return f"{left}{_fmt_fraction(self.low)},{_fmt_fraction(self.high)}{right}"


def _fmt_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    text = f"{float(x):.12g}"
    return text if Fraction(text) == x else f"{x.numerator}/{x.denominator}"


DEFAULT_RANGES: tuple[MluRange, ...] = tuple(
    MluRange.parse(r) for r in ("[1,1.5]", "(1.5,2]", "(2,2.5]", "(2.5,3]", "(3,3.5]")
)


def _overlap(a: MluRange, b: MluRange) -> bool:
    # a starts no later than b
    if a.high > b.low:
        return True
    return a.high == b.low and a.high_closed and b.low_closed


def validate_ranges(ranges: Sequence[MluRange]) -> None:
    for a, b in zip(ranges, ranges[1:]):
        if (b.low, not b.low_closed) < (a.low, not a.low_closed):
            raise ConfigError(f"MLU ranges out of order: {a} before {b}")
    ordered = sorted(ranges, key=lambda r: (r.low, not r.low_closed))
    for a, b in zip(ordered, ordered[1:]):
        if _overlap(a, b):
            raise ConfigError(f"overlapping MLU ranges {a} and {b}")


def assign_stage(mlu: Fraction | float, ranges: Sequence[MluRange] = DEFAULT_RANGES) -> int | None:
    """1-based stage number of the range containing ``mlu``, or None."""
    validate_ranges(ranges)
    for i, r in enumerate(ranges, start=1):
        if mlu in r:
            return i
    return None


@dataclass(frozen=True)
class StageWindow:
    stage_label: str
    stage: int
    mlu_range: MluRange
    file_indices: tuple[int, ...]
    span_days: int | None = None

    @property
    def slug(self) -> str:
        return self.stage_label.replace(" ", "_")


@dataclass(frozen=True)
class StagePlan:
    child_id: str
    windows: tuple[StageWindow, ...]
    ranges: tuple[MluRange, ...] = DEFAULT_RANGES

    def to_text(self) -> str:
        """Tab-separated table: label, stage, range, files, span_days."""
        lines = [
            f"# child\t{self.child_id}",
            "# ranges\t" + " ".join(str(r) for r in self.ranges),
            "label\tstage\trange\tfiles\tspan_days",
        ]
        for w in self.windows:
            span = "-" if w.span_days is None else str(w.span_days)
            files = ",".join(str(i) for i in w.file_indices)
            lines.append(f"{w.stage_label}\t{w.stage}\t{w.mlu_range}\t{files}\t{span}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> StagePlan:
        child_id = ""
        ranges: tuple[MluRange, ...] = DEFAULT_RANGES
        windows = []
        for no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            cells = line.split("\t")
            if cells[0] == "# child":
                child_id = cells[1] if len(cells) > 1 else ""
            elif cells[0] == "# ranges":
                ranges = tuple(MluRange.parse(r) for r in re.findall(r"[\[(][^\])]*[\])]", cells[1]))
            elif line.startswith("#") or cells[0] == "label":
                continue
            else:
                if len(cells) != 5:
                    raise InputError(f"stage plan line {no}: expected 5 tab-separated fields")
                label, stage, rng, files, span = cells
                try:
                    indices = tuple(int(f) for f in files.split(",") if f)
                    windows.append(
                        StageWindow(label, int(stage), MluRange.parse(rng), indices, None if span == "-" else int(span))
                    )
                except ValueError as exc:
                    raise InputError(f"stage plan line {no}: {exc}") from exc
        plan = cls(child_id, tuple(windows), ranges)
        check_plan(plan)
        return plan


def check_plan(plan: StagePlan) -> None:
    seen: set[int] = set()
    last_first = None
    for w in plan.windows:
        idx = w.file_indices
        if any(b != a + 1 for a, b in zip(idx, idx[1:])):
            raise InputError(f"window {w.stage_label!r}: files are not consecutive visits")
        if seen & set(idx):
            raise InputError(f"window {w.stage_label!r} overlaps an earlier window")
        if idx:
            if last_first is not None and idx[0] < last_first:
                raise InputError(f"window {w.stage_label!r} is out of order")
            last_first = idx[0]
        seen |= set(idx)


def smooth(values: Sequence[Fraction | None], width: int) -> list[Fraction | None]:
    """Centered moving average over the defined neighbours; width 1 is the identity."""
    if width < 1 or width % 2 == 0:
        raise ConfigError("smoothing width must be a positive odd integer")
    half = width // 2
    out: list[Fraction | None] = []
    for i, v in enumerate(values):
        if v is None:
            out.append(None)
            continue
        near = [x for x in values[max(0, i - half) : i + half + 1] if x is not None]
        out.append(sum(near, Fraction(0)) / len(near))
    return out


_SUBSTAGE_NAMES = {1: ("",), 2: ("early", "late"), 3: ("early", "middle", "late")}


def _runs(sessions: Sequence[Session], stages: Sequence[int | None]) -> list[tuple[int, int, int]]:
    """Maximal (stage, start, stop) runs of equal stage over consecutive visits."""
    runs = []
    start = 0
    for i in range(1, len(sessions) + 1):
        boundary = (
            i == len(sessions)
            or stages[i] != stages[start]
            or sessions[i].visit_index != sessions[i - 1].visit_index + 1
        )
        if boundary:
            if stages[start] is not None:
                runs.append((stages[start], start, i))
            start = i
    return runs


def plan_stages(
    corpus: Corpus,
    ranges: Sequence[MluRange] = DEFAULT_RANGES,
    window_size: int = 5,
    split_threshold: int | None = None,
    *,
    speaker: str = "CHI",
    placement: str = "start",
    smoothing: int = 1,
    max_substages: int = 2,
) -> StagePlan:
    """Pick stage windows from the child's per-visit MLU.

    For every stage the longest run of consecutive same-stage visits is
    used (earliest run on ties). Runs of at least ``split_threshold``
    files yield early/late windows (early/middle/late with
    ``max_substages=3`` when the run is long enough for three), otherwise
    one window is placed at the start, center or end of the run.
    """
    validate_ranges(ranges)
    if window_size < 1:
        raise ConfigError("window_size must be >= 1")
    if split_threshold is None:
        split_threshold = 2 * window_size
    if split_threshold < 2 * window_size:
        raise ConfigError("split_threshold must be at least twice window_size so sub-stages do not overlap")
    if placement not in ("start", "center", "end"):
        raise ConfigError(f"unknown window placement {placement!r}")
    if max_substages not in _SUBSTAGE_NAMES:
        raise ConfigError("max_substages must be 1, 2 or 3")

    sessions = corpus.sessions
    mlus: list[Fraction | None] = []
    for s in sessions:
        try:
            mlus.append(session_mlu([s], speaker))
        except ValueError:
            mlus.append(None)
    mlus = smooth(mlus, smoothing)
    stages = [None if m is None else assign_stage(m, ranges) for m in mlus]

    best: dict[int, tuple[int, int]] = {}
    for stage, start, stop in _runs(sessions, stages):
        if stage not in best or stop - start > best[stage][1] - best[stage][0]:
            best[stage] = (start, stop)

    windows = []
    for stage, (start, stop) in best.items():
        length = stop - start
        parts = min(max_substages, length // window_size) if length >= split_threshold else 1
        names = _SUBSTAGE_NAMES[parts]
        if parts == 1:
            w = min(window_size, length)
            offset = {"start": 0, "center": (length - w) // 2, "end": length - w}[placement]
            spans = [(start + offset, start + offset + w)]
        else:
            spans = [(start, start + window_size), (stop - window_size, stop)]
            if parts == 3:
                mid = start + (length - window_size) // 2
                spans.insert(1, (mid, mid + window_size))
        for name, (a, b) in zip(names, spans):
            chosen = sessions[a:b]
            label = f"{name} S{stage}" if name else f"S{stage}"
            windows.append(
                StageWindow(
                    stage_label=label,
                    stage=stage,
                    mlu_range=ranges[stage - 1],
                    file_indices=tuple(s.visit_index for s in chosen),
                    span_days=_span_days(chosen),
                )
            )
    windows.sort(key=lambda w: w.file_indices[0])
    plan = StagePlan(corpus.child_id, tuple(windows), tuple(ranges))
    check_plan(plan)
    return plan


def _span_days(sessions: Sequence[Session]) -> int | None:
    first, last = sessions[0].date, sessions[-1].date
    if first is None or last is None:
        return None
    return (last - first).days


def build_stage_networks(
    corpus: Corpus,
    plan: StagePlan,
    speaker: str,
    *,
    self_loops: bool = True,
) -> list[tuple[StageWindow, LexicalNetwork]]:
    """One network per window from the speaker's spontaneous speech in exactly those files.

    The same plan serves the child and the mother.
    """
    by_visit = {s.visit_index: s for s in corpus.sessions}
    out = []
    for window in plan.windows:
        missing = [i for i in window.file_indices if i not in by_visit]
        if missing:
            raise InputError(f"window {window.stage_label!r}: no transcript for visit(s) {missing}")
        sessions = [by_visit[i] for i in window.file_indices]
        meta = NetworkMeta(
            child_id=corpus.child_id,
            speaker=speaker,
            mode="stage",
            label=window.stage_label,
            visits=window.file_indices,
        )
        out.append((window, build_network(speaker_utterances(sessions, speaker), meta, self_loops=self_loops)))
    return out
