"""CHAT-lite transcript ingestion.

Only the subset of CHAT needed for collocation networks is understood:
``*SPK:`` main tiers, ``%mor:`` dependent tiers, ``@`` headers, ``[...]``
annotation groups (postcodes included) and whitespace continuation lines.
Everything else that looks like CHAT markup is stripped, not interpreted.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import date, datetime
from fractions import Fraction
from pathlib import Path

from .errors import InputError, TranscriptParseError

DEFAULT_SPEAKERS = ("MOT", "CHI")
# imitation, self-repetition, routine, partly intelligible
DEFAULT_EXCLUSION_POSTCODES = ("imit", "i", "sr", "rep", "r", "rout", "routine", "pi")
DEFAULT_UNINTELLIGIBLE = ("xxx", "yyy", "www")
DEFAULT_PUNCTUATION = (".", "?", "!", ",")

_MAIN_TIER = re.compile(r"\*([A-Za-z0-9_]+):(.*)\Z")
_DEPENDENT_TIER = re.compile(r"%([A-Za-z0-9_]+):(.*)\Z")
_HEADER = re.compile(r"@([^:\s]+)(?::(.*))?\Z")
_BRACKET_GROUP = re.compile(r"\[[^\[\]]*\]")
_POSTCODE = re.compile(r"\[\+\s*([^\[\]]*?)\s*\]")
_TIME_BULLET = re.compile("\x15[^\x15]*\x15")
_UNSPOKEN = re.compile(r"0(?![0-9])|&")


@dataclass(frozen=True)
class IngestConfig:
    speakers: tuple[str, ...] = DEFAULT_SPEAKERS
    exclusion_postcodes: frozenset[str] = frozenset(DEFAULT_EXCLUSION_POSTCODES)
    unintelligible: frozenset[str] = frozenset(DEFAULT_UNINTELLIGIBLE)
    punctuation: frozenset[str] = frozenset(DEFAULT_PUNCTUATION)

    def __post_init__(self) -> None:
        object.__setattr__(self, "speakers", tuple(self.speakers))
        object.__setattr__(
            self, "exclusion_postcodes", frozenset(c.lower() for c in self.exclusion_postcodes)
        )
        object.__setattr__(self, "unintelligible", frozenset(w.lower() for w in self.unintelligible))
        object.__setattr__(self, "punctuation", frozenset(self.punctuation))


DEFAULT_CONFIG = IngestConfig()


@dataclass(frozen=True)
class Utterance:
    speaker: str
    tokens: tuple[str, ...]
    morphemes: int
    spontaneous: bool
    raw: str
    mor: tuple[str, ...] | None = None

    @property
    def word_based(self) -> bool:
        """True when the morpheme count fell back to the token count."""
        return not _mor_items(self.mor)


@dataclass(frozen=True)
class Session:
    child_id: str
    visit_index: int
    utterances: tuple[Utterance, ...]
    source_name: str = ""
    headers: tuple[tuple[str, str], ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.visit_index < 1:
            raise InputError(f"{self.source_name or 'session'}: visit index must be >= 1")
        object.__setattr__(self, "utterances", tuple(self.utterances))

    @property
    def date(self) -> date | None:
        for name, value in self.headers:
            if name.lower() == "date":
                try:
                    return datetime.strptime(value.strip(), "%d-%b-%Y").date()
                except ValueError:
                    return None
        return None

    def spontaneous(self, speaker: str) -> list[Utterance]:
        return [u for u in self.utterances if u.speaker == speaker and u.spontaneous]


@dataclass(frozen=True)
class Corpus:
    child_id: str
    sessions: tuple[Session, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sessions", tuple(self.sessions))
        visits = [s.visit_index for s in self.sessions]
        if any(b <= a for a, b in zip(visits, visits[1:])):
            raise InputError(f"corpus {self.child_id!r}: visit indices must be strictly increasing")

    def session(self, visit_index: int) -> Session:
        for s in self.sessions:
            if s.visit_index == visit_index:
                return s
        raise KeyError(visit_index)

    @property
    def visits(self) -> list[int]:
        return [s.visit_index for s in self.sessions]


def _strip_groups(text: str) -> str:
    # innermost first, until nested groups are gone
    while True:
        stripped = _BRACKET_GROUP.sub(" ", text)
        if stripped == text:
            return stripped
        text = stripped


def tokenize(main_line: str, config: IngestConfig = DEFAULT_CONFIG) -> list[str]:
    """Split an utterance body into lowercased word forms.

    Annotation groups in square brackets are removed, retracing angle
    brackets are dropped, punctuation marks act as separators, and any
    remaining token without a letter or digit (CHAT terminators such as
    ``+...``) is discarded. Unspoken material is dropped too: ``0`` (action
    without speech), ``0word`` (omitted word) and ``&`` fillers or events.
    Contractions and ``+`` compounds stay whole.
    """
    text = _TIME_BULLET.sub(" ", main_line)
    text = _strip_groups(text).replace("<", " ").replace(">", " ")
    for mark in config.punctuation:
        text = text.replace(mark, " ")
    tokens = []
    for tok in text.lower().split():
        if _UNSPOKEN.match(tok) or not any(ch.isalnum() for ch in tok):
            continue
        tokens.append(tok)
    return tokens


def postcodes(raw: str) -> list[str]:
    return [code.lower() for code in _POSTCODE.findall(raw)]


def is_spontaneous(utterance: Utterance, config: IngestConfig = DEFAULT_CONFIG) -> bool:
    if not utterance.tokens:
        return False
    if any(code in config.exclusion_postcodes for code in postcodes(utterance.raw)):
        return False
    return not any(tok in config.unintelligible for tok in utterance.tokens)


def _mor_items(mor: Sequence[str] | None) -> list[str]:
    if not mor:
        return []
    return [item for item in mor if any(ch.isalnum() for ch in item)]


def morpheme_count(utterance: Utterance) -> int:
    """Items on the ``%mor`` tier, or the token count when no tier is attached.

    Bare punctuation items on the tier are not counted.
    """
    if not utterance.tokens:
        raise ValueError("morpheme count is undefined for an utterance without tokens")
    items = _mor_items(utterance.mor)
    return len(items) if items else len(utterance.tokens)


def make_utterance(
    speaker: str,
    raw: str,
    mor: Sequence[str] | None = None,
    config: IngestConfig = DEFAULT_CONFIG,
) -> Utterance:
    raw = " ".join(raw.split())
    tokens = tuple(tokenize(raw, config))
    draft = Utterance(
        speaker=speaker,
        tokens=tokens,
        morphemes=0,
        spontaneous=False,
        raw=raw,
        mor=tuple(mor) if mor is not None else None,
    )
    return Utterance(
        speaker=speaker,
        tokens=tokens,
        morphemes=morpheme_count(draft) if tokens else 0,
        spontaneous=is_spontaneous(draft, config),
        raw=raw,
        mor=draft.mor,
    )


def _logical_lines(text: str, source: str) -> list[tuple[int, str]]:
    lines: list[tuple[int, str]] = []
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.lstrip("\ufeff") if no == 1 else line
        if not line.strip():
            continue
        if line[0] in " \t":
            if not lines:
                raise TranscriptParseError(no, "continuation line with nothing to continue", source)
            start, prev = lines[-1]
            lines[-1] = (start, prev + " " + line.strip())
        else:
            lines.append((no, line.rstrip()))
    return lines


def parse_session(
    text: str,
    config: IngestConfig = DEFAULT_CONFIG,
    *,
    child_id: str = "",
    visit_index: int = 1,
    source_name: str = "",
) -> Session:
    """Parse one transcript into a Session.

    Main tiers of speakers outside ``config.speakers`` are skipped and
    reported in ``Session.warnings``; a ``%mor`` tier attaches to the
    utterance directly above it.
    """
    headers: list[tuple[str, str]] = []
    pending: list[tuple[str, str, list[str] | None]] = []
    warnings: list[str] = []
    last_kept = False
    for no, line in _logical_lines(text, source_name):
        if line.startswith("*"):
            m = _MAIN_TIER.match(line)
            if m is None:
                raise TranscriptParseError(no, f"malformed main tier prefix: {line[:20]!r}", source_name)
            speaker, body = m.groups()
            last_kept = speaker in config.speakers
            if last_kept:
                pending.append((speaker, body, None))
            else:
                warnings.append(f"line {no}: skipped speaker {speaker}")
        elif line.startswith("%"):
            m = _DEPENDENT_TIER.match(line)
            if m is None:
                raise TranscriptParseError(no, f"malformed dependent tier prefix: {line[:20]!r}", source_name)
            tier, body = m.groups()
            if tier.lower() == "mor" and last_kept:
                speaker, main, _ = pending[-1]
                pending[-1] = (speaker, main, body.split())
        elif line.startswith("@"):
            m = _HEADER.match(line)
            if m is None:
                raise TranscriptParseError(no, f"malformed header: {line[:20]!r}", source_name)
            name, value = m.groups()
            headers.append((name, " ".join((value or "").split())))
        else:
            raise TranscriptParseError(no, f"malformed tier prefix: {line[:20]!r}", source_name)

    utterances = tuple(make_utterance(spk, body, mor, config) for spk, body, mor in pending)
    return Session(
        child_id=child_id,
        visit_index=visit_index,
        utterances=utterances,
        source_name=source_name,
        headers=tuple(headers),
        warnings=tuple(warnings),
    )


def to_chat(session: Session) -> str:
    """Render a Session as normalized CHAT-lite that parses back to an equal Session."""
    out = []
    for name, value in session.headers:
        out.append(f"@{name}:\t{value}" if value else f"@{name}")
    for u in session.utterances:
        out.append(f"*{u.speaker}:\t{u.raw}")
        if u.mor is not None:
            out.append("%mor:\t" + " ".join(u.mor))
    return "".join(line + "\n" for line in out)


def dump_session(session: Session) -> str:
    """One line per utterance: visit, speaker, spontaneous, morphemes, tokens (tab separated)."""
    lines = []
    for u in session.utterances:
        fields = [str(session.visit_index), u.speaker, "1" if u.spontaneous else "0", str(u.morphemes)]
        lines.append("\t".join(fields + list(u.tokens)) + "\n")
    return "".join(lines)


def mlu_from_counts(morphemes: int, utterances: int) -> Fraction:
    if utterances <= 0:
        raise ValueError("MLU needs at least one utterance")
    return Fraction(morphemes, utterances)


def speaker_counts(sessions: Iterable[Session], speaker: str) -> tuple[int, int]:
    """(utterance count, morpheme count) over the speaker's spontaneous utterances."""
    n_utt = n_morph = 0
    for s in sessions:
        for u in s.spontaneous(speaker):
            n_utt += 1
            n_morph += u.morphemes
    return n_utt, n_morph


def session_mlu(sessions: Iterable[Session], speaker: str) -> Fraction:
    n_utt, n_morph = speaker_counts(sessions, speaker)
    if n_utt == 0:
        raise ValueError(f"no spontaneous utterances for speaker {speaker}")
    return mlu_from_counts(n_morph, n_utt)


def is_word_based(sessions: Iterable[Session], speaker: str) -> bool:
    return any(u.word_based for s in sessions for u in s.spontaneous(speaker))


_TRAILING_DIGITS = re.compile(r"(\d+)\Z")


def _group_inputs(paths: Iterable[Path]) -> dict[str, list[Path]]:
    groups: dict[str, list[Path]] = {}
    for path in paths:
        path = Path(path)
        if path.is_dir():
            files = sorted(p for p in path.iterdir() if p.is_file() and p.suffix.lower() == ".cha")
            if not files:
                raise InputError(f"{path}: no .cha transcripts found")
            groups.setdefault(path.name, []).extend(files)
        elif path.is_file():
            child = _TRAILING_DIGITS.sub("", path.stem).rstrip("_-.") or "child"
            groups.setdefault(child, []).append(path)
        else:
            raise InputError(f"{path}: no such file or directory")
    return groups


def _visit_indices(files: Sequence[Path]) -> list[int]:
    numbers = []
    for f in files:
        m = _TRAILING_DIGITS.search(f.stem)
        numbers.append(int(m.group(1)) if m else None)
    if None not in numbers and len(set(numbers)) == len(numbers) and min(numbers) >= 1:
        return numbers
    return list(range(1, len(files) + 1))


def load_corpora(paths: Iterable[Path], config: IngestConfig = DEFAULT_CONFIG) -> dict[str, Corpus]:
    """Read transcripts and group them into one Corpus per child.

    A directory holds one child's ``.cha`` files and is named after the
    child. Loose files are grouped by their stem minus trailing digits
    (``joel01.cha`` and ``joel02.cha`` belong to ``joel``). Visit indices
    come from the trailing digits when they are unique, otherwise from
    sorted file order.
    """
    corpora = {}
    for child, files in sorted(_group_inputs(paths).items()):
        files = sorted(set(files))
        sessions = []
        for visit, f in zip(_visit_indices(files), files):
            try:
                text = f.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                raise InputError(f"{f}: cannot read transcript ({exc})") from exc
            sessions.append(parse_session(text, config, child_id=child, visit_index=visit, source_name=f.name))
        sessions.sort(key=lambda s: s.visit_index)
        corpora[child] = Corpus(child_id=child, sessions=tuple(sessions))
    return corpora
