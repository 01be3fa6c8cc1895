"""Configurable text analysis chain shared by indexing and query parsing.

Pipeline order is fixed: segment, case-fold, punctuation-strip, stopword
filter, then subword split when mode is "subword". Analyzers are immutable
after construction and safe for concurrent use.
"""

from __future__ import annotations

import functools
import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .errors import ConfigError

MODES = ("unicode-word", "whitespace", "subword")

# Word-character runs (letters, digits, combining marks; underscore excluded).
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

_SHIPPED_STOPWORD_TAGS = ("en", "fr", "ar", "sw", "bn")


class Token(NamedTuple):
    term: str
    position: int


@dataclass(frozen=True)
class AnalyzerConfig:
    """Declarative description of an analysis chain."""

    mode: str = "unicode-word"
    lowercase: bool = True
    strip_punctuation: bool = True
    stopwords: str | None = None  # shipped tag or path to a word-per-line file
    subword_vocab: str | None = None  # path, required iff mode == "subword"
    language_tag: str | None = None  # BCP-47-ish tag selecting a stopword list

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown analyzer mode {self.mode!r}")
        if self.mode == "subword" and self.subword_vocab is None:
            raise ConfigError("subword mode requires a subword_vocab file")


def _load_word_list(spec: str) -> list[str]:
    """Load a one-term-per-line UTF-8 word list from a shipped tag or path."""
    path = Path(spec)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    elif spec in _SHIPPED_STOPWORD_TAGS:
        ref = resources.files("plugsearch").joinpath(f"data/stopwords/{spec}.txt")
        text = ref.read_text(encoding="utf-8")
    else:
        raise ConfigError(f"no such word list file or shipped tag: {spec!r}")
    return [line.strip() for line in text.splitlines() if line.strip()]


def _strip_token_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


class Analyzer:
    """Pure, deterministic text -> token stream function."""

    def __init__(
        self,
        mode: str,
        lowercase: bool,
        strip_punctuation: bool,
        stopwords: frozenset[str],
        vocab: tuple[str, ...],
        language_tag: str | None = None,
    ):
        self.mode = mode
        self.lowercase = lowercase
        self.strip_punctuation = strip_punctuation
        self.stopwords = stopwords
        self.vocab = vocab
        self.language_tag = language_tag
        self._vocab_set = set(vocab)
        self._max_piece_len = max((len(p) for p in vocab), default=0)
        # per-instance memo: snippet highlighting re-analyzes the same
        # display tokens constantly
        self.token_terms = functools.lru_cache(maxsize=65536)(self._token_terms)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_config(cls, config: AnalyzerConfig) -> "Analyzer":
        stopwords: set[str] = set()
        source = config.stopwords
        if source is None and config.language_tag is not None:
            tag = config.language_tag.split("-")[0].lower()
            if tag in _SHIPPED_STOPWORD_TAGS:
                source = tag
            else:
                import warnings

                warnings.warn(
                    f"no shipped stopword list for language tag "
                    f"{config.language_tag!r}; proceeding without stopwords",
                    stacklevel=3,
                )
        if source is not None:
            words = _load_word_list(source)
            if config.lowercase:
                words = [w.casefold() for w in words]
            stopwords = set(words)

        vocab: tuple[str, ...] = ()
        if config.mode == "subword":
            vocab = tuple(_load_word_list(config.subword_vocab))
            if not vocab:
                raise ConfigError(f"empty subword vocab: {config.subword_vocab!r}")

        return cls(
            config.mode,
            config.lowercase,
            config.strip_punctuation,
            frozenset(stopwords),
            vocab,
            config.language_tag,
        )

    @classmethod
    def from_dict(cls, d: dict) -> "Analyzer":
        return cls(
            d["mode"],
            d["lowercase"],
            d["strip_punctuation"],
            frozenset(d["stopwords"]),
            tuple(d["subword_vocab"]),
            d.get("language_tag"),
        )

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        """Canonical form: fixed field order, word lists inlined."""
        return {
            "mode": self.mode,
            "lowercase": self.lowercase,
            "strip_punctuation": self.strip_punctuation,
            "stopwords": sorted(self.stopwords),
            "subword_vocab": list(self.vocab),
            "language_tag": self.language_tag,
        }

    def config_hash(self) -> str:
        blob = json.dumps(
            self.to_dict(), separators=(",", ":"), ensure_ascii=False
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    # -- analysis ----------------------------------------------------------

    def _segment(self, text: str) -> list[str]:
        if self.mode == "whitespace":
            return text.split()
        return _WORD_RE.findall(text)

    def _subword_split(self, word: str) -> list[str]:
        """Greedy longest-match split; whole word kept when no full cover."""
        pieces: list[str] = []
        pos = 0
        n = len(word)
        while pos < n:
            prefix = "##" if pos > 0 else ""
            best = None
            upper = min(n, pos + self._max_piece_len)
            for end in range(upper, pos, -1):
                candidate = prefix + word[pos:end]
                if candidate in self._vocab_set:
                    best = (candidate, end)
                    break
            if best is None:
                return [word]
            pieces.append(best[0])
            pos = best[1]
        return pieces

    def iter_terms(self, text: str):
        """Yield normalized terms in order, without position bookkeeping."""
        stopwords = self.stopwords
        subword = self.mode == "subword"
        strip = self.strip_punctuation
        lower = self.lowercase
        for raw in self._segment(text):
            term = raw.casefold() if lower else raw
            if strip:
                term = _strip_token_punct(term)
            if not term or term in stopwords:
                continue
            if subword:
                yield from self._subword_split(term)
            else:
                yield term

    def _token_terms(self, token: str) -> tuple[str, ...]:
        return tuple(self.iter_terms(token))

    def analyze(self, text: str) -> list[Token]:
        return [Token(term, i) for i, term in enumerate(self.iter_terms(text))]

    def terms(self, text: str) -> list[str]:
        return list(self.iter_terms(text))

    def __call__(self, text: str) -> list[Token]:
        return self.analyze(text)


def build_analyzer(config: AnalyzerConfig) -> Analyzer:
    """Build an immutable analyzer from a config."""
    return Analyzer.from_config(config)


def analyze(analyzer: Analyzer, text: str) -> list[Token]:
    return analyzer.analyze(text)
