"""Venue name cleaning, abbreviation extraction, and the raw-name alias map.

Raw venue strings as deposited in publication metadata are noisy: annual
conference instances carry years and ordinals ("EMNLP 2019", "3rd ..."),
full names and acronyms coexist, and boilerplate ("Proceedings of ...")
varies by publisher. Every raw name is reduced to a canonical lowercase key,
preferring an extracted acronym when one is present, and the mapping from
raw names to keys is retained for reuse at inference time.
"""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .errors import DataError

DEFAULT_STOPWORDS = frozenset(
    "a an and as at by for from in of on or the to with".split()
)

DEFAULT_BOILERPLATE = (
    "annual meeting of",
    "oral talk",
    "proceedings of",
    "speech given",
)

_CARDINAL_WORDS = (
    "one two three four five six seven eight nine ten eleven twelve thirteen "
    "fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty forty "
    "fifty sixty seventy eighty ninety hundred thousand"
).split()

_ORDINAL_WORDS = (
    "first second third fourth fifth sixth seventh eighth ninth tenth "
    "eleventh twelfth thirteenth fourteenth fifteenth sixteenth seventeenth "
    "eighteenth nineteenth twentieth thirtieth fortieth fiftieth sixtieth "
    "seventieth eightieth ninetieth hundredth"
).split()

DEFAULT_NUMBER_WORDS = frozenset(_CARDINAL_WORDS + _ORDINAL_WORDS)

DEFAULT_DAY_NAMES = frozenset(
    "monday tuesday wednesday thursday friday saturday sunday".split()
)

DEFAULT_MONTH_NAMES = frozenset(
    "january february march april may june july august september october "
    "november december jan feb mar apr jun jul aug sep sept oct nov dec".split()
)


def _roman(n: int) -> str:
    out = []
    for value, glyph in ((10, "x"), (9, "ix"), (5, "v"), (4, "iv"), (1, "i")):
        while n >= value:
            out.append(glyph)
            n -= value
    return "".join(out)


# Standalone latin numerals I..XXXIX (lowercased).
_ROMAN_TOKENS = frozenset(_roman(i) for i in range(1, 40))
_ROMAN_RE = re.compile(r"\b[ivx]+\b")

# Numeric cardinals and ordinals: 2019, 3, 3rd, 42nd, ...
_NUMERIC_RE = re.compile(r"\b\d+(?:st|nd|rd|th)?\b")

_STRIP_CHARS = string.punctuation + string.whitespace


@dataclass(frozen=True)
class VenueNormConfig:
    """Cleaning rules; the word lists are stand-in defaults and replaceable."""

    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    boilerplate: tuple[str, ...] = DEFAULT_BOILERPLATE
    number_words: frozenset[str] = DEFAULT_NUMBER_WORDS
    day_names: frozenset[str] = DEFAULT_DAY_NAMES
    month_names: frozenset[str] = DEFAULT_MONTH_NAMES
    abbrev_min_len: int = 2
    abbrev_max_len: int = 10
    abbrev_upper_fraction: float = 0.6


DEFAULT_CONFIG = VenueNormConfig()


class UnresolvableVenueError(DataError):
    """Raw venue name yields no abbreviation and cleans down to nothing."""

    def __init__(self, raw: str):
        super().__init__(f"unresolvable venue name {raw!r}")
        self.raw = raw


def _token_pattern(tokens: frozenset[str]) -> re.Pattern | None:
    if not tokens:
        return None
    alternation = "|".join(re.escape(t) for t in sorted(tokens))
    return re.compile(rf"\b(?:{alternation})\b")


@lru_cache(maxsize=16)
def _compiled_rules(config: VenueNormConfig):
    phrases = tuple(
        re.compile(r"\b" + r"\s+".join(re.escape(w) for w in p.lower().split()) + r"\b")
        for p in config.boilerplate
    )
    return (
        _token_pattern(config.number_words),
        _token_pattern(config.day_names | config.month_names),
        phrases,
        _token_pattern(config.stopwords),
    )


def preprocess(raw: str, config: VenueNormConfig = DEFAULT_CONFIG) -> str:
    """Clean a raw venue name down to its canonical token form.

    Removes, in order: standalone latin numerals, numeric and spelled-out
    cardinals/ordinals, day and month names, boilerplate phrases, stopwords,
    and special characters (anything that is not a letter, digit, space,
    '-', '(' or ')'). Every removal inserts a space; runs of spaces collapse;
    the result is lowercase and trimmed. May be empty.
    """
    number_re, date_re, phrases, stop_re = _compiled_rules(config)
    s = raw.lower()
    s = _ROMAN_RE.sub(lambda m: " " if m.group(0) in _ROMAN_TOKENS else m.group(0), s)
    s = _NUMERIC_RE.sub(" ", s)
    if number_re:
        s = number_re.sub(" ", s)
    if date_re:
        s = date_re.sub(" ", s)
    for phrase_re in phrases:
        s = phrase_re.sub(" ", s)
    if stop_re:
        s = stop_re.sub(" ", s)
    s = "".join(ch if ch.isalnum() or ch in " ()-" else " " for ch in s)
    return " ".join(s.split())


def _abbrev_candidate(token: str, config: VenueNormConfig) -> str | None:
    t = token.strip(_STRIP_CHARS)
    if not config.abbrev_min_len <= len(t) <= config.abbrev_max_len:
        return None
    upper = sum(1 for ch in t if ch.isupper())
    if upper / len(t) >= config.abbrev_upper_fraction:
        return t
    return None


_PAREN_RE = re.compile(r"\(([^()]*)\)")
_DASH_SPLIT_RE = re.compile(r"\s-\s")


def extract_abbreviation(raw: str, config: VenueNormConfig = DEFAULT_CONFIG) -> str | None:
    """Pull a short mostly-uppercase acronym out of a raw venue name.

    Parenthesized single tokens win ("... (EMNLP)"); otherwise the segments
    after the last " - " separator and before the first one are scanned.
    Checking the before-dash segment too covers the common "EMNLP 2019 -
    Empirical Methods ..." layout where the acronym precedes the dash.
    Returns the lowercased acronym, or None.
    """
    for m in _PAREN_RE.finditer(raw):
        tokens = m.group(1).split()
        if len(tokens) == 1:
            cand = _abbrev_candidate(tokens[0], config)
            if cand:
                return cand.lower()
    segments = _DASH_SPLIT_RE.split(raw)
    if len(segments) > 1:
        for segment in (segments[-1], segments[0]):
            for token in segment.split():
                cand = _abbrev_candidate(token, config)
                if cand:
                    return cand.lower()
    return None


def normalized_raw(raw: str) -> str:
    """Whitespace-collapsed lowercase form of a raw name, used as alias-map key."""
    return " ".join(raw.split()).lower()


class VenueAliasMap:
    """Mapping from normalized raw venue names to canonical venue keys.

    Single-writer during graph construction, read-only afterwards. Each entry
    carries a count of how many times the raw form was seen.
    """

    def __init__(self) -> None:
        self.entries: dict[str, str] = {}
        self.counts: Counter[str] = Counter()

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, raw: str) -> bool:
        return normalized_raw(raw) in self.entries

    def get(self, raw: str) -> str | None:
        return self.entries.get(normalized_raw(raw))

    def record(self, norm: str, key: str) -> None:
        self.entries[norm] = key
        self.counts[norm] += 1

    def merge(self, other: "VenueAliasMap") -> None:
        """Fold another map in; keys are rule-derived, so collisions agree."""
        self.entries.update(other.entries)
        self.counts.update(other.counts)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for norm in sorted(self.entries):
                fh.write(f"{norm}\t{self.entries[norm]}\n")

    @classmethod
    def load(cls, path: str | Path) -> "VenueAliasMap":
        amap = cls()
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or not parts[1]:
                    raise DataError(f"{path}: line {lineno}: expected 'raw<TAB>key'")
                amap.entries[parts[0]] = parts[1]
        return amap


def canonicalize(
    raw: str,
    alias_map: VenueAliasMap,
    config: VenueNormConfig = DEFAULT_CONFIG,
) -> str:
    """Resolve a raw venue name to its canonical key, recording the alias.

    An extracted acronym takes precedence; otherwise the preprocessed full
    name is the key. Deterministic and idempotent: feeding a canonical key
    back in returns the same key.
    """
    norm = normalized_raw(raw)
    if not norm:
        raise UnresolvableVenueError(raw)
    hit = alias_map.entries.get(norm)
    if hit is not None:
        alias_map.counts[norm] += 1
        return hit
    key = extract_abbreviation(raw, config)
    if key is None:
        key = preprocess(raw, config)
        if not key:
            raise UnresolvableVenueError(raw)
    alias_map.record(norm, key)
    return key


def load_wordlist(path: str | Path) -> frozenset[str]:
    """One entry per line; blank lines and leading/trailing space ignored."""
    with open(path, "r", encoding="utf-8") as fh:
        return frozenset(line.strip().lower() for line in fh if line.strip())
