"""Text normalization for profile attributes.

Pipeline: lowercase, tokenize on non-alphanumeric runs, drop stop words,
stem each token to a fixed point, drop any stop word a stem exposed, and
join with single spaces.  Stemming runs to a fixed point so the whole
pipeline is idempotent: normalizing an already-normalized string changes
nothing.

A canonicalization dictionary maps variant phrases onto canonical ones
(longest match first, left to right) so that, for example, different
spellings of the same employer compare as equal before fuzzy matching.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from mcclink import porter
from mcclink.errors import InputError

DEFAULT_STOPWORDS = frozenset(
    """
    a about above after again against all am an and any are as at be
    because been before being below between both but by can could did
    do does doing down during each few for from further had has have
    having he her here hers herself him himself his how i if in into
    is it its itself just me more most my myself no nor not now of off
    on once only or other our ours ourselves out over own same she
    should so some such than that the their theirs them themselves
    then there these they this those through to too under until up
    very was we were what when where which while who whom why will
    with you your yours yourself yourselves
    """.split()
)

_TOKEN_RE = re.compile(r"[^\W_]+")

_MAX_STEM_PASSES = 8


def tokenize(text: str) -> list[str]:
    """Lowercase and split into alphanumeric runs; digits are kept."""
    return _TOKEN_RE.findall(text.lower())


def _stem_fixed(token: str) -> str:
    for _ in range(_MAX_STEM_PASSES):
        nxt = porter.stem(token)
        if nxt == token:
            return token
        token = nxt
    return token


@dataclass(frozen=True)
class NormalizedText:
    """Token sequence produced by :func:`normalize`."""

    tokens: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def __str__(self) -> str:
        return self.text


def normalize(text: str, stopwords: frozenset[str] | None = None) -> NormalizedText:
    """Run the full normalization pipeline over raw text.

    Stop words are removed both before stemming and after, so the output
    token set is always disjoint from the stop-word list even when a stem
    lands on one of its entries.
    """
    if stopwords is None:
        stopwords = DEFAULT_STOPWORDS
    kept = (t for t in tokenize(text) if t not in stopwords)
    stemmed = (_stem_fixed(t) for t in kept)
    return NormalizedText(tuple(t for t in stemmed if t not in stopwords))


def load_stopwords(path) -> frozenset[str]:
    """Read a stop-word file: one word per line, ``#`` starts a comment."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip().lower()
            if line:
                words.add(line)
    return frozenset(words)


class CanonDictionary:
    """Variant-to-canonical phrase mapping.

    Entries are given as ``{canonical: [variant, ...]}`` in raw text and
    normalized on construction, so looking up normalized token runs is
    exact.  Every canonical phrase also matches itself, which keeps
    :func:`canonicalize` idempotent.  A variant claimed by two different
    canonicals is rejected.
    """

    def __init__(
        self,
        mapping: Mapping[str, Iterable[str]],
        stopwords: frozenset[str] | None = None,
    ):
        self._entries: dict[str, tuple[str, ...]] = {}
        self._matcher: dict[tuple[str, ...], tuple[str, ...]] = {}
        self._max_len = 0
        owner: dict[tuple[str, ...], str] = {}
        for canonical_raw, variants_raw in mapping.items():
            canonical = normalize(canonical_raw, stopwords)
            if not canonical.tokens:
                raise InputError(
                    f"canonical phrase {canonical_raw!r} normalizes to nothing"
                )
            variant_texts = set()
            for raw in variants_raw:
                variant = normalize(raw, stopwords)
                if not variant.tokens:
                    raise InputError(
                        f"variant {raw!r} of {canonical_raw!r} normalizes to nothing"
                    )
                variant_texts.add(variant.text)
                self._claim(owner, variant.tokens, canonical)
            self._claim(owner, canonical.tokens, canonical)
            if canonical.text in self._entries:
                raise InputError(f"duplicate canonical phrase {canonical.text!r}")
            self._entries[canonical.text] = tuple(
                sorted(variant_texts - {canonical.text})
            )

    def _claim(self, owner, tokens, canonical):
        seen = owner.get(tokens)
        if seen is not None and seen != canonical.text:
            raise InputError(
                f"variant {' '.join(tokens)!r} is claimed by both "
                f"{seen!r} and {canonical.text!r}"
            )
        owner[tokens] = canonical.text
        self._matcher[tokens] = canonical.tokens
        if len(tokens) > self._max_len:
            self._max_len = len(tokens)

    @property
    def entries(self) -> dict[str, tuple[str, ...]]:
        """Normalized canonical text mapped to its sorted variant texts."""
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonDictionary):
            return NotImplemented
        return self._entries == other._entries

    def match(self, tokens: tuple[str, ...]) -> tuple[str, ...] | None:
        return self._matcher.get(tokens)

    @property
    def max_phrase_len(self) -> int:
        return self._max_len


def canonicalize(text: NormalizedText, dictionary: CanonDictionary) -> NormalizedText:
    """Replace variant phrases with their canonical forms.

    Scans left to right preferring the longest matching phrase; the
    tokens a replacement emits are not rescanned.
    """
    tokens = text.tokens
    out: list[str] = []
    i = 0
    n = len(tokens)
    max_len = dictionary.max_phrase_len
    while i < n:
        replaced = False
        top = min(max_len, n - i)
        for width in range(top, 0, -1):
            target = dictionary.match(tokens[i : i + width])
            if target is not None:
                out.extend(target)
                i += width
                replaced = True
                break
        if not replaced:
            out.append(tokens[i])
            i += 1
    return NormalizedText(tuple(out))


def load_dictionary(path, stopwords: frozenset[str] | None = None) -> CanonDictionary:
    """Parse a dictionary file: ``canonical = variant | variant | ...``.

    Blank lines and lines starting with ``#`` are skipped.
    """
    mapping: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise InputError(f"{path}:{lineno}: expected 'canonical = variants'")
            canonical, _, rest = stripped.partition("=")
            canonical = canonical.strip()
            if not canonical:
                raise InputError(f"{path}:{lineno}: empty canonical phrase")
            variants = [v.strip() for v in rest.split("|") if v.strip()]
            mapping.setdefault(canonical, []).extend(variants)
    return CanonDictionary(mapping, stopwords)


def save_dictionary(dictionary: CanonDictionary, path) -> None:
    """Write entries in the same format :func:`load_dictionary` reads."""
    with open(path, "w", encoding="utf-8") as fh:
        for canonical in sorted(dictionary.entries):
            variants = dictionary.entries[canonical]
            fh.write(f"{canonical} = {' | '.join(variants)}\n".rstrip() + "\n")
