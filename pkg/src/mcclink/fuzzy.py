"""Fuzzy string similarity built on insert/delete edit distance.

All ratios return integers in [0, 100].  Rounding is half-up.  The
distance itself only counts insertions and deletions, so
``ratio == 100 * (len(a) + len(b) - dist) / (len(a) + len(b))`` rewards
long common subsequences.
"""

from __future__ import annotations

import difflib
import math

from mcclink import backend
from mcclink.errors import InputError
from mcclink.textnorm import tokenize

ATTRIBUTES = ("work", "education", "home_town", "current_city")


def indel_distance(a: str, b: str) -> int:
    """Minimum insertions plus deletions turning ``a`` into ``b``."""
    return backend.indel_distance(a, b)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def ratio(a: str, b: str) -> int:
    """Whole-string similarity; two empty strings count as identical."""
    total = len(a) + len(b)
    if total == 0:
        return 100
    dist = backend.indel_distance(a, b)
    return _round_half_up(100.0 * (total - dist) / total)


def token_sort_ratio(a: str, b: str) -> int:
    """Similarity after sorting tokens, cancelling word-order effects."""
    sa = " ".join(sorted(tokenize(a)))
    sb = " ".join(sorted(tokenize(b)))
    return ratio(sa, sb)


def token_set_ratio(a: str, b: str) -> int:
    """Similarity of token sets: intersection against each remainder.

    Builds the sorted intersection string and the two sorted
    intersection-plus-difference strings, and returns the best pairwise
    ratio.  A string whose tokens are a subset of the other's scores 100.
    """
    ta = set(tokenize(a))
    tb = set(tokenize(b))
    inter = " ".join(sorted(ta & tb))
    only_a = " ".join(sorted(ta - tb))
    only_b = " ".join(sorted(tb - ta))
    s1 = (inter + " " + only_a).strip()
    s2 = (inter + " " + only_b).strip()
    return max(ratio(inter, s1), ratio(inter, s2), ratio(s1, s2))


def partial_ratio(a: str, b: str) -> int:
    """Best similarity of the shorter string against any equal-length
    window of the longer one; window starts come from difflib matching
    blocks.  An empty shorter string scores 100."""
    if len(a) <= len(b):
        short, long = a, b
    else:
        short, long = b, a
    if not short:
        return 100
    if len(short) == len(long):
        return ratio(short, long)
    matcher = difflib.SequenceMatcher(None, short, long, autojunk=False)
    max_start = len(long) - len(short)
    starts = set()
    for block in matcher.get_matching_blocks():
        start = block.b - block.a
        if start < 0:
            start = 0
        elif start > max_start:
            start = max_start
        starts.add(start)
    best = 0
    for start in sorted(starts):
        score = ratio(short, long[start : start + len(short)])
        if score > best:
            best = score
            if best == 100:
                break
    return best


def attribute_similarity(pa, pb, attr: str) -> float | None:
    """Token-set similarity in [0, 1] for one profile attribute.

    Expects profiles whose attribute strings are already normalized (and
    canonicalized when a dictionary is in play).  Returns None when the
    attribute is missing on either side.
    """
    if attr not in ATTRIBUTES:
        raise InputError(f"unknown attribute {attr!r}; expected one of {ATTRIBUTES}")
    va = getattr(pa, attr)
    vb = getattr(pb, attr)
    if va is None or vb is None:
        return None
    return token_set_ratio(va, vb) / 100.0
