"""Feature-matrix assembly: one row per connected pair.

Each row carries the structural score (mcc) and the four profile
similarities (w, e, ht, cc), all in [0, 1], plus a binary label and a
three-way ground-truth category.  Attribute text is normalized (and
canonicalized when a dictionary is given) once per profile before any
similarity is computed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from mcclink.errors import InputError
from mcclink.fuzzy import token_set_ratio
from mcclink.graph import SocialGraph, mcc_all
from mcclink.profiles import ATTRIBUTE_FIELDS, Profile
from mcclink.textnorm import CanonDictionary, canonicalize, normalize

CATEGORIES = ("normal", "suspicious", "fake")

_CSV_HEADER = ("u", "v", "mcc", "w", "e", "ht", "cc", "category", "label")

FEATURE_NAMES = ("mcc", "w", "e", "ht", "cc")


@dataclass(frozen=True)
class FeatureRow:
    u: str
    v: str
    mcc: float
    w: float
    e: float
    ht: float
    cc: float
    label: int
    category: str

    @property
    def values(self) -> tuple[float, float, float, float, float]:
        return (self.mcc, self.w, self.e, self.ht, self.cc)


@dataclass(frozen=True)
class FeatureTable:
    rows: tuple[FeatureRow, ...]
    provenance: Mapping[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[FeatureRow]:
        return iter(self.rows)

    @property
    def matrix(self) -> np.ndarray:
        """Feature values as an (n, 5) float array, columns f1..f5."""
        if not self.rows:
            return np.zeros((0, 5), dtype=np.float64)
        return np.asarray([r.values for r in self.rows], dtype=np.float64)

    @property
    def labels(self) -> np.ndarray:
        return np.asarray([r.label for r in self.rows], dtype=np.int64)

    def category_counts(self) -> dict[str, int]:
        counts = {c: 0 for c in CATEGORIES}
        for r in self.rows:
            counts[r.category] += 1
        return counts

    def subset(self, indices, provenance: Mapping[str, object] | None = None
               ) -> "FeatureTable":
        picked = sorted(int(i) for i in indices)
        return FeatureTable(
            rows=tuple(self.rows[i] for i in picked),
            provenance=dict(provenance or {}),
        )

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_CSV_HEADER)
            for r in self.rows:
                writer.writerow(
                    [r.u, r.v]
                    + [f"{x:.6f}" for x in r.values]
                    + [r.category, r.label]
                )

    @classmethod
    def from_csv(cls, path) -> "FeatureTable":
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != _CSV_HEADER:
                raise InputError(f"{path}: expected header {','.join(_CSV_HEADER)}")
            for lineno, row in enumerate(reader, start=2):
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if len(row) != len(_CSV_HEADER):
                    raise InputError(f"{path}:{lineno}: expected {len(_CSV_HEADER)} columns")
                try:
                    values = [float(x) for x in row[2:7]]
                    label = int(row[8])
                except ValueError as exc:
                    raise InputError(f"{path}:{lineno}: {exc}") from exc
                category = row[7].strip()
                if category not in CATEGORIES:
                    raise InputError(f"{path}:{lineno}: unknown category {category!r}")
                if label not in (0, 1):
                    raise InputError(f"{path}:{lineno}: label must be 0 or 1")
                rows.append(
                    FeatureRow(
                        u=row[0], v=row[1],
                        mcc=values[0], w=values[1], e=values[2],
                        ht=values[3], cc=values[4],
                        label=label, category=category,
                    )
                )
        return cls(rows=tuple(rows), provenance={"source": str(path)})


def label_link(pu: Profile, pv: Profile) -> tuple[int, str]:
    """Binary label and three-way category from the ground-truth flags."""
    if pu.is_fake and pv.is_fake:
        return 1, "fake"
    if pu.is_fake or pv.is_fake:
        return 1, "suspicious"
    return 0, "normal"


def _normalized_attributes(
    profile: Profile,
    dictionary: CanonDictionary | None,
    stopwords: frozenset[str] | None,
) -> dict[str, str | None]:
    """Normalize each present attribute; values that normalize to nothing
    count as missing."""
    out: dict[str, str | None] = {}
    for attr in ATTRIBUTE_FIELDS:
        raw = getattr(profile, attr)
        if raw is None or not raw.strip():
            out[attr] = None
            continue
        norm = normalize(raw, stopwords)
        if dictionary is not None:
            norm = canonicalize(norm, dictionary)
        out[attr] = norm.text if norm.tokens else None
    return out


def build_feature_table(
    g: SocialGraph,
    profiles: Mapping[str, Profile],
    dictionary: CanonDictionary | None = None,
    stopwords: frozenset[str] | None = None,
    fake_policy: str = "include",
    provenance: Mapping[str, object] | None = None,
) -> FeatureTable:
    """One feature row per edge, canonical order.

    ``fake_policy`` is either ``include`` (fake-fake edges labeled
    suspicious) or ``drop`` (those rows omitted).  Edges where either
    endpoint has none of the four attributes are skipped; individual
    missing attributes are imputed as 0.0 similarity and counted in
    provenance.
    """
    if fake_policy not in ("include", "drop"):
        raise InputError(f"fake_policy must be 'include' or 'drop', got {fake_policy!r}")
    norm_attrs: dict[str, dict[str, str | None]] = {}
    present_count: dict[str, int] = {}
    for node in g.nodes:
        p = profiles.get(node)
        if p is None:
            raise InputError(f"no profile for graph node {node!r}")
        if p.is_fake != g.is_fake(node):
            raise InputError(
                f"ground-truth flag for node {node!r} disagrees between "
                f"profile and graph"
            )
        attrs = _normalized_attributes(p, dictionary, stopwords)
        norm_attrs[node] = attrs
        present_count[node] = sum(1 for v in attrs.values() if v is not None)

    rows: list[FeatureRow] = []
    imputed = 0
    dropped_attributeless = 0
    dropped_fake = 0
    for rec in mcc_all(g):
        u, v = rec.u, rec.v
        if present_count[u] == 0 or present_count[v] == 0:
            dropped_attributeless += 1
            continue
        label, category = label_link(profiles[u], profiles[v])
        if category == "fake" and fake_policy == "drop":
            dropped_fake += 1
            continue
        sims = []
        for attr in ATTRIBUTE_FIELDS:
            va = norm_attrs[u][attr]
            vb = norm_attrs[v][attr]
            if va is None or vb is None:
                imputed += 1
                sims.append(0.0)
            else:
                sims.append(token_set_ratio(va, vb) / 100.0)
        rows.append(
            FeatureRow(
                u=u, v=v, mcc=rec.mcc,
                w=sims[0], e=sims[1], ht=sims[2], cc=sims[3],
                label=label, category=category,
            )
        )
    prov = {
        "edges": g.edge_count,
        "rows": len(rows),
        "imputed_values": imputed,
        "dropped_attributeless_rows": dropped_attributeless,
        "dropped_fake_rows": dropped_fake,
        "fake_policy": fake_policy,
    }
    if provenance:
        prov.update(provenance)
    return FeatureTable(rows=tuple(rows), provenance=prov)


def _largest_remainder_quota(counts: list[int], total_take: int) -> list[int]:
    """Apportion ``total_take`` across strata proportionally, giving the
    leftover units to the largest fractional remainders."""
    n = sum(counts)
    raw = [total_take * c / n for c in counts]
    quota = [math.floor(x) for x in raw]
    leftover = total_take - sum(quota)
    order = sorted(
        range(len(counts)), key=lambda i: (-(raw[i] - quota[i]), -counts[i], i)
    )
    for i in order[:leftover]:
        quota[i] += 1
    return quota


def split_train_test(
    t: FeatureTable, test_fraction: float, seed: int
) -> tuple[FeatureTable, FeatureTable]:
    """Stratified-by-label holdout; |test| = round(test_fraction * |t|)."""
    if not (0.0 < test_fraction < 1.0):
        raise InputError(f"test_fraction must be in (0,1), got {test_fraction}")
    n = len(t)
    labels = t.labels
    classes = sorted(set(int(x) for x in labels))
    if len(classes) < 2:
        raise InputError("cannot stratify a single-class table")
    n_test = int(math.floor(test_fraction * n + 0.5))
    if n_test == 0 or n_test == n:
        raise InputError(
            f"test_fraction {test_fraction} leaves an empty side for {n} rows"
        )
    counts = [int((labels == c).sum()) for c in classes]
    quotas = _largest_remainder_quota(counts, n_test)
    rng = np.random.default_rng(seed)
    test_idx: list[int] = []
    for c, quota in zip(classes, quotas):
        members = np.flatnonzero(labels == c)
        perm = rng.permutation(len(members))
        test_idx.extend(int(members[i]) for i in perm[:quota])
    test_set = set(test_idx)
    train_idx = [i for i in range(n) if i not in test_set]
    split_info = {"seed": seed, "test_fraction": test_fraction, "parent_rows": n}
    train = t.subset(train_idx, provenance={**split_info, "part": "train"})
    test = t.subset(test_idx, provenance={**split_info, "part": "test"})
    return train, test
