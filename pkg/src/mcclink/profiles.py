"""User profiles: the four text attributes plus the ground-truth flag."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

from mcclink.errors import InputError

ATTRIBUTE_FIELDS = ("work", "education", "home_town", "current_city")

_HEADER = ("id",) + ATTRIBUTE_FIELDS


@dataclass(frozen=True)
class Profile:
    id: str
    work: str | None = None
    education: str | None = None
    home_town: str | None = None
    current_city: str | None = None
    is_fake: bool = False


def load_profiles_csv(path, fakes: set[str] | None = None) -> dict[str, Profile]:
    """Read profiles: header ``id,work,education,home_town,current_city``.

    Empty cells become missing attributes.  ``fakes`` supplies the
    ground-truth flags (usually from the node CSV).
    """
    fakes = fakes or set()
    out: dict[str, Profile] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header[:5]) != _HEADER:
            raise InputError(f"{path}: expected header {','.join(_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 5:
                raise InputError(f"{path}:{lineno}: expected five columns")
            pid = row[0].strip()
            if pid in out:
                raise InputError(f"{path}:{lineno}: duplicate profile id {pid!r}")
            values = [cell.strip() or None for cell in row[1:5]]
            out[pid] = Profile(
                id=pid,
                work=values[0],
                education=values[1],
                home_town=values[2],
                current_city=values[3],
                is_fake=pid in fakes,
            )
    return out


def save_profiles_csv(profiles: Iterable[Profile], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_HEADER)
        for p in profiles:
            writer.writerow(
                [p.id] + [getattr(p, f) or "" for f in ATTRIBUTE_FIELDS]
            )
