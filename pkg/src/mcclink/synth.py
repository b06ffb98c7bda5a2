"""Synthetic community generator with injected fake profiles.

Builds a connected, clustered friendship graph over real users, draws
profile attributes from pools with per-group dominant values, then adds
fake nodes that exploit the mutual-friend mechanism: each fake seeds a
few random acceptances and then walks the friends-of-victims frontier,
where both its target choice and the acceptance probability rise with
the current mutual-friend count.  Fake attributes come from separate
pools, with small per-attribute leak probabilities under which a fake
copies the value of one of its victims.

The default configuration is calibrated so the per-class feature means
of the resulting table land near the reference statistics used across
the test suite (see REFERENCE_MEANS).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from mcclink.errors import InputError
from mcclink.features import FeatureTable
from mcclink.graph import SocialGraph
from mcclink.profiles import Profile

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python 3.10
    import tomli as _toml

# Reference per-class feature means (mcc, w, e, ht, cc) that the default
# configuration is tuned to reproduce.
REFERENCE_MEANS = {
    "normal": (0.4377, 0.7143, 0.4323, 0.2223, 0.6972),
    "suspicious": (0.5521, 0.2679, 0.1111, 0.0081, 0.3558),
}

FEATURE_NAMES = ("mcc", "w", "e", "ht", "cc")

WORK_POOL = (
    "Sunrise Textile Mills",
    "Crescent Software Services",
    "State Cooperative Bank",
    "Lakeside General Hospital",
    "Evergreen Agro Industries",
    "City Transport Authority",
    "Harbor Line Logistics",
    "Summit Steel Works",
    "Bluefield Pharma Labs",
    "Grand Oak Furniture House",
    "Silverleaf Tea Estates",
    "Northgate Power Station",
)

EDU_POOL = (
    "Bachelor of Engineering, State Technical University",
    "Master of Computer Applications, State Technical University",
    "Bachelor of Science, City Degree College",
    "Bachelor of Commerce, City Degree College",
    "Master of Business Administration, National Management Institute",
    "Diploma in Civil Engineering, District Polytechnic",
    "Bachelor of Engineering, National Institute of Technology",
    "Master of Science, Central Research University",
    "Bachelor of Arts, Government Degree College",
    "Senior Secondary, Government Model School",
)

TOWN_POOL = (
    "Kelsworth",
    "Braydon Falls",
    "Netherfield",
    "Oakhollow",
    "Pinebrook",
    "Marlow Creek",
    "Suttonvale",
    "Eastmoor",
    "Glenridge",
    "Harlowe",
    "Westbrim",
    "Calder Point",
)

CITY_POOL = (
    "New Arlington",
    "Port Meridian",
    "Lakeshore City",
    "Fairmont",
    "Stonebridge",
    "Riverton",
    "Maple Heights",
    "Crestwood",
)

FAKE_WORK_POOL = (
    "Global Dream Ventures",
    "Royal Fortune Trading",
    "Elite Star Promotions",
    "Galaxy Prize Network",
    "Diamond Axis Marketing",
    "Velvet Crown Imports",
)

FAKE_EDU_POOL = (
    "Online Certificate Program",
    "Distance Learning Academy",
    "Open Web Tutorials",
    "Self Paced Video Courses",
)

FAKE_TOWN_POOL = ("Farpoint", "Windmere", "Duskvale")

FAKE_CITY_POOL = (
    "Neon Heights",
    "Crystal Bay",
    "Palm Vista",
    "Golden Strip",
)

_PROBABILITY_FIELDS = (
    "triangle_fraction",
    "cross_fraction",
    "core_fraction",
    "core_pull",
    "work_present",
    "work_share",
    "edu_present",
    "edu_share",
    "ht_present",
    "ht_share",
    "cc_present",
    "cc_share",
    "fake_work_present",
    "fake_work_leak",
    "fake_edu_present",
    "fake_edu_leak",
    "fake_ht_present",
    "fake_cc_leak",
)


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for community generation and the fake-profile attack.

    ``target_edges`` counts edges among real users only; the attack adds
    roughly ``n_fake * expected acceptances`` suspicious edges on top.
    """

    n_real: int = 67
    n_fake: int = 10
    target_edges: int = 587
    n_groups: int = 2
    triangle_fraction: float = 0.26
    closure_bias: float = 3.0
    cross_fraction: float = 0.40
    core_fraction: float = 0.75
    core_pull: float = 0.72
    requests_per_fake: int = 36
    accept_intercept: float = -1.0
    accept_slope: float = 0.50
    target_bias: float = 6.0
    entry_bias: float = 6.0
    work_present: float = 0.97
    work_share: float = 0.78
    edu_present: float = 0.90
    edu_share: float = 0.33
    ht_present: float = 0.60
    ht_share: float = 0.72
    cc_present: float = 0.96
    cc_share: float = 0.76
    fake_work_present: float = 0.68
    fake_work_leak: float = 0.16
    fake_edu_present: float = 0.38
    fake_edu_leak: float = 0.05
    fake_ht_present: float = 0.30
    fake_cc_leak: float = 0.12
    seed: int = 0

    def validate(self) -> None:
        if self.n_real < 2:
            raise InputError(f"n_real must be >= 2, got {self.n_real}")
        if self.n_fake < 0:
            raise InputError(f"n_fake must be >= 0, got {self.n_fake}")
        if self.n_groups < 1:
            raise InputError(f"n_groups must be >= 1, got {self.n_groups}")
        if self.requests_per_fake < 0:
            raise InputError("requests_per_fake must be >= 0")
        if self.target_bias < 0:
            raise InputError("target_bias must be >= 0")
        if self.closure_bias < 0:
            raise InputError("closure_bias must be >= 0")
        if self.entry_bias < 0:
            raise InputError("entry_bias must be >= 0")
        for name in _PROBABILITY_FIELDS:
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise InputError(f"{name} must be in [0,1], got {value}")


def default_config() -> SynthConfig:
    return SynthConfig()


def load_config(path) -> SynthConfig:
    """Read a flat TOML file whose keys are SynthConfig field names."""
    with open(path, "rb") as fh:
        try:
            data = _toml.load(fh)
        except _toml.TOMLDecodeError as exc:
            raise InputError(f"{path}: invalid TOML: {exc}") from exc
    known = {f.name: f.type for f in fields(SynthConfig)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise InputError(f"{path}: unknown config keys: {', '.join(unknown)}")
    coerced = {}
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InputError(f"{path}: {key} must be a number, got {value!r}")
        coerced[key] = value
    cfg = replace(SynthConfig(), **coerced)
    cfg.validate()
    return cfg


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def _real_ids(n: int) -> list[str]:
    width = len(str(n))
    return [f"u{i + 1:0{width}d}" for i in range(n)]


def _fake_ids(n: int) -> list[str]:
    width = max(2, len(str(n)))
    return [f"f{i + 1:0{width}d}" for i in range(n)]


def _group_of(i: int, n: int, groups: int) -> int:
    return i * groups // n


def _build_edges(cfg: SynthConfig, rng: np.random.Generator) -> set[tuple[int, int]]:
    n = cfg.n_real
    max_edges = n * (n - 1) // 2
    if cfg.target_edges > max_edges or cfg.target_edges < n - 1:
        raise InputError(
            f"target_edges={cfg.target_edges} infeasible for {n} nodes "
            f"(connected range is [{n - 1}, {max_edges}])"
        )
    groups = min(cfg.n_groups, n)
    members: list[list[int]] = [[] for _ in range(groups)]
    for i in range(n):
        members[_group_of(i, n, groups)].append(i)
    # each group has a dense core and a sparser periphery
    cores = [m[: max(1, round(cfg.core_fraction * len(m)))] for m in members]

    edges: set[tuple[int, int]] = set()
    adj: list[set[int]] = [set() for _ in range(n)]

    def add(a: int, b: int) -> bool:
        if a == b:
            return False
        key = (a, b) if a < b else (b, a)
        if key in edges:
            return False
        edges.add(key)
        adj[a].add(b)
        adj[b].add(a)
        return True

    # connectivity backbone: a random path per group, bridges between groups
    for g in range(groups):
        order = rng.permutation(members[g])
        for a, b in zip(order, order[1:]):
            add(int(a), int(b))
    for g in range(groups - 1):
        a = int(members[g][rng.integers(len(members[g]))])
        b = int(members[g + 1][rng.integers(len(members[g + 1]))])
        add(a, b)

    attempts = 0
    limit = 200 * max(cfg.target_edges, 1)
    while len(edges) < cfg.target_edges and attempts < limit:
        attempts += 1
        if rng.random() < cfg.triangle_fraction:
            # close a wedge at v; degree-biased choice of v grows dense cores
            weights = np.asarray(
                [len(a) ** cfg.closure_bias if len(a) >= 2 else 0.0 for a in adj],
                dtype=np.float64,
            )
            total = weights.sum()
            if total <= 0:
                continue
            v = int(rng.choice(n, p=weights / total))
            neigh = sorted(adj[v])
            pick = rng.choice(len(neigh), size=2, replace=False)
            add(neigh[int(pick[0])], neigh[int(pick[1])])
        elif rng.random() < cfg.cross_fraction and groups > 1:
            a = int(rng.integers(n))
            b = int(rng.integers(n))
            if _group_of(a, n, groups) != _group_of(b, n, groups):
                add(a, b)
        else:
            g = _group_of(int(rng.integers(n)), n, groups)

            def member(g: int = g) -> int:
                pool = cores[g] if rng.random() < cfg.core_pull else members[g]
                return int(pool[rng.integers(len(pool))])

            add(member(), member())
    if len(edges) < cfg.target_edges:
        # rejection sampling starved; finish from the shuffled complement
        rest = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if (i, j) not in edges
        ]
        order = rng.permutation(len(rest))
        for k in order:
            if len(edges) >= cfg.target_edges:
                break
            add(*rest[int(k)])
    return edges


def _draw_value(
    rng: np.random.Generator, pool, dominant: str, share: float
) -> str:
    if rng.random() < share:
        return dominant
    return pool[int(rng.integers(len(pool)))]


def generate_community(
    cfg: SynthConfig, rng: np.random.Generator
) -> tuple[SocialGraph, dict[str, Profile]]:
    """Connected clustered graph over the real users plus their profiles."""
    cfg.validate()
    n = cfg.n_real
    groups = min(cfg.n_groups, n)
    edges = _build_edges(cfg, rng)
    ids = _real_ids(n)

    # one dominant value per attribute: the community is one locality
    dom_work = WORK_POOL[int(rng.integers(len(WORK_POOL)))]
    dom_edu = EDU_POOL[int(rng.integers(len(EDU_POOL)))]
    dom_town = TOWN_POOL[int(rng.integers(len(TOWN_POOL)))]
    dom_city = CITY_POOL[int(rng.integers(len(CITY_POOL)))]

    profiles: dict[str, Profile] = {}
    for node in ids:
        work = (
            _draw_value(rng, WORK_POOL, dom_work, cfg.work_share)
            if rng.random() < cfg.work_present
            else None
        )
        education = (
            _draw_value(rng, EDU_POOL, dom_edu, cfg.edu_share)
            if rng.random() < cfg.edu_present
            else None
        )
        home_town = (
            _draw_value(rng, TOWN_POOL, dom_town, cfg.ht_share)
            if rng.random() < cfg.ht_present
            else None
        )
        current_city = (
            _draw_value(rng, CITY_POOL, dom_city, cfg.cc_share)
            if rng.random() < cfg.cc_present
            else None
        )
        if work is None and education is None and home_town is None and current_city is None:
            work = dom_work
        profiles[node] = Profile(
            id=node,
            work=work,
            education=education,
            home_town=home_town,
            current_city=current_city,
            is_fake=False,
        )
    graph = SocialGraph(ids, [(ids[a], ids[b]) for a, b in sorted(edges)])
    return graph, profiles


def _run_attack(
    adj: list[set[int]], n: int, cfg: SynthConfig, rng: np.random.Generator
) -> list[int]:
    """One fake's campaign; returns accepted victims in acceptance order."""
    victims: list[int] = []
    victim_set: set[int] = set()
    budget = cfg.requests_per_fake
    while budget > 0:
        if victims:
            frontier = sorted(
                {x for v in victims for x in adj[v]} - victim_set
            )
            candidates = frontier or [i for i in range(n) if i not in victim_set]
            mutual = [len(adj[x] & victim_set) for x in candidates]
            weights = np.asarray(
                [(1.0 + m) ** cfg.target_bias for m in mutual], dtype=np.float64
            )
        else:
            # entry point: popular users make the most productive footholds
            candidates = [i for i in range(n) if i not in victim_set]
            mutual = [0] * len(candidates)
            weights = np.asarray(
                [(1.0 + len(adj[x])) ** cfg.entry_bias for x in candidates],
                dtype=np.float64,
            )
        if not candidates:
            break
        pick = int(rng.choice(len(candidates), p=weights / weights.sum()))
        budget -= 1
        if rng.random() < _sigmoid(cfg.accept_intercept + cfg.accept_slope * mutual[pick]):
            victims.append(candidates[pick])
            victim_set.add(candidates[pick])
    return victims


def _leak_or_pool(
    rng: np.random.Generator,
    leak_prob: float,
    attr: str,
    donors: list[Profile],
    pool,
) -> str:
    if donors and rng.random() < leak_prob:
        donor = donors[int(rng.integers(len(donors)))]
        value = getattr(donor, attr)
        if value is not None:
            return value
    return pool[int(rng.integers(len(pool)))]


def inject_fakes(
    g: SocialGraph,
    profiles: dict[str, Profile],
    cfg: SynthConfig,
    rng: np.random.Generator,
) -> tuple[SocialGraph, dict[str, Profile]]:
    """Add the fake nodes, their attack edges, and their profiles."""
    cfg.validate()
    if cfg.n_fake == 0:
        return g, dict(profiles)
    real_ids = list(g.nodes)
    n = len(real_ids)
    index = {node: i for i, node in enumerate(real_ids)}
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in g.edges:
        adj[index[u]].add(index[v])
        adj[index[v]].add(index[u])

    fake_ids = _fake_ids(cfg.n_fake)
    new_profiles = dict(profiles)
    attack_edges: list[tuple[str, str]] = []
    for fid in fake_ids:
        victims = _run_attack(adj, n, cfg, rng)
        donors = [profiles[real_ids[v]] for v in victims]
        work = (
            _leak_or_pool(rng, cfg.fake_work_leak, "work", donors, FAKE_WORK_POOL)
            if rng.random() < cfg.fake_work_present
            else None
        )
        education = (
            _leak_or_pool(rng, cfg.fake_edu_leak, "education", donors, FAKE_EDU_POOL)
            if rng.random() < cfg.fake_edu_present
            else None
        )
        home_town = (
            FAKE_TOWN_POOL[int(rng.integers(len(FAKE_TOWN_POOL)))]
            if rng.random() < cfg.fake_ht_present
            else None
        )
        current_city = (
            _leak_or_pool(rng, cfg.fake_cc_leak, "current_city", donors, FAKE_CITY_POOL)
            if rng.random() < cfg.cc_present
            else None
        )
        if work is None and education is None and home_town is None and current_city is None:
            work = FAKE_WORK_POOL[int(rng.integers(len(FAKE_WORK_POOL)))]
        new_profiles[fid] = Profile(
            id=fid,
            work=work,
            education=education,
            home_town=home_town,
            current_city=current_city,
            is_fake=True,
        )
        attack_edges.extend((fid, real_ids[v]) for v in victims)

    all_nodes = real_ids + fake_ids
    all_edges = list(g.edges) + attack_edges
    graph = SocialGraph(all_nodes, all_edges, fake=set(fake_ids))
    return graph, new_profiles


def synthesize(cfg: SynthConfig) -> tuple[SocialGraph, dict[str, Profile]]:
    """Full generate-plus-inject pipeline, deterministic in cfg.seed."""
    rng = np.random.default_rng(cfg.seed)
    graph, profiles = generate_community(cfg, rng)
    return inject_fakes(graph, profiles, cfg, rng)


@dataclass(frozen=True)
class CalibrationReport:
    """Per-class feature means next to the reference targets."""

    means: dict[str, tuple[float, ...]]
    targets: dict[str, tuple[float, ...]]
    deviations: dict[str, tuple[float, ...]]

    @property
    def max_deviation(self) -> float:
        return max(max(v) for v in self.deviations.values())

    def passed(self, tolerance: float = 0.10) -> bool:
        return self.max_deviation <= tolerance

    def to_dict(self) -> dict:
        return {
            "feature_names": list(FEATURE_NAMES),
            "means": {k: list(v) for k, v in self.means.items()},
            "targets": {k: list(v) for k, v in self.targets.items()},
            "deviations": {k: list(v) for k, v in self.deviations.items()},
            "max_deviation": self.max_deviation,
        }

    def __str__(self) -> str:
        lines = ["class       " + "".join(f"{name:>10}" for name in FEATURE_NAMES)]
        for cls in ("normal", "suspicious"):
            lines.append(
                f"{cls:<12}" + "".join(f"{x:>10.4f}" for x in self.means[cls])
            )
            lines.append(
                "  target    " + "".join(f"{x:>10.4f}" for x in self.targets[cls])
            )
            lines.append(
                "  deviation " + "".join(f"{x:>10.4f}" for x in self.deviations[cls])
            )
        return "\n".join(lines)


def calibration_report(features: FeatureTable) -> CalibrationReport:
    """Compare per-class feature means against the reference statistics."""
    X = features.matrix
    y = features.labels
    means: dict[str, tuple[float, ...]] = {}
    deviations: dict[str, tuple[float, ...]] = {}
    for label, name in ((0, "normal"), (1, "suspicious")):
        rows = X[y == label]
        if len(rows) == 0:
            raise InputError(f"feature table has no {name} rows")
        mean = tuple(float(v) for v in rows.mean(axis=0))
        means[name] = mean
        deviations[name] = tuple(
            abs(m - t) for m, t in zip(mean, REFERENCE_MEANS[name])
        )
    return CalibrationReport(
        means=means, targets=dict(REFERENCE_MEANS), deviations=deviations
    )
