"""
Bounded-degree decision problems at desk scale.

bdig answers "is the interaction graph of F of degree <= d?" exactly. bdd
answers "is D(F) isomorphic to D(F') for some F' of degree <= d?" by brute
force over every declared network of degree <= d, comparing canonical forms.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Optional

import numpy as np

from .core import AutomataNetwork, Dynamics, GlobalMap, LocalRule, check_space, global_map
from .dynamics import canonical_form, cycle_structure
from .errors import DomainError, ResourceLimitError
from .structure import degree

FOUND = "found"
ABSENT = "absent"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int = 1_000_000
    max_evaluations: int = 1_000_000

    def __post_init__(self):
        if self.max_candidates < 1 or self.max_evaluations < 1:
            raise DomainError("search budgets must be positive")


def bdig(F: Dynamics, d: int) -> bool:
    return degree(F) <= d


def neighborhoods(n: int, d: int) -> list[tuple[int, ...]]:
    """In-neighbourhoods of size <= d: by size, then lexicographically."""
    return [c for k in range(min(d, n) + 1) for c in itertools.combinations(range(n), k)]


def network_count(n: int, q: int, d: int) -> int:
    """Number of declared networks produced by enumerate_networks."""
    per_node = sum(comb(n, k) * q ** (q ** k) for k in range(min(d, n) + 1))
    return per_node ** n


def _rule_options(n: int, q: int, d: int) -> list[LocalRule]:
    options = []
    for inputs in neighborhoods(n, d):
        for table in itertools.product(range(q), repeat=q ** len(inputs)):
            options.append(LocalRule(inputs, table))
    return options


def enumerate_networks(n: int, q: int, d: int, limit: Optional[int] = None) -> Iterator[AutomataNetwork]:
    """Every declared network whose nodes each read at most d inputs, in a fixed order.

    Node 0's rule varies slowest. Different declarations may realize the same
    map (e.g. a constant table over one input and the empty rule).
    """
    count = network_count(n, q, d)
    if limit is not None and count > limit:
        raise ResourceLimitError(f"{count} networks exceed the limit {limit}")
    options = _rule_options(n, q, d)
    for choice in itertools.product(options, repeat=n):
        yield AutomataNetwork(n, q, choice)


def _option_columns(n: int, q: int, d: int) -> tuple[list[LocalRule], np.ndarray]:
    """All rule options with the value of each on every configuration."""
    size = check_space(n, q)
    x = np.arange(size, dtype=np.int64)
    options = _rule_options(n, q, d)
    cols = np.empty((len(options), size), dtype=np.int64)
    for r, rule in enumerate(options):
        pattern = np.zeros(size, dtype=np.int64)
        for t, i in enumerate(rule.inputs):
            pattern += ((x // q ** i) % q) * q ** t
        cols[r] = rule.table[pattern]
    return options, cols


def _invariant(images: np.ndarray) -> tuple:
    """Cheap isomorphism invariant used to skip most canonical-form computations."""
    counts = np.bincount(images, minlength=len(images))
    return tuple(np.bincount(counts).tolist())


@dataclass
class BddResult:
    status: str
    witness: Optional[AutomataNetwork] = None
    candidates: int = 0
    total: int = 0
    distinct_maps: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def exhausted(self) -> bool:
        return self.status != TRUNCATED

    def to_dict(self) -> dict:
        out = {"status": self.status, "exhausted": self.exhausted, "candidates": self.candidates,
               "total_candidates": self.total, "distinct_maps": self.distinct_maps}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        out.update(self.stats)
        return out


def _scan(target_images: np.ndarray, target_cert: bytes, cols: np.ndarray, q: int, n: int,
          first_range: range, max_candidates: int, max_evaluations: int) -> tuple:
    """Scan candidates whose node-0 option lies in first_range.

    An evaluation is a cycle-structure or canonical-form computation on a
    candidate map that passed the in-degree histogram filter.
    Returns (choice or None, candidates examined, distinct maps, evaluations, truncated).
    """
    target_inv = _invariant(target_images)
    target_lengths = sorted(cycle_structure(GlobalMap(n, q, target_images)).cycle_lengths)
    seen: dict[bytes, bool] = {}
    weights = [q ** j for j in range(n)]
    examined = evaluations = 0
    m = len(cols)
    for first in first_range:
        for rest in itertools.product(range(m), repeat=n - 1):
            if examined >= max_candidates:
                return None, examined, len(seen), evaluations, True
            examined += 1
            choice = (first,) + rest
            images = cols[first] * weights[0]
            for j, c in enumerate(rest, start=1):
                images = images + cols[c] * weights[j]
            key = images.tobytes()
            hit = seen.get(key)
            if hit is None:
                hit = False
                if _invariant(images) == target_inv:
                    if evaluations >= max_evaluations:
                        return None, examined - 1, len(seen), evaluations, True
                    evaluations += 1
                    M = GlobalMap(n, q, images)
                    if sorted(cycle_structure(M).cycle_lengths) == target_lengths:
                        hit = canonical_form(M).certificate == target_cert
                seen[key] = hit
            if hit:
                return choice, examined, len(seen), evaluations, False
    return None, examined, len(seen), evaluations, False


def _scan_job(args):
    return _scan(*args)


def bdd(M: Dynamics, d: int, budget: Optional[SearchBudget] = None, jobs: int = 1) -> BddResult:
    """Search a network of degree <= d whose dynamics graph is isomorphic to M's.

    Returns FOUND with the first witness in enumeration order, ABSENT after an
    exhaustive search, or TRUNCATED when the candidate budget ran out first.
    """
    M = global_map(M)
    budget = budget or SearchBudget()
    n, q = M.n, M.q
    total = network_count(n, q, d)
    options, cols = _option_columns(n, q, d)
    cert = canonical_form(M).certificate

    limit = min(budget.max_candidates, budget.max_evaluations)
    if jobs <= 1 or n == 1 or total > limit:
        choice, examined, distinct, evaluations, truncated = _scan(
            M.images, cert, cols, q, n, range(len(options)),
            budget.max_candidates, budget.max_evaluations)
    else:
        # neither budget can run out: partition by node 0's option and keep the
        # hit from the earliest partition, which is the first in enumeration order
        chunks = [c for c in np.array_split(np.arange(len(options)), jobs) if len(c)]
        tasks = [(M.images, cert, cols, q, n, range(int(c[0]), int(c[-1]) + 1), total, total)
                 for c in chunks]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_job, tasks))
        first_hit = next((r for r in results if r[0] is not None), None)
        choice = first_hit[0] if first_hit else None
        examined = sum(r[1] for r in results)
        distinct = sum(r[2] for r in results)
        evaluations = sum(r[3] for r in results)
        truncated = False
    stats = {"evaluations": evaluations}
    if choice is not None:
        witness = AutomataNetwork(n, q, tuple(options[c] for c in choice))
        return BddResult(FOUND, witness, examined, total, distinct, stats)
    if truncated:
        return BddResult(TRUNCATED, None, examined, total, distinct, stats)
    return BddResult(ABSENT, None, examined, total, distinct, stats)


def partition_count(k: int) -> int:
    """Number of integer partitions of k (= bijective dynamics up to isomorphism on k points)."""
    p = [1] + [0] * k
    for part in range(1, k + 1):
        for s in range(part, k + 1):
            p[s] += p[s - part]
    return p[k]


def realizable_bijection_classes(n: int, q: int, d: int) -> dict:
    """Count isomorphism classes of bijections realizable with degree <= d versus all of them."""
    options, cols = _option_columns(n, q, d)
    size = q ** n
    certs = set()
    weights = [q ** j for j in range(n)]
    for choice in itertools.product(range(len(options)), repeat=n):
        images = sum(cols[c] * weights[j] for j, c in enumerate(choice))
        if len(np.unique(images)) == size:
            certs.add(canonical_form(GlobalMap(n, q, images)).certificate)
    return {"declared_networks": network_count(n, q, d), "realizable_classes": len(certs),
            "bijective_classes": partition_count(size)}
