"""
Analysis of the dynamics graph x -> F(x): preimages, limit cycles, Gray-code
metrics and isomorphism-invariant canonical forms.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .core import Dynamics, GlobalMap, check_space, config_str, digits_of, global_map
from .errors import DomainError, UnsupportedDomainError


# --------------------------------------------------------------------------
# preimages


@dataclass(frozen=True, eq=False)
class PreimageProfile:
    n: int
    q: int
    counts: np.ndarray  # counts[y] = |F^{-1}(y)|
    images: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.counts))

    @property
    def orphans(self) -> np.ndarray:
        return np.flatnonzero(self.counts == 0)

    @property
    def max_preimages(self) -> int:
        return int(self.counts.max())

    def Y(self, k: int) -> np.ndarray:
        """Configurations with exactly k preimages."""
        return np.flatnonzero(self.counts == k)

    def histogram(self) -> dict[int, int]:
        """k -> |Y_k| for every k that occurs."""
        ks, sizes = np.unique(self.counts, return_counts=True)
        return {int(k): int(s) for k, s in zip(ks, sizes)}

    def collision_count(self) -> int:
        """Number of unordered pairs x != x' with F(x) = F(x')."""
        c = self.counts.astype(object)
        return int(sum(int(k) * (int(k) - 1) // 2 for k in c if k > 1))

    def collisions(self) -> Iterator[tuple[int, int]]:
        """Unordered colliding pairs (x, x') with x < x', grouped by image."""
        for y in np.flatnonzero(self.counts > 1):
            pre = np.flatnonzero(self.images == y)
            for a, b in combinations(pre.tolist(), 2):
                yield (a, b)

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "orphans": int(len(self.orphans)),
            "max_preimages": self.max_preimages,
            "histogram": {str(k): v for k, v in self.histogram().items()},
            "collision_pairs": self.collision_count(),
        }


def preimage_profile(F: Dynamics) -> PreimageProfile:
    M = global_map(F)
    counts = np.bincount(M.images, minlength=M.size)
    counts.flags.writeable = False
    return PreimageProfile(M.n, M.q, counts, M.images)


def cylinder_preimage_count(F: Dynamics, nodes: Sequence[int], pattern: Sequence[int]) -> int:
    """|F^{-1}([u])| where u assigns pattern[t] to nodes[t]."""
    M = global_map(F)
    if len(nodes) != len(pattern):
        raise DomainError("nodes and pattern must have the same length")
    if len(set(nodes)) != len(nodes) or any(not 0 <= i < M.n for i in nodes):
        raise DomainError(f"invalid node set {list(nodes)}")
    mask = np.ones(M.size, dtype=bool)
    for i, u in zip(nodes, pattern):
        if not 0 <= u < M.q:
            raise DomainError(f"symbol {u} outside 0..{M.q - 1}")
        mask &= digits_of(M.images, M.q, i) == u
    return int(np.count_nonzero(mask))


def cylinder_counts(F: Dynamics, nodes: Sequence[int]) -> np.ndarray:
    """|F^{-1}([u])| for every pattern u on `nodes` (pattern index little-endian)."""
    M = global_map(F)
    code = np.zeros(M.size, dtype=np.int64)
    for t, i in enumerate(nodes):
        code += digits_of(M.images, M.q, i) * M.q ** t
    return np.bincount(code, minlength=M.q ** len(nodes))


# --------------------------------------------------------------------------
# cycles


@dataclass(frozen=True, eq=False)
class CycleStructure:
    """Limit cycles, listed by their smallest configuration."""

    representatives: list[int]
    cycle_lengths: list[int]
    transient_sizes: list[int]
    fixed_points: list[int]
    cyclic: np.ndarray  # boolean mask of configurations lying on a cycle
    attractor: np.ndarray  # representative of the cycle each configuration falls into

    @property
    def cycle_count(self) -> int:
        return len(self.cycle_lengths)

    @property
    def parity(self) -> int:
        return self.cycle_count % 2

    @property
    def length_multiset(self) -> Counter:
        return Counter(self.cycle_lengths)

    @property
    def max_cycle_length(self) -> int:
        return max(self.cycle_lengths)

    def to_dict(self) -> dict:
        return {
            "cycle_lengths": sorted(self.cycle_lengths),
            "cycle_count": self.cycle_count,
            "parity": self.parity,
            "fixed_points": len(self.fixed_points),
            "transient_sizes": self.transient_sizes,
        }


def cycle_structure(F: Dynamics) -> CycleStructure:
    """Limit cycles by pointer doubling (no recursion, O(N log N) array work).

    After 2^k >= N steps every orbit sits on its cycle, so the image of the
    doubled map is the set of cyclic configurations. Cycle labels are the
    minimum over each cycle, found by doubling along the cycle.
    """
    M = global_map(F)
    N = M.size
    f = M.images
    g = f.copy()
    steps = 1
    while steps < N:
        g = g[g]
        steps *= 2
    cyclic = np.zeros(N, dtype=bool)
    cyclic[g] = True

    label = np.arange(N, dtype=np.int64)
    label[~cyclic] = N
    jump = f.copy()
    span = 1
    while span < N:
        label = np.minimum(label, label[jump])
        jump = jump[jump]
        span *= 2
    label[~cyclic] = N
    attractor = label[g]

    reps, lengths = np.unique(label[cyclic], return_counts=True)
    basin = np.bincount(attractor, minlength=N + 1)
    transients = [int(basin[r] - c) for r, c in zip(reps, lengths)]
    fixed = np.flatnonzero(f == np.arange(N)).tolist()
    attractor.flags.writeable = False
    cyclic.flags.writeable = False
    return CycleStructure(reps.tolist(), lengths.tolist(), transients, fixed, cyclic, attractor)


def cycle_of(F: Dynamics, start: int) -> list[int]:
    """Orbit of a cyclic configuration, in order."""
    M = global_map(F)
    out, x = [start], M(start)
    while x != start:
        out.append(x)
        x = M(x)
        if len(out) > M.size:
            raise DomainError(f"{start} is not on a cycle")
    return out


def is_hamiltonian_map(F: Dynamics) -> bool:
    cs = cycle_structure(F)
    return cs.cycle_lengths == [global_map(F).size]


def is_near_hamiltonian_map(F: Dynamics) -> bool:
    M = global_map(F)
    cs = cycle_structure(M)
    # with only two configurations "fixed point + 1-cycle" is just the identity
    return M.size > 2 and sorted(cs.cycle_lengths) == [1, M.size - 1]


# --------------------------------------------------------------------------
# Hamming / Gray metrics


def hamming_delta(F: Dynamics) -> int:
    """Sum over x of the number of nodes where x and F(x) differ (any q)."""
    M = global_map(F)
    x = np.arange(M.size, dtype=np.int64)
    total = 0
    for i in range(M.n):
        total += int(np.count_nonzero(digits_of(x, M.q, i) != digits_of(M.images, M.q, i)))
    return total


@dataclass(frozen=True)
class GrayMetrics:
    is_gray: bool
    delta: int
    trivial_components: frozenset

    def to_dict(self) -> dict:
        return {"is_gray": self.is_gray, "delta": self.delta,
                "trivial_components": sorted(self.trivial_components)}


def trivial_components(F: Dynamics) -> frozenset:
    """Nodes whose local function is constant or equal to its own input."""
    M = global_map(F)
    x = np.arange(M.size, dtype=np.int64)
    out = set()
    for i in range(M.n):
        col = digits_of(M.images, M.q, i)
        if (col == col[0]).all() or np.array_equal(col, digits_of(x, M.q, i)):
            out.add(i)
    return frozenset(out)


def gray_metrics(F: Dynamics) -> GrayMetrics:
    M = global_map(F)
    if M.q != 2:
        raise UnsupportedDomainError("Gray metrics are defined for q = 2 only")
    x = np.arange(M.size, dtype=np.int64)
    dist = np.zeros(M.size, dtype=np.int64)
    flips = x ^ M.images
    for i in range(M.n):
        dist += (flips >> i) & 1
    delta = int(dist.sum())
    is_gray = bool((dist == 1).all()) and is_hamiltonian_map(M)
    return GrayMetrics(is_gray, delta, trivial_components(M))


# --------------------------------------------------------------------------
# canonical forms


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) + list(seq)
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:  # i == -1
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


@dataclass(frozen=True)
class CanonicalForm:
    certificate: bytes


def canonical_form(F: Dynamics) -> CanonicalForm:
    """Certificate of the dynamics graph up to isomorphism.

    Trees hanging off each cycle get the classic parenthesis encoding
    ``"(" + sorted child codes + ")"``; a component is the least rotation of
    its cycle's sequence of tree codes; the whole graph is the sorted list of
    component codes.
    """
    M = global_map(F)
    check_space(M.n, M.q)
    N = M.size
    cs = cycle_structure(M)
    f = M.images.tolist()
    cyclic = cs.cyclic.tolist()

    children: list[list[int]] = [[] for _ in range(N)]
    for x in range(N):
        if not cyclic[x]:
            children[f[x]].append(x)

    # depth-first post order over the forests, iteratively
    code: list[str | None] = [None] * N
    for root in range(N):
        if not cyclic[root]:
            continue
        stack = [(root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                code[v] = "(" + "".join(sorted(code[c] for c in children[v])) + ")"
            else:
                stack.append((v, True))
                stack.extend((c, False) for c in children[v])

    components = []
    for rep in cs.representatives:
        seq = [code[x] for x in cycle_of(M, rep)]
        k = least_rotation(seq)
        components.append("[" + "".join(seq[k:] + seq[:k]) + "]")
    components.sort()
    return CanonicalForm("".join(components).encode())


def isomorphic(M1: Dynamics, M2: Dynamics) -> bool:
    a, b = global_map(M1), global_map(M2)
    if a.size != b.size:
        return False
    return canonical_form(a) == canonical_form(b)


def conjugate(M: GlobalMap, perm: Sequence[int]) -> GlobalMap:
    """perm∘F∘perm^{-1}: the same dynamics with configurations relabelled."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return GlobalMap(M.n, M.q, perm[M.images[inv]])


# --------------------------------------------------------------------------
# export


def dynamics_dot(F: Dynamics) -> str:
    M = global_map(F)
    lines = ["digraph {"]
    for x in range(M.size):
        a, b = config_str(x, M.n, M.q), config_str(M(x), M.n, M.q)
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def profile_json(F: Dynamics) -> str:
    return json.dumps(preimage_profile(F).to_dict())


def cycles_json(F: Dynamics) -> str:
    return json.dumps(cycle_structure(F).to_dict())
