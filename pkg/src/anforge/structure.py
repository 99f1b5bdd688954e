"""Interaction graphs and structural predicates on networks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Optional

import numpy as np

from .core import (AutomataNetwork, Dynamics, LocalRule, as_network, check_space,
                   digits_of, encode, global_map)
from .errors import DomainError, ResourceLimitError, UnsupportedDomainError
from .galois import is_prime


@dataclass(frozen=True)
class InteractionGraph:
    """Minimal communication graph; an arc (i, j) means f_j depends essentially on x_i."""

    n: int
    arcs: frozenset
    # arc -> (x, x') configuration indices differing only at i with f_j(x) != f_j(x')
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)
    network: Optional[AutomataNetwork] = field(default=None, compare=False, repr=False)

    def in_neighbors(self, j: int) -> list[int]:
        return sorted(i for i, k in self.arcs if k == j)

    def out_neighbors(self, i: int) -> list[int]:
        return sorted(k for a, k in self.arcs if a == i)

    @property
    def in_degree(self) -> list[int]:
        deg = [0] * self.n
        for _, j in self.arcs:
            deg[j] += 1
        return deg

    @property
    def out_degree(self) -> list[int]:
        deg = [0] * self.n
        for i, _ in self.arcs:
            deg[i] += 1
        return deg

    @property
    def max_in_degree(self) -> int:
        return max(self.in_degree)

    def is_almost_degree_one(self) -> bool:
        """All but at most one node have in-degree <= 1."""
        return sum(d > 1 for d in self.in_degree) <= 1

    def to_dot(self) -> str:
        lines = ["digraph {"]
        lines += [f"  {j};" for j in range(self.n)]
        lines += [f"  {i} -> {j};" for i, j in sorted(self.arcs)]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in sorted(self.arcs)]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "InteractionGraph":
        arcs = frozenset((int(i), int(j)) for i, j in arcs)
        for i, j in arcs:
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"arc {(i, j)} outside 0..{n - 1}")
        return cls(n, arcs)


def _essential_inputs(rule: LocalRule, q: int) -> list[tuple[int, int, int]]:
    """(position, pattern, changed pattern) for every input the table really depends on."""
    k = len(rule.inputs)
    if k == 0:
        return []
    arr = rule.table.reshape((q,) * k, order="F")  # axis t <-> input position t
    found = []
    for t in range(k):
        moved = np.moveaxis(arr, t, 0)
        diff = moved != moved[0:1]
        if diff.any():
            pos = np.unravel_index(int(np.argmax(diff)), diff.shape)
            a, rest = int(pos[0]), pos[1:]
            others = [int(v) for v in rest]
            # rebuild full pattern: input t gets value a (resp. 0), others keep theirs
            full = others[:t] + [a] + others[t:]
            base = others[:t] + [0] + others[t:]
            found.append((t, encode(base, q), encode(full, q)))
    return found


def interaction_graph(F: Dynamics) -> InteractionGraph:
    """Exact interaction graph together with the minimal-input rewrite of F.

    Every pattern of a rule's inputs occurs in some configuration, so scanning
    each table for single-input changes is the same as scanning all of Q^n.
    """
    F = as_network(F)
    q = F.q
    arcs, witnesses, rules = set(), {}, []
    for j, rule in enumerate(F.rules):
        essential = _essential_inputs(rule, q)
        keep = []
        for t, base, changed in essential:
            i = rule.inputs[t]
            keep.append(i)
            arcs.add((i, j))
            witnesses[(i, j)] = (_pattern_to_config(rule, base, q),
                                 _pattern_to_config(rule, changed, q))
        rules.append(_restrict(rule, keep, q))
    minimal = AutomataNetwork(F.n, q, tuple(rules))
    return InteractionGraph(F.n, frozenset(arcs), witnesses, minimal)


def _pattern_to_config(rule: LocalRule, pattern: int, q: int) -> int:
    x = 0
    for t, i in enumerate(rule.inputs):
        x += ((pattern // q ** t) % q) * q ** i
    return x


def _restrict(rule: LocalRule, keep: list[int], q: int) -> LocalRule:
    keep = sorted(keep)
    if tuple(keep) == rule.inputs:
        return rule
    k = len(keep)
    pos = {i: t for t, i in enumerate(rule.inputs)}
    patterns = np.arange(q ** k, dtype=np.int64)
    old = np.zeros(q ** k, dtype=np.int64)
    for s, i in enumerate(keep):
        old += ((patterns // q ** s) % q) * q ** pos[i]
    return LocalRule(keep, rule.table[old])


def minimize(F: Dynamics) -> AutomataNetwork:
    return interaction_graph(F).network


def degree(F: Dynamics) -> int:
    return interaction_graph(F).max_in_degree


def _is_acyclic(n: int, arcs, removed: Optional[int] = None) -> bool:
    ts = TopologicalSorter()
    for v in range(n):
        if v != removed:
            ts.add(v)
    for i, j in arcs:
        if removed not in (i, j):
            ts.add(j, i)
    try:
        ts.prepare()
    except CycleError:
        return False
    return True


def is_acyclic(G: InteractionGraph) -> bool:
    return _is_acyclic(G.n, G.arcs)


def is_centralized(G: InteractionGraph) -> Optional[int]:
    """Smallest node whose deletion leaves G acyclic, or None."""
    for v in range(G.n):
        if _is_acyclic(G.n, G.arcs, removed=v):
            return v
    return None


def hamiltonian_cycle(G: InteractionGraph, budget: int = 1_000_000) -> Optional[list[int]]:
    """Lexicographically smallest directed Hamiltonian cycle, as a node list starting at 0.

    Consecutive entries c[k] -> c[k+1] are arcs (c[k+1] reads c[k]), and the
    last node points back to c[0]. Plain backtracking; raises
    ResourceLimitError after `budget` extension steps.
    """
    n = G.n
    succ = [G.out_neighbors(i) for i in range(n)]
    if n == 1:
        return [0] if (0, 0) in G.arcs else None
    path, on_path = [0], [False] * n
    on_path[0] = True
    stack = [iter(succ[0])]
    steps = 0
    while stack:
        advanced = False
        for nxt in stack[-1]:
            steps += 1
            if steps > budget:
                raise ResourceLimitError(f"Hamiltonian cycle search exceeded {budget} steps")
            if len(path) == n:
                if nxt == 0:
                    return path
                continue
            if not on_path[nxt]:
                path.append(nxt)
                on_path[nxt] = True
                stack.append(iter(succ[nxt]))
                advanced = True
                break
        if not advanced:
            stack.pop()
            on_path[path.pop()] = False
    return None


def cycle_predecessors(cycle: list[int]) -> dict[int, int]:
    """Map each node of a Hamiltonian cycle to its in-neighbour on the cycle."""
    return {cycle[k]: cycle[k - 1] for k in range(len(cycle))}


# --------------------------------------------------------------------------
# algebraic predicates


@dataclass(frozen=True, eq=False)
class AffineForm:
    """F(x) = A x + v over GF(q); column j of A is F(e_j) - F(0)."""

    matrix: np.ndarray
    offset: np.ndarray
    q: int

    def __eq__(self, other):
        return (isinstance(other, AffineForm) and self.q == other.q
                and np.array_equal(self.matrix, other.matrix)
                and np.array_equal(self.offset, other.offset))

    def __hash__(self):
        return hash((self.q, self.matrix.tobytes(), self.offset.tobytes()))


def affine_images(A: np.ndarray, v: np.ndarray, q: int) -> np.ndarray:
    """Global map images of x -> A x + v over Z_q."""
    n = len(v)
    idx = np.arange(q ** n, dtype=np.int64)
    digits = np.stack([(idx // q ** i) % q for i in range(n)], axis=1)  # (q^n, n)
    out = (digits @ np.asarray(A, dtype=np.int64).T + np.asarray(v, dtype=np.int64)) % q
    weights = q ** np.arange(n, dtype=np.int64)
    return out @ weights


def is_affine(F: Dynamics) -> Optional[AffineForm]:
    M = global_map(F)
    n, q = M.n, M.q
    if not is_prime(q):
        raise UnsupportedDomainError(f"affine detection needs a prime alphabet, got q={q}")
    check_space(n, q)
    img = M.images
    v = np.array([digits_of(img[0], q, i) for i in range(n)], dtype=np.int64)
    A = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        col = np.array([digits_of(img[q ** j], q, i) for i in range(n)], dtype=np.int64)
        A[:, j] = (col - v) % q
    if np.array_equal(affine_images(A, v, q), img):
        return AffineForm(A, v, q)
    return None


def is_balanced(rule: LocalRule, q: int = 2) -> bool:
    """|f^{-1}(0)| = |f^{-1}(1)| over all configurations (Boolean rules only).

    Every input pattern is shared by the same number of configurations, so
    counting over the table is enough.
    """
    if q != 2:
        raise UnsupportedDomainError("balance is only defined here for Boolean rules")
    ones = int(rule.table.sum())
    return 2 * ones == len(rule.table)
