"""Explicit networks: shift registers, field multiplication, rank-deficient maps, swaps."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .core import (AutomataNetwork, Dynamics, GlobalMap, LocalRule, as_network, check_space,
                   decode, digits_of, encode, global_map, identity)
from .errors import DomainError, ResourceLimitError, UnsupportedDomainError
from .galois import field_of_order, prime_power, primitive_coefficients
from .structure import (InteractionGraph, _essential_inputs, _is_acyclic, cycle_predecessors,
                        interaction_graph, is_centralized)

__all__ = [
    "identity", "constant_network", "circular_shift", "shift_along", "reflected_gray_successor",
    "DeBruijnCycle", "de_bruijn_cycle", "fsr_from_feedback", "fsr_with_max_cycle",
    "random_bijective_fsr", "near_hamiltonian", "rank_deficient_base", "split_alphabet",
    "control_extension", "rank_q_n_minus_2", "SwapSequence", "apply_swaps", "WeightedCycle",
    "weight", "swap_decomposition", "tight_fixed_point_example", "tight_preimage_example",
    "tight_rank_example_boolean",
]


def _copy_rule(source: int, q: int) -> LocalRule:
    return LocalRule((source,), range(q))


def constant_network(n: int, q: int, value: int = 0) -> AutomataNetwork:
    return AutomataNetwork(n, q, tuple(LocalRule((), [value]) for _ in range(n)))


def circular_shift(n: int, q: int) -> AutomataNetwork:
    """sigma(x) = (x_{n-1}, x_0, ..., x_{n-2}): node i copies node i-1."""
    return shift_along(list(range(n)), n, q)


def shift_along(cycle: Sequence[int], n: int, q: int) -> AutomataNetwork:
    """Each node copies its in-neighbour on the Hamiltonian cycle c[0] -> c[1] -> ... -> c[0]."""
    if sorted(cycle) != list(range(n)):
        raise DomainError(f"{list(cycle)} is not a cycle through all {n} nodes")
    pred = cycle_predecessors(list(cycle))
    return AutomataNetwork(n, q, tuple(_copy_rule(pred[i], q) for i in range(n)))


def reflected_gray_successor(n: int) -> GlobalMap:
    """Boolean map sending the k-th reflected Gray codeword to the (k+1)-th, cyclically."""
    size = check_space(n, 2)
    k = np.arange(size, dtype=np.int64)
    codes = k ^ (k >> 1)
    images = np.empty(size, dtype=np.int64)
    images[codes] = np.roll(codes, -1)
    return GlobalMap(n, 2, images)


# --------------------------------------------------------------------------
# de Bruijn cycles and feedback shift registers


@dataclass(frozen=True)
class DeBruijnCycle:
    q: int
    n: int
    k: int
    vertices: tuple[tuple[int, ...], ...]  # words w with w[1:] == next[:-1]

    @property
    def indices(self) -> list[int]:
        return [encode(w, self.q) for w in self.vertices]


def de_bruijn_cycle(q: int, n: int, k: int, budget: int = 5_000_000) -> DeBruijnCycle:
    """A cycle of exactly k distinct words in the order-n de Bruijn graph.

    Depth-first backtracking; each start word is tried in increasing order and
    only words larger than the start are visited, so the start is the cycle's
    minimum. Successor symbols are tried in increasing order.
    """
    size = check_space(n, q)
    if not 1 <= k <= size:
        raise DomainError(f"cycle length must lie in 1..{size}, got {k}")
    top = q ** (n - 1)
    steps = 0
    for start in range(size):
        if size - start < k:
            break
        path, on_path = [start], {start}
        choice = [0]
        while path:
            v = path[-1]
            b = choice[-1]
            if b == q:
                choice.pop()
                on_path.discard(path.pop())
                continue
            choice[-1] = b + 1
            steps += 1
            if steps > budget:
                raise ResourceLimitError(f"de Bruijn search exceeded {budget} steps")
            w = v // q + b * top
            if len(path) == k:
                if w == start:
                    return DeBruijnCycle(q, n, k, tuple(decode(x, n, q) for x in path))
                continue
            if w > start and w not in on_path:
                path.append(w)
                on_path.add(w)
                choice.append(0)
    raise DomainError(f"no cycle of length {k} found")  # pragma: no cover


def fsr_from_feedback(g: LocalRule, n: int, q: int) -> AutomataNetwork:
    """F_g(x) = (x_1, ..., x_{n-1}, g(x)): node i < n-1 copies node i+1."""
    rules = [_copy_rule(i + 1, q) for i in range(n - 1)] + [g]
    return AutomataNetwork(n, q, tuple(rules))


def fsr_with_max_cycle(q: int, n: int, k: int, cycle: Optional[DeBruijnCycle] = None) -> AutomataNetwork:
    """Shift register whose longest limit cycle has length exactly k.

    The feedback follows a k-cycle C of the de Bruijn graph on C and writes 0
    elsewhere, so off C the register only drains towards 0^n.
    """
    if cycle is None:
        cycle = de_bruijn_cycle(q, n, k)
    elif (cycle.q, cycle.n, cycle.k) != (q, n, k):
        raise DomainError("cycle parameters do not match")
    table = np.zeros(q ** n, dtype=np.int64)
    words = cycle.vertices
    for a, b in zip(words, words[1:] + words[:1]):
        table[encode(a, q)] = b[-1]
    return fsr_from_feedback(LocalRule(range(n), table), n, q)


def random_bijective_fsr(n: int, rng: np.random.Generator, max_inputs: Optional[int] = None) -> AutomataNetwork:
    """Boolean FSR with feedback x_0 xor h(x_S) for a random S and random h.

    The feedback reads 0 and S, with |S| + 1 <= max_inputs (default n).
    """
    if n < 2:
        raise DomainError("need n >= 2")
    max_inputs = n if max_inputs is None else max_inputs
    if not 1 <= max_inputs <= n:
        raise DomainError(f"max_inputs must lie in 1..{n}")
    size = int(rng.integers(0, max_inputs))
    others = sorted(int(s) for s in rng.choice(np.arange(1, n), size=size, replace=False))
    h = rng.integers(0, 2, size=2 ** size)
    inputs = [0] + others
    table = [(p & 1) ^ int(h[p >> 1]) for p in range(2 ** len(inputs))]
    return fsr_from_feedback(LocalRule(inputs, table), n, 2)


# --------------------------------------------------------------------------
# multiplication by a primitive element


@lru_cache(maxsize=None)
def _extension_coefficients(q: int, n: int) -> tuple[int, ...]:
    return primitive_coefficients(field_of_order(q), n)


def near_hamiltonian(q: int, n: int) -> AutomataNetwork:
    """Multiplication by a primitive element of GF(q^n), written over GF(q)^n.

    Node i computes x_{i-1} - c_i x_{n-1} where xi^n + sum c_i xi^i is the
    smallest primitive polynomial of degree n over GF(q); the dynamics are a
    fixed point 0^n plus one (q^n - 1)-cycle and each node reads <= 2 nodes.
    """
    if prime_power(q) is None:
        raise DomainError(f"alphabet size {q} is not a prime power")
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    check_space(n, q)
    field = field_of_order(q)
    coeffs = _extension_coefficients(q, n)
    top = n - 1
    rules = [LocalRule((top,), [field.neg[field.mul[coeffs[0], t]] for t in range(q)])]
    for i in range(1, n):
        c = coeffs[i]
        if c == 0:
            rules.append(_copy_rule(i - 1, q))
            continue
        # inputs (x_{i-1}, x_{n-1}); pattern index x_{i-1} + q * x_{n-1}
        table = [int(field.add[a, field.neg[field.mul[c, b]]]) for b in range(q) for a in range(q)]
        rules.append(LocalRule((i - 1, top), table))
    return AutomataNetwork(n, q, tuple(rules))


# --------------------------------------------------------------------------
# rank q^n - 2


def rank_deficient_base(q: int) -> AutomataNetwork:
    """Three nodes over Z_q (q odd) with rank q^3 - 2 and degree 2.

    Nodes 0, 1, 2 play x1, x2, x3. The "(x1 + x3) mod 2" branch is used as is,
    so node 0 takes a value in {0, 1} whenever x1 is 0 or 1.
    """
    if q < 3 or q % 2 == 0:
        raise DomainError(f"q must be odd and >= 3, got {q}")

    def f1(p):  # inputs (x1, x3)
        x1, x3 = p
        return x1 if x1 >= 2 else (x1 + x3) % 2

    def f2(p):  # inputs (x1, x2)
        x1, x2 = p
        if x1 >= 2:
            return x2
        if x2 != 0:
            return (x1 + x2) % q
        return 1 if x1 == 0 else 0

    def f3(p):  # inputs (x2, x3)
        x2, x3 = p
        return x3 if x2 != 0 else (x3 + 1) % q

    return AutomataNetwork(3, q, (
        LocalRule.from_function((0, 2), q, f1),
        LocalRule.from_function((0, 1), q, f2),
        LocalRule.from_function((1, 2), q, f3),
    ))


def split_alphabet(F: AutomataNetwork, q: int, ell: int) -> AutomataNetwork:
    """Rewrite a network over q^ell symbols as one over q symbols.

    Node i becomes nodes i*ell .. i*ell + ell - 1 holding its base-q digits
    (least significant first). Configuration indices are unchanged, so the new
    global map is literally the old one.
    """
    if ell < 1 or F.q != q ** ell:
        raise DomainError(f"network alphabet {F.q} is not {q}^{ell}")
    rules = []
    for rule in F.rules:
        inputs = [i * ell + s for i in rule.inputs for s in range(ell)]
        for t in range(ell):
            rules.append(LocalRule(inputs, (rule.table // q ** t) % q))
    return AutomataNetwork(F.n * ell, q, tuple(rules))


def control_extension(F: AutomataNetwork, r: int) -> AutomataNetwork:
    """Add r frozen control nodes; the old nodes follow F only when every control node is 0."""
    if r not in (1, 2):
        raise DomainError(f"r must be 1 or 2, got {r}")
    m, q = F.n, F.q
    controls = list(range(m, m + r))
    rules = []
    for j, rule in enumerate(F.rules):
        inputs = sorted(set(rule.inputs) | {j} | set(controls))
        pos = {i: t for t, i in enumerate(inputs)}

        def fn(p, rule=rule, j=j, pos=pos):
            if any(p[pos[c]] for c in controls):
                return p[pos[j]]
            return rule.lookup({i: p[pos[i]] for i in rule.inputs}, q)

        rules.append(LocalRule.from_function(inputs, q, fn))
    rules += [_copy_rule(c, q) for c in controls]
    return AutomataNetwork(m + r, q, tuple(rules))


def rank_q_n_minus_2(q: int, n: int) -> AutomataNetwork:
    """Network over Z_q on n nodes with rank q^n - 2 and degree <= ceil(2n/3)."""
    if q < 3 or q % 2 == 0:
        raise DomainError(f"q must be odd and >= 3, got {q}")
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    check_space(n, q)
    ell, r = divmod(n, 3)
    F = split_alphabet(rank_deficient_base(q ** ell), q, ell)
    if r:
        F = control_extension(F, r)
    return F


# --------------------------------------------------------------------------
# swaps and weights (Boolean)


@dataclass(frozen=True)
class SwapSequence:
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(x), int(y)) for x, y in self.pairs))
        for x, y in self.pairs:
            if x == y:
                raise DomainError(f"swap pair ({x}, {y}) is not made of distinct configurations")

    def __len__(self):
        return len(self.pairs)


def apply_swaps(F: Dynamics, swaps) -> GlobalMap:
    """F ∘ (x1 <-> y1) ∘ ... ∘ (xk <-> yk)."""
    M = global_map(F)
    pairs = swaps.pairs if isinstance(swaps, SwapSequence) else SwapSequence(tuple(swaps)).pairs
    images = M.images.copy()
    for x, y in pairs:
        if not (0 <= x < M.size and 0 <= y < M.size):
            raise DomainError(f"swap pair ({x}, {y}) out of range")
        images[x], images[y] = images[y], images[x]
    return GlobalMap(M.n, M.q, images)


@dataclass(frozen=True)
class WeightedCycle:
    cycle: tuple[int, ...]
    per_node_weight: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.per_node_weight)


def _check_cycle_in_graph(cycle: Sequence[int], arcs, n: int) -> None:
    if sorted(cycle) != list(range(n)):
        raise DomainError(f"{list(cycle)} does not visit every node exactly once")
    for k in range(n):
        arc = (cycle[k - 1], cycle[k])
        if arc not in arcs:
            raise DomainError(f"cycle arc {arc} is not in the interaction graph")


def _weights(images: np.ndarray, n: int, pred: dict) -> list[int]:
    x = np.arange(2 ** n, dtype=np.int64)
    return [int(np.count_nonzero((((x >> pred[i]) & 1) == 0) & (((images >> i) & 1) == 1)))
            for i in range(n)]


def weight(F: Dynamics, cycle: Sequence[int]) -> WeightedCycle:
    """w_i counts configurations with x_j = 0 and f_i(x) = 1, j the cycle in-neighbour of i."""
    M = global_map(F)
    if M.q != 2:
        raise UnsupportedDomainError("weights are defined for q = 2 only")
    _check_cycle_in_graph(cycle, interaction_graph(M).arcs, M.n)
    w = _weights(M.images, M.n, cycle_predecessors(list(cycle)))
    return WeightedCycle(tuple(cycle), tuple(w))


def _column_inputs(images: np.ndarray, n: int, j: int) -> set[int]:
    col = (images >> j) & 1
    return {t for t, _, _ in _essential_inputs(LocalRule(range(n), col), 2)}


def swap_decomposition(F: Dynamics, cycle: Sequence[int]) -> SwapSequence:
    """Swaps turning a centralized Boolean bijection into the shift along `cycle`.

    Each step picks the smallest node i with positive weight whose removal
    leaves the current interaction graph acyclic, the smallest y with
    y_j = 0 < f_i(y) (j the cycle in-neighbour of i), and swaps y with
    y + e_j; this lowers the total weight by exactly one.
    """
    M = global_map(F)
    n = M.n
    if M.q != 2:
        raise UnsupportedDomainError("swap decomposition is defined for q = 2 only")
    if not M.is_bijective():
        raise DomainError("network is not a bijection")
    G = interaction_graph(M)
    if is_centralized(G) is None:
        raise DomainError("interaction graph is not centralized")
    _check_cycle_in_graph(cycle, G.arcs, n)
    pred = cycle_predecessors(list(cycle))

    images = M.images.copy()
    inputs = {j: {i for i, k in G.arcs if k == j} for j in range(n)}
    x = np.arange(2 ** n, dtype=np.int64)
    pairs = []
    while True:
        w = _weights(images, n, pred)
        if sum(w) == 0:
            break
        arcs = {(i, j) for j in range(n) for i in inputs[j]}
        node = next((i for i in range(n) if w[i] > 0 and _is_acyclic(n, arcs, removed=i)), None)
        if node is None:
            raise DomainError("no positive-weight node leaves the graph acyclic")
        j = pred[node]
        hits = np.flatnonzero((((x >> j) & 1) == 0) & (((images >> node) & 1) == 1))
        y = int(hits[0])
        z = y ^ (1 << j)
        changed = int(images[y] ^ images[z])
        images[y], images[z] = images[z], images[y]
        pairs.append((y, z))
        for k in range(n):
            if (changed >> k) & 1:
                inputs[k] = _column_inputs(images, n, k)
    target = global_map(shift_along(cycle, n, 2)).images
    if not np.array_equal(images, target):  # pragma: no cover - guaranteed by the weight argument
        raise AssertionError("swap sequence did not reach the cycle shift")
    return SwapSequence(tuple(pairs))


# --------------------------------------------------------------------------
# examples meeting the bounds with equality


def tight_fixed_point_example(q: int, n: int, d: int) -> AutomataNetwork:
    """Identity except on the block x_0 = .. = x_{d-1} = 0, where x_0 is moved by x -> x+1 mod q.

    Degree d and exactly q^n - q^{n-d} fixed points.
    """
    if not 1 <= d <= n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    block = tuple(range(d))

    def f0(p):
        return p[0] if any(p) else (p[0] + 1) % q

    rules = [LocalRule.from_function(block, q, f0)] + [_copy_rule(i, q) for i in range(1, n)]
    return AutomataNetwork(n, q, tuple(rules))


def tight_preimage_example(q: int, n: int, d: int) -> AutomataNetwork:
    """0^n unless x_0 = .. = x_{d-1} = 0, in which case (1, 0, .., 0); 0^n has q^n - q^{n-d} preimages."""
    if not 1 <= d <= n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    f0 = LocalRule.from_function(tuple(range(d)), q, lambda p: 0 if any(p) else 1)
    rules = [f0] + [LocalRule((), [0]) for _ in range(1, n)]
    return AutomataNetwork(n, q, tuple(rules))


def tight_rank_example_boolean(n: int) -> AutomataNetwork:
    """f_0 = x_0 AND x_1, identity elsewhere: rank 2^n - 2^{n-2} with degree 2."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    rules = [LocalRule((0, 1), [0, 0, 0, 1])] + [_copy_rule(i, 2) for i in range(1, n)]
    return AutomataNetwork(n, 2, tuple(rules))
