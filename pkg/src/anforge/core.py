"""
Automata networks F: Q^n -> Q^n as explicit lookup tables.

Conventions used throughout the package:

* nodes are numbered 0..n-1;
* a configuration is a tuple of n digits in 0..q-1 and is identified with
  the integer ``sum(x[i] * q**i)``, so node 0 is the least significant digit;
* a local rule reading inputs ``(i_0 < i_1 < ... < i_{k-1})`` is a table of
  length q**k indexed by ``sum(x[i_t] * q**t)``.

When printed, configurations are written node 0 first, e.g. ``"100"`` is the
configuration with x_0 = 1 (index 1).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, ResourceLimitError

DEFAULT_MAX_SPACE = 2 ** 22
MAX_SPACE_ENV = "ANFORGE_MAX_SPACE"


def max_space() -> int:
    """Largest q**n any whole-space operation will enumerate."""
    value = os.environ.get(MAX_SPACE_ENV)
    if value is None:
        return DEFAULT_MAX_SPACE
    try:
        return int(value)
    except ValueError:
        raise DomainError(f"{MAX_SPACE_ENV} must be an integer, got {value!r}")


def check_space(n: int, q: int) -> int:
    """Return q**n, raising ResourceLimitError when it exceeds max_space()."""
    size = q ** n
    limit = max_space()
    if size > limit:
        raise ResourceLimitError(f"q^n = {q}^{n} = {size} exceeds the enumeration limit {limit}")
    return size


# --------------------------------------------------------------------------
# configurations


def encode(digits: Sequence[int], q: int) -> int:
    """Index of a configuration (node 0 is the least significant digit)."""
    index = 0
    for d in reversed(digits):
        d = int(d)
        if not 0 <= d < q:
            raise DomainError(f"digit {d} outside 0..{q - 1}")
        index = index * q + d
    return index


def decode(index: int, n: int, q: int) -> tuple[int, ...]:
    if not 0 <= index < q ** n:
        raise DomainError(f"index {index} outside 0..{q ** n - 1}")
    digits = []
    for _ in range(n):
        index, d = divmod(index, q)
        digits.append(d)
    return tuple(digits)


def config_str(index: int, n: int, q: int) -> str:
    """Digit string of a configuration, node 0 leftmost (``"100"`` is index 1)."""
    digits = decode(index, n, q)
    if q <= 10:
        return "".join(str(d) for d in digits)
    return ",".join(str(d) for d in digits)


def parse_config(text: str, q: int) -> tuple[int, ...]:
    """Inverse of :func:`config_str`."""
    parts = text.split(",") if "," in text else list(text)
    digits = tuple(int(p) for p in parts)
    for d in digits:
        if not 0 <= d < q:
            raise DomainError(f"digit {d} outside 0..{q - 1}")
    return digits


def digit_array(n: int, q: int, node: int) -> np.ndarray:
    """Digit of `node` for every configuration index in 0..q**n-1."""
    return (np.arange(q ** n, dtype=np.int64) // q ** node) % q


def digits_of(values: np.ndarray, q: int, node: int) -> np.ndarray:
    return (values // q ** node) % q


# --------------------------------------------------------------------------
# networks


def _frozen(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LocalRule:
    """Local function of one node: lookup table over the states of its inputs."""

    inputs: tuple[int, ...]
    table: np.ndarray

    def __init__(self, inputs: Iterable[int], table):
        object.__setattr__(self, "inputs", tuple(int(i) for i in inputs))
        object.__setattr__(self, "table", _frozen(table))
        if any(b <= a for a, b in zip(self.inputs, self.inputs[1:])):
            raise DomainError(f"rule inputs must be strictly increasing, got {self.inputs}")

    @classmethod
    def from_function(cls, inputs: Iterable[int], q: int, fn) -> "LocalRule":
        """Tabulate ``fn(pattern)`` where pattern is the tuple of input digits."""
        inputs = tuple(inputs)
        k = len(inputs)
        table = [fn(decode(p, k, q)) for p in range(q ** k)]
        return cls(inputs, table)

    def lookup(self, x: Sequence[int], q: int) -> int:
        p = 0
        for t in reversed(self.inputs):
            p = p * q + x[t]
        return int(self.table[p])

    def __eq__(self, other):
        if not isinstance(other, LocalRule):
            return NotImplemented
        return self.inputs == other.inputs and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.inputs, self.table.tobytes()))

    def __repr__(self):
        return f"LocalRule(inputs={list(self.inputs)}, table={self.table.tolist()})"


@dataclass(frozen=True, eq=False)
class AutomataNetwork:
    n: int
    q: int
    rules: tuple[LocalRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.q < 2:
            raise DomainError(f"alphabet size must be >= 2, got {self.q}")
        if self.n < 1:
            raise DomainError(f"need at least one node, got n={self.n}")
        if len(self.rules) != self.n:
            raise DomainError(f"expected {self.n} rules, got {len(self.rules)}")
        for j, rule in enumerate(self.rules):
            for i in rule.inputs:
                if not 0 <= i < self.n:
                    raise DomainError(f"rule {j} reads unknown node {i}")
            if len(rule.table) != self.q ** len(rule.inputs):
                raise DomainError(
                    f"rule {j}: table length {len(rule.table)} != q^{len(rule.inputs)}")
            if len(rule.table) and (rule.table.min() < 0 or rule.table.max() >= self.q):
                raise DomainError(f"rule {j}: table entries must lie in 0..{self.q - 1}")

    @property
    def size(self) -> int:
        return self.q ** self.n

    def declared_arcs(self) -> set[tuple[int, int]]:
        return {(i, j) for j, r in enumerate(self.rules) for i in r.inputs}

    def declared_degree(self) -> int:
        return max(len(r.inputs) for r in self.rules)

    def __eq__(self, other):
        if not isinstance(other, AutomataNetwork):
            return NotImplemented
        return (self.n, self.q, self.rules) == (other.n, other.q, other.rules)

    def __hash__(self):
        return hash((self.n, self.q, self.rules))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "rules": [{"inputs": list(r.inputs), "table": r.table.tolist()} for r in self.rules],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AutomataNetwork":
        try:
            rules = [LocalRule(r["inputs"], r["table"]) for r in data["rules"]]
            return cls(int(data["n"]), int(data["q"]), tuple(rules))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed network description: {exc}") from exc


@dataclass(frozen=True, eq=False)
class GlobalMap:
    """Tabulated dynamics: ``images[x]`` is the index of F(x)."""

    n: int
    q: int
    images: np.ndarray

    def __init__(self, n: int, q: int, images):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "q", int(q))
        arr = _frozen(images)
        object.__setattr__(self, "images", arr)
        if self.q < 2 or self.n < 1:
            raise DomainError(f"invalid dimensions n={n}, q={q}")
        size = self.q ** self.n
        if len(arr) != size:
            raise DomainError(f"expected {size} images, got {len(arr)}")
        if size and (arr.min() < 0 or arr.max() >= size):
            raise DomainError("image index out of range")

    @property
    def size(self) -> int:
        return self.q ** self.n

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __eq__(self, other):
        if not isinstance(other, GlobalMap):
            return NotImplemented
        return (self.n, self.q) == (other.n, other.q) and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash((self.n, self.q, self.images.tobytes()))

    def is_bijective(self) -> bool:
        return len(np.unique(self.images)) == self.size

    def to_dict(self) -> dict:
        return {"n": self.n, "q": self.q, "images": self.images.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "GlobalMap":
        try:
            return cls(int(data["n"]), int(data["q"]), data["images"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed global map description: {exc}") from exc


Dynamics = Union[AutomataNetwork, GlobalMap]


# --------------------------------------------------------------------------
# evaluation


def evaluate(F: AutomataNetwork, x: Sequence[int]) -> tuple[int, ...]:
    if len(x) != F.n:
        raise DomainError(f"configuration has {len(x)} digits, network has {F.n} nodes")
    for d in x:
        if not 0 <= d < F.q:
            raise DomainError(f"digit {d} outside 0..{F.q - 1}")
    return tuple(rule.lookup(x, F.q) for rule in F.rules)


def _rule_column(rule: LocalRule, n: int, q: int, digits: dict) -> np.ndarray:
    """Value of `rule` on every configuration (digits is a per-call cache)."""
    if rule.inputs == tuple(range(n)):
        return rule.table
    pattern = np.zeros(q ** n, dtype=np.int64)
    for t, i in enumerate(rule.inputs):
        if i not in digits:
            digits[i] = digit_array(n, q, i)
        pattern += digits[i] * q ** t
    return rule.table[pattern]


def node_columns(F: AutomataNetwork) -> list[np.ndarray]:
    """For each node j, the array of f_j over all configurations."""
    check_space(F.n, F.q)
    digits: dict = {}
    return [_rule_column(rule, F.n, F.q, digits) for rule in F.rules]


def global_map(F: Dynamics) -> GlobalMap:
    if isinstance(F, GlobalMap):
        return F
    images = np.zeros(check_space(F.n, F.q), dtype=np.int64)
    for j, col in enumerate(node_columns(F)):
        images += col * F.q ** j
    return GlobalMap(F.n, F.q, images)


def from_global_map(M: GlobalMap) -> AutomataNetwork:
    """Network realizing `M` in which every node declares all n nodes as inputs."""
    if not isinstance(M, GlobalMap):
        raise DomainError("expected a GlobalMap")
    check_space(M.n, M.q)
    everything = tuple(range(M.n))
    rules = [LocalRule(everything, digits_of(M.images, M.q, j)) for j in range(M.n)]
    return AutomataNetwork(M.n, M.q, tuple(rules))


def as_network(F: Dynamics) -> AutomataNetwork:
    return from_global_map(F) if isinstance(F, GlobalMap) else F


def identity(n: int, q: int) -> AutomataNetwork:
    return AutomataNetwork(n, q, tuple(LocalRule((i,), range(q)) for i in range(n)))


def compose_images(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Images of a∘b (apply b first)."""
    return a[b]


def iterate_images(images: np.ndarray, k: int) -> np.ndarray:
    """Images of the k-th iterate, by binary exponentiation."""
    result = np.arange(len(images), dtype=np.int64)
    base = np.asarray(images, dtype=np.int64)
    while k:
        if k & 1:
            result = base[result]
        k >>= 1
        if k:
            base = base[base]
    return result


def tabulate_on_inputs(images: np.ndarray, n: int, q: int, node: int,
                       inputs: Sequence[int]) -> np.ndarray:
    """Table of node `node` of a global map, read through the given inputs.

    Only valid when that coordinate depends on `inputs` alone; other nodes are
    set to 0 when picking a representative configuration.
    """
    k = len(inputs)
    patterns = np.arange(q ** k, dtype=np.int64)
    configs = np.zeros(q ** k, dtype=np.int64)
    for t, i in enumerate(inputs):
        configs += ((patterns // q ** t) % q) * q ** i
    return digits_of(images[configs], q, node)


def power(F: AutomataNetwork, k: int) -> AutomataNetwork:
    """F^k; node j declares every node with a length-k path to j in F's declared graph."""
    if k < 1:
        raise DomainError(f"power must be >= 1, got {k}")
    check_space(F.n, F.q)
    images = iterate_images(global_map(F).images, k)
    adj = np.zeros((F.n, F.n), dtype=bool)  # adj[i, j]: j reads i
    for j, rule in enumerate(F.rules):
        adj[list(rule.inputs), j] = True
    reach = np.eye(F.n, dtype=bool)
    for _ in range(k):
        reach = (reach.astype(np.int64) @ adj.astype(np.int64)) > 0
    rules = []
    for j in range(F.n):
        inputs = tuple(int(i) for i in np.flatnonzero(reach[:, j]))
        rules.append(LocalRule(inputs, tabulate_on_inputs(images, F.n, F.q, j, inputs)))
    return AutomataNetwork(F.n, F.q, tuple(rules))


# --------------------------------------------------------------------------
# JSON


def load(path) -> Dynamics:
    """Read a network or a global map from a JSON file."""
    with open(path) as fh:
        return loads(fh.read())


def loads(text: str) -> Dynamics:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("expected a JSON object")
    if "rules" in data:
        return AutomataNetwork.from_dict(data)
    if "images" in data:
        return GlobalMap.from_dict(data)
    raise DomainError("JSON object has neither 'rules' nor 'images'")


def dumps(obj: Dynamics) -> str:
    return json.dumps(obj.to_dict())
