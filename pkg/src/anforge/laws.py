"""
Executable checks of the degree bounds. Each check returns a Verdict whose
witness, on violation, is enough to reproduce the failure independently.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import AutomataNetwork, Dynamics, GlobalMap, LocalRule, check_space, global_map
from .dynamics import cycle_structure, cylinder_counts, gray_metrics, preimage_profile
from .errors import DomainError, ResourceLimitError, UnsupportedDomainError
from .galois import is_prime
from .structure import affine_images, interaction_graph, is_affine, is_balanced, is_centralized

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"


@dataclass
class Verdict:
    law: str
    status: str
    details: dict = field(default_factory=dict)
    witness: Optional[dict] = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def ok(self) -> bool:
        """True unless the law is violated."""
        return self.status != VIOLATED

    def to_dict(self) -> dict:
        out = {"law": self.law, "status": self.status, "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(type(obj))


def _verdict(law: str, ok: bool, details: dict, witness=None) -> Verdict:
    return Verdict(law, HOLDS if ok else VIOLATED, details, None if ok else witness)


def _is_identity(M: GlobalMap) -> bool:
    return bool((M.images == np.arange(M.size)).all())


# --------------------------------------------------------------------------


def check_local_rigidity(F: Dynamics, d: int, max_subset: Optional[int] = None) -> Verdict:
    """q^{n-|U|d} divides |F^{-1}([u])| for every |U| <= floor(n/d) and every pattern u."""
    M = global_map(F)
    n, q = M.n, M.q
    deg = interaction_graph(M).max_in_degree
    if deg > d:
        raise DomainError(f"network has degree {deg} > declared degree {d}")
    top = n if d == 0 else n // d
    if max_subset is not None:
        top = min(top, max_subset)
    checked = 0
    for size in range(top + 1):
        modulus = q ** (n - size * d)
        for U in itertools.combinations(range(n), size):
            counts = cylinder_counts(M, U)
            bad = np.flatnonzero(counts % modulus)
            checked += len(counts)
            if len(bad):
                u = int(bad[0])
                pattern = [(u // q ** t) % q for t in range(size)]
                return _verdict("local-rigidity", False, {"d": d, "cylinders": checked},
                                {"nodes": list(U), "pattern": pattern,
                                 "count": int(counts[u]), "modulus": modulus})
    return _verdict("local-rigidity", True, {"d": d, "max_subset": top, "cylinders": checked})


def check_fixed_point_bound(F: Dynamics) -> Verdict:
    """fp(F) <= q^n - q^{n-d} unless F is the identity.

    The bound is applied with d = max(degree, 1): a constant map has degree 0
    and one fixed point, and the argument needs a node with at least one input.
    """
    M = global_map(F)
    if _is_identity(M):
        return Verdict("fixed-point-bound", NOT_APPLICABLE, {"reason": "identity"})
    d = max(interaction_graph(M).max_in_degree, 1)
    fixed = cycle_structure(M).fixed_points
    bound = M.size - M.q ** (M.n - d)
    details = {"fixed_points": len(fixed), "degree": d, "bound": bound}
    return _verdict("fixed-point-bound", len(fixed) <= bound, details, {"fixed_points": fixed})


def rank_bound_holds(orphans: int, n: int, q: int, d: int) -> bool:
    """Exact test of orphans >= (n + log_q 2) / (d + log_q 2).

    Rearranged as (orphans - 1) log_q 2 >= n - orphans*d, i.e.
    2^(orphans - 1) >= q^(n - orphans*d) whenever the right exponent is positive.
    """
    if orphans < 1:
        return False
    e = n - orphans * d
    if e <= 0:
        return True
    return 2 ** (orphans - 1) >= q ** e


def check_rank_bound(F: Dynamics) -> Verdict:
    """rk(F) <= q^n - (n + log_q 2)/(d + log_q 2) for non-bijections, and rk <= q^n - 2 when d < n."""
    M = global_map(F)
    prof = preimage_profile(M)
    if prof.rank == M.size:
        return Verdict("rank-bound", NOT_APPLICABLE, {"reason": "bijective"})
    d = interaction_graph(M).max_in_degree
    orphans = M.size - prof.rank
    general = rank_bound_holds(orphans, M.n, M.q, d)
    strict = d >= M.n or prof.rank <= M.size - 2
    details = {"rank": prof.rank, "orphans": orphans, "degree": d,
               "general_bound": general, "d_lt_n_bound": strict}
    witness = {"orphans": prof.orphans.tolist()}
    return _verdict("rank-bound", general and strict, details, witness)


def check_preimage_bound(F: Dynamics) -> Verdict:
    """max |F^{-1}(y)| <= q^n - q^{n-d} for non-constant F."""
    M = global_map(F)
    prof = preimage_profile(M)
    if prof.rank == 1:
        return Verdict("preimage-bound", NOT_APPLICABLE, {"reason": "constant"})
    d = interaction_graph(M).max_in_degree
    bound = M.size - M.q ** (M.n - d)
    worst = int(np.argmax(prof.counts))
    details = {"max_preimages": prof.max_preimages, "degree": d, "bound": bound}
    return _verdict("preimage-bound", prof.max_preimages <= bound, details,
                    {"configuration": worst, "preimages": prof.max_preimages})


def check_parity_theorem(F: Dynamics) -> Verdict:
    """A centralized Boolean bijection with n >= 3 and degree < n has an even number of limit cycles."""
    M = global_map(F)
    law = "parity"
    if M.q != 2:
        return Verdict(law, NOT_APPLICABLE, {"reason": "q != 2"})
    if M.n < 3:
        return Verdict(law, NOT_APPLICABLE, {"reason": "n < 3"})
    if not M.is_bijective():
        return Verdict(law, NOT_APPLICABLE, {"reason": "not bijective"})
    G = interaction_graph(M)
    if G.max_in_degree >= M.n:
        return Verdict(law, NOT_APPLICABLE, {"reason": "degree >= n"})
    center = is_centralized(G)
    if center is None:
        return Verdict(law, NOT_APPLICABLE, {"reason": "not centralized"})
    cs = cycle_structure(M)
    details = {"cycle_count": cs.cycle_count, "parity": cs.parity, "center": center,
               "degree": G.max_in_degree}
    return _verdict(law, cs.parity == 0, details, {"cycle_lengths": sorted(cs.cycle_lengths)})


def check_gray_degree(F: Dynamics) -> Verdict:
    """A Gray code map has degree >= log2 n and at least n log2 n interaction arcs."""
    M = global_map(F)
    if M.q != 2:
        raise UnsupportedDomainError("Gray codes are Boolean")
    gm = gray_metrics(M)
    if not gm.is_gray:
        return Verdict("gray-degree", NOT_APPLICABLE, {"reason": "not a Gray code"})
    G = interaction_graph(M)
    d, arcs, n = G.max_in_degree, len(G.arcs), M.n
    degree_ok = 2 ** d >= n  # d >= log2 n
    arcs_ok = 2 ** arcs >= n ** n  # arcs >= n log2 n
    details = {"n": n, "degree": d, "arcs": arcs, "delta": gm.delta,
               "degree_ok": degree_ok, "arcs_ok": arcs_ok}
    return _verdict("gray-degree", degree_ok and arcs_ok, details, {"arcs": sorted(G.arcs)})


def check_rank_bound_boolean(F: Dynamics) -> Verdict:
    """Boolean networks of degree <= 2: rk(F) < 2^n implies rk(F) <= 2^n - 2^{n-2}."""
    M = global_map(F)
    law = "rank-bound-boolean"
    if M.q != 2:
        raise UnsupportedDomainError("this bound is for q = 2")
    d = interaction_graph(M).max_in_degree
    if d > 2:
        return Verdict(law, NOT_APPLICABLE, {"reason": "degree > 2", "degree": d})
    if M.n < 2:
        return Verdict(law, NOT_APPLICABLE, {"reason": "n < 2"})
    prof = preimage_profile(M)
    if prof.rank == M.size:
        return Verdict(law, NOT_APPLICABLE, {"reason": "bijective"})
    bound = M.size - 2 ** (M.n - 2)
    return _verdict(law, prof.rank <= bound, {"rank": prof.rank, "bound": bound, "degree": d},
                    {"orphans": prof.orphans.tolist()})


# --------------------------------------------------------------------------
# affine maps


def _all_digit_vectors(count: int, q: int, length: int) -> np.ndarray:
    idx = np.arange(count, dtype=np.int64)
    return np.stack([(idx // q ** t) % q for t in range(length)], axis=1)


def affine_hamiltonian_search(q: int = 2, n: int = 3, limit: int = 50_000_000) -> dict:
    """Count the Hamiltonian maps among all x -> A x + v over GF(q), q prime.

    Each map is tested by walking the orbit of 0: it is Hamiltonian iff the
    first return to 0 happens after exactly q^n steps.
    """
    if not is_prime(q):
        raise UnsupportedDomainError("affine search needs a prime q")
    size = check_space(n, q)
    n_matrices = q ** (n * n)
    total = n_matrices * size
    if total > limit:
        raise ResourceLimitError(f"{total} affine maps exceed the limit {limit}")
    # every matrix at once: entry A[r, c] is digit r*n + c of the matrix index
    entries = _all_digit_vectors(n_matrices, q, n * n).reshape(n_matrices, n, n)
    hamiltonian = []
    for v_index in range(size):
        v = np.array([(v_index // q ** i) % q for i in range(n)], dtype=np.int64)
        x = np.zeros((n_matrices, n), dtype=np.int64)
        returned_early = np.zeros(n_matrices, dtype=bool)
        for step in range(1, size + 1):
            x = (np.einsum("mrc,mc->mr", entries, x) + v) % q
            at_zero = ~x.any(axis=1)
            if step < size:
                returned_early |= at_zero
            else:
                found = np.flatnonzero(at_zero & ~returned_early)
        for a_index in found.tolist():
            hamiltonian.append((a_index, v_index))
    return {"q": q, "n": n, "maps": total, "hamiltonian": len(hamiltonian),
            "examples": hamiltonian[:10]}


def affine_from_indices(a_index: int, v_index: int, q: int, n: int) -> GlobalMap:
    A = np.array([(a_index // q ** t) % q for t in range(n * n)], dtype=np.int64).reshape(n, n)
    v = np.array([(v_index // q ** i) % q for i in range(n)], dtype=np.int64)
    return GlobalMap(n, q, affine_images(A, v, q))


def boolean_functions_of_two() -> list[LocalRule]:
    return [LocalRule((0, 1), [(t >> p) & 1 for p in range(4)]) for t in range(16)]


def distinct_local_functions(n: int, q: int, d: int) -> np.ndarray:
    """Every distinct column f: Q^n -> Q reading at most d nodes, as rows of an array."""
    size = check_space(n, q)
    x = np.arange(size, dtype=np.int64)
    cols = set()
    for k in range(d + 1):
        for inputs in itertools.combinations(range(n), k):
            pattern = np.zeros(size, dtype=np.int64)
            for t, i in enumerate(inputs):
                pattern += ((x // q ** i) % q) * q ** t
            for table in itertools.product(range(q), repeat=q ** k):
                cols.add(tuple(np.asarray(table, dtype=np.int64)[pattern].tolist()))
    return np.array(sorted(cols), dtype=np.int64)


def check_balanced_affine(n: int = 3) -> Verdict:
    """Balanced 2-input Boolean functions are affine, and so is every bijection of degree <= 2 on n nodes."""
    funcs = boolean_functions_of_two()
    balanced = [f for f in funcs if is_balanced(f)]
    balanced_not_affine = []
    for f in balanced:
        F = AutomataNetwork(2, 2, (f, LocalRule((0,), [0, 1])))
        if is_affine(F) is None:
            balanced_not_affine.append(f.table.tolist())
    ok_functions = len(balanced) == 6 and not balanced_not_affine

    cols = distinct_local_functions(n, 2, 2)
    size = 2 ** n
    # a bijection needs balanced coordinates
    cols = cols[cols.sum(axis=1) * 2 == size]
    perms = 0
    failures = []
    for choice in itertools.product(range(len(cols)), repeat=n):
        images = sum(cols[c] << j for j, c in enumerate(choice))
        if len(np.unique(images)) != size:
            continue
        perms += 1
        if is_affine(GlobalMap(n, 2, images)) is None:
            failures.append(images.tolist())
    details = {"balanced_two_input": len(balanced), "permutations": perms,
               "non_affine_permutations": len(failures)}
    ok = ok_functions and not failures
    return _verdict("balanced-affine", ok, details,
                    {"balanced_not_affine": balanced_not_affine, "permutations": failures[:5]})


LAWS = {
    "local-rigidity": check_local_rigidity,
    "fixed-point-bound": check_fixed_point_bound,
    "rank-bound": check_rank_bound,
    "preimage-bound": check_preimage_bound,
    "parity": check_parity_theorem,
    "gray-degree": check_gray_degree,
    "rank-bound-boolean": check_rank_bound_boolean,
}

