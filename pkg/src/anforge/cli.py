"""
Command line interface.

    anforge construct <kind> --q Q --n N [--d D] [--k K] [--out FILE] [--dot PREFIX]
    anforge analyze <file.json>
    anforge verify <law> [--network FILE] [--q Q] [--n N] [--d D]
    anforge search bdd --dynamics FILE --degree D [--budget N] [--jobs J]
    anforge search bdig --network FILE --degree D

Exit codes: 0 holds/found, 1 violated/absent, 2 usage or input error,
3 resource limit. Everything written to stdout is JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Optional

from . import constructions as cons
from . import laws, search
from .core import AutomataNetwork, GlobalMap, config_str, dumps, global_map, identity, load
from .dynamics import cycle_structure, dynamics_dot, gray_metrics, preimage_profile
from .errors import AnforgeError, DomainError, ResourceLimitError
from .structure import interaction_graph, is_centralized

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
MAX_LISTED = 100


# kind -> (builder, option names in call order)
CONSTRUCTIONS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "identity": (lambda q, n: identity(n, q), ("q", "n")),
    "constant": (lambda q, n: cons.constant_network(n, q), ("q", "n")),
    "shift": (lambda q, n: cons.circular_shift(n, q), ("q", "n")),
    "near-hamiltonian": (cons.near_hamiltonian, ("q", "n")),
    "rank-deficient": (cons.rank_q_n_minus_2, ("q", "n")),
    "rank-deficient-base": (cons.rank_deficient_base, ("q",)),
    "fsr-max-cycle": (cons.fsr_with_max_cycle, ("q", "n", "k")),
    "gray": (cons.reflected_gray_successor, ("n",)),
    "tight-fixed-point": (cons.tight_fixed_point_example, ("q", "n", "d")),
    "tight-preimage": (cons.tight_preimage_example, ("q", "n", "d")),
    "tight-rank": (cons.tight_rank_example_boolean, ("n",)),
}


def build(kind: str, args) -> AutomataNetwork | GlobalMap:
    builder, names = CONSTRUCTIONS[kind]
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise DomainError(f"{kind} needs {' '.join(missing)}")
    return builder(*(getattr(args, name) for name in names))


def _emit(obj, out: Optional[str] = None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, default=laws._jsonable)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# --------------------------------------------------------------------------


def cmd_construct(args) -> int:
    F = build(args.kind, args)
    _emit(dumps(F), args.out)
    if args.dot:
        prefix = Path(args.dot)
        Path(f"{prefix}.interaction.dot").write_text(interaction_graph(F).to_dot())
        Path(f"{prefix}.dynamics.dot").write_text(dynamics_dot(F))
    return EXIT_OK


def analyze_report(F) -> dict:
    M = global_map(F)
    G = interaction_graph(F)
    prof = preimage_profile(M)
    cs = cycle_structure(M)
    fmt = lambda x: config_str(int(x), M.n, M.q)  # noqa: E731
    pairs = []
    for a, b in prof.collisions():
        if len(pairs) == MAX_LISTED:
            break
        pairs.append([fmt(a), fmt(b)])
    report = {
        "n": M.n,
        "q": M.q,
        "degree": G.max_in_degree,
        "arcs": [list(a) for a in sorted(G.arcs)],
        "in_degree": G.in_degree,
        "rank": prof.rank,
        "orphans": len(prof.orphans),
        "preimage_histogram": {str(k): v for k, v in prof.histogram().items()},
        "collisions": prof.collision_count(),
        "collision_pairs": pairs,
        # length -> number of limit cycles of that length
        "cycle_lengths": {str(k): v for k, v in sorted(cs.length_multiset.items())},
        "cycle_count": cs.cycle_count,
        "parity": cs.parity,
        "fixed_points": len(cs.fixed_points),
        "fixed_point_configs": [fmt(x) for x in cs.fixed_points[:MAX_LISTED]],
        "transient_configs": sum(cs.transient_sizes),
        "center": is_centralized(G),
    }
    if M.q == 2:
        report["gray"] = gray_metrics(M).to_dict()
    return report


def cmd_analyze(args) -> int:
    _emit(analyze_report(load(args.file)))
    return EXIT_OK


def _affine_hamiltonian(args) -> laws.Verdict:
    q = args.q if args.q is not None else 2
    n = args.n if args.n is not None else 3
    result = laws.affine_hamiltonian_search(q, n)
    if n < 3:
        return laws.Verdict("affine-hamiltonian", laws.NOT_APPLICABLE,
                            dict(result, reason="the statement needs n >= 3"))
    status = laws.HOLDS if result["hamiltonian"] == 0 else laws.VIOLATED
    return laws.Verdict("affine-hamiltonian", status, result,
                        None if status == laws.HOLDS else {"examples": result["examples"]})


def cmd_verify(args) -> int:
    if args.law == "affine-hamiltonian":
        verdict = _affine_hamiltonian(args)
    elif args.law == "balanced-affine":
        verdict = laws.check_balanced_affine(args.n if args.n is not None else 3)
    else:
        if args.network is None:
            raise DomainError(f"law {args.law} needs --network")
        F = load(args.network)
        if args.law == "local-rigidity":
            d = args.d if args.d is not None else interaction_graph(F).max_in_degree
            verdict = laws.check_local_rigidity(F, d)
        else:
            verdict = laws.LAWS[args.law](F)
    _emit(verdict.to_dict())
    return EXIT_OK if verdict.ok else EXIT_NO


def cmd_search(args) -> int:
    if args.problem == "bdig":
        if args.network is None:
            raise DomainError("bdig needs --network")
        F = load(args.network)
        G = interaction_graph(F)
        answer = G.max_in_degree <= args.degree
        _emit({"problem": "bdig", "answer": answer, "degree": G.max_in_degree,
               "bound": args.degree})
        return EXIT_OK if answer else EXIT_NO
    if args.dynamics is None:
        raise DomainError("bdd needs --dynamics")
    M = load(args.dynamics)
    budget = search.SearchBudget(max_candidates=args.budget)
    result = search.bdd(M, args.degree, budget, jobs=args.jobs)
    _emit(dict(problem="bdd", **result.to_dict()))
    if result.status == search.FOUND:
        return EXIT_OK
    if result.status == search.ABSENT:
        return EXIT_NO
    return EXIT_LIMIT


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anforge", description=__doc__.split("\n\n")[0].strip(),
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a network and write it as JSON")
    c.add_argument("kind", choices=sorted(CONSTRUCTIONS))
    c.add_argument("--q", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--out", help="output file (default stdout)")
    c.add_argument("--dot", metavar="PREFIX",
                   help="also write PREFIX.interaction.dot and PREFIX.dynamics.dot")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="report degree, preimages and cycles of a network")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="check a law and print a JSON verdict")
    v.add_argument("law", choices=sorted(list(laws.LAWS) + ["affine-hamiltonian", "balanced-affine"]))
    v.add_argument("--network")
    v.add_argument("--q", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--d", type=int)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="bounded-degree decision problems")
    s.add_argument("problem", choices=["bdd", "bdig"])
    s.add_argument("--dynamics", help="map or network whose dynamics graph is the target")
    s.add_argument("--network")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--budget", type=int, default=search.SearchBudget().max_candidates)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_search)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"anforge: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (AnforgeError, OSError) as exc:
        print(f"anforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
