"""Command-line pipeline: parse, atomicize, build, represent, verify, extract.

Every subcommand prints canonical JSON (sorted keys, no floats, field
elements as strings).  Exit codes: 0 success, 1 a verification came out
false, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .atomic import AtomicSystem, atomicize
from .casebook import HornSentence, bs_search, horn_reduce, weyl_report
from .errors import MalformedInput, VonStaudtError
from .exactalg import ExactMatrix, FieldSpec, parse_field
from .ncring import parse_system
from .represent import Representation, build_representation, extract_solution, induced_matroid, verify_arrangement
from .staudt import build_circuits, in_family, is_matroid


@dataclass(frozen=True)
class Config:
    depth: object = 3
    jobs: int = 1
    seed: int = 0
    guard: int = 10**7
    out: Path | None = None

    def __post_init__(self):
        if self.depth not in (2, 3, "all"):
            raise MalformedInput(f"sweep depth must be 2, 3 or all, got {self.depth!r}")
        if self.jobs < 1 or self.guard < 1:
            raise MalformedInput("jobs and guard must be positive")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def _read_text(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None


def solution_to_json(solution, field: FieldSpec, c: int):
    return {
        "field": field.to_json(),
        "block_size": c,
        "solution": {str(i): [[field.format(x) for x in m.row(r)] for r in range(m.rows)] for i, m in sorted(solution.items())},
    }


def solution_from_json(data):
    try:
        field = FieldSpec.from_json(data["field"])
        c = int(data["block_size"])
        raw = data["solution"]
        out = {}
        for key, rows in raw.items():
            out[int(key)] = ExactMatrix.from_rows(field, [[field.parse(str(x)) for x in r] for r in rows], c)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad solution JSON: {exc!r}") from None
    for key, m in out.items():
        if m.shape != (c, c):
            raise MalformedInput(f"X_{key} is not {c}x{c}")
    return out, field, c


# --- subcommands ---------------------------------------------------------------------


def cmd_atomicize(args, cfg):
    system = parse_system(_read_text(args.input))
    return atomicize(system, mode=args.mode).to_json(), 0


def cmd_build_matroid(args, cfg):
    atomic = AtomicSystem.from_json(_read_json(args.atomic))
    fam = build_circuits(atomic, implicit=not args.literal)
    check = is_matroid(fam)
    out = fam.to_json()
    out["is_matroid"] = check.ok
    if check.witness is not None:
        c1, c2, e = check.witness
        out["witness"] = {"circuits": [list(c1), list(c2)], "pivot": e}
    return out, 0 if check.ok else 1


def cmd_represent(args, cfg):
    atomic = AtomicSystem.from_json(_read_json(args.atomic))
    solution, field, _ = solution_from_json(_read_json(args.solution))
    return build_representation(atomic, solution, field).to_json(), 0


def cmd_verify(args, cfg):
    rep = Representation.from_json(_read_json(args.rep))
    report = verify_arrangement(rep, depth=cfg.depth, jobs=cfg.jobs)
    out = {"arrangement": report.to_json()}
    code = 0 if report.ok else 1
    if report.ok:
        matroid = induced_matroid(rep, report)
        out["induced_matroid"] = matroid.to_json()
        if args.system:
            verdict = in_family(matroid, AtomicSystem.from_json(_read_json(args.system)))
            out["in_family"] = {"ok": verdict.ok, "failed": list(verdict.reasons)}
            code = 0 if verdict.ok else 1
    return out, code


def cmd_extract(args, cfg):
    rep = Representation.from_json(_read_json(args.rep))
    atomic = AtomicSystem.from_json(_read_json(args.atomic))
    solution = extract_solution(rep, atomic, check_family=args.check_family)
    return solution_to_json(solution, rep.field, rep.c), 0


def cmd_weyl(args, cfg):
    report = weyl_report(args.p, jobs=cfg.jobs)
    flags = ("commutator_is_identity", "pairs_all_2p", "triples_in_2p_3p", "arrangement_ok", "in_family", "roundtrip")
    ok = all(report[f] for f in flags) and report["triple_r5_x4_z1"] == 2 * args.p
    return report, 0 if ok else 1


def cmd_bs(args, cfg):
    field = parse_field(args.field)
    report = bs_search(field, args.dim, mode=args.mode, count=args.count, seed=cfg.seed, guard=cfg.guard)
    return report.to_json(), 0


def cmd_horn_reduce(args, cfg):
    h = HornSentence.from_json(_read_json(args.horn))
    cases = []
    for subset, system in horn_reduce(h).items():
        cases.append({"S": list(subset), "variables": list(system.names), "system": system.serialize()})
    return {"sentence": h.to_json(), "cases": cases}, 0


def build_parser():
    parser = argparse.ArgumentParser(prog="vonstaudt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for rank sweeps")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    parser.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("atomicize", help="polynomial equations -> atomic system JSON")
    p.add_argument("input")
    p.add_argument("--mode", choices=("balanced", "literal"), default="balanced")
    p.set_defaults(func=cmd_atomicize)

    p = sub.add_parser("build-matroid", help="atomic system -> circuit family and matroid verdict")
    p.add_argument("atomic")
    p.add_argument("--literal", action="store_true", help="omit the trivial {x_i,y_i,z_1}, {x_i,y_1,z_i} circuits")
    p.set_defaults(func=cmd_build_matroid)

    p = sub.add_parser("represent", help="atomic system + solution -> representation JSON")
    p.add_argument("atomic")
    p.add_argument("solution")
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("verify", help="arrangement sweep, induced matroid, family membership")
    p.add_argument("rep")
    p.add_argument("--system", help="atomic system JSON for the membership check")
    p.add_argument("--depth", default="3", choices=("2", "3", "all"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extract", help="representation + atomic system -> solution JSON")
    p.add_argument("rep")
    p.add_argument("atomic")
    p.add_argument("--check-family", action="store_true")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("weyl", help="Weyl matroid report at characteristic p")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("bs", help="Baumslag-Solitar relator search")
    p.add_argument("--field", required=True, help="Q, F<p> or F<p>(l,m)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--count", type=int, default=1000, help="pairs to sample in random mode")
    p.add_argument("--guard", type=int, default=10**7)
    p.set_defaults(func=cmd_bs)

    p = sub.add_parser("horn-reduce", help="Horn sentence JSON -> one system per zero set")
    p.add_argument("horn")
    p.set_defaults(func=cmd_horn_reduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        depth = getattr(args, "depth", "3")
        cfg = Config(
            depth="all" if depth == "all" else int(depth),
            jobs=args.jobs,
            seed=args.seed,
            guard=getattr(args, "guard", 10**7),
            out=args.out,
        )
        result, code = args.func(args, cfg)
    except VonStaudtError as exc:
        error = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        sys.stderr.write(canonical_json(error))
        return exc.exit_code
    text = canonical_json(result)
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
