"""Block-matrix representations of von Staudt matroids.

A representation of order ``c`` is a ``3c x |E|c`` matrix whose block
columns correspond to ground elements.  Solutions of atomic systems map to
representations column by column::

    O    -> (I, 0, 0)      xinf -> (0, I, 0)      yinf -> (0, 0, I)
    x_i  -> (I, a_i, 0)    y_i  -> (I, 0, a_i)    z_i  -> (0, a_i, -I)
    r_k  -> (I, a_k, I)

and :func:`extract_solution` reads a solution back after moving the frame
``O, x1, y1, xinf, yinf`` to standard position.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .atomic import AtomicSystem, atomic_is_solution
from .errors import (
    ArrangementError,
    ExtractionError,
    FrameError,
    GuardExceeded,
    MalformedInput,
    NotASolution,
    NotInvertible,
    ShapeMismatch,
    VerificationFailed,
)
from .exactalg import BlockMatrix, ExactMatrix, FieldSpec, block_column_minor, solve
from .staudt import FRAME, Matroid, build_circuits, in_family

__all__ = [
    "Representation",
    "FrameTransform",
    "ArrangementReport",
    "build_representation",
    "verify_arrangement",
    "induced_matroid",
    "normalize_frame",
    "extract_solution",
]

EXHAUSTIVE_LIMIT = 12


@dataclass(frozen=True)
class Representation:
    matrix: BlockMatrix
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.matrix.block_rows != 3:
            raise ShapeMismatch(f"block rows ≠ 3 (got {self.matrix.block_rows})")
        if len(self.labels) != self.matrix.block_cols:
            raise ShapeMismatch(f"{len(self.labels)} labels for {self.matrix.block_cols} block columns")
        if len(set(self.labels)) != len(self.labels):
            raise MalformedInput("repeated labels")

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field

    @property
    def c(self) -> int:
        return self.matrix.block_size

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise MalformedInput(f"no block column labelled {label!r}") from None

    def column(self, label) -> ExactMatrix:
        return self.matrix.block_column(self.index(label))

    def block(self, i, label) -> ExactMatrix:
        return self.matrix.block(i, self.index(label))

    def minor(self, labels) -> ExactMatrix:
        return block_column_minor(self.matrix, [self.index(e) for e in labels])

    def subset_rank(self, labels) -> int:
        return self.minor(labels).rank()

    @classmethod
    def from_columns(cls, labels, columns):
        c = columns[0].cols
        return cls(BlockMatrix(ExactMatrix.hstack(columns), c), labels)

    def columns(self):
        return [self.matrix.block_column(j) for j in range(len(self.labels))]

    def to_json(self):
        data = self.matrix.base.to_json(block_size=self.c)
        data["labels"] = list(self.labels)
        return data

    @classmethod
    def from_json(cls, data):
        base = ExactMatrix.from_json(data)
        try:
            c = int(data["block_size"])
            labels = [str(e) for e in data["labels"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad representation JSON: {exc!r}") from None
        if base.rows != 3 * c:
            raise ShapeMismatch(f"block rows ≠ 3 ({base.rows} rows at block size {c})")
        return cls(BlockMatrix(base, c), labels)


@dataclass(frozen=True)
class FrameTransform:
    """``M -> left @ M`` followed by right-multiplying named block columns."""

    left: ExactMatrix
    right_scalars: Mapping[str, ExactMatrix] = dc_field(default_factory=dict)

    def apply(self, r: Representation) -> Representation:
        moved = self.left @ r.matrix.base
        cols = []
        for j, label in enumerate(r.labels):
            col = moved.submatrix(range(moved.rows), range(j * r.c, (j + 1) * r.c))
            if label in self.right_scalars:
                col = col @ self.right_scalars[label]
            cols.append(col)
        return Representation.from_columns(r.labels, cols)

    def is_identity(self) -> bool:
        return self.left.is_identity() and all(m.is_identity() for m in self.right_scalars.values())


def _rho_column(label, a, c, field):
    eye, zero = ExactMatrix.identity(field, c), ExactMatrix.zeros(field, c)
    if label == "O":
        blocks = (eye, zero, zero)
    elif label == "xinf":
        blocks = (zero, eye, zero)
    elif label == "yinf":
        blocks = (zero, zero, eye)
    else:
        kind, idx = label[0], int(label[1:])
        ai = a[idx]
        blocks = {
            "x": (eye, ai, zero),
            "y": (eye, zero, ai),
            "z": (zero, ai, -eye),
            "r": (eye, ai, eye),
        }[kind]
    return ExactMatrix.vstack(blocks)


def build_representation(p: AtomicSystem, solution: Mapping[int, ExactMatrix], field=None, check=True) -> Representation:
    """Representation of the family of ``p`` obtained from a solution.

    ``check=False`` skips the solution and invertible-or-zero checks, which
    is only useful for building deliberately bad inputs.
    """
    solution = {int(k): v for k, v in solution.items()}
    if not solution:
        raise MalformedInput("empty solution")
    field = field or next(iter(solution.values())).field
    c = next(iter(solution.values())).rows
    a = dict(solution)
    a.setdefault(1, ExactMatrix.identity(field, c))
    a[0] = ExactMatrix.zeros(field, c)
    if check:
        if not atomic_is_solution(p, a, c, field):
            raise NotASolution("assignment does not solve the atomic system")
        for idx in range(1, p.N + 1):
            m = a[idx]
            if not (m.is_zero() or m.is_invertible()):
                raise NotInvertible(f"X_{idx} is neither invertible nor zero")
    labels = build_circuits(p).ground
    return Representation.from_columns(labels, [_rho_column(e, a, c, field) for e in labels])


# --- arrangement sweep ---------------------------------------------------------


@dataclass
class ArrangementReport:
    c: int
    ranks: dict  # tuple of labels -> rank
    violations: list  # (labels, rank, reason)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def histogram(self):
        out: dict = {}
        for subset, rk in self.ranks.items():
            bucket = out.setdefault(len(subset), {})
            bucket[rk] = bucket.get(rk, 0) + 1
        return {size: dict(sorted(b.items())) for size, b in sorted(out.items())}

    def to_json(self):
        return {
            "ok": self.ok,
            "block_size": self.c,
            "histogram": {str(k): {str(r): n for r, n in v.items()} for k, v in self.histogram().items()},
            "violations": [{"subset": list(s), "rank": rk, "reason": why} for s, rk, why in self.violations],
        }


_WORKER_REP = None


def _init_worker(rep):
    global _WORKER_REP
    _WORKER_REP = rep


def _rank_chunk(subsets):
    return [_WORKER_REP.subset_rank(s) for s in subsets]


def _subsets(labels, depth):
    if depth == "all":
        if len(labels) > EXHAUSTIVE_LIMIT:
            raise GuardExceeded(f"exhaustive sweep limited to {EXHAUSTIVE_LIMIT} elements, got {len(labels)}")
        sizes = range(1, len(labels) + 1)
    elif depth in (1, 2, 3):
        sizes = range(1, depth + 1)
    else:
        raise MalformedInput(f"sweep depth must be 2, 3 or 'all', got {depth!r}")
    for size in sizes:
        yield from itertools.combinations(labels, size)


def verify_arrangement(r: Representation, depth=3, jobs: int = 1) -> ArrangementReport:
    """Ranks of all block-column subsets up to ``depth``, with violations.

    A singleton must have rank ``c``; every subset must have rank a multiple
    of ``c``.
    """
    subsets = list(_subsets(r.labels, depth))
    if jobs and jobs > 1 and len(subsets) > 64:
        size = max(1, len(subsets) // (4 * jobs))
        chunks = [subsets[n : n + size] for n in range(0, len(subsets), size)]
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(r,)) as pool:
            ranks = [rk for part in pool.map(_rank_chunk, chunks) for rk in part]
    else:
        ranks = [r.subset_rank(s) for s in subsets]
    c = r.c
    table = dict(zip(subsets, ranks))
    violations = []
    for s, rk in table.items():
        if len(s) == 1 and rk != c:
            violations.append((s, rk, "loop" if rk == 0 else "singleton rank is not c"))
        elif rk % c:
            violations.append((s, rk, "rank is not a multiple of c"))
    return ArrangementReport(c, table, violations)


def induced_matroid(r: Representation, report: ArrangementReport | None = None) -> Matroid:
    """Rank-3 matroid whose dependent sets are those of rank below ``c * size``."""
    report = report or verify_arrangement(r, depth=3)
    if not report.ok:
        s, rk, why = report.violations[0]
        raise ArrangementError(f"not a {r.c}-arrangement: {list(s)} has rank {rk} ({why})")
    c = r.c
    circuits = []
    dependent = set()
    for s, rk in sorted(report.ranks.items(), key=lambda t: len(t[0])):
        if len(s) > 3 or rk >= c * len(s):
            continue
        fs = frozenset(s)
        if not any(frozenset(sub) in dependent for k in range(1, len(s)) for sub in itertools.combinations(s, k)):
            circuits.append(fs)
        dependent.add(fs)
    return Matroid(r.labels, circuits, closure_size=4)


# --- frame normalization --------------------------------------------------------------


def _solve_pair(base_a, base_b, target, what):
    """Blocks ``(lam, mu)`` with ``target = base_a @ lam + base_b @ mu``."""
    c = target.cols
    try:
        coeffs = solve(ExactMatrix.hstack([base_a, base_b]), target)
    except NotInvertible:
        raise FrameError(f"{what} is not on the line through its frame points") from None
    lam = coeffs.submatrix(range(c), range(c))
    mu = coeffs.submatrix(range(c, 2 * c), range(c))
    if not (lam.is_invertible() and mu.is_invertible()):
        raise FrameError(f"{what} coincides with a frame point")
    return lam, mu


def normalize_frame(r: Representation):
    """Move ``O, x1, y1, xinf, yinf`` to the standard frame.

    Returns the normalized representation and the transform applied.
    """
    missing = [e for e in FRAME if e not in r.labels]
    if missing:
        raise FrameError(f"frame elements missing: {missing}")
    c, field = r.c, r.field
    o, a, cc, b, d = (r.column(e) for e in ("O", "x1", "y1", "xinf", "yinf"))
    lam, mu = _solve_pair(o, b, a, "x1")
    lam2, mu2 = _solve_pair(o, d, cc, "y1")
    b2 = b @ mu @ lam.inverse()
    d2 = d @ mu2 @ lam2.inverse()
    t = ExactMatrix.hstack([o, b2, d2])
    if not t.is_invertible():
        raise FrameError("O, xinf and yinf are collinear")
    transform = FrameTransform(
        t.inverse(),
        {
            "x1": lam.inverse(),
            "y1": lam2.inverse(),
            "xinf": mu @ lam.inverse(),
            "yinf": mu2 @ lam2.inverse(),
        },
    )
    out = transform.apply(r)
    eye, zero = ExactMatrix.identity(field, c), ExactMatrix.zeros(field, c)
    standard = {
        "O": (eye, zero, zero),
        "x1": (eye, eye, zero),
        "y1": (eye, zero, eye),
        "xinf": (zero, eye, zero),
        "yinf": (zero, zero, eye),
    }
    for label, blocks in standard.items():
        if out.column(label) != ExactMatrix.vstack(blocks):
            raise FrameError(f"{label} did not reach standard position")
    return out, transform


def _scaled(col_blocks, pivot, label):
    piv = col_blocks[pivot]
    if not piv.is_invertible():
        raise ExtractionError(f"block {pivot} of {label} is singular")
    inv = piv.inverse()
    return [blk @ inv for blk in col_blocks]


def extract_solution(r: Representation, p: AtomicSystem, check_family: bool = False):
    """Read a solution of ``p`` off a representation of a member of its family.

    With ``check_family`` the induced matroid must first pass
    :func:`~vonstaudt.staudt.in_family`.
    """
    ground = build_circuits(p).ground
    if set(r.labels) != set(ground):
        raise MalformedInput("representation labels do not match the ground set of the system")
    if tuple(r.labels) != tuple(ground):
        r = Representation.from_columns(ground, [r.column(e) for e in ground])
    if check_family:
        verdict = in_family(induced_matroid(r), p)
        if not verdict:
            raise VerificationFailed(f"induced matroid is not in the family: {', '.join(verdict.reasons)}")
    norm, _ = normalize_frame(r)
    c, field = r.c, r.field
    zero = ExactMatrix.zeros(field, c)
    solution = {}
    for i in range(1, p.N + 1):
        xb = _scaled([norm.block(t, f"x{i}") for t in range(3)], 0, f"x{i}")
        yb = _scaled([norm.block(t, f"y{i}") for t in range(3)], 0, f"y{i}")
        zb = _scaled([norm.block(t, f"z{i}") for t in range(3)], 2, f"z{i}")
        if xb[2] != zero or yb[1] != zero or zb[0] != zero:
            raise ExtractionError(f"x{i}, y{i} or z{i} is off its line")
        ai, ai_y, ai_z = xb[1], yb[2], -zb[1]
        if not (ai == ai_y == ai_z):
            raise ExtractionError(f"readings of a_{i} from x{i}, y{i}, z{i} disagree")
        if not (ai.is_zero() or ai.is_invertible()):
            raise ExtractionError(f"a_{i} is neither invertible nor zero")
        solution[i] = ai
    if not atomic_is_solution(p, solution, c, field):
        raise NotASolution("extracted assignment fails an atomic equation")
    return solution
