"""Von Staudt circuit families and the rank-3 matroid checks built on them.

Ground elements are named ``O``, ``xinf``, ``yinf``, ``x<i>``, ``y<i>``,
``z<i>`` (``1 <= i <= N``) and ``r<k>`` (one per distinct third slot of an
addition).  Ground order is exactly that, with the ``r`` elements sorted by
``k``.

A family stores its small circuits explicitly.  The "every 4-subset that
contains no listed circuit" rule is kept implicit through ``closure_size``:
when set to ``k``, every ``k``-subset without a listed circuit counts as a
circuit too, so any set of ``k`` or more elements is dependent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .atomic import Add, AtomicSystem, Mul
from .errors import MalformedInput

__all__ = [
    "FRAME",
    "element_name",
    "ground_set",
    "CircuitFamily",
    "Matroid",
    "MatroidCheck",
    "FamilyCheck",
    "build_circuits",
    "is_matroid",
    "rank_of",
    "is_weak_image",
    "in_family",
    "simplify",
]

FRAME = ("O", "x1", "y1", "xinf", "yinf")


def element_name(kind: str, i: int) -> str:
    """Name of ``kind`` in {"x","y","z","r"} at index ``i``; index 0 folds onto the frame."""
    if i == 0:
        return {"x": "O", "y": "O", "z": "yinf", "r": "y1"}[kind]
    return f"{kind}{i}"


def ground_set(N: int, r_indices: Iterable[int] = ()) -> tuple:
    out = ["O", "xinf", "yinf"]
    for kind in "xyz":
        out.extend(f"{kind}{i}" for i in range(1, N + 1))
    out.extend(f"r{k}" for k in sorted(set(r_indices)))
    return tuple(out)


class CircuitFamily:
    """Ground set plus a collection of circuits (see the module docstring)."""

    def __init__(self, ground: Sequence[str], circuits: Iterable[Iterable[str]], closure_size=None):
        self.ground = tuple(ground)
        if len(set(self.ground)) != len(self.ground):
            raise MalformedInput("repeated ground element")
        self.position = {e: n for n, e in enumerate(self.ground)}
        cs = set()
        for c in circuits:
            c = frozenset(c)
            unknown = c - self.position.keys()
            if unknown:
                raise MalformedInput(f"circuit uses unknown elements {sorted(unknown)}")
            if not c:
                raise MalformedInput("empty circuit")
            cs.add(c)
        if closure_size is not None:
            closure_size = int(closure_size)
            cs = {c for c in cs if len(c) < closure_size}
        self.circuits = frozenset(cs)
        self.closure_size = closure_size
        self._sizes = sorted({len(c) for c in self.circuits})

    # --- basic queries ---------------------------------------------------

    def key(self, subset) -> tuple:
        return tuple(sorted(self.position[e] for e in subset))

    def ordered(self, subset) -> tuple:
        return tuple(sorted(subset, key=self.position.__getitem__))

    def contains_circuit(self, subset) -> bool:
        s = frozenset(subset)
        if self.closure_size is not None and len(s) >= self.closure_size:
            return True
        if len(s) <= 10:
            return any(
                frozenset(sub) in self.circuits
                for size in self._sizes
                if size <= len(s)
                for sub in itertools.combinations(s, size)
            )
        return any(c <= s for c in self.circuits)

    is_dependent = contains_circuit

    def all_circuits(self):
        """Every circuit, the implicit closure ones included, in a stable order."""
        out = sorted(self.circuits, key=self.key)
        if self.closure_size is not None:
            for combo in itertools.combinations(self.ground, self.closure_size):
                s = frozenset(combo)
                if not any(c <= s for c in self.circuits):
                    out.append(s)
        return out

    def restrict(self, elements) -> "CircuitFamily":
        keep = [e for e in self.ground if e in set(elements)]
        ks = set(keep)
        return type(self)(keep, [c for c in self.circuits if c <= ks], self.closure_size)

    def __eq__(self, other):
        if not isinstance(other, CircuitFamily):
            return NotImplemented
        if self.ground != other.ground:
            return False
        if self.closure_size == other.closure_size:
            return self.circuits == other.circuits
        return set(self.all_circuits()) == set(other.all_circuits())

    def __hash__(self):
        return hash((self.ground, self.circuits, self.closure_size))

    def __repr__(self):
        extra = f", closure_size={self.closure_size}" if self.closure_size else ""
        return f"{type(self).__name__}({len(self.ground)} elements, {len(self.circuits)} circuits{extra})"

    # --- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "ground": list(self.ground),
            "circuits": [list(self.ordered(c)) for c in self.all_circuits()],
        }

    @classmethod
    def from_json(cls, data):
        try:
            ground = [str(e) for e in data["ground"]]
            circuits = [frozenset(str(e) for e in c) for c in data["circuits"]]
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad circuit family JSON: {exc!r}") from None
        fam = cls(ground, circuits)
        # recognise the rank-3 closure shape so later checks stay cheap
        small = [c for c in circuits if len(c) < 4]
        if any(len(c) == 4 for c in circuits) and all(len(c) <= 4 for c in circuits):
            compact = cls(ground, small, closure_size=4)
            if set(compact.all_circuits()) == fam.circuits:
                return compact
        return fam


class Matroid(CircuitFamily):
    """A circuit family that is known (or claimed) to satisfy the circuit axioms."""


@dataclass(frozen=True)
class MatroidCheck:
    ok: bool
    witness: tuple | None = None  # (C1, C2, pivot); pivot None for a containment failure

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    reasons: tuple = ()

    def __bool__(self):
        return self.ok


def build_circuits(p: AtomicSystem, implicit: bool = True) -> CircuitFamily:
    """Circuit family of an atomic system.

    With ``implicit`` (the default) the trivial relations ``X_i = X_1 X_i``
    and ``X_i = X_i X_1`` contribute ``{x_i, y_i, z_1}`` and ``{x_i, y_1, z_i}``
    for every ``i``; without it only the listed equations contribute.

    >>> from vonstaudt.atomic import Add, AtomicSystem, Mul
    >>> fam = build_circuits(AtomicSystem(5, [Mul(4, 2, 3), Mul(5, 3, 2), Add(4, 1, 5)]))
    >>> len(fam.ground)
    19
    """
    N = p.N
    r_indices = {eq.k for eq in p.equations if isinstance(eq, Add) and eq.k != 0}
    ground = ground_set(N, r_indices)
    circuits = []
    lines = (
        ["O", "xinf"] + [f"x{i}" for i in range(1, N + 1)],
        ["O", "yinf"] + [f"y{i}" for i in range(1, N + 1)],
        ["xinf", "yinf"] + [f"z{i}" for i in range(1, N + 1)],
    )
    for line in lines:
        circuits.extend(itertools.combinations(line, 3))

    def add(*names):
        if len(set(names)) == len(names):
            circuits.append(names)

    x, y, z, r = (lambda i, t=t: element_name(t, i) for t in "xyzr")
    for eq in p.equations:
        i, j, k = eq.i, eq.j, eq.k
        if isinstance(eq, Mul):
            add(x(i), y(k), z(j))
        else:
            add(y(1), r(k), "xinf")
            add(x(k), r(k), "yinf")
            add(x(i), r(k), z(j))
    for i in range(1, N + 1 if implicit else 1):
        add(x(i), y(i), z(1))
        add(x(i), y(1), z(i))
    return CircuitFamily(ground, circuits, closure_size=4)


def is_matroid(c: CircuitFamily) -> MatroidCheck:
    """Check the circuit axioms; on failure report the first offending pair.

    Pairs are scanned in ground order; for an elimination failure the pivot
    is the shared element whose removal leaves the smallest set.
    """
    circuits = sorted(c.circuits, key=c.key)
    by_elem: dict = {}
    for n, cc in enumerate(circuits):
        for e in cc:
            by_elem.setdefault(e, []).append(n)
    for a, c1 in enumerate(circuits):
        partners = sorted({b for e in c1 for b in by_elem[e] if b > a})
        for b in partners:
            c2 = circuits[b]
            if c1 <= c2 or c2 <= c1:
                small, big = (c1, c2) if len(c1) <= len(c2) else (c2, c1)
                return MatroidCheck(False, (c.ordered(small), c.ordered(big), None))
            union = c1 | c2
            for e in sorted(c1 & c2, key=lambda e: c.key(union - {e})):
                if not c.contains_circuit(union - {e}):
                    return MatroidCheck(False, (c.ordered(c1), c.ordered(c2), e))
    return MatroidCheck(True)


def rank_of(m: CircuitFamily, subset=None) -> int:
    """Size of a maximal independent subset, grown greedily in ground order."""
    subset = m.ground if subset is None else subset
    unknown = set(subset) - m.position.keys()
    if unknown:
        raise MalformedInput(f"unknown elements {sorted(unknown)}")
    basis: list = []
    for e in m.ordered(set(subset)):
        if not m.contains_circuit(basis + [e]):
            basis.append(e)
    return len(basis)


def _same_ground(a, b):
    if a.ground != b.ground:
        raise MalformedInput("ground sets differ")


def is_weak_image(candidate: CircuitFamily, of: CircuitFamily) -> bool:
    """True iff every circuit of ``of`` contains a circuit of ``candidate``."""
    _same_ground(candidate, of)
    if of.closure_size is not None:
        k = of.closure_size
        implicit_ok = candidate.closure_size is not None and candidate.closure_size <= k
        explicit = of.circuits if implicit_ok else of.all_circuits()
    else:
        explicit = of.circuits
    return all(candidate.contains_circuit(c) for c in explicit)


def in_family(candidate: CircuitFamily, p: AtomicSystem, principal: CircuitFamily | None = None) -> FamilyCheck:
    """Membership in the von Staudt family of ``p``, with the failed conditions.

    Reasons use the tags ``"matroid"``, ``"weak-image"``, ``"condition 1"``
    (loops), ``"condition 2"`` (frame restriction) and ``"condition 3"``
    (some ``x_i`` parallel to ``xinf``).
    """
    principal = principal or build_circuits(p)
    _same_ground(candidate, principal)
    reasons = []
    if not is_matroid(candidate):
        reasons.append("matroid")
    if not is_weak_image(candidate, principal):
        reasons.append("weak-image")
    if any(candidate.contains_circuit([e]) for e in candidate.ground):
        reasons.append("condition 1")
    for size in range(1, len(FRAME) + 1):
        if any(
            candidate.contains_circuit(s) != principal.contains_circuit(s)
            for s in itertools.combinations(FRAME, size)
        ):
            reasons.append("condition 2")
            break
    if any(candidate.contains_circuit([f"x{i}", "xinf"]) for i in range(1, p.N + 1)):
        reasons.append("condition 3")
    return FamilyCheck(not reasons, tuple(reasons))


def simplify(m: CircuitFamily) -> Matroid:
    """Keep the first element (ground order) of every parallel class."""
    loops = [e for e in m.ground if m.contains_circuit([e])]
    if loops:
        raise MalformedInput(f"cannot simplify a matroid with loops {loops}")
    keep = []
    for e in m.ground:
        if not any(m.contains_circuit([e, f]) for f in keep):
            keep.append(e)
    ks = set(keep)
    return Matroid(keep, [c for c in m.circuits if c <= ks], m.closure_size)
