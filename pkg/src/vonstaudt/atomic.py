"""Reduction of polynomial systems to atomic form.

An atomic system uses variables ``X_0 .. X_N`` with ``X_0 = 0`` and
``X_1 = 1`` implied, and only equations ``X_i = X_j + X_k`` (:class:`Add`)
and ``X_i = X_j * X_k`` (:class:`Mul`).  Original variables get indices
``2 .. n+1`` in their order of appearance; auxiliary variables follow in
allocation order.

Two reduction modes are offered.  ``"balanced"`` first moves every
negatively signed term to the other side, so no negative constants occur,
and lets the last chain step of the right-hand side write straight into the
auxiliary variable produced by the left-hand side (this yields the familiar
five-variable system for ``XY - YX = 1``).  ``"literal"`` keeps signs where
they are and replaces each negative coefficient ``m`` by a fresh ``X'`` tied
down by ``X_0 = X' + X_1 + ... + X_1`` (``-m`` copies).

An equation whose sides reduce to different variables ``X_P`` and ``X_Q``
becomes ``Add(P, Q, 0)``, i.e. ``X_P = X_Q + X_0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .errors import MalformedInput, NotASolution
from .exactalg import ExactMatrix
from .ncring import NCSystem, is_solution

__all__ = [
    "Add",
    "Mul",
    "AtomicSystem",
    "atomicize",
    "propagate",
    "atomic_is_solution",
    "lift_solution",
    "project_solution",
    "solve_atomic_scalar",
]


@dataclass(frozen=True, order=True)
class Add:
    """``X_i = X_j + X_k``."""

    i: int
    j: int
    k: int

    op = "add"

    def holds(self, vi, vj, vk):
        return vi == vj + vk


@dataclass(frozen=True, order=True)
class Mul:
    """``X_i = X_j * X_k``."""

    i: int
    j: int
    k: int

    op = "mul"

    def holds(self, vi, vj, vk):
        return vi == vj * vk


@dataclass(frozen=True)
class AtomicSystem:
    N: int
    equations: tuple
    origin_map: Mapping[str, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "origin_map", dict(self.origin_map))
        for eq in self.equations:
            if not isinstance(eq, (Add, Mul)):
                raise MalformedInput(f"not an atomic equation: {eq!r}")
            lo = 0 if isinstance(eq, Add) else 1
            if not 1 <= eq.i <= self.N or not (lo <= eq.j <= self.N and lo <= eq.k <= self.N):
                raise MalformedInput(f"index out of range in {eq!r} (N={self.N})")
        for name, idx in self.origin_map.items():
            if not 2 <= idx <= self.N:
                raise MalformedInput(f"variable {name!r} mapped to invalid index {idx}")

    def __hash__(self):
        return hash((self.N, self.equations, tuple(sorted(self.origin_map.items()))))

    def to_json(self):
        return {
            "N": self.N,
            "equations": [{"op": eq.op, "i": eq.i, "j": eq.j, "k": eq.k} for eq in self.equations],
            "origin_map": dict(self.origin_map),
        }

    @classmethod
    def from_json(cls, data):
        try:
            eqs = []
            for e in data["equations"]:
                kind = {"add": Add, "mul": Mul}[e["op"]]
                eqs.append(kind(int(e["i"]), int(e["j"]), int(e["k"])))
            return cls(int(data["N"]), eqs, {str(k): int(v) for k, v in data.get("origin_map", {}).items()})
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad atomic system JSON: {exc!r}") from None


class _Builder:
    def __init__(self, first_free):
        self.next = first_free
        self.equations = []

    def fresh(self):
        v = self.next
        self.next += 1
        return v

    def monomial(self, word, target=None):
        if not word:
            return 1
        cur = word[0]
        for pos, letter in enumerate(word[1:], start=2):
            dest = target if (pos == len(word) and target is not None) else self.fresh()
            self.equations.append(Mul(dest, cur, letter))
            cur = dest
        return cur

    def sum(self, summands, target=None):
        """Reduce a list of words (each standing for a monomial) to one variable."""
        if not summands:
            return 0
        if len(summands) == 1:
            return self.monomial(summands[0], target)
        parts = [self.monomial(w) for w in summands]
        cur = parts[0]
        for pos, v in enumerate(parts[1:], start=2):
            dest = target if (pos == len(parts) and target is not None) else self.fresh()
            self.equations.append(Add(dest, cur, v))
            cur = dest
        return cur

    def negative_constant(self, m):
        xp = self.fresh()
        s = self.sum([(xp,)] + [()] * (-m))
        self.equations.append(Add(s, 0, 0))
        return xp

    def summands(self, terms):
        out = []
        for word, coeff in terms:
            if coeff > 0:
                if len(word) >= 2:
                    v = self.monomial(word)
                    out.extend([(v,)] * coeff)
                else:
                    out.extend([word] * coeff)
            else:
                out.append((self.negative_constant(coeff),) + word)
        return out


def atomicize(system: NCSystem, mode: str = "balanced") -> AtomicSystem:
    """Equivalent atomic system; see the module docstring for both modes.

    >>> from vonstaudt.ncring import parse_system
    >>> atomicize(parse_system("X*Y - Y*X = 1")).equations
    (Mul(i=4, j=2, k=3), Mul(i=5, j=3, k=2), Add(i=4, j=1, k=5))
    """
    if mode not in ("balanced", "literal"):
        raise ValueError(f"unknown mode {mode!r}")
    n = system.num_vars
    origin = {name: 2 + idx for idx, name in enumerate(system.names)}
    b = _Builder(2 + n)

    def translate(items):
        return [(tuple(2 + i for i in w), c) for w, c in items]

    for eq in system.equations:
        lhs, rhs = translate(eq.lhs.items()), translate(eq.rhs.items())
        if mode == "balanced":
            left = [t for t in lhs if t[1] > 0] + [(w, -c) for w, c in rhs if c < 0]
            right = [t for t in rhs if t[1] > 0] + [(w, -c) for w, c in lhs if c < 0]
        else:
            left, right = lhs, rhs
        start = b.next
        P = b.sum(b.summands(left))
        target = P if P >= start else None
        Q = b.sum(b.summands(right), target)
        if P == Q:
            continue
        if P == 0:
            P, Q = Q, 0
        b.equations.append(Add(P, Q, 0))
    return AtomicSystem(max(b.next - 1, 1), b.equations, origin)


def propagate(equations, values, mul=None):
    """Fill in values forced by the equations; ``values`` is updated in place.

    Products are forward only; sums are also solved for a missing summand.
    Returns False as soon as a fully known equation fails.
    """
    mul = mul or (lambda a, b: a * b)
    changed = True
    while changed:
        changed = False
        for eq in equations:
            i, j, k = eq.i, eq.j, eq.k
            hi, hj, hk = i in values, j in values, k in values
            if hj and hk:
                v = mul(values[j], values[k]) if isinstance(eq, Mul) else values[j] + values[k]
                if hi:
                    if values[i] != v:
                        return False
                else:
                    values[i] = v
                    changed = True
            elif isinstance(eq, Add) and hi and (hj or hk):
                if hj:
                    values[k] = values[i] - values[j]
                else:
                    values[j] = values[i] - values[k]
                changed = True
    return True


def _field_of(assignment, field):
    if field is not None:
        return field
    for m in assignment.values():
        return m.field
    raise MalformedInput("cannot infer the field of an empty assignment")


def atomic_is_solution(atomic: AtomicSystem, assignment: Mapping[int, ExactMatrix], c: int, field=None) -> bool:
    """True iff the assignment (indices 1..N, optionally 0) solves the system."""
    field = _field_of(assignment, field)
    values = dict(assignment)
    zero, eye = ExactMatrix.zeros(field, c), ExactMatrix.identity(field, c)
    if values.setdefault(0, zero) != zero or values.get(1, eye) != eye:
        return False
    values[1] = eye
    for idx in range(atomic.N + 1):
        m = values.get(idx)
        if m is None:
            raise MalformedInput(f"X_{idx} is unassigned")
        if m.field != field or m.shape != (c, c):
            raise MalformedInput(f"X_{idx} is not a {c}x{c} matrix over {field}")
    return all(eq.holds(values[eq.i], values[eq.j], values[eq.k]) for eq in atomic.equations)


def lift_solution(system: NCSystem, atomic: AtomicSystem, assignment: Mapping, c: int, field=None):
    """Extend a solution of ``system`` to every index ``1..N`` of ``atomic``."""
    assignment = system.resolve(assignment)
    field = _field_of(assignment, field)
    if not is_solution(system, assignment, c, field):
        raise NotASolution("assignment does not solve the original system")
    values = {0: ExactMatrix.zeros(field, c), 1: ExactMatrix.identity(field, c)}
    for idx, name in enumerate(system.names):
        values[atomic.origin_map[name]] = assignment[idx]
    if not propagate(atomic.equations, values):
        raise NotASolution("atomic system is not a reduction of this system")
    missing = [i for i in range(atomic.N + 1) if i not in values]
    if missing:
        raise NotASolution(f"auxiliary variables {missing} are not determined")
    lifted = {i: values[i] for i in range(1, atomic.N + 1)}
    if not atomic_is_solution(atomic, lifted, c, field):
        raise NotASolution("lifted assignment fails an atomic equation")
    return lifted


def project_solution(atomic: AtomicSystem, assignment: Mapping[int, ExactMatrix], c=None, field=None):
    """Restrict a solution of ``atomic`` to the original variables, keyed by name."""
    assignment = {int(k): v for k, v in assignment.items()}
    field = _field_of(assignment, field)
    if c is None:
        c = next(iter(assignment.values())).rows
    if not atomic_is_solution(atomic, assignment, c, field):
        raise NotASolution("assignment does not solve the atomic system")
    return {name: assignment[idx] for name, idx in atomic.origin_map.items()}


def solve_atomic_scalar(atomic: AtomicSystem, elements):
    """Yield every scalar solution (``idx -> element``, indices 0..N).

    Exhaustive backtracking over ``elements`` (all elements of a finite
    field), with forced values propagated before each branch.
    """
    elements = list(elements)
    zero, one = elements[0] * 0, elements[0] * 0 + 1

    def search(values):
        if not propagate(atomic.equations, values):
            return
        free = next((i for i in range(atomic.N + 1) if i not in values), None)
        if free is None:
            if all(eq.holds(values[eq.i], values[eq.j], values[eq.k]) for eq in atomic.equations):
                yield dict(values)
            return
        for x in elements:
            trial = dict(values)
            trial[free] = x
            yield from search(trial)

    yield from search({0: zero, 1: one})
