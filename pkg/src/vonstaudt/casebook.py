"""Worked instances: the Weyl matroid, a Baumslag-Solitar system and Horn reductions."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field as dc_field

from .atomic import Add, AtomicSystem, Mul
from .errors import GuardExceeded, MalformedInput, VerificationFailed
from .exactalg import ExactMatrix, FieldSpec, FpXY, lemma_block_rank, random_invertible
from .ncring import NCEquation, NCPolynomial, NCSystem, is_solution, parse_system
from .represent import build_representation, extract_solution, induced_matroid, verify_arrangement
from .staudt import build_circuits, in_family, is_matroid

__all__ = [
    "weyl_system",
    "WeylPair",
    "weyl_matrices",
    "weyl_solution",
    "weyl_representation",
    "weyl_report",
    "trace_obstruction",
    "bs_system",
    "bs_word",
    "general_linear_group",
    "BSReport",
    "bs_search",
    "HornSentence",
    "horn_reduce",
    "horn_counterexample",
    "horn_false_by_search",
]

# --- Weyl ------------------------------------------------------------------------


def weyl_system() -> AtomicSystem:
    """``X2 X3 = X4``, ``X3 X2 = X5``, ``X4 = X1 + X5``: the atomic form of ``XY - YX = 1``."""
    return AtomicSystem(5, [Mul(4, 2, 3), Mul(5, 3, 2), Add(4, 1, 5)], {"X": 2, "Y": 3})


@dataclass(frozen=True)
class WeylPair:
    p: int
    A: ExactMatrix
    B: ExactMatrix

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    def commutator(self) -> ExactMatrix:
        return self.A @ self.B - self.B @ self.A


def weyl_matrices(p: int, names=("l", "m")) -> WeylPair:
    """``p x p`` matrices over ``F_p(l, m)`` with ``AB - BA = I``.

    ``A`` has ``l`` on the diagonal and ``1, 2, ..., p-1`` above it; ``B``
    has ones below the diagonal and ``m`` in the top-right corner.

    >>> w = weyl_matrices(2)
    >>> w.commutator().is_identity()
    True
    """
    field = FpXY(p, names)
    lam, mu = field.gen(0), field.gen(1)
    zero = field.zero
    a = [lam if i == j else field(j) if j == i + 1 else zero for i in range(p) for j in range(p)]
    b = [field.one if i == j + 1 else zero for i in range(p) for j in range(p)]
    b[p - 1] = mu if p > 1 else b[p - 1]
    pair = WeylPair(p, ExactMatrix(field, p, p, a), ExactMatrix(field, p, p, b))
    if not pair.commutator().is_identity():
        raise VerificationFailed(f"AB - BA != I for p={p}")
    return pair


def weyl_solution(p: int):
    w = weyl_matrices(p)
    eye = ExactMatrix.identity(w.field, p)
    return {1: eye, 2: w.A, 3: w.B, 4: w.A @ w.B, 5: w.B @ w.A}


def weyl_representation(p: int):
    return build_representation(weyl_system(), weyl_solution(p))


def weyl_report(p: int, jobs: int = 1) -> dict:
    """Everything checked for the Weyl matroid at characteristic ``p``."""
    w = weyl_matrices(p)
    system = weyl_system()
    sol = weyl_solution(p)
    rep = build_representation(system, sol)
    sweep = verify_arrangement(rep, depth=3, jobs=jobs)
    hist = sweep.histogram()
    literal = build_circuits(system, implicit=False)
    triple_circuits = [tuple(rep_order(rep, c)) for c in literal.circuits if len(c) == 3]
    circuit_ranks = sorted({sweep.ranks[t] for t in triple_circuits})
    matroid = induced_matroid(rep, sweep) if sweep.ok else None
    membership = in_family(matroid, system) if matroid is not None else None
    try:
        roundtrip = extract_solution(rep, system) == sol
    except VerificationFailed:
        roundtrip = False
    # closed forms for {x_i, y_k, z_j} and {x_i, y_j, r5}
    agree = total = 0
    for i, j, k in itertools.product(range(1, 6), repeat=3):
        expected = lemma_block_rank("ii", sol[i], sol[k], sol[j])
        agree += sweep.ranks[rep_order(rep, {f"x{i}", f"y{k}", f"z{j}"})] == expected
        total += 1
    for i, j in itertools.product(range(1, 6), repeat=2):
        expected = lemma_block_rank("iii", sol[i], sol[j], sol[5])
        agree += sweep.ranks[rep_order(rep, {f"x{i}", f"y{j}", "r5"})] == expected
        total += 1
    return {
        "p": p,
        "commutator_is_identity": w.commutator().is_identity(),
        "trace_of_commutator": w.field.format(w.commutator().trace()),
        "matrix_shape": list(rep.matrix.base.shape),
        "block_columns": len(rep.labels),
        "pair_ranks": {str(r): n for r, n in hist.get(2, {}).items()},
        "triple_ranks": {str(r): n for r, n in hist.get(3, {}).items()},
        "pairs_all_2p": set(hist.get(2, {})) == {2 * p},
        "triples_in_2p_3p": set(hist.get(3, {})) <= {2 * p, 3 * p},
        "triple_r5_x4_z1": sweep.ranks[rep_order(rep, {"r5", "x4", "z1"})],
        "circuit_triple_ranks": circuit_ranks,
        "closed_form_agreement": f"{agree}/{total}",
        "arrangement_ok": sweep.ok,
        "literal_family_is_matroid": bool(is_matroid(literal)),
        "in_family": bool(membership) if membership is not None else False,
        "roundtrip": roundtrip,
    }


def rep_order(rep, subset):
    pos = {e: n for n, e in enumerate(rep.labels)}
    return tuple(sorted(subset, key=pos.__getitem__))


def trace_obstruction(c: int, field: FieldSpec) -> bool:
    """Whether ``XY - YX = I_c`` survives taking traces, i.e. ``c * 1 == 0``."""
    if c < 0:
        raise MalformedInput("c must be non-negative")
    if field.characteristic == 0:
        return c == 0
    return c % field.characteristic == 0


# --- Baumslag-Solitar --------------------------------------------------------------

_BS_TEXT = """\
x*x' = 1
y*y' = 1
y*x*x*y' = x*x*x
z*y*x*y'*x'*y*x'*y'*x - z = 1
"""


def bs_system() -> NCSystem:
    """``xx' = 1, yy' = 1, yx^2y' = x^3, z(yxy'x'yx'y'x - 1) = 1``."""
    return parse_system(_BS_TEXT)


def bs_word(a: ExactMatrix, b: ExactMatrix, a_inv=None, b_inv=None) -> ExactMatrix:
    """``b a b^-1 a^-1 b a^-1 b^-1 a``."""
    ai = a.inverse() if a_inv is None else a_inv
    bi = b.inverse() if b_inv is None else b_inv
    return b @ a @ bi @ ai @ b @ ai @ bi @ a


def general_linear_group(field: FieldSpec, c: int, limit: int | None = None):
    """All invertible ``c x c`` matrices over a prime field, in a fixed order."""
    if field.kind != "Fp":
        raise MalformedInput("enumeration needs a prime field")
    q = field.p
    if limit is not None and q ** (c * c) > limit:
        raise GuardExceeded(f"{q}^{c * c} candidate matrices exceed the guard {limit}")
    elems = list(field.elements())
    out = []
    for entries in itertools.product(elems, repeat=c * c):
        m = ExactMatrix(field, c, c, entries)
        if m.is_invertible():
            out.append(m)
    return out


@dataclass
class BSReport:
    field: str
    c: int
    mode: str
    pairs_examined: int = 0
    relator_pairs: int = 0
    nontrivial_word: int = 0
    solution: dict | None = None
    extra: dict = dc_field(default_factory=dict)

    @property
    def solvable(self) -> bool:
        return self.solution is not None

    def to_json(self):
        data = {
            "field": self.field,
            "c": self.c,
            "mode": self.mode,
            "pairs_examined": self.pairs_examined,
            "relator_pairs": self.relator_pairs,
            "nontrivial_word": self.nontrivial_word,
            "solvable": self.solvable,
        }
        if self.solution is not None:
            data["solution"] = {k: v.to_json()["entries"] for k, v in self.solution.items()}
        data.update(self.extra)
        return data


def _bs_check_pair(report, a, b, system):
    a2 = a @ a
    if not b @ a2 == a2 @ a @ b:
        return
    report.relator_pairs += 1
    ai, bi = a.inverse(), b.inverse()
    g = bs_word(a, b, ai, bi)
    eye = ExactMatrix.identity(a.field, a.rows)
    if g == eye:
        return
    report.nontrivial_word += 1
    diff = g - eye
    if report.solution is None and diff.is_invertible():
        sol = {"x": a, "x'": ai, "y": b, "y'": bi, "z": diff.inverse()}
        if is_solution(system, sol, a.rows, a.field):
            report.solution = sol


def bs_search(field: FieldSpec, c: int, mode: str = "exhaustive", count: int = 1000, seed=0, guard: int = 10**7) -> BSReport:
    """Search invertible pairs ``(A, B)`` with ``B A^2 B^-1 = A^3``.

    Exhaustive mode covers every pair of ``GL_c`` over a prime field, which
    settles solvability of the system at that size.  Random mode samples
    ``count`` pairs and works over any field.
    """
    system = bs_system()
    report = BSReport(str(field), c, mode)
    if mode == "exhaustive":
        group = general_linear_group(field, c, limit=guard)
        if len(group) ** 2 > guard:
            raise GuardExceeded(f"{len(group)}^2 pairs exceed the guard {guard}")
        for a in group:
            a2, a3 = a @ a, a @ a @ a
            for b in group:
                report.pairs_examined += 1
                if b @ a2 == a3 @ b:
                    _bs_check_pair(report, a, b, system)
        report.extra["group_order"] = len(group)
    elif mode == "random":
        rng = random.Random(seed)
        for _ in range(count):
            a, b = random_invertible(field, c, rng), random_invertible(field, c, rng)
            report.pairs_examined += 1
            _bs_check_pair(report, a, b, system)
    else:
        raise MalformedInput(f"unknown search mode {mode!r}")
    return report


# --- Horn sentences ------------------------------------------------------------------

_FACTOR = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?1))?$")


@dataclass(frozen=True)
class HornSentence:
    """``forall x (A_1 = B_1 and ... and A_m = B_m) -> A = B`` over group words.

    A word is a tuple of ``(variable index, exponent)`` with exponent ``1``
    or ``-1``; the empty tuple is the unit.
    """

    names: tuple
    equations: tuple
    implication: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "equations", tuple((tuple(a), tuple(b)) for a, b in self.equations))
        object.__setattr__(self, "implication", (tuple(self.implication[0]), tuple(self.implication[1])))
        if len(set(self.names)) != len(self.names):
            raise MalformedInput("repeated variable names")
        for a, b in self.equations + (self.implication,):
            for i, e in a + b:
                if not 0 <= i < len(self.names) or e not in (1, -1):
                    raise MalformedInput(f"bad factor ({i}, {e})")

    @property
    def num_vars(self):
        return len(self.names)

    def parse_word(self, text):
        text = text.strip()
        if text == "1":
            return ()
        out = []
        for part in text.split("*"):
            m = _FACTOR.match(part.strip())
            if m is None or m.group(1) not in self.names:
                raise MalformedInput(f"bad word factor {part!r}")
            out.append((self.names.index(m.group(1)), int(m.group(2) or 1)))
        return tuple(out)

    def format_word(self, word):
        if not word:
            return "1"
        return "*".join(self.names[i] + ("^-1" if e < 0 else "") for i, e in word)

    @classmethod
    def from_text(cls, names, equations, implication):
        proto = cls(names, (), ((), ()))
        eqs = [(proto.parse_word(a), proto.parse_word(b)) for a, b in equations]
        imp = (proto.parse_word(implication[0]), proto.parse_word(implication[1]))
        return cls(names, eqs, imp)

    def to_json(self):
        return {
            "vars": list(self.names),
            "equations": [[self.format_word(a), self.format_word(b)] for a, b in self.equations],
            "implication": [self.format_word(a) for a in self.implication],
        }

    @classmethod
    def from_json(cls, data):
        try:
            return cls.from_text(data["vars"], data.get("equations", []), data["implication"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad Horn sentence JSON: {exc!r}") from None


def _fresh(name, taken):
    while name in taken:
        name += "_"
    return name


def _horn_names(h):
    taken = set(h.names)
    primes = []
    for name in h.names:
        primes.append(_fresh(name + "'", taken))
        taken.add(primes[-1])
    return primes, _fresh("y", taken)


def horn_reduce(h: HornSentence) -> dict:
    """One polynomial system per zero set ``S`` (a tuple of variable names).

    For ``i`` in ``S`` the inverse of ``x_i`` is read as ``x_i`` and
    ``x_i = 0`` is added; otherwise a fresh ``x_i'`` with ``x_i x_i' = 1``
    stands for the inverse.  Finally ``(A - B) y = 1`` rules out ``A = B``.
    """
    n = h.num_vars
    primes, y_name = _horn_names(h)
    out = {}
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            zero = set(subset)
            names: list = []

            def var(name):
                if name not in names:
                    names.append(name)
                return NCPolynomial.variable(names.index(name))

            def poly(word):
                result = NCPolynomial.constant(1)
                for i, e in word:
                    result = result * var(h.names[i] if (e > 0 or i in zero) else primes[i])
                return result

            eqs = []
            for i in range(n):
                if i in zero:
                    eqs.append(NCEquation(var(h.names[i]), NCPolynomial()))
                else:
                    eqs.append(NCEquation(var(h.names[i]) * var(primes[i]), NCPolynomial.constant(1)))
            for a, b in h.equations:
                eqs.append(NCEquation(poly(a), poly(b)))
            a, b = h.implication
            diff = poly(a) - poly(b)
            eqs.append(NCEquation(diff * var(y_name), NCPolynomial.constant(1)))
            out[tuple(h.names[i] for i in subset)] = NCSystem(names, eqs)
    return out


def _word_value(word, values, inverses, eye):
    out = eye
    for i, e in word:
        out = out @ (values[i] if e > 0 else inverses[i])
    return out


def horn_counterexample(h: HornSentence, field: FieldSpec, c: int, guard: int = 10**7):
    """First solution of some reduced system, searched over ``{0} u GL_c``.

    Returns ``(S, assignment)`` with the assignment keyed by variable name, or
    ``None``.  Every candidate is confirmed with :func:`is_solution`.
    """
    group = general_linear_group(field, c, limit=guard)
    zero, eye = ExactMatrix.zeros(field, c), ExactMatrix.identity(field, c)
    primes, y_name = _horn_names(h)
    systems = horn_reduce(h)
    n = h.num_vars
    for subset, system in systems.items():
        zero_idx = {h.names.index(s) for s in subset}
        free = [i for i in range(n) if i not in zero_idx]
        if len(group) ** len(free) > guard:
            raise GuardExceeded(f"{len(group)}^{len(free)} assignments exceed the guard {guard}")
        for combo in itertools.product(group, repeat=len(free)):
            values = {i: zero for i in zero_idx}
            values.update(zip(free, combo))
            inverses = {i: (zero if i in zero_idx else values[i].inverse()) for i in range(n)}
            if any(
                _word_value(a, values, inverses, eye) != _word_value(b, values, inverses, eye)
                for a, b in h.equations
            ):
                continue
            a, b = h.implication
            diff = _word_value(a, values, inverses, eye) - _word_value(b, values, inverses, eye)
            if not diff.is_invertible():
                continue
            assignment = {h.names[i]: values[i] for i in range(n)}
            assignment.update({primes[i]: inverses[i] for i in free})
            assignment[y_name] = diff.inverse()
            assignment = {k: v for k, v in assignment.items() if k in system.names}
            if is_solution(system, assignment, c, field):
                return subset, assignment
    return None


def horn_false_by_search(h: HornSentence, field: FieldSpec) -> bool:
    """Scalar truth check: some assignment (with ``0^-1 = 0``) satisfies the
    equations but not the implication."""
    elems = list(field.elements())
    for combo in itertools.product(elems, repeat=h.num_vars):
        def val(word):
            out = field.one
            for i, e in word:
                x = combo[i]
                out = out * (x if e > 0 or x == 0 else x.inverse())
            return out

        if all(val(a) == val(b) for a, b in h.equations):
            a, b = h.implication
            if val(a) != val(b):
                return True
    return False
