"""Integer polynomials in noncommuting variables, a text format for systems of
equations between them, and evaluation at tuples of square matrices.

Text format, one equation per line::

    # the Weyl relation
    X*Y - Y*X = 1

Terms are joined by ``+``/``-``; a term is a ``*``-separated product of
integers and identifiers ``[A-Za-z][A-Za-z0-9_']*``.  Variables are numbered
in order of first appearance.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import FieldMismatch, MalformedInput, ParseError, ShapeMismatch
from .exactalg import ExactMatrix

__all__ = [
    "Word",
    "NCPolynomial",
    "NCEquation",
    "NCSystem",
    "parse_system",
    "serialize_system",
    "evaluate",
    "is_solution",
    "search_solutions",
]

Word = tuple  # tuple[int, ...]; the empty word is the unit


def _word_key(word):
    return (-len(word), word)


class NCPolynomial:
    """Finite map from words to nonzero integer coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = {tuple(w): int(c) for w, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def constant(cls, n):
        return cls({(): n})

    @classmethod
    def variable(cls, i):
        return cls({(i,): 1})

    @classmethod
    def monomial(cls, word, coeff=1):
        return cls({tuple(word): coeff})

    def is_zero(self):
        return not self.terms

    def variables(self):
        return {i for w in self.terms for i in w}

    def items(self):
        """Terms in canonical order: higher degree first, then lexicographic."""
        return sorted(self.terms.items(), key=lambda t: _word_key(t[0]))

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for (w1, c1), (w2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
        return NCPolynomial(out)

    def __rmul__(self, other):
        return _as_poly(other) * self

    def __eq__(self, other):
        if isinstance(other, int):
            other = NCPolynomial.constant(other)
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def rename(self, mapping):
        return NCPolynomial({tuple(mapping[i] for i in w): c for w, c in self.terms.items()})

    def format(self, names):
        if not self.terms:
            return "0"
        out = []
        ordered = sorted(self.terms.items(), key=lambda t: (-len(t[0]), [names[i] for i in t[0]]))
        for n, (word, c) in enumerate(ordered):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            factors = [names[i] for i in word]
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if n == 0:
                out.append(("-" if sign == "-" else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __repr__(self):
        return f"NCPolynomial({self.format([f'X{i}' for i in range(max(self.variables(), default=-1) + 1)])!r})"


def _as_poly(x):
    if isinstance(x, NCPolynomial):
        return x
    if isinstance(x, int):
        return NCPolynomial.constant(x)
    raise TypeError(f"cannot use {x!r} as a polynomial")


@dataclass(frozen=True)
class NCEquation:
    lhs: NCPolynomial
    rhs: NCPolynomial

    def difference(self):
        return self.lhs - self.rhs


class NCSystem:
    """Variable names plus equations over their indices.

    Two systems compare equal when they have the same variables and the same
    equations after translating indices back to names, so the comparison does
    not depend on the order in which variables were first seen.
    """

    def __init__(self, names: Iterable[str], equations: Iterable[NCEquation]):
        self.names = tuple(names)
        self.equations = tuple(equations)
        if len(set(self.names)) != len(self.names):
            raise MalformedInput("duplicate variable names")
        n = len(self.names)
        for eq in self.equations:
            for poly in (eq.lhs, eq.rhs):
                if any(not 0 <= i < n for i in poly.variables()):
                    raise MalformedInput("equation refers to an undeclared variable")

    @property
    def num_vars(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise MalformedInput(f"unknown variable {name!r}") from None

    def _by_name(self):
        def conv(poly):
            return frozenset(
                (tuple(self.names[i] for i in w), c) for w, c in poly.terms.items()
            )

        used = set()
        for e in self.equations:
            used |= e.lhs.variables() | e.rhs.variables()
        return (
            frozenset(self.names[i] for i in used),
            tuple((conv(e.lhs), conv(e.rhs)) for e in self.equations),
        )

    def __eq__(self, other):
        if not isinstance(other, NCSystem):
            return NotImplemented
        return self._by_name() == other._by_name()

    def __hash__(self):
        return hash(self._by_name())

    def __repr__(self):
        return f"NCSystem({self.names!r}, {len(self.equations)} equations)"

    def resolve(self, assignment: Mapping):
        """Translate an assignment keyed by names and/or indices to indices."""
        out = {}
        for key, value in assignment.items():
            idx = self.index(key) if isinstance(key, str) else int(key)
            out[idx] = value
        return out

    def serialize(self):
        return serialize_system(self)


# --- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_']*)|(?P<op>[-+*=]))")


def _tokenize(line, lineno):
    pos = 0
    tokens = []
    stripped = line.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if m is None or m.end() == pos:
            col = pos + 1 + (len(stripped[pos:]) - len(stripped[pos:].lstrip()))
            raise ParseError(f"unknown token {stripped[col - 1]!r}", lineno, col)
        col = m.start(m.lastgroup) + 1
        tokens.append((m.lastgroup, m.group(m.lastgroup), col))
        pos = m.end()
    return tokens


class _LineParser:
    def __init__(self, tokens, lineno, names):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.names = names  # dict name -> index, extended in place

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message, tok=None):
        col = tok[2] if tok else (self.tokens[-1][2] + len(self.tokens[-1][1]) if self.tokens else 1)
        raise ParseError(message, self.lineno, col)

    def expect_factor(self):
        tok = self.peek()
        if tok is None or tok[0] == "op":
            self.error("expected an integer or identifier", tok)
        self.pos += 1
        if tok[0] == "int":
            return int(tok[1]), None
        idx = self.names.setdefault(tok[1], len(self.names))
        return 1, idx

    def term(self):
        sign = 1
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "+-":
            if tok[1] == "-":
                sign = -sign
            self.pos += 1
        coeff, word = sign, []
        c, idx = self.expect_factor()
        coeff *= c
        if idx is not None:
            word.append(idx)
        while (tok := self.peek()) is not None and tok == ("op", "*", tok[2]):
            self.pos += 1
            c, idx = self.expect_factor()
            coeff *= c
            if idx is not None:
                word.append(idx)
        return NCPolynomial.monomial(word, coeff)

    def side(self):
        poly = self.term()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "+-":
            self.pos += 1
            t = self.term()
            poly = poly + t if tok[1] == "+" else poly - t
        return poly

    def equation(self):
        lhs = self.side()
        tok = self.peek()
        if tok is None or tok[1] != "=":
            self.error("expected '='", tok)
        self.pos += 1
        rhs = self.side()
        if self.peek() is not None:
            self.error(f"unexpected token {self.peek()[1]!r}", self.peek())
        return NCEquation(lhs, rhs)


def parse_system(text: str) -> NCSystem:
    """Parse equations in the text format; see the module docstring.

    >>> s = parse_system("X*Y - Y*X = 1")
    >>> s.names, s.serialize()
    (('X', 'Y'), 'X*Y - Y*X = 1\\n')
    """
    names: dict[str, int] = {}
    equations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = _tokenize(line, lineno)
        equations.append(_LineParser(tokens, lineno, names).equation())
    ordered = sorted(names, key=names.get)
    return NCSystem(ordered, equations)


def serialize_system(system: NCSystem) -> str:
    return "".join(
        f"{eq.lhs.format(system.names)} = {eq.rhs.format(system.names)}\n" for eq in system.equations
    )


# --- evaluation --------------------------------------------------------------------


def _check_assignment(variables, assignment, c, field):
    for i in variables:
        if i not in assignment:
            raise MalformedInput(f"variable {i} is unassigned")
    for key, m in assignment.items():
        if not isinstance(m, ExactMatrix):
            raise MalformedInput(f"value of {key} is not a matrix")
        if m.shape != (c, c):
            raise ShapeMismatch(f"value of {key} is {m.rows}x{m.cols}, expected {c}x{c}")
        if field is not None and m.field != field:
            raise FieldMismatch(f"value of {key} is over {m.field}, expected {field}")


def _infer_field(assignment, field):
    if field is not None:
        return field
    for m in assignment.values():
        return m.field
    raise MalformedInput("cannot infer the field of an empty assignment")


def evaluate(poly: NCPolynomial, assignment: Mapping[int, ExactMatrix], c: int, field=None) -> ExactMatrix:
    """Sum over terms of coefficient times the ordered product of assigned matrices."""
    field = _infer_field(assignment, field)
    _check_assignment(poly.variables(), assignment, c, field)
    total = ExactMatrix.zeros(field, c)
    eye = ExactMatrix.identity(field, c)
    for word, coeff in poly.items():
        prod = eye
        for i in word:
            prod = prod @ assignment[i]
        total = total + prod * coeff
    return total


def is_solution(system: NCSystem, assignment: Mapping, c: int, field=None) -> bool:
    assignment = system.resolve(assignment)
    field = _infer_field(assignment, field)
    _check_assignment(range(system.num_vars), assignment, c, field)
    return all(
        evaluate(eq.lhs, assignment, c, field) == evaluate(eq.rhs, assignment, c, field)
        for eq in system.equations
    )


def search_solutions(system: NCSystem, domain, c: int, field=None):
    """Yield every assignment drawn from ``domain`` that solves ``system``.

    ``domain`` is either one sequence of candidate matrices shared by all
    variables, or a mapping from variable index (or name) to its candidates.
    """
    if isinstance(domain, Mapping):
        per_var = system.resolve(domain)
        choices = [per_var[i] for i in range(system.num_vars)]
    else:
        domain = list(domain)
        choices = [domain] * system.num_vars
    for combo in itertools.product(*choices):
        assignment = dict(enumerate(combo))
        if is_solution(system, assignment, c, field):
            yield assignment
