"""The three exact fields: Q, GF(p) and GF(p)(l, m).

Elements are ordinary Python objects with arithmetic operators:
``fractions.Fraction`` for Q, :class:`Fp` for prime fields and
:class:`~vonstaudt.exactalg.bipoly.RationalFunction` for the function field.
A :class:`FieldSpec` knows how to build, parse, print and sample them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from ..errors import MalformedInput
from .bipoly import BiPolynomial, RationalFunction

__all__ = ["Fp", "FieldSpec", "QQ", "GF", "FpXY", "parse_field"]


class Fp:
    """Element of the prime field GF(p)."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _val(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other.v
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._val(other)
        return NotImplemented if o is None else Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._val(other)
        return NotImplemented if o is None else Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._val(other)
        return NotImplemented if o is None else Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._val(other)
        return NotImplemented if o is None else Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.p)
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._val(other)
        return NotImplemented if o is None else self.inverse() * o

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return Fp(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        o = self._val(other)
        return False if o is None else (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.p, self.v))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


@dataclass(frozen=True)
class FieldSpec:
    """One of Q, GF(p), GF(p)(l, m); ``kind`` is ``"Q"``, ``"Fp"`` or ``"Fpxy"``."""

    kind: str
    p: int | None = None
    vars: tuple[str, str] | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "Fp", "Fpxy"):
            raise MalformedInput(f"unknown field kind {self.kind!r}")
        if self.kind == "Q":
            if self.p is not None:
                raise MalformedInput("Q takes no characteristic")
            return
        if not isinstance(self.p, int) or self.p < 2 or not gmpy2.is_prime(self.p):
            raise MalformedInput(f"characteristic {self.p!r} is not prime")
        if self.kind == "Fpxy":
            names = tuple(self.vars or ("l", "m"))
            if len(names) != 2 or names[0] == names[1]:
                raise MalformedInput("function field needs two distinct variable names")
            object.__setattr__(self, "vars", names)

    @property
    def characteristic(self):
        return 0 if self.kind == "Q" else self.p

    @property
    def is_finite(self):
        return self.kind == "Fp"

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, value):
        """Coerce an int, string or element into this field."""
        if isinstance(value, str):
            return self.parse(value)
        if self.kind == "Q":
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
        elif self.kind == "Fp":
            if isinstance(value, Fp) and value.p == self.p:
                return value
            if isinstance(value, int):
                return Fp(value, self.p)
        else:
            if isinstance(value, RationalFunction) and value.p == self.p:
                return value
            if isinstance(value, BiPolynomial) and value.p == self.p:
                return RationalFunction(value, _normalized=True)
            if isinstance(value, int):
                return RationalFunction.constant(self.p, value)
        raise MalformedInput(f"cannot coerce {value!r} into {self}")

    def contains(self, x):
        if self.kind == "Q":
            return isinstance(x, Fraction)
        if self.kind == "Fp":
            return isinstance(x, Fp) and x.p == self.p
        return isinstance(x, RationalFunction) and x.p == self.p

    def gen(self, which):
        """The transcendental ``l`` (0) or ``m`` (1) of GF(p)(l, m)."""
        if self.kind != "Fpxy":
            raise ValueError("only GF(p)(l, m) has generators")
        return RationalFunction(BiPolynomial.variable(self.p, which), _normalized=True)

    def parse(self, text):
        try:
            if self.kind == "Q":
                return Fraction(text.strip())
            if self.kind == "Fp":
                t = text.strip()
                if "/" in t:
                    a, b = t.split("/")
                    return Fp(int(a), self.p) / Fp(int(b), self.p)
                return Fp(int(t), self.p)
            return RationalFunction.parse(self.p, text, self.vars)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad {self} element {text!r}: {exc}") from None

    def format(self, x):
        if self.kind == "Q":
            return str(x)
        if self.kind == "Fp":
            return str(x.v)
        return x.format(self.vars)

    def elements(self):
        if self.kind != "Fp":
            raise ValueError(f"{self} is infinite")
        return [Fp(v, self.p) for v in range(self.p)]

    def random(self, rng, bound=5):
        """A random element; Q and GF(p)(l, m) draw small-height samples."""
        if self.kind == "Q":
            return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if self.kind == "Fp":
            return Fp(rng.randrange(self.p), self.p)
        terms = {(rng.randint(0, 2), rng.randint(0, 2)): rng.randrange(self.p) for _ in range(3)}
        return RationalFunction(BiPolynomial(self.p, terms), _normalized=True)

    def to_json(self):
        if self.kind == "Q":
            return {"kind": "Q"}
        if self.kind == "Fp":
            return {"kind": "Fp", "p": self.p}
        return {"kind": "Fpxy", "p": self.p, "vars": list(self.vars)}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "kind" not in data:
            raise MalformedInput("field must be an object with a 'kind'")
        vars_ = data.get("vars")
        return cls(data["kind"], data.get("p"), tuple(vars_) if vars_ else None)

    def __str__(self):
        if self.kind == "Q":
            return "Q"
        if self.kind == "Fp":
            return f"F{self.p}"
        return f"F{self.p}({self.vars[0]},{self.vars[1]})"


QQ = FieldSpec("Q")


def GF(p):
    return FieldSpec("Fp", p)


def FpXY(p, vars=("l", "m")):
    return FieldSpec("Fpxy", p, tuple(vars))


def parse_field(text):
    """Parse ``Q``, ``F5`` or ``F2(l,m)`` as used on the command line."""
    t = text.replace(" ", "")
    if t in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"F(\d+)(?:\((\w+),(\w+)\))?", t)
    if m is None:
        raise MalformedInput(f"unknown field {text!r}")
    p = int(m.group(1))
    if m.group(2):
        return FpXY(p, (m.group(2), m.group(3)))
    return GF(p)
