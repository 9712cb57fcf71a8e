"""Polynomials and rational functions in two variables over GF(p).

A ``BiPolynomial`` stores a map ``(i, j) -> c`` for the monomial
``c * l^i * m^j``; coefficients are kept in ``range(1, p)``.  Monomials are
compared in graded lexicographic order, ``(i + j, i, j)``, so ``l`` ranks
above ``m`` and the leading coefficient of every canonical denominator is 1.

The gcd treats a polynomial as univariate in ``m`` with coefficients in
GF(p)[l] and runs a primitive pseudo-remainder sequence.
"""

from __future__ import annotations

import re

__all__ = ["BiPolynomial", "RationalFunction", "gcd_bipoly"]


def _grlex(mono):
    return (mono[0] + mono[1], mono[0], mono[1])


# --- univariate helpers over GF(p), coefficient lists low -> high ---------


def _utrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _umul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _utrim(out)


def _usub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _utrim(out)


def _udivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] * inv % p
        q[shift] = f
        for i, y in enumerate(b):
            a[i + shift] = (a[i + shift] - f * y) % p
        _utrim(a)
    return _utrim(q), a


def _umonic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _ugcd(a, b, p):
    while b:
        a, b = b, _udivmod(a, b, p)[1]
    return _umonic(a, p)


# --- bivariate polynomials -------------------------------------------------


class BiPolynomial:
    """Immutable polynomial in ``l, m`` over GF(p)."""

    __slots__ = ("p", "terms", "_hash")

    def __init__(self, p, terms=None, _clean=False):
        self.p = p
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {(int(i), int(j)): c % p for (i, j), c in terms.items() if c % p}
        self.terms = terms
        self._hash = None

    @classmethod
    def constant(cls, p, c):
        c %= p
        return cls(p, {(0, 0): c} if c else {}, _clean=True)

    @classmethod
    def variable(cls, p, which):
        return cls(p, {(1, 0) if which == 0 else (0, 1): 1}, _clean=True)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and (0, 0) in self.terms)

    def constant_value(self):
        return self.terms.get((0, 0), 0)

    @property
    def total_degree(self):
        return max((i + j for i, j in self.terms), default=-1)

    def leading(self):
        mono = max(self.terms, key=_grlex)
        return mono, self.terms[mono]

    def _coerce(self, other):
        if isinstance(other, BiPolynomial):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return BiPolynomial.constant(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = (out.get(mono, 0) + c) % p
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return BiPolynomial(p, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return BiPolynomial(p, {m: p - c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if not self.terms or not other.terms:
            return BiPolynomial(p, {}, _clean=True)
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BiPolynomial(p, {m: c % p for m, c in out.items() if c % p}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = BiPolynomial.constant(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        p = self.p
        c %= p
        if not c:
            return BiPolynomial(p, {}, _clean=True)
        return BiPolynomial(p, {m: v * c % p for m, v in self.terms.items()}, _clean=True)

    def monic(self):
        if not self.terms:
            return self
        _, lc = self.leading()
        return self.scale(pow(lc, -1, self.p))

    def exact_div(self, other):
        """Quotient ``self / other``; raises ArithmeticError if inexact."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p = self.p
        if other.is_constant():
            return self.scale(pow(other.constant_value(), -1, p))
        (bi, bj), bc = other.leading()
        binv = pow(bc, -1, p)
        rem = dict(self.terms)
        quot = {}
        while rem:
            mono = max(rem, key=_grlex)
            c = rem[mono]
            di, dj = mono[0] - bi, mono[1] - bj
            if di < 0 or dj < 0:
                raise ArithmeticError("polynomial division is not exact")
            f = c * binv % p
            quot[(di, dj)] = f
            for (oi, oj), oc in other.terms.items():
                key = (oi + di, oj + dj)
                v = (rem.get(key, 0) - f * oc) % p
                if v:
                    rem[key] = v
                else:
                    rem.pop(key, None)
        return BiPolynomial(p, quot, _clean=True)

    def evaluate(self, x, y):
        p = self.p
        return sum(c * pow(x, i, p) * pow(y, j, p) for (i, j), c in self.terms.items()) % p

    def __eq__(self, other):
        if isinstance(other, int):
            return self == BiPolynomial.constant(self.p, other)
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self.terms.items())))
        return self._hash

    def format(self, names=("l", "m")):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=_grlex, reverse=True):
            c = self.terms[mono]
            factors = []
            for exp, name in zip(mono, names):
                if exp == 1:
                    factors.append(name)
                elif exp > 1:
                    factors.append(f"{name}^{exp}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return "+".join(parts)

    def __repr__(self):
        return f"BiPolynomial({self.format()!r}, p={self.p})"

    # conversion to GF(p)[l][m] for the gcd
    def _by_m(self):
        out = {}
        for (i, j), c in self.terms.items():
            coeffs = out.setdefault(j, [])
            if len(coeffs) <= i:
                coeffs.extend([0] * (i + 1 - len(coeffs)))
            coeffs[i] = c
        return out

    @classmethod
    def _from_by_m(cls, p, by_m):
        terms = {}
        for j, coeffs in by_m.items():
            for i, c in enumerate(coeffs):
                if c:
                    terms[(i, j)] = c
        return cls(p, terms, _clean=True)

    @classmethod
    def parse(cls, p, text, names=("l", "m")):
        """Parse ``coeff*l^i*m^j`` terms joined by ``+``/``-``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        result = cls(p)
        for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
            coeff = 1
            exps = [0, 0]
            for factor in body.split("*"):
                if re.fullmatch(r"\d+", factor):
                    coeff *= int(factor)
                    continue
                m = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?", factor)
                if m is None or m.group(1) not in names:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
                exps[names.index(m.group(1))] += int(m.group(2) or 1)
            if sign == "-":
                coeff = -coeff
            result = result + cls(p, {tuple(exps): coeff})
        if re.sub(r"([+-]?)([^+-]+)", "", s):
            raise ValueError(f"bad polynomial {text!r}")
        return result


def _content(by_m, p):
    g = []
    for coeffs in by_m.values():
        g = _ugcd(g, coeffs, p) if g else _umonic(list(coeffs), p)
        if g == [1]:
            break
    return g


def _divide_content(by_m, cont, p):
    return {j: _udivmod(c, cont, p)[0] for j, c in by_m.items()}


def _prem(f, g, p):
    """Sparse pseudo-remainder of ``f`` by ``g`` in GF(p)[l][m]."""
    dg = max(g)
    lc = g[dg]
    r = {j: list(c) for j, c in f.items()}
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        shift = dr - dg
        out = {}
        for j, c in r.items():
            v = _umul(c, lc, p)
            if v:
                out[j] = v
        for j, c in g.items():
            key = j + shift
            v = _usub(out.get(key, []), _umul(c, lr, p), p)
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        r = out
    return r


def gcd_bipoly(a, b):
    """Greatest common divisor of two bivariate polynomials, monic in grlex.

    >>> p = 5
    >>> l, m = BiPolynomial.variable(p, 0), BiPolynomial.variable(p, 1)
    >>> gcd_bipoly(l * l - m * m, l - m).format()
    'l+4*m'
    """
    if a.p != b.p:
        raise ValueError("characteristic mismatch")
    p = a.p
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return BiPolynomial.constant(p, 1)
    fa, fb = a._by_m(), b._by_m()
    ca, cb = _content(fa, p), _content(fb, p)
    cont = _ugcd(ca, cb, p)
    f, g = _divide_content(fa, ca, p), _divide_content(fb, cb, p)
    if max(f) < max(g):
        f, g = g, f
    while g:
        r = _prem(f, g, p)
        if r:
            r = _divide_content(r, _content(r, p), p)
        f, g = g, r
    if max(f) == 0:
        f = {0: [1]}
    result = BiPolynomial._from_by_m(p, {j: _umul(c, cont, p) for j, c in f.items()})
    return result.monic()


class RationalFunction:
    """Element of GF(p)(l, m) in lowest terms with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _normalized=False):
        if den is None:
            den = BiPolynomial.constant(num.p, 1)
        if not _normalized:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = BiPolynomial.constant(num.p, 1)
            elif not den.is_constant():
                g = gcd_bipoly(num, den)
                if not g.is_constant():
                    num, den = num.exact_div(g), den.exact_div(g)
            _, lc = den.leading()
            if lc != 1:
                inv = pow(lc, -1, num.p)
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def p(self):
        return self.num.p

    @classmethod
    def constant(cls, p, c):
        return cls(BiPolynomial.constant(p, c), _normalized=True)

    def is_polynomial(self):
        return self.den.is_constant()

    def is_zero(self):
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return RationalFunction.constant(self.p, other)
        if isinstance(other, BiPolynomial):
            return RationalFunction(other, _normalized=True)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_polynomial() and other.is_polynomial():
            return RationalFunction(self.num + other.num, _normalized=True)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_polynomial() and other.is_polynomial():
            return RationalFunction(self.num * other.num, _normalized=True)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num**n, self.den**n, _normalized=True)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def evaluate(self, x, y):
        """Value in GF(p) at ``(x, y)``, or None where the denominator vanishes."""
        d = self.den.evaluate(x, y)
        if d == 0:
            return None
        return self.num.evaluate(x, y) * pow(d, -1, self.p) % self.p

    def format(self, names=("l", "m")):
        if self.is_polynomial():
            return self.num.format(names)
        return f"({self.num.format(names)})/({self.den.format(names)})"

    def __repr__(self):
        return f"RationalFunction({self.format()!r}, p={self.p})"

    @classmethod
    def parse(cls, p, text, names=("l", "m")):
        s = text.replace(" ", "")
        depth = 0
        split = None
        for idx, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                if split is not None:
                    raise ValueError(f"bad rational function {text!r}")
                split = idx
        parts = [s] if split is None else [s[:split], s[split + 1 :]]
        polys = []
        for part in parts:
            if part.startswith("(") and part.endswith(")"):
                part = part[1:-1]
            if "(" in part or ")" in part:
                raise ValueError(f"bad rational function {text!r}")
            polys.append(BiPolynomial.parse(p, part, names))
        if len(polys) == 1:
            return cls(polys[0], _normalized=True)
        return cls(polys[0], polys[1])
