"""Exact mixed polynomials on C^2 and the tangential Cauchy-Riemann operators.

Functions are finite sums of monomials c * z1^a * z2^b * zb1^c * zb2^d
(zb = conjugate), optionally wrapped in an exponential.  All four first
Wirtinger derivatives are computed term-wise, so the identities tested
elsewhere hold without truncation error; finite differences appear only as
an independent oracle in the test-suite.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .geom import S3Point

Exponents = tuple[int, int, int, int]


class GeneratorParseError(ValueError):
    """Raised when a generator expression does not match the grammar."""


@dataclass(frozen=True)
class MixedPoly:
    """Finite sum of monomials in z1, z2, conj(z1), conj(z2).

    Terms are stored as a sorted tuple of (exponents, coefficient) with
    duplicate exponent tuples merged and zero coefficients dropped, so two
    equal polynomials compare equal.
    """

    terms: tuple[tuple[Exponents, complex], ...]

    def __post_init__(self):
        merged: dict[Exponents, complex] = {}
        for exps, coeff in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != 4 or any(e < 0 for e in exps):
                raise ValueError(f"exponents must be four nonnegative ints, got {exps}")
            merged[exps] = merged.get(exps, 0.0) + complex(coeff)
        clean = tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c: complex) -> "MixedPoly":
        return cls((((0, 0, 0, 0), c),))

    @classmethod
    def monomial(cls, coeff: complex, a: int, b: int, c: int, d: int) -> "MixedPoly":
        return cls((((a, b, c, d), coeff),))

    @classmethod
    def zero(cls) -> "MixedPoly":
        return cls(())

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "MixedPoly") -> "MixedPoly":
        return MixedPoly(self.terms + other.terms)

    def __sub__(self, other: "MixedPoly") -> "MixedPoly":
        return self + (other * -1)

    def __mul__(self, other) -> "MixedPoly":
        if isinstance(other, MixedPoly):
            prod = []
            for e1, c1 in self.terms:
                for e2, c2 in other.terms:
                    prod.append((tuple(i + j for i, j in zip(e1, e2)), c1 * c2))
            return MixedPoly(tuple(prod))
        return MixedPoly(tuple((e, c * complex(other)) for e, c in self.terms))

    __rmul__ = __mul__

    def conj(self) -> "MixedPoly":
        """Complex conjugate: swaps holomorphic/antiholomorphic exponents."""
        return MixedPoly(tuple(((c, d, a, b), coeff.conjugate())
                               for (a, b, c, d), coeff in self.terms))

    def wirtinger(self, which: int) -> "MixedPoly":
        """Term-wise derivative; `which` indexes (d/dz1, d/dz2, d/dzb1, d/dzb2)."""
        out = []
        for exps, coeff in self.terms:
            k = exps[which]
            if k == 0:
                continue
            new = list(exps)
            new[which] = k - 1
            out.append((tuple(new), coeff * k))
        return MixedPoly(tuple(out))

    # -- queries -----------------------------------------------------------

    def is_holomorphic(self) -> bool:
        return all(e[2] == 0 and e[3] == 0 for e, _ in self.terms)

    def is_antiholomorphic(self) -> bool:
        return all(e[0] == 0 and e[1] == 0 for e, _ in self.terms)

    def is_real_valued(self) -> bool:
        """True when the polynomial equals its own conjugate."""
        return self.conj() == self

    # -- evaluation ---------------------------------------------------------

    def eval(self, z1, z2):
        """Value at (z1, z2); accepts scalars or broadcastable arrays."""
        if isinstance(z1, complex | float | int) and isinstance(z2, complex | float | int):
            z1, z2 = complex(z1), complex(z2)
            w1, w2 = z1.conjugate(), z2.conjugate()
            total = 0j
            for (a, b, c, d), coeff in self.terms:
                total += coeff * z1**a * z2**b * w1**c * w2**d
            return total
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        total = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        w1, w2 = np.conj(z1), np.conj(z2)
        for (a, b, c, d), coeff in self.terms:
            total = total + coeff * z1**a * z2**b * w1**c * w2**d
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        names = ("z1", "z2", "zb1", "zb2")
        parts = []
        for exps, coeff in self.terms:
            factors = [f"({coeff})"]
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


@dataclass(frozen=True)
class ExpWrapped:
    """exp(base) for a mixed-polynomial base; nowhere zero by construction."""

    base: MixedPoly

    def conj(self) -> "ExpWrapped":
        return ExpWrapped(self.base.conj())

    def is_holomorphic(self) -> bool:
        return self.base.is_holomorphic()

    def is_antiholomorphic(self) -> bool:
        return self.base.is_antiholomorphic()

    def eval(self, z1, z2):
        v = self.base.eval(z1, z2)
        return _cexp(v) if isinstance(v, complex) else np.exp(v)

    def __str__(self):
        return f"exp({self.base})"


def _cexp(w: complex) -> complex:
    m = math.exp(w.real)
    return complex(m * math.cos(w.imag), m * math.sin(w.imag))


Generator = MixedPoly | ExpWrapped


@dataclass(frozen=True)
class WirtingerJet:
    """Value and the four first Wirtinger derivatives at a point."""

    value: complex
    d_z1: complex
    d_z2: complex
    d_z1bar: complex
    d_z2bar: complex

    def gradient_r4(self) -> np.ndarray:
        """Partials with respect to (x1, y1, x2, y2) as a complex 4-vector.

        d/dx = d/dz + d/dzb and d/dy = i (d/dz - d/dzb).
        """
        return np.array([
            self.d_z1 + self.d_z1bar,
            1j * (self.d_z1 - self.d_z1bar),
            self.d_z2 + self.d_z2bar,
            1j * (self.d_z2 - self.d_z2bar),
        ])


def eval_jet(f: Generator, z1: complex, z2: complex) -> WirtingerJet:
    """Exact value and first Wirtinger derivatives of a generator at (z1, z2)."""
    if isinstance(f, ExpWrapped):
        inner = eval_jet(f.base, z1, z2)
        v = _cexp(inner.value)
        return WirtingerJet(v, v * inner.d_z1, v * inner.d_z2,
                            v * inner.d_z1bar, v * inner.d_z2bar)
    return WirtingerJet(
        f.eval(z1, z2),
        f.wirtinger(0).eval(z1, z2),
        f.wirtinger(1).eval(z1, z2),
        f.wirtinger(2).eval(z1, z2),
        f.wirtinger(3).eval(z1, z2),
    )


def l_operator(f: Generator, p: S3Point) -> complex:
    """Directional derivative along the complex tangent line of the sphere:
    (-x2 + i y2) d/dz1 + (x1 - i y1) d/dz2, i.e. -zb2 d/dz1 + zb1 d/dz2.
    """
    jet = eval_jet(f, p.z1, p.z2)
    return -p.z2.conjugate() * jet.d_z1 + p.z1.conjugate() * jet.d_z2


def cr_defect(f: Generator, p: S3Point) -> complex:
    """Tangential Cauchy-Riemann defect -z2 d/dzb1 f + z1 d/dzb2 f.

    Identically zero (exactly, term-wise) for holomorphic generators.
    """
    jet = eval_jet(f, p.z1, p.z2)
    return -p.z2 * jet.d_z1bar + p.z1 * jet.d_z2bar


# -- convenience atoms ------------------------------------------------------

Z1 = MixedPoly.monomial(1.0, 1, 0, 0, 0)
Z2 = MixedPoly.monomial(1.0, 0, 1, 0, 0)
ZB1 = MixedPoly.monomial(1.0, 0, 0, 1, 0)
ZB2 = MixedPoly.monomial(1.0, 0, 0, 0, 1)
ONE = MixedPoly.constant(1.0)


# -- generator expression parser ---------------------------------------------
#
# Grammar (whitespace ignored):
#   generator := sum | 'exp' '(' sum ')'
#   sum       := ['+'|'-'] term (('+'|'-') term)*
#   term      := factor ('*' factor)*
#   factor    := NUMBER | 'i' | VAR (('^'|'**') INT)?
#   VAR       := 'z1' | 'z2' | 'zb1' | 'zb2'
# NUMBER is an int or float literal, optionally suffixed with 'i' or 'j'
# for an imaginary value.

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?[ij]?)"
    r"|(?P<var>zb?[12])"
    r"|(?P<exp>exp)"
    r"|(?P<imag>[ij])"
    r"|(?P<op>\*\*|[-+*^()]))"
)

_VAR_SLOT = {"z1": 0, "z2": 1, "zb1": 2, "zb2": 3}


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise GeneratorParseError(f"unexpected character at {text[pos:]!r}")
        pos = m.end()
        for kind in ("num", "var", "exp", "imag", "op"):
            val = m.group(kind)
            if val is not None:
                tokens.append((kind, val))
                break
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.pos]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise GeneratorParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def parse_sum(self) -> MixedPoly:
        sign = 1.0
        if self.peek() == ("op", "+"):
            self.take()
        elif self.peek() == ("op", "-"):
            self.take()
            sign = -1.0
        total = self.parse_term() * sign
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            term = self.parse_term()
            total = total + (term if op == "+" else term * -1)
        return total

    def parse_term(self) -> MixedPoly:
        result = self.parse_factor()
        while self.peek() == ("op", "*"):
            self.take()
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> MixedPoly:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            if val[-1] in "ij":
                return MixedPoly.constant(complex(0.0, float(val[:-1])))
            return MixedPoly.constant(float(val))
        if kind == "imag":
            self.take()
            return MixedPoly.constant(1j)
        if kind == "var":
            self.take()
            exp = 1
            if self.peek()[1] in ("^", "**"):
                self.take()
                exp_tok = self.take("num")[1]
                try:
                    exp = int(exp_tok)
                except ValueError:
                    raise GeneratorParseError(f"exponent must be an integer, got {exp_tok!r}")
            exps = [0, 0, 0, 0]
            exps[_VAR_SLOT[val]] = exp
            return MixedPoly.monomial(1.0, *exps)
        raise GeneratorParseError(f"unexpected token {val!r}")


def parse_generator(text: str) -> Generator:
    """Parse a generator expression; `exp(...)` only as the whole generator."""
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    if parser.peek() == ("exp", "exp"):
        parser.take()
        parser.take("op", "(")
        base = parser.parse_sum()
        parser.take("op", ")")
        parser.take("end")
        return ExpWrapped(base)
    poly = parser.parse_sum()
    parser.take("end")
    return poly
