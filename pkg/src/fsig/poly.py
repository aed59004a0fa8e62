"""Exact arithmetic layer: prime fields, monomials, term orders, sparse polynomials.

A polynomial is a dict mapping exponent tuples to coefficients in [1, p-1].
The zero polynomial has an empty term dict.  All values are immutable after
construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

Exponents = Tuple[int, ...]


class RingMismatchError(ValueError):
    """Operands belong to different polynomial rings."""


class PolyParseError(ValueError):
    """Polynomial text that does not match the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.message = message
        self.position = position


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin; exact for every modulus that fits a machine word."""
    if p < 2:
        return False
    for q in _MR_BASES:
        if p % q == 0:
            return p == q
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field Z/pZ with canonical representatives in [0, p)."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def reduce(self, a: int) -> int:
        return a % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in prime field")
        return pow(a, -1, self.p)


@dataclass(frozen=True)
class TermOrder:
    """Total multiplicative well-order on monomials.

    kind is "degrevlex", "lex" or "block".  A block order compares the first
    block_size exponents degrevlex-first and falls through to the inner
    order, which makes it an elimination order for the leading variables.
    """

    kind: str = "degrevlex"
    block_size: int = 0
    inner: Optional["TermOrder"] = None

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "block" and (self.block_size < 1 or self.inner is None):
            raise ValueError("block order needs block_size >= 1 and an inner order")

    def key(self, exps: Exponents):
        """Sort key; key(a) > key(b) iff monomial a > monomial b."""
        if self.kind == "lex":
            return exps
        if self.kind == "degrevlex":
            return (sum(exps), tuple(-e for e in reversed(exps)))
        head = exps[: self.block_size]
        tail = exps[self.block_size :]
        return ((sum(head), tuple(-e for e in reversed(head))), self.inner.key(tail))

    def greater(self, a: Exponents, b: Exponents) -> bool:
        return self.key(a) > self.key(b)


DEGREVLEX = TermOrder("degrevlex")
LEX = TermOrder("lex")


# -- monomial helpers (exponent tuples) --------------------------------------

def monomial_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Exponents, b: Exponents) -> Exponents:
    if not monomial_divides(b, a):
        raise ValueError(f"{b} does not divide {a}")
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_gcd(a: Exponents, b: Exponents) -> Exponents:
    return tuple(min(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class PolyRing:
    """Ring handle: modulus, ordered variable names, default term order.

    Variable order is declaration order; all iteration that reaches output is
    sorted, so runs are reproducible.
    """

    field: PrimeField
    variables: Tuple[str, ...]
    order: TermOrder = DEGREVLEX

    @staticmethod
    def make(p: int, variables, order: TermOrder = DEGREVLEX) -> "PolyRing":
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        if not variables:
            raise ValueError("need at least one variable")
        return PolyRing(PrimeField(p), variables, order)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def variable(self, name: str) -> "Polynomial":
        idx = self.variables.index(name)
        exps = [0] * self.nvars
        exps[idx] = 1
        return Polynomial(self, {tuple(exps): 1})

    def monomial(self, exps, coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps}")
        return Polynomial(self, {exps: coeff})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def extended(self) -> Tuple["PolyRing", str]:
        """Ring with one fresh variable in front under an elimination order."""
        name = "t"
        k = 0
        while name in self.variables:
            name = f"t{k}"
            k += 1
        order = TermOrder("block", 1, self.order)
        return PolyRing(self.field, (name,) + self.variables, order), name


class Polynomial:
    """Sparse multivariate polynomial over a prime field.

    Stored zero-coefficient-free; term iteration for printing is sorted by
    the ring's term order so canonical text is unique.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Exponents, int], reduce: bool = True):
        if reduce:
            p = ring.p
            terms = {m: c % p for m, c in terms.items() if c % p}
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_term(self, order: Optional[TermOrder] = None) -> Tuple[Exponents, int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or self.ring.order
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def sorted_terms(self, order: Optional[TermOrder] = None):
        order = order or self.ring.order
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic -----------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"mixed rings: {self.ring.variables} mod {self.ring.p} vs "
                f"{other.ring.variables} mod {other.ring.p}"
            )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, reduce=False)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()}, reduce=False)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        p = self.ring.p
        out: Dict[Exponents, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                v = (out.get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out, reduce=False)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: (v * c) % p for m, v in self.terms.items()}, reduce=False)

    def monic(self, order: Optional[TermOrder] = None) -> "Polynomial":
        if self.is_zero():
            return self
        _, lc = self.leading_term(order)
        return self.scale(self.ring.field.inv(lc))

    def monomial_shift(self, exps: Exponents, coeff: int = 1) -> "Polynomial":
        """self * coeff*x^exps, cheaper than building the factor first."""
        p = self.ring.p
        coeff %= p
        if coeff == 0:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {monomial_mul(m, exps): (c * coeff) % p for m, c in self.terms.items()},
            reduce=False,
        )

    def frobenius(self, e: int) -> "Polynomial":
        """self**(p**e), via exponent scaling: coefficients in F_p are fixed."""
        if e < 1:
            raise ValueError("frobenius power needs e >= 1")
        q = self.ring.p ** e
        return Polynomial(
            self.ring, {tuple(u * q for u in m): c for m, c in self.terms.items()}, reduce=False
        )

    # -- equality / printing --------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        names = self.ring.variables
        for m, c in self.sorted_terms():
            factors = []
            for v, e in zip(names, m):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(str(c) + "*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<{self} over F_{self.ring.p}[{','.join(self.ring.variables)}]>"


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    """Exact add/sub/mul; results are canonical (no stored zero terms)."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def frobenius_power(f: Polynomial, e: int) -> Polynomial:
    return f.frobenius(e)


# -- parsing ------------------------------------------------------------

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse a signed sum of terms; term = coefficient? ("*"? var ("^" int)?)+.

    Integer coefficients are reduced mod p; unknown identifiers and malformed
    syntax raise PolyParseError with the offending offset.
    """
    n = len(text)
    pos = 0
    var_index = {v: i for i, v in enumerate(ring.variables)}
    terms: Dict[Exponents, int] = {}
    p = ring.p

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos] in " \t":
            pos += 1

    def parse_int() -> int:
        nonlocal pos
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise PolyParseError("expected an integer", start)
        return int(text[start:pos])

    def parse_ident() -> str:
        nonlocal pos
        start = pos
        pos += 1
        while pos < n and text[pos] in _IDENT_CONT:
            pos += 1
        return text[start:pos]

    skip_ws()
    if pos == n:
        raise PolyParseError("empty polynomial", pos)
    sign = 1
    if text[pos] in "+-":
        sign = -1 if text[pos] == "-" else 1
        pos += 1

    while True:
        skip_ws()
        coeff = None
        exps = [0] * ring.nvars
        if pos < n and text[pos].isdigit():
            coeff = parse_int()
        saw_factor = False
        while True:
            skip_ws()
            mark = pos
            if pos < n and text[pos] == "*":
                pos += 1
                skip_ws()
                if pos >= n or text[pos] not in _IDENT_START:
                    raise PolyParseError("expected a variable after '*'", pos)
            if pos < n and text[pos] in _IDENT_START:
                start = pos
                name = parse_ident()
                if name not in var_index:
                    raise PolyParseError(f"unknown variable {name!r}", start)
                exp = 1
                if pos < n and text[pos] == "^":
                    pos += 1
                    exp = parse_int()
                exps[var_index[name]] += exp
                saw_factor = True
            else:
                pos = mark
                break
        if coeff is None and not saw_factor:
            raise PolyParseError("expected a term", pos)
        c = (coeff if coeff is not None else 1) * sign % p
        m = tuple(exps)
        v = (terms.get(m, 0) + c) % p
        if v:
            terms[m] = v
        else:
            terms.pop(m, None)

        skip_ws()
        if pos == n:
            break
        if text[pos] == "+":
            sign = 1
        elif text[pos] == "-":
            sign = -1
        else:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        pos += 1

    return Polynomial(ring, terms, reduce=False)
