"""Buchberger engine over F_p: reduced bases, normal forms, lengths, dimension."""

from __future__ import annotations

import itertools
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import (
    DEGREVLEX,
    Exponents,
    PolyRing,
    Polynomial,
    TermOrder,
    monomial_div,
    monomial_divides,
    monomial_gcd,
    monomial_lcm,
    monomial_mul,
)

DEFAULT_MAX_PAIRS = 40000
DEFAULT_MAX_BASIS = 300

INFINITE = math.inf


class ResourceLimitError(RuntimeError):
    """A configured pair/basis cap was hit; distinct from any mathematical failure."""

    def __init__(self, message: str, pairs_done: int = 0, basis_size: int = 0):
        super().__init__(message)
        self.pairs_done = pairs_done
        self.basis_size = basis_size


class InternalInvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class GroebnerBasis:
    """Reduced Groebner basis: monic, mutually reduced, sorted by leading monomial."""

    __slots__ = ("ring", "order", "elements", "reduced", "_lead")

    def __init__(self, ring: PolyRing, order: TermOrder, elements: Sequence[Polynomial], reduced: bool = True):
        self.ring = ring
        self.order = order
        self.elements = tuple(elements)
        self.reduced = reduced
        # (leading monomial, inverse leading coeff, poly) triples for division
        self._lead = tuple(
            (g.leading_term(order)[0], ring.field.inv(g.leading_term(order)[1]), g)
            for g in self.elements
        )

    def leading_monomials(self) -> Tuple[Exponents, ...]:
        return tuple(lm for lm, _, _ in self._lead)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and self.order == other.order
            and self.elements == other.elements
        )

    def __repr__(self):
        return "GroebnerBasis[" + "; ".join(str(g) for g in self.elements) + "]"


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of f on division by G; no term divisible by a leading monomial."""
    if f.ring != G.ring:
        raise ValueError("normal_form: ring mismatch")
    return _reduce(f, G._lead, G.order)


def _reduce(f: Polynomial, lead: Sequence[Tuple[Exponents, int, Polynomial]], order: TermOrder) -> Polynomial:
    ring = f.ring
    p = ring.p
    work = dict(f.terms)
    out: Dict[Exponents, int] = {}
    key = order.key
    while work:
        m = max(work, key=key)
        c = work[m]
        for lm, lcinv, g in lead:
            if monomial_divides(lm, m):
                shift = monomial_div(m, lm)
                factor = c * lcinv % p
                for gm, gc in g.terms.items():
                    t = monomial_mul(gm, shift)
                    v = (work.get(t, 0) - factor * gc) % p
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            out[m] = c
            del work[m]
    return Polynomial(ring, out, reduce=False)


def s_polynomial(f: Polynomial, g: Polynomial, order: TermOrder) -> Polynomial:
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = monomial_lcm(mf, mg)
    inv_f = f.ring.field.inv(cf)
    inv_g = g.ring.field.inv(cg)
    return f.monomial_shift(monomial_div(lcm, mf), inv_f) - g.monomial_shift(
        monomial_div(lcm, mg), inv_g
    )


def _minimalize_monomials(monos: Iterable[Exponents]) -> List[Exponents]:
    out: List[Exponents] = []
    for m in sorted(set(monos), key=lambda t: (sum(t), t)):
        if not any(monomial_divides(o, m) for o in out):
            out.append(m)
    return out


def buchberger(
    gens: Sequence[Polynomial],
    order: Optional[TermOrder] = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_basis: int = DEFAULT_MAX_BASIS,
) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Normal selection strategy (smallest pair lcm in the order), the coprime
    and chain pair criteria, full-tail reductions.  Deterministic for a fixed
    input.  Caps raise ResourceLimitError rather than truncating silently.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        ring = None
        raise ValueError("buchberger needs at least one non-zero generator; use GroebnerBasis(ring, order, []) for the zero ideal")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    order = order or ring.order

    if all(g.is_monomial() for g in gens):
        # monomial ideals are their own reduced basis after minimalization
        monos = _minimalize_monomials(m for g in gens for m in g.terms)
        elems = [ring.monomial(m) for m in monos]
        elems.sort(key=lambda g: order.key(g.leading_term(order)[0]))
        return GroebnerBasis(ring, order, elems)

    basis: List[Polynomial] = []
    seen = set()
    for g in sorted(gens, key=lambda h: sorted(h.terms.items())):
        g = g.monic(order)
        marker = frozenset(g.terms.items())
        if marker not in seen:
            seen.add(marker)
            basis.append(g)

    lms = [g.leading_term(order)[0] for g in basis]
    pending = {(i, j) for j in range(len(basis)) for i in range(j)}
    pairs_done = 0

    def lcm_of(i: int, j: int) -> Exponents:
        return monomial_lcm(lms[i], lms[j])

    while pending:
        i, j = min(pending, key=lambda ij: (order.key(lcm_of(*ij)), ij))
        pending.discard((i, j))
        pairs_done += 1
        if pairs_done > max_pairs:
            raise ResourceLimitError(
                f"pair cap {max_pairs} exceeded", pairs_done, len(basis)
            )
        lcm = lcm_of(i, j)
        if not any(monomial_gcd(lms[i], lms[j])):
            continue  # coprime leading monomials
        chain = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if (
                monomial_divides(lms[k], lcm)
                and (min(i, k), max(i, k)) not in pending
                and (min(j, k), max(j, k)) not in pending
            ):
                chain = True
                break
        if chain:
            continue
        lead = [(lms[k], ring.field.inv(basis[k].leading_term(order)[1]), basis[k]) for k in range(len(basis))]
        h = _reduce(s_polynomial(basis[i], basis[j], order), lead, order)
        if h.is_zero():
            continue
        if len(basis) + 1 > max_basis:
            raise ResourceLimitError(
                f"basis cap {max_basis} exceeded", pairs_done, len(basis) + 1
            )
        h = h.monic(order)
        basis.append(h)
        lms.append(h.leading_term(order)[0])
        new = len(basis) - 1
        pending.update((k, new) for k in range(new))

    return _reduce_basis(ring, order, basis)


def _reduce_basis(ring: PolyRing, order: TermOrder, basis: List[Polynomial]) -> GroebnerBasis:
    # minimal generators: drop elements whose lead is divisible by another lead
    lms = [g.leading_term(order)[0] for g in basis]
    keep = []
    for idx, g in enumerate(basis):
        lm = lms[idx]
        redundant = any(
            k != idx and monomial_divides(lms[k], lm) and (lms[k] != lm or k < idx)
            for k in range(len(basis))
        )
        if not redundant:
            keep.append(g)
    # inter-reduce tails until stable
    changed = True
    while changed:
        changed = False
        for idx in range(len(keep)):
            others = keep[:idx] + keep[idx + 1 :]
            lead = [
                (h.leading_term(order)[0], ring.field.inv(h.leading_term(order)[1]), h)
                for h in others
            ]
            r = _reduce(keep[idx], lead, order).monic(order)
            if r != keep[idx]:
                keep[idx] = r
                changed = True
    keep.sort(key=lambda g: order.key(g.leading_term(order)[0]))
    return GroebnerBasis(ring, order, keep)


class Ideal:
    """Finite generator list with a lazily cached reduced Groebner basis per order."""

    __slots__ = ("ring", "generators", "_gb_cache")

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial]):
        gens = tuple(g for g in generators if not g.is_zero())
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator outside the ideal's ring")
        self.ring = ring
        self.generators = gens
        self._gb_cache: Dict[TermOrder, GroebnerBasis] = {}

    def is_zero(self) -> bool:
        return not self.generators

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def groebner_basis(self, order: Optional[TermOrder] = None) -> GroebnerBasis:
        order = order or self.ring.order
        gb = self._gb_cache.get(order)
        if gb is None:
            if self.is_zero():
                gb = GroebnerBasis(self.ring, order, [])
            else:
                gb = buchberger(self.generators, order)
            self._gb_cache[order] = gb
        return gb

    def set_groebner_basis(self, gb: GroebnerBasis):
        """Install a basis computed elsewhere (write-once per order)."""
        self._gb_cache.setdefault(gb.order, gb)

    def contains(self, f: Polynomial) -> bool:
        return ideal_membership(f, self)

    def is_proper(self) -> bool:
        gb = self.groebner_basis()
        return not any(g.is_constant() and not g.is_zero() for g in gb)

    def __repr__(self):
        return "Ideal<" + ", ".join(str(g) for g in self.generators) + ">"


def ideal_membership(f: Polynomial, I: Ideal) -> bool:
    """True iff f reduces to zero against the reduced basis of I."""
    if f.ring != I.ring:
        raise ValueError("membership: ring mismatch")
    if f.is_zero():
        return True
    return normal_form(f, I.groebner_basis()).is_zero()


def quotient_length(I: Ideal):
    """Number of standard monomials of S/I, or INFINITE.

    Standard monomials are those not divisible by any leading monomial of the
    reduced basis; when finite they live in the box cut out by the minimal
    pure-power leads.
    """
    gb = I.groebner_basis()
    lms = gb.leading_monomials()
    n = I.ring.nvars
    box = []
    for i in range(n):
        pure = [m[i] for m in lms if sum(m) == m[i]]
        if not pure:
            return INFINITE
        box.append(min(pure))
    count = 0
    for exps in itertools.product(*(range(b) for b in box)):
        if not any(monomial_divides(lm, exps) for lm in lms):
            count += 1
    return count


def krull_dimension(I: Ideal) -> int:
    """Dimension of S/I: the largest variable set meeting no leading support.

    Combinatorial form: max |U| such that no leading monomial of the reduced
    basis is supported inside U.  Rejects the unit ideal.
    """
    gb = I.groebner_basis()
    if any(g.is_constant() and not g.is_zero() for g in gb):
        raise ValueError("krull_dimension: the unit ideal has no dimension")
    n = I.ring.nvars
    supports = [frozenset(i for i, e in enumerate(lm) if e) for lm in gb.leading_monomials()]
    for size in range(n, -1, -1):
        for U in itertools.combinations(range(n), size):
            Uset = set(U)
            if not any(s <= Uset for s in supports):
                return size
    raise InternalInvariantError("no independent variable subset found")
