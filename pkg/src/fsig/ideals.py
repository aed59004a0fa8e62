"""Ideal constructions: bracket powers, powers, products, intersections, colons.

Colon ideals drive everything downstream, so they get several routes:

* both sides monomial        -> combinatorial colon/intersection
* principal by principal     -> one exact division when the divisor divides
* zero-dimensional monomial  -> order-driven linear elimination over the
  finite standard basis, yielding the reduced Groebner basis directly
* anything else              -> auxiliary-variable elimination (the reference
  path, also available on demand via strategy="elimination")
"""

from __future__ import annotations

import heapq
import itertools
from typing import Dict, List, Optional, Sequence, Tuple

from . import _linalg
from .groebner import (
    GroebnerBasis,
    Ideal,
    InternalInvariantError,
    buchberger,
    ideal_membership,
    normal_form,
)
from .poly import (
    Exponents,
    PolyRing,
    Polynomial,
    TermOrder,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)


class ExactDivisionError(InternalInvariantError):
    """A division that must be exact left a remainder."""


def bracket_power(I: Ideal, e: int) -> Ideal:
    """Ideal of the p^e-th powers of the generators; generator independent."""
    if e < 1:
        raise ValueError("bracket_power needs e >= 1")
    return Ideal(I.ring, [g.frobenius(e) for g in I.generators])


def ideal_power(I: Ideal, n: int) -> Ideal:
    """Ordinary n-th power; n = 0 gives the unit ideal."""
    if n < 0:
        raise ValueError("ideal_power needs n >= 0")
    ring = I.ring
    if n == 0:
        return Ideal(ring, [ring.one()])
    gens = I.generators
    if not gens:
        return Ideal(ring, [])
    if len(gens) == 1:
        return Ideal(ring, [gens[0] ** n])
    if gens[0].is_monomial() and all(g.is_monomial() for g in gens):
        out = []
        for combo in itertools.combinations_with_replacement(range(len(gens)), n):
            exps = (0,) * ring.nvars
            for idx in combo:
                exps = monomial_mul(exps, next(iter(gens[idx].terms)))
            out.append(ring.monomial(exps))
        return Ideal(ring, out)
    out = []
    for combo in itertools.combinations_with_replacement(gens, n):
        f = ring.one()
        for g in combo:
            f = f * g
        out.append(f)
    return Ideal(ring, out)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _check_same_ring(I, J)
    return Ideal(I.ring, [f * g for f in I.generators for g in J.generators])


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _check_same_ring(I, J)
    return Ideal(I.ring, I.generators + J.generators)


def ideal_equals(I: Ideal, J: Ideal) -> bool:
    """True iff the reduced bases (same order) coincide."""
    _check_same_ring(I, J)
    return I.groebner_basis().elements == J.groebner_basis().elements


def _check_same_ring(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")


def _contains_unit(I: Ideal) -> bool:
    return any(g.is_constant() and not g.is_zero() for g in I.generators) or (
        not I.is_zero() and not I.is_proper()
    )


# -- intersection -------------------------------------------------------

def intersection(I: Ideal, J: Ideal) -> Ideal:
    """I cap J; monomial inputs are intersected by pairwise lcms."""
    _check_same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    if _contains_unit(I):
        return J
    if _contains_unit(J):
        return I
    if I.is_monomial() and J.is_monomial():
        gens = [
            ring.monomial(monomial_lcm(a, b))
            for a in _minimal_monomials(I)
            for b in _minimal_monomials(J)
        ]
        return Ideal(ring, gens)
    return _intersection_elimination(I, J)


def _minimal_monomials(I: Ideal) -> List[Exponents]:
    monos = sorted({next(iter(g.terms)) for g in I.generators}, key=lambda t: (sum(t), t))
    out: List[Exponents] = []
    for m in monos:
        if not any(monomial_divides(o, m) for o in out):
            out.append(m)
    return out


def _intersection_elimination(I: Ideal, J: Ideal) -> Ideal:
    # t*I + (1-t)*J in an extended ring, eliminate t with a block order
    ring = I.ring
    ext, _ = ring.extended()
    t = ext.variable(ext.variables[0])
    one = ext.one()

    def lift(f: Polynomial) -> Polynomial:
        return Polynomial(ext, {(0,) + m: c for m, c in f.terms.items()}, reduce=False)

    gens = [t * lift(g) for g in I.generators]
    gens += [(one - t) * lift(g) for g in J.generators]
    gb = buchberger(gens, ext.order)
    out = []
    for g in gb:
        if all(m[0] == 0 for m in g.terms):
            out.append(Polynomial(ring, {m[1:]: c for m, c in g.terms.items()}, reduce=False))
    return Ideal(ring, out)


# -- exact division -----------------------------------------------------

def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f exactly; a remainder is an internal failure."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    order = ring.order
    lm_g, lc_g = g.leading_term(order)
    inv = ring.field.inv(lc_g)
    work = dict(f.terms)
    quo: Dict[Exponents, int] = {}
    p = ring.p
    while work:
        m = max(work, key=order.key)
        c = work[m]
        if not monomial_divides(lm_g, m):
            raise ExactDivisionError(f"{g} does not divide {f}")
        shift = monomial_div(m, lm_g)
        factor = c * inv % p
        quo[shift] = factor
        for gm, gc in g.terms.items():
            tmono = monomial_mul(gm, shift)
            v = (work.get(tmono, 0) - factor * gc) % p
            if v:
                work[tmono] = v
            else:
                work.pop(tmono, None)
    return Polynomial(ring, quo, reduce=False)


def _try_exact_divide(f: Polynomial, g: Polynomial) -> Optional[Polynomial]:
    try:
        return exact_divide(f, g)
    except ExactDivisionError:
        return None


# -- colon --------------------------------------------------------------

def colon(I: Ideal, J: Ideal, strategy: str = "auto") -> Ideal:
    """(I : J) = all g with g*J inside I.

    strategy "auto" picks the cheapest sound route; "elimination" forces the
    reference construction (I : f) = (1/f)(I cap <f>) intersected over the
    generators of J.
    """
    _check_same_ring(I, J)
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    if strategy not in ("auto", "elimination"):
        raise ValueError(f"unknown colon strategy {strategy!r}")
    ring = I.ring
    if _contains_unit(J):
        return I
    if I.is_zero():
        return Ideal(ring, [])
    if strategy == "auto":
        if I.is_monomial() and J.is_monomial():
            return _colon_monomial(I, J)
        if len(I.generators) == 1 and len(J.generators) == 1:
            q = _try_exact_divide(I.generators[0], J.generators[0])
            if q is not None:
                return Ideal(ring, [q])
        if I.is_monomial() and _is_zero_dimensional_monomial(I):
            return _colon_zero_dim(I, J)
    return _colon_elimination(I, J)


def _colon_monomial(I: Ideal, J: Ideal) -> Ideal:
    ring = I.ring
    result: Optional[Ideal] = None
    for u in _minimal_monomials(J):
        gens = [
            ring.monomial(tuple(max(0, a - b) for a, b in zip(m, u)))
            for m in _minimal_monomials(I)
        ]
        Q = Ideal(ring, gens)
        result = Q if result is None else intersection(result, Q)
    return result


def _colon_elimination(I: Ideal, J: Ideal) -> Ideal:
    ring = I.ring
    result: Optional[Ideal] = None
    for f in J.generators:
        K = intersection(I, Ideal(ring, [f]))
        gens = [exact_divide(g, f) for g in K.groebner_basis()]
        Q = Ideal(ring, gens)
        result = Q if result is None else intersection(result, Q)
    return result


def _is_zero_dimensional_monomial(I: Ideal) -> bool:
    mins = _minimal_monomials(I)
    n = I.ring.nvars
    for i in range(n):
        if not any(sum(m) == m[i] and m[i] > 0 for m in mins):
            return False
    return True


def _colon_zero_dim(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) for zero-dimensional monomial I by linear elimination.

    Walks candidate monomials in increasing term order; a candidate m whose
    multiplication vector (m*f_j reduced against I, stacked over j) depends
    linearly on those of the smaller standard monomials contributes the
    reduced-basis element m - sum(c_b * b).  Terminates because I is
    zero-dimensional, and the emitted elements form the reduced basis of the
    colon because their tails only involve its standard monomials.
    """
    ring = I.ring
    order = ring.order
    p = ring.p
    n = ring.nvars
    mins = _minimal_monomials(I)

    std = _standard_monomials(mins, n)
    index = {m: i for i, m in enumerate(std)}
    dim = len(std)
    fgens = [f for f in J.generators if not f.is_zero()]

    def mult_vector(m: Exponents) -> List[Tuple[int, int]]:
        items = []
        for j, f in enumerate(fgens):
            base = j * dim
            for fm, fc in f.terms.items():
                target = monomial_mul(m, fm)
                if not any(monomial_divides(g, target) for g in mins):
                    items.append((base + index[target], fc))
        return items

    ech = _linalg.Echelon(p, track=True)
    heap: List[Tuple[object, Exponents]] = []
    seen = set()
    one = (0,) * n
    heapq.heappush(heap, (order.key(one), one))
    seen.add(one)
    lead_found: List[Exponents] = []
    gb_elems: List[Polynomial] = []

    while heap:
        _, m = heapq.heappop(heap)
        if any(monomial_divides(lm, m) for lm in lead_found):
            continue
        vec = _linalg.vector_from_items(p, mult_vector(m))
        dep = ech.insert(vec, label=m)
        if dep is None:
            for i in range(n):
                cand = tuple(m[k] + (1 if k == i else 0) for k in range(n))
                if cand not in seen:
                    seen.add(cand)
                    heapq.heappush(heap, (order.key(cand), cand))
        else:
            lead_found.append(m)
            terms = {m: 1}
            for b, c in dep.items():
                terms[b] = (-c) % p
            gb_elems.append(Polynomial(ring, terms, reduce=False))

    gb_elems.sort(key=lambda g: order.key(g.leading_term(order)[0]))
    gb = GroebnerBasis(ring, order, gb_elems)
    result = Ideal(ring, gb_elems)
    result.set_groebner_basis(gb)
    return result


def _standard_monomials(mins: Sequence[Exponents], n: int) -> List[Exponents]:
    box = []
    for i in range(n):
        pure = [m[i] for m in mins if sum(m) == m[i]]
        box.append(min(pure))
    out = []
    for exps in itertools.product(*(range(b) for b in box)):
        if not any(monomial_divides(m, exps) for m in mins):
            out.append(exps)
    return out
