"""Splitting ideals and numbers, signature sequences, purity, primes, ratios.

Level counts a_e are computed by two routes that must agree: the basis route
(length of the quotient by the splitting ideal, via standard monomials) and
the rank route (rank over F_p of the stacked multiplication-by-generators map
on the box basis below p^e).  The rank route is the performance path; the
basis route is the semantic reference.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import _linalg
from .groebner import (
    Ideal,
    InternalInvariantError,
    ResourceLimitError,
    krull_dimension,
    normal_form,
    quotient_length,
)
from .ideals import bracket_power, colon, ideal_sum
from .poly import PolyRing
from .systems import FGradedSystem, QuotientSystem


class InfeasibleError(RuntimeError):
    """The requested mode cannot be run on this input (e.g. ratio without purity)."""


class MethodDisagreement(InternalInvariantError):
    """The two splitting-number algorithms returned different values."""


def maximal_bracket(ring: PolyRing, e: int) -> Ideal:
    """The ideal of p^e-th powers of all variables."""
    q = ring.p**e
    gens = []
    for i in range(ring.nvars):
        exps = [0] * ring.nvars
        exps[i] = q
        gens.append(ring.monomial(tuple(exps)))
    return Ideal(ring, gens)


def splitting_ideal(sys: FGradedSystem, e: int, strategy: str = "auto") -> Ideal:
    """I_e = (<x_i^{p^e}> : b_e); always contains the bracket of the variables."""
    if e < 1:
        raise ValueError("splitting_ideal needs e >= 1")
    return colon(maximal_bracket(sys.ring, e), sys.b_of(e), strategy=strategy)


def _splitting_number_basis(sys: FGradedSystem, e: int, strategy: str = "auto") -> int:
    length = quotient_length(splitting_ideal(sys, e, strategy))
    if length == math.inf:
        raise InternalInvariantError("splitting ideal is not zero-dimensional")
    return int(length)


def _splitting_number_rank(sys: FGradedSystem, e: int) -> int:
    """Rank over F_p of g -> (g*f_j mod <x_i^q>) on the box basis of exponents < q."""
    ring = sys.ring
    p = ring.p
    n = ring.nvars
    q = p**e
    fgens = [f for f in sys.b_of(e).generators if not f.is_zero()]
    dim = q**n
    strides = [q ** (n - 1 - i) for i in range(n)]
    term_lists = []
    for j, f in enumerate(fgens):
        base = j * dim
        terms = []
        for m, c in f.terms.items():
            if all(u < q for u in m):  # terms past the box never land inside it
                offset = base + sum(u * s for u, s in zip(m, strides))
                bounds = tuple(q - u for u in m)
                terms.append((bounds, offset, c))
        if terms:
            term_lists.append(terms)
    ech = _linalg.Echelon(p)
    idx = 0
    for g in itertools.product(*(range(q) for _ in range(n))):
        items = []
        for terms in term_lists:
            for bounds, offset, c in terms:
                ok = True
                for u, b in zip(g, bounds):
                    if u >= b:
                        ok = False
                        break
                if ok:
                    items.append((offset + idx, c))
        if items:
            vec = _linalg.vector_from_items(p, items)
            if not _linalg.vector_is_zero(p, vec):
                ech.insert(vec)
        idx += 1
    return ech.rank


def splitting_number(sys: FGradedSystem, e: int, method: str = "both") -> int:
    """a_e by the requested route; "both" cross-checks and fails hard on mismatch."""
    if method == "groebner":
        return _splitting_number_basis(sys, e)
    if method == "linear":
        return _splitting_number_rank(sys, e)
    if method == "both":
        via_basis = _splitting_number_basis(sys, e)
        via_rank = _splitting_number_rank(sys, e)
        if via_basis != via_rank:
            raise MethodDisagreement(
                f"a_{e}: basis route gave {via_basis}, rank route gave {via_rank}"
            )
        return via_basis
    raise ValueError(f"unknown method {method!r}")


# -- reports ------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    e: int
    a_e: int
    s_e: Fraction


@dataclass
class SplittingReport:
    """Per-level table plus convergence and semigroup diagnostics."""

    p: int
    variables: Tuple[str, ...]
    system: str
    d: int
    rows: Tuple[Row, ...]
    estimate: Optional[Fraction]
    error_envelope: Optional[Fraction]
    gamma: Tuple[int, ...]
    index: Optional[int]
    f_pure: bool
    witness: Optional[int]
    prime_candidate: Optional[Ideal] = None
    ratio_rows: Optional[Tuple[Tuple[int, Fraction], ...]] = None
    ratio_estimate: Optional[Fraction] = None
    ratio_envelope: Optional[Fraction] = None
    ratio_dimension: Optional[int] = None
    partial: bool = False
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.variables)
        for row in self.rows:
            if not (0 <= row.s_e <= 1):
                raise InternalInvariantError(f"s_{row.e} = {row.s_e} outside [0, 1]")
            if row.a_e > self.p ** (row.e * n):
                raise InternalInvariantError(f"a_{row.e} = {row.a_e} exceeds the free rank")
        got = set(self.gamma)
        for e1 in self.gamma:
            for e2 in self.gamma:
                if e1 + e2 <= max(self.gamma, default=0) and (e1 + e2) not in got:
                    raise InternalInvariantError(
                        f"observed level set not closed under addition at {e1}+{e2}"
                    )


def _fit_tail(rows: Sequence[Row], p: int) -> Tuple[Optional[Fraction], Optional[Fraction]]:
    """Least-squares fit of s_e = L + c*p^-e over the last (up to) three rows.

    Returns (L, |c|/p^emax); the fit is a diagnostic, never an exact claim.
    """
    if not rows:
        return None, None
    tail = rows[-3:]
    emax = tail[-1].e
    if len(tail) == 1:
        return tail[0].s_e, Fraction(0)
    xs = [Fraction(1, p**r.e) for r in tail]
    ss = [r.s_e for r in tail]
    k = len(tail)
    sx = sum(xs)
    sxx = sum(x * x for x in xs)
    sy = sum(ss)
    sxy = sum(x * s for x, s in zip(xs, ss))
    det = k * sxx - sx * sx
    c = (k * sxy - sx * sy) / det
    L = (sy * sxx - sx * sxy) / det
    return L, abs(c) / p**emax


def _default_dimension(sys: FGradedSystem) -> int:
    if isinstance(sys, QuotientSystem):
        return krull_dimension(sys.J)
    # pair and product families measure against the full ambient ring
    return sys.ring.nvars


def signature_sequence(
    sys: FGradedSystem,
    emax: int,
    d: Optional[int] = None,
    method: str = "both",
    on_cap: str = "raise",
) -> SplittingReport:
    """Rows (e, a_e, a_e/p^{ed}) for e = 1..emax with a geometric-tail estimate.

    on_cap="partial" turns a resource cap into a truncated report marked
    partial instead of an exception.
    """
    if emax < 1:
        raise ValueError("signature_sequence needs emax >= 1")
    ring = sys.ring
    p = ring.p
    if d is None:
        d = _default_dimension(sys)
    rows: List[Row] = []
    partial = False
    notes: List[str] = []
    for e in range(1, emax + 1):
        try:
            a_e = splitting_number(sys, e, method=method)
        except ResourceLimitError as err:
            if on_cap != "partial":
                raise
            partial = True
            notes.append(f"resource cap at e={e}: {err}; largest completed e={e - 1}")
            break
        rows.append(Row(e, a_e, Fraction(a_e, p ** (e * d))))
    gamma = tuple(r.e for r in rows if r.a_e)
    index = math.gcd(*gamma) if gamma else None
    estimate, envelope = _fit_tail(rows, p)
    return SplittingReport(
        p=p,
        variables=ring.variables,
        system=sys.describe(),
        d=d,
        rows=tuple(rows),
        estimate=estimate,
        error_envelope=envelope,
        gamma=gamma,
        index=index,
        f_pure=bool(gamma),
        witness=min(gamma) if gamma else None,
        partial=partial,
        notes=tuple(notes),
    )


def is_f_pure(sys: FGradedSystem, emax: int) -> Tuple[bool, Optional[int]]:
    """Purity up to emax: a_e != 0 iff b_e escapes the variable bracket.

    A positive answer is sound with its witness level; a negative answer only
    covers levels up to emax.
    """
    if emax < 1:
        raise ValueError("is_f_pure needs emax >= 1")
    for e in range(1, emax + 1):
        gb = maximal_bracket(sys.ring, e).groebner_basis()
        for g in sys.b_of(e).generators:
            if not normal_form(g, gb).is_zero():
                return True, e
    return False, None


def semigroup_data(report: SplittingReport) -> Tuple[Tuple[int, ...], Optional[int]]:
    """Observed levels with a_e != 0 and their gcd; empty set has no index."""
    if not report.rows:
        raise ValueError("semigroup_data needs at least one row")
    return report.gamma, report.index


def compatibility_check(
    sys: FGradedSystem, C: Ideal, emax: int
) -> Tuple[bool, List[str]]:
    """Verify b_e inside (C^[p^e] : C) for all 1 <= e <= emax.

    The zero ideal is accepted with a note: it corresponds to the full
    quotient domain and there is nothing to check.
    """
    if C.is_zero():
        return True, ["zero ideal: compatibility holds vacuously (full quotient)"]
    if not C.is_proper():
        raise ValueError("compatibility_check needs a proper (or zero) ideal")
    transcript: List[str] = []
    for e in range(1, emax + 1):
        K = colon(bracket_power(C, e), C)
        gb = K.groebner_basis()
        for g in sys.b_of(e).generators:
            if not normal_form(g, gb).is_zero():
                transcript.append(f"e={e}: generator {g} escapes (C^[p^{e}] : C)")
                return False, transcript
        transcript.append(f"e={e}: b_e inside (C^[p^{e}] : C)")
    return True, transcript


def splitting_prime_candidate(
    sys: FGradedSystem,
    emax: int,
    threshold_deg: Optional[int] = None,
) -> Tuple[Optional[Ideal], Dict[str, object]]:
    """Low-degree generators of I_emax, kept only if rigorously compatible.

    Persistent generators of the descending chain I_e stay at bounded degree
    while transient ones grow like p^e, so the cut defaults to degree
    p^emax / 2.  Maximality and primality are not certified; absence is a
    value, with diagnostics.
    """
    diag: Dict[str, object] = {}
    pure, witness = is_f_pure(sys, emax)
    diag["f_pure"] = pure
    if not pure:
        diag["reason"] = f"not F-pure up to emax={emax}"
        return None, diag
    diag["witness"] = witness
    I_top = splitting_ideal(sys, emax)
    gb = I_top.groebner_basis()
    p = sys.ring.p
    kept, dropped = [], []
    for g in gb:
        deg = g.total_degree()
        low = (deg < threshold_deg) if threshold_deg is not None else (2 * deg < p**emax)
        (kept if low else dropped).append(g)
    diag["kept"] = [str(g) for g in kept]
    diag["dropped"] = [str(g) for g in dropped]
    C = Ideal(sys.ring, kept)
    if not C.is_proper():
        diag["reason"] = "no proper low-degree candidate at this level"
        return None, diag
    ok, transcript = compatibility_check(sys, C, emax)
    diag["compatibility"] = transcript
    if not ok:
        diag["reason"] = "candidate failed the compatibility check"
        return None, diag
    return C, diag


def ratio_dimension(sys: FGradedSystem, C: Ideal) -> int:
    """Normalization dimension for ratios: dim of the candidate's quotient locus."""
    if isinstance(sys, QuotientSystem):
        return krull_dimension(ideal_sum(C, sys.J))
    return krull_dimension(C)


def splitting_ratio(
    sys: FGradedSystem,
    emax: int,
    method: str = "both",
    threshold_deg: Optional[int] = None,
    on_cap: str = "raise",
) -> SplittingReport:
    """Signature report extended with ratio rows a_e / p^{e d'}.

    Requires a prime candidate; such a candidate with a_e positive forces
    every observed ratio into (0, 1], and a violation aborts the run because
    it certifies the candidate was not the right normalizing locus.
    """
    candidate, diag = splitting_prime_candidate(sys, emax, threshold_deg)
    if candidate is None:
        raise InfeasibleError(f"no splitting prime candidate: {diag.get('reason')}")
    report = signature_sequence(sys, emax, method=method, on_cap=on_cap)
    d_prime = ratio_dimension(sys, candidate)
    p = report.p
    ratio_rows = tuple(
        (row.e, Fraction(row.a_e, p ** (row.e * d_prime))) for row in report.rows
    )
    for e, r_e in ratio_rows:
        if e in report.gamma and not (0 < r_e <= 1):
            raise InfeasibleError(
                f"r_{e} = {r_e} outside (0, 1]; candidate is not the splitting prime"
            )
    fit_rows = [Row(e, 0, r) for e, r in ratio_rows if e in report.gamma]
    ratio_estimate, ratio_envelope = _fit_tail(fit_rows, p)
    report.prime_candidate = candidate
    report.ratio_rows = ratio_rows
    report.ratio_estimate = ratio_estimate
    report.ratio_envelope = ratio_envelope
    report.ratio_dimension = d_prime
    return report
