"""Incremental row echelon over small prime fields.

Vectors over F_2 are single big-int bitmasks; vectors over F_3 are pairs of
residue masks (bit set in the first mask = coefficient 1, in the second = 2);
other primes fall back to sparse index->coefficient dicts.  Python big-int
bitwise ops keep the F_2/F_3 paths fast at the dimensions this package needs.
"""

from __future__ import annotations

from typing import Dict, Iterable, Tuple


def _f3_add(a, b):
    a1, a2 = a
    b1, b2 = b
    na = a1 | a2
    nb = b1 | b2
    c1 = (b1 ^ (b1 & na)) | (a1 ^ (a1 & nb)) | (a2 & b2)
    c2 = (b2 ^ (b2 & na)) | (a2 ^ (a2 & nb)) | (a1 & b1)
    return c1, c2


def vector_from_items(p: int, items: Iterable[Tuple[int, int]]):
    """Build a vector from (index, coefficient) pairs; indices may repeat."""
    if p == 2:
        m = 0
        for idx, c in items:
            if c % 2:
                m ^= 1 << idx
        return m
    if p == 3:
        v = (0, 0)
        for idx, c in items:
            c %= 3
            if c == 1:
                v = _f3_add(v, (1 << idx, 0))
            elif c == 2:
                v = _f3_add(v, (0, 1 << idx))
        return v
    out: Dict[int, int] = {}
    for idx, c in items:
        v = (out.get(idx, 0) + c) % p
        if v:
            out[idx] = v
        else:
            out.pop(idx, None)
    return out


def vector_is_zero(p: int, vec) -> bool:
    if p == 2:
        return vec == 0
    if p == 3:
        return vec == (0, 0)
    return not vec


class Echelon:
    """Row space accumulator; insert vectors one at a time, rank = pivot count.

    With track=True each insert carries a label, and a vector that reduces to
    zero returns the coefficients expressing it over previously inserted
    (pivot) labels -- the certificate the colon extraction needs.
    """

    def __init__(self, p: int, track: bool = False):
        self.p = p
        self.track = track
        self.pivots: Dict[int, object] = {}  # leading index -> normalized row
        self.coords: Dict[int, Dict[object, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def insert(self, vec, label=None):
        """Reduce vec; return None if it became a new pivot, else its coordinates.

        The returned dict maps labels to coefficients c with
        sum(c * pivot_label_vector) == vec; empty dict for the zero vector.
        """
        p = self.p
        coords: Dict[object, int] = {label: 1} if self.track else {}
        if p == 2:
            while vec:
                lead = vec.bit_length() - 1
                row = self.pivots.get(lead)
                if row is None:
                    self.pivots[lead] = vec
                    if self.track:
                        self.coords[lead] = coords
                    return None
                vec ^= row
                if self.track:
                    coords = self._combine(coords, self.coords[lead], 1)
            return self._dependency(coords, label)
        if p == 3:
            m1, m2 = vec
            while m1 | m2:
                lead = (m1 | m2).bit_length() - 1
                row = self.pivots.get(lead)
                if row is None:
                    if (m2 >> lead) & 1:  # normalize: leading coefficient 1
                        m1, m2 = m2, m1
                        if self.track:
                            coords = {k: (2 * v) % 3 for k, v in coords.items()}
                    self.pivots[lead] = (m1, m2)
                    if self.track:
                        self.coords[lead] = coords
                    return None
                r1, r2 = row
                if (m1 >> lead) & 1:  # subtract row
                    m1, m2 = _f3_add((m1, m2), (r2, r1))
                    lam = 1
                else:  # subtract 2*row
                    m1, m2 = _f3_add((m1, m2), (r1, r2))
                    lam = 2
                if self.track:
                    coords = self._combine(coords, self.coords[lead], lam)
            return self._dependency(coords, label)
        while vec:
            lead = max(vec)
            row = self.pivots.get(lead)
            if row is None:
                inv = pow(vec[lead], -1, p)
                vec = {k: (v * inv) % p for k, v in vec.items()}
                if self.track:
                    coords = {k: (v * inv) % p for k, v in coords.items()}
                self.pivots[lead] = vec
                if self.track:
                    self.coords[lead] = coords
                return None
            lam = vec[lead]
            for k, v in row.items():
                nv = (vec.get(k, 0) - lam * v) % p
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            if self.track:
                coords = self._combine(coords, self.coords[lead], lam)
        return self._dependency(coords, label)

    def _combine(self, coords: Dict, row_coords: Dict, lam: int) -> Dict:
        # coords := coords - lam * row_coords
        p = self.p
        out = dict(coords)
        for k, v in row_coords.items():
            nv = (out.get(k, 0) - lam * v) % p
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return out

    def _dependency(self, coords: Dict, label) -> Dict:
        if not self.track:
            return {}
        # report the combination over *previous* labels equal to the inserted vector
        out = {k: (-v) % self.p for k, v in coords.items() if k != label}
        return out


def rank_of_columns(p: int, columns: Iterable[Iterable[Tuple[int, int]]]) -> int:
    """Rank over F_p of the span of the given sparse columns."""
    ech = Echelon(p)
    for col in columns:
        vec = vector_from_items(p, col)
        if not vector_is_zero(p, vec):
            ech.insert(vec)
    return ech.rank
