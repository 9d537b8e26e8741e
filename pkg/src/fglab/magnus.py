"""Truncated Magnus expansion over noncommuting variables.

Each generator g maps to 1 + X_g in the ring of integer power series in
noncommuting variables X_g, truncated above a degree cap; inverse letters
map to the closed-form alternating series 1 - X_g + X_g^2 - ...  The
lowest degree appearing in the expansion of w minus 1 is the
lower-central-series weight of w: w lies in the m-th term iff the weight
is at least m (or w is the identity).

Series are sparse: a dict from monomials (tuples of variable indices) to
nonzero integers.  All arithmetic is exact.
"""

from dataclasses import dataclass


class _Identity:
    """Singleton weight of the identity word (in every series term)."""

    def __repr__(self):
        return "IDENTITY"


IDENTITY = _Identity()


@dataclass(frozen=True)
class AtLeast:
    """Weight known only to exceed the truncation cap."""
    bound: int

    def __repr__(self):
        return "AtLeast(%d)" % self.bound


class NoncommSeries:
    """Degree-truncated integer series in noncommuting variables."""

    __slots__ = ("cap", "terms")

    def __init__(self, cap, terms=None):
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self.cap = cap
        self.terms = {m: c for m, c in (terms or {}).items() if c and len(m) <= cap}

    def __eq__(self, other):
        return (isinstance(other, NoncommSeries)
                and self.cap == other.cap and self.terms == other.terms)

    def min_degree(self):
        """Lowest degree with a nonzero term, or None for the zero series."""
        return min((len(m) for m in self.terms), default=None)

    def __repr__(self):
        return "NoncommSeries(cap=%d, %d terms)" % (self.cap, len(self.terms))


def series_one(cap):
    return NoncommSeries(cap, {(): 1})


def series_add(s, t):
    if s.cap != t.cap:
        raise ValueError("cap mismatch")
    terms = dict(s.terms)
    for m, c in t.terms.items():
        terms[m] = terms.get(m, 0) + c
    return NoncommSeries(s.cap, terms)


def series_mul(s, t):
    """Noncommutative product, discarding terms above the cap."""
    if s.cap != t.cap:
        raise ValueError("cap mismatch")
    cap = s.cap
    terms = {}
    for m1, c1 in s.terms.items():
        room = cap - len(m1)
        for m2, c2 in t.terms.items():
            if len(m2) > room:
                continue
            m = m1 + m2
            terms[m] = terms.get(m, 0) + c1 * c2
    return NoncommSeries(cap, terms)


def _letter_series(var, sign, cap):
    if sign > 0:
        return NoncommSeries(cap, {(): 1, (var,): 1})
    terms = {(var,) * k: (-1) ** k for k in range(cap + 1)}
    return NoncommSeries(cap, terms)


def magnus_expand(w, cap):
    """Expansion of a word: product of the letter series, truncated.

    The constant term is always 1 (the letter series are units).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    cache = {}
    result = series_one(cap)
    for c in w.letters:
        key = (abs(c) - 1, 1 if c > 0 else -1)
        if key not in cache:
            cache[key] = _letter_series(*key, cap)
        result = series_mul(result, cache[key])
    return result


def lcs_weight(w, cap):
    """Lower-central-series weight of w, truncated at cap.

    Returns IDENTITY for the empty word, the exact weight when it is at
    most cap, and AtLeast(cap + 1) when the truncated expansion cannot
    tell -- the latter is an honest answer, not an error.
    """
    if not w:
        return IDENTITY
    series = magnus_expand(w, cap)
    degrees = [len(m) for m in series.terms if m]
    if not degrees:
        return AtLeast(cap + 1)
    return min(degrees)


def in_lcs(w, m, cap):
    """Whether w lies in the m-th lower central series term, certified at cap."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if cap < m:
        raise ValueError("cap %d cannot certify membership in term %d" % (cap, m))
    weight = lcs_weight(w, cap)
    if weight is IDENTITY:
        return True
    if isinstance(weight, AtLeast):
        return weight.bound >= m
    return weight >= m
