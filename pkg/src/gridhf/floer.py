"""Generalized Floer complexes A^-(G, s) of a grid with free markings.

Generators are matchings column -> row (tuples).  The differential counts
empty rectangles; the U-exponent of component i at Alexander level s_i
switches between X-counts and O-counts via

  E^i_s(r) = max(s - A_i(x), 0) - max(s - A_i(y), 0) + sum_{X in comp i} X(r)
           = max(A_i(x) - s, 0) - max(A_i(y) - s, 0) + sum_{O in comp i} O(r)

with E at -infinity the X-count and at +infinity the O-count.  Alexander
levels are passed doubled; use PLUS_INF / MINUS_INF for the ends.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from .gradings import GradingCalculator
from .homalg import GradedComplexF2U

PLUS_INF = "+inf"
MINUS_INF = "-inf"


class NegativeExponent(ValueError):
    pass


class InfiniteExponent(ValueError):
    pass


def cyc_range(a, b, n):
    """Cyclic half-open interval [a, b) mod n; empty iff a == b."""
    out = []
    c = a
    while c != b:
        out.append(c)
        c = (c + 1) % n
    return out


class Rectangle(NamedTuple):
    """Rectangle with corners LL=(c1,r1), UR=(c2,r2) in x and LR, UL in y;
    occupies squares cyc[c1,c2) x cyc[r1,r2)."""
    c1: int
    r1: int
    c2: int
    r2: int
    n: int

    @property
    def cols(self):
        return cyc_range(self.c1, self.c2, self.n)

    @property
    def rows(self):
        return cyc_range(self.r1, self.r2, self.n)

    def contains_square(self, c, r):
        return c in self.cols and r in self.rows

    def squares(self):
        return [(c, r) for c in self.cols for r in self.rows]


def rectangles(x, y):
    """The (at most two) rectangles from x to y; empty unless x and y
    differ in exactly two columns."""
    n = len(x)
    diff = [c for c in range(n) if x[c] != y[c]]
    if len(diff) != 2:
        return []
    c1, c2 = diff
    if y[c1] != x[c2] or y[c2] != x[c1]:
        return []
    out = []
    for (a, b) in ((c1, c2), (c2, c1)):
        # LL = (a, x[a]), UR = (b, x[b]): need the row span [x[a], x[b])
        out.append(Rectangle(a, x[a], b, x[b], n))
    return out


def is_empty_rect(rect, x):
    cols = set(rect.cols)
    rows = set(rect.rows)
    cols.discard(rect.c1)
    cols.discard(rect.c2)
    for c in cols:
        if x[c] in rows and x[c] != rect.r1 and x[c] != rect.r2:
            return False
    return True


def empty_rectangles(x, y):
    return [r for r in rectangles(x, y) if is_empty_rect(r, x)]


def marks_in_rect(rect, marks):
    """Multiplicity count of the given (col, row) markings inside rect."""
    cols = set(rect.cols)
    rows = set(rect.rows)
    return sum(1 for (c, r) in marks if c in cols and r in rows)


def exponent_from_counts(a2x, a2y, s2, x_count, o_count):
    """E^i_s from doubled Alexander data plus X/O counts of the region.

    Both defining formulas are computed; they must agree.
    """
    if s2 == MINUS_INF:
        return x_count
    if s2 == PLUS_INF:
        return o_count
    via_x = (max(s2 - a2x, 0) - max(s2 - a2y, 0)) // 2 + x_count
    via_o = (max(a2x - s2, 0) - max(a2y - s2, 0)) // 2 + o_count
    if via_x != via_o:
        raise NegativeExponent(
            "inconsistent exponent formulas (not a rectangle between "
            "valid generators)")
    if via_x < 0:
        raise NegativeExponent("negative U exponent")
    return via_x


class FloerContext:
    """Cached per-diagram data: gradings, marking lists, variables."""

    def __init__(self, g, linking=None):
        self.g = g
        self.calc = GradingCalculator(g, linking)
        self.linking = self.calc.linking
        self.vars = list(g.var_universe)
        self.var_index = {v: i for i, v in enumerate(self.vars)}
        self.comp_var_idx = [self.var_index[g.comp_var(i)]
                             for i in range(g.ell)]
        self.comp_marks = []
        for i in range(g.ell):
            oi = [(m.col, m.row) for m in g.o_markings(i)]
            xi = [(m.col, m.row) for m in g.x_markings(i)]
            self.comp_marks.append((oi, xi))
        # markings counted plainly, by multiplicity: free markings and
        # newly free ones (columns without a traced component)
        self.plain_marks = {}
        for c in range(g.n):
            if g.comp_of_col.get(c) is None:
                v = g.var_of_o[c]
                self.plain_marks.setdefault(v, []).append((c, g.o_row[c]))

    def alexander2(self, x):
        return self.calc.alexander2(x)

    def maslov(self, x):
        return self.calc.maslov(x)

    def mu2(self, x, s2):
        """Doubled grading mu_s(x); -infinity entries use the stated
        replacement max(A_i - s_i, 0) -> A_i."""
        a2 = self.alexander2(x)
        m2 = 2 * self.maslov(x)
        for i in range(self.g.ell):
            if s2[i] == MINUS_INF:
                m2 -= 2 * a2[i]
            elif s2[i] == PLUS_INF:
                pass
            else:
                m2 -= 2 * max(a2[i] - s2[i], 0)
        return m2

    def rect_exponents(self, rect, x, y, s2):
        """Exponent tuple over this diagram's variables for one rectangle."""
        exps = [0] * len(self.vars)
        a2x = self.alexander2(x)
        a2y = self.alexander2(y)
        for i in range(self.g.ell):
            oi, xi = self.comp_marks[i]
            e = exponent_from_counts(
                a2x[i], a2y[i], s2[i],
                marks_in_rect(rect, xi), marks_in_rect(rect, oi))
            exps[self.comp_var_idx[i]] += e
        for v, marks in self.plain_marks.items():
            exps[self.var_index[v]] += marks_in_rect(rect, marks)
        return tuple(exps)


def generators(n):
    return itertools.permutations(range(n))


def build_A_minus(g, s2, ctx=None):
    """The complex A^-(G, s) over the diagram's variables.

    ``s2`` is a tuple of doubled Alexander levels (ints or the infinity
    sentinels), one per component.
    """
    ctx = ctx or FloerContext(g)
    gens = list(generators(g.n))
    gr2 = [ctx.mu2(x, s2) for x in gens]
    cx = GradedComplexF2U(gens, gr2, ctx.vars)
    for xi, x in enumerate(gens):
        for cols in itertools.combinations(range(g.n), 2):
            c1, c2 = cols
            y = list(x)
            y[c1], y[c2] = y[c2], y[c1]
            y = tuple(y)
            for rect in empty_rectangles(x, y):
                exps = ctx.rect_exponents(rect, x, y, s2)
                cx.add_diff(xi, cx.index[y], exps)
    return cx


def hat_complex(cx, var_idx=None):
    """Set one free-marking variable to zero (the hat flavor)."""
    if var_idx is None:
        frees = [i for i, v in enumerate(cx.var_labels) if v[0] == 'f']
        if not frees:
            raise InfiniteExponent("no free variable to set to zero")
        var_idx = frees[0]
    return cx.set_var_zero(var_idx)
